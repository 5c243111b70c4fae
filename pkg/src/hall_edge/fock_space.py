"""Truncated second-quantized chiral mode algebra.

Fermionic modes a_m live on an integer window m = -M..M.  Explicit
matrices use the Jordan-Wigner encoding (mode -M is the leftmost
Kronecker factor):

    a_m = Z^{(m+M)} (x) sigma_minus (x) 1^{(rest)},   sigma_minus = [[0,1],[0,0]],

stored as complex128 CSR of dimension 2^(2M+1).  Windowed currents

    j_p = sum_n W(n) W(n+p) : a^dag_{n+p} a_n :

use sharp indicator windows W (value 1 at the edges |n| = M) and
normal ordering with respect to a diagonal quasi-free state whose
occupation is the sharp Fermi step (value 1/2 at m = 0) at zero
temperature or 1/(1 + e^{beta m}) at inverse temperature beta.  With
these conventions the commutator expectation

    <[j_p, j_{p'}]> = delta_{p+p',0} sum_k occ(k) W(k) W(k+p+p')
                      [W(k+p') - W(k+p)]

equals -p delta_{p+p',0} exactly (in floating point: every term is a
product of small half-integers) for 1 <= |p| <= M, which is the
finite-window seed of the chiral current algebra.

Expectations of up to four normal-ordered bilinears are evaluated by
Wick contraction (Pfaffian pairing); small windows (2M+1 <= 13 modes)
additionally support the explicit matrix route so the two can be
compared digit for digit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from .errors import (
    ModeIndexError,
    PreconditionError,
    ResourceLimitError,
    UnsupportedOrderError,
)

__all__ = [
    "ModeWindow",
    "QuasiFreeState",
    "FockOperator",
    "window_indicator",
    "build_mode_operator",
    "build_current",
    "state_probabilities",
    "fock_expectation",
    "wick_expectation",
    "current_two_point",
    "commutator_central_term",
    "double_commutator_norm",
    "variance_tail",
    "variance_tail_bound",
    "exact_vs_wick",
    "MAX_MATRIX_MODES",
]

# Largest mode count for which explicit 2^N matrices are allowed.
MAX_MATRIX_MODES = 13


@dataclass(frozen=True)
class ModeWindow:
    """Symmetric integer mode window m = -half_width .. half_width."""

    half_width: int

    def __post_init__(self):
        if self.half_width < 0:
            raise PreconditionError("window half-width must be non-negative")

    @property
    def num_modes(self) -> int:
        return 2 * self.half_width + 1

    @property
    def dim(self) -> int:
        return 1 << self.num_modes

    def modes(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)

    def contains(self, m: int) -> bool:
        return abs(m) <= self.half_width

    def index(self, m: int) -> int:
        if not self.contains(m):
            raise ModeIndexError(
                f"mode {m} outside window |m| <= {self.half_width}"
            )
        return m + self.half_width

    def indicator(self, m) -> np.ndarray:
        """Sharp window indicator W(m), 1 on |m| <= half_width (edges included)."""
        return np.where(np.abs(np.asarray(m)) <= self.half_width, 1.0, 0.0)


def window_indicator(m, half_width: int):
    """Sharp indicator of |m| <= half_width as float (1 at the edges)."""
    return np.where(np.abs(np.asarray(m)) <= half_width, 1.0, 0.0)


@dataclass(frozen=True)
class QuasiFreeState:
    """Diagonal quasi-free state fixed by its mode occupation function.

    beta = inf is the zero-temperature Fermi step (occupation 1 below the
    edge, 1/2 at m = 0, 0 above); finite beta >= 0 is the KMS occupation
    1/(1 + e^{beta m}).
    """

    beta: float = math.inf

    def __post_init__(self):
        if self.beta < 0:
            raise PreconditionError("inverse temperature must be non-negative")

    @classmethod
    def ground(cls) -> "QuasiFreeState":
        return cls(math.inf)

    @classmethod
    def kms(cls, beta: float) -> "QuasiFreeState":
        return cls(float(beta))

    def occupation(self, m):
        m = np.asarray(m)
        if math.isinf(self.beta):
            out = np.where(m < 0, 1.0, np.where(m > 0, 0.0, 0.5))
        else:
            out = expit(-self.beta * m.astype(float))
        if out.ndim == 0:
            return float(out)
        return out

    def hole(self, m):
        """1 - occupation(m), computed as occupation(-m) (exact complement)."""
        return self.occupation(-np.asarray(m))


def _sigma_minus() -> sp.csr_matrix:
    return sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))


def _pauli_z() -> sp.csr_matrix:
    return sp.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex))


@lru_cache(maxsize=4)
def _lowering_operators(half_width: int) -> tuple:
    """All annihilation matrices a_m, m = -M..M, in Jordan-Wigner form."""
    n = 2 * half_width + 1
    if n > MAX_MATRIX_MODES:
        raise ResourceLimitError(
            f"{n} modes exceed the explicit-matrix limit of {MAX_MATRIX_MODES}"
        )
    sm = _sigma_minus()
    z = _pauli_z()
    eye = sp.identity(1, format="csr", dtype=complex)
    z_chain = [eye]
    i_chain = [eye]
    for _ in range(n):
        z_chain.append(sp.kron(z_chain[-1], z, format="csr"))
        i_chain.append(sp.kron(i_chain[-1], sp.identity(2, format="csr", dtype=complex), format="csr"))
    ops = []
    for j in range(n):
        op = sp.kron(sp.kron(z_chain[j], sm, format="csr"), i_chain[n - 1 - j], format="csr")
        op.sum_duplicates()
        ops.append(op)
    return tuple(ops)


@dataclass(frozen=True)
class FockOperator:
    """A sparse operator tied to the mode window it was built on."""

    matrix: sp.csr_matrix
    window: ModeWindow

    def dagger(self) -> "FockOperator":
        return FockOperator(self.matrix.conjugate().transpose().tocsr(), self.window)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        if other.window != self.window:
            raise PreconditionError("operators live on different windows")
        return FockOperator((self.matrix @ other.matrix).tocsr(), self.window)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        if other.window != self.window:
            raise PreconditionError("operators live on different windows")
        return FockOperator((self.matrix + other.matrix).tocsr(), self.window)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        if other.window != self.window:
            raise PreconditionError("operators live on different windows")
        return FockOperator((self.matrix - other.matrix).tocsr(), self.window)


def build_mode_operator(kind: str, m: int, window: ModeWindow) -> FockOperator:
    """Annihilation or creation matrix for mode m on the window."""
    idx = window.index(m)
    ops = _lowering_operators(window.half_width)
    if kind == "annihilate":
        return FockOperator(ops[idx], window)
    if kind == "create":
        return FockOperator(ops[idx].conjugate().transpose().tocsr(), window)
    raise PreconditionError(f"unknown operator kind {kind!r}")


def state_probabilities(window: ModeWindow, state: QuasiFreeState) -> np.ndarray:
    """Diagonal weights of the product density matrix in the JW basis.

    The quasi-free state is the tensor product over modes of
    diag(1 - occ(m), occ(m)); mode -M is the leftmost (most significant)
    factor, matching the operator encoding.
    """
    probs = np.array([1.0])
    for m in window.modes():
        occ = state.occupation(m)
        probs = np.kron(probs, np.array([1.0 - occ, occ]))
    return probs


def fock_expectation(op: FockOperator, state: QuasiFreeState) -> complex:
    """Expectation tr(rho X) in the diagonal quasi-free state."""
    probs = state_probabilities(op.window, state)
    return complex(np.dot(probs, op.matrix.diagonal()))


def build_current(p: int, window: ModeWindow, state: QuasiFreeState) -> FockOperator:
    """Windowed normal-ordered current j_p as an explicit matrix.

    j_p = sum_n W(n) W(n+p) : a^dag_{n+p} a_n :, normal ordering taken
    with respect to the given state (only the p = 0 diagonal picks up a
    subtraction).  Momenta with |p| > 2 half_width give the zero operator.
    """
    M = window.half_width
    mat = sp.csr_matrix((window.dim, window.dim), dtype=complex)
    ops = _lowering_operators(M)
    shift = 0.0
    for n in window.modes():
        if not window.contains(n + p):
            continue
        mat = mat + ops[window.index(n + p)].conjugate().transpose() @ ops[window.index(n)]
        if p == 0:
            shift += state.occupation(n)
    if p == 0 and shift:
        mat = mat - shift * sp.identity(window.dim, format="csr", dtype=complex)
    return FockOperator(mat.tocsr(), window)


# ---------------------------------------------------------------------------
# Wick contraction


def _contraction(op_a, op_b, state: QuasiFreeState) -> float:
    """Two-point function <op_a op_b> of elementary operators.

    Operators are (is_create, mode) pairs.  In a diagonal quasi-free
    state only <a^dag_m a_m> = occ(m) and <a_m a^dag_m> = 1 - occ(m)
    survive.
    """
    create_a, mode_a = op_a
    create_b, mode_b = op_b
    if mode_a != mode_b or create_a == create_b:
        return 0.0
    if create_a:
        return state.occupation(mode_a)
    return state.occupation(-mode_a)


def _pfaffian_pairing(ops: list, state: QuasiFreeState) -> float:
    """Sum over complete pairings with fermionic signs (first-row expansion)."""
    if not ops:
        return 1.0
    total = 0.0
    first, rest = ops[0], ops[1:]
    sign = 1.0
    for j, other in enumerate(rest):
        c = _contraction(first, other, state)
        if c != 0.0:
            total += sign * c * _pfaffian_pairing(rest[:j] + rest[j + 1:], state)
        sign = -sign
    return total


def wick_expectation(bilinears, state: QuasiFreeState) -> complex:
    """Expectation of a product of fermion bilinears by Wick's theorem.

    Each bilinear is (create_mode, annihilate_mode, normal_ordered); the
    product is taken left to right.  Normal ordering subtracts the
    state expectation of that bilinear, handled by inclusion-exclusion
    before the Pfaffian pairing of the remaining elementary operators.
    At most four bilinears are supported.
    """
    bilinears = list(bilinears)
    if len(bilinears) > 4:
        raise UnsupportedOrderError(
            "wick_expectation supports at most four bilinears"
        )
    flagged = [
        i
        for i, (c, a, normal) in enumerate(bilinears)
        if normal and c == a  # <a^dag_c a_a> = 0 unless c == a
    ]
    total = 0.0
    for r in range(len(flagged) + 1):
        for subset in combinations(flagged, r):
            coeff = 1.0
            for i in subset:
                coeff *= -state.occupation(bilinears[i][0])
            ops = []
            for i, (c, a, _normal) in enumerate(bilinears):
                if i in subset:
                    continue
                ops.append((True, c))
                ops.append((False, a))
            total += coeff * _pfaffian_pairing(ops, state)
    return complex(total)


# ---------------------------------------------------------------------------
# Current correlations


def current_two_point(p: int, p_prime: int, window: ModeWindow, state: QuasiFreeState) -> complex:
    """<j_p j_{-p'}> in the quasi-free state.

    Mode bookkeeping forces p = p' (each creation index must meet its
    matching annihilation index); the surviving contraction is

        sum_n occ(n+p) (1 - occ(n)) W(n) W(n+p).

    At zero temperature this is -p for -M <= p < 0, zero for p > 0, and
    1/4 at p = 0 (the variance of the half-filled edge mode).
    """
    if p != p_prime:
        return 0.0 + 0.0j
    M = window.half_width
    ns = np.arange(max(-M, -M - p), min(M, M - p) + 1)
    if ns.size == 0:
        return 0.0 + 0.0j
    vals = state.occupation(ns + p) * state.occupation(-ns)
    return complex(math.fsum(np.atleast_1d(vals).tolist()))


def commutator_central_term(p: int, p_prime: int, window: ModeWindow, state: QuasiFreeState) -> complex:
    """Expectation of the current commutator, <[j_p, j_{p'}]>.

    Evaluates delta_{p+p',0} sum_k occ(k) W(k) W(k+p+p')
    [W(k+p') - W(k+p)].  Every term is a half-integer product, so the
    result is floating-point exact; for 1 <= |p| <= M at zero
    temperature it equals -p.
    """
    if p + p_prime != 0:
        return 0.0 + 0.0j
    M = window.half_width
    k = window.modes()
    w = window.indicator
    coeff = w(k + p + p_prime) * (w(k + p_prime) - w(k + p))
    return complex(float(np.dot(state.occupation(k), coeff)))


def double_commutator_norm(p: int, p_prime: int, k: int, window: ModeWindow) -> float:
    """Magnitude of the double-commutator window kernel at mode k.

    |W(k) W(k+p+p') [W(k+p') - W(k+p)]|, always 0 or 1: the repeated
    commutator stays uniformly bounded as the window grows.
    """
    w = window.indicator
    return float(abs(w(k) * w(k + p + p_prime) * (w(k + p_prime) - w(k + p))))


def variance_tail(
    p: int,
    outer_half_width: int,
    inner_half_width: int,
    state: QuasiFreeState,
) -> float:
    """Variance of the current difference between two window sizes.

    For windows M = outer >= inner = M' >= |p|, the difference
    d = j_p^{(M)} - j_p^{(M')} has

        <d d^dag> = sum_n occ(n+p) (1 - occ(n)) R_n,
        R_n = W_M(n) W_M(n+p) - W_{M'}(n) W_{M'}(n+p)  in {0, 1},

    supported entirely on modes near the window edges, so it is
    exponentially small in beta * M' for KMS states.
    """
    if inner_half_width < abs(p):
        raise PreconditionError("inner window must cover the momentum transfer")
    if outer_half_width < inner_half_width:
        raise PreconditionError("outer window must contain the inner window")
    lo = -outer_half_width - abs(p)
    hi = outer_half_width + abs(p)
    ns = np.arange(lo, hi + 1)
    w_out = window_indicator(ns, outer_half_width) * window_indicator(ns + p, outer_half_width)
    w_in = window_indicator(ns, inner_half_width) * window_indicator(ns + p, inner_half_width)
    r = w_out - w_in
    vals = state.occupation(ns + p) * state.occupation(-ns) * r
    return float(math.fsum(np.atleast_1d(vals).tolist()))


def variance_tail_bound(
    p: int,
    outer_half_width: int,
    inner_half_width: int,
    state: QuasiFreeState,
) -> float:
    """Closed-form upper bound on :func:`variance_tail`.

    sum_{n = M'-|p|}^{M-|p|} (1+e^{-beta n})^{-1} (1+e^{beta(n+p)})^{-1},
    the KMS product summed over the edge strip.  The leading strip term
    dominates the doubled geometric tail of the true variance whenever
    beta >= ln 2.
    """
    ns = np.arange(inner_half_width - abs(p), outer_half_width - abs(p) + 1)
    if ns.size == 0:
        return 0.0
    terms = state.occupation(-ns) * state.occupation(ns + p)
    return float(math.fsum(np.atleast_1d(terms).tolist()))


def exact_vs_wick(
    p: int,
    p_prime: int,
    window: ModeWindow,
    state: QuasiFreeState,
) -> tuple[complex, complex]:
    """<j_p j_{p'}> by explicit matrices and by Wick contraction.

    The matrix route multiplies the two current matrices and traces
    against the product density; the Wick route reduces the double mode
    sum exactly (index matching forces p' = -p) and evaluates each term
    with :func:`wick_expectation`.  Restricted to windows small enough
    for explicit matrices.
    """
    j1 = build_current(p, window, state)
    j2 = build_current(p_prime, window, state)
    matrix_value = fock_expectation(j1 @ j2, state)

    wick_value = 0.0 + 0.0j
    if p_prime == -p:
        M = window.half_width
        for n in range(max(-M, -M - p), min(M, M - p) + 1):
            wick_value += wick_expectation(
                [(n + p, n, True), (n, n + p, True)], state
            )
    return matrix_value, wick_value
