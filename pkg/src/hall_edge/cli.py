"""Command line front end.

Each subcommand maps onto one library entry point and emits a flat list
of records, as JSON ({"records": [...], "metadata": {...}}) or CSV
(records only; complex fields split into name_re/name_im columns).
Floats are written with 17 significant digits so values round-trip
exactly; complex numbers become {"re": ..., "im": ...} objects.

Parameters come from flags, from a JSON --config file, or from their
defaults, in that order of precedence.  Unknown config keys are
rejected.  Failures exit with a structured error record on stderr and
a stable exit code:

    0  success
    2  configuration or usage error
    3  invalid input (precondition violations)
    4  accuracy target not met
    5  resource limit exceeded
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bosonization, fock_space, laughlin, single_particle
from .errors import (
    AccuracyError,
    ConfigError,
    PreconditionError,
    ResourceLimitError,
)

__all__ = ["main"]


# ---------------------------------------------------------------------------
# JSON emission with round-tripping floats


def _format_real(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def _dump(obj, level: int) -> str:
    pad = "  " * level
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_real(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return '{"re": %s, "im": %s}' % (_format_real(z.real), _format_real(z.imag))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        inner = ",\n".join(pad + "  " + _dump(v, level + 1) for v in seq)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            pad + "  " + json.dumps(str(k)) + ": " + _dump(v, level + 1)
            for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_dumps(obj) -> str:
    return _dump(obj, 0)


def _csv_number(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(float(x), ".17g")


def csv_text(records: list) -> str:
    columns: list[str] = []
    for rec in records:
        for key, val in rec.items():
            names = (
                (key + "_re", key + "_im")
                if isinstance(val, (complex, np.complexfloating))
                else (key,)
            )
            for name in names:
                if name not in columns:
                    columns.append(name)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        cells = {}
        for key, val in rec.items():
            if isinstance(val, (complex, np.complexfloating)):
                z = complex(val)
                cells[key + "_re"] = _csv_number(z.real)
                cells[key + "_im"] = _csv_number(z.imag)
            elif isinstance(val, (bool, np.bool_)):
                cells[key] = "true" if val else "false"
            elif isinstance(val, (int, np.integer)):
                cells[key] = str(int(val))
            elif isinstance(val, (float, np.floating)):
                cells[key] = _csv_number(float(val))
            elif val is None:
                cells[key] = ""
            else:
                cells[key] = str(val)
        writer.writerow([cells.get(c, "") for c in columns])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Parameter parsing shared by flags and config files


def _as_float(value) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        word = value.strip().lower()
        if word in ("inf", "+inf", "infinity"):
            return math.inf
        if word in ("-inf", "-infinity"):
            return -math.inf
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"expected a number, got {value!r}") from None
    raise ConfigError(f"expected a number, got {value!r}")


def _as_int(value) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"expected an integer, got {value!r}")
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, float):
        if value != int(value):
            raise ConfigError(f"expected an integer, got {value!r}")
        return int(value)
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            pass
        return _as_int(_as_float(value))
    raise ConfigError(f"expected an integer, got {value!r}")


def _as_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str):
        word = value.strip().lower()
        if word in ("true", "1", "yes"):
            return True
        if word in ("false", "0", "no"):
            return False
    raise ConfigError(f"expected a boolean, got {value!r}")


def _as_str(value) -> str:
    if isinstance(value, str):
        return value
    raise ConfigError(f"expected a string, got {value!r}")


def _as_float_list(value) -> tuple:
    if isinstance(value, str):
        parts = [p for p in value.split(",") if p.strip()]
        return tuple(_as_float(p) for p in parts)
    if isinstance(value, (list, tuple)):
        return tuple(_as_float(v) for v in value)
    return (_as_float(value),)


def _as_complex(value) -> complex:
    if isinstance(value, dict):
        extra = set(value) - {"re", "im"}
        if extra:
            raise ConfigError(f"unknown complex fields {sorted(extra)}")
        return complex(_as_float(value.get("re", 0.0)), _as_float(value.get("im", 0.0)))
    if isinstance(value, str):
        try:
            return complex(value.strip().replace(" ", ""))
        except ValueError:
            raise ConfigError(f"expected a complex number, got {value!r}") from None
    if isinstance(value, (int, float)):
        return complex(value)
    raise ConfigError(f"expected a complex number, got {value!r}")


def _as_complex_list(value) -> tuple:
    if isinstance(value, str):
        parts = [p for p in value.split(",") if p.strip()]
        return tuple(_as_complex(p) for p in parts)
    if isinstance(value, (list, tuple)):
        return tuple(_as_complex(v) for v in value)
    return (_as_complex(value),)


def _as_choice(*options):
    def parse(value):
        word = _as_str(value)
        if word not in options:
            raise ConfigError(f"expected one of {options}, got {word!r}")
        return word

    return parse


def _as_grid(value) -> tuple:
    word = _as_str(value)
    parts = word.split(":")
    if len(parts) != 3:
        raise ConfigError("grid must be written as min:max:num")
    lo, hi = _as_float(parts[0]), _as_float(parts[1])
    num = _as_int(parts[2])
    if num < 2:
        raise ConfigError("grid needs at least two points per axis")
    return lo, hi, num


def _as_index_pair(value) -> tuple:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return _as_int(value[0]), _as_int(value[1])
    word = _as_str(value)
    parts = word.split(",")
    if len(parts) != 2:
        raise ConfigError("expected a pair i,j")
    return _as_int(parts[0]), _as_int(parts[1])


_REQUIRED = object()


@dataclass(frozen=True)
class Field:
    parse: object
    default: object = _REQUIRED
    help: str = ""
    boolean: bool = False


SCHEMAS: dict = {
    "spectrum": {
        "b_field": Field(_as_float, help="magnetic field strength B"),
        "trap_strength": Field(_as_float, help="harmonic trap curvature E"),
        "max_fast": Field(_as_int, 3, "largest fast quantum number"),
        "max_slow": Field(_as_int, 5, "largest slow quantum number"),
    },
    "wavefunction": {
        "b_field": Field(_as_float, help="magnetic field strength B"),
        "trap_strength": Field(_as_float, help="harmonic trap curvature E"),
        "fast_index": Field(_as_int, 0, "fast quantum number n"),
        "slow_index": Field(_as_int, 0, "slow quantum number m"),
        "x1": Field(_as_float, None, "first coordinate of a single point"),
        "x2": Field(_as_float, None, "second coordinate of a single point"),
        "grid": Field(_as_grid, None, "square grid min:max:num on both axes"),
    },
    "density": {
        "b_field": Field(_as_float, help="magnetic field strength B"),
        "trap_strength": Field(_as_float, 0.0, "harmonic trap curvature E"),
        "max_slow": Field(_as_int, 100, "truncation of the slow-mode sum"),
        "r_max": Field(_as_float, 3.0, "largest radius sampled"),
        "num_points": Field(_as_int, 64, "number of radial samples"),
    },
    "dynamics": {
        "b_field": Field(_as_float, help="magnetic field strength B"),
        "trap_strength": Field(_as_float, help="harmonic trap curvature E"),
        "x1": Field(_as_float, help="initial x1"),
        "x2": Field(_as_float, help="initial x2"),
        "p1": Field(_as_float, help="initial p1"),
        "p2": Field(_as_float, help="initial p2"),
        "t_final": Field(_as_float, help="final time"),
        "num_samples": Field(_as_int, 256, "number of samples on [0, t_final]"),
        "method": Field(_as_choice("analytic", "rk4"), "analytic", "integrator"),
        "step": Field(_as_float, None, "rk4 step (default: fast period / 400)"),
    },
    "current-algebra": {
        "quantity": Field(
            _as_choice("central", "two-point", "variance-tail", "double-commutator"),
            help="which current-algebra quantity to evaluate",
        ),
        "half_width": Field(_as_int, help="mode window half-width M"),
        "momentum": Field(_as_int, help="momentum transfer p"),
        "momentum_prime": Field(_as_int, None, "second momentum (default -p)"),
        "wavevector": Field(_as_int, None, "mode index k for double-commutator"),
        "beta": Field(_as_float, math.inf, "inverse temperature (inf = ground)"),
        "inner_half_width": Field(_as_int, None, "inner window M' for variance-tail"),
        "m_prime_frac": Field(
            _as_float, 0.5, "inner window as a fraction of M when M' is omitted"
        ),
    },
    "correlator": {
        "charges": Field(_as_float_list, help="vertex charges, comma separated"),
        "angles": Field(_as_float_list, help="insertion angles, comma separated"),
        "eps": Field(_as_float, help="mode damping scale"),
        "series_cutoff": Field(_as_int, None, "truncate the pair propagator series"),
        "brute_force": Field(
            _as_bool, False, "also evaluate by explicit mode-space operators",
            boolean=True,
        ),
        "num_modes": Field(_as_int, 100, "brute force: number of boson modes"),
        "max_occupation": Field(_as_int, 15, "brute force: occupation cutoff per mode"),
        "budget": Field(
            _as_int,
            bosonization.DEFAULT_BRUTE_FORCE_BUDGET,
            "brute force: largest allowed mode count * matrix size",
        ),
    },
    "anyon": {
        "nu": Field(_as_int, help="statistics exponent"),
        "xs": Field(_as_float_list, help="right insertion points, comma separated"),
        "ys": Field(_as_float_list, help="left insertion points, comma separated"),
        "eps": Field(_as_float, help="smoothing scale"),
        "determinant": Field(
            _as_bool, False, "include the determinant cross-check (nu = 1)",
            boolean=True,
        ),
        "exchange_pair": Field(_as_index_pair, None, "swap indices i,j for the phase"),
    },
    "laughlin": {
        "nu": Field(_as_int, help="Jastrow exponent"),
        "poles": Field(_as_complex_list, help="pole positions, e.g. -0.9-0.6j,0.5-1.1j"),
        "xs": Field(_as_float_list, help="particle coordinates, comma separated"),
        "eps": Field(_as_float, 0.0, "pole smoothing"),
        "beta": Field(_as_float, math.inf, "inverse temperature (inf = zero-T)"),
        "oracle": Field(
            _as_bool, False, "compare against the contour-representation quadrature",
            boolean=True,
        ),
        "nodes_per_dim": Field(_as_int, 160, "quadrature nodes per dimension"),
    },
}


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    return raw


def resolve_params(command: str, cli_values: dict, config: dict, overrides=None) -> dict:
    schema = SCHEMAS[command]
    unknown = set(config) - set(schema)
    if unknown:
        raise ConfigError(
            f"unknown config keys for {command}: {', '.join(sorted(unknown))}"
        )
    overrides = overrides or {}
    params = {}
    for name, field in schema.items():
        if name in overrides:
            params[name] = field.parse(overrides[name])
        elif cli_values.get(name) is not None:
            params[name] = field.parse(cli_values[name])
        elif name in config:
            params[name] = field.parse(config[name])
        elif field.default is _REQUIRED:
            flag = "--" + name.replace("_", "-")
            raise ConfigError(f"missing required parameter {flag} for {command}")
        else:
            params[name] = field.default
    return params


# ---------------------------------------------------------------------------
# Commands


def _cmd_spectrum(params):
    config = single_particle.effective_field(params["b_field"], params["trap_strength"])
    ground = single_particle.ground_state_energy(config)
    records = []
    for n in range(params["max_fast"] + 1):
        for m in range(params["max_slow"] + 1):
            excitation = single_particle.spectrum(n, m, config)
            records.append(
                {
                    "fast_index": n,
                    "slow_index": m,
                    "excitation": excitation,
                    "energy": excitation + ground,
                }
            )
    meta = {
        "omega_fast": config.omega_fast,
        "omega_slow": config.omega_slow,
        "ground_energy": ground,
    }
    return records, meta


def _cmd_wavefunction(params):
    config = single_particle.effective_field(params["b_field"], params["trap_strength"])
    n, m = params["fast_index"], params["slow_index"]
    if params["grid"] is not None:
        if params["x1"] is not None or params["x2"] is not None:
            raise ConfigError("give either --grid or a point, not both")
        lo, hi, num = params["grid"]
        axis = np.linspace(lo, hi, num)
        x1, x2 = np.meshgrid(axis, axis, indexing="ij")
        psi = single_particle.eval_wavefunction(n, m, config, x1, x2)
        records = [
            {
                "x1": float(a),
                "x2": float(b),
                "psi": complex(v),
                "abs2": float(abs(v) ** 2),
            }
            for a, b, v in zip(x1.ravel(), x2.ravel(), np.asarray(psi).ravel())
        ]
    elif params["x1"] is not None and params["x2"] is not None:
        v = single_particle.eval_wavefunction(n, m, config, params["x1"], params["x2"])
        records = [
            {
                "x1": params["x1"],
                "x2": params["x2"],
                "psi": complex(v),
                "abs2": float(abs(v) ** 2),
            }
        ]
    else:
        raise ConfigError("need either --grid or both --x1 and --x2")
    meta = {
        "excitation": single_particle.spectrum(n, m, config),
        "ground_energy": single_particle.ground_state_energy(config),
    }
    return records, meta


def _cmd_density(params):
    config = single_particle.effective_field(params["b_field"], params["trap_strength"])
    rs = np.linspace(0.0, params["r_max"], params["num_points"])
    truncated = np.asarray(
        single_particle.lll_density(params["max_slow"], config, rs, 0.0)
    )
    closed = np.asarray(
        single_particle.lll_density_closed_form(params["max_slow"], config, rs, 0.0)
    )
    records = [
        {
            "r": float(r),
            "truncated": float(t),
            "closed_form": float(c),
            "difference": float(t - c),
        }
        for r, t, c in zip(rs, truncated, closed)
    ]
    meta = {"saturation": config.effective_field / (2.0 * math.pi)}
    return records, meta


def _cmd_dynamics(params):
    config = single_particle.effective_field(params["b_field"], params["trap_strength"])
    point = single_particle.PhasePoint(
        params["x1"], params["x2"], params["p1"], params["p2"]
    )
    times, states = single_particle.sample_trajectory(
        point,
        config,
        params["t_final"],
        params["num_samples"],
        method=params["method"],
        step=params["step"],
    )
    records = []
    for t, row in zip(times, states):
        sampled = single_particle.PhasePoint(*row)
        records.append(
            {
                "t": float(t),
                "x1": float(row[0]),
                "x2": float(row[1]),
                "p1": float(row[2]),
                "p2": float(row[3]),
                "energy": single_particle.hamiltonian(sampled, config),
            }
        )
    meta = {
        "omega_fast": config.omega_fast,
        "omega_slow": config.omega_slow,
        "method": params["method"],
    }
    return records, meta


def _cmd_current_algebra(params):
    quantity = params["quantity"]
    window = fock_space.ModeWindow(params["half_width"])
    state = fock_space.QuasiFreeState(params["beta"])
    p = params["momentum"]
    p_prime = params["momentum_prime"]
    if p_prime is None:
        p_prime = -p
    if quantity == "central":
        value = fock_space.commutator_central_term(p, p_prime, window, state)
        rec = {
            "p": p,
            "p_prime": p_prime,
            "half_width": params["half_width"],
            "value": value,
        }
    elif quantity == "two-point":
        value = fock_space.current_two_point(p, p_prime, window, state)
        rec = {
            "p": p,
            "p_prime": p_prime,
            "half_width": params["half_width"],
            "value": value,
        }
    elif quantity == "variance-tail":
        inner = params["inner_half_width"]
        if inner is None:
            inner = max(abs(p), round(params["m_prime_frac"] * params["half_width"]))
        value = fock_space.variance_tail(p, params["half_width"], inner, state)
        bound = fock_space.variance_tail_bound(p, params["half_width"], inner, state)
        rec = {
            "p": p,
            "outer_half_width": params["half_width"],
            "inner_half_width": inner,
            "value": value,
            "bound": bound,
        }
    else:
        if params["wavevector"] is None:
            raise ConfigError("--wavevector is required for double-commutator")
        norm = fock_space.double_commutator_norm(
            p, p_prime, params["wavevector"], window
        )
        rec = {
            "p": p,
            "p_prime": p_prime,
            "k": params["wavevector"],
            "half_width": params["half_width"],
            "norm": norm,
        }
    return [rec], {}


def _cmd_correlator(params):
    spec = bosonization.CorrelatorSpec(
        tuple(params["charges"]), tuple(params["angles"]), params["eps"]
    )
    full = bosonization.vertex_n_point_full(spec, params["series_cutoff"])
    rec = {
        "value": full.value,
        "total_charge": full.total_charge,
        "neutral": full.neutral,
        "prefactor_order": full.prefactor_order,
        "vanishing_order": full.vanishing_order,
    }
    if params["brute_force"]:
        brute = bosonization.brute_force_vertex(
            spec,
            params["num_modes"],
            params["max_occupation"],
            budget=params["budget"],
        )
        rec["brute_force"] = brute
        rec["abs_difference"] = abs(brute - full.value)
    return [rec], {}


def _cmd_anyon(params):
    spec = bosonization.AnyonSpec(
        params["nu"], tuple(params["xs"]), tuple(params["ys"]), params["eps"]
    )
    rec = {"nu": params["nu"], "value": bosonization.anyon_2n_point(spec)}
    if params["determinant"]:
        rec["determinant"] = bosonization.kernel_determinant(spec)
    if params["exchange_pair"] is not None:
        i, j = params["exchange_pair"]
        rec["exchange_phase"] = bosonization.exchange_phase(spec, i, j)
    return [rec], {}


def _cmd_laughlin(params):
    spec = laughlin.SlaterSpec(params["nu"], tuple(params["poles"]), params["eps"])
    xs = tuple(params["xs"])
    beta = params["beta"]
    if math.isinf(beta):
        value = laughlin.laughlin_closed_form(spec, xs)
    else:
        value = laughlin.finite_temperature_wavefunction(spec, xs, beta)
    rec = {
        "value": value,
        "log_abs": laughlin.finite_temperature_log_abs(spec, xs, beta),
    }
    if params["oracle"]:
        if not math.isinf(beta):
            raise ConfigError("--oracle runs at zero temperature (beta = inf)")
        if value == 0:
            raise PreconditionError("closed form vanishes; quadrature ratio undefined")
        budget = laughlin.QuadratureBudget(nodes_per_dim=params["nodes_per_dim"])
        quad = laughlin.wavefunction_from_correlator(spec, xs, budget)
        expected = laughlin.RESIDUE_FACTOR ** len(xs)
        ratio = quad / value
        rec["quadrature"] = quad
        rec["ratio"] = ratio
        rec["expected_ratio"] = expected
        rec["ratio_deviation"] = abs(ratio - expected) / abs(expected)
    return [rec], {}


COMPUTE = {
    "spectrum": _cmd_spectrum,
    "wavefunction": _cmd_wavefunction,
    "density": _cmd_density,
    "dynamics": _cmd_dynamics,
    "current-algebra": _cmd_current_algebra,
    "correlator": _cmd_correlator,
    "anyon": _cmd_anyon,
    "laughlin": _cmd_laughlin,
}


# ---------------------------------------------------------------------------
# Sweep


def _parse_range(text: str, schema: dict):
    if "=" not in text:
        raise ConfigError("range must be written as name=start:stop:num or name=v1,v2")
    name, _, rest = text.partition("=")
    name = name.strip().replace("-", "_")
    if name not in schema:
        raise ConfigError(f"cannot sweep unknown parameter {name!r}")
    rest = rest.strip()
    if not rest:
        raise ConfigError(f"empty value list for swept parameter {name!r}")
    if ":" in rest:
        parts = rest.split(":")
        if len(parts) != 3:
            raise ConfigError("range must be written as name=start:stop:num")
        start, stop = _as_float(parts[0]), _as_float(parts[1])
        num = _as_int(parts[2])
        if num < 1:
            raise ConfigError("range needs at least one point")
        values = [float(v) for v in np.linspace(start, stop, num)]
    else:
        values = [tok for tok in rest.split(",") if tok.strip()]
    return name, values


def _thread_count() -> int:
    raw = os.environ.get("HALL_EDGE_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        count = int(raw)
    except ValueError:
        raise ConfigError(f"HALL_EDGE_THREADS must be an integer, got {raw!r}") from None
    if count < 1:
        raise ConfigError("HALL_EDGE_THREADS must be at least 1")
    return count


def _cmd_sweep(ns):
    target = ns.target
    if target not in COMPUTE:
        raise ConfigError(f"unknown sweep target {target!r}")
    ranges = [_parse_range(text, SCHEMAS[target]) for text in (ns.range or [])]
    if not ranges:
        raise ConfigError("sweep needs at least one --range")
    if len(ranges) > 2:
        raise ConfigError("sweep supports at most two --range parameters")
    names = [name for name, _ in ranges]
    if len(set(names)) != len(names):
        raise ConfigError("swept parameters must be distinct")

    target_parser = _build_command_parser(target)
    target_ns = target_parser.parse_args(ns.target_args)
    cli_values = {name: getattr(target_ns, name) for name in SCHEMAS[target]}
    config = _load_config(ns.config)

    combos = list(itertools.product(*[values for _, values in ranges]))

    def run(combo):
        overrides = dict(zip(names, combo))
        params = resolve_params(target, cli_values, config, overrides)
        records, _ = COMPUTE[target](params)
        swept = {name: params[name] for name in names}
        return [{**swept, **rec} for rec in records]

    threads = _thread_count()
    records = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(run, combo) for combo in combos]
        for future in futures:
            records.extend(future.result())
    meta = {
        "target": target,
        "swept": names,
        "combinations": len(combos),
        "threads": threads,
    }
    shown = {"target": target, "ranges": list(ns.range)}
    return records, meta, shown


# ---------------------------------------------------------------------------
# Plots


def _render_plot(command: str, records: list, params: dict, path: str):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    if command == "spectrum":
        by_fast: dict = {}
        for rec in records:
            by_fast.setdefault(rec["fast_index"], []).append(rec)
        for n, rows in sorted(by_fast.items()):
            ax.plot(
                [r["slow_index"] for r in rows],
                [r["energy"] for r in rows],
                marker="o",
                label=f"n = {n}",
            )
        ax.set_xlabel("slow index m")
        ax.set_ylabel("energy")
        ax.legend()
    elif command == "density":
        rs = [r["r"] for r in records]
        ax.plot(rs, [r["truncated"] for r in records], label="truncated")
        ax.plot(rs, [r["closed_form"] for r in records], "--", label="closed form")
        ax.set_xlabel("r")
        ax.set_ylabel("density")
        ax.legend()
    elif command == "dynamics":
        ax.plot([r["x1"] for r in records], [r["x2"] for r in records], lw=0.8)
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
        ax.set_aspect("equal")
    elif command == "wavefunction":
        sc = ax.scatter(
            [r["x1"] for r in records],
            [r["x2"] for r in records],
            c=[r["abs2"] for r in records],
            s=12,
        )
        fig.colorbar(sc, ax=ax, label="|psi|^2")
        ax.set_xlabel("x1")
        ax.set_ylabel("x2")
        ax.set_aspect("equal")
    else:
        plt.close(fig)
        raise RuntimeError(f"no plot renderer for command {command!r}")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    summary = " ".join(f"{k}={v}" for k, v in params.items()).replace("--", "- -")
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(f"<!-- hall-edge {command} {summary} -->\n")


# ---------------------------------------------------------------------------
# Parser assembly and entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _add_common(parser):
    parser.add_argument("--config", default=None, help="JSON file with parameters")
    parser.add_argument(
        "--format", default="json", choices=["json", "csv"], help="output format"
    )
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--plot", default=None, help="write an SVG plot here")


def _populate_schema_flags(parser, command):
    for name, field in SCHEMAS[command].items():
        flag = "--" + name.replace("_", "-")
        if field.boolean:
            parser.add_argument(flag, action="store_true", default=None, help=field.help)
        else:
            parser.add_argument(flag, default=None, metavar="V", help=field.help)


def _build_command_parser(command):
    parser = _Parser(prog=f"hall-edge {command}")
    _add_common(parser)
    _populate_schema_flags(parser, command)
    return parser


def _build_parser():
    parser = _Parser(prog="hall-edge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")
    for command in COMPUTE:
        child = sub.add_parser(command, help=f"run the {command} computation")
        _add_common(child)
        _populate_schema_flags(child, command)
    sweep = sub.add_parser(
        "sweep", help="re-run a command over a grid of parameter values"
    )
    _add_common(sweep)
    sweep.add_argument(
        "--range",
        action="append",
        metavar="NAME=SPEC",
        help="name=start:stop:num or name=v1,v2,... (repeat for a second axis)",
    )
    sweep.add_argument("target", help="command to sweep")
    sweep.add_argument(
        "target_args",
        nargs=argparse.REMAINDER,
        help="flags forwarded to the target command",
    )
    return parser


def _write_output(path, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _fail(exc: Exception, code: int) -> int:
    doc = {
        "error": {
            "type": type(exc).__name__,
            "message": str(exc),
            "exit_code": code,
        }
    }
    sys.stderr.write(json_dumps(doc) + "\n")
    return code


def _run(argv) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        raise ConfigError("no command given (try --help)")
    started = time.perf_counter()
    if ns.command == "sweep":
        records, meta_extra, shown = _cmd_sweep(ns)
    else:
        config = _load_config(ns.config)
        cli_values = {name: getattr(ns, name) for name in SCHEMAS[ns.command]}
        params = resolve_params(ns.command, cli_values, config)
        records, meta_extra = COMPUTE[ns.command](params)
        shown = params
    elapsed = time.perf_counter() - started
    metadata = {"command": ns.command, "parameters": shown}
    metadata.update(meta_extra)
    metadata["elapsed_seconds"] = elapsed
    if ns.format == "json":
        text = json_dumps({"records": records, "metadata": metadata}) + "\n"
    else:
        text = csv_text(records)
    _write_output(ns.out, text)
    if ns.plot is not None:
        try:
            _render_plot(ns.command, records, shown, ns.plot)
        except Exception as exc:
            sys.stderr.write(f"warning: plot skipped: {exc}\n")
    return 0


def main(argv=None) -> int:
    try:
        return _run(argv)
    except ConfigError as exc:
        return _fail(exc, 2)
    except PreconditionError as exc:
        return _fail(exc, 3)
    except AccuracyError as exc:
        return _fail(exc, 4)
    except ResourceLimitError as exc:
        return _fail(exc, 5)
