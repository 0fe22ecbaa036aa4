"""Command-line front end.

Subcommands map one-to-one onto the experiment drivers; outputs are
self-describing (JSON embeds the parameter snapshot, CSV gets a
`<name>.params.json` sidecar).  stdout carries one machine-parseable JSON
summary line; human diagnostics go to stderr.  Exit codes: 0 success,
1 config/validation/usage error, 2 runtime model error.

Identical invocations produce byte-identical outputs: floats are printed
with repr-exact precision and all iteration orders are fixed.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .errors import MemkinError, ValidationError
from .experiments import (arrhenius_rates, linearity_factors, phase_diagram,
                          run_cycle, run_depression, run_interface_scenario,
                          run_potentiation, synthetic_xy_map)
from .params import load_params, paper_defaults, params_dict
from .quasidc import SweepSpec, dc_sweep
from .svgplot import heatmap_svg, line_plot_svg

_FMT = ".17g"


def _f(x):
    return format(float(x), _FMT)


def _load(args):
    if args.config:
        return load_params(Path(args.config).read_text())
    return paper_defaults()


def _write_sidecar(out_path, p):
    side = out_path.with_suffix(out_path.suffix + ".params.json")
    side.write_text(json.dumps(params_dict(p), sort_keys=True, indent=1) + "\n")
    return side


def _emit(out_path, text):
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(text)


def _trace_csv(trace):
    rows = ["n,current_A,f22,f31"]
    for n, i, f22, f31 in zip(trace.levels, trace.currents,
                              trace.f_22, trace.f_31):
        rows.append(f"{int(n)},{_f(i)},{_f(f22)},{_f(f31)}")
    return "\n".join(rows) + "\n"


def _trace_json(trace, p):
    rep = linearity_factors(trace)
    payload = {
        "mode": trace.mode,
        "params": params_dict(p),
        "levels": [int(v) for v in trace.levels],
        "current_A": [float(v) for v in trace.currents],
        "f22": [float(v) for v in trace.f_22],
        "f31": [float(v) for v in trace.f_31],
        "conservation": trace.conservation,
        "linearity": {k: v for k, v in vars(rep).items()},
        "line": {"a1": trace.line[0], "a2": trace.line[1]},
    }
    return json.dumps(payload, sort_keys=True) + "\n"


def _dc_csv(V, I, fr):
    rows = ["V,current_A,f31,f11,f00"]
    for v, i, (f31, f11, f00) in zip(V, I, fr):
        rows.append(f"{_f(v)},{_f(i)},{_f(f31)},{_f(f11)},{_f(f00)}")
    return "\n".join(rows) + "\n"


def _phase_csv(d):
    rows = ["kappa_inv_per_us,amplitude_mV,nu_P_norm,nu_D_norm"]
    for i, r in enumerate(d.rates_per_us):
        for j, a in enumerate(d.amplitudes_V):
            rows.append(f"{_f(r)},{_f(a * 1e3)},{_f(d.nu_P_norm[i, j])},"
                        f"{_f(d.nu_D_norm[i, j])}")
    return "\n".join(rows) + "\n"


def _map_csv(grid):
    return "\n".join(",".join(str(int(v)) for v in row) for row in grid) + "\n"


def _summary(status, outputs, extra=None):
    payload = {"status": status, "outputs": [str(o) for o in outputs]}
    if extra:
        payload.update(extra)
    print(json.dumps(payload, sort_keys=True))


def _threads(args):
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("MEMKIN_THREADS", "")
    if env.strip():
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"MEMKIN_THREADS must be an integer, got {env!r}")
    return 1


def _out_trace(args, trace, p):
    out = Path(args.out)
    outputs = []
    if args.format == "csv":
        _emit(out, _trace_csv(trace))
        outputs = [out, _write_sidecar(out, p)]
    elif args.format == "json":
        _emit(out, _trace_json(trace, p))
        outputs = [out]
    elif args.format == "svg":
        _emit(out, line_plot_svg(trace.levels, trace.currents,
                                 xlabel="pulse index", ylabel="current (A)"))
        outputs = [out, _write_sidecar(out, p)]
    rep = linearity_factors(trace)
    extra = {"n_points": len(trace.levels)}
    if rep.nu_P is not None:
        extra["nu_P"] = rep.nu_P
    if rep.nu_D is not None:
        extra["nu_D"] = rep.nu_D
    return outputs, extra


def _cmd_potentiate(args):
    p = _load(args)
    trace = run_potentiation(p, n_max=args.n_max, stride=args.stride)
    return _out_trace(args, trace, p)


def _cmd_depress(args):
    p = _load(args)
    trace = run_depression(p, start_fraction=args.start_fraction,
                           stride=args.stride)
    return _out_trace(args, trace, p)


def _cmd_cycle(args):
    p = _load(args)
    n_stop = args.n_stop if args.n_stop is not None else p.n_max_P
    trace = run_cycle(p, n_stop, stride=args.stride)
    return _out_trace(args, trace, p)


def _cmd_dc_sweep(args):
    p = _load(args)
    spec = SweepSpec(V_start=args.v_start, V_stop=args.v_stop,
                     V_step=args.v_step)
    V, I, fr, cons = dc_sweep(spec, p)
    out = Path(args.out)
    if args.format == "csv":
        _emit(out, _dc_csv(V, I, fr))
        outputs = [out, _write_sidecar(out, p)]
    elif args.format == "json":
        payload = {"params": params_dict(p), "V": list(map(float, V)),
                   "current_A": list(map(float, I)),
                   "fractions": [list(map(float, row)) for row in fr],
                   "conservation": cons}
        _emit(out, json.dumps(payload, sort_keys=True) + "\n")
        outputs = [out]
    else:
        _emit(out, line_plot_svg(V, I, xlabel="V (V)", ylabel="current (A)",
                                 logy=True))
        outputs = [out, _write_sidecar(out, p)]
    return outputs, {"n_points": int(V.size)}


def _parse_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _cmd_phase_diagram(args):
    p = _load(args)
    rates = _parse_list(args.rates) if args.rates else None
    amps = _parse_list(args.amplitudes) if args.amplitudes else None
    diagram = phase_diagram(p, rates_per_us=rates, amplitudes_V=amps,
                            stride=args.stride, threads=_threads(args))
    out = Path(args.out)
    if args.format == "csv":
        _emit(out, _phase_csv(diagram))
        outputs = [out, _write_sidecar(out, p)]
    elif args.format == "json":
        payload = {
            "params": params_dict(p),
            "rates_per_us": list(map(float, diagram.rates_per_us)),
            "amplitudes_V": list(map(float, diagram.amplitudes_V)),
            "nu_P_norm": [[_nan_safe(v) for v in row] for row in diagram.nu_P_norm],
            "nu_D_norm": [[_nan_safe(v) for v in row] for row in diagram.nu_D_norm],
            "failures": [list(f) for f in diagram.failures],
        }
        _emit(out, json.dumps(payload, sort_keys=True) + "\n")
        outputs = [out]
    else:
        _emit(out, heatmap_svg(np.log10(np.clip(diagram.nu_P_norm, 1.0, None)),
                               xlabel="amplitude", ylabel="nucleation rate"))
        outputs = [out, _write_sidecar(out, p)]
    return outputs, {"cells": int(diagram.nu_P_norm.size),
                     "failures": len(diagram.failures)}


def _nan_safe(v):
    return None if not np.isfinite(v) else float(v)


def _cmd_arrhenius(args):
    p = _load(args)
    temps = _parse_list(args.temperatures) if args.temperatures else None
    rep = arrhenius_rates(p, temperatures=temps)
    out = Path(args.out)
    payload = {
        "params": params_dict(p),
        "E_a_eV": rep.E_a,
        "attempt_frequency_per_s": rep.attempt_frequency,
        "fit_residual": rep.fit_residual,
        "temperatures_K": list(rep.temperatures),
        "pairs": [list(pr) for pr in rep.pairs],
        "pair_rates_per_s": {str(t): list(r) for t, r in rep.pair_rates.items()},
        "max_pair_spread": rep.max_pair_spread,
        "zeroth_order_ok": rep.zeroth_order_ok,
    }
    _emit(out, json.dumps(payload, sort_keys=True) + "\n")
    return [out], {"E_a_eV": rep.E_a}


def _cmd_map_xy(args):
    p = _load(args)
    level = args.level if args.level is not None else p.n_max_P
    grid = synthetic_xy_map(level, p, seed=args.seed, size=args.size)
    out = Path(args.out)
    if args.format == "svg":
        _emit(out, heatmap_svg(grid.astype(float), xlabel="x", ylabel="y"))
        outputs = [out, _write_sidecar(out, p)]
    elif args.format == "csv":
        _emit(out, _map_csv(grid))
        outputs = [out, _write_sidecar(out, p)]
    else:
        payload = {"params": params_dict(p), "level": int(level),
                   "seed": int(args.seed), "size": int(args.size),
                   "grid": [[int(v) for v in row] for row in grid]}
        _emit(out, json.dumps(payload, sort_keys=True) + "\n")
        outputs = [out]
    return outputs, {"mean": float(grid.mean())}


def _cmd_validate(args):
    p = _load(args)
    return [], {"valid": True, "N_z": p.N_z, "T": p.T}


_COMMANDS = {
    "potentiate": _cmd_potentiate,
    "depress": _cmd_depress,
    "cycle": _cmd_cycle,
    "dc-sweep": _cmd_dc_sweep,
    "phase-diagram": _cmd_phase_diagram,
    "arrhenius": _cmd_arrhenius,
    "map-xy": _cmd_map_xy,
    "validate": _cmd_validate,
}

_SVG_OK = {"potentiate", "depress", "cycle", "dc-sweep", "phase-diagram",
           "map-xy"}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="memkin",
        description="Kinetic molecular-memristor model: traces, sweeps, "
                    "phase diagrams")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, needs_out=True):
        sp.add_argument("--config", help="config file (key = value lines)")
        if needs_out:
            sp.add_argument("--out", required=True, help="output path")
            sp.add_argument("--format", default="csv",
                            choices=("csv", "json", "svg"))
        sp.add_argument("--threads", type=int, default=None,
                        help="worker cap (default: MEMKIN_THREADS or 1)")

    sp = sub.add_parser("potentiate", help="potentiation trace")
    common(sp)
    sp.add_argument("--n-max", type=int, default=None)
    sp.add_argument("--stride", type=int, default=1)

    sp = sub.add_parser("depress", help="depression trace")
    common(sp)
    sp.add_argument("--start-fraction", type=float, default=None)
    sp.add_argument("--stride", type=int, default=1)

    sp = sub.add_parser("cycle", help="potentiation then depression")
    common(sp)
    sp.add_argument("--n-stop", type=int, default=None)
    sp.add_argument("--stride", type=int, default=1)

    sp = sub.add_parser("dc-sweep", help="quasi-DC I(V) sweep")
    common(sp)
    sp.add_argument("--v-start", type=float, default=0.05)
    sp.add_argument("--v-stop", type=float, default=3.0)
    sp.add_argument("--v-step", type=float, default=0.01)

    sp = sub.add_parser("phase-diagram", help="linearity phase diagram")
    common(sp)
    sp.add_argument("--rates", help="comma list of nucleation rates, 1/us")
    sp.add_argument("--amplitudes", help="comma list of amplitudes, V")
    sp.add_argument("--stride", type=int, default=10)

    sp = sub.add_parser("arrhenius", help="activation-energy extraction")
    common(sp)
    sp.add_argument("--temperatures", help="comma list of temperatures, K")

    sp = sub.add_parser("map-xy", help="synthetic in-plane occupancy map")
    common(sp)
    sp.add_argument("--level", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--size", type=int, default=256)

    sp = sub.add_parser("validate", help="parse and validate a config")
    common(sp, needs_out=False)
    return ap


def dispatch(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    cmd = args.command
    fmt = getattr(args, "format", None)
    if fmt == "svg" and cmd not in _SVG_OK:
        print(f"error: svg output is not supported by {cmd!r}", file=sys.stderr)
        return 1
    try:
        outputs, extra = _COMMANDS[cmd](args)
    except (ValidationError, MemkinError) as exc:
        if isinstance(exc, ValidationError) or cmd == "validate":
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"model error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _summary("ok", outputs, extra)
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
