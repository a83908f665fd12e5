"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 physics error (instability,
divergence), 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    ConfigError,
    InvalidArgumentError,
    InvalidStateError,
    MagsimError,
    NotBAERegimeError,
    PhysicsError,
)
from .modulation import bogoliubov_parameters, effective_couplings
from .scenarios import (
    bae_demo,
    default_jobs,
    list_presets,
    load_config,
    load_preset,
    run_scenario,
    steady_observables,
    sweep,
    validate_rwa,
)

EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_IO = 0, 1, 2, 3
DETERMINISM_NOTE = ("fixed-step RK4, no random numbers: outputs are a pure function of the "
                    "configuration, the command line and the code version")


def _fmt(x):
    return format(float(x), ".17g")


def write_series_csv(path, times, name, values):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["t", name])
        for t, v in zip(times, values):
            w.writerow([_fmt(t), _fmt(v)])


def read_series_csv(path):
    """Inverse of :func:`write_series_csv`: ``(times, values, name)``."""
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    name = rows[0][1]
    data = np.array([[float(a), float(b)] for a, b in rows[1:]])
    return data[:, 0], data[:, 1], name


def _write_svg(path, times, series, title):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for name, values in series.items():
        ax.plot(times, values, label=name)
    ax.set_xlabel(r"$t\,\omega_m$")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _resolve_config(ref):
    """A path to a JSON file, or else the name of a shipped preset."""
    path = Path(ref)
    if path.exists():
        return load_config(path), str(path)
    name = ref[:-5] if ref.endswith(".json") else ref
    if name in list_presets():
        return load_preset(name), f"preset:{name}"
    if ref.endswith(".json"):
        raise FileNotFoundError(f"no such configuration file: {ref}")
    raise ConfigError(f"{ref!r} is neither a file nor a preset (see 'magsim presets')")


def _manifest(out, command, argv, config, config_ref, frame, dt, truncation, files):
    payload = json.dumps(config.to_dict(), sort_keys=True).encode()
    manifest = {
        "command": command,
        "argv": argv,
        "config": config_ref,
        "config_sha256": hashlib.sha256(payload).hexdigest(),
        "output_dir": str(out),
        "determinism": DETERMINISM_NOTE,
        "code_version": __version__,
        "truncation": truncation,
        "dt": dt,
        "frame": frame,
        "files": files,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _print_table(rows, header):
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    for r in [header] + rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(r, widths)))


# commands -----------------------------------------------------------------------


def cmd_couplings(args):
    eff = effective_couplings(args.g, args.lambda1, args.lambda2)
    g1, g2 = eff.g1 + 0.0, eff.g2 + 0.0
    print(f"g1        = {g1:.10g}")
    print(f"g2        = {g2:.10g}")
    print(f"g1/g2     = {g1 / g2:.10g}" if g2 != 0 else "g1/g2     = n/a")
    code = EXIT_OK
    if g1 != 0 and abs(g2) < 1e-3 * abs(g1):
        print("flag      : g2 ~ 0, pure parametric coupling (two-sphere regime)")
    scale = max(abs(g1), abs(g2), 1e-300)
    if abs(abs(g1) - abs(g2)) <= 1e-12 * scale:
        print("r, Omega1 : n/a (|g1| = |g2|)")
        print("stability : marginal (g1 = g2: backaction-evading limit)"
              if g1 != 0 else "stability : uncoupled")
    else:
        try:
            r, om = bogoliubov_parameters(g1, g2)
            print(f"r         = {r:.10g}")
            print(f"Omega1    = {om:.10g}")
            print("stability : stable (|g1| < |g2|)")
        except PhysicsError:
            print("stability : UNSTABLE single sphere (|g1| > |g2|, no steady state)")
            code = EXIT_PHYSICS
    if args.g3 is not None:
        print(f"g1/g3     = {g1 / args.g3:.10g}")
        try:
            r2, om2 = bogoliubov_parameters(g1, args.g3)
            print(f"r2        = {r2:.10g}")
            print(f"Omega2    = {om2:.10g}")
            print("two-sphere: stable (|g1| < g3)")
            code = EXIT_OK
        except PhysicsError:
            print("two-sphere: UNSTABLE (|g1| >= g3)")
            code = EXIT_PHYSICS
    return code


def cmd_run(args):
    config, ref = _resolve_config(args.config)
    frame = args.frame or config.frame
    result = run_scenario(config, frame)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for name, values in result.series.items():
        fname = f"{name}.csv"
        write_series_csv(out / fname, result.times, name, values)
        files.append(fname)
        if args.plot:
            _write_svg(out / f"{name}.svg", result.times, {name: values},
                       f"{config.name or ref} ({frame})")
            files.append(f"{name}.svg")
    steady = {k: v for k, v in result.steady.items()}
    (out / "steady.json").write_text(json.dumps(
        {"steady": steady, "metadata": result.metadata}, indent=2, sort_keys=True) + "\n")
    files.append("steady.json")
    _manifest(out, "run", args.argv, config, ref, frame,
              result.metadata["dt"], result.metadata["truncation"], files)
    for name, v in steady.items():
        print(f"{name} steady = {v:.6g}   final sample = {result.series[name][-1]:.6g}")
    return EXIT_OK


def cmd_steady(args):
    config, ref = _resolve_config(args.config)
    frame = args.frame or config.frame
    values = steady_observables(config, frame)
    if args.json:
        print(json.dumps(values, sort_keys=True))
    else:
        for name, v in values.items():
            flag = ""
            if name.startswith("V_"):
                flag = "  squeezed" if v < 0.5 else "  not squeezed"
            print(f"{name} = {v:.10g}{flag}")
    return EXIT_OK


def cmd_sweep(args):
    config, ref = _resolve_config(args.config)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--values must be comma-separated numbers, got {args.values!r}")
    if not values:
        raise ConfigError("--values is empty")
    frame = args.frame or config.frame
    rows = sweep(config, args.axis, values, frame=frame, jobs=args.jobs)
    names = list(config.observables)
    table = [[_fmt(r.value)] + [_fmt(r.steady[n]) if n in r.steady else "" for n in names]
             + [r.error or ""] for r in rows]
    header = [args.axis] + names + ["error"]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        fname = f"sweep_{args.axis}.csv"
        with open(out / fname, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(header)
            w.writerows(table)
        _manifest(out, "sweep", args.argv, config, ref, frame, config.resolved_dt(frame),
                  config.resolved_truncation if frame == "rotating" else None, [fname])
    short = lambda c: f"{float(c):.10g}" if c else ""
    _print_table([[short(c) for c in r[:-1]] + [r[-1]] for r in table], header)
    return EXIT_OK if all(r.error is None for r in rows) else EXIT_PHYSICS


def cmd_validate_rwa(args):
    config, ref = _resolve_config(args.config)
    report = validate_rwa(config)
    for name in config.observables:
        print(f"{name}: max |exact - rwa| = {report['max_gap'][name]:.3e}   "
              f"steady exact = {report['lab_steady'][name]:.6g}   "
              f"steady rwa = {report['rwa_steady'][name]:.6g}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        files = []
        for name in config.observables:
            fname = f"validate_{name}.csv"
            with open(out / fname, "w", newline="") as f:
                w = csv.writer(f)
                w.writerow(["t", f"{name}_lab", f"{name}_rwa"])
                for t, a, b in zip(report["times"], report["lab"][name], report["rwa"][name]):
                    w.writerow([_fmt(t), _fmt(a), _fmt(b)])
            files.append(fname)
        _manifest(out, "validate-rwa", args.argv, config, ref, "lab+rwa", config.resolved_dt("lab"),
                  None, files)
    return EXIT_OK


def cmd_bae(args):
    config, ref = _resolve_config(args.config)
    if config.two_sphere:
        raise ConfigError("bae needs a single_sphere configuration")
    eff = config.effective
    if abs(eff.g1 - eff.g2) > 1e-12 * max(abs(eff.g1), abs(eff.g2), 1e-300):
        raise NotBAERegimeError(f"g1 = {eff.g1:.6g} differs from g2 = {eff.g2:.6g}; use lambda1 = lambda2")
    n_c, n_m = config.n_bars()
    report = bae_demo(eff.g1, config.kappa_c, n_c, t_end=config.resolved_t_end,
                      dt=config.resolved_dt("rwa"), kappa_m=config.kappa_m, n_bar_m=n_m,
                      phases=(config.phi1, config.phi2))
    for k, v in report.summary().items():
        print(f"{k} = {v}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "bae.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["t", "var_X_m", "var_P_m", "var_X_c"])
            for row in zip(report.times, report.var_xm, report.var_pm, report.var_xc):
                w.writerow([_fmt(x) for x in row])
        _manifest(out, "bae", args.argv, config, ref, "rwa", config.resolved_dt("rwa"), None, ["bae.csv"])
    return EXIT_OK if report.structure_ok else EXIT_PHYSICS


def cmd_presets(args):
    for name in list_presets():
        print(name)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="magsim", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"magsim {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("couplings", help="effective couplings and Bogoliubov parameters")
    c.add_argument("--lambda1", type=float, required=True)
    c.add_argument("--lambda2", type=float, required=True)
    c.add_argument("--g", type=float, default=1.0)
    c.add_argument("--g3", type=float, default=None)
    c.set_defaults(func=cmd_couplings)

    frames = ("lab", "rotating", "rwa")
    r = sub.add_parser("run", help="integrate a scenario and write CSV series")
    r.add_argument("config", help="JSON file or preset name")
    r.add_argument("--frame", choices=frames)
    r.add_argument("--out", default="out")
    r.add_argument("--plot", action="store_true", help="also write SVG line charts")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("steady", help="print steady observables")
    s.add_argument("config")
    s.add_argument("--frame", choices=frames)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_steady)

    w = sub.add_parser("sweep", help="steady observables along one parameter axis")
    w.add_argument("config")
    w.add_argument("--axis", required=True)
    w.add_argument("--values", required=True, help="comma-separated values")
    w.add_argument("--frame", choices=frames)
    w.add_argument("--out")
    w.add_argument("--jobs", type=int, default=None, help="worker processes (default $MAGSIM_JOBS or 1)")
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("validate-rwa", help="compare exact and RWA dynamics")
    v.add_argument("config")
    v.add_argument("--out")
    v.set_defaults(func=cmd_validate_rwa)

    b = sub.add_parser("bae", help="backaction-evading structure report")
    b.add_argument("config")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bae)

    sub.add_parser("presets", help="list shipped presets").set_defaults(func=cmd_presets)
    return p


def main(argv=None):
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    args.argv = argv
    if getattr(args, "jobs", 1) is None:
        args.jobs = default_jobs()
    try:
        return args.func(args)
    except (ConfigError, InvalidArgumentError) as exc:
        print(f"magsim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PhysicsError, InvalidStateError) as exc:
        print(f"magsim: physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except OSError as exc:
        print(f"magsim: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MagsimError as exc:
        print(f"magsim: error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
