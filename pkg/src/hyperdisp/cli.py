"""Command-line front end: ``run``, ``list``, ``check`` and ``verify``."""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import __version__, model
from .config import dump_text, parse_assignments, read_config
from .errors import HyperDispError
from .scenarios import ScenarioSpec, builtin_scenarios, get_scenario
from .validation import spot_check_field


def effective_scenario(name: str, config_path=None, assignments=None) -> ScenarioSpec:
    """Registry defaults, then the config file, then ``--set`` pairs."""
    spec = get_scenario(name)
    overrides = {}
    if config_path:
        overrides.update(read_config(config_path))
    overrides.update(parse_assignments(assignments))
    return spec.with_overrides(overrides) if overrides else spec


def _cmd_list(args) -> int:
    for name, spec in sorted(builtin_scenarios().items()):
        mesh = f"{spec.nx}x{spec.ny}" if spec.geometry == "plane" else f"{spec.nx}"
        print(f"{name:18s} {spec.model:4s} {spec.geometry:7s} {mesh:>9s}  t_end={spec.t_end:.6g}  {spec.description}")
    return 0


def _cmd_check(args) -> int:
    spec = effective_scenario(args.scenario, args.config, args.set)
    grid, closure = spec.initial_grid()
    spot_check_field(closure, grid.interior, samples=16)
    sys.stdout.write(dump_text(spec.to_flat()))
    print(f"# ok: {grid.nx * grid.ny} cells, initial mass {grid.total_mass()!r}")
    return 0


def _cmd_run(args) -> int:
    from .runner import run

    spec = effective_scenario(args.scenario, args.config, args.set)
    manifest = run(spec, args.out, progress_every=args.progress)
    print(f"{spec.name}: {manifest.status} after {manifest.steps} steps, t={manifest.t_final:.6g}, "
          f"{manifest.wall_clock_s:.2f} s, {len(manifest.outputs)} field files in {args.out}")
    if manifest.status != "ok":
        print(manifest.error, file=sys.stderr)
        return 1
    return 0


def _cmd_verify(args) -> int:
    from .experiments import eigen_suite, ikw_closure, ikw_fixed_point, ode_invariant_suite

    ok = True

    def report(label, passed, detail):
        nonlocal ok
        ok &= passed
        print(f"[{'PASS' if passed else 'FAIL'}] {label}: {detail}")

    for closure in (model.ModelClosure.sgn(1200.0), ikw_closure()):
        s = eigen_suite(closure, args.samples, args.seed)
        report(f"eigenstructure ({closure.kind})", s["failures"] == 0,
               f"{s['n']} states, max eig err {s['eig_error']:.2e}, min rank {s['min_rank']}, "
               f"min |gnl| {s['min_abs_gnl']:.2e}, contact {s['contact']:.1e}")
    o = ode_invariant_suite(args.samples * 100, args.seed)
    report("oscillator invariant", o["ode_drift"] <= 1e-12, f"max rel drift {o['ode_drift']:.2e}")
    report("implicit stage residual", o["implicit_residual"] <= 1e-12, f"max rel residual {o['implicit_residual']:.2e}")
    rng = np.random.default_rng(args.seed)
    U = np.stack([rng.uniform(0.1, 5, 1000), *rng.normal(size=(4, 1000))])
    rt = model.prim_to_cons(model.cons_to_prim(U))
    report("conservative/primitive round trip", bool(np.allclose(rt, U, rtol=1e-15, atol=0)),
           f"max rel err {np.max(np.abs(rt - U) / np.maximum(np.abs(U), 1e-300)):.1e}")
    fp = ikw_fixed_point(nx=64, steps=20)
    report("IKW equilibrium fixed point", fp <= 1e-12, f"max rel change {fp:.1e}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperdisp", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list built-in scenarios").set_defaults(func=_cmd_list)

    for name, func, helptext in (("run", _cmd_run, "run a scenario"),
                                 ("check", _cmd_check, "validate a scenario without running it")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("scenario")
        sp.add_argument("--config", help="flat key = value file")
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one key (repeatable, beats --config)")
        sp.set_defaults(func=func)
        if name == "run":
            sp.add_argument("--out", default="out", help="output directory")
            sp.add_argument("--progress", type=int, default=0, metavar="N",
                            help="log every N steps (with -v)")

    sv = sub.add_parser("verify", help="run the eigenstructure and invariant suites")
    sv.add_argument("--samples", type=int, default=1000)
    sv.add_argument("--seed", type=int, default=0)
    sv.set_defaults(func=_cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (HyperDispError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
