"""Command-line front end: ``radical-compass <subcommand>``.

Exit codes: 0 success, 1 failed validation, 2 bad configuration,
3 engine failure.
"""

import argparse
import json
import sys

import numpy as np

from . import config, metrology, scenarios, spinlin, steady
from .dynamics import PropagatorSpec
from .entanglement import concurrence
from .errors import CompassError, ConfigurationError

EXIT_OK, EXIT_VALIDATE, EXIT_CONFIG, EXIT_ENGINE = 0, 1, 2, 3


def _common(sub):
    sub.add_argument("--config", help="INI configuration file")
    sub.add_argument("--preset", default="reference", choices=sorted(config.PRESETS))
    sub.add_argument("--set", dest="overrides", action="append", default=[],
                     metavar="SECTION.KEY=VALUE", help="override a config value (repeatable)")


def build_parser():
    ap = argparse.ArgumentParser(prog="radical-compass", description=__doc__.splitlines()[0])
    subs = ap.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="run a scenario and write CSV/JSON/SVG")
    _common(run)
    run.add_argument("--scenario", required=True, choices=scenarios.SCENARIOS)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--workers", type=int, default=None)
    run.add_argument("--output-dir", default=".")
    run.add_argument("--theta-points", type=int, default=46)
    run.add_argument("--n-states", type=int, default=100)
    run.add_argument("--measure", default="hilbert_schmidt_mixed",
                     choices=scenarios.RandomStateSampler.MEASURES)
    run.add_argument("--no-svg", action="store_true")

    val = subs.add_parser("validate", help="cross-method consistency checks")
    _common(val)
    val.add_argument("--seed", type=int, default=0)

    for name, text in (("qfi", "quantum Fisher information"), ("yield", "singlet yield"),
                       ("concurrence", "concurrence of the steady state")):
        p = subs.add_parser(name, help=f"{text} at one parameter point")
        _common(p)
        p.add_argument("--theta", type=float, default=None)

    subs.add_parser("list-scenarios", help="list named scenarios")
    return ap


def _resolve(args, theta=None):
    values = config.apply_overrides(config.load_values(args.config, args.preset), args.overrides)
    if theta is not None:
        config.set_value(values, "field.theta", theta, " (--theta)")
    return config.build_params(values), values


# ------------------------------------------------------------ subcommands


def cmd_run(args, out):
    workers = args.workers if args.workers is not None else scenarios.workers_from_env()
    if workers < 1:
        raise ConfigurationError("--workers must be >= 1", key="workers")
    if args.theta_points < 1:
        raise ConfigurationError("--theta-points must be >= 1", key="theta_points")
    base = None
    if args.scenario == "custom":
        _, base = _resolve(args)
        overrides = {}
    else:
        # validate the command-line overrides before any work starts
        _resolve(args)
        overrides = dict(config._split(o) for o in args.overrides)
    spec = scenarios.SweepSpec(
        args.scenario,
        theta_grid=scenarios.default_theta_grid(args.theta_points),
        overrides=overrides,
        seed=args.seed,
        parallelism=workers,
        n_states=args.n_states,
        measure=args.measure,
        base_values=base,
    )
    result = scenarios.run_scenario(spec)
    for path in scenarios.write_outputs(result, args.output_dir, svg=not args.no_svg):
        print(path, file=out)
    return EXIT_OK


def _point(args, quantity, out):
    p, values = _resolve(args, args.theta)
    fam = steady.SteadyMapFamily(p, dt=values["numerics"]["dt"])
    if quantity == "qfi":
        value = metrology.qfi_spectral(fam.family(), p.theta)
    else:
        rho = fam.state(p.theta)
        value = metrology.singlet_yield(rho) if quantity == "yield" else concurrence(rho)
    record = {
        "quantity": quantity,
        "value": float(value),
        "theta": float(p.theta),
        "method": {"steady_state": fam.method,
                   **({"qfi": "spectral", "h": metrology.H_DEFAULT} if quantity == "qfi" else {})},
    }
    print(json.dumps(record), file=out)
    return EXIT_OK


# ------------------------------------------------------------ validation


def _check(name, fn, tol):
    try:
        residual = float(fn())
    except CompassError as exc:
        return name, False, getattr(exc, "residual", None), tol, f"{type(exc).__name__}: {exc}"
    return name, residual <= tol, residual, tol, ""


def validation_checks(p, dt=None, seed=0):
    """List of (name, passed, residual, tolerance, note)."""
    static = p.with_(osc_field=None, noise=None)
    rng = np.random.default_rng(seed)
    theta = p.theta

    def resolvents():
        a = steady.unitary_resolvent_map(static)
        b = steady.liouvillian_resolvent_map(static)
        return np.max(np.abs(a - b))

    def resolvent_vs_quadrature():
        a = steady.steady_unitary_resolvent(static).rho_bar
        b = steady.steady_quadrature(static, PropagatorSpec(dt=dt)).rho_bar
        return np.max(np.abs(a - b))

    def driven_quadrature():
        _, _, residual = steady.calibrate_quadrature(p, dt=dt)
        return residual

    def omega_zero():
        worst = 0.0
        for _ in range(200):
            c = rng.normal(size=(2, 2, 2)) + 1j * rng.normal(size=(2, 2, 2))
            c[:, [0, 1], [0, 1]] = rng.uniform(0.05, 1.0, size=(2, 2))
            c = metrology.SectorCoefficients(c)
            a = metrology.qfi_strong_hf_static(c)
            b = metrology.qfi_strong_hf_driven(c, None, static.k, 0.0)
            worst = max(worst, abs(a - b) / max(abs(a), 1e-300))
        return worst

    fam = steady.SteadyMapFamily(static, dt=dt)

    def closed_vs_exact():
        exact = metrology.qfi_spectral(fam.family(), theta)
        closed = metrology.qfi_strong_hf_static(static.initial_electron_state, theta)
        return abs(exact - closed) / closed

    def cfi_vs_error_prop():
        st = metrology.Stencil(fam.family(), theta)
        worst = 0.0
        for obs in (spinlin.total_spin_sq(), spinlin.total_sz_sq()):
            f = metrology.cfi_projective(None, obs, theta, stencil=st)
            e = metrology.error_propagation(None, obs, theta, stencil=st)
            if not e.flat_signal:
                worst = max(worst, abs(f - e.inv_var) / max(f, 1e-300))
        return worst

    def spin_yield_identity():
        rho = fam.state(theta)
        return abs(spinlin.expect(spinlin.total_spin_sq(), rho)
                   + 2 * metrology.singlet_yield(rho) - 2)

    checks = [
        ("unitary vs Liouvillian resolvent", resolvents, 1e-7),
        ("resolvent vs quadrature", resolvent_vs_quadrature, 1e-7),
        ("driven form at Omega=0 vs static form", omega_zero, 1e-12),
        ("binary CFI vs error propagation", cfi_vs_error_prop, 1e-9),
        ("<S^2> + 2 Phi_S = 2", spin_yield_identity, 1e-9),
    ]
    if static.hf.ax == 0 and static.static_field.phi == 0:
        checks.insert(3, ("closed-form vs exact QFI", closed_vs_exact, 0.10))
    if p.driven:
        checks.insert(2, ("driven quadrature convergence", driven_quadrature, steady.QUAD_RTOL))
    return [_check(*c) for c in checks]


def cmd_validate(args, out):
    p, values = _resolve(args)
    results = validation_checks(p, values["numerics"]["dt"], args.seed)
    width = max(len(r[0]) for r in results)
    print(f"{'check':<{width}}  status  residual     tolerance", file=out)
    for name, ok, residual, tol, note in results:
        res = "n/a" if residual is None else f"{residual:.3e}"
        line = f"{name:<{width}}  {'PASS' if ok else 'FAIL':<6}  {res:<11}  {tol:.1e}"
        print(line + (f"  {note}" if note else ""), file=out)
    failed = [r for r in results if not r[1]]
    if failed:
        print(f"{len(failed)} check(s) failed: " + ", ".join(r[0] for r in failed), file=out)
        return EXIT_VALIDATE
    print("all checks passed", file=out)
    return EXIT_OK


def cmd_list(args, out):
    for name in scenarios.SCENARIOS:
        print(f"{name:<8} {scenarios.DESCRIPTIONS[name]}", file=out)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "validate": cmd_validate,
    "qfi": lambda a, o: _point(a, "qfi", o),
    "yield": lambda a, o: _point(a, "yield", o),
    "concurrence": lambda a, o: _point(a, "concurrence", o),
    "list-scenarios": cmd_list,
}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except ConfigurationError as exc:
        key = f" [key: {exc.key}]" if exc.key else ""
        print(f"configuration error: {exc}{key}", file=err)
        return EXIT_CONFIG
    except CompassError as exc:
        point = getattr(exc, "point", None)
        where = f" at {point}" if point else ""
        print(f"engine error{where}: {type(exc).__name__}: {exc}", file=err)
        return EXIT_ENGINE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
