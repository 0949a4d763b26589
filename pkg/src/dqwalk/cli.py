"""Command-line front end: every experiment is a subcommand writing one CSV
plus a JSON sidecar with the fully resolved configuration.

    dqwalk simulate --steps 400 --theta uniform --init random --seed 7 --out d.csv
    dqwalk spectrum --grid 1024 --out spec.csv
    dqwalk density --m 0.5 --out f.csv
    dqwalk converge --steps 1000 --realizations 200 --checkpoints 100,1000 --out r.csv
    dqwalk localize --steps 2000 --realizations 200 --seed 3 --out p0.csv

Exit codes: 0 success, 2 usage error (no files touched), 1 runtime error.
Reruns with identical flags produce byte-identical outputs regardless of
QDW_THREADS.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__, fileio
from .coins import DisorderModel, SeedSpec, sample_disorder
from .evolution import distribution, init_state
from .limitlaw import LimitLaw, limit_density
from .montecarlo import (
    RunConfig,
    limit_law_for,
    moment_convergence,
    monte_carlo_run,
    return_probability,
)
from .coins import sample_initial_qubit
from .spectral import eigensystem, fourier_operator

DENSITY_SPAN = 0.75


class UsageError(Exception):
    pass


def _u32(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= v < 2**32:
        raise argparse.ArgumentTypeError(f"value out of u32 range: {text!r}")
    return v


def _u64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"value out of u64 range: {text!r}")
    return v


def _f64(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"value must be finite: {text!r}")
    return v


def _theta_model(text: str) -> DisorderModel:
    """fixed:<f64> | uniform | discrete:<v1:w1,v2:w2,...>"""
    try:
        if text == "uniform":
            return DisorderModel.uniform()
        if text.startswith("fixed:"):
            return DisorderModel.fixed(float(text[len("fixed:"):]))
        if text.startswith("discrete:"):
            pairs = [p for p in text[len("discrete:"):].split(",") if p]
            values, weights = [], []
            for pair in pairs:
                v, w = pair.split(":")
                values.append(float(v))
                weights.append(float(w))
            return DisorderModel.discrete(values, weights)
    except (ValueError, IndexError) as exc:
        raise argparse.ArgumentTypeError(f"bad disorder spec {text!r}: {exc}")
    raise argparse.ArgumentTypeError(
        f"bad disorder spec {text!r} (expected fixed:<v>, uniform, "
        f"or discrete:<v:w,...>)"
    )


def _init_spec(text: str):
    """<a_re>,<a_im>,<b_re>,<b_im> | random"""
    if text == "random":
        return "random"
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(
            f"bad init spec {text!r} (expected 4 numbers or 'random')"
        )
    try:
        a_re, a_im, b_re, b_im = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad init spec {text!r}")
    alpha, beta = complex(a_re, a_im), complex(b_re, b_im)
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > 1e-12:
        raise argparse.ArgumentTypeError(
            f"initial state must be normalized, got |.|^2 = {norm!r}"
        )
    return (alpha, beta)


def _checkpoint_list(text: str) -> tuple[int, ...]:
    try:
        cps = tuple(int(p) for p in text.split(",") if p)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad checkpoint list {text!r}")
    if not cps:
        raise argparse.ArgumentTypeError("checkpoint list is empty")
    return cps


def _model_payload(model: DisorderModel) -> dict:
    if model.kind == "fixed":
        return {"kind": "fixed", "theta": model.theta}
    if model.kind == "uniform":
        return {"kind": "uniform"}
    return {"kind": "discrete", "values": list(model.values),
            "weights": list(model.weights)}


def _init_payload(init) -> object:
    if isinstance(init, str):
        return init
    (alpha, beta) = init
    return [[alpha.real, alpha.imag], [beta.real, beta.imag]]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dqwalk",
        description="Quantum walk laboratory with random phase coins.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, steps=False, ensemble=False):
        if steps:
            p.add_argument("--steps", type=_u32, required=True,
                           help="number of walk steps")
        if ensemble:
            p.add_argument("--realizations", type=_u32, default=1,
                           help="ensemble size (default 1)")
            p.add_argument("--theta", type=_theta_model,
                           default=DisorderModel.uniform(),
                           help="fixed:<v> | uniform | discrete:<v:w,...>")
            p.add_argument("--init", type=_init_spec, default="random",
                           help="a_re,a_im,b_re,b_im or 'random'")
            p.add_argument("--theta0", type=_f64, default=None,
                           help="dressing phase (default: first disorder draw)")
        p.add_argument("--seed", type=_u64, default=0, help="master seed")
        p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("simulate", help="site distribution of one walk or ensemble")
    add_common(p, steps=True, ensemble=True)

    p = sub.add_parser("spectrum", help="eigenvalues and group velocities over k")
    p.add_argument("--grid", type=_u32, default=2001, help="momentum grid points")
    p.add_argument("--theta", type=_theta_model, default=DisorderModel.fixed(0.0),
                   help="coin phase per grid point (default fixed:0)")
    add_common(p)

    p = sub.add_parser("density", help="scaling-law density on a grid")
    p.add_argument("--grid", type=_u32, default=2001, help="grid points")
    p.add_argument("--m", type=_f64, default=0.0, help="bias coefficient")
    add_common(p)

    p = sub.add_parser("converge", help="KS distance and moments vs the law")
    add_common(p, steps=True, ensemble=True)
    p.add_argument("--checkpoints", type=_checkpoint_list, default=None,
                   help="comma-separated step counts (default: --steps)")
    p.add_argument("--m", type=_f64, default=None,
                   help="bias of the reference law (default: derived)")

    p = sub.add_parser("localize", help="return-probability decay probe")
    add_common(p, steps=True, ensemble=True)
    p.add_argument("--checkpoints", type=_checkpoint_list, default=None,
                   help="even step counts (default: multiples of 100)")

    return parser


def _base_payload(args, command: str) -> dict:
    payload = {"command": command, "version": __version__,
               "seed": args.seed, "out": str(args.out)}
    return payload


def _cmd_simulate(args) -> int:
    if args.steps == 0:
        # Trivial walk: all mass at the origin for any init.
        thetas = sample_disorder(args.theta, 0, SeedSpec(args.seed, 0))
        theta0 = thetas[0] if args.theta0 is None else args.theta0
        qubit = sample_initial_qubit(args.init, float(theta0), SeedSpec(args.seed, 0))
        table = distribution(init_state(qubit))
        rows = [(0, int(x), float(p)) for x, p in zip(table.x, table.p)]
    else:
        cfg = RunConfig(
            steps=args.steps, realizations=args.realizations, model=args.theta,
            init=args.init, master_seed=args.seed,
            checkpoints=(args.steps,), theta0=args.theta0,
        )
        dist = monte_carlo_run(cfg)[args.steps]
        rows = [(dist.t, int(x), float(p)) for x, p in zip(dist.x, dist.p)]
    fileio.write_csv(args.out, ("t", "x", "p"), rows)
    payload = _base_payload(args, "simulate")
    payload["config"] = {
        "steps": args.steps, "realizations": args.realizations,
        "model": _model_payload(args.theta), "init": _init_payload(args.init),
        "theta0": args.theta0,
    }
    fileio.write_sidecar(args.out, payload)
    return 0


def _cmd_spectrum(args) -> int:
    if args.grid < 1:
        raise UsageError("--grid must be positive")
    ks = np.linspace(-math.pi, math.pi, args.grid)
    if args.theta.kind == "fixed":
        thetas = np.full(args.grid, args.theta.theta)
    else:
        thetas = sample_disorder(args.theta, args.grid - 1, SeedSpec(args.seed, 0))
    rows = []
    for k, theta in zip(ks, thetas):
        pt = eigensystem(fourier_operator(float(k), float(theta)))
        rows.append((
            float(k), pt.w,
            pt.lambda1.real, pt.lambda1.imag,
            pt.lambda2.real, pt.lambda2.imag,
            pt.h1, pt.h2,
        ))
    fileio.write_csv(
        args.out,
        ("k", "w", "re_l1", "im_l1", "re_l2", "im_l2", "h1", "h2"),
        rows,
    )
    payload = _base_payload(args, "spectrum")
    payload["config"] = {"grid": args.grid, "model": _model_payload(args.theta)}
    fileio.write_sidecar(args.out, payload)
    return 0


def _cmd_density(args) -> int:
    if args.grid < 1:
        raise UsageError("--grid must be positive")
    if abs(args.m) > 1.0:
        raise UsageError("--m must lie in [-1, 1]")
    law = LimitLaw(m=args.m)
    xs = np.linspace(-DENSITY_SPAN, DENSITY_SPAN, args.grid)
    rows = [(float(x), float(limit_density(float(x), law))) for x in xs]
    fileio.write_csv(args.out, ("x", "f"), rows)
    payload = _base_payload(args, "density")
    payload["config"] = {"grid": args.grid, "m": args.m,
                         "a": law.a, "span": DENSITY_SPAN}
    fileio.write_sidecar(args.out, payload)
    return 0


def _ensemble_config(args, checkpoints) -> RunConfig:
    try:
        return RunConfig(
            steps=args.steps, realizations=args.realizations, model=args.theta,
            init=args.init, master_seed=args.seed,
            checkpoints=checkpoints, theta0=args.theta0,
        )
    except ValueError as exc:
        raise UsageError(str(exc))


def _cmd_converge(args) -> int:
    if args.m is not None and abs(args.m) > 1.0:
        raise UsageError("--m must lie in [-1, 1]")
    cfg = _ensemble_config(args, args.checkpoints or (args.steps,))
    law = LimitLaw(m=args.m) if args.m is not None else limit_law_for(cfg)
    report = moment_convergence(cfg, r_max=4, law=law)
    report.to_csv(args.out)
    payload = _base_payload(args, "converge")
    payload["config"] = {
        "steps": args.steps, "realizations": args.realizations,
        "model": _model_payload(args.theta), "init": _init_payload(args.init),
        "theta0": args.theta0, "checkpoints": list(cfg.checkpoints),
    }
    payload["law"] = {"a": law.a, "m": law.m}
    fileio.write_sidecar(args.out, payload)
    return 0


def _default_even_checkpoints(steps: int) -> tuple[int, ...]:
    if steps >= 200:
        return tuple(range(100, steps + 1, 100))
    return tuple(range(2, steps + 1, 2))


def _cmd_localize(args) -> int:
    checkpoints = args.checkpoints or _default_even_checkpoints(args.steps)
    if not checkpoints:
        raise UsageError("--steps too small for a return-probability series")
    if any(t % 2 for t in checkpoints):
        raise UsageError("return-probability checkpoints must be even")
    cfg = _ensemble_config(args, checkpoints)
    report = return_probability(cfg)
    report.to_csv(args.out)
    payload = _base_payload(args, "localize")
    payload["config"] = {
        "steps": args.steps, "realizations": args.realizations,
        "model": _model_payload(args.theta), "init": _init_payload(args.init),
        "theta0": args.theta0, "checkpoints": list(cfg.checkpoints),
    }
    payload["fit"] = {"slope": report.slope,
                      "window": list(report.fit_window)}
    fileio.write_sidecar(args.out, payload)
    return 0


_HANDLERS = {
    "simulate": _cmd_simulate,
    "spectrum": _cmd_spectrum,
    "density": _cmd_density,
    "converge": _cmd_converge,
    "localize": _cmd_localize,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"dqwalk {args.command}: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"dqwalk {args.command}: error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
