"""Command-line interface: simulate, equilibria, compare, entropy, thermalize.

Exit codes: 0 success, 2 input validation failure, 3 numerical abort.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .compare import compare_forms
from .entropy import entropy_series
from .errors import NumericalAbort, ValidationError
from .games import enumerate_symmetric_nash, load_game
from .lax import integrate_lax
from .quantum import integrate_von_neumann
from .replicator import integrate
from .simplex import as_distribution
from .thermalization import EnsembleState, run as run_coarsening
from .trajectory import Trajectory


def _parse_floats(text: str, flag: str) -> np.ndarray:
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"{flag}: expected comma-separated numbers: {exc}") from exc
    if not values:
        raise ValidationError(f"{flag}: expected at least one number")
    return np.array(values)


def _cmd_simulate(args) -> int:
    game = load_game(args.game)
    x0 = as_distribution(_parse_floats(args.x0, "--x0"), game.n, name="--x0")
    if args.form == "vector":
        traj = integrate(game, x0, args.t_end, args.dt, stride=args.stride)
    elif args.form == "lax":
        traj = integrate_lax(game, x0, args.t_end, args.dt, stride=args.stride)
    else:
        traj = integrate_von_neumann(game, x0, args.t_end, args.dt,
                                     hbar=args.hbar, stride=args.stride)
    traj.meta["seed"] = args.seed
    traj.to_csv(args.out)
    return 0


def _cmd_equilibria(args) -> int:
    game = load_game(args.game)
    reports = enumerate_symmetric_nash(game, tol=args.tol, seed=args.seed)
    print(json.dumps([r.to_dict(game.labels) for r in reports], indent=2))
    print("note: is_ess checks all pure mutants plus 1000 sampled mixed mutants "
          f"(seed {args.seed}); it is not an exhaustive proof", file=sys.stderr)
    return 0


def _cmd_compare(args) -> int:
    game = load_game(args.game)
    x0 = as_distribution(_parse_floats(args.x0, "--x0"), game.n, name="--x0")
    comp = compare_forms(game, x0, args.t_end, args.dt,
                         hbar=args.hbar, stride=args.stride)
    for key in sorted(comp.divergences):
        print(f"divergence.{key}={comp.divergences[key]:.17g}")
    print(f"divergence.max={comp.max_divergence:.17g}")
    for key in sorted(comp.drift):
        print(f"drift.{key}={comp.drift[key]:.17g}")
    return 0


def _cmd_entropy(args) -> int:
    traj = Trajectory.from_csv(args.traj)
    entropy_series(traj).to_csv(args.out)
    return 0


def _cmd_thermalize(args) -> int:
    temps = _parse_floats(args.temps, "--temps")
    if args.weights is None:
        weights = np.ones_like(temps)
    else:
        weights = _parse_floats(args.weights, "--weights")
        if weights.shape != temps.shape:
            raise ValidationError("--weights: must match --temps in length")
    state = EnsembleState(temps, weights)
    result = run_coarsening(state, args.kappa, args.eps, args.max_steps)
    result.to_csv(args.out)
    print("note: qualitative toy model; no empirical claim intended", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egtsim",
        description="Replicator dynamics in three equivalent forms, "
                    "equilibrium analysis, and entropy reporting.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate one game in one form, write a CSV")
    sim.add_argument("--game", required=True, help="game JSON file")
    sim.add_argument("--x0", required=True, help="initial state, comma separated")
    sim.add_argument("--t-end", type=float, required=True, dest="t_end")
    sim.add_argument("--dt", type=float, required=True)
    sim.add_argument("--form", choices=("vector", "lax", "quantum"), default="vector")
    sim.add_argument("--hbar", type=float, default=1.0)
    sim.add_argument("--stride", type=int, default=1, help="record every k-th step")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True, help="trajectory CSV path")
    sim.set_defaults(func=_cmd_simulate)

    eq = sub.add_parser("equilibria", help="enumerate symmetric Nash equilibria as JSON")
    eq.add_argument("--game", required=True)
    eq.add_argument("--tol", type=float, default=1e-9)
    eq.add_argument("--seed", type=int, default=0, help="seed for sampled ESS mutants")
    eq.set_defaults(func=_cmd_equilibria)

    cmp_p = sub.add_parser("compare", help="run all three forms and print divergences")
    cmp_p.add_argument("--game", required=True)
    cmp_p.add_argument("--x0", required=True)
    cmp_p.add_argument("--t-end", type=float, required=True, dest="t_end")
    cmp_p.add_argument("--dt", type=float, required=True)
    cmp_p.add_argument("--hbar", type=float, default=1.0)
    cmp_p.add_argument("--stride", type=int, default=1)
    cmp_p.set_defaults(func=_cmd_compare)

    ent = sub.add_parser("entropy", help="derive the entropy series of a trajectory CSV")
    ent.add_argument("--traj", required=True, help="trajectory CSV (any form)")
    ent.add_argument("--out", required=True, help="entropy CSV path")
    ent.set_defaults(func=_cmd_entropy)

    th = sub.add_parser("thermalize",
                        help="toy coarsening model (qualitative illustration only)")
    th.add_argument("--temps", required=True, help="initial temperatures, comma separated")
    th.add_argument("--weights", default=None, help="cluster weights, default all 1")
    th.add_argument("--kappa", type=float, required=True, help="exchange rate in [0, 1/2]")
    th.add_argument("--eps", type=float, required=True, help="merge threshold")
    th.add_argument("--max-steps", type=int, default=100_000, dest="max_steps")
    th.add_argument("--out", required=True, help="run CSV path")
    th.set_defaults(func=_cmd_thermalize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalAbort as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
