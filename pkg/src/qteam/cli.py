"""Command line entry point: ``qteam {solve,sweep,simulate,verify}``."""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import _accel
from .classical import closed_form_optimum
from .errors import InvalidProblem, InvalidSpec
from .harness import AXES, SweepSpec, golden_checks, run_sweep, write_csv
from .nosignalling import ns_optimum
from .problem import DecisionProblem
from .quantum import ORDERS, advantage_strategy, empirical_table, strategy_table
from .search import SearchConfig, quantum_optimum


def _add_problem_args(p: argparse.ArgumentParser, required: bool) -> None:
    defaults = {"lambda-b": 0.8, "lambda-h": 0.8, "chi0": 1.0, "chi1": 3.0}
    for name, default in defaults.items():
        kwargs = {"required": True} if required else {"default": default}
        p.add_argument(f"--{name}", type=float, **kwargs)


def _add_search_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", type=int, default=32, help="grid points per angle axis")
    p.add_argument("--restarts", type=int, default=16, help="number of simplex refinements")


def _search_config(args) -> SearchConfig:
    return SearchConfig(grid_resolution=args.grid, restarts=args.restarts)


def _problem(args) -> DecisionProblem:
    return DecisionProblem(args.lambda_b, args.lambda_h, args.chi0, args.chi1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qteam", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimal costs for one decision problem")
    _add_problem_args(p, required=True)
    p.add_argument("--space", choices=("classical", "ns", "quantum", "all"), default="all")
    _add_search_args(p)

    p = sub.add_parser("sweep", help="sweep one parameter and write CSV")
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_problem_args(p, required=False)
    _add_search_args(p)

    p = sub.add_parser("simulate", help="sample the advantage strategy by sequential measurement")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order", choices=ORDERS, default="B-first")

    sub.add_parser("verify", help="reproduce the published constants")
    return parser


def _cmd_solve(args) -> int:
    d = _problem(args)
    if args.space in ("classical", "all"):
        res = closed_form_optimum(d)
        s = res.strategy
        print(f"classical  J* = {res.cost:.12g}  gamma_b={s.gamma_b} gamma_h={s.gamma_h}")
    if args.space in ("quantum", "all"):
        res = quantum_optimum(d, _search_config(args))
        angles = ", ".join(f"{a:.6f}" for a in res.angles.as_tuple())
        print(f"quantum    J* = {res.cost:.12g}  angles=({angles})")
    if args.space in ("ns", "all"):
        res = ns_optimum(d)
        print(f"nosignal   J* = {res.cost:.12g}  vertex={res.vertex}")
    return 0


def _cmd_sweep(args) -> int:
    spec = SweepSpec(args.axis, args.start, args.stop, args.steps, _problem(args), _search_config(args))
    records = run_sweep(spec)
    write_csv(records, args.out)
    best = max(records, key=lambda r: r.adv_quantum)
    print(f"wrote {len(records)} rows to {args.out}; largest quantum advantage {best.adv_quantum:.6g} at {best.param:.6g}")
    return 0


def _cmd_simulate(args) -> int:
    if args.samples < 1:
        raise InvalidSpec("--samples must be positive")
    s = advantage_strategy()
    exact = strategy_table(s).q
    emp = empirical_table(s, args.samples, args.order, args.seed).q
    print(f"{args.samples} sequential shots per observation pair, order {args.order}, seed {args.seed}")
    print("xi_b xi_h  u_b u_h     exact   empirical")
    for xb in (0, 1):
        for xh in (0, 1):
            for ub in (0, 1):
                for uh in (0, 1):
                    print(f"  {xb}    {xh}     {ub}   {uh}   {exact[ub, uh, xb, xh]:.6f}  {emp[ub, uh, xb, xh]:.6f}")
            tv = 0.5 * float(np.abs(exact[:, :, xb, xh] - emp[:, :, xb, xh]).sum())
            print(f"  total variation ({xb},{xh}): {tv:.6f}")
    return 0


def _cmd_verify(args) -> int:
    checks = golden_checks()
    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    print(f"backend: {_accel.backend_name()}")
    return 0 if all(c.passed for c in checks) else 1


COMMANDS = {"solve": _cmd_solve, "sweep": _cmd_sweep, "simulate": _cmd_simulate, "verify": _cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InvalidProblem, InvalidSpec, ValueError) as exc:
        parser.error(str(exc))  # exits with status 2


if __name__ == "__main__":
    sys.exit(main())
