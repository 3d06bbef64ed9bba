"""Command-line surface: load games, run solvers and checks, export curves.

Exit codes: 0 ok; 1 verification-negative (invalid game, not stopping, not
determined, audit failures, losing betting arena); 2 input error; 3 internal
limit reached (iteration cap without convergence, betting step bound).
Every error exits through a single one-line, machine-parsable message on
stderr: ``error: <ExceptionName>: <detail>``.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.parse
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from .audit import audit_game
from .bellman import (
    CurveMap,
    _alive_step,
    achievable_within,
    tail_bound,
    value_iterate,
)
from .betting import ADAM_FACTORIES, load_betting, simulate, trace_to_csv
from .determined import check_determinacy, solve_determined
from .errors import (
    GameSolverError,
    HypothesisViolated,
    NotStopping,
    NotStoppingUnderPolicy,
    StepBoundExceeded,
)
from .frontier import (
    Frontier,
    as_fraction,
    frontier_from_csv,
    frontier_to_csv,
    frontier_to_svg,
)
from .games import (
    Game,
    check_stopping,
    discount_transform,
    load_game,
    normalize,
    require_valid,
    save_game,
    validate_game,
)

OK = 0
NEGATIVE = 1
INPUT_ERROR = 2
LIMIT = 3

_NEGATIVE_ERRORS = (NotStopping, NotStoppingUnderPolicy, HypothesisViolated)
_LIMIT_ERRORS = (StepBoundExceeded,)


def _pq(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _state_filename(sid: str, ext: str) -> str:
    return urllib.parse.quote(sid, safe="") + "." + ext


def _write_curves(
    curves: Mapping[str, Frontier], out_dir: Path, svg: bool
) -> dict[str, str]:
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest: dict[str, str] = {}
    for sid in sorted(curves):
        name = _state_filename(sid, "csv")
        (out_dir / name).write_text(frontier_to_csv(curves[sid]))
        manifest[sid] = name
        if svg:
            (out_dir / _state_filename(sid, "svg")).write_text(
                frontier_to_svg(curves[sid], title=sid)
            )
    return manifest


def _load_curves(dir_path: Path) -> CurveMap:
    curves: CurveMap = {}
    for path in sorted(dir_path.glob("*.csv")):
        sid = urllib.parse.unquote(path.stem)
        curves[sid] = frontier_from_csv(path.read_text())
    return curves


def _print_curves(curves: Mapping[str, Frontier]) -> None:
    for sid in sorted(curves):
        pts = " ".join(f"({_pq(x)},{_pq(y)})" for x, y in curves[sid].vertices)
        print(f"{sid}: {pts}")


def _parse_point(text: str) -> tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"point must be 'x,y', got {text!r}")
    return (as_fraction(parts[0].strip()), as_fraction(parts[1].strip()))


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_validate(args) -> int:
    g = load_game(args.game)
    report = validate_game(g)
    if report.ok:
        print("valid")
        return OK
    for violation in report.violations:
        print(f"violation: {violation}")
    return NEGATIVE


def _cmd_stopping(args) -> int:
    g = load_game(args.game)
    require_valid(g)
    report = check_stopping(g)
    if report.stopping:
        print("stopping: true")
        return OK
    witness = ",".join(sorted(report.witness_closed_set))
    print("stopping: false")
    print(f"witness: {witness}")
    return NEGATIVE


def _cmd_normalize(args) -> int:
    g = load_game(args.game)
    save_game(normalize(g), args.output)
    print(f"wrote {args.output}")
    return OK


def _cmd_discount(args) -> int:
    g = load_game(args.game)
    save_game(discount_transform(g, as_fraction(args.delta)), args.output)
    print(f"wrote {args.output}")
    return OK


def _residual_log(g: Game, iterations: int) -> list[str]:
    """Per-sweep residual bounds, replaying the survival recursion."""
    if not check_stopping(g).stopping:
        return [f"{n} residual_bound=n/a" for n in range(1, iterations + 1)]
    from .games import Kind

    ceiling = tail_bound(g, 0)
    alive = {
        s.id: Fraction(0 if s.kind is Kind.TERMINAL else 1) for s in g.states
    }
    lines = []
    for n in range(1, iterations + 1):
        alive = _alive_step(g, alive)
        residual = min(
            tail_bound(g, n), ceiling * max(alive.values(), default=Fraction(0))
        )
        lines.append(f"{n} residual_bound={_pq(residual)}")
    return lines


def _cmd_solve_vi(args) -> int:
    g = load_game(args.game)
    result = value_iterate(
        g, as_fraction(args.epsilon), args.max_iters, keep_history=False
    )
    out_dir = Path(args.out_dir)
    manifest = _write_curves(result.curves, out_dir, args.svg)
    (out_dir / "iterations.log").write_text(
        "\n".join(_residual_log(g, result.iterations)) + "\n"
    )
    run = {
        "epsilon": args.epsilon,
        "max_iters": args.max_iters,
        "iterations": result.iterations,
        "converged": result.converged,
        "fixpoint_reached": result.fixpoint_reached,
        "residual_bound": (
            None if result.residual_bound is None else _pq(result.residual_bound)
        ),
        "note": result.note,
        "states": manifest,
    }
    (out_dir / "run.json").write_text(json.dumps(run, indent=2) + "\n")
    bound = "n/a" if result.residual_bound is None else _pq(result.residual_bound)
    print(
        f"converged={str(result.converged).lower()} "
        f"iterations={result.iterations} residual_bound={bound}"
    )
    return OK if result.converged else LIMIT


def _cmd_solve_determined(args) -> int:
    g = load_game(args.game)
    if args.check_determinacy:
        determined, curves = check_determinacy(g, threads=args.threads)
    else:
        determined, curves = True, solve_determined(g, threads=args.threads)
    if args.out_dir:
        _write_curves(curves, Path(args.out_dir), args.svg)
    else:
        _print_curves(curves)
    if args.check_determinacy:
        print(f"determined: {str(determined).lower()}")
        return OK if determined else NEGATIVE
    return OK


def _cmd_query(args) -> int:
    g = load_game(args.game)
    z = _parse_point(args.point)
    if args.mode == "determined":
        curves = solve_determined(g)
        residual = Fraction(0)
    else:
        result = value_iterate(
            g, as_fraction(args.epsilon), args.max_iters, keep_history=False
        )
        if result.residual_bound is None:
            print("unknown")
            return OK
        curves = result.curves
        residual = result.residual_bound
    print(achievable_within(g, args.state, z, curves, residual))
    return OK


def _cmd_audit(args) -> int:
    g = load_game(args.game)
    curves = _load_curves(Path(args.curves))
    report = audit_game(g, curves)
    print(report.to_text())
    return OK if report.ok else NEGATIVE


def _cmd_betting_sim(args) -> int:
    bg = load_betting(args.betting)
    targets = frozenset(t.strip() for t in args.target.split(",") if t.strip())
    bound = as_fraction(args.bound)
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    factory = ADAM_FACTORIES[args.adam]
    for run in range(args.runs):
        adam = factory(args.seed + run)
        trace = simulate(bg, targets, bound, adam)
        last = trace.steps[-1]
        print(
            f"run {run}: end=({last.vertex},{_pq(last.credit)}) "
            f"steps={len(trace.steps) - 1} reason={trace.end}"
        )
        if out_dir:
            (out_dir / f"trace_{run}.csv").write_text(trace_to_csv(trace))
    print(f"all {args.runs} runs reached the target set")
    return OK


# ---------------------------------------------------------------------------
# Parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paretogames",
        description=(
            "Exact Pareto curves for two-objective total-reward stochastic "
            "games: validation, normalization, value iteration, exact "
            "solving, achievability queries, slope audits, betting "
            "simulations."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the structural game invariants")
    p.add_argument("game")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stopping", help="decide the stopping property")
    p.add_argument("game")
    p.set_defaults(func=_cmd_stopping)

    p = sub.add_parser(
        "normalize",
        help="split to binary successors and move rewards onto minimizer entry states",
    )
    p.add_argument("game")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser(
        "discount", help="reduce a discounted game to a total-reward game"
    )
    p.add_argument("game")
    p.add_argument("--delta", required=True, help="discount factor p/q in (0,1)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_discount)

    p = sub.add_parser("solve-vi", help="value-iterate to a residual target")
    p.add_argument("game")
    p.add_argument("--epsilon", default="1/1000", help="residual target p/q")
    p.add_argument("--max-iters", type=int, default=10000)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--svg", action="store_true", help="also write per-state SVG")
    p.set_defaults(func=_cmd_solve_vi)

    p = sub.add_parser(
        "solve-determined",
        help="exact curves by strategy enumeration (stopping games)",
    )
    p.add_argument("game")
    p.add_argument("--out-dir")
    p.add_argument("--svg", action="store_true")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument(
        "--check-determinacy",
        action="store_true",
        help="verify the curves form a fixpoint and report the verdict",
    )
    p.set_defaults(func=_cmd_solve_determined)

    p = sub.add_parser("query", help="is a point achievable from a state?")
    p.add_argument("game")
    p.add_argument("--state", required=True)
    p.add_argument("--point", required=True, help="x,y with rational coordinates")
    p.add_argument("--mode", choices=["vi", "determined"], default="determined")
    p.add_argument("--epsilon", default="1/1000")
    p.add_argument("--max-iters", type=int, default=10000)
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("audit", help="slope-law audit of a curve directory")
    p.add_argument("game")
    p.add_argument("--curves", required=True, help="directory of per-state CSV")
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("betting-sim", help="simulate the betting-game strategy")
    p.add_argument("betting")
    p.add_argument("--target", required=True, help="comma-separated vertex ids")
    p.add_argument("--bound", default="100", help="credit bound p/q")
    p.add_argument("--adam", choices=sorted(ADAM_FACTORIES), default="random")
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir")
    p.set_defaults(func=_cmd_betting_sim)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _LIMIT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return LIMIT
    except _NEGATIVE_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return NEGATIVE
    except (GameSolverError, ValueError, TypeError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
