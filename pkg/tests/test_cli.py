"""Command-line surface: subcommands, exit codes, file outputs."""
from __future__ import annotations

import json
from fractions import Fraction as F

import pytest

from paretogames import (
    Game,
    Kind,
    StateRecord,
    save_betting,
    save_game,
)
from paretogames.cli import main
from randgen import random_betting_game
import random


@pytest.fixture()
def heating_path(heating, tmp_path):
    p = tmp_path / "heating.json"
    save_game(heating, p)
    return str(p)


@pytest.fixture()
def fig3_path(fig3, tmp_path):
    p = tmp_path / "fig3.json"
    save_game(fig3, p)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# validate / stopping


def test_validate_ok(heating_path, capsys):
    code, out, _ = run(capsys, "validate", heating_path)
    assert code == 0 and out.strip() == "valid"


def test_validate_reports_violations(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "initial": "t",
                "states": [
                    {
                        "id": "t",
                        "kind": "terminal",
                        "reward": ["1/1", "0/1"],
                        "transitions": [{"to": "t", "prob": "1/1"}],
                    }
                ],
            }
        )
    )
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1
    assert "violation:" in out and "terminal reward nonzero" in out


def test_validate_missing_file_is_input_error(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/game.json")
    assert code == 2
    assert err.startswith("error: FileNotFoundError")


def test_stopping_verdicts(fig3_path, tmp_path, capsys):
    code, out, _ = run(capsys, "stopping", fig3_path)
    assert code == 0 and "stopping: true" in out

    loop = Game(
        "a",
        (
            StateRecord("a", Kind.P1, (F(1), F(0)), (("b", F(1)),)),
            StateRecord("b", Kind.P1, (F(0), F(0)), (("a", F(1)),)),
        ),
    )
    p = tmp_path / "loop.json"
    save_game(loop, p)
    code, out, _ = run(capsys, "stopping", str(p))
    assert code == 1
    assert "stopping: false" in out and "witness: a,b" in out


# ---------------------------------------------------------------------------
# normalize / discount round-trips


def test_normalize_output_revalidates(heating_path, tmp_path, capsys):
    out_file = tmp_path / "normal.json"
    code, out, _ = run(capsys, "normalize", heating_path, "-o", str(out_file))
    assert code == 0 and f"wrote {out_file}" in out
    code, out, _ = run(capsys, "validate", str(out_file))
    assert code == 0 and out.strip() == "valid"


def test_discount_output_revalidates_and_stops(fig3_path, tmp_path, capsys):
    out_file = tmp_path / "disc.json"
    code, _, _ = run(
        capsys, "discount", fig3_path, "--delta", "9/10", "-o", str(out_file)
    )
    assert code == 0
    assert run(capsys, "validate", str(out_file))[0] == 0
    code, out, _ = run(capsys, "stopping", str(out_file))
    assert code == 0 and "stopping: true" in out


def test_discount_rejects_bad_delta(fig3_path, tmp_path, capsys):
    code, _, err = run(
        capsys,
        "discount",
        fig3_path,
        "--delta",
        "3/2",
        "-o",
        str(tmp_path / "x.json"),
    )
    assert code == 2 and err.startswith("error: DeltaOutOfRange")


# ---------------------------------------------------------------------------
# solve-vi


def test_solve_vi_five_sweeps_gives_four_vertices(fig3_path, tmp_path, capsys):
    out_dir = tmp_path / "vi"
    code, _, _ = run(
        capsys,
        "solve-vi",
        fig3_path,
        "--max-iters",
        "5",
        "--epsilon",
        "1/1000000000000",
        "--out-dir",
        str(out_dir),
    )
    assert code == 3  # max_iters reached without convergence
    rows = (out_dir / "s0.csv").read_text().strip().splitlines()
    assert rows == [
        "0/1,271/1000",
        "81/200,19/100",
        "27/40,1/10",
        "7/8,0/1",
    ]
    log = (out_dir / "iterations.log").read_text().strip().splitlines()
    assert len(log) == 5
    assert all("residual_bound=" in line for line in log)
    run_info = json.loads((out_dir / "run.json").read_text())
    assert run_info["converged"] is False and run_info["iterations"] == 5


def test_solve_vi_converges_on_heating(heating_path, tmp_path, capsys):
    out_dir = tmp_path / "vi"
    code, out, _ = run(
        capsys, "solve-vi", heating_path, "--out-dir", str(out_dir)
    )
    assert code == 0
    assert "converged=true" in out and "iterations=200" in out
    run_info = json.loads((out_dir / "run.json").read_text())
    assert run_info["converged"] is True
    assert run_info["fixpoint_reached"] is False


def test_solve_vi_svg_output(fig3_path, tmp_path, capsys):
    out_dir = tmp_path / "svg"
    code, _, _ = run(
        capsys,
        "solve-vi",
        fig3_path,
        "--max-iters",
        "5",
        "--epsilon",
        "1/1000000000000",
        "--svg",
        "--out-dir",
        str(out_dir),
    )
    assert code == 3
    svg = (out_dir / "s0.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


# ---------------------------------------------------------------------------
# solve-determined / query


def test_solve_determined_heating_pins_cc_curve(
    heating_path, tmp_path, capsys
):
    out_dir = tmp_path / "det"
    code, _, _ = run(
        capsys, "solve-determined", heating_path, "--out-dir", str(out_dir)
    )
    assert code == 0
    rows = (out_dir / "CC1.csv").read_text().strip().splitlines()
    assert rows == ["-2/1,-1/1", "-1/1,-2/1"]


def test_solve_determined_verdict_flag(heating_path, capsys):
    code, out, _ = run(
        capsys, "solve-determined", heating_path, "--check-determinacy"
    )
    assert code == 0 and "determined: true" in out


def test_query_determined_yes(fig3_path, capsys):
    code, out, _ = run(
        capsys,
        "query",
        fig3_path,
        "--state",
        "s0",
        "--point",
        "2/5,1/2",
    )
    assert code == 0 and out.strip() == "yes"


def test_query_vi_no(heating_path, capsys):
    code, out, _ = run(
        capsys,
        "query",
        heating_path,
        "--state",
        "CC1",
        "--point",
        "0,0",
        "--mode",
        "vi",
    )
    assert code == 0 and out.strip() == "no"


def test_query_unknown_state_is_input_error(fig3_path, capsys):
    code, _, err = run(
        capsys,
        "query",
        fig3_path,
        "--state",
        "zz",
        "--point",
        "0,0",
    )
    assert code == 2 and err.startswith("error: UnknownState")


# ---------------------------------------------------------------------------
# audit


def test_audit_of_solver_output_passes(heating_path, tmp_path, capsys):
    out_dir = tmp_path / "curves"
    assert (
        run(
            capsys,
            "solve-determined",
            heating_path,
            "--out-dir",
            str(out_dir),
        )[0]
        == 0
    )
    code, out, _ = run(
        capsys, "audit", heating_path, "--curves", str(out_dir)
    )
    assert code == 0 and out.startswith("PASS")


def test_audit_catches_corruption(heating_path, tmp_path, capsys):
    out_dir = tmp_path / "curves"
    run(capsys, "solve-determined", heating_path, "--out-dir", str(out_dir))
    (out_dir / "CC1.csv").write_text("-1/1,-1/1\n0/1,-2/1\n")
    code, out, _ = run(
        capsys, "audit", heating_path, "--curves", str(out_dir)
    )
    assert code == 1 and out.startswith("FAIL") and "CC1" in out


# ---------------------------------------------------------------------------
# betting-sim


@pytest.fixture()
def betting_path(tmp_path):
    bg, targets = random_betting_game(random.Random(3))
    p = tmp_path / "bet.json"
    save_betting(bg, p)
    return str(p), ",".join(sorted(targets))


def test_betting_sim_writes_traces(betting_path, tmp_path, capsys):
    path, targets = betting_path
    out_dir = tmp_path / "traces"
    code, out, _ = run(
        capsys,
        "betting-sim",
        path,
        "--target",
        targets,
        "--adam",
        "random",
        "--runs",
        "3",
        "--seed",
        "9",
        "--out-dir",
        str(out_dir),
    )
    assert code == 0
    assert "all 3 runs reached the target set" in out
    for i in range(3):
        lines = (out_dir / f"trace_{i}.csv").read_text().splitlines()
        assert lines[0] == "step,vertex,credit,potential"
    assert "reason=" in out and "end=" in out


def test_betting_sim_deterministic_given_seed(betting_path, capsys):
    path, targets = betting_path
    argv = [
        "betting-sim",
        path,
        "--target",
        targets,
        "--adam",
        "mixed",
        "--runs",
        "5",
        "--seed",
        "4",
    ]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_betting_sim_rejects_unknown_target(betting_path, capsys):
    path, _ = betting_path
    code, _, err = run(
        capsys, "betting-sim", path, "--target", "nosuchvertex"
    )
    assert code == 2


def test_betting_sim_reports_bound_escape(tmp_path, capsys):
    from paretogames import BettingConfig, BettingGame, BetVertex

    bg = BettingGame(
        (
            BetVertex("v0", "eve", (("v1", F(3, 5)), ("v0", F(2, 5)))),
            BetVertex("v1", "eve", (("v1", F(1, 4)), ("v0", F(3, 4)))),
        ),
        BettingConfig("v1", F(1, 2)),
    )
    p = tmp_path / "escape.json"
    save_betting(bg, p)
    code, _, err = run(
        capsys,
        "betting-sim",
        str(p),
        "--target",
        "v0",
        "--adam",
        "random",
        "--seed",
        "71333",
    )
    assert code == 3 and err.startswith("error: StepBoundExceeded")
