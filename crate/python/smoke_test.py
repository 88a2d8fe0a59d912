"""Smoke test for the trajoracle extension module.

Build and install it first, for example with
``maturin develop --release -m crates/python/Cargo.toml``, then run
``python python/smoke_test.py`` from the repository root.
"""

import json
import math
import pathlib
import sys

import trajoracle as t

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * (1.0 + abs(b))


def same_point(p, q, tol=1e-9):
    return close(p.x, q.x, tol) and close(p.y, q.y, tol)


def test_values():
    p = t.Point2(3.0, 4.0)
    assert close(p.distance(t.Point2(0.0, 0.0)), 5.0)
    assert p == t.Point2(3.0, 4.0)
    line = t.DirectedLine(t.Point2(0.0, 3.0), (1.0, 0.0))
    assert close(line.distance_to(t.Point2(0.0, 0.0)), 3.0)
    route = t.LinearTrajectory(t.Point2(-4.0, 3.0), (1.0, 0.0), 1.0)
    t_in, t_out = route.entry_exit_times(t.Circle(t.Point2(0.0, 0.0), 5.0))
    assert close(t_in, 0.0) and close(t_out, 8.0)
    assert route.entry_exit_times(t.Circle(t.Point2(0.0, 50.0), 5.0)) is None
    try:
        t.Radar("bad", t.Point2(0.0, 0.0), -1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative radius accepted")


def test_case1():
    c1, c2 = t.Point2(0.0, 0.0), t.Point2(4.0, 0.0)
    cands = t.solve_case1(c1, 1.0, c2, 1.0)
    assert cands.case == "1" and len(cands) == 4
    assert all(r < 1e-6 for r in cands.residuals)
    for line in cands.routes:
        assert close(line.distance_to(c1), 1.0) and close(line.distance_to(c2), 1.0)


def test_case2():
    r1 = t.Radar("r1", t.Point2(0.0, 0.0), 5.0)
    r2 = t.Radar("r2", t.Point2(10.0, 3.0), 5.0)
    cands = t.solve_case2(r1, 3.0, 0.0, 8.0, r2, 9.0)
    assert 1 <= len(cands) <= 4
    truth = t.Point2(-4.0, 3.0)
    assert any(same_point(c.position_at(0.0), truth, 1e-6) for c in cands.routes)


def test_case3_ratio():
    radar = t.Radar("r1", t.Point2(0.0, 0.0), 1.0)
    cands = t.solve_case3(radar, 2.0, 4.0, t.Point2(3.0, 0.0), 0.0)
    assert len(cands) >= 1
    for c in cands.routes:
        t_in, t_out = c.entry_exit_times(radar.threat)
        assert close(t_in, 2.0, 1e-6) and close(t_out, 4.0, 1e-6)


def test_bonus():
    threat = t.Circle(t.Point2(4.0, 8.0), 2.0)
    cands = t.solve_bonus(t.Point2(0.0, 0.0), (1.0, 0.0), 10.0, 4.0, threat, 1.0)
    assert cands.case == "bonus"
    assert len(cands.construction) >= 1
    turns = [c for c in cands.routes if same_point(c.turn_point, t.Point2(4.0, 0.0), 1e-9)]
    assert turns, cands.routes
    ux, uy = turns[0].leg2_direction
    assert close(ux, 0.0) and close(uy, 1.0)


def test_scenario_round_trip():
    scenario = t.Scenario.read(str(FIXTURES / "case4_two_chords.json"))
    assert scenario.case == "4"
    assert t.Scenario.from_json(scenario.to_json()).to_json() == scenario.to_json()
    obs = json.loads(scenario.simulate())
    assert obs["version"] == t.FORMAT_VERSION
    times = {o["radar_id"]: (o["entry_time"], o["exit_time"]) for o in obs["observations"]["radars"]}
    r1, r2 = scenario.radars
    (t_a, t_b), (t_c, t_d) = times[r1.id], times[r2.id]
    cands = t.solve_case4(r1, t_a, t_b, r2, t_c, t_d)
    truth = scenario.ground_truth
    assert any(
        same_point(c.position_at(truth.anchor_time), truth.anchor, 1e-6)
        and math.isclose(c.speed, truth.speed, rel_tol=1e-6)
        for c in cands.routes
    )
    again = t.CandidateSet.from_json(cands.to_json())
    assert again.to_json() == cands.to_json()
    svg = scenario.render_svg(cands, construction=True)
    assert svg.startswith("<svg") and svg.count('class="candidate case-4"') == len(cands)


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok  {test.__name__}")
    print(f"{len(tests)} passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
