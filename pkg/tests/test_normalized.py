"""Mass-curve inversion on a family whose curve is known in closed form."""

import numpy as np
import pytest

from gsbranch import branch, model, nehari, normalized


def line_problem(points=512):
    return model.ProblemSpec(
        grid=model.GridSpec(dim=1, half_width=30.0, points=points),
        operator=model.OperatorSpec(terms=(model.OperatorTerm(s=1.0),)),
        potential=model.PotentialSpec(),
        terms=(model.NonlinearTerm(p=4.0),),
    )


@pytest.fixture(scope="module")
def short_branch():
    prob = line_problem(points=256)
    record = branch.continue_branch(
        prob, -2.0, -0.5, target_points=5, morse_stride=0
    )
    return prob, record


def test_unique_preimage_on_monotone_curve():
    prob = line_problem()
    # Q(lam) = 2 sqrt(-lam), so rho = 2 sqrt(0.75) pins lam = -0.75
    rho = 2.0 * np.sqrt(0.75)
    report = normalized.solve_normalized(
        prob, rho, lam_range=(-2.0, -0.5), n_points=8
    )
    assert len(report.solutions) == 1
    sol = report.solutions[0]
    assert sol.lam == pytest.approx(-0.75, abs=5e-3)
    assert abs(sol.q - rho) <= 1e-4 * rho
    assert sol.stability == "stable"
    assert sol.dqdlam < 0


def test_mass_outside_curve_range(short_branch):
    prob, record = short_branch
    report = normalized.solve_normalized(prob, 50.0, record=record)
    assert report.solutions == []
    assert any("no crossing" in msg for msg in report.messages)


def test_exact_grid_point_hit(short_branch):
    prob, record = short_branch
    rho = record.points[0].q
    report = normalized.solve_normalized(prob, rho, record=record)
    assert len(report.solutions) == 1
    sol = report.solutions[0]
    assert sol.lam == record.points[0].lam
    assert sol.iterations == 0


def test_dropped_states_are_reported(short_branch):
    prob, record = short_branch
    stripped = branch.BranchRecord(
        points=[
            branch.BranchPoint(
                pt.lam, pt.q, pt.phi, pt.morse, pt.dqdlam,
                pt.pohozaev_res, pt.nehari_res, pt.stability,
            )
            for pt in record.points
        ]
    )
    rho = 0.5 * (record.points[0].q + record.points[1].q)
    report = normalized.solve_normalized(prob, rho, record=stripped)
    assert report.solutions == []
    assert any("states were dropped" in msg for msg in report.messages)


def test_rejects_nonpositive_mass(short_branch):
    prob, _ = short_branch
    with pytest.raises(ValueError):
        normalized.solve_normalized(prob, 0.0, lam_range=(-2.0, -0.5))


def test_needs_branch_or_range(short_branch):
    prob, _ = short_branch
    with pytest.raises(ValueError):
        normalized.solve_normalized(prob, 1.0)
