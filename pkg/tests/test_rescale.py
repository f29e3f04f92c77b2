"""Dilation accuracy and scaling-frame bookkeeping."""

import numpy as np
import pytest

from gsbranch import model, rescale

from . import oracles


def make_grid(dim=1, half_width=20.0, points=256):
    return model.GridSpec(dim=dim, half_width=half_width, points=points)


def test_dilate_exact_on_single_mode():
    grid = make_grid()
    x = grid.axis_coordinates()
    k0 = 2.0 * np.pi * 3.0 / (2.0 * grid.half_width)
    field = model.Field(grid, np.cos(k0 * x))
    out = rescale.dilate(field, 2.0)
    assert np.allclose(out.values, np.cos(k0 * x / 2.0), atol=1e-12)


def test_dilate_gaussian_spectral_accuracy():
    grid = make_grid(dim=2, half_width=12.0, points=128)
    r2 = model.radius_field(grid) ** 2
    field = model.Field(grid, np.exp(-r2))
    out = rescale.dilate(field, 1.5)
    assert np.allclose(out.values, np.exp(-r2 / 1.5**2), atol=1e-10)


def test_dilate_identity():
    grid = make_grid()
    vals = np.exp(-model.radius_field(grid) ** 2)
    out = rescale.dilate(model.Field(grid, vals), 1.0)
    assert np.allclose(out.values, vals, atol=1e-12)


def test_dilate_shrink_clips_outside_samples():
    grid = make_grid()
    vals = np.exp(-model.radius_field(grid) ** 2)
    out = rescale.dilate(model.Field(grid, vals), 0.5)
    x = grid.axis_coordinates()
    outside = np.abs(x) > 0.5 * grid.half_width
    assert np.all(out.values[outside] == 0.0)
    inside = np.abs(x) <= 0.4 * grid.half_width
    assert np.allclose(out.values[inside], np.exp(-(x[inside] / 0.5) ** 2), atol=1e-10)


def test_dilate_mass_scaling_law():
    grid = make_grid(dim=2, half_width=12.0, points=128)
    vals = np.exp(-model.radius_field(grid) ** 2)
    field = model.Field(grid, vals)
    c = 1.5
    out = rescale.dilate(field, c)
    # int u(x/c)^2 dx = c^N int u^2
    assert out.norm() ** 2 == pytest.approx(c**2 * field.norm() ** 2, rel=1e-10)


def test_dilate_rejects_nonpositive_factor():
    grid = make_grid(points=64)
    field = model.Field(grid, np.zeros(grid.shape))
    with pytest.raises(ValueError):
        rescale.dilate(field, 0.0)


def mixed_problem():
    return model.ProblemSpec(
        grid=model.GridSpec(dim=2, half_width=12.0, points=64),
        operator=model.OperatorSpec(terms=(model.OperatorTerm(s=1.0),)),
        potential=model.PotentialSpec(),
        terms=(model.NonlinearTerm(p=3.0), model.NonlinearTerm(p=5.0)),
    )


def test_frame_scales_closed_forms():
    prob = mixed_problem()
    c, amp = rescale.frame_scales(prob, -4.0, "w")
    assert c == pytest.approx(2.0)
    assert amp == pytest.approx(4.0 ** (-1.0 / 1.0))
    c, amp = rescale.frame_scales(prob, -4.0, "v")
    assert c == pytest.approx(2.0)
    assert amp == pytest.approx(4.0 ** (-1.0 / 3.0))
    with pytest.raises(ValueError):
        rescale.frame_scales(prob, 1.0, "w")
    with pytest.raises(ValueError):
        rescale.frame_scales(prob, -1.0, "x")


def test_rescale_state_collapses_exact_family(line_problem):
    lam = -2.3
    grid = line_problem.grid
    x = grid.axis_coordinates()
    state = model.Field(grid, oracles.soliton_profile_1d(x, lam))
    framed = rescale.rescale_state(line_problem, state, lam, "w")
    reference = oracles.soliton_profile_1d(x, -1.0)
    assert np.max(np.abs(framed.values - reference)) <= 1e-8


def test_limit_problem_selects_ends():
    prob = mixed_problem()
    w = rescale.limit_problem(prob, "w")
    assert len(w.terms) == 1 and w.terms[0].p == 3.0
    v = rescale.limit_problem(prob, "v")
    assert len(v.terms) == 1 and v.terms[0].p == 5.0
    assert len(v.operator.terms) == 1


def test_limit_problem_rejects_vanishing_weight_and_potentials():
    prob = mixed_problem()
    weighted = model.ProblemSpec(
        grid=prob.grid,
        operator=prob.operator,
        potential=prob.potential,
        terms=(
            model.NonlinearTerm(p=3.0, weight=model.WeightProfile("rational", k=1.0, l=1.0)),
            model.NonlinearTerm(p=5.0),
        ),
    )
    # the decaying weight vanishes at infinity, so the w-limit is not a
    # constant-coefficient problem; the v-limit sees its origin value 1
    with pytest.raises(ValueError):
        rescale.limit_problem(weighted, "w")
    v = rescale.limit_problem(weighted, "v")
    assert v.terms[0].p == 5.0

    potential_prob = model.ProblemSpec(
        grid=prob.grid,
        operator=prob.operator,
        potential=model.PotentialSpec(kind="bounded"),
        terms=prob.terms,
    )
    with pytest.raises(ValueError):
        rescale.limit_problem(potential_prob, "w")


def test_convergence_report_on_exact_family(line_problem):
    grid = line_problem.grid
    x = grid.axis_coordinates()
    states = [
        (lam, model.Field(grid, oracles.soliton_profile_1d(x, lam)))
        for lam in (-2.0, -1.0, -0.5)
    ]
    report = rescale.convergence_report(line_problem, states, "w")
    assert report.limit_mass == pytest.approx(oracles.SECH_HALF_MASS, rel=1e-6)
    # the pure-power family is scale covariant: every frame distance is
    # bounded by the solver tolerance of the limit state alone
    assert max(report.distances) <= 1e-5


def test_distance_at_extreme_picks_frame_end():
    report = rescale.ConvergenceReport(
        frame="w", lams=(-2.0, -1.0, -0.5), distances=(0.3, 0.2, 0.1), limit_mass=2.0
    )
    assert report.distance_at_extreme() == 0.1
    report = rescale.ConvergenceReport(
        frame="v", lams=(-2.0, -1.0, -0.5), distances=(0.3, 0.2, 0.1), limit_mass=2.0
    )
    assert report.distance_at_extreme() == 0.3
