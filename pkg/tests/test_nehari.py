"""Ground-state solver against closed forms and its admissibility gates."""

import numpy as np
import pytest

from gsbranch import model, nehari

from . import oracles
from .conftest import smooth_bump


def test_line_soliton_recovered(line_problem):
    rep = nehari.ground_state(line_problem, -1.0)
    assert rep.converged
    assert rep.residual <= 1e-8
    assert rep.nehari_res <= 1e-10
    q = 0.5 * rep.state.norm() ** 2
    assert q == pytest.approx(oracles.SECH_HALF_MASS, rel=1e-6)
    assert rep.state.peak() == pytest.approx(oracles.SECH_PEAK, rel=1e-6)
    # the solver must return the positive representative
    assert np.min(rep.state.values) > -1e-10


def test_line_soliton_profile_pointwise(line_problem):
    rep = nehari.ground_state(line_problem, -1.0)
    x = line_problem.grid.axis_coordinates()
    exact = oracles.soliton_profile_1d(x, -1.0)
    assert np.max(np.abs(rep.state.values - exact)) <= 1e-6


def test_deeper_lambda_scales_like_family(line_problem):
    rep = nehari.ground_state(line_problem, -2.25)
    q = 0.5 * rep.state.norm() ** 2
    assert q == pytest.approx(oracles.soliton_half_mass_1d(-2.25), rel=1e-6)


def test_ray_projection_lands_on_manifold(plane_problem):
    u = smooth_bump(plane_problem.grid, width=1.3, amp=2.0)
    projected, t = nehari.ray_project(plane_problem, u.values, -1.0)
    assert t > 0
    assert abs(nehari.nehari_residual(plane_problem, projected, -1.0)) <= 1e-12


def test_ray_multiplier_scales_quadratic_form(plane_problem):
    """For a single cubic term the ray multiplier has a closed form."""
    u = smooth_bump(plane_problem.grid, width=1.5)
    a = nehari.quadratic_form(plane_problem, u.values, -1.0)
    b = nehari.power_integrals(plane_problem, u.values)[0]
    t = nehari.ray_multiplier(plane_problem, u.values, -1.0)
    assert t == pytest.approx(a / b, rel=1e-12)


def test_positive_lambda_rejected(plane_problem):
    with pytest.raises(nehari.AdmissibilityError):
        nehari.ground_state(plane_problem, 0.5)


def test_bounded_potential_solve():
    """A nonnegative bounded well leaves every lam < 0 admissible."""
    grid = model.GridSpec(dim=1, half_width=20.0, points=256)
    prob = model.ProblemSpec(
        grid=grid,
        operator=model.OperatorSpec(terms=(model.OperatorTerm(s=1.0),)),
        potential=model.PotentialSpec("bounded", k=1.0, l=1.0),
        terms=(model.NonlinearTerm(p=4.0),),
    )
    rep = nehari.ground_state(prob, -0.5)
    assert rep.converged
    assert rep.residual <= 1e-7
    assert rep.functionals.G > 0.0
    # the potential raises the action relative to the free problem
    free = nehari.ground_state(
        model.ProblemSpec(
            grid=grid,
            operator=prob.operator,
            potential=model.PotentialSpec(),
            terms=prob.terms,
        ),
        -0.5,
    )
    assert rep.functionals.Phi > free.functionals.Phi


def test_evaluate_phi_matches_functional_report(plane_problem):
    u = smooth_bump(plane_problem.grid)
    via_phi = nehari.evaluate_phi(plane_problem, u.values, -0.7)
    rep = model.evaluate_functionals(plane_problem, u, -0.7)
    assert via_phi == pytest.approx(rep.Phi, rel=1e-12)


def test_solver_is_deterministic(plane_problem):
    a = nehari.ground_state(plane_problem, -1.0)
    b = nehari.ground_state(plane_problem, -1.0)
    assert np.array_equal(a.state.values, b.state.values)


def test_warm_start_converges_faster(plane_problem):
    cold = nehari.ground_state(plane_problem, -1.1)
    warm = nehari.ground_state(plane_problem, -1.2, init=cold.state)
    assert warm.converged
    assert warm.descent_iters <= cold.descent_iters


def test_fractional_order_solver_runs():
    grid = model.GridSpec(dim=1, half_width=30.0, points=512)
    prob = model.ProblemSpec(
        grid=grid,
        operator=model.OperatorSpec(terms=(model.OperatorTerm(s=0.5),)),
        potential=model.PotentialSpec(),
        terms=(model.NonlinearTerm(p=3.0),),
    )
    rep = nehari.ground_state(prob, -1.0)
    assert rep.converged
    assert rep.residual <= 1e-7
    # fractional far field decays algebraically, not exponentially
    u = rep.state.values
    mid = u[len(u) // 4]
    assert mid > 1e-6 * rep.state.peak()
