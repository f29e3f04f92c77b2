"""Identity residuals, scaling fits and slope consistency checks."""

import numpy as np
import pytest

from gsbranch import model, nehari, verify

from . import oracles


def test_pohozaev_vanishes_on_exact_soliton(line_problem, line_soliton):
    res = verify.pohozaev_residual(line_problem, line_soliton, -1.0)
    assert res <= 1e-9


def test_pohozaev_detects_imposters(line_problem):
    """A field that solves nothing should leave an order-one residual."""
    grid = line_problem.grid
    fake = model.Field(grid, 1.7 * np.exp(-model.radius_field(grid) ** 2))
    res = verify.pohozaev_residual(line_problem, fake, -1.0)
    assert res > 1e-2


def test_pohozaev_normalization_survives_vanishing_sides(plane_problem):
    """At N = 2s both classical sides vanish identically.

    The residual must be measured against the largest individual
    contribution, otherwise this case degenerates to the meaningless
    ratio 0/0 reported as 1.
    """
    rep = nehari.ground_state(plane_problem, -1.0)
    res = verify.pohozaev_residual(plane_problem, rep.state, -1.0)
    assert res <= 1e-3
    assert res > 0.0


def test_scaling_fit_recovers_family_exponent():
    lams = np.array([-4.0, -2.0, -1.0, -0.5, -0.25])
    qs = np.array([oracles.soliton_half_mass_1d(l) for l in lams])
    fit = verify.scaling_fit(lams, qs)
    assert fit.exponent == pytest.approx(0.5, abs=1e-12)
    assert fit.max_rel_dev <= 1e-12
    assert fit.points == 5


def test_scaling_fit_rejects_degenerate_input():
    with pytest.raises(ValueError):
        verify.scaling_fit(np.array([-1.0, -2.0]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        verify.scaling_fit(np.array([-1.0, -2.0, 1.0]), np.array([1.0, 2.0, 3.0]))


def test_mass_slope_consistency_exact_family():
    lams = np.linspace(-3.0, -0.5, 21)
    qs = 2.0 * np.sqrt(-lams)
    # quartic line family: Phi(lam) = (4/3) |lam|^(3/2), so dPhi/dlam = -Q
    phis = (4.0 / 3.0) * (-lams) ** 1.5
    errs = verify.mass_slope_consistency(lams, qs, phis)
    assert len(errs) == 19
    assert max(errs) <= 5e-3


def test_mass_slope_consistency_flags_wrong_sign():
    lams = np.linspace(-3.0, -0.5, 11)
    qs = 2.0 * np.sqrt(-lams)
    errs = verify.mass_slope_consistency(lams, qs, -(4.0 / 3.0) * (-lams) ** 1.5)
    assert min(errs) > 0.5


def test_nonuniform_stencil_exact_on_quadratic_action():
    """Irregular spacing must not degrade the interior difference.

    With Q linear in lam the matching action is quadratic and the
    three-point nonuniform stencil differentiates it exactly.
    """
    rng = np.random.default_rng(11)
    lams = np.sort(-np.cumsum(0.05 + rng.random(25)) / 5.0)
    qs = 3.0 - 2.0 * lams
    phis = -3.0 * lams + lams**2
    errs = verify.mass_slope_consistency(lams, qs, phis)
    assert max(errs) <= 1e-12


def test_envelope_check_brackets_pure_power(line_problem):
    rep = nehari.ground_state(line_problem, -1.0)
    env = verify.envelope_check(
        line_problem, [-1.0], [rep.functionals.Q], [rep.functionals.Phi]
    )
    assert env.ok
    # quartic on the line: Phi = (2/3) (-lam) Q exactly
    assert env.lower == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert env.upper == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert env.ratios[0] == pytest.approx(2.0 / 3.0, rel=1e-5)


def test_envelope_check_fails_outside_band(line_problem):
    env = verify.envelope_check(line_problem, [-1.0], [2.0], [2.0 * 0.9])
    assert not env.ok


def test_check_result_serialization():
    res = verify.CheckResult(
        name="demo", passed=True, measured=1.0, expected=1.0, tolerance=0.1, detail="ok"
    )
    blob = res.to_json()
    assert blob["name"] == "demo"
    assert blob["passed"] is True
