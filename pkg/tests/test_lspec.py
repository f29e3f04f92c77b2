"""Linearized operator, sector eigensolves, dense cross-checks.

The 1D quartic soliton gives closed-form spectra: the second variation
has potential well 1 - 6 sech^2 (even ground eigenvalue -3, translation
zero mode, continuum from 1), and the companion operator with well
1 - 2 sech^2 annihilates the soliton itself.
"""

import numpy as np
import pytest

from gsbranch import lspec, model, nehari, spectral

from . import oracles


@pytest.fixture(scope="module")
def line_state():
    grid = model.GridSpec(dim=1, half_width=25.0, points=512)
    prob = model.ProblemSpec(
        grid=grid,
        operator=model.OperatorSpec(terms=(model.OperatorTerm(s=1.0),)),
        potential=model.PotentialSpec(),
        terms=(model.NonlinearTerm(p=4.0),),
    )
    rep = nehari.ground_state(prob, -1.0)
    return prob, rep.state


def test_even_ground_eigenvalue_closed_form(line_state):
    prob, state = line_state
    spec = lspec.morse_and_kernel(prob, state, -1.0, sector="even", count=4)
    assert spec.converged
    assert spec.morse == 1
    assert spec.kernel_dim == 0
    assert spec.nondegenerate
    assert spec.eigenvalues[0] == pytest.approx(-3.0, abs=1e-6)
    # next even mode sits at the continuum edge of the periodic box
    assert spec.eigenvalues[1] >= 0.9


def test_full_sector_sees_translation_zero_mode(line_state):
    prob, state = line_state
    lin = lspec.make_linearized(prob, state.values, -1.0, "plus")
    evals, vecs, res = lspec.smallest_eigenpairs(lin, 3, sector="full")
    assert evals[0] == pytest.approx(-3.0, abs=1e-6)
    assert abs(evals[1]) <= 1e-7 * lin.norm_bound()
    du = spectral.partial_derivative(prob.grid, state.values, 0).reshape(-1)
    cos = abs(np.dot(vecs[:, 1], du)) / np.linalg.norm(du)
    assert cos >= 0.9999


def test_companion_operator_annihilates_the_state(line_state):
    prob, state = line_state
    lin = lspec.make_linearized(prob, state.values, -1.0, "minus")
    out = lin.apply(state.values)
    assert np.linalg.norm(out) <= 1e-7 * np.linalg.norm(state.values)
    evals, vecs, _ = lspec.smallest_eigenpairs(lin, 2, sector="even")
    assert abs(evals[0]) <= 1e-7 * lin.norm_bound()
    cos = abs(np.dot(vecs[:, 0], state.values.reshape(-1)))
    cos /= np.linalg.norm(state.values)
    assert cos >= 0.9999


def _dense_sector_eigs(prob, lin, count):
    """Eigenvalues of the operator restricted to the even sector, densely."""
    grid = prob.grid
    n = grid.points**grid.dim
    a = oracles.dense_matrix(lambda v: lin.apply(v.reshape(grid.shape)), n)
    refl = oracles.dense_matrix(
        lambda v: model.symmetrize_values(grid, v.reshape(grid.shape)), n
    )
    w, basis = np.linalg.eigh(refl)
    q_even = basis[:, w > 0.5]
    inner = q_even.T @ a @ q_even
    return np.sort(np.linalg.eigvalsh(inner))[:count]


@pytest.mark.parametrize("dim,points", [(1, 64), (2, 24)])
def test_lobpcg_matches_dense_even_sector(dim, points):
    grid = model.GridSpec(dim=dim, half_width=10.0, points=points)
    prob = model.ProblemSpec(
        grid=grid,
        operator=model.OperatorSpec(terms=(model.OperatorTerm(s=1.0),)),
        potential=model.PotentialSpec(),
        terms=(model.NonlinearTerm(p=4.0),),
    )
    rep = nehari.ground_state(prob, -1.0)
    lin = lspec.make_linearized(prob, rep.state.values, -1.0, "plus")
    dense = _dense_sector_eigs(prob, lin, 4)
    evals, _, res = lspec.smallest_eigenpairs(lin, 4, sector="even")
    assert np.allclose(evals, dense, atol=1e-6), (evals, dense)


def test_eigenpair_residuals_are_reported(line_state):
    prob, state = line_state
    lin = lspec.make_linearized(prob, state.values, -1.0, "plus")
    evals, vecs, res = lspec.smallest_eigenpairs(lin, 3, sector="even")
    for j in range(len(evals)):
        v = vecs[:, j]
        direct = np.linalg.norm(
            lin.apply(v.reshape(prob.grid.shape)).reshape(-1) - evals[j] * v
        )
        assert res[j] == pytest.approx(direct, rel=1e-10)
        assert abs(np.linalg.norm(v) - 1.0) <= 1e-12


def test_even_sector_vectors_are_even(line_state):
    prob, state = line_state
    lin = lspec.make_linearized(prob, state.values, -1.0, "plus")
    _, vecs, _ = lspec.smallest_eigenpairs(lin, 3, sector="even")
    for j in range(vecs.shape[1]):
        v = vecs[:, j].reshape(prob.grid.shape)
        sym = model.symmetrize_values(prob.grid, v)
        assert np.linalg.norm(sym - v) <= 1e-10


def test_krylov_solve_inverts_in_even_sector(line_state):
    prob, state = line_state
    lin = lspec.make_linearized(prob, state.values, -1.0, "plus")
    grid = prob.grid
    x_ref = model.symmetrize_values(grid, np.exp(-model.radius_field(grid) ** 2))
    b = lin.apply(x_ref)
    x, ok, res = lspec.krylov_solve(lin, b)
    assert ok
    assert res <= 1e-7
    assert np.linalg.norm(x - x_ref) <= 1e-5 * np.linalg.norm(x_ref)


def test_translation_modes_match_spectral_derivatives():
    grid = model.GridSpec(dim=2, half_width=10.0, points=96)
    prob = model.ProblemSpec(
        grid=grid,
        operator=model.OperatorSpec(terms=(model.OperatorTerm(s=1.0),)),
        potential=model.PotentialSpec(),
        terms=(model.NonlinearTerm(p=3.0),),
    )
    rep = nehari.ground_state(prob, -1.0)
    modes = lspec.translation_modes(prob, rep.state)
    assert len(modes) == 2
    for ax, mode in enumerate(modes):
        direct = spectral.partial_derivative(grid, rep.state.values, ax)
        assert np.allclose(mode, direct)


def test_subspace_alignment_bounds():
    grid = model.GridSpec(dim=1, half_width=1.0, points=16)
    rng = np.random.default_rng(3)
    a = rng.standard_normal(16)
    b = rng.standard_normal(16)
    same = lspec.subspace_alignment(grid, [a], [2.5 * a])
    assert same == pytest.approx(1.0, abs=1e-12)
    b_perp = b - (np.dot(a, b) / np.dot(a, a)) * a
    assert lspec.subspace_alignment(grid, [a], [b_perp]) <= 1e-12


def test_linear_ground_levels():
    grid = model.GridSpec(dim=1, half_width=25.0, points=512)
    free = model.ProblemSpec(
        grid=grid,
        operator=model.OperatorSpec(terms=(model.OperatorTerm(s=1.0),)),
        potential=model.PotentialSpec(),
        terms=(model.NonlinearTerm(p=4.0),),
    )
    assert lspec.linear_ground(free) == 0.0
    welled = model.ProblemSpec(
        grid=grid,
        operator=free.operator,
        potential=model.PotentialSpec("bounded", k=2.0, l=1.0),
        terms=free.terms,
    )
    level = lspec.linear_ground(welled)
    assert 0.0 < level < 1.0
