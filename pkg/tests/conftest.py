import numpy as np
import pytest

from gsbranch import model


@pytest.fixture(scope="session")
def line_problem():
    """1D classical quartic problem on a box wide enough for clean tails."""
    grid = model.GridSpec(dim=1, half_width=40.0, points=4096)
    return model.ProblemSpec(
        grid=grid,
        operator=model.OperatorSpec(terms=(model.OperatorTerm(s=1.0),)),
        potential=model.PotentialSpec(),
        terms=(model.NonlinearTerm(p=4.0),),
    )


@pytest.fixture(scope="session")
def line_soliton(line_problem):
    """Exact sech profile for lam = -1 sampled on the line grid."""
    from . import oracles

    x = line_problem.grid.axis_coordinates()
    return model.Field(line_problem.grid, oracles.soliton_profile_1d(x, -1.0))


@pytest.fixture(scope="session")
def plane_problem():
    """Small 2D cubic problem used by the spectral and solver tests."""
    grid = model.GridSpec(dim=2, half_width=12.0, points=128)
    return model.ProblemSpec(
        grid=grid,
        operator=model.OperatorSpec(terms=(model.OperatorTerm(s=1.0),)),
        potential=model.PotentialSpec(),
        terms=(model.NonlinearTerm(p=3.0),),
    )


def smooth_bump(grid, width=2.0, amp=1.0):
    r = model.radius_field(grid)
    return model.Field(grid, amp * np.exp(-((r / width) ** 2)))
