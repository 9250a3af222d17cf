import numpy as np
import pytest

from ptkrein import Grid, parse_potential, refine_eigenvalue_shooting
from ptkrein.errors import BasinEscape, NoConvergence


def test_box_ground_state():
    E = refine_eigenvalue_shooting(parse_potential("0"), 2.46, Grid(1.0, 501))
    assert abs(E - (np.pi / 2.0) ** 2) < 1e-8


def test_box_excited_states():
    for k in (2, 3):
        exact = (k * np.pi / 2.0) ** 2
        E = refine_eigenvalue_shooting(parse_potential("0"), exact + 0.01, Grid(1.0, 801))
        assert abs(E - exact) < 1e-7


def test_oscillator_ground_state():
    E = refine_eigenvalue_shooting(parse_potential("x^2"), 1.0003, Grid(10.0, 2001))
    assert abs(E - 1.0) < 1e-8


def test_oscillator_excited_state():
    E = refine_eigenvalue_shooting(parse_potential("x^2"), 3.002, Grid(10.0, 2001))
    assert abs(E - 3.0) < 1e-7


def test_imaginary_cubic_stays_real(ix3):
    _, grid, _, pairs = ix3
    expr = parse_potential("i*x^3")
    E = refine_eigenvalue_shooting(expr, pairs[0].energy, grid)
    assert abs(E.imag) < 1e-9
    assert abs(E - pairs[0].energy) < 1e-4  # two independent routes agree


def test_refinement_beats_matrix_discretization(ix3):
    # the marching integrator is 4th order, the matrix only 2nd: refining
    # from the matrix value moves it toward the continuum
    _, grid, _, pairs = ix3
    expr = parse_potential("i*x^3")
    fine = refine_eigenvalue_shooting(expr, pairs[0].energy, Grid(10.0, 4001))
    coarse = refine_eigenvalue_shooting(expr, pairs[0].energy, grid)
    assert abs(fine - coarse) < 5e-6


def test_basin_escape():
    with pytest.raises(BasinEscape):
        # seeded far from any eigenvalue of the box, between wide-spaced levels
        refine_eigenvalue_shooting(
            parse_potential("0"), 4.5, Grid(1.0, 501), trust_radius=0.3
        )


def test_no_convergence_budget():
    with pytest.raises(NoConvergence):
        refine_eigenvalue_shooting(
            parse_potential("x^2"), 1.4, Grid(10.0, 1001), max_iter=1
        )
