"""Shared fixtures: solved spectra are expensive, so cache them per session."""

import numpy as np
import pytest

from ptkrein import Grid, build_hamiltonian, normalize_and_phase_fix, parse_potential, solve_spectrum


def _solved(src, half_width, n, k):
    expr = parse_potential(src)
    grid = Grid(half_width, n)
    H = build_hamiltonian(expr, grid)
    pairs = [normalize_and_phase_fix(p) for p in solve_spectrum(H, k)]
    return expr, grid, H, pairs


@pytest.fixture(scope="session")
def osc():
    """Harmonic oscillator, wide box: energies 1, 3, 5, 7, 9."""
    return _solved("x^2", 10.0, 2001, 5)


@pytest.fixture(scope="session")
def ix3():
    """The imaginary cubic potential on the same box."""
    return _solved("i*x^3", 10.0, 2001, 5)


@pytest.fixture(scope="session")
def ix3_dyn():
    """Narrower box for time evolution; wide boxes carry high modes with
    large |Im E| that amplify roundoff exponentially under any scheme."""
    return _solved("i*x^3", 5.0, 1001, 3)


@pytest.fixture()
def rng():
    return np.random.default_rng(987654321)
