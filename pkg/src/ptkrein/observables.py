"""Currents, transition amplitudes, and operator averages in the Krein form.

The probability current here is the bilinear

    j = psi * d(theta psi)/dx - (theta psi) * d(psi)/dx,

which is conserved for real-energy solutions of a PT-symmetric Hamiltonian
and vanishes identically on bound states in the theta psi = psi gauge.  The
familiar current built from psi* instead of theta psi fails its continuity
equation as soon as Im V != 0; `current_density` can compute that variant
too, as a counterexample harness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .errors import ComplexEigenvalue, GridMismatch, NeutralState, ZeroVector
from .krein import NEUTRALITY_TOL, Grid, WaveFunction, apply_theta, hilbert_inner, krein_inner


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearOperator:
    """A linear action on wavefunctions, tagged with theta-invariance.

    Hamiltonian, momentum, i*x and parity commute with theta and may carry
    observable averages; plain position anticommutes (theta x theta = -x)
    and is tagged non-invariant.
    """

    kind: str
    grid: Grid
    theta_invariant: bool
    matrix: scipy.sparse.spmatrix

    def apply(self, psi):
        if psi.grid != self.grid:
            raise GridMismatch(f"{self.kind} operator built for a different grid")
        return WaveFunction(self.grid, self.matrix @ psi.samples)

    def as_sparse(self):
        return self.matrix


def hamiltonian_operator(H):
    return LinearOperator("hamiltonian", H.grid, True, H.as_sparse())


def momentum_operator(grid):
    """-i d/dx by central differences with implicit zero boundaries."""
    e = np.full(grid.n - 1, 1.0 / (2.0 * grid.h))
    mat = -1j * scipy.sparse.diags([e, -e], [1, -1], format="csc")
    return LinearOperator("momentum", grid, True, mat)


def i_x_operator(grid):
    mat = scipy.sparse.diags(1j * grid.points.astype(complex), 0, format="csc")
    return LinearOperator("i_x", grid, True, mat)


def position_operator(grid):
    mat = scipy.sparse.diags(grid.points.astype(complex), 0, format="csc")
    return LinearOperator("position", grid, False, mat)


def parity_operator(grid):
    n = grid.n
    mat = scipy.sparse.csc_matrix(
        (np.ones(n), (np.arange(n), np.arange(n)[::-1])), shape=(n, n)
    )
    return LinearOperator("parity", grid, True, mat)


def custom_tridiagonal(grid, sub, diag, sup, theta_invariant=None):
    """Tridiagonal operator from its three diagonals.

    When `theta_invariant` is not given it is detected from the matrix:
    theta O theta = R conj(O) R equals O iff diag == conj(diag[::-1]) and
    sup == conj(sub[::-1]).
    """
    sub = np.asarray(sub, dtype=complex)
    diag = np.asarray(diag, dtype=complex)
    sup = np.asarray(sup, dtype=complex)
    if theta_invariant is None:
        scale = 1.0 + max(np.abs(diag).max(), np.abs(sub).max() if len(sub) else 0.0)
        theta_invariant = bool(
            np.max(np.abs(diag - np.conj(diag[::-1]))) <= 1e-12 * scale
            and np.max(np.abs(sup - np.conj(sub[::-1]))) <= 1e-12 * scale
        )
    mat = scipy.sparse.diags([sub, diag, sup], [-1, 0, 1], format="csc")
    return LinearOperator("custom", grid, theta_invariant, mat)


def theta_conjugate(op):
    """theta O theta^{-1} as a matrix: R conj(O) R."""
    n = op.grid.n
    R = scipy.sparse.csc_matrix(
        (np.ones(n), (np.arange(n), np.arange(n)[::-1])), shape=(n, n)
    )
    mat = (R @ op.matrix.conj() @ R).tocsc()
    return LinearOperator(f"theta({op.kind})", op.grid, op.theta_invariant, mat)


# ---------------------------------------------------------------------------
# current density
# ---------------------------------------------------------------------------

def sample_derivative(samples, h):
    """d/dx by central differences; second-order one-sided at both ends."""
    d = np.empty_like(samples)
    d[1:-1] = (samples[2:] - samples[:-2]) / (2.0 * h)
    d[0] = (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * h)
    d[-1] = (3.0 * samples[-1] - 4.0 * samples[-2] + samples[-3]) / (2.0 * h)
    return d


@dataclass(frozen=True)
class CurrentProfile:
    grid: Grid
    j: np.ndarray
    max_variation: float
    max_abs: float


def current_density(psi, use_conjugate=False):
    """Current profile of psi; see the module docstring for the formula.

    With use_conjugate=True the partner theta psi is replaced by conj(psi),
    producing the Hermitian-style current whose continuity fails for
    Im V != 0.
    """
    h = psi.grid.h
    partner = np.conj(psi.samples) if use_conjugate else apply_theta(psi).samples
    j = psi.samples * sample_derivative(partner, h) - partner * sample_derivative(
        psi.samples, h
    )
    sup2 = float(np.max(np.abs(psi.samples)) ** 2)
    max_abs = float(np.max(np.abs(j)))
    variation = float(np.max(np.abs(np.diff(j)))) / h if len(j) > 1 else 0.0
    return CurrentProfile(
        grid=psi.grid,
        j=j,
        max_variation=variation / (max_abs + sup2),
        max_abs=max_abs,
    )


@dataclass(frozen=True)
class ContinuityResult:
    max_dj_dx: float
    is_conserved: bool
    scale: float
    max_abs_j: float | None


def continuity_check(pair, cont_tol=1e-6, real_tol=1e-6, use_conjugate=False):
    """Check d j/dx ~ 0 for a real-energy eigenpair.

    Conservation is judged against scale = sup|psi|^2 * (1 + |E|); the raw
    maximum of |dj/dx| is reported alongside.  For a theta-fixed pair the
    bound-state criterion max|j| is reported too.  Raises ComplexEigenvalue
    when |Im E| > real_tol.
    """
    if abs(pair.energy.imag) > real_tol:
        raise ComplexEigenvalue(
            f"Im E = {pair.energy.imag:g} exceeds {real_tol:g}; current is not conserved"
        )
    profile = current_density(pair.psi, use_conjugate=use_conjugate)
    dj = sample_derivative(profile.j, pair.psi.grid.h)
    max_dj = float(np.max(np.abs(dj)))
    scale = float(np.max(np.abs(pair.psi.samples)) ** 2) * (1.0 + abs(pair.energy))
    return ContinuityResult(
        max_dj_dx=max_dj,
        is_conserved=max_dj <= cont_tol * scale,
        scale=scale,
        max_abs_j=profile.max_abs if pair.omega is not None else None,
    )


# ---------------------------------------------------------------------------
# amplitudes and averages
# ---------------------------------------------------------------------------

def transition_amplitude(a, b, neutral_tol=NEUTRALITY_TOL):
    """A = (psi_a|psi_b) / (sqrt((psi_a|psi_a)) * sqrt((psi_b|psi_b))).

    Principal complex square roots keep A identically 1 on the diagonal in
    both signature sectors (for a negative state, sqrt(-1)^2 = -1 cancels
    the negative numerator).  |A| <= 1 within a sector; across sectors A
    vanishes with the Krein orthogonality of the pair.
    """
    if a is b:
        return 1.0 + 0.0j
    kaa = krein_inner(a.psi, a.psi)
    kbb = krein_inner(b.psi, b.psi)
    for label, diag, pair in (("first", kaa, a), ("second", kbb, b)):
        if abs(diag) < neutral_tol * hilbert_inner(pair.psi, pair.psi).real:
            raise NeutralState(f"{label} state is numerically neutral: (psi|psi) = {diag:.3g}")
    kab = krein_inner(a.psi, b.psi)
    return kab / (np.sqrt(complex(kaa)) * np.sqrt(complex(kbb)))


def operator_average(O, psi, neutral_tol=NEUTRALITY_TOL):
    """Av = (psi|O psi) / (psi|psi); raises NeutralState at a ~0 denominator."""
    norm2 = hilbert_inner(psi, psi).real
    if norm2 == 0.0:
        raise ZeroVector("average undefined for the zero vector")
    q = krein_inner(psi, psi)
    if abs(q) < neutral_tol * norm2:
        raise NeutralState(f"(psi|psi) = {q:.3g} is neutral; average undefined")
    return krein_inner(psi, O.apply(psi)) / q
