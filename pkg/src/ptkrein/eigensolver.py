"""Discretized Hamiltonian, spectrum, PT phase fixing, and Gram matrix.

The Hamiltonian -d^2/dx^2 + V(x) becomes a complex symmetric tridiagonal
matrix on the interior grid (3-point Laplacian, Dirichlet box).  For a
potential passing the PT check the matrix satisfies R H R = conj(H) with R
the index-reversal permutation; that discrete symmetry is what makes the
Krein product conserved by the dynamics and pairwise orthogonality of
eigenvectors exact at the residual level.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import ConvergenceFailure, GridMismatch, NeutralEigenvector, NotPTSymmetric
from .krein import NEUTRALITY_TOL, Grid, WaveFunction, apply_theta, hilbert_inner, krein_inner
from .potential import eval_potential, validate_pt

DENSE_CUTOVER = 800          # below this size a dense solve is cheap and exhaustive
ARPACK_EXTRA_PAIRS = 8       # extra Ritz pairs so the lowest k are never missed


@dataclass(frozen=True)
class HamiltonianOp:
    """Tridiagonal operator: diag = 2/h^2 + V(x_i), offdiag = -1/h^2."""

    grid: Grid
    diag: np.ndarray
    offdiag: float
    potential: object

    def __post_init__(self):
        arr = np.asarray(self.diag, dtype=complex)
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "diag", arr)

    def matvec(self, samples):
        out = self.diag * samples
        out[:-1] += self.offdiag * samples[1:]
        out[1:] += self.offdiag * samples[:-1]
        return out

    def as_sparse(self):
        n = self.grid.n
        off = np.full(n - 1, self.offdiag)
        return scipy.sparse.diags([off, self.diag, off], [-1, 0, 1], format="csc")

    def potential_values(self):
        return self.diag - 2.0 / self.grid.h**2


@dataclass(frozen=True)
class EigenPair:
    """One spectral pair with its quality and Krein bookkeeping.

    `omega` is the phase in theta psi = e^{i omega} psi; after phase fixing
    the stored vector satisfies theta psi = psi, so omega is 0.0 for
    unbroken pairs and None for spontaneously broken ones.  `theta_defect`
    keeps the pre-fix defect min_omega ||theta psi - e^{i omega} psi||/||psi||.
    """

    energy: complex
    psi: WaveFunction
    residual: float
    omega: float | None = None
    krein_sign: int | None = None
    complex_flag: bool = False
    converged: bool = True
    theta_defect: float | None = None
    cluster_id: int | None = None


def build_hamiltonian(potential, grid, pt_tol=1e-12):
    """Assemble the tridiagonal Hamiltonian after checking PT symmetry."""
    check = validate_pt(potential, grid, pt_tol)
    if not check.pt_symmetric:
        raise NotPTSymmetric(
            f"potential {potential.src!r} violates V*(-x)=V(x) by {check.max_violation:g}"
        )
    v = np.asarray(eval_potential(potential, grid.points), dtype=complex)
    diag = 2.0 / grid.h**2 + v
    return HamiltonianOp(grid=grid, diag=diag, offdiag=-1.0 / grid.h**2, potential=potential)


def _dense_eig(H):
    n = H.grid.n
    off = np.full(n - 1, H.offdiag)
    mat = np.diag(H.diag) + np.diag(off, 1) + np.diag(off, -1)
    return scipy.linalg.eig(mat)


def _arpack_eig(H, k):
    # shift-invert anchored just below the potential floor targets the
    # bottom of the spectrum; the kinetic part only pushes energies up
    sigma = float(np.min(H.potential_values().real)) - 1.0
    k_req = min(k + ARPACK_EXTRA_PAIRS, H.grid.n - 2)
    ncv = min(max(2 * k_req + 1, 40), H.grid.n)
    # a seeded dense start vector: the default would be parity-pure for
    # real even V and the Krylov space would then miss half the spectrum
    v0 = np.random.default_rng(20260816).standard_normal(H.grid.n)
    return scipy.sparse.linalg.eigs(
        H.as_sparse(), k=k_req, sigma=sigma, which="LM", v0=v0, ncv=ncv, tol=0
    )


def solve_spectrum(H, k, real_tol=1e-6, residual_tol=1e-8, cluster_tol=1e-8):
    """Lowest-k eigenpairs of H by Re(E), each with residual and flags.

    Pairs whose |Im E| exceeds real_tol*max(1, |Re E|) are kept but flagged
    complex; pairs whose residual exceeds residual_tol are kept but marked
    unconverged.  Near-coincident energies are tagged with a shared
    cluster_id, since pairwise orthogonality says nothing there.
    """
    if not 1 <= k <= H.grid.n:
        raise ValueError(f"k={k} out of range for n={H.grid.n}")
    try:
        if H.grid.n < DENSE_CUTOVER or k > H.grid.n - 2 - ARPACK_EXTRA_PAIRS:
            vals, vecs = _dense_eig(H)
        else:
            vals, vecs = _arpack_eig(H, k)
    except scipy.sparse.linalg.ArpackNoConvergence as exc:
        raise ConvergenceFailure(f"eigensolver did not converge: {exc}") from exc

    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order][:k]
    vecs = vecs[:, order][:, :k]

    pairs = []
    for j in range(len(vals)):
        vec = vecs[:, j]
        res = float(
            np.linalg.norm(H.matvec(vec) - vals[j] * vec) / np.linalg.norm(vec)
        )
        pairs.append(
            EigenPair(
                energy=complex(vals[j]),
                psi=WaveFunction(H.grid, vec),
                residual=res,
                complex_flag=bool(
                    abs(vals[j].imag) > real_tol * max(1.0, abs(vals[j].real))
                ),
                converged=res <= residual_tol,
            )
        )
    if len(pairs) < k:
        raise ConvergenceFailure(f"requested {k} pairs, solver returned {len(pairs)}")

    # tag near-degenerate clusters
    cluster = 0
    open_cluster = False
    for a, b in zip(range(len(pairs) - 1), range(1, len(pairs))):
        gap = abs(pairs[a].energy - pairs[b].energy)
        if gap < cluster_tol * max(1.0, abs(pairs[a].energy)):
            if not open_cluster:
                cluster += 1
                pairs[a] = replace(pairs[a], cluster_id=cluster)
                open_cluster = True
            pairs[b] = replace(pairs[b], cluster_id=cluster)
        else:
            open_cluster = False
    return pairs


def theta_defect(psi):
    """min over omega of ||theta psi - e^{i omega} psi|| / ||psi||."""
    v = psi.samples
    norm2 = float(np.sum(np.abs(v) ** 2))
    if norm2 == 0.0:
        raise ZeroDivisionError("zero vector has no theta defect")
    c = complex(np.sum(np.conj(v) * apply_theta(psi).samples))
    return float(np.sqrt(max(0.0, 2.0 * norm2 - 2.0 * abs(c))) / np.sqrt(norm2))


def normalize_and_phase_fix(pair, mode_tol=1e-6, neutral_tol=NEUTRALITY_TOL):
    """Rotate psi into the theta psi = psi gauge and scale (psi|psi) to +-1.

    The best phase omega comes from c = <psi, theta psi>; the rotation is by
    e^{i omega/2} (half the angle, because theta conjugates the coefficient:
    theta(e^{i a} psi) = e^{-i a} theta psi).  If the defect exceeds
    mode_tol the mode is spontaneously broken: it gets Hilbert
    normalization, omega = None, krein_sign = None.
    """
    psi = pair.psi
    v = psi.samples
    norm = float(np.linalg.norm(v))
    c = complex(np.sum(np.conj(v) * apply_theta(psi).samples))
    defect = float(np.sqrt(max(0.0, 2.0 * norm**2 - 2.0 * abs(c))) / norm)

    if defect > mode_tol:
        scaled = WaveFunction(psi.grid, v / np.sqrt(hilbert_inner(psi, psi).real))
        return replace(
            pair, psi=scaled, omega=None, krein_sign=None, theta_defect=defect
        )

    omega = float(np.angle(c))
    rotated = np.exp(0.5j * omega) * v
    # symmetrize: theta of the average is the average itself, bitwise
    fixed = 0.5 * (rotated + np.conj(rotated[::-1]))
    candidate = WaveFunction(psi.grid, fixed)
    q = krein_inner(candidate, candidate)
    h_norm2 = hilbert_inner(candidate, candidate).real
    if abs(q) < neutral_tol * h_norm2:
        raise NeutralEigenvector(
            f"(psi|psi) = {q:.3g} is neutral at Hilbert norm {h_norm2:.3g}"
        )
    sign = 1 if q.real > 0 else -1
    scaled = WaveFunction(psi.grid, fixed / np.sqrt(abs(q.real)))
    return replace(
        pair, psi=scaled, omega=0.0, krein_sign=sign, theta_defect=defect
    )


def gram_matrix(pairs):
    """G_{ab} = krein_inner(psi_a, psi_b) over a list of normalized pairs."""
    if not pairs:
        return np.zeros((0, 0), dtype=complex)
    grid = pairs[0].psi.grid
    for p in pairs:
        if p.psi.grid != grid:
            raise GridMismatch("gram matrix needs all pairs on one grid")
    k = len(pairs)
    G = np.empty((k, k), dtype=complex)
    for a in range(k):
        for b in range(k):
            G[a, b] = krein_inner(pairs[a].psi, pairs[b].psi)
    return G
