"""Grids, wavefunctions, and the indefinite (Krein) inner-product toolkit.

The central object is the sesquilinear form

    (psi|phi) = integral of psi(x) * conj(phi(-x)) dx,

discretized by the trapezoid rule on a reflection-symmetric grid with
implicit zeros at the Dirichlet endpoints.  The form is linear in the first
argument, antilinear in the second, and indefinite on the diagonal: vectors
split into positive, negative, and neutral classes, with the parity operator
playing the role of the fundamental symmetry that recovers the ordinary
Hilbert product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, NonRealDiagonal, ZeroVector

NEUTRALITY_TOL = 1e-10


@dataclass(frozen=True)
class Grid:
    """Uniform interior grid of the box [-L, L] with Dirichlet ends.

    `n` must be odd so that x = 0 is a grid point and index reversal is the
    exact reflection x -> -x.  Spacing is h = 2L/(n+1); the boundary values
    at +-L are implicit zeros and are not stored.
    """

    half_width: float
    n: int
    h: float = field(init=False)
    points: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError("n must be an odd integer >= 3")
        h = 2.0 * self.half_width / (self.n + 1)
        # centered form (i - m)*h instead of -L + (i+1)*h: the reflection
        # x[n-1-i] == -x[i] then holds bitwise, and x[m] == 0.0 exactly
        m = (self.n - 1) // 2
        pts = (np.arange(self.n) - m) * h
        pts.flags.writeable = False
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "points", pts)

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and self.half_width == other.half_width
            and self.n == other.n
        )

    def __hash__(self):
        return hash((self.half_width, self.n))


@dataclass(frozen=True)
class WaveFunction:
    """Complex samples of psi on the interior points of a Grid."""

    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=complex)
        if arr.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got {arr.shape}")
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise ValueError("samples must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)


@dataclass(frozen=True)
class KreinReport:
    krein_product: complex
    hilbert_norm2: float
    signature: str           # 'positive' | 'negative' | 'neutral'
    even_share: float
    odd_share: float


def _check_same_grid(psi, phi):
    if psi.grid != phi.grid:
        raise GridMismatch(
            f"grids differ: (L={psi.grid.half_width}, n={psi.grid.n}) vs "
            f"(L={phi.grid.half_width}, n={phi.grid.n})"
        )


def apply_parity(psi):
    """P psi(x) = psi(-x): exact index reversal."""
    return WaveFunction(psi.grid, psi.samples[::-1])


def apply_theta(psi):
    """theta psi(x) = conj(psi(-x)); antilinear involution."""
    return WaveFunction(psi.grid, np.conj(psi.samples[::-1]))


def krein_inner(psi, phi):
    """Indefinite product h * sum_i psi_i * conj(phi_{n-1-i}).

    Linear in `psi`, antilinear in `phi`; satisfies
    krein_inner(psi, phi) == conj(krein_inner(phi, psi)).
    """
    _check_same_grid(psi, phi)
    return psi.grid.h * complex(np.sum(psi.samples * np.conj(phi.samples[::-1])))


def hilbert_inner(psi, phi):
    """Ordinary product h * sum_i psi_i * conj(phi_i)."""
    _check_same_grid(psi, phi)
    return psi.grid.h * complex(np.sum(psi.samples * np.conj(phi.samples)))


def parity_decompose(psi):
    """Split psi into its even and odd halves (K+- = (1 +- P)/2).

    The halves reconstruct psi exactly, are Krein-orthogonal, and carry
    definite-sign diagonal products: (psi+|psi+) >= 0 and (psi-|psi-) <= 0.
    """
    rev = psi.samples[::-1]
    plus = WaveFunction(psi.grid, 0.5 * (psi.samples + rev))
    minus = WaveFunction(psi.grid, 0.5 * (psi.samples - rev))
    return plus, minus


def classify_vector(psi, tol=NEUTRALITY_TOL):
    """Classify psi as positive / negative / neutral by the sign of (psi|psi).

    Neutrality is judged relative to the Hilbert norm:
    |(psi|psi)| <= tol * <psi|psi>  =>  'neutral'.
    """
    norm2 = hilbert_inner(psi, psi).real
    if norm2 <= 0.0:
        raise ZeroVector("cannot classify the zero vector")
    q = krein_inner(psi, psi)
    # the diagonal form is real by the pairing i <-> n-1-i; anything else
    # indicates corrupted data, not physics
    if abs(q.imag) > max(tol, 1e-12) * norm2:
        raise NonRealDiagonal(f"Im (psi|psi) = {q.imag:g} at Hilbert norm {norm2:g}")
    if q.real > tol * norm2:
        signature = "positive"
    elif q.real < -tol * norm2:
        signature = "negative"
    else:
        signature = "neutral"
    plus, minus = parity_decompose(psi)
    even = hilbert_inner(plus, plus).real / norm2
    odd = hilbert_inner(minus, minus).real / norm2
    return KreinReport(
        krein_product=q,
        hilbert_norm2=norm2,
        signature=signature,
        even_share=even,
        odd_share=odd,
    )


@dataclass(frozen=True)
class SuperpositionCheck:
    admissible: bool
    reason: str
    combined: WaveFunction | None


def validate_superposition(terms, tol=NEUTRALITY_TOL):
    """Check whether sum_k c_k psi_k is an admissible state.

    Superpositions that mix a positive-signature and a negative-signature
    component, or whose sum classifies neutral, are rejected: the two
    signature sectors are superselected and a mixed vector is not a state.
    The combined WaveFunction is returned only when admissible.
    """
    if not terms:
        raise ZeroVector("empty superposition")
    signatures = set()
    grid = terms[0][1].grid
    total = np.zeros(grid.n, dtype=complex)
    for coeff, psi in terms:
        if psi.grid != grid:
            raise GridMismatch("superposition terms live on different grids")
        report = classify_vector(psi, tol)
        if report.signature == "neutral":
            return SuperpositionCheck(False, "a term is neutral", None)
        signatures.add(report.signature)
        total = total + complex(coeff) * psi.samples
    if signatures == {"positive", "negative"}:
        return SuperpositionCheck(False, "mixes signatures", None)
    norm2 = grid.h * float(np.sum(np.abs(total) ** 2))
    if norm2 == 0.0:
        raise ZeroVector("superposition sums to the zero vector")
    combined = WaveFunction(grid, total)
    if classify_vector(combined, tol).signature == "neutral":
        return SuperpositionCheck(False, "combination is neutral", None)
    return SuperpositionCheck(True, "", combined)


def momentum_krein_inner(psi, phi):
    """The indefinite product evaluated in momentum space.

    Uses the discrete Fourier transform with the phase convention anchored
    to the physical coordinates (the grid starts at x = -m*h, not at 0), so
    that Delta_p * sum_k psihat_k * conj(phihat_{-k}) reproduces
    krein_inner(psi, phi) to rounding for states that decay inside the box.
    The reflection k -> -k is the index map k -> (n - k) mod n, unambiguous
    because n is odd.
    """
    _check_same_grid(psi, phi)
    n = psi.grid.n
    h = psi.grid.h
    m = (n - 1) // 2
    k = np.arange(n)
    # e^{2*pi*i*k*m/n} shifts the transform origin to the true x=0 sample
    phase = np.exp(2j * np.pi * k * m / n)
    scale = h / np.sqrt(2.0 * np.pi)
    psi_hat = scale * phase * np.fft.fft(psi.samples)
    phi_hat = scale * phase * np.fft.fft(phi.samples)
    reflected = phi_hat[(n - k) % n]
    dp = 2.0 * np.pi / (n * h)
    return dp * complex(np.sum(psi_hat * np.conj(reflected)))
