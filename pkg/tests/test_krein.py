import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptkrein import (
    Grid,
    WaveFunction,
    apply_parity,
    apply_theta,
    classify_vector,
    hilbert_inner,
    krein_inner,
    momentum_krein_inner,
    parity_decompose,
    validate_superposition,
)
from ptkrein.errors import GridMismatch, ZeroVector

GRID = Grid(8.0, 513)
ROOT_HALF_PI = float(np.sqrt(np.pi / 2.0))


def gaussian(grid=GRID, center=0.0, width=1.0):
    return WaveFunction(grid, np.exp(-((grid.points - center) / width) ** 2).astype(complex))


def odd_gaussian(grid=GRID):
    return WaveFunction(grid, (grid.points * np.exp(-grid.points**2)).astype(complex))


def random_state(rng, grid=GRID):
    raw = rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n)
    envelope = np.exp(-((grid.points / (0.45 * grid.half_width)) ** 2))
    return WaveFunction(grid, raw * envelope)


def test_grid_reflection_is_exact():
    g = Grid(7.5, 401)
    assert np.array_equal(g.points, -g.points[::-1])
    assert g.points[(g.n - 1) // 2] == 0.0
    assert g.h == pytest.approx(2 * 7.5 / 402)


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(1.0, 4)  # even count: no center point
    with pytest.raises(ValueError):
        Grid(-1.0, 5)
    with pytest.raises(ValueError):
        Grid(1.0, 1)


def test_parity_involution_and_one_hot():
    hot = np.zeros(GRID.n, dtype=complex)
    hot[0] = 1.0
    psi = WaveFunction(GRID, hot)
    flipped = apply_parity(psi)
    assert flipped.samples[-1] == 1.0 and flipped.samples[0] == 0.0
    assert np.array_equal(apply_parity(flipped).samples, psi.samples)


def test_parity_on_even_and_odd():
    even = gaussian()
    assert np.array_equal(apply_parity(even).samples, even.samples)
    odd = odd_gaussian()
    assert np.array_equal(apply_parity(odd).samples, -odd.samples)


def test_theta_fixes_even_real_and_odd_imaginary():
    even = gaussian()
    assert np.array_equal(apply_theta(even).samples, even.samples)
    odd_imag = WaveFunction(GRID, 1j * odd_gaussian().samples)
    assert np.array_equal(apply_theta(odd_imag).samples, odd_imag.samples)


def test_theta_fixes_plane_wave():
    wave = WaveFunction(GRID, np.exp(1j * 2.0 * GRID.points))
    assert np.allclose(apply_theta(wave).samples, wave.samples, rtol=0, atol=0)


def test_theta_is_antilinear_involution(rng):
    psi = random_state(rng)
    c = 0.7 - 1.3j
    scaled = WaveFunction(GRID, c * psi.samples)
    assert np.array_equal(apply_theta(scaled).samples, np.conj(c) * apply_theta(psi).samples)
    assert np.array_equal(apply_theta(apply_theta(psi)).samples, psi.samples)


def test_krein_inner_gaussian_values():
    even = gaussian()
    assert krein_inner(even, even) == pytest.approx(ROOT_HALF_PI, abs=1e-8)
    odd = odd_gaussian()
    assert krein_inner(odd, odd) == pytest.approx(-0.25 * ROOT_HALF_PI, abs=1e-8)
    mix = WaveFunction(GRID, even.samples + 2.0 * odd.samples)
    assert abs(krein_inner(mix, mix)) < 1e-8


def test_hilbert_inner_values_and_sign_flip():
    even = gaussian()
    odd = odd_gaussian()
    assert hilbert_inner(even, even) == pytest.approx(ROOT_HALF_PI, abs=1e-8)
    assert hilbert_inner(odd, odd) == pytest.approx(0.25 * ROOT_HALF_PI, abs=1e-8)
    assert abs(hilbert_inner(even, odd)) < 1e-14


def test_krein_inner_hermitian_symmetry(rng):
    a, b = random_state(rng), random_state(rng)
    assert krein_inner(a, b) == pytest.approx(np.conj(krein_inner(b, a)), abs=1e-14)


def test_krein_inner_grid_mismatch():
    with pytest.raises(GridMismatch):
        krein_inner(gaussian(), gaussian(Grid(8.0, 511)))


@settings(max_examples=25, deadline=None)
@given(
    st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
)
def test_krein_inner_antilinear_in_second_slot(a, b):
    rng = np.random.default_rng(42)
    psi, p1, p2 = (random_state(rng) for _ in range(3))
    combo = WaveFunction(GRID, a * p1.samples + b * p2.samples)
    expect = np.conj(a) * krein_inner(psi, p1) + np.conj(b) * krein_inner(psi, p2)
    scale = 1.0 + abs(expect)
    assert abs(krein_inner(psi, combo) - expect) <= 1e-12 * scale


def test_parity_decompose_reconstructs(rng):
    psi = random_state(rng)
    plus, minus = parity_decompose(psi)
    gap = np.max(np.abs(plus.samples + minus.samples - psi.samples))
    assert gap <= 1e-15 * np.max(np.abs(psi.samples))
    assert abs(krein_inner(plus, minus)) < 1e-13
    assert krein_inner(plus, plus).real >= 0.0
    assert krein_inner(minus, minus).real <= 0.0


def test_parity_decompose_displaced_gaussian():
    psi = gaussian(center=1.0)
    plus, minus = parity_decompose(psi)
    mirrored = np.exp(-((GRID.points + 1.0) ** 2))
    assert np.allclose(plus.samples, 0.5 * (psi.samples + mirrored), atol=1e-15)
    assert np.array_equal(apply_parity(plus).samples, plus.samples)
    assert np.array_equal(apply_parity(minus).samples, -minus.samples)


def test_j_equals_parity(rng):
    # the signature operator built from the parity projectors is parity itself
    psi = random_state(rng)
    plus, minus = parity_decompose(psi)
    j_psi = plus.samples - minus.samples
    assert np.max(np.abs(j_psi - apply_parity(psi).samples)) <= 1e-12


def test_recovered_hilbert_product(rng):
    a, b = random_state(rng), random_state(rng)
    left = krein_inner(apply_parity(a), b)
    right = hilbert_inner(a, b)
    assert abs(left - right) <= 1e-12 * (1.0 + abs(right))


def test_even_subspace_positivity(rng):
    for _ in range(20):
        plus, _ = parity_decompose(random_state(rng))
        q = krein_inner(plus, plus)
        assert q.real >= 0.0
        assert q == pytest.approx(hilbert_inner(plus, plus), abs=1e-13)


def test_neutral_vector_in_even_subspace_is_zero():
    # a vector with no even content projects to the zero element of the
    # even sector, which is orthogonal to everything there
    plus, _ = parity_decompose(odd_gaussian())
    assert krein_inner(plus, plus) == 0
    for width in (0.5, 1.0, 2.0):
        assert krein_inner(plus, gaussian(width=width)) == 0


def test_classify_even_odd_neutral():
    rep = classify_vector(gaussian())
    assert rep.signature == "positive"
    assert rep.even_share == pytest.approx(1.0, abs=1e-12)
    assert classify_vector(odd_gaussian()).signature == "negative"
    mix = WaveFunction(GRID, gaussian().samples + 2.0 * odd_gaussian().samples)
    rep = classify_vector(mix)
    assert rep.signature == "neutral"
    assert rep.even_share + rep.odd_share == pytest.approx(1.0, abs=1e-12)


def test_classify_zero_vector_rejected():
    with pytest.raises(ZeroVector):
        classify_vector(WaveFunction(GRID, np.zeros(GRID.n, dtype=complex)))


def test_classification_is_amplitude_independent(rng):
    psi = random_state(rng)
    big = WaveFunction(GRID, 1e6 * psi.samples)
    small = WaveFunction(GRID, 1e-6 * psi.samples)
    assert classify_vector(psi).signature == classify_vector(big).signature
    assert classify_vector(psi).signature == classify_vector(small).signature


def test_superposition_same_signature_accepted():
    check = validate_superposition([(1.0, gaussian()), (1.0, gaussian(width=2.0))])
    assert check.admissible
    assert check.combined is not None
    assert classify_vector(check.combined).signature == "positive"


def test_superposition_mixed_signature_rejected():
    check = validate_superposition([(1.0, gaussian()), (2.0, odd_gaussian())])
    assert not check.admissible
    assert check.combined is None
    assert "signature" in check.reason or "neutral" in check.reason


def test_superposition_negative_sector_accepted():
    odd2 = WaveFunction(GRID, GRID.points * np.exp(-2.0 * GRID.points**2))
    check = validate_superposition([(1.0, odd_gaussian()), (1.0j, odd2)])
    assert check.admissible


def test_superposition_zero_sum_rejected():
    psi = gaussian()
    with pytest.raises(ZeroVector):
        validate_superposition([(1.0, psi), (-1.0, psi)])


def test_momentum_space_product_matches_position_space():
    even = gaussian()
    odd = odd_gaussian()
    assert abs(momentum_krein_inner(even, even) - krein_inner(even, even)) < 1e-8
    q = momentum_krein_inner(odd, odd)
    assert q.real < 0
    assert abs(q - krein_inner(odd, odd)) < 1e-8


def test_momentum_space_product_random_states(rng):
    for _ in range(10):
        a, b = random_state(rng), random_state(rng)
        gap = abs(momentum_krein_inner(a, b) - krein_inner(a, b))
        assert gap <= 1e-10 * (1.0 + abs(krein_inner(a, b)))


def test_wavefunction_validation():
    with pytest.raises(ValueError):
        WaveFunction(GRID, np.zeros(GRID.n - 1, dtype=complex))
    bad = np.zeros(GRID.n, dtype=complex)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        WaveFunction(GRID, bad)
