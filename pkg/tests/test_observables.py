import numpy as np
import pytest

from ptkrein import (
    Grid,
    WaveFunction,
    continuity_check,
    current_density,
    custom_tridiagonal,
    hamiltonian_operator,
    i_x_operator,
    krein_inner,
    momentum_operator,
    operator_average,
    parity_operator,
    position_operator,
    sample_derivative,
    theta_conjugate,
    transition_amplitude,
)
from ptkrein.errors import ComplexEigenvalue, NeutralState

GRID = Grid(8.0, 513)


def _wf(samples):
    return WaveFunction(GRID, np.asarray(samples, dtype=complex))


def test_sample_derivative_quadratic():
    # central differences are exact on quadratics away from the edges
    f = GRID.points**2
    d = sample_derivative(f.astype(complex), GRID.h)
    assert np.allclose(d[1:-1], 2.0 * GRID.points[1:-1], atol=1e-10)
    assert d[0] == pytest.approx(2.0 * GRID.points[0], abs=1e-8)


def test_current_vanishes_for_plane_wave():
    for k in (0.5, 2.0, -3.0):
        psi = _wf(np.exp(1j * k * GRID.points))
        prof = current_density(psi)
        assert prof.max_abs < 1e-12


def test_current_displaced_gaussian_center_value():
    psi = _wf(np.exp(-((GRID.points - 1.0) ** 2)))
    prof = current_density(psi)
    center = (GRID.n - 1) // 2
    assert prof.j[center].real == pytest.approx(-4.0 * np.exp(-2.0), abs=1e-3)
    assert abs(prof.j[center].imag) < 1e-12


def test_current_zero_for_theta_fixed_eigenstate(ix3):
    _, _, _, pairs = ix3
    for p in pairs[:3]:
        prof = current_density(p.psi)
        assert prof.max_abs == 0.0  # exact: both terms cancel bitwise


def test_current_scaling_for_theta_fixed_state(ix3):
    _, grid, _, pairs = ix3
    psi = pairs[0].psi
    c = 1.3 - 0.4j
    scaled = WaveFunction(grid, c * psi.samples)
    base = current_density(psi)
    big = current_density(scaled)
    assert np.allclose(big.j, (abs(c) ** 2) * base.j, atol=1e-12)


def test_continuity_oscillator_ground(osc):
    _, _, _, pairs = osc
    out = continuity_check(pairs[0])
    assert out.is_conserved
    assert out.max_dj_dx < 1e-6
    assert out.max_abs_j < 1e-8


def test_continuity_imaginary_cubic_states(ix3):
    _, _, _, pairs = ix3
    for p in pairs:
        out = continuity_check(p)
        assert out.is_conserved
        assert out.max_abs_j is not None and out.max_abs_j < 1e-6


def test_conjugate_substitution_breaks_conservation(ix3):
    # with psi* in place of the reflected conjugate the imaginary part of V
    # acts as a source and the flow is visibly not conserved
    _, _, _, pairs = ix3
    good = continuity_check(pairs[0])
    bad = continuity_check(pairs[0], use_conjugate=True)
    assert not bad.is_conserved
    assert bad.max_dj_dx / bad.scale > 1e3 * (good.max_dj_dx / good.scale + 1e-6)


def test_continuity_rejects_complex_energy(ix3):
    _, _, _, pairs = ix3
    from dataclasses import replace

    broken = replace(pairs[0], energy=pairs[0].energy + 1e-3j)
    with pytest.raises(ComplexEigenvalue):
        continuity_check(broken)


def test_amplitude_diagonal_is_one(ix3, osc):
    for pairs in (ix3[3], osc[3]):
        for p in pairs:
            assert transition_amplitude(p, p) == 1.0 + 0.0j


def test_amplitude_cross_states_vanish(ix3):
    _, _, _, pairs = ix3
    amp = transition_amplitude(pairs[0], pairs[1])
    assert abs(amp) < 1e-6


def test_amplitude_cross_signature_oscillator(osc):
    _, _, _, pairs = osc
    assert abs(transition_amplitude(pairs[0], pairs[1])) < 1e-10
    assert abs(transition_amplitude(pairs[1], pairs[2])) < 1e-10


def test_amplitude_bounded_within_signature(osc, ix3):
    for pairs in (osc[3], ix3[3]):
        for a in pairs:
            for b in pairs:
                if a.krein_sign == b.krein_sign:
                    assert abs(transition_amplitude(a, b)) <= 1.0 + 1e-12


def test_amplitude_neutral_state_rejected(ix3):
    _, grid, _, pairs = ix3
    from dataclasses import replace

    even = np.exp(-grid.points**2)
    odd = 2.0 * grid.points * np.exp(-grid.points**2)
    neutral = replace(pairs[0], psi=WaveFunction(grid, (even + odd).astype(complex)))
    with pytest.raises(NeutralState):
        transition_amplitude(neutral, pairs[0])


def test_average_of_hamiltonian_is_energy(osc, ix3):
    for _, _, H, pairs in (osc, ix3):
        O = hamiltonian_operator(H)
        for p in pairs[:3]:
            av = operator_average(O, p.psi)
            assert av == pytest.approx(p.energy, abs=1e-8)


def test_average_of_potential_is_real(ix3):
    _, grid, H, pairs = ix3
    v = H.potential_values()
    O = custom_tridiagonal(grid, np.zeros(grid.n - 1), v, np.zeros(grid.n - 1))
    assert O.theta_invariant
    for p in pairs:
        av = operator_average(O, p.psi)
        assert abs(av.imag) < 1e-8


def test_average_of_i_x_is_real_on_fixed_modes(ix3):
    _, grid, _, pairs = ix3
    O = i_x_operator(grid)
    av = operator_average(O, pairs[0].psi)
    assert abs(av.imag) <= 1e-10 * (1.0 + abs(av.real))
    assert av.real != 0.0


def test_average_rejects_neutral_state():
    even = np.exp(-GRID.points**2)
    odd = 2.0 * GRID.points * np.exp(-GRID.points**2)
    psi = _wf(even + odd)
    with pytest.raises(NeutralState):
        operator_average(i_x_operator(GRID), psi)


def test_theta_invariance_flags():
    assert momentum_operator(GRID).theta_invariant
    assert i_x_operator(GRID).theta_invariant
    assert parity_operator(GRID).theta_invariant
    assert not position_operator(GRID).theta_invariant


def test_theta_conjugate_fixes_invariant_operators():
    for op in (momentum_operator(GRID), i_x_operator(GRID), parity_operator(GRID)):
        back = theta_conjugate(op)
        assert np.allclose(back.as_sparse().toarray(), op.as_sparse().toarray(), atol=0)
    pos = position_operator(GRID)
    assert np.allclose(
        theta_conjugate(pos).as_sparse().toarray(), -pos.as_sparse().toarray(), atol=0
    )


def test_form_adjoint_identity_for_symmetric_operators(ix3, rng):
    # moving a complex-symmetric operator across the indefinite form costs
    # nothing; the antisymmetric derivative flips the sign instead
    _, grid, H, _ = ix3
    raw = rng.standard_normal((2, grid.n)) + 1j * rng.standard_normal((2, grid.n))
    a = WaveFunction(grid, raw[0])
    b = WaveFunction(grid, raw[1])
    for op in (hamiltonian_operator(H), i_x_operator(grid), parity_operator(grid)):
        left = krein_inner(a, op.apply(b))
        right = krein_inner(theta_conjugate(op).apply(a), b)
        assert abs(left - right) <= 1e-10 * (1.0 + abs(left))
    p = momentum_operator(grid)
    left = krein_inner(a, p.apply(b))
    right = krein_inner(theta_conjugate(p).apply(a), b)
    assert abs(left + right) <= 1e-10 * (1.0 + abs(left))


def test_custom_tridiagonal_detects_invariance():
    n = GRID.n
    sym = custom_tridiagonal(GRID, np.zeros(n - 1), 1j * GRID.points, np.zeros(n - 1))
    assert sym.theta_invariant
    broken = custom_tridiagonal(GRID, np.zeros(n - 1), GRID.points, np.zeros(n - 1))
    assert not broken.theta_invariant
