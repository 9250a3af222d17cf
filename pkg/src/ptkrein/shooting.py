"""Eigenvalue refinement by two-sided shooting in the complex E plane.

psi'' = (V - E) psi is integrated with fixed-step RK4 from both Dirichlet
walls to x = 0 (a grid node, since n is odd), and the complex matching
Wronskian W(E) = psi_L(0) psi_R'(0) - psi_L'(0) psi_R(0) is driven to zero
by Newton iteration.  W is an entire function of E, so a finite-difference
derivative along the real E direction is a valid complex derivative.
"""

from __future__ import annotations

import numpy as np

from .errors import BasinEscape, NoConvergence
from .potential import eval_potential

DERIVATIVE_STEP = 1e-7
DEFAULT_TRUST_RADIUS = 1.0


def _march(v_nodes, v_mid, E, h):
    """RK4 for u = (psi, psi') from the wall seed (0, 1) to x = 0.

    The state is renormalized by its sup norm after every step; the factor
    is positive real and smooth in E, so the zero set of the Wronskian is
    untouched while |V| ~ 1000 near the wall can no longer overflow psi.
    """
    psi, dpsi = 0.0 + 0.0j, 1.0 + 0.0j
    steps = len(v_mid)
    for j in range(steps):
        a0, a_half, a1 = v_nodes[j] - E, v_mid[j] - E, v_nodes[j + 1] - E
        k1p, k1d = dpsi, a0 * psi
        k2p, k2d = dpsi + 0.5 * h * k1d, a_half * (psi + 0.5 * h * k1p)
        k3p, k3d = dpsi + 0.5 * h * k2d, a_half * (psi + 0.5 * h * k2p)
        k4p, k4d = dpsi + h * k3d, a1 * (psi + h * k3p)
        psi = psi + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        dpsi = dpsi + (h / 6.0) * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
        scale = max(abs(psi), abs(dpsi))
        if scale == 0.0:
            raise NoConvergence("shooting state vanished identically mid-march")
        psi /= scale
        dpsi /= scale
    return psi, dpsi


def _wronskian(E, h, left_nodes, left_mid, right_nodes, right_mid):
    psi_l, dpsi_l = _march(left_nodes, left_mid, E, h)
    # the right march integrates chi(s) = psi(-s) from s = -L, so at x = 0
    # the value carries over and the derivative flips sign
    chi, dchi = _march(right_nodes, right_mid, E, h)
    psi_r, dpsi_r = chi, -dchi
    w = psi_l * dpsi_r - dpsi_l * psi_r
    # |W| <= this bound, and it stays O(1) under the renormalized march even
    # at even-parity roots where both Wronskian terms vanish together
    scale = (abs(psi_l) + abs(dpsi_l)) * (abs(psi_r) + abs(dpsi_r))
    return w, scale


def refine_eigenvalue_shooting(
    potential,
    E0,
    grid,
    newton_tol=1e-10,
    max_iter=40,
    trust_radius=DEFAULT_TRUST_RADIUS,
):
    """Polish an eigenvalue estimate E0 until |W(E)| <= newton_tol * scale.

    `scale` is |psi_L(0) psi_R'(0)| + |psi_L'(0) psi_R(0)|, which makes the
    stopping rule invariant under the per-step renormalization.  Raises
    NoConvergence after max_iter Newton steps and BasinEscape when the
    iterate drifts more than trust_radius away from E0.
    """
    L = grid.half_width
    h = grid.h
    steps = (grid.n + 1) // 2          # -L + steps*h == 0
    js = np.arange(steps + 1)
    # V is independent of E: sample nodes and RK4 midpoints once
    left_x = -L + js * h
    right_x = L - js * h               # chi(s) = psi(-s) sees V(-s)
    left_nodes = np.asarray(eval_potential(potential, left_x), dtype=complex)
    right_nodes = np.asarray(eval_potential(potential, right_x), dtype=complex)
    left_mid = np.asarray(eval_potential(potential, left_x[:-1] + 0.5 * h), dtype=complex)
    right_mid = np.asarray(eval_potential(potential, right_x[:-1] - 0.5 * h), dtype=complex)

    E = complex(E0)
    for _ in range(max_iter):
        w, scale = _wronskian(E, h, left_nodes, left_mid, right_nodes, right_mid)
        if abs(w) <= newton_tol * scale:
            return E
        dE = DERIVATIVE_STEP * (1.0 + abs(E))
        w2, _ = _wronskian(E + dE, h, left_nodes, left_mid, right_nodes, right_mid)
        dw = (w2 - w) / dE
        if dw == 0:
            raise NoConvergence("Wronskian derivative vanished; cannot take a Newton step")
        E = E - w / dw
        if abs(E - E0) > trust_radius:
            raise BasinEscape(
                f"iterate moved {abs(E - E0):.3g} from seed {E0}, beyond {trust_radius}"
            )
    raise NoConvergence(f"no Wronskian zero within {max_iter} Newton steps from {E0}")
