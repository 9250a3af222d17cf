"""Crank-Nicolson time evolution and the Heisenberg-relation check.

The Cayley step (1 + i dt/2 H) psi' = (1 - i dt/2 H) psi conserves the
indefinite form (psi|psi) exactly in exact arithmetic whenever the discrete
Hamiltonian satisfies R H R = conj(H): both Cayley factors then intertwine
with R-conjugation the same way, so the propagator is Krein-unitary.  The
Hilbert norm <psi|psi> is NOT conserved when Im V != 0; the contrast
between the two drifts is itself a non-Hermiticity diagnostic.

A caution for coarse boxes: the truncated-domain operator can own
spontaneously broken high modes with Im E as large as max|Im V|, and any
roundoff component along them grows like e^{Im E * t}.  Keep
max|Im V| * t_final moderate (a few tens) or shrink the box for dynamics
runs; the stationary solver is not affected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import GridMismatch, NonInvariantOperator, SingularSolve
from .krein import WaveFunction

CN_SCHEME = "crank_nicolson"


def _cn_arrays(diag, offdiag, dt):
    n = len(diag)
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = 0.5j * dt * offdiag
    ab[1, :] = 1.0 + 0.5j * dt * diag
    ab[2, :-1] = 0.5j * dt * offdiag
    return ab


def _cn_step_raw(samples, diag, offdiag, dt, ab):
    # overflow here is diagnosed below as SingularSolve, not left to warn
    with np.errstate(over="ignore", invalid="ignore"):
        rhs = (1.0 - 0.5j * dt * diag) * samples
        rhs[:-1] += -0.5j * dt * offdiag * samples[1:]
        rhs[1:] += -0.5j * dt * offdiag * samples[:-1]
        try:
            out = scipy.linalg.solve_banded((1, 1), ab, rhs)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise SingularSolve(f"Crank-Nicolson solve failed: {exc}", dt=dt) from exc
    if not np.all(np.isfinite(out.real)) or not np.all(np.isfinite(out.imag)):
        raise SingularSolve(
            "Crank-Nicolson state became non-finite; see the module docstring "
            "on broken high modes of coarse boxes",
            dt=dt,
        )
    return out


def step_crank_nicolson(psi, H, dt):
    """One Cayley step of the time-dependent equation; dt may be negative."""
    if psi.grid != H.grid:
        raise GridMismatch("state and Hamiltonian grids differ")
    if dt == 0:
        raise ValueError("dt must be nonzero")
    ab = _cn_arrays(H.diag, H.offdiag, dt)
    return WaveFunction(psi.grid, _cn_step_raw(psi.samples, H.diag, H.offdiag, dt, ab))


@dataclass(frozen=True)
class Trajectory:
    """Stored states of one evolution run.

    `dt` is the spacing of the stored samples (= step_dt * store_every);
    `krein_drift` and `hilbert_drift` are the largest relative drifts of
    (psi|psi) and <psi|psi> over the stored states.
    """

    times: np.ndarray
    states: list
    dt: float
    scheme: str
    hamiltonian: object
    step_dt: float
    store_every: int
    krein_drift: float
    hilbert_drift: float


def evolve(psi0, H, dt, t_final, store_every=1):
    """March psi0 with repeated CN steps, storing every `store_every`-th state."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_final < dt:
        raise ValueError("t_final must be at least dt")
    n_steps = int(round(t_final / dt))
    ab = _cn_arrays(H.diag, H.offdiag, dt)
    h = H.grid.h

    def kform(v):
        return h * complex(np.sum(v * np.conj(v[::-1])))

    def hform(v):
        return h * float(np.sum(np.abs(v) ** 2))

    cur = psi0.samples.copy()
    k0, h0 = kform(cur), hform(cur)
    states = [psi0]
    times = [0.0]
    krein_drift = 0.0
    hilbert_drift = 0.0
    for step in range(1, n_steps + 1):
        cur = _cn_step_raw(cur, H.diag, H.offdiag, dt, ab)
        if step % store_every == 0:
            states.append(WaveFunction(H.grid, cur))
            times.append(step * dt)
            # huge-but-finite states may overflow the norms one step before
            # the solver raises; the drift just saturates at inf then
            with np.errstate(over="ignore", invalid="ignore"):
                krein_drift = max(krein_drift, abs(kform(cur) - k0) / abs(k0))
                hilbert_drift = max(hilbert_drift, abs(hform(cur) - h0) / abs(h0))
    return Trajectory(
        times=np.asarray(times),
        states=states,
        dt=dt * store_every,
        scheme=CN_SCHEME,
        hamiltonian=H,
        step_dt=dt,
        store_every=store_every,
        krein_drift=krein_drift,
        hilbert_drift=hilbert_drift,
    )


def _average_series(traj, matrix):
    # same slot convention as operator_average: the operator acts inside
    # the antilinear (second) argument of the indefinite product
    h = traj.hamiltonian.grid.h
    out = np.empty(len(traj.states), dtype=complex)
    for idx, state in enumerate(traj.states):
        v = state.samples
        num = h * complex(np.sum(v * np.conj((matrix @ v)[::-1])))
        den = h * complex(np.sum(v * np.conj(v[::-1])))
        out[idx] = num / den
    return out


def ehrenfest_residual_series(traj, O):
    """|d/dt Av(O) - i Av(OH - HO)| at the interior stored times.

    The centered difference of the average is compared against the
    commutator side; the returned array is NaN at the two endpoints.  Note
    the operator order (OH - HO): with the indefinite product linear in its
    first slot, moving H across the form flips the commutator relative to
    the Hermitian-product convention.
    """
    if not O.theta_invariant:
        raise NonInvariantOperator(
            f"{O.kind} is not theta-invariant; its average is not an observable"
        )
    if len(traj.states) < 3:
        raise ValueError("need at least 3 stored states")
    Hs = traj.hamiltonian.as_sparse()
    Om = O.as_sparse()
    comm = (Om @ Hs - Hs @ Om).tocsc()
    av = _average_series(traj, Om)
    rhs = 1j * _average_series(traj, comm)
    res = np.full(len(traj.states), np.nan)
    dt = traj.dt
    for k in range(1, len(traj.states) - 1):
        res[k] = abs((av[k + 1] - av[k - 1]) / (2.0 * dt) - rhs[k])
    return res


@dataclass(frozen=True)
class EhrenfestResult:
    max_residual: float
    convergence_order: float
    max_residual_half_dt: float


def ehrenfest_residual(traj, O):
    """Largest Heisenberg-relation residual along traj, plus its dt-order.

    The order is estimated by rerunning the same evolution at half the
    integrator step (same stored stride, so the sampling also refines) and
    taking log2 of the residual ratio; CN plus centered differencing gives
    roughly 2.  For O = H both sides vanish identically and the residual
    sits at rounding level, where the order estimate is meaningless noise.
    """
    res = ehrenfest_residual_series(traj, O)
    max_res = float(np.nanmax(res))
    total_steps = traj.store_every * (len(traj.states) - 1)
    half = evolve(
        traj.states[0],
        traj.hamiltonian,
        traj.step_dt / 2.0,
        t_final=traj.step_dt * total_steps,
        store_every=traj.store_every,
    )
    res_half = ehrenfest_residual_series(half, O)
    max_half = float(np.nanmax(res_half))
    if max_half == 0.0:
        order = float("inf")
    else:
        order = float(np.log2(max_res / max_half))
    return EhrenfestResult(
        max_residual=max_res,
        convergence_order=order,
        max_residual_half_dt=max_half,
    )
