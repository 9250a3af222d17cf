"""Command-line interface: config loading, subcommands, CSV/JSON output.

Exit codes: 0 success, 1 validation failure (bad config, non-PT potential,
superselection-type rejections), 2 numerical failure (non-convergence,
singular or blown-up solve).  Errors are emitted as one JSON object on
stderr.  CSV output is deterministic: 17 significant digits, '.' decimal
separator, '\\n' line endings.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import errors
from .config import load_config
from .dynamics import ehrenfest_residual_series, evolve
from .eigensolver import build_hamiltonian, gram_matrix, normalize_and_phase_fix, solve_spectrum
from .krein import Grid, WaveFunction, classify_vector, hilbert_inner, krein_inner
from .observables import (
    continuity_check,
    current_density,
    hamiltonian_operator,
    i_x_operator,
    momentum_operator,
    parity_operator,
    transition_amplitude,
)
from .potential import parse_potential
from .shooting import refine_eigenvalue_shooting

COMMANDS = ("spectrum", "modes", "gram", "current", "classify", "evolve", "report")

VALIDATION_ERRORS = (
    errors.ConfigError,
    errors.PotentialSyntaxError,
    errors.ExponentCapError,
    errors.EvalError,
    errors.NotPTSymmetric,
    errors.GridMismatch,
    errors.ZeroVector,
    errors.NeutralState,
    errors.NeutralEigenvector,
    errors.ComplexEigenvalue,
    errors.NonInvariantOperator,
)

NUMERICAL_ERRORS = (
    errors.ConvergenceFailure,
    errors.NoConvergence,
    errors.BasinEscape,
    errors.SingularSolve,
    errors.NonRealDiagonal,
)

EVOLVE_STORE_EVERY = 10


def _fmt(value):
    """Deterministic float cell: 17 significant digits, blank for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_rows(header, rows, destination):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(cell) if not isinstance(cell, str) else cell for cell in row))
    text = "\n".join(lines) + "\n"
    if destination:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_json(obj, destination):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if destination:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(payload, cfg, destination, header=None, rows=None):
    """Write CSV rows or the JSON payload, per the configured format."""
    if cfg.output.format == "json" or rows is None:
        _write_json(payload, destination)
    else:
        _write_rows(header, rows, destination)


def _solve_pipeline(cfg):
    expr = parse_potential(cfg.potential)
    grid = Grid(cfg.domain.half_width, cfg.domain.points)
    H = build_hamiltonian(expr, grid)
    pairs = solve_spectrum(
        H,
        cfg.solver.num_states,
        real_tol=cfg.solver.real_tol,
        residual_tol=cfg.solver.residual_tol,
    )
    fixed = [normalize_and_phase_fix(p) for p in pairs]
    return expr, grid, H, fixed


def _pair_row(index, pair):
    return [
        index,
        pair.energy.real,
        pair.energy.imag,
        pair.residual,
        pair.omega,
        pair.krein_sign,
        pair.complex_flag,
    ]


def _cmd_spectrum(cfg, destination):
    _, _, _, pairs = _solve_pipeline(cfg)
    rows = [_pair_row(i, p) for i, p in enumerate(pairs)]
    payload = [
        {
            "index": i,
            "re_energy": p.energy.real,
            "im_energy": p.energy.imag,
            "residual": p.residual,
            "omega": p.omega,
            "krein_sign": p.krein_sign,
            "complex_flag": p.complex_flag,
        }
        for i, p in enumerate(pairs)
    ]
    _emit(
        payload,
        cfg,
        destination,
        header=["index", "re_energy", "im_energy", "residual", "omega", "krein_sign", "complex_flag"],
        rows=rows,
    )
    return 0


def _cmd_modes(cfg, destination):
    _, grid, _, pairs = _solve_pipeline(cfg)
    header = ["x"]
    for i in range(len(pairs)):
        header += [f"re_psi_{i}", f"im_psi_{i}"]
    rows = []
    for idx in range(grid.n):
        row = [grid.points[idx]]
        for p in pairs:
            row += [p.psi.samples[idx].real, p.psi.samples[idx].imag]
        rows.append(row)
    payload = {
        "x": grid.points.tolist(),
        "states": [
            {"re_psi": p.psi.samples.real.tolist(), "im_psi": p.psi.samples.imag.tolist()}
            for p in pairs
        ],
    }
    _emit(payload, cfg, destination, header=header, rows=rows)
    return 0


def _gram_summary(pairs):
    G = gram_matrix(pairs)
    k = len(pairs)
    max_off = 0.0
    for a in range(k):
        for b in range(k):
            if a == b:
                continue
            if pairs[a].cluster_id is not None and pairs[a].cluster_id == pairs[b].cluster_id:
                continue  # orthogonality is not claimed inside a degenerate cluster
            max_off = max(max_off, abs(G[a, b]))
    return G, max_off


def _cmd_gram(cfg, destination):
    _, _, _, pairs = _solve_pipeline(cfg)
    G, max_off = _gram_summary(pairs)
    rows = [
        [a, b, G[a, b].real, G[a, b].imag, abs(G[a, b])]
        for a in range(len(pairs))
        for b in range(len(pairs))
    ]
    payload = {
        "gram_re": G.real.tolist(),
        "gram_im": G.imag.tolist(),
        "max_gram_offdiag": max_off,
    }
    _emit(payload, cfg, destination, header=["row", "col", "re", "im", "abs"], rows=rows)
    if cfg.output.format == "csv":
        sys.stdout.write(f"max_gram_offdiag={_fmt(max_off)}\n")
    return 0


def _cmd_current(cfg, destination):
    _, grid, _, pairs = _solve_pipeline(cfg)
    real_pairs = [p for p in pairs if not p.complex_flag]
    header = ["x"]
    profiles = []
    diagnostics = []
    for i, p in enumerate(real_pairs):
        header += [f"re_j_{i}", f"im_j_{i}"]
        profiles.append(current_density(p.psi))
        check = continuity_check(p, cont_tol=cfg.solver.orthogonality_tol, real_tol=cfg.solver.real_tol)
        diagnostics.append(
            {
                "index": i,
                "max_dj_dx": check.max_dj_dx,
                "scaled_dj_dx": check.max_dj_dx / check.scale,
                "is_conserved": check.is_conserved,
                "max_abs_j": check.max_abs_j,
            }
        )
    rows = []
    for idx in range(grid.n):
        row = [grid.points[idx]]
        for prof in profiles:
            row += [prof.j[idx].real, prof.j[idx].imag]
        rows.append(row)
    payload = {
        "x": grid.points.tolist(),
        "currents": [
            {"re_j": prof.j.real.tolist(), "im_j": prof.j.imag.tolist()} for prof in profiles
        ],
        "continuity": diagnostics,
    }
    _emit(payload, cfg, destination, header=header, rows=rows)
    if cfg.output.format == "csv":
        sys.stdout.write(json.dumps({"continuity": diagnostics}, sort_keys=True) + "\n")
    return 0


def _cmd_classify(cfg, destination):
    _, _, _, pairs = _solve_pipeline(cfg)
    rows = []
    payload = []
    for i, p in enumerate(pairs):
        report = classify_vector(p.psi)
        rows.append(
            [
                i,
                report.krein_product.real,
                report.krein_product.imag,
                report.hilbert_norm2,
                report.signature,
                report.even_share,
                report.odd_share,
            ]
        )
        payload.append(
            {
                "index": i,
                "re_krein": report.krein_product.real,
                "im_krein": report.krein_product.imag,
                "hilbert_norm2": report.hilbert_norm2,
                "signature": report.signature,
                "even_share": report.even_share,
                "odd_share": report.odd_share,
            }
        )
    _emit(
        payload,
        cfg,
        destination,
        header=["index", "re_krein", "im_krein", "hilbert_norm2", "signature", "even_share", "odd_share"],
        rows=rows,
    )
    return 0


def _observable_for(name, grid, H):
    if name == "hamiltonian":
        return hamiltonian_operator(H)
    if name == "momentum":
        return momentum_operator(grid)
    if name == "i_x":
        return i_x_operator(grid)
    return parity_operator(grid)


def _cmd_evolve(cfg, destination):
    _, grid, H, pairs = _solve_pipeline(cfg)
    psi0 = pairs[0].psi
    O = _observable_for(cfg.dynamics.observable, grid, H)
    traj = evolve(psi0, H, cfg.dynamics.dt, cfg.dynamics.t_final, store_every=EVOLVE_STORE_EVERY)
    res = ehrenfest_residual_series(traj, O)
    h = grid.h
    rows = []
    payload_rows = []
    for k, state in enumerate(traj.states):
        v = state.samples
        q = h * complex(np.sum(v * np.conj(v[::-1])))
        norm2 = h * float(np.sum(np.abs(v) ** 2))
        av = h * complex(np.sum(v * np.conj((O.as_sparse() @ v)[::-1]))) / q
        resid = None if np.isnan(res[k]) else float(res[k])
        rows.append([traj.times[k], av.real, av.imag, q.real, norm2, resid])
        payload_rows.append(
            {
                "t": float(traj.times[k]),
                "av_re": av.real,
                "av_im": av.imag,
                "krein_norm": q.real,
                "hilbert_norm": norm2,
                "ehrenfest_residual": resid,
            }
        )
    payload = {
        "observable": cfg.dynamics.observable,
        "krein_drift": traj.krein_drift,
        "hilbert_drift": traj.hilbert_drift,
        "series": payload_rows,
    }
    _emit(
        payload,
        cfg,
        destination,
        header=["t", "av_re", "av_im", "krein_norm", "hilbert_norm", "ehrenfest_residual"],
        rows=rows,
    )
    return 0


def _cmd_report(cfg, destination):
    """Run the static pipeline end to end and emit one JSON summary.

    Time evolution is deliberately not included: with an ix^N potential on
    the default wide box its amplified broken modes would poison a blind
    run (see dynamics docstring); the `evolve` subcommand covers dynamics
    with parameters the user has chosen on purpose.
    """
    expr, grid, H, pairs = _solve_pipeline(cfg)
    G, max_off = _gram_summary(pairs)
    v = np.asarray(H.potential_values())

    max_hilbert_cross = 0.0
    for a in range(len(pairs)):
        for b in range(a + 1, len(pairs)):
            max_hilbert_cross = max(
                max_hilbert_cross, abs(hilbert_inner(pairs[a].psi, pairs[b].psi))
            )

    reality = 0.0
    for p in pairs:
        vpsi = WaveFunction(grid, v * p.psi.samples)
        num = abs(krein_inner(p.psi, vpsi).imag)
        reality = max(reality, num / hilbert_inner(p.psi, p.psi).real)

    currents = []
    for i, p in enumerate(pairs):
        if p.complex_flag:
            continue
        check = continuity_check(p, cont_tol=cfg.solver.orthogonality_tol, real_tol=cfg.solver.real_tol)
        currents.append(
            {
                "index": i,
                "scaled_dj_dx": check.max_dj_dx / check.scale,
                "max_abs_j": check.max_abs_j,
                "is_conserved": check.is_conserved,
            }
        )

    amp_max_same = 0.0
    amp_max_cross = 0.0
    for a in range(len(pairs)):
        for b in range(len(pairs)):
            if a == b or pairs[a].krein_sign is None or pairs[b].krein_sign is None:
                continue
            amp = abs(transition_amplitude(pairs[a], pairs[b]))
            if pairs[a].krein_sign == pairs[b].krein_sign:
                amp_max_same = max(amp_max_same, amp)
            else:
                amp_max_cross = max(amp_max_cross, amp)

    summary = {
        "potential": cfg.potential,
        "half_width": grid.half_width,
        "points": grid.n,
        "num_states": len(pairs),
        "eigenvalues": [
            {
                "index": i,
                "re_energy": p.energy.real,
                "im_energy": p.energy.imag,
                "residual": p.residual,
                "omega": p.omega,
                "krein_sign": p.krein_sign,
                "complex_flag": p.complex_flag,
                "theta_defect": p.theta_defect,
            }
            for i, p in enumerate(pairs)
        ],
        "max_im_over_re": max(
            abs(p.energy.imag) / max(1.0, abs(p.energy.real)) for p in pairs
        ),
        "max_residual": max(p.residual for p in pairs),
        "max_gram_offdiag": max_off,
        "max_hilbert_cross": max_hilbert_cross,
        "max_theta_defect": max(
            (p.theta_defect for p in pairs if p.theta_defect is not None), default=None
        ),
        "potential_reality": reality,
        "continuity": currents,
        "max_same_signature_amplitude": amp_max_same,
        "max_cross_signature_amplitude": amp_max_cross,
        "orthogonality_tol": cfg.solver.orthogonality_tol,
        "gram_within_tol": bool(max_off < cfg.solver.orthogonality_tol),
    }
    if cfg.solver.shooting.enabled:
        refined = refine_eigenvalue_shooting(
            expr,
            pairs[0].energy,
            grid,
            newton_tol=cfg.solver.shooting.newton_tol,
            max_iter=cfg.solver.shooting.max_iter,
        )
        summary["shooting_ground"] = {"re": refined.real, "im": refined.imag}
        summary["shooting_gap"] = abs(refined - pairs[0].energy)
    _write_json(summary, destination)
    return 0


_DISPATCH = {
    "spectrum": _cmd_spectrum,
    "modes": _cmd_modes,
    "gram": _cmd_gram,
    "current": _cmd_current,
    "classify": _cmd_classify,
    "evolve": _cmd_evolve,
    "report": _cmd_report,
}


def run_command(cmd, cfg, destination=None):
    """Dispatch one subcommand; returns the process exit code."""
    if cmd not in _DISPATCH:
        raise ValueError(f"unknown command {cmd!r}")
    out = destination if destination is not None else (cfg.output.path or None)
    try:
        return _DISPATCH[cmd](cfg, out)
    except VALIDATION_ERRORS as exc:
        _error_object(exc, 1)
        return 1
    except NUMERICAL_ERRORS as exc:
        _error_object(exc, 2)
        return 2


def _error_object(exc, code):
    obj = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, errors.ConfigError):
        obj["key"] = exc.key
        obj["reason"] = exc.reason
    sys.stderr.write(json.dumps(obj, sort_keys=True) + "\n")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="ptkrein",
        description="Spectra, Krein-space diagnostics, currents, and dynamics "
        "for PT-symmetric potentials on a line",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to a JSON config")
        p.add_argument("--out", default=None, help="output path (overrides config output.path)")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except errors.ConfigError as exc:
        _error_object(exc, 1)
        return 1
    return run_command(args.command, cfg, destination=args.out)
