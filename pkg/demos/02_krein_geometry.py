"""Geometry of the indefinite inner product.

The parity-weighted product splits wavefunctions into a positive and a
negative sector. Eigenmodes of a symmetric complex Hamiltonian are
orthogonal in this product even when the ordinary Hilbert product says
otherwise, and superpositions across sectors are rejected.
"""

import numpy as np

from ptkrein import (
    Grid,
    build_hamiltonian,
    classify_vector,
    gram_matrix,
    hilbert_inner,
    krein_inner,
    normalize_and_phase_fix,
    parse_potential,
    solve_spectrum,
    validate_superposition,
)

grid = Grid(10.0, 1201)
H = build_hamiltonian(parse_potential("i*x^3"), grid)
pairs = [normalize_and_phase_fix(p) for p in solve_spectrum(H, 4)]

G = gram_matrix(pairs)
print("Gram matrix in the indefinite product (alternating signature):")
with np.printoptions(precision=2, suppress=False):
    print(G.real)
print()

a, b = pairs[0], pairs[1]
print(f"|indefinite product of modes 0,1| = {abs(krein_inner(a.psi, b.psi)):.2e}")
print(f"|Hilbert product of modes 0,1|    = {abs(hilbert_inner(a.psi, b.psi)):.2e}")
print("orthogonality lives in the indefinite product, not the Hilbert one")
print()

for k, p in enumerate(pairs):
    rep = classify_vector(p.psi)
    print(
        f"mode {k}: signature={rep.signature:>8}, "
        f"even share={rep.even_share:.3f}, odd share={rep.odd_share:.3f}"
    )
print()

# mixing sectors is physically inadmissible: the check explains the clash
mix = validate_superposition([(1.0, pairs[0].psi), (0.5, pairs[1].psi)])
print(f"mode0 + mode1 admissible: {mix.admissible} ({mix.reason})")
same = validate_superposition([(1.0, pairs[0].psi), (0.5, pairs[2].psi)])
print(f"mode0 + mode2 admissible: {same.admissible} ({same.reason})")
