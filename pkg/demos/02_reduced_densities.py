"""M-body reduced density matrices: traces, spectra, reductions, entropies.

The raw M-body matrix of an N-particle state has trace C(N, M), shares its
nonzero spectrum with the (N-M)-body partner, and contracts consistently to
fewer bodies.  Fock configurations have fully analytic integer spectra.
"""

from math import comb

import numpy as np

from schmidtfock import (
    basis_state,
    entanglement_entropy,
    enumerate_basis,
    fock_rdm_spectrum,
    random_state,
    rdm,
    reduce,
)

rng = np.random.default_rng(7)

# -- traces and isospectrality ------------------------------------------------
state = random_state(enumerate_basis("fermion", 5, 4), rng)
for M in range(1, 5):
    rho = rdm(state, M)
    partner = rdm(state, 4 - M) if M < 4 else None
    line = f"M = {M}: trace = {rho.trace():.9f} (C(4,{M}) = {comb(4, M)})"
    if partner is not None:
        a = rho.spectrum().nonzero(1e-10)
        b = partner.spectrum().nonzero(1e-10)
        k = min(len(a), len(b))
        line += f", spectrum gap vs partner = {np.abs(a[:k] - b[:k]).max():.2e}"
    print(line)

# -- analytic Fock-state spectra ----------------------------------------------
occ = (2, 1, 0)
print("boson configuration", occ, "M = 1 spectrum:", fock_rdm_spectrum(occ, 1, "boson").values)
dense = rdm(basis_state(enumerate_basis("boson", 3, 3), occ), 1).spectrum().values
print("dense route agrees:", np.round(dense, 12))

# -- reduction: contract three bodies down to one ------------------------------
rho3 = rdm(state, 3)
rho1_contracted = reduce(rho3, 1)
rho1_direct = rdm(state, 1)
print("reduce(3 -> 1) max deviation:", np.abs(rho1_contracted.matrix - rho1_direct.matrix).max())

# -- entanglement entropies ----------------------------------------------------
slater = basis_state(enumerate_basis("fermion", 5, 3), (1, 1, 1, 0, 0))
print("Slater determinant one-body entropy:", entanglement_entropy(slater, 1), "= log2(3)")
for L in (1, 2, 3):
    print(
        f"random state: E({L}) = {entanglement_entropy(state, L):.9f}"
        f"  E({4 - L}) = {entanglement_entropy(state, 4 - L):.9f}"
    )
