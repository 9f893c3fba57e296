"""Annihilation measurements never increase many-body entanglement on average.

Scaled annihilation products form a complete Kraus family: measuring which
configuration was removed leaves a smaller system whose reduced spectra
majorize the original.  The same bound governs operations that physically
transfer particles into fresh modes.
"""

import numpy as np

from schmidtfock import (
    annihilation_measurement,
    check_majorization,
    entanglement_entropy,
    enumerate_basis,
    normal_measurement,
    particle_transfer,
    random_state,
    verify_mixture_identity,
)
from schmidtfock.measure import random_transfer_family

rng = np.random.default_rng(3)

state = random_state(enumerate_basis("fermion", 5, 4), rng)
M, L = 2, 1

# -- the ensemble and its probabilities ---------------------------------------
ensemble = annihilation_measurement(state, M)
print(f"{len(ensemble)} branches, total probability = {ensemble.total_probability():.12f}")
for branch in ensemble.branches[:4]:
    print(f"  removed ({branch.label}): p = {branch.probability:.6f}")

# -- the mixture identity: averaging post-states recovers the original --------
residual = verify_mixture_identity(state, M, L, ensemble)
print("mixture-identity residual:", residual)

# -- majorization and the entropy inequality ----------------------------------
report = check_majorization(state, M, L, ensemble)
print("majorization holds:", report.holds, " min margin:", report.min_margin)
for kind in ("von_neumann", "linear"):
    print(
        f"  {kind}: before = {report.entropy_before[kind]:.6f} "
        f">= after = {report.entropy_after[kind]:.6f}"
    )

# -- measuring in the collective normal basis behaves the same ----------------
normal = normal_measurement(state, M)
print("normal-mode branches:", len(normal), " residual:",
      verify_mixture_identity(state, M, L, normal))

# -- particle transfer into fresh modes ---------------------------------------
source_dim = len(enumerate_basis("fermion", 5, M))
target_dim = len(enumerate_basis("fermion", 4, M))
family = random_transfer_family(target_dim, source_dim, 3, rng)
_, transfer_report = particle_transfer(state, family, 4, M)
print("transfer bound holds:", transfer_report.bound_holds)
print("  initial M-body entropy:", transfer_report.entropy_initial["von_neumann"])
print("  average final bipartite entropy:", transfer_report.entropy_final_avg["von_neumann"])
print("  (M-body entanglement of the source:", entanglement_entropy(state, M), ")")
