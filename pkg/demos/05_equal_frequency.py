"""
Approaching equal frequencies
=============================

As W1 - W2 shrinks the closed-form ground state spreads out and its
norm grows like 1/delta.  At delta = 0 the PU-frame constructors refuse.
"""

from pudq.errors import PUDQError
from pudq.pumodel import PUParams
from pudq.wavefn import equal_freq_norm_divergence, pu_wavefunction_closed
from pudq.wigner import WignerState

out = equal_freq_norm_divergence(1, ["1/2", "1/4", "1/8", "1/16"])
for d, nrm in zip(out["deltas"], out["norms"]):
    print(f"delta = {d:>5}   ||psi_00||^2 = {nrm:10.4f}")
print("successive ratios:", [round(r, 4) for r in out["ratios"]])

p = PUParams(1, 1, 1)
for build in (lambda: WignerState(0, 0, p), lambda: pu_wavefunction_closed(0, 0, p)):
    try:
        build()
    except PUDQError as exc:
        print(type(exc).__name__ + ":", exc)
