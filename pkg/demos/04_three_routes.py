"""
Three routes to the same wavefunction
=====================================

psi_nm(q, x) can be written down in closed form, obtained by pushing the
oscillator eigenstates through the Dirac kernel of the canonical map, or
recovered from rho_nm by a Fourier transform.  The three agree up to a
global phase.
"""

import numpy as np

from pudq import canon
from pudq.pumodel import PUParams
from pudq.wavefn import (
    dirac_transform,
    osc_wavefunction,
    phase_aligned_error,
    pu_wavefunction_closed,
    wavefunction_from_wigner,
)
from pudq.wigner import WignerState, pu_wigner

P = PUParams(4, 1, 1)
ax = np.linspace(-3, 3, 31)
gf = canon.generating_function(P)

for n, m in [(0, 0), (1, 0), (1, 2)]:
    closed = pu_wavefunction_closed(n, m, P).on_grid((ax, ax))
    dirac = dirac_transform(osc_wavefunction(n, m, P), gf, (ax, ax)).values
    inv = wavefunction_from_wigner(pu_wigner(WignerState(n, m, P)), "pu", (ax, ax)).values
    print(f"({n}, {m})  closed/dirac {phase_aligned_error(closed, dirac):.1e}"
          f"  closed/fourier {phase_aligned_error(closed, inv):.1e}"
          f"  dirac/fourier {phase_aligned_error(dirac, inv):.1e}")
