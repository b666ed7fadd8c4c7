"""
Wigner functions of the Pais-Uhlenbeck oscillator
=================================================

Every rho_nm solves H * rho = E_nm rho exactly, and the energies are
unbounded from below: at fixed n they fall linearly in m.
"""

import numpy as np

from pudq.pumodel import PUParams, hamiltonian
from pudq.wigner import WignerState, energy, pu_wigner, spectrum, star_genvalue_residual

P = PUParams(2, 1, 1)
H = hamiltonian(P)
print("H =", H)

for n in range(3):
    for m in range(3):
        rho = pu_wigner(WignerState(n, m, P))
        r = star_genvalue_residual(H, rho, energy(n, m, P), P.hbar)
        print(f"  (n, m) = ({n}, {m})   E = {str(energy(n, m, P)):>5}   residual zero: {r.is_zero()}")

table = spectrum(P, 0, 8)
print("\nn = 0 column:", [str(e.energy) for e in table])

# the ground state peaks at the origin with height 1/pi^2
rho = pu_wigner(WignerState(0, 0, P))
zero = {v: np.zeros(1) for v in rho.vars}
print("\nrho_00(0) * pi^2 =", float(rho.evaluate(zero)[0].real) * np.pi ** 2)
