"""
Splitting the oscillator into two
=================================

A linear canonical map turns H_PU into the difference of two ordinary
oscillators.  The check runs in exact arithmetic, including the square
root gamma = sqrt(W1^2 - W2^2).
"""

from pudq import canon
from pudq.pumodel import PUParams, hamiltonian

for w1, w2 in [(5, 3), (4, 1)]:
    p = PUParams(w1, w2, 1)
    gf = canon.generating_function(p)
    m = gf.to_map(p)
    print(f"W = ({w1}, {w2})")
    print("  generator  F =", gf.poly)
    print("  symplectic   :", m.is_symplectic())
    print("  pullback     :", canon.pullback(hamiltonian(p), m))
    print("  target       :", canon.oscillator_hamiltonian(p))

# At equal frequency the usual real generator is canonical but lands on a
# different Hamiltonian; an inertia count shows no real map can do better.
w = 1
hp = hamiltonian(PUParams(w, w, 1))
_, printed = canon.equal_freq_map(w, 1, variant="printed")
_, cmap = canon.equal_freq_map(w, 1)
print("\nequal frequency, target:", canon.equal_freq_hamiltonian(w))
print("  real generator pullback :", canon.pullback(hp, printed))
print("  complex map pullback    :", canon.pullback(hp, cmap))
print("  inertia PU     :", canon.real_symplectic_invariant(hp, ("q", "p_q", "x", "p_x"), w))
print("  inertia target :", canon.real_symplectic_invariant(canon.equal_freq_hamiltonian(w), ("Q1", "P1", "Q2", "P2"), w))
