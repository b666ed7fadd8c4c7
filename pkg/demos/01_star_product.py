"""
Moyal star products on polynomials
==================================

The star product of two polynomials is a finite series in hbar.  Its
commutator gives back the Poisson bracket at leading order, and for
quadratics it stops there.
"""

from pudq.polyalg import PU_SIGNATURE, moyal_bracket, moyal_star, poisson_bracket, symbols

q, p = symbols("q p_q")

print("q * p      =", moyal_star(q, p, PU_SIGNATURE))
print("p * q      =", moyal_star(p, q, PU_SIGNATURE))
print("q^2 * p^2  =", moyal_star(q * q, p * p, PU_SIGNATURE))

f = q ** 3 + p * q
g = p ** 3
print()
print("{f, g}          =", poisson_bracket(f, g, PU_SIGNATURE))
# the bracket of a cubic picks up an hbar^2 correction
print("Moyal bracket   =", moyal_bracket(f, g, PU_SIGNATURE))
