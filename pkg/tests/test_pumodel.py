import random

import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from pudq.errors import SingularParametersError
from pudq.polyalg import Poly
from pudq.pumodel import (
    ClassicalSolution,
    PUParams,
    charge_report,
    eliminate_to_eom,
    eom_operator,
    eom_residual,
    hamilton_equations,
    hamiltonian,
    momenta,
    noether_charges,
    symmetry_variation,
)

P21 = PUParams(2, 1)
VARS = ("q", "p_q", "x", "p_x")


def at(poly, *vals):
    return poly.subs(dict(zip(VARS, vals))).constant_term()


def test_params_validation():
    assert PUParams.parse("5/2,3/2") == PUParams(mpq(5, 2), mpq(3, 2), 1)
    with pytest.raises(ValueError):
        PUParams(0, 1)
    with pytest.raises(ValueError):
        PUParams.parse("1")


def test_hamiltonian_values():
    h = hamiltonian(P21)
    assert at(h, 0, 0, 0, 1) == mpq(1, 2)
    assert at(h, 1, 0, 0, 0) == -2


def test_hamilton_equations_reduce_to_fourth_order():
    flows = hamilton_equations(P21)
    assert flows["q"] == Poly.var("x")
    _, residual = eliminate_to_eom(P21)
    assert (residual + eom_operator(P21)).is_zero()


def test_momenta():
    p = PUParams(3, 2)
    px, pq = momenta(p)
    # q = cos W1 t at t = 0: (q, q', q'', q''') = (1, 0, -W1^2, 0)
    vals = dict(zip(("qd0", "qd1", "qd2", "qd3"), (1, 0, -9, 0)))
    assert px.subs(vals).constant_term() == -9 and pq.subs(vals).constant_term() == 0
    zero = dict.fromkeys(("qd0", "qd1", "qd2", "qd3"), 0)
    assert px.subs(zero).is_zero() and pq.subs(zero).is_zero()
    # q = sin W2 t: (0, W2, 0, -W2^3)
    vals = dict(zip(("qd0", "qd1", "qd2", "qd3"), (0, 2, 0, -8)))
    assert px.subs(vals).constant_term() == 0
    assert pq.subs(vals).constant_term() == -9 * 2


def test_charges():
    rep = charge_report(P21)
    assert rep["J1_H"].is_zero() and rep["J2_H"].is_zero()
    assert rep["H_minus_half_J_diff"].is_zero()
    assert rep["J1_J2"].is_zero()
    j1, _ = noether_charges(P21)
    assert at(j1, 0, 0, 0, 0) == 0


def test_charges_reject_equal_frequencies():
    with pytest.raises(SingularParametersError, match="omega1"):
        noether_charges(PUParams(1, 1))


@given(st.lists(st.integers(-50, 50), min_size=4, max_size=4))
def test_charges_nonnegative(pt):
    j1, j2 = noether_charges(PUParams(3, 1))
    vals = [mpq(v, 7) for v in pt]
    assert at(j1, *vals) >= 0 and at(j2, *vals) >= 0


def test_eom_residual_examples():
    assert abs(eom_residual(ClassicalSolution(a1=1), P21, [0, 0.3, 1.7])[1]) < 1e-12
    t = Poly.var("t")
    assert eom_residual(t, P21, [0, 1, mpq(1, 2)]) == [0, 4, 2]
    assert max(abs(r) for r in eom_residual(ClassicalSolution(a1=1, b2=1), P21, [0, mpq(1, 2), 1])) < 1e-12


def test_symmetry_variation():
    p = PUParams(3, 2)
    out = symmetry_variation(ClassicalSolution(a1=1), p, +1)
    assert out.amplitudes() == (0, 3 * 4, 0, 0)
    assert symmetry_variation(ClassicalSolution(), p, -1).amplitudes() == (0, 0, 0, 0)
    with pytest.raises(ValueError):
        symmetry_variation(ClassicalSolution(), p, 0)


@given(st.lists(st.integers(-9, 9), min_size=4, max_size=4), st.sampled_from([1, -1]))
def test_variation_is_a_solution(amps, sign):
    s = symmetry_variation(ClassicalSolution(*amps), P21, sign)
    assert max(abs(r) for r in eom_residual(s, P21, [0, 0.4, 2.5])) < 1e-9


def test_phase_point_round_trip():
    rng = random.Random(4)
    p = PUParams(mpq(5, 3), mpq(1, 2))
    for _ in range(5):
        s = ClassicalSolution(*(mpq(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)))
        assert ClassicalSolution.from_phase_point(p, *s.phase_point(p)) == s


def test_charges_conserved_along_trajectory():
    p = PUParams(2, 1)
    j1, j2 = noether_charges(p)
    s = ClassicalSolution(mpq(1, 2), 1, -1, mpq(1, 3))
    vals = []
    for t in (0.0, 0.7, 2.1):
        q, xx, q2, q3 = (s.evaluate(p, t, d) for d in range(4))
        pt = {"q": q, "x": xx, "p_x": q2, "p_q": -5 * xx - q3}
        vals.append((float(j1.evaluate(pt).real), float(j2.evaluate(pt).real)))
    assert max(abs(a[0] - vals[0][0]) + abs(a[1] - vals[0][1]) for a in vals) < 1e-10
