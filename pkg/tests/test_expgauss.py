import math

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from pudq.errors import SignatureMismatchError
from pudq.expgauss import GaussPoly, QuadForm, gp_apply, gp_diff, gp_scale_sub
from pudq.polyalg import PU_SIGNATURE, DifferentialOperator, Poly, bopp_operator, moyal_star, symbols
from pudq.pumodel import PUParams, hamiltonian
from pudq.scalars import I
from pudq.wigner import WignerState, energy, pu_wigner

from .strategies import coeffs, polys

q, pq, x, px, hb = symbols("q p_q x p_x hbar")
VARS = ("q", "p_q", "x", "p_x")


def gauss(prefactor, exponent):
    return GaussPoly(prefactor, exponent, vars=VARS)


def test_diff_examples():
    g = GaussPoly(Poly.const(1), -q * q)
    assert gp_diff(g, "q").prefactor == q * -2
    assert gp_diff(g, "q", 0) == g
    h = GaussPoly(q, -q * q * mpq(1, 2))
    assert gp_diff(h, "q", 2).prefactor == q ** 3 - q * 3


def test_diff_matches_finite_difference():
    g = GaussPoly(q * q + 1, -q * q * mpq(1, 2) + q * mpq(1, 3))
    d = gp_diff(g, "q")
    t = np.array([-0.7, 0.2, 1.3])
    h = 1e-6
    fd = (g.evaluate({"q": t + h}) - g.evaluate({"q": t - h})) / (2 * h)
    assert np.allclose(d.evaluate({"q": t}), fd, atol=1e-8)


def test_unknown_variable():
    with pytest.raises(SignatureMismatchError):
        gp_diff(GaussPoly(q, -q * q), "x")


def test_apply_examples():
    g = GaussPoly(Poly.const(1), -q * q, vars=("q", "p_q"))
    assert gp_apply(DifferentialOperator.multiplication(Poly.const(3), PU_SIGNATURE.variables), g).prefactor == 3
    assert gp_apply(bopp_operator(q, PU_SIGNATURE), g).prefactor == q


def test_bopp_on_ground_state_gives_energy():
    p = PUParams(2, 1, 1)
    rho = pu_wigner(WignerState(0, 0, p))
    op = bopp_operator(hamiltonian(p), PU_SIGNATURE).subs({"hbar": 1})
    assert (gp_apply(op, rho) - rho.scale(energy(0, 0, p))).is_zero()
    assert energy(0, 0, p) == mpq(1, 2)


def test_scale_sub_examples():
    g = GaussPoly(I * hb * mpq(1, 2) * q, -q * q)
    assert gp_scale_sub(g, {"hbar": 1}).prefactor == q * (I * mpq(1, 2))
    full = gp_scale_sub(GaussPoly(q + 2, -q * q), {"q": 1})
    assert full.vars == () and full.prefactor == 3 and full.exponent.constant == -1


def test_ground_state_origin_value():
    rho = pu_wigner(WignerState(0, 0, PUParams(2, 1, 1)))
    at0 = gp_scale_sub(rho, dict.fromkeys(VARS, 0))
    assert at0.prefactor == 1 and at0.exponent.constant == 0 and at0.pi_power == -2
    assert abs(complex(rho.evaluate(dict.fromkeys(VARS, np.zeros(1)))[0]) - 1 / math.pi ** 2) < 1e-15


def test_quadform_matrix_convention():
    f = QuadForm(q * q * 3 + q * x * 2 - x + 5, ("q", "x"))
    assert f.matrix == [[3, 1], [1, 0]] or [list(r) for r in f.matrix] == [[3, 1], [1, 0]]
    assert list(f.linear) == [0, -1]
    assert f.constant == 5


def test_different_exponents_do_not_add():
    with pytest.raises(ValueError):
        GaussPoly(q, -q * q) + GaussPoly(q, -q * q * 2)


exponent = st.builds(lambda a, b, c: -(q * q) * a - (x * x) * b + q * x * c, st.builds(mpq, st.integers(1, 4)), st.builds(mpq, st.integers(1, 4)), coeffs)


@given(polys(max_degree=3, max_terms=3), exponent, st.sampled_from(VARS), st.sampled_from(VARS))
def test_partials_commute(p, e, u, v):
    g = gauss(p, e)
    assert gp_diff(gp_diff(g, u), v) == gp_diff(gp_diff(g, v), u)


@given(polys(max_degree=2, max_terms=3), polys(max_degree=2, max_terms=3), polys(max_degree=2, max_terms=2), exponent, coeffs, coeffs)
def test_apply_is_linear(p1, p2, h, e, a, b):
    op = bopp_operator(h, PU_SIGNATURE)
    g1, g2 = gauss(p1, e), gauss(p2, e)
    lhs = gp_apply(op, g1.scale(a) + g2.scale(b))
    assert lhs == gp_apply(op, g1).scale(a) + gp_apply(op, g2).scale(b)


@given(polys(max_degree=3, max_terms=3), polys(max_degree=3, max_terms=3))
def test_zero_exponent_reduces_to_star(h, g):
    out = gp_apply(bopp_operator(h, PU_SIGNATURE), gauss(g, Poly.zero()))
    assert out.prefactor == moyal_star(h, g, PU_SIGNATURE)
