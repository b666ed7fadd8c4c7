import itertools

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, strategies as st

from pudq import canon
from pudq.canon import (
    EQF_ORDER,
    OSC_ORDER,
    PU_ORDER,
    LinearCanonicalMap,
    diagonalizing_map,
    equal_freq_hamiltonian,
    equal_freq_map,
    equal_freq_spectrum,
    generating_function,
    oscillator_hamiltonian,
    pullback,
    real_symplectic_invariant,
)
from pudq.errors import SignatureMismatchError, SingularParametersError
from pudq.polyalg import EQF_SIGNATURE, OSC_SIGNATURE, PU_SIGNATURE, Poly, poisson_bracket, symbols
from pudq.pumodel import PUParams, hamiltonian
from pudq.scalars import QuadExt, sqrt_exact, to_complex

P53 = PUParams(5, 3)
PAIRS = [(4, 1), (5, 3), (2, 1), (mpq(5, 3), 1)]


def test_pullback_to_decoupled_oscillators():
    for w1, w2 in PAIRS:
        p = PUParams(w1, w2)
        m = diagonalizing_map(p)
        assert pullback(hamiltonian(p), m) == oscillator_hamiltonian(p)


def test_symplectic_exact_rational_gamma():
    m = diagonalizing_map(P53)
    assert P53.gamma == 4
    assert m.is_symplectic()
    assert all(not v for row in m.symplectic_defect() for v in row)


def test_symplectic_exact_irrational_gamma():
    p = PUParams(2, 1)
    assert isinstance(p.gamma, QuadExt)
    assert diagonalizing_map(p).is_symplectic()


def test_origin_maps_to_origin():
    assert diagonalizing_map(P53).apply((0, 0, 0, 0)) == (0, 0, 0, 0)


def test_printed_transformation_entries():
    # q = (W1 X2 - P1)/(W1 g), x = (W1 X1 - P2)/g, p_x = (W1 P1 - W2^2 X2)/g, p_q = W1(W1 P2 - W2^2 X1)/g
    w1, w2, g = mpq(5), mpq(3), mpq(4)
    X1, X2, P1, P2 = (mpq(v) for v in (2, -1, 3, 7))
    q, x, pq, px = diagonalizing_map(P53).apply((X1, X2, P1, P2))
    assert q == (w1 * X2 - P1) / (w1 * g)
    assert x == (w1 * X1 - P2) / g
    assert px == (w1 * P1 - w2 ** 2 * X2) / g
    assert pq == w1 * (w1 * P2 - w2 ** 2 * X1) / g


def test_generator_reproduces_map():
    gf = generating_function(P53)
    assert gf.to_map(P53).matrix == diagonalizing_map(P53).matrix
    X1, X2 = symbols("X1 X2")
    assert gf.poly.subs({"q": 0, "x": 0}) == X1 * X2 * -5


def test_generator_momentum_relation_at_a_point():
    # dF/dx at (q, x, X1, X2) equals p_x of the map at the matching point
    m = diagonalizing_map(P53)
    rel = generating_function(P53).momentum_relations()
    new = (mpq(1), mpq(-2), mpq(3, 2), mpq(1, 3))
    q, x, pq, px = m.apply(new)
    vals = {"q": q, "x": x, "X1": new[0], "X2": new[1]}
    assert rel["p_x"].subs(vals).constant_term() == px
    assert rel["p_q"].subs(vals).constant_term() == pq
    assert rel["P1"].subs(vals).constant_term() == new[2]


def test_mixed_hessian_printed_and_corrected():
    w1, g = mpq(5), mpq(4)
    printed = generating_function(P53, "printed")
    assert printed.mixed_hessian() == [[0, w1 * g], [g, 0]]
    from pudq import exactlin as el

    assert el.det(printed.mixed_hessian()) == -w1 * g * g
    corrected = generating_function(P53)
    assert corrected.mixed_hessian() == [[w1 * g, 0], [0, g]]
    # the printed generator induces a canonical map that does not decouple the Hamiltonian
    mp = printed.to_map(P53)
    assert mp.is_symplectic()
    assert pullback(hamiltonian(P53), mp) != oscillator_hamiltonian(P53)


def test_equal_frequency_rejected_by_diagonalizer():
    with pytest.raises(SingularParametersError):
        diagonalizing_map(PUParams(1, 1))
    with pytest.raises(SingularParametersError):
        generating_function(PUParams(2, 2))


def test_equal_freq_generator_substitution():
    gf, _ = equal_freq_map(1, variant="printed")
    x, Q1 = symbols("x Q1")
    assert gf.poly.subs({"q": 0, "Q2": 0}) == (x * Q1).scale(sqrt_exact(mpq(1, 2)))
    gf3, _ = equal_freq_map(3, variant="printed")
    assert gf3.poly.subs({"q": 0, "Q2": 0}) == (x * Q1).scale(3 * sqrt_exact(mpq(1, 2)))


def test_equal_freq_printed_map_is_canonical_but_misses_target():
    for w in (1, 2, mpq(1, 3)):
        gf, m = equal_freq_map(w, variant="printed")
        assert m.is_symplectic()
        pb = pullback(hamiltonian(PUParams(w, w)), m)
        assert pb != equal_freq_hamiltonian(w)


def test_equal_freq_complex_map_reaches_target():
    for w in (1, 2, mpq(3, 2)):
        _, m = equal_freq_map(w)
        assert m.is_symplectic()
        assert pullback(hamiltonian(PUParams(w, w)), m) == equal_freq_hamiltonian(w)
        _, mr = equal_freq_map(w, variant="real-plus")
        assert pullback(hamiltonian(PUParams(w, w)), mr) == equal_freq_hamiltonian(w, sign=+1)


def test_no_real_canonical_map_reaches_target():
    for w in (1, 2):
        h = hamiltonian(PUParams(w, w))
        target = equal_freq_hamiltonian(w)
        assert real_symplectic_invariant(h, PU_ORDER, w) == (0, 2, 2)
        assert real_symplectic_invariant(target, EQF_ORDER, w) == (2, 0, 2)
        assert real_symplectic_invariant(equal_freq_hamiltonian(w, +1), EQF_ORDER, w) == (0, 2, 2)
        # momentum reversal (anti-canonical) flips the sign of the rotation term only
        flipped = target.compose({"P1": -Poly.var("P1"), "P2": -Poly.var("P2")})
        assert real_symplectic_invariant(flipped, EQF_ORDER, w) == (2, 0, 2)


def test_invariant_is_invariant_under_real_maps():
    h = hamiltonian(PUParams(1, 1))
    for w1, w2 in [(5, 3), (4, 1)]:
        m = diagonalizing_map(PUParams(w1, w2))
        moved = pullback(h, m).compose(
            {v: Poly.var(u) for v, u in zip(OSC_ORDER, PU_ORDER)}
        )
        assert real_symplectic_invariant(moved, PU_ORDER, 1) == real_symplectic_invariant(h, PU_ORDER, 1)


def test_equal_freq_spectrum():
    assert equal_freq_spectrum(1, 1, 0, 0.0) == 0
    assert equal_freq_spectrum(1, 1, 2, 2.0) == 1
    ks = np.linspace(0.1, 3, 20)
    e = [equal_freq_spectrum(2, 1, 1, k) for k in ks]
    assert all(b < a for a, b in zip(e, e[1:]))


def test_pullback_of_constant_and_variable_check():
    m = diagonalizing_map(P53)
    assert pullback(Poly.const(7), m) == 7
    with pytest.raises(SignatureMismatchError):
        pullback(Poly.var("X1"), m)


def test_brackets_preserved_on_all_pairs():
    for w1, w2 in [(5, 3), (2, 1)]:
        m = diagonalizing_map(PUParams(w1, w2))
        sub = m.substitution()
        for a, b in itertools.combinations(PU_ORDER, 2):
            new = poisson_bracket(sub[a], sub[b], OSC_SIGNATURE)
            old = poisson_bracket(Poly.var(a), Poly.var(b), PU_SIGNATURE)
            assert new == old
    _, m = equal_freq_map(1)
    sub = m.substitution()
    assert poisson_bracket(sub["q"], sub["p_q"], EQF_SIGNATURE) == 1


def test_round_trip():
    for p in (P53, PUParams(2, 1)):
        m = diagonalizing_map(p)
        ident = m.compose(m.inverse())
        n = len(PU_ORDER)
        assert ident.matrix == tuple(tuple(mpq(int(i == j)) for j in range(n)) for i in range(n))


def test_normal_mode_frequencies():
    for w1, w2 in [(5, 3), (2, 1), (mpq(7, 2), mpq(1, 3))]:
        p = PUParams(w1, w2)
        A = np.array([[float(to_complex(c).real) for c in r] for r in canon.quadratic_matrix(hamiltonian(p), PU_ORDER)])
        J = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])
        ev = np.sort(np.abs(np.linalg.eigvals(J @ A).imag))
        assert np.allclose(ev, sorted([float(w2)] * 2 + [float(w1)] * 2), atol=1e-10)


def test_identity_map_is_symplectic():
    eye = [[int(i == j) for j in range(4)] for i in range(4)]
    assert LinearCanonicalMap(eye).is_symplectic()
    with pytest.raises(ValueError):
        LinearCanonicalMap([[1, 0], [0, 1]])


@given(st.integers(1, 9), st.integers(1, 9))
def test_generated_maps_are_symplectic(a, b):
    w1, w2 = max(a, b) + 1, min(a, b)
    p = PUParams(w1, w2)
    m = diagonalizing_map(p)
    assert m.is_symplectic() and generating_function(p).to_map(p).matrix == m.matrix
