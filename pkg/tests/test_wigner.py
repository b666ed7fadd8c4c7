import math

import numpy as np
import pytest
from gmpy2 import mpq

from pudq.canon import oscillator_hamiltonian
from pudq.errors import SingularParametersError
from pudq.expgauss import gp_apply
from pudq.polyalg import OSC_SIGNATURE, PU_SIGNATURE, Poly, symbols
from pudq.pumodel import PUParams, hamiltonian
from pudq.quadrature import gaussian_integrate
from pudq.wigner import (
    OSC_VARS,
    PU_VARS,
    WignerState,
    energy,
    expectation,
    expectation_calibration,
    genvalue_operators,
    moyal_rhs,
    osc_wigner,
    pu_wigner,
    radial_residual,
    spectrum,
    star_evolution,
    star_genvalue_residual,
)

from .oracles import whitened_trapezoid

P = PUParams(2, 1, 1)
ORIGIN = {v: np.zeros(1) for v in PU_VARS}


def value(rho, point):
    return complex(rho.evaluate({k: np.array([float(v)]) for k, v in point.items()})[0])


def test_ground_state_origin():
    for hb in (1, 2, mpq(1, 3)):
        rho = pu_wigner(WignerState(0, 0, PUParams(2, 1, hb)))
        assert abs(value(rho, dict.fromkeys(PU_VARS, 0)) - 1 / (math.pi ** 2 * float(hb) ** 2)) < 1e-14
        rho_o = osc_wigner(WignerState(0, 0, PUParams(2, 1, hb), "oscillator"))
        assert abs(value(rho_o, dict.fromkeys(OSC_VARS, 0)) - 1 / (math.pi ** 2 * float(hb) ** 2)) < 1e-14


def test_first_excited_vanishes_on_laguerre_root():
    # with only x nonzero J1 = 16 x^2 / 3; the normalized state carries L1(2 J1 / hbar W1),
    # so its zero surface is x^2 = 3/16
    rho = pu_wigner(WignerState(1, 0, P))
    assert abs(value(rho, {"q": 0, "p_q": 0, "x": math.sqrt(3 / 16), "p_x": 0})) < 1e-15
    assert value(rho, dict.fromkeys(PU_VARS, 0)).real < 0
    # the printed Laguerre argument 4 J1 / hbar W1 puts the surface at x^2 = 3/32
    printed = pu_wigner(WignerState(1, 0, P), variant="printed")
    assert abs(value(printed, {"q": 0, "p_q": 0, "x": math.sqrt(3 / 32), "p_x": 0})) < 1e-15


@pytest.mark.parametrize("n,m", [(0, 0), (1, 0), (0, 1), (2, 1)])
def test_normalized_by_independent_quadrature(n, m):
    rho = pu_wigner(WignerState(n, m, P))
    assert abs(whitened_trapezoid(rho) - 1) < 1e-6
    assert abs(gaussian_integrate(rho).value - 1) < 1e-9


def test_printed_prefactors_are_not_normalized():
    # exp(-2J/hW) L(4J/hW) integrates to 1/4 and is not a star eigenfunction
    rho = pu_wigner(WignerState(0, 0, P), variant="printed")
    assert abs(gaussian_integrate(rho).value - 0.25) < 1e-9
    assert not star_genvalue_residual(hamiltonian(P), rho, energy(0, 0, P), 1).is_zero()


def test_overlaps_are_orthogonal():
    states = [(n, m) for n in range(3) for m in range(3) if n + m <= 2]
    rhos = {s: pu_wigner(WignerState(*s, P)) for s in states}
    scale = gaussian_integrate(rhos[(0, 0)] * rhos[(0, 0)]).value.real
    assert abs(scale - 1 / (2 * math.pi) ** 2) < 1e-9
    for i, a in enumerate(states):
        for b in states[i:]:
            v = gaussian_integrate(rhos[a] * rhos[b]).value
            assert abs(v - (scale if a == b else 0)) < 1e-6 * scale


def test_real_coefficients():
    for n in range(4):
        for m in range(4):
            assert pu_wigner(WignerState(n, m, P)).is_real()


def test_pu_frame_rejects_equal_frequencies():
    with pytest.raises(SingularParametersError):
        WignerState(0, 0, PUParams(1, 1))
    WignerState(0, 0, PUParams(1, 1), "oscillator")


def test_oscillator_rotation_invariance():
    p = PUParams(3, 1)
    rho = osc_wigner(WignerState(2, 1, p, "oscillator"))
    f = rho.numeric(OSC_VARS)
    rng = np.random.default_rng(0)
    X1, P1, X2, P2 = rng.normal(size=(4, 10))
    base = f(X1, P1, X2, P2)
    for th in (0.3, 1.7, math.pi):
        c, s = math.cos(th), math.sin(th)
        y1, k1 = c * X1 - s * P1 / 3, 3 * (s * X1 + c * P1 / 3)
        assert np.allclose(f(y1, k1, X2, P2), base, atol=1e-14)


def test_radial_equation():
    # ground state: nu = E / (2 hbar W) for a single oscillator with E = hbar W / 2
    assert radial_residual(0, mpq(1, 4) * 2).is_zero()
    for n in range(6):
        assert radial_residual(n, n + mpq(1, 2)).is_zero()
    assert not radial_residual(2, mpq(1, 2)).is_zero()


def test_genvalue_examples():
    h = hamiltonian(P)
    rho = pu_wigner(WignerState(0, 0, P))
    e = energy(0, 0, P)
    assert e == mpq(1, 2)
    assert star_genvalue_residual(h, rho, e, 1).is_zero()
    assert star_genvalue_residual(h, rho, e, 1, side="right").is_zero()
    # (H - 0) rho = +E00 rho
    assert star_genvalue_residual(h, rho, 0, 1) == rho.scale(e)
    re_op, im_op = genvalue_operators(h, 1, PU_SIGNATURE)
    for n, m in [(0, 0), (1, 2)]:
        r = pu_wigner(WignerState(n, m, P))
        assert gp_apply(im_op, r).is_zero()
        assert (gp_apply(re_op, r) - r.scale(energy(n, m, P))).is_zero()


@pytest.mark.parametrize("pair", [(2, 1), (mpq(3, 2), 1), (mpq(5, 3), 1)])
def test_oscillator_frame_genvalues(pair):
    p = PUParams(*pair)
    h = oscillator_hamiltonian(p)
    for n in range(6):
        for m in range(6):
            rho = osc_wigner(WignerState(n, m, p, "oscillator"))
            assert star_genvalue_residual(h, rho, energy(n, m, p), 1, OSC_SIGNATURE).is_zero()


def test_genvalues_with_general_hbar():
    p = PUParams(3, 2, mpq(2, 5))
    for n, m in [(0, 0), (2, 1)]:
        rho = pu_wigner(WignerState(n, m, p))
        assert star_genvalue_residual(hamiltonian(p), rho, energy(n, m, p), p.hbar).is_zero()


def test_spectrum_examples():
    assert energy(0, 0, P) == mpq(1, 2)
    assert energy(1, 0, P) - energy(0, 0, P) == 2
    assert energy(0, 1, P) - energy(0, 0, P) == -1
    assert energy(0, 0, PUParams(1, 1)) == 0
    with pytest.raises(SingularParametersError):
        spectrum(PUParams(1, 1), 2, 2)
    eq = spectrum(PUParams(3, 3), 2, 2, allow_equal=True)
    assert all(e.energy == (e.n - e.m) * 3 for e in eq)
    table = spectrum(P, 10, 10)
    assert len(table) == 121 and table.unbounded_below
    assert min(e.energy for e in table) < 0


def test_expectations():
    cal = expectation_calibration(P)
    assert abs(cal - 1) < 1e-9
    one = Poly.const(1)
    q = Poly.var("q")
    h = hamiltonian(P)
    assert abs(expectation(one, pu_wigner(WignerState(0, 0, P)), 1) - 1) < 1e-6
    assert abs(expectation(q, pu_wigner(WignerState(0, 0, P)), 1)) < 1e-8
    for n in range(3):
        for m in range(3):
            v = expectation(h, pu_wigner(WignerState(n, m, P)), 1)
            assert abs(v - float(energy(n, m, P))) < 1e-6
            assert abs(v.imag) < 1e-8


def _points(seed=1):
    return np.random.default_rng(seed).normal(size=(4, 12)) * 0.7


def test_stationary_state_does_not_evolve():
    s = WignerState(2, 1, P)
    rho = pu_wigner(s)
    pts = _points()
    for t in (0.0, 0.37, 12.5, 1e3):
        ev = star_evolution([(1, s)], t)
        assert len(ev.terms) == 1
        coeff, w = ev.terms[0]
        assert coeff == 1 and w == rho
        assert np.max(np.abs(ev(*pts) - rho.numeric(PU_VARS)(*pts))) < 1e-15


def test_superposition_obeys_moyal_equation():
    sup = [(0.6, WignerState(0, 0, P)), (0.8, WignerState(1, 1, P))]
    pts = _points(2)
    t, h = 0.9, 1e-5
    fd = (star_evolution(sup, t + h)(*pts) - star_evolution(sup, t - h)(*pts)) / (2 * h)
    assert np.max(np.abs(fd - moyal_rhs(sup, t)(*pts))) < 1e-6


def test_interference_period():
    sup = [(1, WignerState(0, 0, P)), (1, WignerState(1, 0, P))]
    pts = _points(3)
    period = 2 * math.pi / float(energy(1, 0, P) - energy(0, 0, P))
    a, b = star_evolution(sup, 0.2)(*pts), star_evolution(sup, 0.2 + period)(*pts)
    assert np.max(np.abs(a - b)) < 1e-12
    assert np.max(np.abs(a - star_evolution(sup, 0.2 + period / 2)(*pts))) > 1e-3


def test_series_matches_spectral_phases():
    sup = [(1, WignerState(0, 0, P)), (1, WignerState(0, 1, P))]
    pts = _points(4)
    spectral = star_evolution(sup, 1e-2)(*pts)
    series = star_evolution(sup, 1e-2, truncation=3)(*pts)
    assert np.max(np.abs(series - spectral)) < 1e-6


def test_evolved_state_stays_real():
    sup = [(1, WignerState(0, 0, P)), (1j, WignerState(2, 0, P))]
    assert np.max(np.abs(star_evolution(sup, 0.8)(*_points(5)).imag)) < 1e-14
