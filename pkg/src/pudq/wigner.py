"""Wigner functions of the PU oscillator and of its oscillator-frame image.

Conventions: a pure state ``psi`` on ``R^d`` has Wigner function
``W(X, P) = (2 pi)^-d int psi*(X - hbar y/2) exp(-i y.P) psi(X + hbar y/2) d^d y``,
which integrates to one.  For a single oscillator of frequency ``W`` the
``k``-th eigenstate gives ``(-1)^k/(pi hbar) exp(-2H/hbar W) L_k(4H/hbar W)``.
The PU frame charges are ``J_i = 2 H_i^osc o T^-1`` so the PU Wigner function
uses ``exp(-J_i/hbar W_i) L(2 J_i/hbar W_i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from gmpy2 import mpq

from .canon import diagonalizing_map, oscillator_hamiltonian
from .errors import SingularParametersError
from .expgauss import GaussPoly, QuadForm, gp_apply
from .polyalg import OSC_SIGNATURE, PU_SIGNATURE, HBAR, PairSignature, Poly, bopp_operator, symbols
from .pumodel import PUParams, hamiltonian, noether_charges
from .quadrature import QuadratureSpec, gaussian_integrate
from .scalars import I, as_coeff, sqrt_exact
from .specfun import laguerre

__all__ = [
    "WignerState",
    "SpectrumEntry",
    "SpectrumTable",
    "energy",
    "spectrum",
    "pu_wigner",
    "osc_wigner",
    "star_genvalue_residual",
    "genvalue_operators",
    "radial_residual",
    "expectation",
    "expectation_calibration",
    "cross_wigner",
    "star_evolution",
    "moyal_rhs",
    "PU_VARS",
    "OSC_VARS",
]

PU_VARS = ("q", "p_q", "x", "p_x")
OSC_VARS = ("X1", "P1", "X2", "P2")


@dataclass(frozen=True)
class WignerState:
    n: int
    m: int
    params: PUParams
    frame: str = "pu"

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError("quantum numbers must be non-negative")
        if self.frame not in ("pu", "oscillator"):
            raise ValueError(f"unknown frame {self.frame!r}")
        if self.frame == "pu":
            self.params.require_distinct("PU-frame Wigner function (1/(omega1^2 - omega2^2))")

    @property
    def energy(self):
        return energy(self.n, self.m, self.params)


@dataclass(frozen=True)
class SpectrumEntry:
    n: int
    m: int
    energy: object


@dataclass(frozen=True)
class SpectrumTable:
    entries: tuple
    params: PUParams
    unbounded_below: bool = True
    note: str = "E decreases without bound as m grows at fixed n"
    metadata: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def energy(n: int, m: int, p: PUParams):
    """``hbar ((n + 1/2) W1 - (m + 1/2) W2)``."""
    return p.hbar * ((n + mpq(1, 2)) * p.omega1 - (m + mpq(1, 2)) * p.omega2)


def spectrum(p: PUParams, n_max: int, m_max: int, allow_equal: bool = False) -> SpectrumTable:
    if n_max < 0 or m_max < 0:
        raise ValueError("bounds must be non-negative")
    if not allow_equal:
        p.require_distinct("PU spectrum (use allow_equal for the bare formula)")
    rows = tuple(SpectrumEntry(n, m, energy(n, m, p)) for m in range(m_max + 1) for n in range(n_max + 1))
    return SpectrumTable(rows, p)


# ---------------------------------------------------------------------------
# constructors


def _wigner_from_charges(c1: Poly, c2: Poly, n: int, m: int, p: PUParams, vars: tuple, kexp, klag) -> GaussPoly:
    h = p.hbar
    u1 = c1.scale(1 / (h * p.omega1))
    u2 = c2.scale(1 / (h * p.omega2))
    pre = laguerre(n)(u1.scale(klag)) * laguerre(m)(u2.scale(klag))
    pre = pre.scale(mpq((-1) ** (n + m)) / (h * h))
    return GaussPoly(pre, QuadForm(-(u1 + u2).scale(kexp), vars), vars, pi_power=-2)


def pu_wigner(s: WignerState, variant: str = "corrected") -> GaussPoly:
    """PU-frame ``rho_nm`` in ``(q, p_q, x, p_x)``.

    ``variant="printed"`` uses ``exp(-2J/hbar W) L(4J/hbar W)``, which treats
    ``J`` as if it were the oscillator energy; it is not a star-eigenfunction.
    """
    if s.frame != "pu":
        raise ValueError("pu_wigner needs frame='pu'")
    j1, j2 = noether_charges(s.params)
    if variant == "corrected":
        k = (1, 2)
    elif variant == "printed":
        k = (2, 4)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return _wigner_from_charges(j1, j2, s.n, s.m, s.params, PU_VARS, *k)


def osc_hamiltonians(p: PUParams):
    X1, P1, X2, P2 = symbols("X1 P1 X2 P2")
    h1 = (P1 * P1 + X1 * X1 * p.omega1 ** 2) * mpq(1, 2)
    h2 = (P2 * P2 + X2 * X2 * p.omega2 ** 2) * mpq(1, 2)
    return h1, h2


def osc_wigner(s: WignerState) -> GaussPoly:
    """Oscillator-frame ``rho_nm`` in ``(X1, P1, X2, P2)``."""
    if s.frame != "oscillator":
        raise ValueError("osc_wigner needs frame='oscillator'")
    h1, h2 = osc_hamiltonians(s.params)
    return _wigner_from_charges(h1, h2, s.n, s.m, s.params, OSC_VARS, 2, 4)


# ---------------------------------------------------------------------------
# star-genvalue equation


def _sig_for(vars) -> PairSignature:
    if set(vars) == set(PU_VARS):
        return PU_SIGNATURE
    if set(vars) == set(OSC_VARS):
        return OSC_SIGNATURE
    raise ValueError(f"no default pair signature for variables {vars}")


@lru_cache(maxsize=64)
def _bopp_numeric(h: Poly, sig: PairSignature, side: str, hbar):
    return bopp_operator(h, sig, side).subs({HBAR: hbar})


def star_genvalue_residual(h: Poly, rho: GaussPoly, e, hbar, sig: PairSignature | None = None, side: str = "left") -> GaussPoly:
    """``h * rho - e rho`` (left) or ``rho * h - e rho`` (right), exactly simplified."""
    sig = sig or _sig_for(rho.vars)
    op = _bopp_numeric(h, sig, side, as_coeff(hbar))
    return gp_apply(op, rho) - rho.scale(e)


def genvalue_operators(h: Poly, hbar, sig: PairSignature):
    """Real and imaginary parts ``(R, S)`` of the Bopp operator of a real ``h``.

    ``rho`` is a stationary state of energy ``E`` iff ``(R - E) rho = 0`` and
    ``S rho = 0``.
    """
    op = _bopp_numeric(h, sig, "left", as_coeff(hbar))
    return op.split_real_imag()


def radial_residual(n: int, nu) -> GaussPoly:
    """``(z/4 - z d_z^2 - d_z - nu) [exp(-z/2) L_n(z)]`` in the single variable ``z``."""
    z = Poly.var("z")
    f = GaussPoly(laguerre(n)(z), QuadForm(z.scale(mpq(-1, 2)), ("z",)), ("z",))
    d1 = f.diff("z")
    d2 = d1.diff("z")
    return f.scale(z.scale(mpq(1, 4))) - d2.scale(z) - d1 - f.scale(nu)


# ---------------------------------------------------------------------------
# expectation values


def expectation_calibration(p: PUParams, frame: str = "pu", quad: QuadratureSpec | None = None) -> float:
    """Measure constant making ``<1>`` equal one in the ground state."""
    s = WignerState(0, 0, p, frame)
    rho = pu_wigner(s) if frame == "pu" else osc_wigner(s)
    return 1.0 / gaussian_integrate(rho, quad).value.real


def expectation(a: Poly, rho: GaussPoly, hbar, quad: QuadratureSpec | None = None, calibration: float = 1.0) -> complex:
    """``calibration * int a * rho`` over phase space."""
    sig = _sig_for(rho.vars)
    ar = gp_apply(_bopp_numeric(a, sig, "left", as_coeff(hbar)), rho)
    return calibration * gaussian_integrate(ar, quad).value


# ---------------------------------------------------------------------------
# time evolution


def _ladders(p: PUParams, frame: str):
    """Per oscillator ``(c, cbar, scale2)`` with ``a = c / sqrt(scale2)``."""
    X1, P1, X2, P2 = symbols("X1 P1 X2 P2")
    out = []
    for X, P, w in ((X1, P1, p.omega1), (X2, P2, p.omega2)):
        c = X.scale(w) + P.scale(I)
        out.append([c, c.conjugate(), 2 * p.hbar * w])
    if frame == "pu":
        sub = diagonalizing_map(p).inverse().substitution()
        g2 = p.gamma_sq
        g = p.gamma
        for item in out:
            # rescale by gamma so coefficients stay rational
            item[0] = item[0].compose(sub).scale(g)
            item[1] = item[1].compose(sub).scale(g)
            item[2] = item[2] * g2
    return out


@lru_cache(maxsize=256)
def cross_wigner(p: PUParams, frame: str, bra_ket: tuple) -> GaussPoly:
    """Weyl symbol of ``|n m><n' m'|`` for ``bra_ket = (n, m, n', m')``."""
    n, m, n2, m2 = bra_ket
    sig = PU_SIGNATURE if frame == "pu" else OSC_SIGNATURE
    base = WignerState(0, 0, p, frame)
    rho = pu_wigner(base) if frame == "pu" else osc_wigner(base)
    lad = _ladders(p, frame)
    h = p.hbar
    norm = mpq(1)
    for (c, cbar, s2), k, j in zip(lad, (n, m), (n2, m2)):
        left = bopp_operator(cbar, sig, "left").subs({HBAR: h})
        right = bopp_operator(c, sig, "right").subs({HBAR: h})
        for _ in range(k):
            rho = gp_apply(left, rho)
        for _ in range(j):
            rho = gp_apply(right, rho)
        norm = norm * s2 ** (k + j) * math.factorial(k) * math.factorial(j)
    r = sqrt_exact(norm)
    return rho.scale(1 / r if not hasattr(r, "inverse") else r.inverse())


def _phase(de, t, hbar):
    if not de:
        return 1.0 + 0j
    return complex(np.exp(-1j * float(de) * t / float(hbar)))


@dataclass(frozen=True)
class EvolvedWigner:
    """``rho(t) = sum coeff * W`` with numerical coefficients and exact ``W``."""

    terms: tuple
    vars: tuple

    def __call__(self, *arrays):
        out = None
        for coeff, w in self.terms:
            v = coeff * w.numeric(self.vars)(*arrays)
            out = v if out is None else out + v
        return out


def _normalize_states(states):
    return [(complex(c), s) for c, s in states]


def star_evolution(states, t: float, truncation: int | None = None) -> EvolvedWigner:
    """Evolve a finite superposition ``sum c_k |n_k m_k>`` to time ``t``.

    With ``truncation=None`` the spectral form is used: the cross term between
    states ``k`` and ``j`` picks up ``exp(-i (E_k - E_j) t / hbar)``.  An integer
    ``truncation`` instead applies the star exponential series
    ``e_*^{-itH/hbar} * rho * e_*^{itH/hbar}`` through that total order in ``t``.
    """
    states = _normalize_states(states)
    p = states[0][1].params
    frame = states[0][1].frame
    if any(s.params != p or s.frame != frame for _, s in states):
        raise ValueError("all states must share parameters and frame")
    vars = PU_VARS if frame == "pu" else OSC_VARS
    terms = []
    for ck, sk in states:
        for cj, sj in states:
            w = cross_wigner(p, frame, (sk.n, sk.m, sj.n, sj.m))
            if truncation is None:
                de = energy(sk.n, sk.m, p) - energy(sj.n, sj.m, p)
                terms.append((ck * cj.conjugate() * _phase(de, t, p.hbar), w))
            else:
                terms.append((ck * cj.conjugate(), w))
    if truncation is None:
        return EvolvedWigner(tuple(terms), vars)
    return EvolvedWigner(tuple(_series_terms(terms, p, frame, t, truncation)), vars)


def _series_terms(terms, p: PUParams, frame: str, t: float, order: int):
    sig = PU_SIGNATURE if frame == "pu" else OSC_SIGNATURE
    h = hamiltonian(p) if frame == "pu" else oscillator_hamiltonian(p)
    left = _bopp_numeric(h, sig, "left", p.hbar)
    right = _bopp_numeric(h, sig, "right", p.hbar)
    hb = float(p.hbar)
    out = []
    for coeff, w in terms:
        # H^r * w * H^s for r + s <= order
        lefts = [w]
        for _ in range(order):
            lefts.append(gp_apply(left, lefts[-1]))
        for r, lw in enumerate(lefts):
            cur = lw
            for s in range(order - r + 1):
                if s:
                    cur = gp_apply(right, cur)
                f = (-1j * t / hb) ** r / math.factorial(r) * (1j * t / hb) ** s / math.factorial(s)
                out.append((coeff * f, cur))
    return out


def moyal_rhs(states, t: float):
    """``(H * rho - rho * H)/(i hbar)`` for the spectrally evolved superposition."""
    evolved = star_evolution(states, t)
    p = states[0][1].params
    frame = states[0][1].frame
    sig = PU_SIGNATURE if frame == "pu" else OSC_SIGNATURE
    h = hamiltonian(p) if frame == "pu" else oscillator_hamiltonian(p)
    left = _bopp_numeric(h, sig, "left", p.hbar)
    right = _bopp_numeric(h, sig, "right", p.hbar)
    terms = []
    for coeff, w in evolved.terms:
        comm = gp_apply(left, w) - gp_apply(right, w)
        terms.append((coeff / (1j * float(p.hbar)), comm))
    return EvolvedWigner(tuple(terms), evolved.vars)
