"""The Pais-Uhlenbeck oscillator in Ostrogradsky phase space (q, p_q, x, p_x)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from gmpy2 import mpq

from .errors import SingularParametersError
from .polyalg import PU_SIGNATURE, Poly, poisson_bracket, symbols
from .scalars import rational, sqrt_exact

__all__ = [
    "PUParams",
    "hamiltonian",
    "momenta",
    "noether_charges",
    "ClassicalSolution",
    "eom_residual",
    "symmetry_variation",
    "hamilton_equations",
    "eliminate_to_eom",
    "eom_operator",
    "charge_report",
    "JET",
]

JET = ("qd0", "qd1", "qd2", "qd3", "qd4")


@dataclass(frozen=True)
class PUParams:
    """Frequencies and Planck constant as exact positive rationals."""

    omega1: object
    omega2: object
    hbar: object = 1

    def __post_init__(self):
        for name in ("omega1", "omega2", "hbar"):
            v = rational(getattr(self, name))
            if v <= 0:
                raise ValueError(f"{name} must be positive, got {v}")
            object.__setattr__(self, name, v)

    @classmethod
    def parse(cls, text: str) -> "PUParams":
        """``"2,1,1"`` or ``"5/2,3/2"`` (hbar defaults to 1)."""
        parts = [s for s in text.replace(" ", "").split(",") if s]
        if len(parts) not in (2, 3):
            raise ValueError(f"expected 'omega1,omega2[,hbar]', got {text!r}")
        return cls(*parts)

    @property
    def delta(self):
        return self.omega1 - self.omega2

    @property
    def gamma_sq(self):
        return self.omega1 ** 2 - self.omega2 ** 2

    @property
    def gamma(self):
        """``sqrt(omega1^2 - omega2^2)``, exact (``mpq`` or ``QuadExt``)."""
        self.require_ordered("gamma")
        return sqrt_exact(self.gamma_sq)

    @property
    def equal(self) -> bool:
        return self.omega1 == self.omega2

    def require_distinct(self, quantity: str):
        if self.equal:
            raise SingularParametersError(
                f"{quantity} is singular at equal frequencies omega1 = omega2 = {self.omega1}",
                quantity=quantity,
            )

    def require_ordered(self, quantity: str):
        self.require_distinct(quantity)
        if self.omega1 < self.omega2:
            raise SingularParametersError(
                f"{quantity} needs omega1 > omega2 (got {self.omega1} < {self.omega2})",
                quantity=quantity,
            )

    def as_floats(self):
        return float(self.omega1), float(self.omega2), float(self.hbar)


def hamiltonian(p: PUParams) -> Poly:
    q, pq, x, px = symbols("q p_q x p_x")
    w1, w2 = p.omega1 ** 2, p.omega2 ** 2
    return pq * x + (px * px) * mpq(1, 2) + (x * x) * ((w1 + w2) / 2) - (q * q) * (w1 * w2 / 2)


def momenta(p: PUParams, jets: tuple = JET[:4]):
    """``(p_x, p_q)`` in terms of the jet symbols ``(q, qdot, qddot, qdddot)``."""
    d = [Poly.var(j) for j in jets]
    s = p.omega1 ** 2 + p.omega2 ** 2
    return d[2], -(d[1] * s) - d[3]


def noether_charges(p: PUParams):
    """The two conserved quadratic charges ``(J1, J2)``."""
    p.require_distinct("1/(omega1^2 - omega2^2)")
    q, pq, x, px = symbols("q p_q x p_x")
    w1, w2 = p.omega1 ** 2, p.omega2 ** 2
    k = 1 / (w1 - w2)
    j1 = ((px + q * w2) ** 2 * w1 + (pq + x * w1) ** 2) * k
    j2 = ((pq + x * w2) ** 2 + (px + q * w1) ** 2 * w2) * k
    return j1, j2


def charge_report(p: PUParams) -> dict:
    """Exact brackets and identities among ``H``, ``J1``, ``J2``."""
    h = hamiltonian(p)
    j1, j2 = noether_charges(p)
    sig = PU_SIGNATURE
    return {
        "J1_H": poisson_bracket(j1, h, sig),
        "J2_H": poisson_bracket(j2, h, sig),
        "J1_J2": poisson_bracket(j1, j2, sig),
        "H_minus_half_J_diff": h - (j1 - j2) * mpq(1, 2),
    }


# ---------------------------------------------------------------------------
# Hamilton's equations and their elimination to the fourth-order equation


def hamilton_equations(p: PUParams) -> dict:
    """Flow ``v -> {v, H}`` for each phase-space variable."""
    h = hamiltonian(p)
    return {v: poisson_bracket(Poly.var(v), h, PU_SIGNATURE) for v in PU_SIGNATURE.variables}


def _dt(expr: Poly) -> Poly:
    """Total time derivative on jet polynomials: ``d/dt qd_k = qd_{k+1}``."""
    out = Poly.zero()
    for k in range(len(JET) - 1):
        out = out + expr.diff(JET[k]) * Poly.var(JET[k + 1])
    if expr.degree(JET[-1]) > 0:
        raise ValueError("jet order exceeded")
    return out


def eom_operator(p: PUParams) -> Poly:
    """``q'''' + (W1+W2) q'' + W1 W2 q`` in jet variables."""
    d = [Poly.var(j) for j in JET]
    w1, w2 = p.omega1 ** 2, p.omega2 ** 2
    return d[4] + d[2] * (w1 + w2) + d[0] * (w1 * w2)


def eliminate_to_eom(p: PUParams, chain=("q", "x", "p_x", "p_q")):
    """Eliminate momenta from Hamilton's equations along ``chain``.

    Each flow ``{v_k, H}`` must be affine in ``v_{k+1}``; solving for it expresses
    every variable as a jet polynomial in q.  Returns ``(expressions, residual)``
    where ``residual`` is the last flow equation written in jet variables.
    """
    flows = hamilton_equations(p)
    expr = {chain[0]: Poly.var(JET[0])}
    for cur, nxt in zip(chain, chain[1:]):
        f = flows[cur].compose({v: e for v, e in expr.items()})
        a = f.diff(nxt)
        if not a.is_constant() or a.is_zero():
            raise ValueError(f"flow of {cur} is not affine in {nxt}")
        rest = f.compose({nxt: Poly.zero()})
        expr[nxt] = (_dt(expr[cur]) - rest) * (1 / a.constant_term())
    last = chain[-1]
    residual = _dt(expr[last]) - flows[last].compose(expr)
    return expr, residual


# ---------------------------------------------------------------------------
# classical solutions


@dataclass(frozen=True)
class ClassicalSolution:
    """``q(t) = a1 cos W1 t + b1 sin W1 t + a2 cos W2 t + b2 sin W2 t``."""

    a1: object = 0
    b1: object = 0
    a2: object = 0
    b2: object = 0

    def derivative(self, p: PUParams) -> "ClassicalSolution":
        w1, w2 = p.omega1, p.omega2
        return ClassicalSolution(w1 * self.b1, -w1 * self.a1, w2 * self.b2, -w2 * self.a2)

    def __add__(self, other: "ClassicalSolution") -> "ClassicalSolution":
        return ClassicalSolution(
            self.a1 + other.a1, self.b1 + other.b1, self.a2 + other.a2, self.b2 + other.b2
        )

    def scale(self, c) -> "ClassicalSolution":
        return ClassicalSolution(self.a1 * c, self.b1 * c, self.a2 * c, self.b2 * c)

    def amplitudes(self):
        return (self.a1, self.b1, self.a2, self.b2)

    def evaluate(self, p: PUParams, t, derivative: int = 0) -> float:
        s = self
        for _ in range(derivative):
            s = s.derivative(p)
        w1, w2 = float(p.omega1), float(p.omega2)
        t = float(t)
        return (
            float(s.a1) * math.cos(w1 * t) + float(s.b1) * math.sin(w1 * t)
            + float(s.a2) * math.cos(w2 * t) + float(s.b2) * math.sin(w2 * t)
        )

    def initial_conditions(self, p: PUParams):
        """Exact ``(q, q', q'', q''')`` at ``t = 0``."""
        out, s = [], self
        for _ in range(4):
            out.append(s.a1 + s.a2)
            s = s.derivative(p)
        return tuple(out)

    def phase_point(self, p: PUParams):
        """Exact ``(q, p_q, x, p_x)`` at ``t = 0`` via the Ostrogradsky momenta."""
        q0, q1, q2, q3 = self.initial_conditions(p)
        px, pq = momenta(p)
        vals = dict(zip(JET[:4], (q0, q1, q2, q3)))
        return q0, pq.subs(vals).constant_term(), q1, px.subs(vals).constant_term()

    @classmethod
    def from_initial_conditions(cls, p: PUParams, q0, q1, q2, q3) -> "ClassicalSolution":
        """Invert :meth:`initial_conditions` (needs distinct frequencies)."""
        p.require_distinct("amplitude basis")
        w1, w2 = p.omega1 ** 2, p.omega2 ** 2
        q0, q1, q2, q3 = (rational(v) for v in (q0, q1, q2, q3))
        # q0 = a1 + a2, q2 = -w1 a1 - w2 a2 ; q1 = W1 b1 + W2 b2, q3 = -w1 W1 b1 - w2 W2 b2
        a1 = (-q2 - w2 * q0) / (w1 - w2)
        a2 = q0 - a1
        c1 = (-q3 - w2 * q1) / (w1 - w2)  # = W1 b1
        c2 = q1 - c1
        return cls(a1, c1 / p.omega1, a2, c2 / p.omega2)

    @classmethod
    def from_phase_point(cls, p: PUParams, q, pq, x, px) -> "ClassicalSolution":
        s = p.omega1 ** 2 + p.omega2 ** 2
        q, pq, x, px = (rational(v) for v in (q, pq, x, px))
        return cls.from_initial_conditions(p, q, x, px, -pq - s * x)


def eom_residual(sol, p: PUParams, t_samples) -> list:
    """Fourth-order equation residual at each sample time.

    ``sol`` is a :class:`ClassicalSolution` (floating evaluation) or a
    polynomial in ``t`` (exact evaluation, returned as rationals).
    """
    w1, w2 = p.omega1 ** 2, p.omega2 ** 2
    if isinstance(sol, Poly):
        r = sol.diff("t", 4) + sol.diff("t", 2) * (w1 + w2) + sol * (w1 * w2)
        return [r.subs({"t": t}).constant_term() for t in t_samples]
    d2 = sol.derivative(p).derivative(p)
    d4 = d2.derivative(p).derivative(p)
    combo = d4 + d2.scale(w1 + w2) + sol.scale(w1 * w2)
    return [combo.evaluate(p, t) for t in t_samples]


def symmetry_variation(sol: ClassicalSolution, p: PUParams, sign: int) -> ClassicalSolution:
    """Variation direction ``q''' +/- (W1^2 - W2^2) q'`` as a solution."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    d1 = sol.derivative(p)
    d3 = d1.derivative(p).derivative(p)
    return d3 + d1.scale(sign * p.gamma_sq)
