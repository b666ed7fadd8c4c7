"""Polynomial-times-Gaussian functions ``P * exp(Q) * pi**k``.

The class is closed under partial derivatives, so the finite-order operators
produced by :func:`pudq.polyalg.bopp_operator` map a :class:`GaussPoly` to
another one with the same exponent.  Residuals of phase-space eigenvalue
equations therefore reduce to exact polynomial identities.

Powers of pi are carried as an integer tag and only materialize during
floating-point evaluation.
"""

from __future__ import annotations

import math

import numpy as np
from gmpy2 import mpq

from .errors import SignatureMismatchError
from .polyalg import INERT, DifferentialOperator, Poly
from .scalars import as_coeff

__all__ = ["QuadForm", "GaussPoly", "gp_diff", "gp_apply", "gp_scale_sub"]


class QuadForm:
    """Quadratic form ``z^T M z + l.z + c`` with exact coefficients.

    Stored as a :class:`Poly` of total degree at most two; ``matrix``,
    ``linear`` and ``constant`` expose the symmetric-matrix view.
    """

    __slots__ = ("poly", "vars")

    def __init__(self, poly, vars: tuple | None = None):
        poly = Poly._coerce(poly)
        if poly.degree() > 2:
            raise ValueError(f"exponent must be at most quadratic, got degree {poly.degree()}")
        vars = tuple(vars) if vars is not None else tuple(sorted(poly.variables(), key=str))
        if not poly.variables() <= set(vars):
            raise ValueError(f"exponent uses {sorted(poly.variables() - set(vars))} outside {vars}")
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "vars", vars)

    def __setattr__(self, name, value):
        raise AttributeError("QuadForm is immutable")

    @classmethod
    def from_matrix(cls, vars, matrix, linear=None, constant=0) -> "QuadForm":
        vars = tuple(vars)
        n = len(vars)
        M = [[as_coeff(matrix[i][j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i):
                if M[i][j] != M[j][i]:
                    raise ValueError("quadratic-form matrix must be symmetric")
        p = Poly.const(constant)
        for i in range(n):
            zi = Poly.var(vars[i])
            p = p + (zi * zi).scale(M[i][i])
            for j in range(i + 1, n):
                p = p + (zi * Poly.var(vars[j])).scale(2 * M[i][j])
            if linear is not None:
                p = p + zi.scale(linear[i])
        return cls(p, vars)

    @property
    def matrix(self):
        n = len(self.vars)
        M = [[mpq(0)] * n for _ in range(n)]
        for i, a in enumerate(self.vars):
            M[i][i] = self.poly.coeff({a: 2})
            for j in range(i + 1, n):
                c = self.poly.coeff({a: 1, self.vars[j]: 1}) / 2
                M[i][j] = M[j][i] = c
        return M

    @property
    def linear(self):
        return [self.poly.coeff({a: 1}) for a in self.vars]

    @property
    def constant(self):
        return self.poly.constant_term()

    def diff(self, var: str) -> Poly:
        return self.poly.diff(var)

    def subs(self, values: dict) -> "QuadForm":
        return QuadForm(self.poly.subs(values), tuple(v for v in self.vars if v not in values))

    def __add__(self, other: "QuadForm") -> "QuadForm":
        vars = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return QuadForm(self.poly + other.poly, vars)

    def __eq__(self, other):
        if not isinstance(other, QuadForm):
            return NotImplemented
        return self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def evaluate(self, values: dict) -> np.ndarray:
        return self.poly.evaluate(values)

    def __str__(self):
        return str(self.poly)

    def __repr__(self):
        return f"QuadForm({self.poly})"


class GaussPoly:
    """``prefactor * exp(exponent) * pi**pi_power`` over the variables ``vars``."""

    __slots__ = ("prefactor", "exponent", "vars", "pi_power")

    def __init__(self, prefactor, exponent=None, vars: tuple | None = None, pi_power: int = 0):
        prefactor = Poly._coerce(prefactor)
        if exponent is None:
            exponent = QuadForm(Poly.zero(), vars or ())
        elif not isinstance(exponent, QuadForm):
            exponent = QuadForm(exponent, vars)
        if vars is None:
            vars = exponent.vars + tuple(
                sorted(prefactor.variables() - set(exponent.vars) - INERT, key=str)
            )
        vars = tuple(vars)
        extra = prefactor.variables() - set(vars) - INERT
        if extra or not set(exponent.vars) <= set(vars):
            raise SignatureMismatchError(f"GaussPoly variables {vars} do not cover {sorted(extra)}")
        object.__setattr__(self, "prefactor", prefactor)
        object.__setattr__(self, "exponent", exponent)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "pi_power", int(pi_power))

    def __setattr__(self, name, value):
        raise AttributeError("GaussPoly is immutable")

    def _like(self, prefactor: Poly) -> "GaussPoly":
        g = object.__new__(GaussPoly)
        object.__setattr__(g, "prefactor", prefactor)
        object.__setattr__(g, "exponent", self.exponent)
        object.__setattr__(g, "vars", self.vars)
        object.__setattr__(g, "pi_power", self.pi_power)
        return g

    def is_zero(self) -> bool:
        return self.prefactor.is_zero()

    def _check_compatible(self, other: "GaussPoly"):
        if self.is_zero() or other.is_zero():
            return
        if self.exponent != other.exponent:
            raise ValueError("cannot add GaussPoly values with different exponents")
        if self.pi_power != other.pi_power:
            raise ValueError("cannot add GaussPoly values with different powers of pi")

    def __add__(self, other):
        if not isinstance(other, GaussPoly):
            return NotImplemented
        self._check_compatible(other)
        base = other if self.is_zero() else self
        return base._like(self.prefactor + other.prefactor)

    def __neg__(self):
        return self._like(-self.prefactor)

    def __sub__(self, other):
        if not isinstance(other, GaussPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "GaussPoly":
        """Multiply by an exact number or polynomial (exponent unchanged)."""
        if isinstance(c, Poly):
            return self._like(self.prefactor * c)
        return self._like(self.prefactor.scale(c))

    def __mul__(self, other):
        if isinstance(other, GaussPoly):
            vars = self.vars + tuple(v for v in other.vars if v not in self.vars)
            return GaussPoly(
                self.prefactor * other.prefactor,
                self.exponent + other.exponent,
                vars,
                self.pi_power + other.pi_power,
            )
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GaussPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return (
            self.exponent == other.exponent
            and self.pi_power == other.pi_power
            and self.prefactor == other.prefactor
        )

    def __hash__(self):
        return hash((self.prefactor, self.exponent, self.pi_power))

    def conjugate(self) -> "GaussPoly":
        return GaussPoly(
            self.prefactor.conjugate(),
            QuadForm(self.exponent.poly.conjugate(), self.exponent.vars),
            self.vars,
            self.pi_power,
        )

    def is_real(self) -> bool:
        return self.prefactor.is_real() and self.exponent.poly.is_real()

    def diff(self, var: str, order: int = 1) -> "GaussPoly":
        return gp_diff(self, var, order)

    def subs(self, values: dict) -> "GaussPoly":
        return gp_scale_sub(self, values)

    # numerics ----------------------------------------------------------
    def evaluate(self, values: dict) -> np.ndarray:
        """Floating evaluation; ``values`` maps variable names to arrays."""
        pre = self.prefactor.evaluate(values)
        ex = self.exponent.evaluate(values)
        return pre * np.exp(ex) * math.pi ** self.pi_power

    def numeric(self, order: tuple | None = None):
        """Compile to ``f(*arrays)`` taking arrays in ``order`` (default ``vars``)."""
        order = tuple(order) if order is not None else self.vars
        E1, C1 = self.prefactor.compile(order)
        E2, C2 = self.exponent.poly.compile(order)
        scale = math.pi ** self.pi_power
        from .polyalg import _eval_monomials

        def f(*arrays):
            arrs = np.broadcast_arrays(*[np.asarray(a, dtype=complex) for a in arrays])
            shape = arrs[0].shape if arrs else ()
            X = np.stack([a.ravel() for a in arrs]) if arrs else np.zeros((0, 1))
            pre = _eval_monomials(E1, C1, X, 1 << 21)
            ex = _eval_monomials(E2, C2, X, 1 << 21)
            return (pre * np.exp(ex) * scale).reshape(shape)

        return f

    def __str__(self):
        tag = f" * pi^{self.pi_power}" if self.pi_power else ""
        return f"({self.prefactor}) * exp({self.exponent}){tag}"

    def __repr__(self):
        return f"GaussPoly({self})"


def gp_diff(g: GaussPoly, v: str, order: int = 1) -> GaussPoly:
    """Exact ``order``-th partial derivative with respect to ``v``."""
    if v not in g.vars:
        raise SignatureMismatchError(f"{v} is not a variable of this GaussPoly {g.vars}")
    if order < 0:
        raise ValueError("derivative order must be >= 0")
    dq = g.exponent.diff(v)
    p = g.prefactor
    for _ in range(order):
        p = p.diff(v) + p * dq
    return g._like(p)


def gp_apply(op: DifferentialOperator, g: GaussPoly) -> GaussPoly:
    """Apply a polynomial-coefficient differential operator term by term."""
    allowed = set(g.vars) | set(op.gens) | INERT
    for c in op.terms.values():
        bad = c.variables() - allowed
        if bad:
            raise SignatureMismatchError(f"operator coefficient uses unknown variables {sorted(bad)}")
    dq = {v: g.exponent.diff(v) for v in op.gens if v in g.vars}
    cache = {(0,) * len(op.gens): g.prefactor}
    zero = Poly.zero()

    def deriv(alpha):
        hit = cache.get(alpha)
        if hit is not None:
            return hit
        # peel one derivative off the last nonzero slot
        i = max(k for k, a in enumerate(alpha) if a)
        v = op.gens[i]
        prev = deriv(alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:])
        if v not in dq or prev.is_zero():
            out = zero
        else:
            out = prev.diff(v) + prev * dq[v]
        cache[alpha] = out
        return out

    total = zero
    for alpha, c in op.terms.items():
        d = deriv(alpha)
        if not d.is_zero():
            total = total + c * d
    return g._like(total)


def gp_scale_sub(g: GaussPoly, assignments: dict) -> GaussPoly:
    """Substitute exact values; a fully substituted GaussPoly has no variables."""
    assignments = {k: as_coeff(v) for k, v in assignments.items()}
    vars = tuple(v for v in g.vars if v not in assignments)
    return GaussPoly(
        g.prefactor.subs(assignments),
        g.exponent.subs(assignments),
        vars,
        g.pi_power,
    )
