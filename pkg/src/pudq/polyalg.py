"""Exact sparse multivariate polynomials and phase-space brackets.

A :class:`Poly` maps exponent tuples (one entry per generator name in
``gens``) to exact coefficients from :mod:`pudq.scalars`.  ``hbar`` is an
ordinary generator here; numeric values are substituted with :meth:`Poly.subs`
at module boundaries.

The Moyal product is computed from its terminating bidifferential series.
Bopp operators are built independently through composition in the Weyl
algebra, so ``bopp_operator(h).apply(g) == moyal_star(h, g)`` is a genuine
cross-check between two constructions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from operator import add

import numpy as np
from gmpy2 import mpq

from .errors import ExactnessError, SignatureMismatchError
from .scalars import (
    I,
    QuadExt,
    Scalar,
    as_coeff,
    conjugate,
    format_coeff,
    imag_part,
    real_part,
)

__all__ = [
    "Poly",
    "symbols",
    "PairSignature",
    "PU_SIGNATURE",
    "OSC_SIGNATURE",
    "EQF_SIGNATURE",
    "DifferentialOperator",
    "poisson_bracket",
    "moyal_star",
    "moyal_bracket",
    "bopp_operator",
    "HBAR",
    "INERT",
]

HBAR = "hbar"
INERT = frozenset({"hbar", "t"})

_CANONICAL = ("q", "p_q", "x", "p_x", "X1", "P1", "X2", "P2", "Q1", "Q2", "hbar", "t")
_RANK = {name: i for i, name in enumerate(_CANONICAL)}


def _gen_key(name: str):
    return (_RANK.get(name, len(_CANONICAL)), name)


def _merge_gens(a: tuple, b: tuple) -> tuple:
    if a == b:
        return a
    return tuple(sorted(set(a) | set(b), key=_gen_key))


def _remap(terms: dict, old: tuple, new: tuple) -> dict:
    if old == new:
        return terms
    idx = [new.index(g) for g in old]
    n = len(new)
    out = {}
    for e, c in terms.items():
        ne = [0] * n
        for i, k in zip(idx, e):
            ne[i] = k
        out[tuple(ne)] = c
    return out


def _coeff_ok(c) -> bool:
    return isinstance(c, (int, Scalar, QuadExt)) or type(c) is type(mpq(0))


class Poly:
    """Immutable sparse polynomial with exact coefficients.

    >>> q, p = symbols("q p_q")
    >>> str(q * p + mpq(1, 2))
    '1/2 + 1*q*p_q'
    """

    __slots__ = ("gens", "terms")

    def __init__(self, terms: dict | None = None, gens: tuple = ()):
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise ValueError(f"duplicate generators in {gens}")
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != len(gens) or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {e} for generators {gens}")
            c = as_coeff(c)
            if c:
                clean[e] = c
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def _new(cls, gens, terms):
        p = object.__new__(cls)
        object.__setattr__(p, "gens", gens)
        object.__setattr__(p, "terms", terms)
        return p

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # constructors -------------------------------------------------------
    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls._new((name,), {(1,): mpq(1)})

    @classmethod
    def const(cls, c, gens: tuple = ()) -> "Poly":
        c = as_coeff(c)
        gens = tuple(gens)
        return cls._new(gens, {(0,) * len(gens): c} if c else {})

    @classmethod
    def zero(cls, gens: tuple = ()) -> "Poly":
        return cls._new(tuple(gens), {})

    @classmethod
    def monomial(cls, powers: dict, coeff=1) -> "Poly":
        gens = tuple(sorted(powers, key=_gen_key))
        c = as_coeff(coeff)
        return cls._new(gens, {tuple(powers[g] for g in gens): c} if c else {})

    # basic structure ------------------------------------------------------
    def with_gens(self, gens: tuple) -> "Poly":
        """Re-express over ``gens`` (must contain every generator actually used)."""
        gens = tuple(gens)
        used = self.variables()
        if not used <= set(gens):
            raise ValueError(f"generators {sorted(used - set(gens))} missing from {gens}")
        keep = [i for i, g in enumerate(self.gens) if g in gens]
        trimmed = {tuple(e[i] for i in keep): c for e, c in self.terms.items()}
        return Poly._new(gens, _remap(trimmed, tuple(self.gens[i] for i in keep), gens))

    def trim(self) -> "Poly":
        return self.with_gens(tuple(g for g in self.gens if g in self.variables()))

    def variables(self) -> set:
        used = set()
        for e in self.terms:
            for g, k in zip(self.gens, e):
                if k:
                    used.add(g)
        return used

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        for e, c in self.terms.items():
            if not any(e):
                return c
        return mpq(0)

    def coeff(self, powers: dict | None = None):
        """Coefficient of the monomial ``prod g**k`` given as ``{g: k}``."""
        powers = powers or {}
        for g in powers:
            if g not in self.gens and powers[g]:
                return mpq(0)
        e = tuple(powers.get(g, 0) for g in self.gens)
        return self.terms.get(e, mpq(0))

    def degree(self, var: str | None = None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.gens:
            return 0
        i = self.gens.index(var)
        return max(e[i] for e in self.terms)

    def __len__(self):
        return len(self.terms)

    # arithmetic -----------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, Poly):
            return other
        if _coeff_ok(other) or isinstance(other, (int,)):
            return Poly.const(other)
        try:
            return Poly.const(as_coeff(other))
        except TypeError:
            return None

    def _aligned(self, other: "Poly"):
        gens = _merge_gens(self.gens, other.gens)
        return gens, _remap(self.terms, self.gens, gens), _remap(other.terms, other.gens, gens)

    def __add__(self, other):
        other = Poly._coerce(other)
        if other is None:
            return NotImplemented
        gens, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                s = v + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._new(gens, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._new(self.gens, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = Poly._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = Poly._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "Poly":
        c = as_coeff(c)
        if not c:
            return Poly._new(self.gens, {})
        out = {}
        for e, v in self.terms.items():
            w = v * c
            if w:
                out[e] = w
        return Poly._new(self.gens, out)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        gens, a, b = self._aligned(other)
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(map(add, e1, e2))
                v = get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return Poly._new(gens, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        c = as_coeff(other)
        return self.scale(1 / c if not isinstance(c, (Scalar, QuadExt)) else c.inverse())

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Poly.const(1, self.gens)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = Poly._coerce(other)
        if other is None:
            return NotImplemented
        _, a, b = self._aligned(other)
        return a == b

    def __hash__(self):
        return hash(frozenset(self.trim().terms.items()) | {tuple(sorted(self.variables()))})

    # calculus -------------------------------------------------------------
    def diff(self, var: str, order: int = 1) -> "Poly":
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        if order == 0:
            return self
        if var not in self.gens:
            return Poly._new(self.gens, {})
        i = self.gens.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k >= order:
                f = math.perm(k, order)
                out[e[:i] + (k - order,) + e[i + 1:]] = c * f
        return Poly._new(self.gens, out)

    def diff_multi(self, gens: tuple, alpha: tuple) -> "Poly":
        p = self
        for g, k in zip(gens, alpha):
            if k:
                p = p.diff(g, k)
        return p

    # substitution ---------------------------------------------------------
    def subs(self, values: dict) -> "Poly":
        """Substitute exact numbers for generators; substituted gens are dropped."""
        values = {g: as_coeff(v) for g, v in values.items() if g in self.gens}
        if not values:
            return self
        idx = [i for i, g in enumerate(self.gens) if g in values]
        keep = [i for i, g in enumerate(self.gens) if g not in values]
        gens = tuple(self.gens[i] for i in keep)
        powcache: dict = {}

        def pw(g, k):
            key = (g, k)
            if key not in powcache:
                powcache[key] = values[g] ** k if k else mpq(1)
            return powcache[key]

        out: dict = {}
        for e, c in self.terms.items():
            for i in idx:
                if e[i]:
                    c = c * pw(self.gens[i], e[i])
                    if not c:
                        break
            if not c:
                continue
            ne = tuple(e[i] for i in keep)
            v = out.get(ne)
            out[ne] = c if v is None else v + c
        return Poly._new(gens, {e: c for e, c in out.items() if c})

    def compose(self, mapping: dict) -> "Poly":
        """Replace generators by polynomials (simultaneous substitution)."""
        mapping = {g: Poly._coerce(v) for g, v in mapping.items()}
        keep = tuple(g for g in self.gens if g not in mapping)
        result = Poly.zero()
        powcache: dict = {}
        for e, c in self.terms.items():
            term = Poly._new(keep, {tuple(k for g, k in zip(self.gens, e) if g not in mapping): c})
            for g, k in zip(self.gens, e):
                if g in mapping and k:
                    key = (g, k)
                    if key not in powcache:
                        powcache[key] = mapping[g] ** k
                    term = term * powcache[key]
            result = result + term
        return result

    # coefficient-wise maps ----------------------------------------------
    def map_coeffs(self, fn) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                out[e] = v
        return Poly._new(self.gens, out)

    def conjugate(self) -> "Poly":
        return self.map_coeffs(conjugate)

    def real_part(self) -> "Poly":
        return self.map_coeffs(real_part)

    def imag_part(self) -> "Poly":
        return self.map_coeffs(imag_part)

    def is_real(self) -> bool:
        return all(not isinstance(c, Scalar) and not (isinstance(c, QuadExt) and c != real_part(c)) for c in self.terms.values())

    # numerics ---------------------------------------------------------------
    def compile(self, gens: tuple | None = None):
        """Return ``(exponents[T, V], coefficients[T])`` as numpy arrays over ``gens``."""
        gens = tuple(gens) if gens is not None else self.gens
        p = self.with_gens(gens) if gens != self.gens else self
        if not p.terms:
            return np.zeros((0, len(gens)), dtype=np.int64), np.zeros(0, dtype=complex)
        E = np.array(list(p.terms.keys()), dtype=np.int64).reshape(len(p.terms), len(gens))
        C = np.array([complex(c) for c in p.terms.values()], dtype=complex)
        return E, C

    def evaluate(self, values: dict, chunk: int = 1 << 21) -> np.ndarray:
        """Evaluate numerically; ``values`` maps each used generator to an array or number."""
        used = [g for g in self.gens if g in self.variables()]
        missing = [g for g in used if g not in values]
        if missing:
            raise ValueError(f"no values supplied for {missing}")
        E, C = self.compile(tuple(used))
        arrays = np.broadcast_arrays(*[np.asarray(values[g]) for g in used]) if used else []
        shape = arrays[0].shape if used else np.shape(next(iter(values.values()), 0))
        if not used:
            return np.full(shape, C.sum() if len(C) else 0.0, dtype=complex)
        X = np.stack([np.asarray(a, dtype=complex).ravel() for a in arrays])
        return _eval_monomials(E, C, X, chunk).reshape(shape)

    # rendering ----------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-k for k in e))):
            mono = "*".join(g if k == 1 else f"{g}^{k}" for g, k in zip(self.gens, e) if k)
            c = format_coeff(self.terms[e])
            parts.append(f"{c}*{mono}" if mono else c)
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


def _eval_monomials(E: np.ndarray, C: np.ndarray, X: np.ndarray, chunk: int) -> np.ndarray:
    V, N = X.shape
    out = np.zeros(N, dtype=complex)
    if len(C) == 0:
        return out
    maxdeg = E.max(axis=0)
    step = max(1, chunk // max(1, len(C)))
    for s in range(0, N, step):
        xs = X[:, s:s + step]
        acc = np.ones((len(C), xs.shape[1]), dtype=complex)
        for v in range(V):
            pw = np.ones((maxdeg[v] + 1, xs.shape[1]), dtype=complex)
            for k in range(1, maxdeg[v] + 1):
                pw[k] = pw[k - 1] * xs[v]
            acc *= pw[E[:, v]]
        out[s:s + step] = C @ acc
    return out


def symbols(names: str):
    """``symbols("q p_q")`` returns a tuple of generator polynomials."""
    out = tuple(Poly.var(n) for n in names.replace(",", " ").split())
    return out[0] if len(out) == 1 else out


# ---------------------------------------------------------------------------
# pair signatures


@dataclass(frozen=True)
class PairSignature:
    """Ordered conjugate pairs ``(coordinate, momentum)``."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple((str(a), str(b)) for a, b in self.pairs)
        flat = [v for pr in pairs for v in pr]
        if len(set(flat)) != len(flat):
            raise ValueError(f"a variable appears twice in {pairs}")
        if set(flat) & INERT:
            raise ValueError("hbar and t cannot be phase-space variables")
        object.__setattr__(self, "pairs", pairs)

    @property
    def variables(self) -> tuple:
        return tuple(v for pr in self.pairs for v in pr)

    @property
    def coordinates(self) -> tuple:
        return tuple(a for a, _ in self.pairs)

    @property
    def momenta(self) -> tuple:
        return tuple(b for _, b in self.pairs)

    def check(self, *polys: Poly, inert=INERT) -> None:
        allowed = set(self.variables) | set(inert)
        for p in polys:
            bad = p.variables() - allowed
            if bad:
                raise SignatureMismatchError(
                    f"variables {sorted(bad)} are not in signature {self.pairs}"
                )


PU_SIGNATURE = PairSignature((("q", "p_q"), ("x", "p_x")))
OSC_SIGNATURE = PairSignature((("X1", "P1"), ("X2", "P2")))
EQF_SIGNATURE = PairSignature((("Q1", "P1"), ("Q2", "P2")))


def poisson_bracket(f: Poly, g: Poly, sig: PairSignature) -> Poly:
    """Canonical Poisson bracket summed over the pairs of ``sig``."""
    sig.check(f, g)
    out = Poly.zero()
    for qv, pv in sig.pairs:
        out = out + f.diff(qv) * g.diff(pv) - f.diff(pv) * g.diff(qv)
    return out


# ---------------------------------------------------------------------------
# Moyal product from the bidifferential series


def _star_terms(f: Poly, g: Poly, sig: PairSignature):
    """Yield ``(a, b)`` tuples per pair with nonvanishing series contribution."""
    ranges = []
    for qv, pv in sig.pairs:
        amax = min(f.degree(qv), g.degree(pv))
        bmax = min(f.degree(pv), g.degree(qv))
        ranges.append([(a, b) for a in range(max(amax, 0) + 1) for b in range(max(bmax, 0) + 1)])
    return itertools.product(*ranges)


def moyal_star(f: Poly, g: Poly, sig: PairSignature, hbar=None) -> Poly:
    """Moyal product ``f * exp[(i hbar/2)(<-d_q ->d_p - <-d_p ->d_q)] * g``.

    ``hbar`` stays a symbolic generator unless an exact value is given.
    """
    sig.check(f, g)
    if f.is_zero() or g.is_zero():
        return Poly.zero()
    h = Poly.var(HBAR) if hbar is None else Poly.const(hbar)
    half_i = I * mpq(1, 2)
    fcache: dict = {}
    gcache: dict = {}
    out = Poly.zero()
    for combo in _star_terms(f, g, sig):
        k = sum(a + b for a, b in combo)
        nb = sum(b for _, b in combo)
        coef = half_i ** k * mpq((-1) ** nb, math.prod(math.factorial(a) * math.factorial(b) for a, b in combo))
        fa = []
        ga = []
        for (qv, pv), (a, b) in zip(sig.pairs, combo):
            fa += [(qv, a), (pv, b)]
            ga += [(pv, a), (qv, b)]
        fa, ga = tuple(fa), tuple(ga)
        if fa not in fcache:
            fcache[fa] = f.diff_multi(tuple(v for v, _ in fa), tuple(n for _, n in fa))
        if ga not in gcache:
            gcache[ga] = g.diff_multi(tuple(v for v, _ in ga), tuple(n for _, n in ga))
        df, dg = fcache[fa], gcache[ga]
        if df.is_zero() or dg.is_zero():
            continue
        out = out + (df * dg).scale(coef) * h ** k
    return out


def moyal_bracket(f: Poly, g: Poly, sig: PairSignature) -> Poly:
    """``(f*g - g*f)/(i hbar)`` with symbolic ``hbar``; division is exact."""
    diff = moyal_star(f, g, sig) - moyal_star(g, f, sig)
    if diff.is_zero():
        return diff
    if HBAR not in diff.gens:
        raise ExactnessError("star commutator has a term without hbar")
    i = diff.gens.index(HBAR)
    out = {}
    for e, c in diff.terms.items():
        if e[i] < 1:
            raise ExactnessError("star commutator is not divisible by hbar")
        out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * (-I)
    return Poly._new(diff.gens, out)


# ---------------------------------------------------------------------------
# differential operators with polynomial coefficients


class DifferentialOperator:
    """Normal-ordered operator ``sum_alpha c_alpha(vars) * d^alpha``.

    ``gens`` lists the variables that derivatives may act on; ``terms`` maps a
    multi-index over ``gens`` to a nonzero :class:`Poly` coefficient.
    """

    __slots__ = ("gens", "terms")

    def __init__(self, terms: dict, gens: tuple):
        gens = tuple(gens)
        clean = {}
        for alpha, c in terms.items():
            c = Poly._coerce(c)
            if not c.is_zero():
                clean[tuple(alpha)] = c
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("DifferentialOperator is immutable")

    @classmethod
    def multiplication(cls, c, gens: tuple) -> "DifferentialOperator":
        return cls({(0,) * len(gens): c}, gens)

    @classmethod
    def partial(cls, var: str, gens: tuple) -> "DifferentialOperator":
        gens = tuple(gens)
        alpha = tuple(1 if g == var else 0 for g in gens)
        if var not in gens:
            raise ValueError(f"{var} not among {gens}")
        return cls({alpha: Poly.const(1)}, gens)

    def order(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "DifferentialOperator"):
        if not isinstance(other, DifferentialOperator):
            return NotImplemented
        self._same(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out[a] + c if a in out else c
        return DifferentialOperator(out, self.gens)

    def __neg__(self):
        return DifferentialOperator({a: -c for a, c in self.terms.items()}, self.gens)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DifferentialOperator":
        """Left multiplication by a number or polynomial."""
        c = Poly._coerce(c)
        return DifferentialOperator({a: c * v for a, v in self.terms.items()}, self.gens)

    def _same(self, other):
        if self.gens != other.gens:
            raise ValueError(f"operator variables differ: {self.gens} vs {other.gens}")

    def compose(self, other: "DifferentialOperator") -> "DifferentialOperator":
        """``self o other`` normal ordered (Leibniz rule in the Weyl algebra)."""
        self._same(other)
        out: dict = {}
        for alpha, ca in self.terms.items():
            for beta, cb in other.terms.items():
                for gamma in itertools.product(*[range(k + 1) for k in alpha]):
                    binom = math.prod(math.comb(a, g) for a, g in zip(alpha, gamma))
                    d = cb.diff_multi(self.gens, gamma)
                    if d.is_zero():
                        continue
                    key = tuple(a - g + b for a, g, b in zip(alpha, gamma, beta))
                    term = (ca * d).scale(binom)
                    out[key] = out[key] + term if key in out else term
        return DifferentialOperator(out, self.gens)

    __matmul__ = compose

    def apply(self, g: Poly) -> Poly:
        out = Poly.zero()
        for alpha, c in self.terms.items():
            d = g.diff_multi(self.gens, alpha)
            if not d.is_zero():
                out = out + c * d
        return out

    def subs(self, values: dict) -> "DifferentialOperator":
        return DifferentialOperator({a: c.subs(values) for a, c in self.terms.items()}, self.gens)

    def map_coeffs(self, fn) -> "DifferentialOperator":
        return DifferentialOperator({a: fn(c) for a, c in self.terms.items()}, self.gens)

    def split_real_imag(self):
        """``(R, S)`` with real coefficients such that ``self == R + i*S``."""
        return (
            self.map_coeffs(Poly.real_part),
            self.map_coeffs(Poly.imag_part),
        )

    def __eq__(self, other):
        if not isinstance(other, DifferentialOperator):
            return NotImplemented
        if self.gens != other.gens:
            return False
        keys = set(self.terms) | set(other.terms)
        zero = Poly.zero()
        return all(self.terms.get(k, zero) == other.terms.get(k, zero) for k in keys)

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms)))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for alpha in sorted(self.terms, key=lambda a: (sum(a), a)):
            d = "".join(f"*d_{g}" + (f"^{k}" if k > 1 else "") for g, k in zip(self.gens, alpha) if k)
            parts.append(f"({self.terms[alpha]}){d}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DifferentialOperator({self})"


@lru_cache(maxsize=None)
def _shift_ops(sig: PairSignature, side: int):
    """Per-pair shifted coordinate and momentum operators ``(Qhat, Phat)``."""
    gens = sig.variables
    h = Poly.var(HBAR)
    c = I * mpq(side, 2)
    ops = []
    for qv, pv in sig.pairs:
        qhat = DifferentialOperator.multiplication(Poly.var(qv), gens) + DifferentialOperator.partial(pv, gens).scale(h.scale(c))
        phat = DifferentialOperator.multiplication(Poly.var(pv), gens) + DifferentialOperator.partial(qv, gens).scale(h.scale(-c))
        ops.append((qhat, phat))
    return ops


def _op_power(op: DifferentialOperator, k: int, gens) -> DifferentialOperator:
    out = DifferentialOperator.multiplication(1, gens)
    for _ in range(k):
        out = out @ op
    return out


@lru_cache(maxsize=None)
def _pair_monomial_op(sig: PairSignature, side: int, j: int, a: int, b: int) -> DifferentialOperator:
    """Left (side=+1) or right (side=-1) star-multiplication by ``q_j^a p_j^b``."""
    gens = sig.variables
    qhat, phat = _shift_ops(sig, side)[j]
    op = _op_power(qhat, a, gens) @ _op_power(phat, b, gens)
    h = Poly.var(HBAR)
    c = I * mpq(side, 2)
    for k in range(1, min(a, b) + 1):
        w = c ** k * mpq(math.perm(a, k) * math.perm(b, k), math.factorial(k))
        op = op - _pair_monomial_op(sig, side, j, a - k, b - k).scale((h ** k).scale(w))
    return op


def bopp_operator(h: Poly, sig: PairSignature, side: str = "left") -> DifferentialOperator:
    """Differential operator ``D`` with ``D(g) == h*g`` (left) or ``g*h`` (right).

    Built by substituting the Bopp-shifted arguments ``q + (i hbar/2) d_p``,
    ``p - (i hbar/2) d_q`` into ``h`` with Weyl-symmetric ordering; the result is
    normal ordered.  ``hbar`` appears as a symbolic generator in coefficients.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    sig.check(h)
    s = 1 if side == "left" else -1
    gens = sig.variables
    pair_idx = {v: (j, 0) for j, (v, _) in enumerate(sig.pairs)}
    pair_idx.update({v: (j, 1) for j, (_, v) in enumerate(sig.pairs)})
    total = DifferentialOperator({}, gens)
    for e, c in h.terms.items():
        ab = [[0, 0] for _ in sig.pairs]
        inert = {}
        for g, k in zip(h.gens, e):
            if not k:
                continue
            if g in pair_idx:
                j, which = pair_idx[g]
                ab[j][which] = k
            else:
                inert[g] = k
        op = DifferentialOperator.multiplication(Poly.monomial(inert, c) if inert else Poly.const(c), gens)
        for j, (a, b) in enumerate(ab):
            if a or b:
                op = op @ _pair_monomial_op(sig, s, j, a, b)
        total = total + op
    return total
