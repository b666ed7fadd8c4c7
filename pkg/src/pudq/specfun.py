"""Laguerre and Hermite polynomials plus the integral identities used by the
wavefunction construction, packaged as numerical oracles."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from gmpy2 import mpq

from .errors import DivergentIntegralError, ExactnessError
from .polyalg import Poly
from .quadrature import QuadratureSpec, hermite_rule, laguerre_rule, trapezoid_rule

__all__ = [
    "PolySeq",
    "laguerre",
    "laguerre_rodrigues",
    "hermite",
    "hermite_explicit",
    "hermite_generating_residual",
    "laguerre_hermite_identity_check",
    "gaussian_integral_check",
    "reindex_double_sum",
    "antidiagonal_reindex",
    "orthogonality_residual",
]


@dataclass(frozen=True)
class PolySeq:
    """One member of a classical polynomial family, coefficients in ascending powers."""

    family: str
    degree: int
    coeffs: tuple

    def __post_init__(self):
        if self.family not in ("laguerre", "hermite"):
            raise ValueError(f"unknown family {self.family!r}")
        if len(self.coeffs) != self.degree + 1 or not self.coeffs[-1]:
            raise ValueError("coefficient list must have length degree+1 and nonzero leading term")

    def __call__(self, z):
        """Evaluate at an exact scalar, a Poly, a float/complex or a numpy array."""
        if isinstance(z, (float, complex, np.ndarray, np.generic)):
            return _eval_recurrence(self.family, self.degree, np.asarray(z, dtype=complex))
        acc = None
        for c in reversed(self.coeffs):
            acc = Poly.const(c) if acc is None else acc * z + c
        if isinstance(z, Poly):
            return acc
        return acc.constant_term()

    def to_poly(self, var: str = "z") -> Poly:
        return self(Poly.var(var))


def _eval_recurrence(family: str, n: int, z: np.ndarray) -> np.ndarray:
    prev, cur = np.zeros_like(z), np.ones_like(z)
    for k in range(n):
        if family == "hermite":
            prev, cur = cur, 2 * z * cur - 2 * k * prev
        else:
            prev, cur = cur, ((2 * k + 1 - z) * cur - k * prev) / (k + 1)
    return cur


def _check_degree(n):
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"polynomial degree must be a non-negative integer, got {n!r}")


@lru_cache(maxsize=None)
def laguerre(n: int) -> PolySeq:
    """``L_n`` from ``(k+1) L_{k+1} = (2k+1-z) L_k - k L_{k-1}``."""
    _check_degree(n)
    prev, cur = [mpq(0)], [mpq(1)]
    for k in range(n):
        nxt = [mpq(0)] * (len(cur) + 1)
        for i, c in enumerate(cur):
            nxt[i] += (2 * k + 1) * c
            nxt[i + 1] -= c
        for i, c in enumerate(prev):
            nxt[i] -= k * c
        prev, cur = cur, [c / (k + 1) for c in nxt]
    return PolySeq("laguerre", n, tuple(cur))


def laguerre_rodrigues(n: int) -> PolySeq:
    """``L_n = e^z d^n(e^{-z} z^n)/n!`` by differentiating ``P(z) e^{-z}`` n times."""
    _check_degree(n)
    p = [mpq(0)] * n + [mpq(1)]  # z^n
    for _ in range(n):
        # d/dz (P e^{-z}) = (P' - P) e^{-z}
        dp = [mpq(i) * p[i] for i in range(1, len(p))] + [mpq(0)]
        p = [a - b for a, b in zip(dp, p)]
    f = math.factorial(n)
    return PolySeq("laguerre", n, tuple(c / f for c in p))


@lru_cache(maxsize=None)
def hermite(n: int) -> PolySeq:
    """Physicists' ``H_n`` from ``H_{k+1} = 2x H_k - 2k H_{k-1}``."""
    _check_degree(n)
    prev, cur = [mpq(0)], [mpq(1)]
    for k in range(n):
        nxt = [mpq(0)] * (len(cur) + 1)
        for i, c in enumerate(cur):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        prev, cur = cur, nxt
    return PolySeq("hermite", n, tuple(cur))


def hermite_explicit(n: int) -> PolySeq:
    """``H_n = n! sum_m (-1)^m (2x)^{n-2m} / (m! (n-2m)!)``."""
    _check_degree(n)
    c = [mpq(0)] * (n + 1)
    for m in range(n // 2 + 1):
        c[n - 2 * m] = mpq((-1) ** m * math.factorial(n) * 2 ** (n - 2 * m), math.factorial(m) * math.factorial(n - 2 * m))
    return PolySeq("hermite", n, tuple(c))


def hermite_generating_residual(t: complex, x: complex, kmax: int) -> float:
    """``|sum_{k<=kmax} t^k H_k(x)/k! - exp(-t^2 + 2tx)|``."""
    s = sum(t ** k * complex(hermite(k)(np.complex128(x))) / math.factorial(k) for k in range(kmax + 1))
    return abs(s - cmath.exp(-t * t + 2 * t * x))


def laguerre_hermite_identity_check(n: int, a: float, b: float, quad: QuadratureSpec | None = None) -> float:
    """Residual of ``int H_n(x-a) H_n(x+a) e^{-x^2} e^{-2ibx} dx = 2^n sqrt(pi) n! e^{-b^2} L_n(2(a^2+b^2))``.

    The left side is Gauss-Hermite quadrature along the real axis.
    """
    quad = quad or QuadratureSpec(order=max(8, n + 1), tol=1e-12)

    def compute(k):
        x, w = hermite_rule(k)
        h = hermite(n)
        return np.sum(w * h(x - a) * h(x + a) * np.exp(-2j * b * x))

    lhs = quad.run(compute).value
    rhs = 2 ** n * math.sqrt(math.pi) * math.factorial(n) * math.exp(-b * b) * laguerre(n)(np.complex128(2 * (a * a + b * b)))
    return abs(lhs - complex(rhs))


def gaussian_integral_check(p: complex, q: complex, quad: QuadratureSpec | None = None) -> float:
    """Residual of ``int exp(-p^2 x^2 + q x) dx = exp(q^2/(4p^2)) sqrt(pi)/p``.

    ``p`` is taken with ``Re p > 0`` (the branch of ``sqrt(p^2)`` the closed form uses).
    The left side is a truncated trapezoid sum on the real axis.
    """
    p, q = complex(p), complex(q)
    a = p * p
    if a.real <= 0:
        raise DivergentIntegralError(f"need Re(p^2) > 0, got p^2 = {a}")
    if p.real < 0:
        p = -p
    center = (q.real * a.real + q.imag * a.imag) / (2 * abs(a) ** 2)  # peak of |integrand|
    width = 1 / math.sqrt(a.real)
    quad = quad or QuadratureSpec(order=64, rule="trapezoid", tol=1e-12)
    radius = quad.radius * width + 4 * width

    def compute(k):
        x, w = trapezoid_rule(k, radius)
        x = x + center
        return np.sum(w * np.exp(-a * x * x + q * x))

    lhs = quad.run(compute).value
    rhs = cmath.exp(q * q / (4 * a)) * math.sqrt(math.pi) / p
    return abs(lhs - rhs)


def reindex_double_sum(table):
    """Sum ``A[k][n]`` as ``sum_k sum_{n>=k}`` and as ``sum_n sum_{k<=n}``.

    Exact for exact entries.  If the table has triangular support (``A[k][n] = 0``
    for ``n < k``) both forms must also equal the plain sum over all entries.
    """
    rows = [list(r) for r in table]
    if not rows:
        return 0, 0
    K, N = len(rows), max(len(r) for r in rows)
    A = lambda k, n: rows[k][n] if n < len(rows[k]) else 0  # noqa: E731
    form1 = sum((A(k, n) for k in range(K) for n in range(k, N)), 0)
    form2 = sum((A(k, n) for n in range(N) for k in range(min(n + 1, K))), 0)
    if form1 != form2:
        raise ExactnessError("reindexed double sums disagree")
    triangular = all(A(k, n) == 0 for k in range(K) for n in range(min(k, N)))
    if triangular and sum((A(k, n) for k in range(K) for n in range(N)), 0) != form1:
        raise ExactnessError("triangular table: reindexed sum differs from the full sum")
    return form1, form2


def antidiagonal_reindex(table):
    """``sum_n sum_k A[k][n]`` versus ``sum_n sum_{k<=n} A[k][n-k]``."""
    rows = [list(r) for r in table]
    K = len(rows)
    N = max((len(r) for r in rows), default=0)
    A = lambda k, n: rows[k][n] if 0 <= n < len(rows[k]) else 0  # noqa: E731
    full = sum((A(k, n) for n in range(N) for k in range(K)), 0)
    anti = sum((A(k, s - k) for s in range(K + N) for k in range(min(s + 1, K))), 0)
    return full, anti


def orthogonality_residual(family: str, nmax: int, quad: QuadratureSpec | None = None) -> float:
    """Largest deviation of the Gram matrix from its textbook value."""
    quad = quad or QuadratureSpec(order=nmax + 1, tol=1e-12)
    fam = laguerre if family == "laguerre" else hermite
    rule = laguerre_rule if family == "laguerre" else hermite_rule

    def compute(k):
        x, w = rule(k)
        vals = np.array([fam(n)(x.astype(complex)) for n in range(nmax + 1)])
        return (vals * w) @ vals.T

    G = quad.run(compute).value
    expect = np.eye(nmax + 1)
    if family == "hermite":
        expect = np.diag([2.0 ** n * math.factorial(n) * math.sqrt(math.pi) for n in range(nmax + 1)])
    return float(np.max(np.abs(G - expect) / np.maximum(1, np.abs(expect))))
