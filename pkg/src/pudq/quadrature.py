"""Quadrature rules with a self-consistency gate.

Every numerical integral in the package goes through :meth:`QuadratureSpec.run`,
which evaluates at a starting order and keeps doubling until two successive
orders agree within ``tol``; failure to converge by ``max_order`` raises
:class:`~pudq.errors.UnderResolvedError` instead of returning a silently
inaccurate number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .errors import DivergentIntegralError, UnderResolvedError

__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "hermite_rule",
    "laguerre_rule",
    "trapezoid_rule",
    "gaussian_integrate",
    "for_chunks",
]


@dataclass(frozen=True)
class QuadResult:
    value: object
    error: float
    order: int


@dataclass(frozen=True)
class QuadratureSpec:
    """Rule description shared by all integrals.

    ``order`` is the starting per-axis node count, ``radius`` the truncation
    radius (in Gaussian widths) for truncated-domain rules, ``tol`` the allowed
    change between successive orders relative to the result's magnitude and
    ``atol`` an absolute floor for results that vanish (nodes).
    """

    order: int = 32
    radius: float = 8.0
    rule: str = "gauss-hermite"
    tol: float = 1e-10
    max_order: int = 1024
    axes: tuple = field(default=())
    atol: float = 0.0

    def __post_init__(self):
        if self.order < 1 or self.max_order < self.order:
            raise ValueError("need 1 <= order <= max_order")
        if self.radius <= 0 or self.tol <= 0 or self.atol < 0:
            raise ValueError("radius and tol must be positive")
        if self.rule not in ("gauss-hermite", "trapezoid", "gauss-laguerre"):
            raise ValueError(f"unknown rule {self.rule!r}")

    def with_order(self, order: int) -> "QuadratureSpec":
        return replace(self, order=order, max_order=max(self.max_order, order))

    def run(self, compute, start: int | None = None) -> QuadResult:
        """Evaluate ``compute(order)`` with order doubling until it is stable."""
        k = start or self.order
        prev = np.asarray(compute(k))
        while True:
            k2 = 2 * k
            if k2 > self.max_order:
                raise UnderResolvedError(
                    f"quadrature not converged by order {k} (max_order={self.max_order})",
                    estimate=float(np.max(np.abs(prev))) if prev.size else 0.0,
                )
            cur = np.asarray(compute(k2))
            err = float(np.max(np.abs(cur - prev))) if cur.size else 0.0
            scale = float(np.max(np.abs(cur))) if cur.size else 0.0
            if err <= max(self.tol * scale, self.atol, 1e-300):
                value = cur.item() if cur.ndim == 0 else cur
                return QuadResult(value, err, k2)
            prev, k = cur, k2


@lru_cache(maxsize=64)
def hermite_rule(n: int):
    """Nodes and weights for ``int f(x) exp(-x^2) dx``."""
    x, w = np.polynomial.hermite.hermgauss(n)
    return x, w


@lru_cache(maxsize=64)
def laguerre_rule(n: int):
    """Nodes and weights for ``int_0^inf f(z) exp(-z) dz``."""
    return np.polynomial.laguerre.laggauss(n)


def trapezoid_rule(n: int, radius: float):
    """``n`` equispaced nodes on ``[-radius, radius]`` with trapezoid weights."""
    x = np.linspace(-radius, radius, n)
    w = np.full(n, x[1] - x[0] if n > 1 else 2 * radius)
    w[0] *= 0.5
    w[-1] *= 0.5
    return x, w


def _complex_cholesky(A: np.ndarray) -> np.ndarray:
    """``A = L L^T`` for complex symmetric ``A`` with positive-definite real part."""
    n = A.shape[0]
    L = np.zeros_like(A, dtype=complex)
    for j in range(n):
        d = A[j, j] - np.sum(L[j, :j] ** 2)
        L[j, j] = np.sqrt(d)
        for i in range(j + 1, n):
            L[i, j] = (A[i, j] - np.sum(L[i, :j] * L[j, :j])) / L[j, j]
    return L


def gaussian_integrate(g, spec: QuadratureSpec | None = None) -> QuadResult:
    """Integrate a :class:`~pudq.expgauss.GaussPoly` over all of its variables.

    The exponent is written ``Q(mu + w) = Q(mu) - w^T A w`` around its complex
    stationary point and ``A = L L^T`` is factored over the complex numbers, so
    the remaining integral is a tensor Gauss-Hermite sum of a polynomial.  The
    contour shift is legitimate because the integrand is entire and
    ``Re A`` is positive definite (checked).
    """
    from .polyalg import _eval_monomials

    spec = spec or QuadratureSpec()
    vars = g.vars
    d = len(vars)
    if g.prefactor.is_zero():
        return QuadResult(0j, 0.0, 0)
    M = np.array([[complex(c) for c in row] for row in g.exponent.matrix], dtype=complex).reshape(d, d)
    lin = np.array([complex(c) for c in g.exponent.linear], dtype=complex)
    c0 = complex(g.exponent.constant)
    A = -M
    if d and np.min(np.linalg.eigvalsh(A.real)) <= 0:
        raise DivergentIntegralError("exponent real part is not negative definite")
    mu = np.linalg.solve(2 * A, lin) if d else np.zeros(0)
    qmu = c0 + lin @ mu / 2 if d else c0
    L = _complex_cholesky(A) if d else np.eye(0)
    LinvT = np.linalg.inv(L).T if d else np.eye(0)
    detL = np.prod(np.diag(L)) if d else 1.0
    E, C = g.prefactor.compile(vars)
    pref = np.exp(qmu) / detL * math.pi ** g.pi_power

    def compute(k):
        x, w = hermite_rule(k)
        grids = np.meshgrid(*([x] * d), indexing="ij")
        Y = np.stack([gr.ravel() for gr in grids])
        W = np.ones(Y.shape[1])
        for gw in np.meshgrid(*([w] * d), indexing="ij"):
            W = W * gw.ravel()
        Z = mu[:, None] + LinvT @ Y
        vals = _eval_monomials(E, C, Z, 1 << 22)
        return pref * np.sum(W * vals)

    deg = max(g.prefactor.degree(), 0)
    start = max(2, deg // 2 + 1)
    # exact cancellations (orthogonal states) need an absolute floor; use the
    # L1 mass of the summed terms so the gate stays scale invariant
    x, w = hermite_rule(start + 3)  # off any accidental zero set of the lowest rule
    Y = np.stack([gr.ravel() for gr in np.meshgrid(*([x] * d), indexing="ij")])
    W = np.prod(np.stack([gw.ravel() for gw in np.meshgrid(*([w] * d), indexing="ij")]), axis=0)
    Z = mu[:, None] + LinvT @ Y
    mass = abs(pref) * float(np.sum(W * np.abs(_eval_monomials(E, C, Z, 1 << 22))))
    # monomials of high-degree prefactors cancel inside each node value; rounding
    # is then set by the mass of the individual terms, not of their sum
    terms = abs(pref) * float(np.sum(W * np.abs(_eval_monomials(E, np.abs(C), np.abs(Z).astype(complex), 1 << 22))))
    spec = replace(spec, atol=max(spec.atol, spec.tol * mass * 1e-3, 16 * np.finfo(float).eps * terms))
    return spec.run(compute, start=start)


def for_chunks(body, n: int, step: int, workers: int = 1) -> None:
    """Run ``body(slice)`` over ``range(n)`` in blocks of ``step``.

    Blocks are disjoint and ``body`` may only write its own slice, so a thread
    pool gives bit-identical results to the serial loop.
    """
    slices = [slice(s, min(s + step, n)) for s in range(0, n, max(1, step))]
    if workers <= 1 or len(slices) < 2:
        for sl in slices:
            body(sl)
        return
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(body, slices))
