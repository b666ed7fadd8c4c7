"""Linear canonical transformations of the four-dimensional phase space.

Maps are stored as exact matrices acting on column vectors ordered
coordinates-first: ``old = M @ new`` with ``old = (q, x, p_q, p_x)`` and
``new = (X1, X2, P1, P2)`` (or ``(Q1, Q2, P1, P2)`` at equal frequencies).
Generating functions are type-1: ``p = dF/d(old coordinate)``,
``P = -dF/d(new coordinate)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from . import exactlin as el
from .errors import SignatureMismatchError, SingularParametersError
from .polyalg import EQF_SIGNATURE, INERT, OSC_SIGNATURE, PU_SIGNATURE, PairSignature, Poly, symbols
from .pumodel import PUParams, hamiltonian
from .scalars import I, as_coeff, format_coeff, sqrt_exact, to_complex

__all__ = [
    "LinearCanonicalMap",
    "GeneratingFunction",
    "diagonalizing_map",
    "generating_function",
    "oscillator_hamiltonian",
    "equal_freq_hamiltonian",
    "equal_freq_map",
    "equal_freq_spectrum",
    "pullback",
    "quadratic_matrix",
    "real_symplectic_invariant",
    "PU_ORDER",
    "OSC_ORDER",
    "EQF_ORDER",
]

PU_ORDER = ("q", "x", "p_q", "p_x")
OSC_ORDER = ("X1", "X2", "P1", "P2")
EQF_ORDER = ("Q1", "Q2", "P1", "P2")


def _signature(order: tuple) -> PairSignature:
    d = len(order) // 2
    return PairSignature(tuple(zip(order[:d], order[d:])))


@dataclass(frozen=True)
class LinearCanonicalMap:
    """``old = matrix @ new``; :meth:`inverse` swaps the roles of the two variable lists."""

    matrix: tuple
    old_vars: tuple = PU_ORDER
    new_vars: tuple = OSC_ORDER
    params: PUParams | None = None

    def __post_init__(self):
        m = tuple(tuple(as_coeff(v) for v in row) for row in self.matrix)
        n = len(self.old_vars)
        if len(m) != n or any(len(r) != len(self.new_vars) for r in m) or n % 2:
            raise ValueError("matrix shape does not match the variable lists")
        object.__setattr__(self, "matrix", m)

    @property
    def rows(self):
        return [list(r) for r in self.matrix]

    def symplectic_defect(self):
        """``M^T J M - J`` (all zeros iff the map is canonical)."""
        J = el.symplectic_form(len(self.old_vars) // 2)
        M = self.rows
        lhs = el.matmul(el.matmul(el.transpose(M), J), M)
        return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(lhs, J)]

    def is_symplectic(self) -> bool:
        return all(not v for row in self.symplectic_defect() for v in row)

    def inverse(self) -> "LinearCanonicalMap":
        return LinearCanonicalMap(el.inverse(self.rows), self.new_vars, self.old_vars, self.params)

    def compose(self, other: "LinearCanonicalMap") -> "LinearCanonicalMap":
        """``self`` after ``other``: requires ``other.old_vars == self.new_vars``."""
        if other.old_vars != self.new_vars:
            raise SignatureMismatchError(f"cannot compose: {other.old_vars} vs {self.new_vars}")
        return LinearCanonicalMap(el.matmul(self.rows, other.rows), self.old_vars, other.new_vars, self.params)

    def substitution(self) -> dict:
        """Old variables as polynomials in the new ones."""
        out = {}
        for v, row in zip(self.old_vars, self.matrix):
            p = Poly.zero()
            for c, w in zip(row, self.new_vars):
                if c:
                    p = p + Poly.var(w).scale(c)
            out[v] = p
        return out

    def apply(self, point):
        """Old coordinates of a new-frame point (exact or floating)."""
        if all(isinstance(v, (float, complex)) for v in point):
            return tuple(sum(to_complex(c) * v for c, v in zip(row, point)) for row in self.matrix)
        pt = [as_coeff(v) for v in point]
        return tuple(sum((c * v for c, v in zip(row, pt)), mpq(0)) for row in self.matrix)

    def to_json(self) -> dict:
        return {
            "old_vars": list(self.old_vars),
            "new_vars": list(self.new_vars),
            "convention": "old = matrix @ new",
            "matrix": [[format_coeff(c) for c in row] for row in self.matrix],
            "matrix_float": [[_cjson(c) for c in row] for row in self.matrix],
            "symplectic": self.is_symplectic(),
        }


def _cjson(c):
    z = to_complex(c)
    return z.real if z.imag == 0 else [z.real, z.imag]


def pullback(h: Poly, m: LinearCanonicalMap) -> Poly:
    """``h o T``: express ``h`` (in old variables) in the new variables."""
    bad = h.variables() - set(m.old_vars) - INERT
    if bad:
        raise SignatureMismatchError(f"{sorted(bad)} are not old variables of the map {m.old_vars}")
    return h.compose(m.substitution())


@dataclass(frozen=True)
class GeneratingFunction:
    """Quadratic type-1 generator ``F(old coordinates, new coordinates)``."""

    poly: Poly
    old_coords: tuple = ("q", "x")
    new_coords: tuple = ("X1", "X2")
    old_momenta: tuple = ("p_q", "p_x")
    new_momenta: tuple = ("P1", "P2")

    def __post_init__(self):
        allowed = set(self.old_coords) | set(self.new_coords)
        if not self.poly.variables() <= allowed:
            raise SignatureMismatchError(f"generator uses {sorted(self.poly.variables() - allowed)}")
        if any(sum(e) != 2 for e in self.poly.terms):
            raise ValueError("only homogeneous quadratic generators are supported")
        if not el.det(self.mixed_hessian()):
            raise SingularParametersError("mixed Hessian of the generator is singular", quantity="d2F/dq dQ")

    def _hess(self, a: tuple, b: tuple):
        return [[self.poly.diff(u).diff(v).constant_term() for v in b] for u in a]

    def mixed_hessian(self):
        return self._hess(self.old_coords, self.new_coords)

    def momentum_relations(self) -> dict:
        """``p = dF/d(old)`` and ``P = -dF/d(new)`` as linear polynomials."""
        out = {p: self.poly.diff(q) for q, p in zip(self.old_coords, self.old_momenta)}
        out.update({p: -self.poly.diff(q) for q, p in zip(self.new_coords, self.new_momenta)})
        return out

    def to_map(self, params: PUParams | None = None) -> LinearCanonicalMap:
        """Solve the generating relations for the old variables."""
        A = self._hess(self.old_coords, self.old_coords)
        B = self.mixed_hessian()
        C = self._hess(self.new_coords, self.new_coords)
        BinvT = el.inverse(el.transpose(B))
        neg = lambda M: [[-v for v in r] for r in M]  # noqa: E731
        o_n = neg(el.matmul(BinvT, C))
        o_P = neg(BinvT)
        p_n = [[b + a for b, a in zip(rb, ra)] for rb, ra in zip(B, el.matmul(A, o_n))]
        p_P = el.matmul(A, o_P)
        rows = [ra + rb for ra, rb in zip(o_n, o_P)] + [ra + rb for ra, rb in zip(p_n, p_P)]
        return LinearCanonicalMap(
            rows, self.old_coords + self.old_momenta, self.new_coords + self.new_momenta, params
        )

    def to_json(self) -> dict:
        return {
            "convention": "p = dF/d(old), P = -dF/d(new)",
            "F": str(self.poly),
            "mixed_hessian": [[format_coeff(c) for c in r] for r in self.mixed_hessian()],
        }


# ---------------------------------------------------------------------------
# unequal frequencies


def diagonalizing_map(p: PUParams) -> LinearCanonicalMap:
    """The linear map turning the PU Hamiltonian into two decoupled oscillators."""
    p.require_ordered("gamma = sqrt(omega1^2 - omega2^2)")
    w1, w2 = p.omega1, p.omega2
    g = p.gamma
    gi = 1 / g if not hasattr(g, "inverse") else g.inverse()
    z = mpq(0)
    rows = [
        # X1            X2              P1               P2
        [z,             gi,             -gi / w1,        z],          # q
        [w1 * gi,       z,              z,               -gi],        # x
        [-w1 * w2 ** 2 * gi, z,         z,               w1 ** 2 * gi],  # p_q
        [z,             -w2 ** 2 * gi,  w1 * gi,         z],          # p_x
    ]
    return LinearCanonicalMap(rows, PU_ORDER, OSC_ORDER, p)


def generating_function(p: PUParams, variant: str = "corrected") -> GeneratingFunction:
    """Type-1 generator of :func:`diagonalizing_map`.

    ``variant="printed"`` swaps ``X1`` and ``X2`` in the two bilinear
    ``gamma`` terms; that generator induces a different map which does not
    diagonalize the Hamiltonian into the ``(X1, P1)``/``(X2, P2)`` labelling.
    """
    p.require_ordered("gamma = sqrt(omega1^2 - omega2^2)")
    q, x, X1, X2 = symbols("q x X1 X2")
    w1, g = p.omega1, p.gamma
    if variant == "corrected":
        f = (q * X1).scale(w1 * g) + (x * X2).scale(g)
    elif variant == "printed":
        f = (q * X2).scale(w1 * g) + (x * X1).scale(g)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    f = f - (q * x).scale(w1 ** 2) - (X1 * X2).scale(w1)
    return GeneratingFunction(f)


def oscillator_hamiltonian(p: PUParams) -> Poly:
    """``(P1^2 + W1^2 X1^2)/2 - (P2^2 + W2^2 X2^2)/2``."""
    X1, P1, X2, P2 = symbols("X1 P1 X2 P2")
    h1 = (P1 * P1 + X1 * X1 * p.omega1 ** 2) * mpq(1, 2)
    h2 = (P2 * P2 + X2 * X2 * p.omega2 ** 2) * mpq(1, 2)
    return h1 - h2


# ---------------------------------------------------------------------------
# equal frequencies


def equal_freq_hamiltonian(omega, sign: int = -1) -> Poly:
    """``W (Q1 P2 - Q2 P1) + sign (W^2/4)(Q1^2 + Q2^2)``; ``sign=-1`` is the target form."""
    w = as_coeff(omega)
    Q1, Q2, P1, P2 = symbols("Q1 Q2 P1 P2")
    return (Q1 * P2 - Q2 * P1).scale(w) + (Q1 * Q1 + Q2 * Q2).scale(sign * w * w / 4)


def _eqf_generator(omega, variant: str) -> Poly:
    w = as_coeff(omega)
    q, x, Q1, Q2 = symbols("q x Q1 Q2")
    if variant == "complex":
        # lands exactly on the target form; needs complex coefficients
        return (q * Q2).scale(-I * w * w) - (q * x).scale(w * w) - (x * Q1).scale(I * w) + (Q1 * Q2).scale(w / 4)
    if variant == "real-plus":
        # real generator for the opposite sign of the |Q|^2 term
        return (q * Q2).scale(w * w) - (q * x).scale(w * w) + (x * Q1).scale(w) - (Q1 * Q2).scale(w / 4)
    if variant == "printed":
        r = sqrt_exact(mpq(1, 2))
        return (q * Q2).scale(r) - (q * x).scale(w / 4) + (x * Q1).scale(w * r) - (Q1 * Q2).scale(mpq(1, 2))
    raise ValueError(f"unknown variant {variant!r}")


def equal_freq_map(omega, hbar=1, variant: str = "complex"):
    """Generator and induced map for the equal-frequency Hamiltonian.

    No real linear canonical map sends the PU Hamiltonian to
    :func:`equal_freq_hamiltonian` with ``sign=-1`` (see
    :func:`real_symplectic_invariant`), so the default ``"complex"`` variant is
    a complex symplectic map, exact over the Gaussian rationals.  ``"real-plus"``
    is a real map onto the ``sign=+1`` form; ``"printed"`` is the generator as
    usually quoted, kept for comparison.
    """
    w = as_coeff(omega)
    if w <= 0:
        raise ValueError("omega must be positive")
    gf = GeneratingFunction(_eqf_generator(w, variant), ("q", "x"), ("Q1", "Q2"), ("p_q", "p_x"), ("P1", "P2"))
    return gf, gf.to_map(PUParams(w, w, hbar))


def equal_freq_spectrum(omega, hbar, m: int, k: float) -> float:
    """``E_mk = W hbar (m - W hbar k^2 / 4)``."""
    w, h = float(as_coeff(omega)), float(as_coeff(hbar))
    return w * h * (m - w * h * k * k / 4)


# ---------------------------------------------------------------------------
# real-symplectic invariant


def quadratic_matrix(h: Poly, order: tuple):
    """Symmetric ``A`` with ``h = z^T A z / 2`` over ``order``."""
    return [[h.diff(a).diff(b).constant_term() for b in order] for a in order]


def real_symplectic_invariant(h: Poly, order: tuple, omega) -> tuple:
    """Inertia of ``A (K^2 + W^2)`` with ``K = J A`` for ``h = z^T A z / 2``.

    Under ``z = S w`` with real symplectic ``S`` this symmetric matrix changes
    by congruence, so its inertia is invariant; differing inertias prove that
    no real linear canonical map relates two quadratic Hamiltonians.
    """
    A = quadratic_matrix(h, order)
    J = el.symplectic_form(len(order) // 2)
    K = el.matmul(J, A)
    w2 = as_coeff(omega) ** 2
    N = el.matmul(K, K)
    N = [[v + (w2 if i == j else 0) for j, v in enumerate(r)] for i, r in enumerate(N)]
    return el.inertia(el.matmul(A, N))


SIGNATURES = {PU_ORDER: PU_SIGNATURE, OSC_ORDER: OSC_SIGNATURE, EQF_ORDER: EQF_SIGNATURE}
