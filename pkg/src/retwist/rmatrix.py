"""R-matrix constructors and the identities they must satisfy.

Conventions
-----------
``R`` is an arity-2 :class:`~retwist.tensor.TensorOperator`; ``R[(i, k), (j, l)]``
is the coefficient of ``e_i (x) e_k`` in ``R(e_j (x) e_l)``.

The built-in ``U_q(sl_n)`` matrix is

    R = q sum_i E_ii (x) E_ii + sum_{i != j} E_ii (x) E_jj
        + (q - q^-1) sum_{i < j} E_ji (x) E_ij,

with ``E_ab`` the usual matrix unit (row ``a``, column ``b``). In the 4x4
picture the spreading term sits below the diagonal. ``braid_transpose`` gives
the other common convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .results import Verdict
from .scalars import RONE, RZERO, Laurent, RationalQ, laurent_sqrt, q, qinv
from .tensor import (
    SingularOperatorError,
    TensorOperator,
    embed_legs,
    invert_operator,
    partial_transpose,
    permutation_op,
)
from .linalg import EchelonBasis


class YBEError(ValueError):
    """Raised when a checked R-matrix fails the Yang-Baxter equation."""

    def __init__(self, message: str, residual: TensorOperator | None = None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True, eq=False)
class RMatrixSpec:
    dim: int
    R: TensorOperator
    Rinv: TensorOperator
    provenance: str
    hecke: tuple[RationalQ, RationalQ] | None = field(default=None)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RMatrixSpec):
            return NotImplemented
        return self.dim == other.dim and self.R == other.R

    __hash__ = object.__hash__

    @cached_property
    def R21(self) -> TensorOperator:
        return braid_transpose(self.R)

    @cached_property
    def R21inv(self) -> TensorOperator:
        return braid_transpose(self.Rinv)


def standard_entries(n: int) -> dict:
    entries = {}
    for i in range(n):
        for j in range(n):
            entries[((i, j), (i, j))] = q if i == j else RONE
    for i in range(n):
        for j in range(i + 1, n):
            entries[((j, i), (i, j))] = q - qinv
    return entries


def standard_r(n: int) -> RMatrixSpec:
    """The fundamental-representation R-matrix of ``U_q(sl_n)``."""
    if n < 2:
        raise ValueError("standard R-matrix needs n >= 2")
    R = TensorOperator(n, 2, standard_entries(n))
    return make_spec(R, provenance=f"standard sl{n}")


def make_spec(R: TensorOperator, provenance: str = "user", checked: bool = True) -> RMatrixSpec:
    """Wrap an operator as an R-matrix spec, computing its exact inverse.

    With ``checked`` the Yang-Baxter equation is enforced (``YBEError``);
    ``checked=False`` is for probing invalid inputs.
    """
    if R.arity != 2:
        raise ValueError("an R-matrix acts on V (x) V")
    if checked:
        ybe = check_ybe(R)
        if not ybe.passed:
            raise YBEError(f"R fails the Yang-Baxter equation: {ybe.detail}", ybe.residual)
    hecke = check_hecke(R)
    Rinv = invert_r(R, hecke)
    return RMatrixSpec(R.dim, R, Rinv, provenance, hecke)


def unchecked_spec(R: TensorOperator, provenance: str = "user (unchecked)") -> RMatrixSpec:
    return make_spec(R, provenance, checked=False)


def ybe_sides(R: TensorOperator) -> tuple[TensorOperator, TensorOperator]:
    R12 = embed_legs(R, [1, 2], 3)
    R13 = embed_legs(R, [1, 3], 3)
    R23 = embed_legs(R, [2, 3], 3)
    return R12 @ R13 @ R23, R23 @ R13 @ R12


def check_ybe(R: TensorOperator) -> Verdict:
    """``R12 R13 R23 = R23 R13 R12`` exactly on ``V^(x)3``."""
    if R.arity != 2:
        raise ValueError("YBE check needs an arity-2 operator")
    left, right = ybe_sides(R)
    residual = left - right
    if residual.is_zero():
        return Verdict(True, "residual 0", residual)
    r, c, v = next(residual.entries())
    r1 = tuple(x + 1 for x in r)
    c1 = tuple(x + 1 for x in c)
    return Verdict(False, f"{residual.nnz()} nonzero residual entries, first at row {r1}, col {c1}: {v}", residual)


def braid_transpose(R: TensorOperator) -> TensorOperator:
    """``R_21 = P R P``."""
    P = permutation_op(R.dim)
    return P @ R @ P


def braid_operator(R: TensorOperator) -> TensorOperator:
    """``Rcheck = P R``."""
    return permutation_op(R.dim) @ R


def check_hecke(R: TensorOperator) -> tuple[RationalQ, RationalQ] | None:
    """Eigenvalue pair ``(a, b)`` with ``(Rc - a)(Rc - b) = 0`` for ``Rc = P R``.

    The pair is recovered from the quadratic relation ``Rc^2 = s Rc - p`` and
    returned as ``((s + d)/2, (s - d)/2)`` with ``d`` the square root of the
    discriminant having positive top coefficient; for the standard matrix this
    is ``(q, -q^-1)``. Returns ``None`` when no quadratic relation exists or its
    roots are not in ``Q(q)``.
    """
    Rc = braid_operator(R)
    Rc2 = Rc @ Rc
    basis = list(itertools.product(range(R.dim), repeat=2))
    # Unknowns s, p with Rc2[r,c] - s*Rc[r,c] + p*delta(r,c) = 0.
    eqs = EchelonBasis(order_key=lambda k: k)
    for r in basis:
        for c in basis:
            a = Rc[r, c]
            d = RONE if r == c else RZERO
            rhs = Rc2[r, c]
            vec = {0: a, 1: -d, 2: rhs}
            if any(not v.is_zero() for v in vec.values()):
                eqs.add(vec)
    rows = eqs.rows
    if 2 in rows:
        return None  # inconsistent: 0 = nonzero
    if 0 in rows and 1 in rows:
        s, p = rows[0].get(2, RZERO), rows[1].get(2, RZERO)
    elif 0 in rows:
        # Only one independent equation: Rc is a scalar c times the identity.
        c = Rc[basis[0], basis[0]]
        if c.is_zero() or Rc != TensorOperator.identity(R.dim, 2).scale(c):
            return None
        return (c, c)
    else:
        return None
    disc = s * s - p * 4
    root = _sqrt_rational(disc)
    if root is None:
        return None
    half = RationalQ(Laurent.const(1), Laurent.const(2))
    a, b = (s + root) * half, (s - root) * half
    M1 = Rc - TensorOperator.identity(R.dim, 2).scale(a)
    M2 = Rc - TensorOperator.identity(R.dim, 2).scale(b)
    return (a, b) if (M1 @ M2).is_zero() else None


def _sqrt_rational(x: RationalQ) -> RationalQ | None:
    n = laurent_sqrt(x.num)
    d = laurent_sqrt(x.den)
    if n is None or d is None:
        return None
    return RationalQ(n, d)


def invert_r(R: TensorOperator, hecke: tuple[RationalQ, RationalQ] | None = None) -> TensorOperator:
    """Exact ``R^-1``, via the Hecke relation when one is known.

    ``(Rc - a)(Rc - b) = 0`` gives ``Rc^-1 = (a + b - Rc) / (a b)`` and
    ``R^-1 = Rc^-1 P``. Falls back to Gaussian elimination.
    """
    n = R.dim
    if hecke is not None:
        a, b = hecke
        ab = a * b
        if not ab.is_zero():
            P = permutation_op(n)
            Rc = P @ R
            Rc_inv = (TensorOperator.identity(n, 2).scale(a + b) - Rc).scale(ab.inverse())
            Rinv = Rc_inv @ P
            ident = TensorOperator.identity(n, 2)
            if R @ Rinv == ident and Rinv @ R == ident:
                return Rinv
    return invert_operator(R)


def q_matrix(spec: RMatrixSpec) -> TensorOperator:
    """``Q = R_21 R``."""
    return spec.R21 @ spec.R


# -- images of products of R-matrix factors ---------------------------------
#
# A factor is (first leg, second leg, inverse?) and stands for R_ab or R_ab^-1.
# Legs flagged as dual carry the contragredient representation
# x -> rho(antipode(x))^T. Using (S (x) S)(R) = R, (S (x) id)(R) = R^-1 and
# (id (x) S)(R^-1) = R, each factor image is an elementary function of R.

OP_SQUARE = ((1, 3, True), (2, 4, False))
TWISTED_SQUARE = ((4, 1, True), (3, 1, True), (2, 4, False), (2, 3, False))


def leg_image(spec: RMatrixSpec, dual_first: bool, dual_second: bool, inverse: bool) -> TensorOperator:
    """Image of ``R`` (or ``R^-1``) with each leg in ``rho`` or its dual."""
    cache = spec.__dict__.setdefault("_leg_images", {})
    key = (dual_first, dual_second, inverse)
    if key not in cache:
        cache[key] = _leg_image(spec, *key)
    return cache[key]


def _leg_image(spec: RMatrixSpec, d1: bool, d2: bool, inv: bool) -> TensorOperator:
    R, Rinv = spec.R, spec.Rinv
    if not d1 and not d2:
        return Rinv if inv else R
    if d1 and d2:
        return (Rinv if inv else R).transpose()
    if d1 and not d2:
        # (rho* (x) rho)(R) = ((S (x) id) R)^{t1} = (R^-1)^{t1}
        fwd = partial_transpose(Rinv, [1])
        return invert_operator(fwd) if inv else fwd
    # (rho (x) rho*)(R^-1) = ((id (x) S) R^-1)^{t2} = R^{t2}
    back = partial_transpose(R, [2])
    return back if inv else invert_operator(back)


def word_image(
    spec: RMatrixSpec,
    factors,
    arity: int,
    dual_legs: frozenset[int] = frozenset(),
) -> TensorOperator:
    """Image of an ordered product of R-matrix factors on ``V^(x)arity``.

    The leftmost factor is the leftmost operator in the composition.
    """
    result = TensorOperator.identity(spec.dim, arity)
    for a, b, inv in factors:
        img = leg_image(spec, a in dual_legs, b in dual_legs, inv)
        result = result @ embed_legs(img, [a, b], arity)
    return result


def op_tensor_square_r(spec: RMatrixSpec) -> TensorOperator:
    """``R^-1_13 R_24``: R-matrix of ``H^op (x) H`` on ``V^(x)4``."""
    return word_image(spec, OP_SQUARE, 4)


def twisted_square_r(spec: RMatrixSpec) -> TensorOperator:
    """``R^-1_41 R^-1_31 R_24 R_23``: R-matrix of the twisted tensor square."""
    return word_image(spec, TWISTED_SQUARE, 4)


def specialize(op: TensorOperator, value) -> TensorOperator:
    """Evaluate every entry at ``q = value``."""
    return op.map_entries(lambda v: RationalQ.coerce(v(value)))


__all__ = [
    "RMatrixSpec",
    "SingularOperatorError",
    "YBEError",
    "braid_operator",
    "braid_transpose",
    "check_hecke",
    "check_ybe",
    "invert_r",
    "leg_image",
    "make_spec",
    "op_tensor_square_r",
    "q_matrix",
    "specialize",
    "standard_r",
    "twisted_square_r",
    "unchecked_spec",
    "word_image",
]
