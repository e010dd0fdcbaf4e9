"""Maps out of the quadratic algebras, checked by substituting matrices.

An assignment sends each generator ``z[i][j]`` to an operator (all of the
same dimension and arity); a relation holds when its words, read as operator
products left to right, sum to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .qalg import QuadraticPresentation, frt_presentation
from .results import Verdict
from .rmatrix import RMatrixSpec, q_matrix, word_image
from .tensor import TensorOperator, contract_leg, kron


@dataclass(frozen=True)
class MatrixValuedAssignment:
    n: int
    images: tuple[TensorOperator, ...]

    def __post_init__(self):
        if len(self.images) != self.n * self.n:
            raise ValueError(f"need {self.n * self.n} images, got {len(self.images)}")
        shapes = {(m.dim, m.arity) for m in self.images}
        if len(shapes) != 1:
            raise ValueError("assignment images must share one shape")

    @property
    def shape(self) -> tuple[int, int]:
        m = self.images[0]
        return m.dim, m.arity

    def __getitem__(self, ij: tuple[int, int]) -> TensorOperator:
        i, j = ij
        return self.images[i * self.n + j]

    @classmethod
    def from_function(cls, n: int, f) -> "MatrixValuedAssignment":
        return cls(n, tuple(f(i, j) for i in range(n) for j in range(n)))


def substitute_and_check(P: QuadraticPresentation, A: MatrixValuedAssignment) -> Verdict:
    """Evaluate every relation of ``P`` on ``A``; residuals are listed per relation."""
    if P.n != A.n:
        raise ValueError(f"presentation has n={P.n}, assignment n={A.n}")
    dim, arity = A.shape
    residuals = []
    for r in P.relations:
        total = TensorOperator.zero(dim, arity)
        for w, c in r.terms.items():
            prod = A.images[w[0]]
            for g in w[1:]:
                prod = prod @ A.images[g]
            total = total + prod.scale(c)
        residuals.append(total)
    bad = [k for k, res in enumerate(residuals) if not res.is_zero()]
    if bad:
        return Verdict(False, f"{len(bad)} of {len(residuals)} relations fail, first #{bad[0]}", residuals)
    return Verdict(True, f"{len(residuals)} relations hold", residuals)


def counit_assignment(n: int, dim: int | None = None, arity: int = 1) -> MatrixValuedAssignment:
    """``z[i][j] -> delta_ij`` times the identity."""
    dim = n if dim is None else dim
    ident = TensorOperator.identity(dim, arity)
    zero = TensorOperator.zero(dim, arity)
    return MatrixValuedAssignment.from_function(n, lambda i, j: ident if i == j else zero)


def qmap_assignment(spec: RMatrixSpec) -> MatrixValuedAssignment:
    """``z[i][j] -> M`` with ``M[a][b] = Q[(i, a), (j, b)]`` and ``Q = R21 R``."""
    Q = q_matrix(spec)
    n = spec.dim

    def image(i: int, j: int) -> TensorOperator:
        return contract_leg(Q, 1, i, j)

    return MatrixValuedAssignment.from_function(n, image)


def coproduct_leg_operators(spec: RMatrixSpec) -> list[TensorOperator]:
    """``(rho (x) rho) Delta(x)`` for ``x`` running over both R-matrix legs."""
    n = spec.dim
    first = word_image(spec, ((1, 3, False), (2, 3, False)), 3)
    second = word_image(spec, ((3, 2, False), (3, 1, False)), 3)
    return [contract_leg(full, 3, k, l) for full in (first, second) for k in range(n) for l in range(n)]


def qmap_equivariance_check(spec: RMatrixSpec) -> Verdict:
    """``Q`` commutes with every ``(rho (x) rho) Delta(x)``."""
    Q = q_matrix(spec)
    ops = coproduct_leg_operators(spec)
    for k, D in enumerate(ops):
        comm = Q @ D - D @ Q
        if not comm.is_zero():
            return Verdict(False, f"Q fails to commute with coproduct operator #{k}", comm)
    return Verdict(True, f"Q commutes with {len(ops)} coproduct operators")


def double_assignment(spec: RMatrixSpec) -> MatrixValuedAssignment:
    """``z[i][j] -> sum_k R<i,k> (x) R21^-1<k,j>``.

    ``M<i,k>`` is the block of ``M`` obtained by pairing its first leg with
    the matrix unit ``(i, k)``.
    """
    n = spec.dim
    A = {(i, k): contract_leg(spec.R, 1, i, k) for i in range(n) for k in range(n)}
    B = {(k, j): contract_leg(spec.R21inv, 1, k, j) for k in range(n) for j in range(n)}

    def image(i: int, j: int) -> TensorOperator:
        total = TensorOperator.zero(n, 2)
        for k in range(n):
            total = total + kron(A[i, k], B[k, j])
        return total

    return MatrixValuedAssignment.from_function(n, image)


def double_shadow_check(spec: RMatrixSpec) -> Verdict:
    """The double images satisfy the FRT relations inside ``End(V) (x) End(V)``."""
    v = substitute_and_check(frt_presentation(spec), double_assignment(spec))
    return Verdict(v.passed, v.detail, v.residual)
