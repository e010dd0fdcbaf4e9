"""Small collection of Yang-Baxter solutions used for probing the checks."""

from __future__ import annotations

from .rmatrix import RMatrixSpec, braid_transpose, make_spec, standard_r
from .scalars import q
from .tensor import TensorOperator


def jordanian_r() -> RMatrixSpec:
    """Triangular (non-standard) solution with ``eta = q - 1``; ``R21 R = 1``."""
    eta = q - 1
    rows = [
        [1, -eta, eta, eta * eta],
        [0, 1, 0, -eta],
        [0, 0, 1, eta],
        [0, 0, 0, 1],
    ]
    return make_spec(TensorOperator.from_matrix(2, 2, rows), "jordanian")


def diagonal_r() -> RMatrixSpec:
    """``diag(q, 1, 1, q^2)``: solves YBE but has no quadratic braid relation."""
    rows = [[q, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, q * q]]
    return make_spec(TensorOperator.from_matrix(2, 2, rows), "diagonal")


def identity_r(n: int) -> RMatrixSpec:
    return make_spec(TensorOperator.identity(n, 2), f"identity n={n}")


def transposed_standard_r(n: int) -> RMatrixSpec:
    """The opposite convention: spreading term above the diagonal."""
    return make_spec(braid_transpose(standard_r(n).R), f"standard sl{n}, braid-transposed")


def corpus() -> list[RMatrixSpec]:
    return [
        standard_r(2),
        standard_r(3),
        transposed_standard_r(2),
        jordanian_r(),
        diagonal_r(),
        identity_r(2),
    ]
