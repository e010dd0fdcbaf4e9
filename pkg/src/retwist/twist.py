"""Hopf actions on the generator space, twist cocycles and quasi-commutativity.

The generator space ``V_g`` is ``V (x) V`` with legs ``(row, col)``: the
generator ``z[i][j]`` is the basis vector ``(i, j)``. Degree-2 elements live
in ``V_g (x) V_g``, i.e. ``V^(x)4`` with legs ``(r1, c1, r2, c2)``.

An action ``T -> pre·T·post`` transforms the row leg by ``pre^T`` and the
column leg by ``post``. Hopf elements acting through ``pre`` therefore reach
the row legs in the contragredient representation; this is what the
``dual_legs`` argument of :func:`retwist.rmatrix.word_image` encodes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Literal

from .qalg import (
    GeneratorSpace,
    QuadraticPresentation,
    apply_to_presentation,
    maps_into,
    operator_image_presentation,
)
from .results import Verdict
from .rmatrix import OP_SQUARE, TWISTED_SQUARE, RMatrixSpec, word_image
from .scalars import RONE
from .tensor import TensorOperator, contract_leg, embed_legs, kron

GENERATOR_DUAL_LEGS = frozenset({1, 3})


@dataclass(frozen=True)
class ActionOperator:
    """Linear operator on ``V_g``."""

    op: TensorOperator

    def __post_init__(self):
        if self.op.arity != 2:
            raise ValueError("an action operator acts on V (x) V")

    @property
    def n(self) -> int:
        return self.op.dim

    def __matmul__(self, other: "ActionOperator") -> "ActionOperator":
        return ActionOperator(self.op @ other.op)

    def __add__(self, other: "ActionOperator") -> "ActionOperator":
        return ActionOperator(self.op + other.op)

    def scale(self, s) -> "ActionOperator":
        return ActionOperator(self.op.scale(s))

    def on_pairs(self, other: "ActionOperator | None" = None) -> TensorOperator:
        """``self (x) other`` on ``V_g (x) V_g``."""
        return kron(self.op, (other or self).op)


def _as_matrix(m, n: int | None = None) -> TensorOperator:
    if isinstance(m, TensorOperator):
        if m.arity != 1:
            raise ValueError("expected an n x n matrix")
        return m
    rows = [list(r) for r in m]
    return TensorOperator.from_matrix(len(rows), 1, rows)


def sandwich_action_operator(pre, post) -> ActionOperator:
    """Operator ``z[i][j] -> (pre·T·post)[i][j]``, i.e. ``pre^T (x) post``.

    Composition law: ``sandwich(A, B) @ sandwich(C, D) == sandwich(C·A, B·D)``.
    """
    A, B = _as_matrix(pre), _as_matrix(post)
    if A.dim != B.dim:
        raise ValueError(f"dimension mismatch: {A.dim} vs {B.dim}")
    return ActionOperator(kron(A.transpose(), B))


@dataclass(frozen=True, eq=False)
class TwoLegCocycle:
    """Image of a twisting cocycle on ``V_g (x) V_g`` with its exact inverse."""

    phi: TensorOperator
    phi_inv: TensorOperator
    label: str = ""

    def __post_init__(self):
        ident = TensorOperator.identity(self.phi.dim, self.phi.arity)
        if self.phi @ self.phi_inv != ident or self.phi_inv @ self.phi != ident:
            raise ValueError(f"cocycle {self.label!r}: phi and phi_inv are not inverse")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwoLegCocycle):
            return NotImplemented
        return self.phi == other.phi

    __hash__ = object.__hash__


def identity_cocycle(n: int) -> TwoLegCocycle:
    ident = TensorOperator.identity(n, 4)
    return TwoLegCocycle(ident, ident, "identity")


def _cocycle(spec: RMatrixSpec, factors, label: str) -> TwoLegCocycle:
    phi = word_image(spec, factors, 4, GENERATOR_DUAL_LEGS)
    inv = tuple((a, b, not inv) for a, b, inv in reversed(factors))
    phi_inv = word_image(spec, inv, 4, GENERATOR_DUAL_LEGS)
    return TwoLegCocycle(phi, phi_inv, label)


def r13_cocycle(spec: RMatrixSpec) -> TwoLegCocycle:
    """``R_13`` acting on both row legs (contragredient on each)."""
    return _cocycle(spec, ((1, 3, False),), "R13")


def r23_cocycle(spec: RMatrixSpec) -> TwoLegCocycle:
    """``R_23`` acting on the first column leg and the second row leg."""
    return _cocycle(spec, ((2, 3, False),), "R23")


def compose_cocycles(first: TwoLegCocycle, second: TwoLegCocycle) -> TwoLegCocycle:
    """Cocycle whose twist equals twisting by ``first`` and then by ``second``."""
    label = f"{first.label}·{second.label}"
    return TwoLegCocycle(first.phi @ second.phi, second.phi_inv @ first.phi_inv, label)


def inverse_cocycle(c: TwoLegCocycle) -> TwoLegCocycle:
    return TwoLegCocycle(c.phi_inv, c.phi, f"({c.label})^-1")


def frt_to_re_cocycle(spec: RMatrixSpec) -> TwoLegCocycle:
    """``R_13 R_23`` on ``V_g (x) V_g``, built in one pass from both factors."""
    return _cocycle(spec, ((1, 3, False), (2, 3, False)), "R13·R23")


def twist_presentation(P: QuadraticPresentation, C: TwoLegCocycle) -> QuadraticPresentation:
    """Relations of the twisted product: ``phi_inv`` applied to those of ``P``."""
    if C.phi.dim != P.n:
        raise ValueError("cocycle and presentation dimensions differ")
    return apply_to_presentation(C.phi_inv, P, f"{P.name} twisted by {C.label}" if P.name else "")


def pair_flip(n: int) -> TensorOperator:
    """Swap the two ``V_g`` factors: ``(r1, c1, r2, c2) -> (r2, c2, r1, c1)``."""
    rows = {(a, b, c, d): {(c, d, a, b): RONE} for a, b, c, d in itertools.product(range(n), repeat=4)}
    return TensorOperator._from_rows(n, 4, rows)


def quasi_commutativity_relations(Rg: TensorOperator, name: str = "") -> QuadraticPresentation:
    """Relations ``a·b - (R_2 > b)(R_1 > a)``: the image of ``id - tau o Rg``."""
    if Rg.arity != 4:
        raise ValueError("expected an operator on V_g (x) V_g")
    n = Rg.dim
    op = TensorOperator.identity(n, 4) - pair_flip(n) @ Rg
    return operator_image_presentation(op, GeneratorSpace(n), name)


def op_square_generator_image(spec: RMatrixSpec) -> TensorOperator:
    """``R^-1_13 R_24`` acting on ``V_g (x) V_g`` (rows contragredient)."""
    return word_image(spec, OP_SQUARE, 4, GENERATOR_DUAL_LEGS)


def twisted_square_generator_image(spec: RMatrixSpec) -> TensorOperator:
    """``R^-1_41 R^-1_31 R_24 R_23`` acting on ``V_g (x) V_g`` (rows contragredient)."""
    return word_image(spec, TWISTED_SQUARE, 4, GENERATOR_DUAL_LEGS)


# -- invariance of relation spaces --------------------------------------------

def _leg_operators(spec: RMatrixSpec, factors, arity: int, free: int, dual_legs=frozenset()) -> list[TensorOperator]:
    """Pair the ``free`` leg of a factor word with every matrix-unit functional."""
    full = word_image(spec, factors, arity, dual_legs)
    n = spec.dim
    return [contract_leg(full, free, k, l) for k in range(n) for l in range(n)]


def regular_action_operators(spec: RMatrixSpec) -> list[TensorOperator]:
    """Degree-2 operators of ``T -> T·rho(x)`` and ``T -> rho(x)·T``.

    ``x`` ranges over both legs of the R-matrix; coproducts come from
    ``(Delta (x) id) R = R13 R23`` and ``(id (x) Delta) R = R13 R12``.
    """
    pairs = _leg_operators(spec, ((1, 3, False), (2, 3, False)), 3, 3)
    pairs += _leg_operators(spec, ((3, 2, False), (3, 1, False)), 3, 3)
    out = []
    for d in pairs:
        out.append(embed_legs(d, [2, 4], 4))
        out.append(embed_legs(d.transpose(), [1, 3], 4))
    return out


def adjoint_action_operators(spec: RMatrixSpec) -> list[TensorOperator]:
    """Degree-2 operators of ``L -> rho(gamma(x1))·L·rho(x2)``."""
    x_type = ((1, 5, False), (2, 5, False), (3, 5, False), (4, 5, False))
    y_type = ((5, 4, False), (5, 3, False), (5, 2, False), (5, 1, False))
    return _leg_operators(spec, x_type, 5, 5, GENERATOR_DUAL_LEGS) + _leg_operators(
        spec, y_type, 5, 5, GENERATOR_DUAL_LEGS
    )


def invariance_check(
    P: QuadraticPresentation, spec: RMatrixSpec, action: Literal["regular", "adjoint"]
) -> Verdict:
    """Whether every degree-2 action operator maps the relation space into itself."""
    if action == "regular":
        ops = regular_action_operators(spec)
    elif action == "adjoint":
        ops = adjoint_action_operators(spec)
    else:
        raise ValueError(f"unknown action {action!r}")
    for i, op in enumerate(ops):
        if not maps_into(op, P):
            return Verdict(False, f"{action} operator #{i} leaves the relation space", i)
    return Verdict(True, f"{len(ops)} {action} operators preserve the relation space")
