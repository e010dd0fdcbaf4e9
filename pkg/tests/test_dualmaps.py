from __future__ import annotations

import itertools

import pytest
import sympy as sp

from oracle import dense, flat, mat_equal
from retwist.corpus import corpus, jordanian_r
from retwist.dualmaps import (
    MatrixValuedAssignment,
    coproduct_leg_operators,
    counit_assignment,
    double_assignment,
    double_shadow_check,
    qmap_assignment,
    qmap_equivariance_check,
    substitute_and_check,
)
from retwist.qalg import commutative_presentation, frt_presentation, re_presentation
from retwist.rmatrix import make_spec, q_matrix, specialize, standard_r, unchecked_spec
from retwist.scalars import q
from retwist.tensor import TensorOperator


def test_assignment_validation():
    ident = TensorOperator.identity(2, 1)
    with pytest.raises(ValueError):
        MatrixValuedAssignment(2, (ident,) * 3)
    with pytest.raises(ValueError):
        MatrixValuedAssignment(2, (ident, ident, ident, TensorOperator.identity(2, 2)))
    A = counit_assignment(2)
    assert A.shape == (2, 1)
    assert A[0, 0].is_identity() and A[0, 1].is_zero()
    with pytest.raises(ValueError):
        substitute_and_check(frt_presentation(standard_r(3)), A)


def test_commuting_scalars_satisfy_commutative_relations():
    A = MatrixValuedAssignment.from_function(2, lambda i, j: TensorOperator.identity(1, 1).scale(i + 2 * j + 1))
    assert substitute_and_check(commutative_presentation(2), A).passed
    assert not substitute_and_check(frt_presentation(standard_r(2)), A).passed


@pytest.mark.parametrize("spec", corpus(), ids=lambda s: s.provenance)
def test_counit_satisfies_both_relation_sets(spec):
    for P in (frt_presentation(spec), re_presentation(spec)):
        v = substitute_and_check(P, counit_assignment(spec.dim))
        assert v.passed
        assert len(v.residual) == len(P.relations)


@pytest.mark.parametrize("spec", corpus(), ids=lambda s: s.provenance)
def test_qmap_is_a_representation_of_re(spec):
    assert substitute_and_check(re_presentation(spec), qmap_assignment(spec)).passed


def test_qmap_images_against_oracle():
    spec = standard_r(2)
    Q = dense(q_matrix(spec))
    A = qmap_assignment(spec)
    for i, j in itertools.product(range(2), repeat=2):
        block = sp.Matrix(2, 2, lambda a, b: Q[flat((i, a), 2), flat((j, b), 2)])
        assert mat_equal(dense(A[i, j]), block)


@pytest.mark.parametrize("spec", corpus(), ids=lambda s: s.provenance)
def test_qmap_equivariance(spec):
    v = qmap_equivariance_check(spec)
    assert v.passed
    assert len(coproduct_leg_operators(spec)) == 2 * spec.dim**2


def test_qmap_at_classical_point_is_counit():
    spec = make_spec(specialize(standard_r(2).R, 1))
    A, E = qmap_assignment(spec), counit_assignment(2)
    assert A.images == E.images


def test_jordanian_qmap_is_counit():
    assert qmap_assignment(jordanian_r()).images == counit_assignment(2).images


def test_random_assignment_fails():
    rows = [[1, q], [2, 0]]
    M = TensorOperator.from_matrix(2, 1, rows)
    A = MatrixValuedAssignment.from_function(2, lambda i, j: M if (i + j) % 2 else TensorOperator.identity(2, 1))
    assert not substitute_and_check(re_presentation(standard_r(2)), A).passed


def _perturbed():
    return unchecked_spec(standard_r(2).R + TensorOperator(2, 2, {((0, 0), (0, 1)): 1}))


def test_perturbation_breaks_every_map():
    bad = _perturbed()
    assert not qmap_equivariance_check(bad).passed
    assert not double_shadow_check(bad).passed
    assert not substitute_and_check(re_presentation(bad), qmap_assignment(bad)).passed


@pytest.mark.parametrize("spec", corpus(), ids=lambda s: s.provenance)
def test_double_shadow(spec):
    v = double_shadow_check(spec)
    assert v.passed, v.detail
    assert double_assignment(spec).shape == (spec.dim, 2)


def test_double_images_against_oracle():
    spec = standard_r(2)
    R, R21inv = dense(spec.R), dense(spec.R21inv)
    A = double_assignment(spec)
    n = 2
    for i, j in itertools.product(range(n), repeat=2):
        ref = sp.zeros(4, 4)
        for k in range(n):
            left = sp.Matrix(n, n, lambda a, b: R[flat((i, a), n), flat((k, b), n)])
            right = sp.Matrix(n, n, lambda a, b: R21inv[flat((k, a), n), flat((j, b), n)])
            ref += sp.kronecker_product(left, right)
        assert mat_equal(dense(A[i, j]), ref)
