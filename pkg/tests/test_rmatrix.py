from __future__ import annotations

import itertools

import pytest
import sympy as sp

from oracle import dense, embed, flip, is_zero, mat_equal, q as sq, standard_r as oracle_r
from retwist.corpus import corpus, diagonal_r, identity_r, jordanian_r, transposed_standard_r
from retwist.rmatrix import (
    YBEError,
    braid_operator,
    braid_transpose,
    check_hecke,
    check_ybe,
    leg_image,
    make_spec,
    op_tensor_square_r,
    q_matrix,
    specialize,
    standard_r,
    twisted_square_r,
    unchecked_spec,
    word_image,
)
from retwist.scalars import RationalQ, q, qinv
from retwist.tensor import TensorOperator, embed_legs, partial_transpose


@pytest.mark.parametrize("n", [2, 3, 4])
def test_standard_matches_index_formula(n):
    assert mat_equal(dense(standard_r(n).R), oracle_r(n))


@pytest.mark.parametrize("n,nnz", [(2, 5), (3, 12), (4, 22)])
def test_standard_sparsity(n, nnz):
    assert standard_r(n).R.nnz() == nnz


def test_sl2_entries_explicit():
    R = standard_r(2).R
    assert R[(0, 0), (0, 0)] == RationalQ(q)
    assert R[(1, 1), (1, 1)] == RationalQ(q)
    assert R[(0, 1), (0, 1)] == R[(1, 0), (1, 0)] == RationalQ(1)
    assert R[(1, 0), (0, 1)] == RationalQ(q - qinv)
    assert R[(0, 1), (1, 0)].is_zero()


def test_standard_rejects_small_n():
    with pytest.raises(ValueError):
        standard_r(1)


@pytest.mark.parametrize("n", [2, 3])
def test_classical_point_is_identity(n):
    assert specialize(standard_r(n).R, 1).is_identity()


def _dense_ybe_residual(R: sp.Matrix, n: int) -> sp.Matrix:
    R12, R13, R23 = (embed(R, legs, 3, n) for legs in ([0, 1], [0, 2], [1, 2]))
    return (R12 * R13 * R23 - R23 * R13 * R12).applyfunc(sp.expand)


@pytest.mark.parametrize("n", [2, 3])
def test_ybe_agrees_with_dense_oracle(n):
    assert _dense_ybe_residual(oracle_r(n), n).is_zero_matrix
    assert check_ybe(standard_r(n).R).passed


@pytest.mark.parametrize("spec", corpus(), ids=lambda s: s.provenance)
def test_corpus_satisfies_ybe(spec):
    assert check_ybe(spec.R).passed
    assert _dense_ybe_residual(dense(spec.R), spec.dim).is_zero_matrix


def test_perturbed_matrix_fails_ybe():
    bump = TensorOperator(2, 2, {((0, 0), (0, 1)): 1})
    R = standard_r(2).R + bump
    v = check_ybe(R)
    assert not v.passed
    assert not _dense_ybe_residual(dense(R), 2).is_zero_matrix
    assert "row (" in v.detail
    with pytest.raises(YBEError):
        make_spec(R)
    assert unchecked_spec(R).R == R


def test_make_spec_requires_arity_two():
    with pytest.raises(ValueError):
        make_spec(TensorOperator.identity(2, 3))


@pytest.mark.parametrize("spec", corpus(), ids=lambda s: s.provenance)
def test_inverse_is_two_sided(spec):
    ident = TensorOperator.identity(spec.dim, 2)
    assert spec.R @ spec.Rinv == ident and spec.Rinv @ spec.R == ident
    assert mat_equal(dense(spec.Rinv), dense(spec.R).inv())


@pytest.mark.parametrize("n", [2, 3])
def test_standard_hecke_pair(n):
    a, b = check_hecke(standard_r(n).R)
    assert a == RationalQ(q) and b == RationalQ(-qinv)
    Rc = flip(n) * oracle_r(n)
    ident = sp.eye(n * n)
    assert all(is_zero(e) for e in (Rc - sq * ident) * (Rc + ident / sq))


def test_hecke_on_other_corpus_members():
    assert check_hecke(identity_r(2).R) == (RationalQ(1), RationalQ(-1))
    assert check_hecke(jordanian_r().R) == (RationalQ(1), RationalQ(-1))
    assert check_hecke(diagonal_r().R) is None
    assert check_hecke(TensorOperator.identity(2, 2).scale(q) @ braid_operator(TensorOperator.identity(2, 2))) == (
        RationalQ(q),
        RationalQ(q),
    )


@pytest.mark.parametrize("spec", corpus(), ids=lambda s: s.provenance)
def test_braid_transpose_is_involution_preserving_ybe(spec):
    R21 = braid_transpose(spec.R)
    assert braid_transpose(R21) == spec.R
    assert check_ybe(R21).passed
    P = flip(spec.dim)
    assert mat_equal(dense(R21), P * dense(spec.R) * P)


def test_transposed_standard_moves_spreading_term():
    R = transposed_standard_r(2).R
    assert R[(0, 1), (1, 0)] == RationalQ(q - qinv)
    assert R[(1, 0), (0, 1)].is_zero()


@pytest.mark.parametrize("spec", corpus(), ids=lambda s: s.provenance)
def test_q_matrix_against_oracle(spec):
    P = flip(spec.dim)
    R = dense(spec.R)
    assert mat_equal(dense(q_matrix(spec)), P * R * P * R)


def test_q_matrix_special_cases():
    assert not q_matrix(standard_r(2)).is_identity()
    assert specialize(q_matrix(standard_r(3)), 1).is_identity()
    assert q_matrix(jordanian_r()).is_identity()
    assert q_matrix(identity_r(3)).is_identity()


@pytest.mark.parametrize("n", [2, 3])
def test_leg_images_closed_forms(n):
    spec = standard_r(n)
    R, Rinv = dense(spec.R), dense(spec.Rinv)
    assert mat_equal(dense(leg_image(spec, False, False, False)), R)
    assert mat_equal(dense(leg_image(spec, True, True, True)), Rinv.T)
    assert mat_equal(dense(leg_image(spec, True, False, False)), dense(partial_transpose(spec.Rinv, [1])))
    assert mat_equal(dense(leg_image(spec, False, True, True)), dense(partial_transpose(spec.R, [2])))
    for d1, d2 in itertools.product([False, True], repeat=2):
        fwd, back = leg_image(spec, d1, d2, False), leg_image(spec, d1, d2, True)
        assert (fwd @ back).is_identity()


@pytest.mark.parametrize("spec", [standard_r(2), jordanian_r(), diagonal_r()], ids=lambda s: s.provenance)
@pytest.mark.parametrize("duals", [frozenset(s) for s in ([], [1], [2], [3], [1, 2], [1, 3], [2, 3], [1, 2, 3])])
def test_leg_images_satisfy_mixed_ybe(spec, duals):
    # Any assignment of representations to three legs must still satisfy YBE.
    left = word_image(spec, ((1, 2, False), (1, 3, False), (2, 3, False)), 3, duals)
    right = word_image(spec, ((2, 3, False), (1, 3, False), (1, 2, False)), 3, duals)
    assert left == right


def test_word_image_order():
    spec = standard_r(2)
    R = spec.R
    assert word_image(spec, ((1, 2, False), (2, 3, False)), 3) == embed_legs(R, [1, 2], 3) @ embed_legs(R, [2, 3], 3)


@pytest.mark.parametrize("n", [2, 3])
def test_tensor_square_matrices_against_oracle(n):
    spec = standard_r(n)
    R, Rinv = dense(spec.R), dense(spec.Rinv)
    twisted = embed(Rinv, [3, 0], 4, n) * embed(Rinv, [2, 0], 4, n) * embed(R, [1, 3], 4, n) * embed(R, [1, 2], 4, n)
    assert mat_equal(dense(twisted_square_r(spec)), twisted)
    op = embed(Rinv, [0, 2], 4, n) * embed(R, [1, 3], 4, n)
    assert mat_equal(dense(op_tensor_square_r(spec)), op)


def test_tensor_square_matrices_solve_ybe_and_degenerate():
    spec = standard_r(2)
    for M in (twisted_square_r(spec), op_tensor_square_r(spec)):
        # Regroup V^(x)4 as W (x) W with W = V (x) V.
        W = TensorOperator.from_matrix(4, 2, [[M[_split(r), _split(c)] for c in range(16)] for r in range(16)])
        assert check_ybe(W).passed
        assert specialize(M, 1).is_identity()


def _split(k: int) -> tuple[int, int, int, int]:
    return (k >> 3 & 1, k >> 2 & 1, k >> 1 & 1, k & 1)
