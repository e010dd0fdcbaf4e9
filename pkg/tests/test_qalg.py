from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import dense, frt_rows, presentation_rows, rank, re_rows, same_row_space
from retwist.corpus import corpus, diagonal_r, identity_r, jordanian_r
from retwist.qalg import (
    GeneratorSpace,
    InhomogeneousError,
    NcPolynomial,
    QuadraticPresentation,
    ResourceGuardError,
    commutative_dimension,
    commutative_presentation,
    frt_presentation,
    frt_raw_relations,
    graded_dimension,
    hilbert_prefix,
    maps_into,
    presentation_from_relations,
    re_presentation,
    re_presentation_s_form,
    re_raw_relations,
    relation_basis,
    table_size,
)
from retwist.rmatrix import make_spec, specialize, standard_r
from retwist.scalars import RationalQ, q, qinv
from retwist.tensor import TensorOperator, kron

AT = sp.Rational(7, 3)
a, b, c, d = (NcPolynomial.generator(g) for g in range(4))


def W(*gs):
    return NcPolynomial.word(*gs)


@pytest.mark.parametrize("n", [2, 3])
def test_frt_matches_oracle_row_space(n):
    spec = standard_r(n)
    P = frt_presentation(spec)
    at = None if n == 2 else AT
    assert len(P) == rank(frt_rows(dense(spec.R), n), at) == {2: 6, 3: 36}[n]
    assert same_row_space(presentation_rows(P), frt_rows(dense(spec.R), n), at)


@pytest.mark.parametrize("n", [2, 3])
def test_re_matches_oracle_row_space(n):
    spec = standard_r(n)
    P = re_presentation(spec)
    at = None if n == 2 else AT
    assert len(P) == rank(re_rows(dense(spec.R), n), at) == {2: 6, 3: 36}[n]
    assert same_row_space(presentation_rows(P), re_rows(dense(spec.R), n), at)


@pytest.mark.parametrize("spec", corpus(), ids=lambda s: s.provenance)
def test_corpus_presentations_match_oracle(spec):
    n = spec.dim
    at = None if n == 2 else AT
    R = dense(spec.R)
    assert same_row_space(presentation_rows(frt_presentation(spec)), frt_rows(R, n), at)
    assert same_row_space(presentation_rows(re_presentation(spec)), re_rows(R, n), at)


def test_sl2_frt_relations_explicit():
    P = frt_presentation(standard_r(2))
    assert P.contains(W(0, 1) - W(1, 0).scale(q))
    assert P.contains(W(0, 2) - W(2, 0).scale(q))
    assert P.contains(W(1, 2) - W(2, 1))
    assert P.contains(W(1, 3) - W(3, 1).scale(q))
    assert P.contains(W(2, 3) - W(3, 2).scale(q))
    assert P.contains(W(0, 3) - W(3, 0) - W(2, 1).scale(q - qinv))
    assert not P.contains(W(0, 1) - W(1, 0))
    assert P.render()[0] == "a·b - q b·a = 0"


def test_sl2_re_relations_explicit():
    P = re_presentation(standard_r(2))
    assert P.contains(W(0, 3) - W(3, 0))
    assert P.contains(W(1, 3) - W(3, 1).scale(q**-2))
    assert P.contains(W(2, 3) - W(3, 2).scale(q**2))
    assert not P.contains(W(1, 2) - W(2, 1))


def test_relation_space_is_canonical():
    P = frt_presentation(standard_r(2))
    for r in P.relations:
        lead = r.leading_word()
        assert r.terms[lead] == RationalQ(1)
        assert all(lead not in other.terms for other in P.relations if other is not r)
    assert [r.leading_word() for r in P.relations] == sorted(r.leading_word() for r in P.relations)


@settings(max_examples=25)
@given(st.randoms(use_true_random=False))
def test_presentation_independent_of_generating_set(rnd):
    raw = frt_raw_relations(standard_r(2))
    shuffled = list(raw)
    rnd.shuffle(shuffled)
    mixed = []
    for p in shuffled:
        other = rnd.choice(raw)
        mixed.append(p + other.scale(rnd.choice([1, -2, q, qinv])))
    mixed += shuffled
    base = presentation_from_relations(GeneratorSpace(2), raw)
    assert presentation_from_relations(GeneratorSpace(2), mixed) == base
    assert hash(presentation_from_relations(GeneratorSpace(2), mixed)) == hash(base)


def test_relation_basis_rejects_inhomogeneous():
    with pytest.raises(InhomogeneousError):
        relation_basis([W(0, 1) - W(0)])
    with pytest.raises(InhomogeneousError):
        relation_basis([W(0, 1, 2)])
    assert relation_basis([W(0, 1) - W(0, 1)]) == ()


def test_polynomial_arithmetic():
    p = a * b - (b * a).scale(q)
    assert p.degrees() == {2} and p.is_homogeneous(2)
    assert p.leading_word() == (0, 1)
    assert (p - p).is_zero()
    assert (a + b) * (a + b) == W(0, 0) + W(0, 1) + W(1, 0) + W(1, 1)
    assert not (a + W(0, 1)).is_homogeneous()


@pytest.mark.parametrize("n", [2, 3])
def test_q_one_specialisation_is_commutative(n):
    spec = standard_r(n)
    R1 = specialize(spec.R, 1)
    s1 = make_spec(R1)
    assert frt_presentation(s1) == commutative_presentation(n)
    assert re_presentation(s1) == commutative_presentation(n)


def test_identity_matrix_gives_commutative_frt():
    assert frt_presentation(identity_r(2)) == commutative_presentation(2)


@pytest.mark.parametrize("spec", [standard_r(2), standard_r(3), jordanian_r(), diagonal_r()], ids=lambda s: s.provenance)
def test_s_form_agrees(spec):
    assert re_presentation_s_form(spec) == re_presentation(spec)


@pytest.mark.parametrize("n,dims", [(2, [1, 4, 10, 20, 35]), (3, [1, 9, 45])])
def test_hilbert_prefix_matches_polynomial_ring(n, dims):
    spec = standard_r(n)
    assert hilbert_prefix(frt_presentation(spec), len(dims) - 1) == dims
    assert hilbert_prefix(re_presentation(spec), len(dims) - 1) == dims
    assert dims == [commutative_dimension(n, k) for k in range(len(dims))]


def test_graded_dimension_of_free_and_diagonal():
    free = QuadraticPresentation(GeneratorSpace(2), (), "free")
    assert [graded_dimension(free, k) for k in range(4)] == [1, 4, 16, 64]
    spec = diagonal_r()
    for P, rows in ((frt_presentation(spec), frt_rows), (re_presentation(spec), re_rows)):
        assert graded_dimension(P, 2) == 16 - rank(rows(dense(spec.R), 2))
    assert hilbert_prefix(frt_presentation(spec), 3) == [1, 4, 4, 4]
    assert hilbert_prefix(re_presentation(spec), 3) == [1, 4, 4, 4]
    with pytest.raises(ValueError):
        graded_dimension(free, -1)


def test_resource_guard():
    P = frt_presentation(standard_r(3))
    assert table_size(P, 4) > 10**7
    with pytest.raises(ResourceGuardError):
        graded_dimension(P, 4)
    with pytest.raises(ResourceGuardError):
        hilbert_prefix(P, 9)
    assert graded_dimension(P, 3, bound=table_size(P, 3)) == 165


def test_maps_into():
    P = frt_presentation(standard_r(2))
    assert maps_into(TensorOperator.identity(2, 4), P)
    swap_rows = TensorOperator.from_matrix(2, 1, [[0, 1], [1, 0]])
    flip_all = kron(kron(swap_rows, swap_rows), kron(swap_rows, swap_rows))
    # a <-> d, b <-> c maps ab = q ba to dc = q cd, which is not a relation.
    assert not maps_into(flip_all, P)


def test_export_is_one_based():
    P = frt_presentation(standard_r(2))
    first = P.export()[0]
    assert first[0]["word"] == [[1, 1], [1, 2]]
    assert first[1]["word"] == [[1, 2], [1, 1]]
    assert first[1]["coeff"] == [{"exp": 1, "num": -1, "den": 1}]


def test_generator_labels():
    assert [GeneratorSpace(2).label(g) for g in range(4)] == ["a", "b", "c", "d"]
    assert GeneratorSpace(3).label(5) == "z23"
    assert GeneratorSpace(3).pair(5) == (1, 2)


def test_raw_relation_counts():
    spec = standard_r(2)
    assert len(frt_raw_relations(spec)) <= 16
    assert len(re_raw_relations(spec)) <= 16
