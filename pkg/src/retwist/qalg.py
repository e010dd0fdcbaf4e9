"""Quadratic algebras generated by the matrix entries ``z[i][j]``.

Generators are numbered row-major, ``g = i*n + j``; a word is a tuple of
generator numbers. Monomial order is degree-lexicographic in that numbering,
and every relation is oriented toward its *smallest* word: the smallest word
is the pivot of the reduced row-echelon basis and the left-hand side of the
corresponding rewrite rule. With this orientation both the FRT and the RE
relations of the standard R-matrix have no pole at ``q = 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Mapping

from .linalg import EchelonBasis, rank
from .rmatrix import RMatrixSpec, braid_operator
from .scalars import RONE, RationalQ, as_rational, encode_rational
from .tensor import TensorOperator

Word = tuple[int, ...]

DEFAULT_TABLE_BOUND = 10**7


class ResourceGuardError(RuntimeError):
    """A computation would exceed the configured table-size bound."""


class InhomogeneousError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpace:
    n: int

    @property
    def dim(self) -> int:
        return self.n * self.n

    def index(self, i: int, j: int) -> int:
        return i * self.n + j

    def pair(self, g: int) -> tuple[int, int]:
        return divmod(g, self.n)

    def label(self, g: int) -> str:
        if self.n == 2:
            return "abcd"[g]
        i, j = self.pair(g)
        return f"z{i + 1}{j + 1}"

    def words(self, d: int) -> Iterable[Word]:
        return itertools.product(range(self.dim), repeat=d)


class NcPolynomial:
    """Noncommutative polynomial: ``{word: RationalQ}`` with no zero terms."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Word, object] | None = None):
        clean = {}
        for w, c in (terms or {}).items():
            c = as_rational(c)
            if not c.is_zero():
                clean[tuple(w)] = c
        self.terms: dict[Word, RationalQ] = clean
        self._hash = None

    @classmethod
    def generator(cls, g: int) -> "NcPolynomial":
        return cls({(g,): RONE})

    @classmethod
    def word(cls, *gs: int) -> "NcPolynomial":
        return cls({tuple(gs): RONE})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def is_homogeneous(self, d: int | None = None) -> bool:
        ds = self.degrees()
        return len(ds) <= 1 and (d is None or not ds or ds == {d})

    def leading_word(self) -> Word:
        return min(self.terms)

    def __add__(self, other: "NcPolynomial") -> "NcPolynomial":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return NcPolynomial(out)

    def __neg__(self) -> "NcPolynomial":
        return NcPolynomial({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NcPolynomial") -> "NcPolynomial":
        return self + (-other)

    def scale(self, s) -> "NcPolynomial":
        s = as_rational(s)
        return NcPolynomial({w: c * s for w, c in self.terms.items()})

    def __mul__(self, other: "NcPolynomial") -> "NcPolynomial":
        out: dict[Word, RationalQ] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out[w] + c1 * c2 if w in out else c1 * c2
        return NcPolynomial(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, NcPolynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"NcPolynomial({render_polynomial(self, None)})"


def render_polynomial(p: NcPolynomial, gens: GeneratorSpace | None) -> str:
    if p.is_zero():
        return "0"

    def lab(g: int) -> str:
        return gens.label(g) if gens is not None else f"x{g}"

    parts = []
    for w in sorted(p.terms):
        c = p.terms[w]
        mono = "·".join(lab(g) for g in w) or "1"
        if c == RONE:
            parts.append(("+", mono))
        elif c == -RONE:
            parts.append(("-", mono))
        else:
            s = str(c)
            if c.is_laurent() and len(c.num.terms) == 1 and c.num.terms[0][1] < 0:
                parts.append(("-", f"{-c} {mono}"))
            else:
                parts.append(("+", f"({s}) {mono}" if len(c.num.terms) > 1 or not c.is_laurent() else f"{s} {mono}"))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True, eq=False)
class QuadraticPresentation:
    """Degree-2 relation space in reduced row-echelon form.

    ``relations`` is sorted by pivot (the smallest word of each relation,
    whose coefficient is 1), so two presentations are equal exactly when
    their relation spaces are.
    """

    gens: GeneratorSpace
    relations: tuple[NcPolynomial, ...]
    name: str = ""

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadraticPresentation):
            return NotImplemented
        return self.gens == other.gens and self.relations == other.relations

    def __hash__(self) -> int:
        return hash((self.gens, self.relations))

    @property
    def n(self) -> int:
        return self.gens.n

    def __len__(self) -> int:
        return len(self.relations)

    @cached_property
    def echelon(self) -> EchelonBasis:
        basis = EchelonBasis(order_key=_word_key)
        for r in self.relations:
            basis.rows[r.leading_word()] = dict(r.terms)
        return basis

    def contains(self, p: NcPolynomial) -> bool:
        return self.echelon.contains(p.terms)

    def render(self) -> list[str]:
        return [f"{render_polynomial(r, self.gens)} = 0" for r in self.relations]

    def export(self) -> list[list[dict]]:
        """Relations as ``[{word: [[i, j], [k, l]], coeff: <coefficient encoding>}]``, 1-based."""

        def gen(g: int) -> list[int]:
            i, j = self.gens.pair(g)
            return [i + 1, j + 1]

        return [
            [{"word": [gen(g) for g in w], "coeff": encode_rational(c)} for w, c in sorted(r.terms.items())]
            for r in self.relations
        ]


def _word_key(w: Word) -> Word:
    return w


def relation_basis(raw: Iterable[NcPolynomial], degree: int = 2) -> tuple[NcPolynomial, ...]:
    """Reduced row-echelon basis of the span of homogeneous elements."""
    basis = EchelonBasis(order_key=_word_key)
    for p in raw:
        if not p.is_homogeneous(degree):
            raise InhomogeneousError(f"relation is not homogeneous of degree {degree}: {p!r}")
        basis.add(p.terms)
    return tuple(NcPolynomial(v) for v in basis.basis())


def presentation_from_relations(
    gens: GeneratorSpace, raw: Iterable[NcPolynomial], name: str = ""
) -> QuadraticPresentation:
    return QuadraticPresentation(gens, relation_basis(raw, 2), name)


def presentations_equal(a: QuadraticPresentation, b: QuadraticPresentation) -> bool:
    return a == b


# -- bridging V_g (x) V_g and V^(x)4 -----------------------------------------
#
# A degree-2 element sum c_w z[i1][j1] z[i2][j2] is the vector of V^(x)4 with
# entry c_w at multi-index (i1, j1, i2, j2).

def poly_to_vector(p: NcPolynomial, gens: GeneratorSpace) -> dict[tuple[int, ...], RationalQ]:
    out = {}
    for w, c in p.terms.items():
        idx: tuple[int, ...] = ()
        for g in w:
            idx += gens.pair(g)
        out[idx] = c
    return out


def vector_to_poly(v: Mapping[tuple[int, ...], RationalQ], gens: GeneratorSpace) -> NcPolynomial:
    terms = {}
    for idx, c in v.items():
        terms[tuple(gens.index(idx[2 * t], idx[2 * t + 1]) for t in range(len(idx) // 2))] = c
    return NcPolynomial(terms)


def operator_image_presentation(
    op: TensorOperator, gens: GeneratorSpace, name: str = ""
) -> QuadraticPresentation:
    """Presentation whose relation space is the column space of ``op``."""
    cols: dict[tuple, dict] = {}
    for r, row in op.rows.items():
        for c, v in row.items():
            cols.setdefault(c, {})[r] = v
    return presentation_from_relations(gens, (vector_to_poly(v, gens) for v in cols.values()), name)


def apply_to_presentation(
    op: TensorOperator, P: QuadraticPresentation, name: str = ""
) -> QuadraticPresentation:
    """Presentation with relation space ``op(relations of P)``."""
    images = (vector_to_poly(op.apply(poly_to_vector(r, P.gens)), P.gens) for r in P.relations)
    return presentation_from_relations(P.gens, images, name or P.name)


def maps_into(op: TensorOperator, P: QuadraticPresentation) -> bool:
    """Whether ``op`` maps the relation space of ``P`` into itself."""
    return all(P.contains(vector_to_poly(op.apply(poly_to_vector(r, P.gens)), P.gens)) for r in P.relations)


# -- matrices with noncommutative entries -----------------------------------

class NcMatrix:
    """Operator on ``V (x) V`` with :class:`NcPolynomial`-valued entries."""

    def __init__(self, n: int, entries: dict):
        self.n = n
        self.entries = entries  # (row pair, col pair) -> {word: RationalQ}

    @classmethod
    def scalar(cls, op: TensorOperator) -> "NcMatrix":
        return cls(op.dim, {(r, c): {(): v} for r, c, v in op.entries()})

    @classmethod
    def leg(cls, gens: GeneratorSpace, which: int) -> "NcMatrix":
        """``L_1 = L (x) 1`` (``which=1``) or ``L_2 = 1 (x) L``."""
        n = gens.n
        out = {}
        for i, j, s in itertools.product(range(n), repeat=3):
            if which == 1:
                out[((i, s), (j, s))] = {(gens.index(i, j),): RONE}
            else:
                out[((s, i), (s, j))] = {(gens.index(i, j),): RONE}
        return cls(n, out)

    def __matmul__(self, other: "NcMatrix") -> "NcMatrix":
        by_row: dict = {}
        for (m, c), poly in other.entries.items():
            by_row.setdefault(m, []).append((c, poly))
        out: dict = {}
        for (r, m), p1 in self.entries.items():
            for c, p2 in by_row.get(m, ()):
                acc = out.setdefault((r, c), {})
                for w1, c1 in p1.items():
                    for w2, c2 in p2.items():
                        w = w1 + w2
                        acc[w] = acc[w] + c1 * c2 if w in acc else c1 * c2
        return NcMatrix(self.n, out)

    def _combine(self, other: "NcMatrix", sign: int) -> "NcMatrix":
        out = {k: dict(v) for k, v in self.entries.items()}
        for k, poly in other.entries.items():
            acc = out.setdefault(k, {})
            for w, c in poly.items():
                c = c if sign > 0 else -c
                acc[w] = acc[w] + c if w in acc else c
        return NcMatrix(self.n, out)

    def __add__(self, other: "NcMatrix") -> "NcMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "NcMatrix") -> "NcMatrix":
        return self._combine(other, -1)

    def polys(self) -> list[NcPolynomial]:
        return [NcPolynomial(v) for _, v in sorted(self.entries.items())]


def _chain(*mats: NcMatrix) -> NcMatrix:
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def frt_raw_relations(spec: RMatrixSpec) -> list[NcPolynomial]:
    """The ``n^4`` slot-wise entries of ``R T1 T2 - T2 T1 R``."""
    gens = GeneratorSpace(spec.dim)
    R = NcMatrix.scalar(spec.R)
    T1, T2 = NcMatrix.leg(gens, 1), NcMatrix.leg(gens, 2)
    return (_chain(R, T1, T2) - _chain(T2, T1, R)).polys()


def frt_presentation(spec: RMatrixSpec) -> QuadraticPresentation:
    gens = GeneratorSpace(spec.dim)
    return presentation_from_relations(gens, frt_raw_relations(spec), "FRT")


def re_raw_relations(spec: RMatrixSpec) -> list[NcPolynomial]:
    """The slot-wise entries of ``R21 L1 R L2 - L2 R21 L1 R``."""
    gens = GeneratorSpace(spec.dim)
    R = NcMatrix.scalar(spec.R)
    R21 = NcMatrix.scalar(spec.R21)
    L1, L2 = NcMatrix.leg(gens, 1), NcMatrix.leg(gens, 2)
    return (_chain(R21, L1, R, L2) - _chain(L2, R21, L1, R)).polys()


def re_presentation(spec: RMatrixSpec) -> QuadraticPresentation:
    gens = GeneratorSpace(spec.dim)
    return presentation_from_relations(gens, re_raw_relations(spec), "RE")


def re_presentation_s_form(spec: RMatrixSpec) -> QuadraticPresentation:
    """RE relations written as ``S L2 S L2 = L2 S L2 S`` with ``S = P R``."""
    gens = GeneratorSpace(spec.dim)
    S = NcMatrix.scalar(braid_operator(spec.R))
    L2 = NcMatrix.leg(gens, 2)
    raw = (_chain(S, L2, S, L2) - _chain(L2, S, L2, S)).polys()
    return presentation_from_relations(gens, raw, "RE (S-form)")


def commutative_presentation(n: int) -> QuadraticPresentation:
    gens = GeneratorSpace(n)
    raw = [NcPolynomial.word(a, b) - NcPolynomial.word(b, a) for a in range(gens.dim) for b in range(a + 1, gens.dim)]
    return presentation_from_relations(gens, raw, "commutative")


def ideal_component(P: QuadraticPresentation, d: int) -> Iterable[dict[Word, RationalQ]]:
    """Spanning vectors ``u r v`` of the degree-``d`` part of the ideal."""
    m = P.gens.dim
    for left in range(d - 1):
        right = d - 2 - left
        for u in itertools.product(range(m), repeat=left):
            for v in itertools.product(range(m), repeat=right):
                for r in P.relations:
                    yield {u + w + v: c for w, c in r.terms.items()}


def table_size(P: QuadraticPresentation, d: int) -> int:
    """Entries of the degree-``d`` elimination table: spanning rows times ``(n^2)^d`` columns."""
    m = P.gens.dim
    if d < 2:
        return m**d
    return (d - 1) * m ** (d - 2) * len(P.relations) * m**d


def check_table_bound(P: QuadraticPresentation, d: int, bound: int = DEFAULT_TABLE_BOUND) -> None:
    size = table_size(P, d)
    if size > bound:
        raise ResourceGuardError(f"degree {d} needs a {size}-entry table, above the bound {bound}")


def graded_dimension(P: QuadraticPresentation, d: int, bound: int = DEFAULT_TABLE_BOUND) -> int:
    """Dimension of the degree-``d`` component of ``T(V_g) / (relations)``.

    Computed as ``(n^2)^d`` minus the rank of the span of all ``u·r·v``.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    check_table_bound(P, d, bound)
    total = P.gens.dim**d
    if d < 2:
        return total
    return total - rank(ideal_component(P, d))


def commutative_dimension(n: int, d: int) -> int:
    """``C(d + n^2 - 1, n^2 - 1)``: monomials of degree ``d`` in ``n^2`` variables."""
    return comb(d + n * n - 1, n * n - 1)


def hilbert_prefix(P: QuadraticPresentation, max_degree: int, bound: int = DEFAULT_TABLE_BOUND) -> list[int]:
    check_table_bound(P, max_degree, bound)
    return [graded_dimension(P, d, bound) for d in range(max_degree + 1)]


def normal_form(P: QuadraticPresentation, x: NcPolynomial, max_degree: int | None = None) -> NcPolynomial:
    """See :func:`retwist.rewriting.normal_form`."""
    from .rewriting import normal_form as _nf

    return _nf(P, x, max_degree)
