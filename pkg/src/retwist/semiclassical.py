"""First-order expansion at ``q = exp(h)`` and quadratic Poisson brackets.

If ``R = 1 + h X + O(h^2)``, the commutators of the quantum relations are
``h`` times a quadratic bracket on the commuting matrix entries:

* FRT:  ``{T1, T2} = T1 T2 X - X T1 T2``
* RE:   ``{L1, L2} = L2 X21 L1 + L2 L1 X - X21 L1 L2 - L1 X L2``

with ``[a, b] = a·b - b·a = h {a, b} + O(h^2)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .qalg import GeneratorSpace, NcMatrix, NcPolynomial, QuadraticPresentation
from .results import Verdict
from .rewriting import normal_form
from .rmatrix import RMatrixSpec, braid_transpose
from .scalars import RationalQ, expand_q_in_h
from .tensor import TensorOperator, embed_legs

Monomial = tuple[int, ...]  # sorted generator indices
CommPoly = dict[Monomial, Fraction]


class NotADeformationError(ValueError):
    pass


def _frac(x: RationalQ) -> Fraction:
    if not x.den.is_one() or any(e != 0 for e, _ in x.num.terms):
        raise ValueError(f"expected a rational constant, got {x}")
    return Fraction(x.num.constant_term())


def _const_op(n: int, entries: Mapping) -> TensorOperator:
    return TensorOperator(n, 2, {k: RationalQ(Fraction(v)) for k, v in entries.items() if v != 0})


@dataclass(frozen=True)
class ClassicalLimitData:
    X: TensorOperator
    rPart: TensorOperator
    omegaPart: TensorOperator

    @classmethod
    def from_x(cls, X: TensorOperator) -> "ClassicalLimitData":
        X21 = braid_transpose(X)
        half = RationalQ(Fraction(1, 2))
        return cls(X, (X - X21).scale(half), (X + X21).scale(half))

    @property
    def n(self) -> int:
        return self.X.dim


def classical_limit(spec: RMatrixSpec, order: int = 1) -> ClassicalLimitData:
    """``X`` with ``R = 1 + h X + O(h^2)`` at ``q = exp(h)``.

    ``order`` is the truncation used for the entrywise expansion; only the
    ``h^0`` and ``h^1`` coefficients are read.
    """
    if order < 1:
        raise ValueError("expansion order must be at least 1")
    n = spec.dim
    X = {}
    ident = TensorOperator.identity(n, 2)
    rows = set(spec.R.rows) | set(ident.rows)
    for r in rows:
        for c in set(spec.R.rows.get(r, {})) | {r}:
            s = expand_q_in_h(spec.R[r, c], order)
            if s[0] != (1 if r == c else 0):
                r1, c1 = tuple(x + 1 for x in r), tuple(x + 1 for x in c)
                raise NotADeformationError(f"not a deformation of the identity: entry {r1},{c1} is {s[0]} at h = 0")
            X[(r, c)] = s[1]
    return ClassicalLimitData.from_x(_const_op(n, X))


def check_cybe(data: ClassicalLimitData) -> Verdict:
    """``[X12, X13] + [X12, X23] + [X13, X23] = 0`` on ``V^(x)3``."""
    X = data.X
    X12, X13, X23 = (embed_legs(X, legs, 3) for legs in ([1, 2], [1, 3], [2, 3]))

    def comm(a, b):
        return a @ b - b @ a

    residual = comm(X12, X13) + comm(X12, X23) + comm(X13, X23)
    if residual.is_zero():
        return Verdict(True, "residual 0", residual)
    return Verdict(False, f"{residual.nnz()} nonzero residual entries", residual)


# -- commutative polynomials --------------------------------------------------

def _cp_add(acc: CommPoly, m: Monomial, c: Fraction) -> None:
    s = acc.get(m, Fraction(0)) + c
    if s == 0:
        acc.pop(m, None)
    else:
        acc[m] = s


def render_comm(p: CommPoly, gens: GeneratorSpace) -> str:
    if not p:
        return "0"
    parts = []
    for m in sorted(p):
        c = p[m]
        mono = "".join(gens.label(g) for g in m)
        coef = "" if abs(c) == 1 else f"{abs(c)}"
        parts.append(("-" if c < 0 else "+", f"{coef}{mono}"))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return out + "".join(f" {s} {b}" for s, b in parts[1:])


@dataclass(frozen=True, eq=False)
class PoissonStructure:
    """Brackets ``{z_a, z_b}`` of generators as quadratic commutative polynomials."""

    n: int
    brackets: dict[tuple[int, int], CommPoly]
    name: str = ""

    @property
    def gens(self) -> GeneratorSpace:
        return GeneratorSpace(self.n)

    def bracket(self, a: int, b: int) -> CommPoly:
        return self.brackets.get((a, b), {})

    def __eq__(self, other) -> bool:
        if not isinstance(other, PoissonStructure):
            return NotImplemented
        keys = set(self.brackets) | set(other.brackets)
        return self.n == other.n and all(self.bracket(*k) == other.bracket(*k) for k in keys)

    __hash__ = object.__hash__

    def is_zero(self) -> bool:
        return not any(self.brackets.values())

    def check_antisymmetry(self) -> Verdict:
        m = self.n * self.n
        for a in range(m):
            for b in range(a, m):
                neg = {k: -v for k, v in self.bracket(b, a).items()}
                if self.bracket(a, b) != neg:
                    return Verdict(False, f"{{{self.gens.label(a)}, {self.gens.label(b)}}} is not antisymmetric", (a, b))
        return Verdict(True, "antisymmetric")

    def bracket_with_generator(self, p: CommPoly, c: int) -> CommPoly:
        """``{p, z_c}`` by the Leibniz rule."""
        out: CommPoly = {}
        for mono, coeff in p.items():
            for pos, g in enumerate(mono):
                rest = mono[:pos] + mono[pos + 1:]
                for m2, c2 in self.bracket(g, c).items():
                    _cp_add(out, tuple(sorted(rest + m2)), coeff * c2)
        return out

    def export(self) -> list[dict]:
        """``[{pair: [[i, j], [k, l]], value: [{monomial, num, den}]}]`` with 1-based indices."""
        gens = self.gens

        def gen(g: int) -> list[int]:
            i, j = gens.pair(g)
            return [i + 1, j + 1]

        out = []
        for (a, b) in sorted(self.brackets):
            value = [
                {"monomial": [gen(g) for g in m], "num": c.numerator, "den": c.denominator}
                for m, c in sorted(self.brackets[(a, b)].items())
            ]
            out.append({"pair": [gen(a), gen(b)], "value": value})
        return out

    def render(self) -> list[str]:
        gens = self.gens
        m = self.n * self.n
        return [
            f"{{{gens.label(a)}, {gens.label(b)}}} = {render_comm(self.bracket(a, b), gens)}"
            for a in range(m)
            for b in range(a + 1, m)
        ]


def _bracket_from_matrix(mat: NcMatrix, n: int, name: str) -> PoissonStructure:
    gens = GeneratorSpace(n)
    out: dict[tuple[int, int], CommPoly] = {}
    for i, k, j, l in itertools.product(range(n), repeat=4):
        acc: CommPoly = {}
        for w, c in mat.entries.get(((i, k), (j, l)), {}).items():
            _cp_add(acc, tuple(sorted(w)), _frac(c))
        out[(gens.index(i, j), gens.index(k, l))] = acc
    return PoissonStructure(n, out, name)


def sklyanin_bracket(data: ClassicalLimitData) -> PoissonStructure:
    n = data.n
    gens = GeneratorSpace(n)
    X = NcMatrix.scalar(data.X)
    T1, T2 = NcMatrix.leg(gens, 1), NcMatrix.leg(gens, 2)
    return _bracket_from_matrix(T1 @ T2 @ X - X @ T1 @ T2, n, "Sklyanin")


def re_bracket(data: ClassicalLimitData) -> PoissonStructure:
    n = data.n
    gens = GeneratorSpace(n)
    X = NcMatrix.scalar(data.X)
    X21 = NcMatrix.scalar(braid_transpose(data.X))
    L1, L2 = NcMatrix.leg(gens, 1), NcMatrix.leg(gens, 2)
    mat = (L2 @ X21 @ L1) + (L2 @ L1 @ X) - (X21 @ L1 @ L2) - (L1 @ X @ L2)
    return _bracket_from_matrix(mat, n, "RE")


def adjoint_bracket(r: TensorOperator) -> PoissonStructure:
    """``{L1, L2} = L1 L2 r - L1 r L2 - L2 r L1 + r L1 L2`` for antisymmetric ``r``."""
    n = r.dim
    gens = GeneratorSpace(n)
    R = NcMatrix.scalar(r)
    L1, L2 = NcMatrix.leg(gens, 1), NcMatrix.leg(gens, 2)
    mat = (L1 @ L2 @ R) - (L1 @ R @ L2) - (L2 @ R @ L1) + (R @ L1 @ L2)
    return _bracket_from_matrix(mat, n, "adjoint")


def jacobi_check(B: PoissonStructure) -> Verdict:
    """Cyclic sums ``{{a, b}, c} + {{b, c}, a} + {{c, a}, b}`` over generator triples."""
    m = B.n * B.n
    count = 0
    for a, b, c in itertools.combinations_with_replacement(range(m), 3):
        total: CommPoly = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for mono, coeff in B.bracket_with_generator(B.bracket(x, y), z).items():
                _cp_add(total, mono, coeff)
        count += 1
        if total:
            labels = ", ".join(B.gens.label(g) for g in (a, b, c))
            return Verdict(False, f"Jacobi fails on ({labels})", (a, b, c))
    return Verdict(True, f"{count} triples vanish")


def commutator_expansion(P: QuadraticPresentation, a: int, b: int) -> CommPoly:
    """``h``-coefficient of the normal form of ``z_a z_b - z_b z_a``.

    Raises ``ValueError`` if the ``h^0`` coefficient does not vanish.
    """
    x = NcPolynomial.word(a, b) - NcPolynomial.word(b, a)
    nf = normal_form(P, x, 2)
    out: CommPoly = {}
    for w, c in nf.terms.items():
        s = expand_q_in_h(c, 1)
        if s[0] != 0:
            raise ValueError(f"commutator of {a}, {b} does not vanish at h = 0")
        _cp_add(out, tuple(sorted(w)), s[1])
    return out


def quantization_correspondence(P: QuadraticPresentation, B: PoissonStructure) -> Verdict:
    """Whether ``[z_a, z_b] = h {z_a, z_b} + O(h^2)`` modulo the relations of ``P``."""
    if P.n != B.n:
        raise ValueError("presentation and bracket have different sizes")
    m = P.gens.dim
    for a in range(m):
        for b in range(a + 1, m):
            try:
                got = commutator_expansion(P, a, b)
            except ValueError as exc:
                return Verdict(False, str(exc), (a, b))
            if got != B.bracket(a, b):
                gens = P.gens
                return Verdict(
                    False,
                    f"[{gens.label(a)}, {gens.label(b)}]/h = {render_comm(got, gens)} "
                    f"but bracket gives {render_comm(B.bracket(a, b), gens)}",
                    (a, b),
                )
    return Verdict(True, f"{m * (m - 1) // 2} generator pairs agree")
