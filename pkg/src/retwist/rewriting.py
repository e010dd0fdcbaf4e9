"""Degree-bounded rewriting to normal forms (Diamond-Lemma style).

Each rule replaces a word by a combination of strictly larger words of the
same length, so reduction terminates degree by degree. Completion resolves
every overlap ambiguity ``x·y·z`` (with ``x·y`` and ``y·z`` both rule heads)
up to the degree bound; an unresolved overlap either becomes a new rule or,
when completion is disabled, is reported as :class:`NonConfluentError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .qalg import NcPolynomial, QuadraticPresentation, Word
from .scalars import RationalQ

DEFAULT_MAX_RULES = 5000


class NonConfluentError(RuntimeError):
    """An overlap whose two reductions disagree."""

    def __init__(self, message: str, overlap: Word, difference: NcPolynomial | None = None):
        super().__init__(message)
        self.overlap = overlap
        self.difference = difference


def _addto(acc: dict[Word, RationalQ], w: Word, c: RationalQ) -> None:
    t = acc.get(w)
    if t is None:
        acc[w] = c
        return
    s = t + c
    if s.is_zero():
        del acc[w]
    else:
        acc[w] = s


@dataclass
class RewriteSystem:
    """Rules ``head -> tail`` with ``tail`` a combination of larger words."""

    max_degree: int
    rules: dict[Word, dict[Word, RationalQ]] = field(default_factory=dict)
    _step_cache: dict[Word, dict[Word, RationalQ] | None] = field(default_factory=dict, repr=False)

    @property
    def head_lengths(self) -> list[int]:
        return sorted({len(h) for h in self.rules})

    def add_rule(self, relation: dict[Word, RationalQ]) -> Word:
        head = min(relation)
        inv = relation[head].inverse()
        tail = {w: -(c * inv) for w, c in relation.items() if w != head}
        self.rules[head] = tail
        self._step_cache.clear()
        return head

    def _step(self, w: Word) -> dict[Word, RationalQ] | None:
        """One rewrite at the leftmost reducible position, or ``None``."""
        if w in self._step_cache:
            return self._step_cache[w]
        out = None
        for i in range(len(w)):
            for k in self.head_lengths:
                tail = self.rules.get(w[i:i + k]) if i + k <= len(w) else None
                if tail is not None:
                    pre, post = w[:i], w[i + k:]
                    out = {pre + t + post: c for t, c in tail.items()}
                    break
            if out is not None:
                break
        self._step_cache[w] = out
        return out

    def is_irreducible(self, w: Word) -> bool:
        return self._step(w) is None

    def reduce(self, poly: dict[Word, RationalQ]) -> dict[Word, RationalQ]:
        # Rewrites only produce larger words, so processing the smallest
        # pending word first touches every word at most once.
        work = {w: c for w, c in poly.items() if not c.is_zero()}
        done: dict[Word, RationalQ] = {}
        while work:
            w = min(work)
            c = work.pop(w)
            step = self._step(w)
            if step is None:
                done[w] = c
                continue
            for w2, c2 in step.items():
                _addto(work, w2, c * c2)
        return done

    def overlaps(self, degree: int) -> list[tuple[Word, Word, Word]]:
        """Triples ``(head1, head2, word)`` of overlap ambiguities of a given length."""
        out = []
        heads = sorted(self.rules)
        for h1 in heads:
            for h2 in heads:
                for k in range(1, min(len(h1), len(h2))):
                    if h1[-k:] == h2[:k] and len(h1) + len(h2) - k == degree:
                        out.append((h1, h2, h1 + h2[k:]))
        return out

    def overlap_difference(self, h1: Word, h2: Word, word: Word) -> dict[Word, RationalQ]:
        suffix = word[len(h1):]
        prefix = word[: len(word) - len(h2)]
        left = {t + suffix: c for t, c in self.rules[h1].items()}
        right = {prefix + t: c for t, c in self.rules[h2].items()}
        diff = self.reduce(left)
        for w, c in self.reduce(right).items():
            _addto(diff, w, -c)
        return diff

    def irreducible_words(self, alphabet: int, degree: int) -> list[Word]:
        words: list[Word] = [()]
        for _ in range(degree):
            words = [w + (g,) for w in words for g in range(alphabet) if self.is_irreducible(w + (g,))]
        return words


def complete(
    P: QuadraticPresentation,
    max_degree: int,
    *,
    complete: bool = True,
    max_rules: int = DEFAULT_MAX_RULES,
) -> RewriteSystem:
    """Rewrite system for ``P`` confluent on all words of length ``<= max_degree``.

    Raises :class:`NonConfluentError` if an overlap fails to resolve and
    ``complete`` is false, or if completion needs more than ``max_rules`` rules.
    """
    system = RewriteSystem(max_degree)
    for r in P.relations:
        system.add_rule(dict(r.terms))
    for degree in range(3, max_degree + 1):
        pending = system.overlaps(degree)
        while pending:
            h1, h2, word = pending.pop()
            if h1 not in system.rules or h2 not in system.rules:
                continue
            diff = system.overlap_difference(h1, h2, word)
            if not diff:
                continue
            if not complete:
                raise NonConfluentError(
                    f"overlap {word} does not resolve", word, NcPolynomial(diff)
                )
            if len(system.rules) >= max_rules:
                raise NonConfluentError(
                    f"completion exceeded {max_rules} rules at overlap {word}", word, NcPolynomial(diff)
                )
            head = system.add_rule(diff)
            # The new head is irreducible by construction; it only creates
            # new ambiguities with existing heads.
            for h in list(system.rules):
                for a, b in ((h, head), (head, h)):
                    for k in range(1, min(len(a), len(b))):
                        if a[-k:] == b[:k] and len(a) + len(b) - k <= max_degree:
                            pending.append((a, b, a + b[k:]))
            pending.sort(key=lambda t: len(t[2]), reverse=True)
    return system


_SYSTEMS: dict[tuple[QuadraticPresentation, int], RewriteSystem] = {}


def rewrite_system(P: QuadraticPresentation, max_degree: int) -> RewriteSystem:
    key = (P, max_degree)
    if key not in _SYSTEMS:
        _SYSTEMS[key] = complete(P, max_degree)
    return _SYSTEMS[key]


def normal_form(P: QuadraticPresentation, x: NcPolynomial, max_degree: int | None = None) -> NcPolynomial:
    """Unique representative of ``x`` modulo the ideal of ``P``.

    Normal words are those containing no rule head; for the standard FRT and
    RE relations these are the non-increasing words.
    """
    degrees = x.degrees()
    top = max(degrees, default=0)
    if max_degree is None:
        max_degree = max(top, 2)
    if top > max_degree:
        raise ValueError(f"element of degree {top} exceeds max_degree {max_degree}")
    return NcPolynomial(rewrite_system(P, max_degree).reduce(x.terms))


def normal_words(P: QuadraticPresentation, degree: int, max_degree: int | None = None) -> list[Word]:
    system = rewrite_system(P, max(degree, 2) if max_degree is None else max_degree)
    return system.irreducible_words(P.gens.dim, degree)
