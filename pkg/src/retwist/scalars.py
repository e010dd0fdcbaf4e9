"""Exact coefficient arithmetic in the deformation parameter ``q``.

Three coefficient types live here:

* :class:`Laurent` -- Laurent polynomials in ``q`` with rational coefficients,
* :class:`RationalQ` -- their fraction field, kept in a canonical reduced form,
* :class:`HSeries` -- power series in ``h`` truncated at a fixed order, used
  for the classical limit under the substitution ``q = exp(h)``.

Everything is immutable. Coefficients are ``int`` or :class:`fractions.Fraction`;
no floating point is ever involved.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


def _clean(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Laurent:
    """Laurent polynomial ``sum_k c_k q^k`` with exact rational coefficients.

    Terms are stored as a tuple of ``(exponent, coefficient)`` pairs sorted by
    exponent with no zero coefficient, so structural equality is equality.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[int, Number] | Iterable[tuple[int, Number]] = ()):
        acc: dict[int, Number] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            acc[e] = acc.get(e, 0) + c
        self.terms: tuple[tuple[int, Number], ...] = tuple(
            sorted((int(e), _clean(c)) for e, c in acc.items() if c != 0)
        )
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: tuple[tuple[int, Number], ...]) -> "Laurent":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Number) -> "Laurent":
        return cls._raw(((0, _clean(Fraction(c) if isinstance(c, Fraction) else c)),) if c != 0 else ())

    @classmethod
    def monomial(cls, exp: int, c: Number = 1) -> "Laurent":
        return cls._raw(((exp, _clean(c)),) if c != 0 else ())

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == ((0, 1),)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def valuation(self) -> int:
        if not self.terms:
            raise ValueError("valuation of the zero polynomial")
        return self.terms[0][0]

    def degree(self) -> int:
        if not self.terms:
            raise ValueError("degree of the zero polynomial")
        return self.terms[-1][0]

    def as_dict(self) -> dict[int, Number]:
        return dict(self.terms)

    def constant_term(self) -> Number:
        for e, c in self.terms:
            if e == 0:
                return c
        return 0

    def __call__(self, value: Number) -> Number:
        """Evaluate at ``q = value`` (``value`` must be nonzero if negative
        exponents occur)."""
        v = Fraction(value)
        return _clean(sum((c * v**e for e, c in self.terms), Fraction(0)))

    def invert_q(self) -> "Laurent":
        """Substitute ``q -> 1/q``."""
        return Laurent._raw(tuple(sorted((-e, c) for e, c in self.terms)))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Laurent):
            if isinstance(other, (int, Fraction)):
                other = Laurent.const(other)
            else:
                return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return Laurent._raw(tuple(sorted((e, _clean(c)) for e, c in acc.items() if c != 0)))

    __radd__ = __add__

    def __neg__(self) -> "Laurent":
        return Laurent._raw(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Laurent.const(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ZERO
            return Laurent._raw(tuple((e, _clean(c * other)) for e, c in self.terms))
        if not isinstance(other, Laurent):
            return NotImplemented
        if not self.terms or not other.terms:
            return ZERO
        if len(other.terms) == 1:
            f, d = other.terms[0]
            return Laurent._raw(tuple((e + f, _clean(c * d)) for e, c in self.terms))
        if len(self.terms) == 1:
            return other * self
        acc: dict[int, Number] = {}
        for e, c in self.terms:
            for f, d in other.terms:
                acc[e + f] = acc.get(e + f, 0) + c * d
        return Laurent._raw(tuple(sorted((e, _clean(c)) for e, c in acc.items() if c != 0)))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Laurent":
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible in the Laurent ring")
            e, c = self.terms[0]
            return Laurent.monomial(-e, Fraction(1) / c) ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Laurent):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Laurent.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Laurent({self})"

    def __str__(self) -> str:
        return format_laurent(self)


ZERO = Laurent._raw(())
ONE = Laurent._raw(((0, 1),))
q = Laurent._raw(((1, 1),))
qinv = Laurent._raw(((-1, 1),))


def laurent_normalize(raw: Iterable[tuple[int, Number]] | Mapping[int, Number]) -> Laurent:
    """Build a canonical Laurent polynomial from a raw list of terms.

    Repeated exponents are summed and zero coefficients dropped.
    """
    return Laurent(raw)


def format_laurent(p: Laurent, var: str = "q") -> str:
    if not p.terms:
        return "0"
    parts = []
    for e, c in reversed(p.terms):
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if e == 0:
            body = str(mag)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- univariate polynomial helpers (ascending coefficient lists over Q) ------

def _to_poly(p: Laurent) -> tuple[int, list[Fraction]]:
    """Split ``p = q^shift * P(q)`` with ``P(0) != 0``."""
    v = p.terms[0][0]
    top = p.terms[-1][0]
    coeffs = [Fraction(0)] * (top - v + 1)
    for e, c in p.terms:
        coeffs[e - v] = Fraction(c)
    return v, coeffs


def _from_poly(shift: int, coeffs: list[Fraction]) -> Laurent:
    return Laurent._raw(tuple((i + shift, _clean(c)) for i, c in enumerate(coeffs) if c != 0))


def _trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [], _trim(a)
    quot = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        f = c / lead
        quot[i - db] = f
        for j in range(db + 1):
            a[i - db + j] -= f * b[j]
    return _trim(quot), _trim(a[:db])


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = _trim(list(a))
    b = _trim(list(b))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


def laurent_divexact(a: Laurent, b: Laurent) -> Laurent:
    """Exact quotient ``a / b``; raises ``ValueError`` when not exact."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if a.is_zero():
        return ZERO
    if b.is_monomial():
        e, c = b.terms[0]
        return Laurent._raw(tuple((f - e, _clean(Fraction(d) / c)) for f, d in a.terms))
    sa, pa = _to_poly(a)
    sb, pb = _to_poly(b)
    quot, rem = _poly_divmod(pa, pb)
    if rem:
        raise ValueError(f"{a} is not divisible by {b}")
    return _from_poly(sa - sb, quot)


def laurent_gcd(a: Laurent, b: Laurent) -> Laurent:
    """Polynomial gcd with the monomial part stripped and lowest coefficient 1."""
    if a.is_zero():
        a, b = b, a
    if a.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    _, pa = _to_poly(a)
    if b.is_zero():
        g = pa
    else:
        _, pb = _to_poly(b)
        g = _poly_gcd(pa, pb)
    return _from_poly(0, [c / g[0] for c in g])


def laurent_sqrt(p: Laurent) -> Laurent | None:
    """Exact square root with positive top coefficient, or ``None``."""
    if p.is_zero():
        return ZERO
    shift, coeffs = _to_poly(p)
    deg = len(coeffs) - 1
    if shift % 2 or deg % 2:
        return None
    lead = coeffs[-1]
    if lead < 0:
        return None
    num, den = lead.numerator, lead.denominator
    rn, rd = _isqrt_exact(num), _isqrt_exact(den)
    if rn is None or rd is None:
        return None
    # Solve s(x)^2 = P(x) from the top coefficient down.
    half = deg // 2
    s = [Fraction(0)] * (half + 1)
    s[half] = Fraction(rn, rd)
    for k in range(half - 1, -1, -1):
        target = coeffs[half + k]
        acc = Fraction(0)
        for i in range(k + 1, half):
            j = half + k - i
            if k < j <= half:
                acc += s[i] * s[j]
        s[k] = (target - acc) / (2 * s[half])
    root = _from_poly(shift // 2, s)
    return root if root * root == p else None


def _isqrt_exact(m: int) -> int | None:
    from math import isqrt

    r = isqrt(m)
    return r if r * r == m else None


class RationalQ:
    """Element ``num/den`` of the field of rational functions in ``q``.

    Canonical form: ``gcd(num, den) = 1`` and ``den`` is an honest polynomial
    (lowest exponent 0) whose lowest-degree coefficient is 1. Monomial
    factors of the denominator are absorbed into ``num``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: "Laurent | Number", den: "Laurent | Number" = 1):
        num = num if isinstance(num, Laurent) else Laurent.const(num)
        den = den if isinstance(den, Laurent) else Laurent.const(den)
        n, d = _reduce_pair(num, den)
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _raw(cls, num: Laurent, den: Laurent) -> "RationalQ":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, x) -> "RationalQ":
        if isinstance(x, RationalQ):
            return x
        if isinstance(x, Laurent):
            return cls._raw(x, ONE)
        if isinstance(x, (int, Fraction)):
            return cls._raw(Laurent.const(x), ONE)
        raise TypeError(f"cannot coerce {type(x).__name__} to RationalQ")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def __add__(self, other):
        if not isinstance(other, RationalQ):
            try:
                other = RationalQ.coerce(other)
            except TypeError:
                return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            if self.den.is_one():
                return RationalQ._raw(self.num + other.num, ONE)
            return _make(self.num + other.num, self.den)
        return _make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalQ":
        return RationalQ._raw(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, RationalQ):
            try:
                other = RationalQ.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalQ):
            try:
                other = RationalQ.coerce(other)
            except TypeError:
                return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return RZERO
        if self.den.is_one() and other.den.is_one():
            return RationalQ._raw(self.num * other.num, ONE)
        return _make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalQ":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.num.is_monomial():
            e, c = self.num.terms[0]
            return RationalQ._raw(self.den * Laurent.monomial(-e, Fraction(1) / c), ONE)
        return _make(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, RationalQ):
            try:
                other = RationalQ.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RationalQ.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RationalQ":
        if k < 0:
            return self.inverse() ** (-k)
        return RationalQ._raw(self.num**k, self.den**k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalQ):
            try:
                other = RationalQ.coerce(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __call__(self, value: Number) -> Number:
        d = self.den(value)
        if d == 0:
            raise ZeroDivisionError(f"pole at q = {value}")
        return _clean(Fraction(self.num(value)) / d)

    def invert_q(self) -> "RationalQ":
        return RationalQ(self.num.invert_q(), self.den.invert_q())

    def __repr__(self) -> str:
        return f"RationalQ({self})"

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        n = str(self.num)
        if len(self.num.terms) > 1:
            n = f"({n})"
        return f"{n}/({self.den})"

    def sort_key(self) -> tuple:
        return (self.num.terms, self.den.terms)


def _reduce_pair(num: Laurent, den: Laurent) -> tuple[Laurent, Laurent]:
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return ZERO, ONE
    if den.is_monomial():
        return laurent_divexact(num, den), ONE
    g = laurent_gcd(num, den)
    if not g.is_one():
        num = laurent_divexact(num, g)
        den = laurent_divexact(den, g)
    # Move the monomial part and the lowest coefficient of den into num.
    e, c = den.terms[0]
    if e != 0 or c != 1:
        unit = Laurent.monomial(e, c)
        den = laurent_divexact(den, unit)
        num = laurent_divexact(num, unit)
    return num, den


def _make(num: Laurent, den: Laurent) -> RationalQ:
    n, d = _reduce_pair(num, den)
    return RationalQ._raw(n, d)


def rational_reduce(x: RationalQ | tuple[Laurent, Laurent]) -> RationalQ:
    """Canonical gcd-reduced representative of a fraction.

    Accepts either a :class:`RationalQ` or a raw ``(num, den)`` pair; a zero
    denominator raises ``ZeroDivisionError``.
    """
    if isinstance(x, RationalQ):
        return _make(x.num, x.den)
    num, den = x
    return RationalQ(num, den)


RZERO = RationalQ._raw(ZERO, ONE)
RONE = RationalQ._raw(ONE, ONE)


def as_rational(x) -> RationalQ:
    return RationalQ.coerce(x)


class HSeries:
    """Power series in ``h`` truncated after ``h**order``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable[Number], order: int):
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = [Fraction(c) for c in coeffs][: order + 1]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        self.order = order
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c: Number, order: int) -> "HSeries":
        return cls([c], order)

    def _check(self, other: "HSeries") -> None:
        if not isinstance(other, HSeries):
            raise TypeError("HSeries arithmetic requires HSeries operands")
        if other.order != self.order:
            raise ValueError(f"truncation orders differ: {self.order} vs {other.order}")

    def __add__(self, other: "HSeries") -> "HSeries":
        self._check(other)
        return HSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __sub__(self, other: "HSeries") -> "HSeries":
        self._check(other)
        return HSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __neg__(self) -> "HSeries":
        return HSeries([-a for a in self.coeffs], self.order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return HSeries([a * other for a in self.coeffs], self.order)
        self._check(other)
        K = self.order
        out = [Fraction(0)] * (K + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(K + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return HSeries(out, K)

    __rmul__ = __mul__

    def inverse(self) -> "HSeries":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        K = self.order
        inv = [Fraction(0)] * (K + 1)
        inv[0] = 1 / c0
        for k in range(1, K + 1):
            acc = sum((self.coeffs[j] * inv[k - j] for j in range(1, k + 1)), Fraction(0))
            inv[k] = -acc / c0
        return HSeries(inv, K)

    def __truediv__(self, other: "HSeries") -> "HSeries":
        return self * other.inverse()

    def __pow__(self, k: int) -> "HSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = HSeries.const(1, self.order)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, HSeries) and self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __repr__(self) -> str:
        terms = " + ".join(f"{c}*h^{i}" for i, c in enumerate(self.coeffs) if c != 0) or "0"
        return f"HSeries({terms}; O(h^{self.order + 1}))"


def _exp_series(sign: int, K: int) -> HSeries:
    return HSeries([Fraction(sign**m, factorial(m)) for m in range(K + 1)], K)


def expand_q_in_h(p: "Laurent | RationalQ | Number", K: int) -> HSeries:
    """Expand a coefficient at ``q = exp(h)`` up to and including ``h**K``.

    Rational functions must not have a pole at ``q = 1``.
    """
    if K < 0:
        raise ValueError("K must be non-negative")
    if isinstance(p, RationalQ):
        den = expand_q_in_h(p.den, K)
        if den.coeffs[0] == 0:
            raise ZeroDivisionError("rational function has a pole at q = 1")
        return expand_q_in_h(p.num, K) / den
    if isinstance(p, (int, Fraction)):
        return HSeries.const(p, K)
    up, down = _exp_series(1, K), _exp_series(-1, K)
    total = HSeries.const(0, K)
    for e, c in p.terms:
        total = total + (up if e >= 0 else down) ** abs(e) * Fraction(c)
    return total


# -- text encoding ------------------------------------------------------------

def encode_laurent(p: Laurent) -> list[dict[str, int]]:
    """``[{exp, num, den}]`` ascending by exponent."""
    out = []
    for e, c in p.terms:
        c = Fraction(c)
        out.append({"exp": e, "num": c.numerator, "den": c.denominator})
    return out


def decode_laurent(data: list) -> Laurent:
    terms = []
    for item in data:
        if not isinstance(item, dict) or not {"exp", "num"} <= set(item):
            raise ValueError(f"malformed Laurent term: {item!r}")
        den = item.get("den", 1)
        if not isinstance(den, int) or den <= 0:
            raise ValueError(f"Laurent term denominator must be a positive integer: {item!r}")
        if not isinstance(item["exp"], int) or not isinstance(item["num"], int):
            raise ValueError(f"Laurent term fields must be integers: {item!r}")
        terms.append((item["exp"], Fraction(item["num"], den)))
    exps = [t[0] for t in terms]
    if len(set(exps)) != len(exps):
        raise ValueError("repeated exponent in Laurent encoding")
    return Laurent(terms)


def encode_rational(x: RationalQ | Laurent | int | Fraction) -> dict | list:
    """Laurent encoding when the denominator is 1, else ``{num, den}``."""
    x = RationalQ.coerce(x)
    if x.den.is_one():
        return encode_laurent(x.num)
    return {"num": encode_laurent(x.num), "den": encode_laurent(x.den)}


def decode_rational(data) -> RationalQ:
    if isinstance(data, list):
        return RationalQ.coerce(decode_laurent(data))
    if isinstance(data, dict) and set(data) == {"num", "den"}:
        return RationalQ(decode_laurent(data["num"]), decode_laurent(data["den"]))
    raise ValueError(f"malformed coefficient: {data!r}")
