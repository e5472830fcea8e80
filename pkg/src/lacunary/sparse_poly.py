"""Exact arithmetic for lacunary polynomials and small dense polynomials over Q.

A :class:`SparsePoly` stores only its nonzero terms, keyed by arbitrary-precision
exponents, so ``x**(10**9) + 1`` costs two dictionary entries.  A
:class:`DensePoly` is an ordinary coefficient list and is used for outer
components and for the rational-function work in :mod:`lacunary.wronskian`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .config import DEFAULT_LIMITS

Number = Union[int, Fraction]


class ExpansionOverflow(ArithmeticError):
    """An expanding operation would exceed the configured term-count cap."""


class CapExceeded(ValueError):
    """A degree exceeds the configured dense-degree cap."""


class UndefinedInput(ValueError):
    """The operation is undefined for the given input (typically the zero polynomial)."""


def _q(c: Number) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


class SparsePoly:
    """Polynomial in one variable held as ``{exponent: coefficient}``.

    Instances are immutable.  Zero coefficients are dropped on construction and
    iteration yields ``(exponent, coefficient)`` pairs by descending exponent.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping[int, Number], Iterable[tuple[int, Number]], None] = None):
        acc: dict[int, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for e, c in items:
                if not isinstance(e, int) or isinstance(e, bool):
                    raise TypeError(f"exponent must be an int, got {e!r}")
                if e < 0:
                    raise ValueError(f"negative exponent {e}")
                acc[e] = acc.get(e, Fraction(0)) + _q(c)
        self._terms = {e: acc[e] for e in sorted(acc, reverse=True) if acc[e]}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> "SparsePoly":
        # trusted constructor: caller guarantees nonzero coefficients
        p = object.__new__(cls)
        p._terms = {e: terms[e] for e in sorted(terms, reverse=True)}
        p._hash = None
        return p

    @classmethod
    def monomial(cls, coeff: Number, exp: int) -> "SparsePoly":
        return cls({exp: coeff})

    @classmethod
    def constant(cls, c: Number) -> "SparsePoly":
        return cls({0: c})

    @classmethod
    def x(cls) -> "SparsePoly":
        return cls({1: 1})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self._terms.items())

    def exponents(self) -> list[int]:
        return list(self._terms)

    @property
    def term_count(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    @property
    def degree(self) -> int:
        if not self._terms:
            raise UndefinedInput("degree of the zero polynomial")
        return next(iter(self._terms))

    @property
    def low_degree(self) -> int:
        if not self._terms:
            raise UndefinedInput("order of the zero polynomial")
        return next(reversed(self._terms))

    @property
    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            raise UndefinedInput("leading coefficient of the zero polynomial")
        return next(iter(self._terms.values()))

    def coefficient(self, e: int) -> Fraction:
        return self._terms.get(e, Fraction(0))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SparsePoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == SparsePoly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"SparsePoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            if e == 0:
                mono = str(c)
            else:
                xe = "x" if e == 1 else f"x^{e}"
                mono = xe if c == 1 else ("-" + xe if c == -1 else f"{c}*{xe}")
            parts.append(mono)
        return " + ".join(parts).replace("+ -", "- ")

    def __neg__(self) -> "SparsePoly":
        return SparsePoly._raw({e: -c for e, c in self._terms.items()})

    def __add__(self, other: Union["SparsePoly", Number]) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            other = SparsePoly.constant(_q(other))
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other: Union["SparsePoly", Number]) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            other = SparsePoly.constant(_q(other))
        return add(self, -other)

    def __rsub__(self, other: Number) -> "SparsePoly":
        return SparsePoly.constant(_q(other)) - self

    def __mul__(self, other: Union["SparsePoly", Number]) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        return power(self, k)

    def scale(self, c: Number) -> "SparsePoly":
        c = _q(c)
        if not c:
            return SparsePoly()
        return SparsePoly._raw({e: c * v for e, v in self._terms.items()})

    def shift(self, k: int) -> "SparsePoly":
        """Multiply by ``x**k``; ``k`` may be negative when every exponent allows it."""
        if self._terms and self.low_degree + k < 0:
            raise ValueError("shift would create a negative exponent")
        return SparsePoly._raw({e + k: c for e, c in self._terms.items()})

    def monic(self) -> "SparsePoly":
        return self.scale(1 / self.leading_coefficient)

    def evaluate(self, t: Number) -> Fraction:
        t = _q(t)
        if not t:
            return self.coefficient(0)
        return sum((c * t**e for e, c in self._terms.items()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "terms": [
                {"exp": str(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in self._terms.items()
            ]
        }

    @classmethod
    def from_json(cls, obj: object) -> "SparsePoly":
        if not isinstance(obj, dict) or set(obj) != {"terms"}:
            raise ValueError('SparsePoly JSON must be an object with the single key "terms"')
        if not isinstance(obj["terms"], list):
            raise ValueError('"terms" must be a list')
        pairs = []
        for t in obj["terms"]:
            if not isinstance(t, dict) or set(t) - {"exp", "num", "den"} or not {"exp", "num"} <= set(t):
                raise ValueError(f"bad term {t!r}: expected keys exp, num, den")
            e = _parse_int(t["exp"], "exp")
            num = _parse_int(t["num"], "num")
            den = _parse_int(t.get("den", "1"), "den")
            if den == 0:
                raise ValueError("zero denominator")
            pairs.append((e, Fraction(num, den)))
        return cls(pairs)


def _parse_int(v: object, name: str) -> int:
    if isinstance(v, bool):
        raise ValueError(f"{name} must be an integer")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise ValueError(f"{name} must be a decimal integer string, got {v!r}")


def add(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    acc = dict(p._terms)
    for e, c in q._terms.items():
        s = acc.get(e, 0) + c
        if s:
            acc[e] = s
        else:
            acc.pop(e, None)
    return SparsePoly._raw(acc)


def mul(p: SparsePoly, q: SparsePoly, term_cap: int | None = None) -> SparsePoly:
    cap = DEFAULT_LIMITS.term_cap if term_cap is None else term_cap
    if p.term_count > q.term_count:
        p, q = q, p
    acc: dict[int, Fraction] = {}
    for e1, c1 in p._terms.items():
        for e2, c2 in q._terms.items():
            e = e1 + e2
            acc[e] = acc.get(e, 0) + c1 * c2
        if len(acc) > cap:
            raise ExpansionOverflow(f"product exceeds term cap {cap}")
    return SparsePoly._raw({e: c for e, c in acc.items() if c})


def power(p: SparsePoly, k: int, term_cap: int | None = None) -> SparsePoly:
    if k < 0:
        raise ValueError("negative power")
    result = SparsePoly.constant(1)
    base = p
    while k:
        if k & 1:
            result = mul(result, base, term_cap)
        k >>= 1
        if k:
            base = mul(base, base, term_cap)
    return result


def compose_outer(g: "DensePoly", h: SparsePoly, term_cap: int | None = None) -> SparsePoly:
    """``g(h(x))`` by Horner's rule in the sparse ring."""
    if g.degree < 1:
        raise UndefinedInput("outer polynomial must be non-constant")
    acc = SparsePoly.constant(g.coeffs[-1])
    for b in reversed(g.coeffs[:-1]):
        acc = mul(acc, h, term_cap)
        if b:
            acc = acc + b
    return acc


def exponent_gcd(f: SparsePoly) -> int:
    """Largest ``n`` with every exponent of ``f`` divisible by ``n`` (0-exponents count)."""
    if f.is_zero():
        raise UndefinedInput("exponent gcd of the zero polynomial")
    n = 0
    for e in f._terms:
        n = math.gcd(n, e)
    return n


class DensePoly:
    """Dense polynomial over Q, coefficients stored low degree first.

    The zero polynomial has an empty coefficient tuple and degree ``-1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [_q(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "DensePoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading_coefficient(self) -> Fraction:
        if not self.coeffs:
            raise UndefinedInput("leading coefficient of the zero polynomial")
        return self.coeffs[-1]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DensePoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"DensePoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return str(from_dense(self))

    def __neg__(self) -> "DensePoly":
        return DensePoly(-c for c in self.coeffs)

    def __add__(self, other: Union["DensePoly", Number]) -> "DensePoly":
        if not isinstance(other, DensePoly):
            other = DensePoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return DensePoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other: Union["DensePoly", Number]) -> "DensePoly":
        if not isinstance(other, DensePoly):
            other = DensePoly([other])
        return self + (-other)

    def __mul__(self, other: Union["DensePoly", Number]) -> "DensePoly":
        if not isinstance(other, DensePoly):
            c = _q(other)
            return DensePoly(c * v for v in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return DensePoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return DensePoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "DensePoly":
        result = DensePoly([1])
        for _ in range(k):
            result = result * self
        return result

    def __divmod__(self, other: "DensePoly") -> tuple["DensePoly", "DensePoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        if len(rem) - 1 < dq:
            return DensePoly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = c / lead
            quot[i - dq] = q
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] -= q * b
        return DensePoly(quot), DensePoly(rem[:dq])

    def __floordiv__(self, other: "DensePoly") -> "DensePoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "DensePoly") -> "DensePoly":
        return divmod(self, other)[1]

    def monic(self) -> "DensePoly":
        return self * (1 / self.leading_coefficient)

    def derivative(self) -> "DensePoly":
        return DensePoly(i * c for i, c in enumerate(self.coeffs) if i)

    def evaluate(self, t: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def compose(self, inner: "DensePoly") -> "DensePoly":
        acc = DensePoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc


def to_dense(f: SparsePoly, cap: int | None = None) -> DensePoly:
    cap = DEFAULT_LIMITS.dense_cap if cap is None else cap
    if f.is_zero():
        return DensePoly()
    if f.degree > cap:
        raise CapExceeded(f"degree {f.degree} exceeds dense cap {cap}")
    cs = [Fraction(0)] * (f.degree + 1)
    for e, c in f:
        cs[e] = c
    return DensePoly(cs)


def from_dense(g: DensePoly) -> SparsePoly:
    return SparsePoly._raw({i: c for i, c in enumerate(g.coeffs) if c})


def exact_divide(p: SparsePoly, q: SparsePoly, term_cap: int | None = None) -> SparsePoly | None:
    """``p / q`` when ``q`` divides ``p`` in Q[x], else ``None``."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return SparsePoly()
    if q.term_count == 1:
        (e, c), = q
        if p.low_degree < e:
            return None
        return p.shift(-e).scale(1 / c)
    cap = DEFAULT_LIMITS.term_cap if term_cap is None else term_cap
    dq, lq = q.degree, q.leading_coefficient
    quot: dict[int, Fraction] = {}
    rest = p
    while not rest.is_zero():
        if rest.degree < dq or len(quot) >= cap:
            return None
        e = rest.degree - dq
        c = rest.leading_coefficient / lq
        quot[e] = c
        rest = rest - SparsePoly._raw({k + e: v * c for k, v in q})
    return SparsePoly._raw(quot)
