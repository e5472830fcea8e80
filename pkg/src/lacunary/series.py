"""Truncated power series in ``y = 1/x`` and fractional powers of ``1 + small``.

Every series carries an explicit truncation order ``N``: coefficients at
exponents ``>= N`` are unknown, never implicitly zero.  Binary operations
return the minimum order of their operands.

The key routine is :func:`pow_fractional`, which raises a series with constant
term 1 to a rational power ``s/d``.  It runs J.C.P. Miller's recurrence only at
exponents reachable as sums of the input's exponents, so a lacunary input with
huge gaps stays cheap.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from sympy import Poly, QQ, Symbol

from .sparse_poly import DensePoly, Number, SparsePoly, UndefinedInput, _q


class NormalizationError(ValueError):
    """Input is not in the normalized shape the operation needs."""


class InconsistencyError(ValueError):
    """Two inputs that must agree (e.g. a series and its claimed prefix) do not."""


class NotApplicable(ValueError):
    """The construction does not apply to these inputs."""


class IrrationalShiftError(ValueError):
    """The root shift would need a non-rational root of the outer polynomial."""


class CandidateBudgetError(RuntimeError):
    """Too many series positions would be needed; distinct from a negative answer."""


class TruncatedSeries:
    """``sum c_k y**k + O(y**order)`` with exact rational coefficients."""

    __slots__ = ("_coeffs", "order")

    def __init__(self, coeffs: Mapping[int, Number] | Iterable[tuple[int, Number]] = (), order: int = 0):
        if order < 0:
            raise ValueError("negative truncation order")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for k, c in items:
            if k < 0:
                raise ValueError("series exponents must be non-negative")
            if k < order:
                acc[k] = acc.get(k, Fraction(0)) + _q(c)
        self._coeffs = {k: acc[k] for k in sorted(acc) if acc[k]}
        self.order = order

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls({0: 1}, order)

    @classmethod
    def from_poly(cls, p: SparsePoly, order: int) -> "TruncatedSeries":
        """Read a polynomial in ``y`` as a series truncated at ``order``."""
        return cls(((e, c) for e, c in p), order)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self._coeffs.items())

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def coefficient(self, k: int) -> Fraction:
        if k >= self.order:
            raise IndexError(f"coefficient y^{k} lies beyond truncation order {self.order}")
        return self._coeffs.get(k, Fraction(0))

    def support(self) -> list[int]:
        return list(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self._coeffs == other._coeffs

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*y^{k}" for k, c in self._coeffs.items()) or "0"
        return f"TruncatedSeries({body} + O(y^{self.order}))"

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self._coeffs, min(order, self.order))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        order = min(self.order, other.order)
        acc = dict(self._coeffs)
        for k, c in other._coeffs.items():
            acc[k] = acc.get(k, 0) + c
        return TruncatedSeries(acc, order)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries({k: -c for k, c in self._coeffs.items()}, self.order)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, c: Number) -> "TruncatedSeries":
        c = _q(c)
        return TruncatedSeries({k: c * v for k, v in self._coeffs.items()}, self.order)

    def shift(self, e: int) -> "TruncatedSeries":
        """Multiply by ``y**e``; the truncation order moves with it."""
        return TruncatedSeries({k + e: c for k, c in self._coeffs.items()}, self.order + e)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        order = min(self.order, other.order)
        acc: dict[int, Fraction] = {}
        for k1, c1 in self._coeffs.items():
            if k1 >= order:
                break
            for k2, c2 in other._coeffs.items():
                k = k1 + k2
                if k >= order:
                    break
                acc[k] = acc.get(k, 0) + c1 * c2
        return TruncatedSeries(acc, order)

    def inverse(self) -> "TruncatedSeries":
        c0 = self._coeffs.get(0)
        if not c0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        rest = [(k, c) for k, c in self._coeffs.items() if k]
        inv0 = 1 / c0
        b: dict[int, Fraction] = {0: inv0}
        for n in range(1, self.order):
            acc = Fraction(0)
            for k, c in rest:
                if k > n:
                    break
                prev = b.get(n - k)
                if prev:
                    acc += c * prev
            if acc:
                b[n] = -inv0 * acc
        return TruncatedSeries(b, self.order)

    def pow_int(self, k: int) -> "TruncatedSeries":
        if k < 0:
            return self.inverse().pow_int(-k)
        result = TruncatedSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result


def binom_general(s: int, d: int, k: int) -> Fraction:
    """Generalized binomial coefficient ``(s/d choose k)``."""
    if d < 1:
        raise ValueError("d must be positive")
    if k < 0:
        raise ValueError("k must be non-negative")
    alpha = Fraction(s, d)
    acc = Fraction(1)
    for i in range(k):
        acc *= alpha - i
    return acc / math.factorial(k)


def multinomial_coeff(s: int, d: int, h: Sequence[int]) -> Fraction:
    """Coefficient of ``prod b_i**h_i`` in ``(1 + sum b_i y**n_i)**(s/d)``."""
    k = sum(h)
    if any(x < 0 for x in h):
        raise ValueError("multi-index entries must be non-negative")
    multi = math.factorial(k)
    for x in h:
        multi //= math.factorial(x)
    return binom_general(s, d, k) * multi


def reachable_exponents(generators: Iterable[int], order: int, budget: int | None = None) -> list[int]:
    """Sorted sums of ``generators`` (with repetition, including 0) below ``order``."""
    gens = sorted({g for g in generators if g > 0})
    if order <= 0:
        return []
    out: list[int] = []
    heap = [0]
    seen = {0}
    while heap:
        r = heapq.heappop(heap)
        out.append(r)
        if budget is not None and len(out) > budget:
            raise CandidateBudgetError(f"more than {budget} series positions below order {order}")
        for g in gens:
            t = r + g
            if t >= order:
                break
            if t not in seen:
                seen.add(t)
                heapq.heappush(heap, t)
    return out


def _root_coefficients(fk: list[tuple[int, object]], s: int, d: int, positions: list[int],
                       div: Callable[[object, int], object]) -> dict[int, object]:
    # Miller's recurrence for F**(s/d), F_0 = 1:
    #   d*n*A_n = sum_{k>=1} ((s+d)*k - d*n) * F_k * A_{n-k}
    # `div` supplies the field division so the same loop serves Q and Z/p.
    a: dict[int, object] = {0: 1}
    sd = s + d
    for n in positions:
        if n == 0:
            continue
        acc = 0
        for k, c in fk:
            if k > n:
                break
            prev = a.get(n - k)
            if prev is not None:
                acc += (sd * k - d * n) * c * prev
        if acc:
            v = div(acc, d * n)
            if v:
                a[n] = v
    return a


def pow_fractional(fs: TruncatedSeries, s: int, d: int, N: int | None = None, *,
                   budget: int | None = None, verify: bool = True) -> TruncatedSeries:
    """``fs**(s/d)`` truncated at ``min(N, fs.order)``; ``fs`` must have constant term 1.

    With ``verify`` the result is checked against ``result**d == fs**s`` modulo
    ``y**N`` before it is returned.
    """
    if d < 1:
        raise ValueError("d must be positive")
    order = fs.order if N is None else min(N, fs.order)
    if order == 0:
        return TruncatedSeries({}, 0)
    if fs.coefficient(0) != 1:
        raise NormalizationError("fractional power needs constant term exactly 1")
    fk = [(k, c) for k, c in fs.items() if 0 < k < order]
    positions = reachable_exponents((k for k, _ in fk), order, budget)
    coeffs = _root_coefficients(fk, s, d, positions, lambda acc, q: Fraction(acc) / q)
    result = TruncatedSeries(coeffs, order)
    if verify:
        lhs = result.pow_int(d)
        rhs = fs.truncate(order).pow_int(s)
        if lhs != rhs:
            raise ArithmeticError("fractional power failed its self-check")
    return result


def _split_prefix(fs: TruncatedSeries, p: int) -> tuple[TruncatedSeries, list[tuple[int, Fraction]]]:
    items = list(fs.items())
    if not items or items[0] != (0, 1):
        raise NormalizationError("series must have constant term exactly 1")
    if p < 0 or p >= len(items):
        raise InconsistencyError(f"prefix index {p} out of range for {len(items) - 1} non-constant terms")
    return TruncatedSeries(items[: p + 1], fs.order), items[p + 1:]


def delta_split_expand(fs: TruncatedSeries, p: int, delta: TruncatedSeries, s: int, d: int,
                       N: int | None = None) -> list[tuple[Fraction, int, int]]:
    """Expand ``fs**(s/d)`` as ``sum c * delta**(s/d - k) * y**e``.

    ``delta`` is the partial sum of ``fs`` through its ``p``-th non-constant
    term, and the remaining tail ``t`` enters through
    ``(1 + t/delta)**(s/d) = sum_k binom(s/d, k) t**k delta**(-k)``.
    Returns sorted triples ``(c, k, e)`` with ``e < N``; the re-expansion is
    checked against :func:`pow_fractional` before returning.
    """
    order = fs.order if N is None else min(N, fs.order)
    prefix, tail = _split_prefix(fs, p)
    if delta.truncate(order) != prefix.truncate(order) or delta.order < order:
        raise InconsistencyError("delta is not the prefix of fs through the given index")
    tail = [(e, c) for e, c in tail if e < order]
    grouped: dict[tuple[int, int], Fraction] = {}

    def walk(idx: int, k: int, e: int, weight: Fraction, denom: int) -> None:
        # weight = prod b_i**h_i, denom = prod h_i!
        if idx == len(tail):
            key = (k, e)
            c = binom_general(s, d, k) * Fraction(math.factorial(k), denom) * weight
            grouped[key] = grouped.get(key, Fraction(0)) + c
            return
        ei, bi = tail[idx]
        h = 0
        w = weight
        while e + h * ei < order:
            walk(idx + 1, k + h, e + h * ei, w, denom * math.factorial(h))
            h += 1
            w *= bi

    walk(0, 0, 0, Fraction(1), 1)
    terms = sorted(((c, k, e) for (k, e), c in grouped.items() if c), key=lambda t: (t[1], t[2]))

    reexpanded = TruncatedSeries({}, order)
    for c, k, e in terms:
        piece = pow_fractional(delta.truncate(order - e), s - k * d, d, order - e, verify=False)
        reexpanded = reexpanded + piece.shift(e).scale(c)
    if reexpanded.truncate(order) != pow_fractional(fs, s, d, order, verify=False):
        raise ArithmeticError("delta-split expansion failed its re-expansion check")
    return terms


@dataclass(frozen=True)
class PuiseuxTail:
    """Coefficients ``c_{-1}, c_0, c_1, ...`` of ``h = c_{-1} F + c_0 + c_1/F + ...``."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs or not self.coeffs[0]:
            raise ValueError("leading Puiseux coefficient must be nonzero")

    def c(self, j: int) -> Fraction:
        return self.coeffs[j + 1]

    def __len__(self) -> int:
        return len(self.coeffs)


def rational_root(q: Fraction, d: int) -> Fraction | None:
    """The rational ``d``-th root of ``q`` (positive when ``d`` is even), if any."""
    from sympy import integer_nthroot

    if q == 0:
        return Fraction(0)
    sign = 1
    if q < 0:
        if d % 2 == 0:
            return None
        sign, q = -1, -q
    rn, exact_n = integer_nthroot(q.numerator, d)
    rd, exact_d = integer_nthroot(q.denominator, d)
    if not (exact_n and exact_d):
        return None
    return sign * Fraction(int(rn), int(rd))


def _puiseux_defect(g: DensePoly, coeffs: Sequence[Fraction], count: int) -> list[Fraction]:
    # coefficients of F^d, F^(d-1), ..., F^(d-count+1) in g(F * P(1/F))
    d = g.degree
    P = TruncatedSeries(enumerate(coeffs), count)
    powers = [TruncatedSeries.one(count)]
    for _ in range(d):
        powers.append(powers[-1] * P)
    out = []
    for k in range(count):
        acc = Fraction(0)
        for j in range(max(0, d - k), d + 1):
            b = g.coeffs[j]
            if b:
                acc += b * powers[j].coefficient(j - d + k)
        out.append(acc)
    return out


def puiseux_inverse_at_infinity(g: DensePoly, count: int) -> PuiseuxTail:
    """Solve ``g(c_{-1} F + c_0 + c_1 F**-1 + ...) = F**d + O(F**(d - count))``.

    Coefficients are matched one power of ``F`` at a time; each step is a
    linear equation in the newest unknown.
    """
    d = g.degree
    if d < 1:
        raise UndefinedInput("outer polynomial must be non-constant")
    if count < 1:
        raise ValueError("count must be positive")
    lead = rational_root(1 / g.leading_coefficient, d)
    if lead is None:
        raise NormalizationError(f"leading coefficient {g.leading_coefficient} has no rational {d}-th root")
    coeffs = [lead] + [Fraction(0)] * (count - 1)
    slope = d * g.leading_coefficient * lead ** (d - 1)
    for k in range(1, count):
        # the F^(d-k) coefficient is slope * c_{k-2} + (terms in earlier unknowns)
        residual = _puiseux_defect(g, coeffs[: k + 1], k + 1)[k]
        coeffs[k] = -residual / slope
    defect = _puiseux_defect(g, coeffs, count)
    if defect != [Fraction(1)] + [Fraction(0)] * (count - 1):
        raise ArithmeticError("Puiseux coefficients failed back-substitution")
    return PuiseuxTail(tuple(coeffs))


def reversal_series(f: SparsePoly, order: int) -> TruncatedSeries:
    """``f(x) / (lead * x**deg f)`` as a series in ``y = 1/x``."""
    m = f.degree
    lead = f.leading_coefficient
    return TruncatedSeries(((m - e, c / lead) for e, c in f), order)


def _rational_roots(g: DensePoly) -> list[Fraction]:
    y = Symbol("y")
    roots = Poly([c for c in reversed(g.coeffs)], y, domain=QQ).ground_roots()
    return sorted(Fraction(int(r.p), int(r.q)) for r in roots)


def tilde_h_truncation(f: SparsePoly, g: DensePoly, N: int | None = None) -> TruncatedSeries:
    """Series of ``x**(-m/d) * (h(x) - xi)`` in ``y = 1/x`` for the inner ``h`` forced by ``g``.

    ``h`` is the Puiseux branch ``c_{-1} f**(1/d) + c_0 + c_1 f**(-1/d) + ...``
    and ``xi`` is a rational root of ``g``: ``h(0)`` when that is a root,
    otherwise the smallest rational root.  When ``f = g(h)`` really holds, the
    result is a polynomial of degree at most ``m/d``; see :func:`exceeds_degree`.
    The default order is ``2*n + 1`` with ``n = deg f - ord_0 f``.
    """
    if f.is_zero() or f.degree == 0:
        raise UndefinedInput("f must be non-constant")
    d = g.degree
    m = f.degree
    if d < 1 or m % d:
        raise NotApplicable(f"deg g = {d} does not divide deg f = {m}")
    e = m // d
    if N is None:
        N = 2 * (m - f.low_degree) + 1
    lead = f.leading_coefficient
    g1 = g * (1 / lead)
    fs = reversal_series(f, N)
    j_max = max(-1, (N - 1) // e - 1)          # largest j with (j+1)*e < N
    tail = puiseux_inverse_at_infinity(g1, j_max + 2)
    out = pow_fractional(fs, 1, d, N, verify=False).scale(tail.c(-1))
    for j in range(0, j_max + 1):
        shift = (j + 1) * e
        if j == 0:
            piece = TruncatedSeries.one(N - shift)
        else:
            piece = pow_fractional(fs.truncate(N - shift), -j, d, N - shift, verify=False)
        out = out + piece.shift(shift).scale(tail.c(j))
    if e < N:
        h0 = out.coefficient(e)
        if g1.evaluate(h0) == 0:
            xi = h0
        else:
            roots = _rational_roots(g1)
            if not roots:
                raise IrrationalShiftError("outer polynomial has no rational root to shift by")
            xi = roots[0]
        out = out - TruncatedSeries({e: xi}, N)
    return out


def exceeds_degree(series: TruncatedSeries, degree: int) -> bool:
    """True when a known coefficient above ``degree`` is nonzero (not a polynomial of that degree)."""
    return any(k > degree for k in series.support())
