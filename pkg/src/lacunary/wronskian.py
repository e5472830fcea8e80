"""Valuations, Wronskians and the S-unit sum inequality over Q(y).

Places of the rational function field are monic irreducible polynomials over Q
plus the place at infinity.  A degree-``e`` irreducible stands for ``e``
conjugate complex places that share every valuation of a function defined over
Q, so counts and sums over places are weighted by degree.

Polynomial gcd and factorization over Q are delegated to sympy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import Poly, QQ, Symbol

from .sparse_poly import DensePoly, Number, UndefinedInput, _q

_Y = Symbol("y")


class DependenceError(ValueError):
    """The functions are linearly dependent over the constants."""


class PreconditionError(ValueError):
    """A supplied place set misses a required zero or pole."""


def _to_sympy(p: DensePoly) -> Poly:
    return Poly([c for c in reversed(p.coeffs)] or [0], _Y, domain=QQ)


def _from_sympy(P: Poly) -> DensePoly:
    return DensePoly(Fraction(int(c.p), int(c.q)) for c in reversed(P.all_coeffs()))


def poly_gcd(a: DensePoly, b: DensePoly) -> DensePoly:
    if a.is_zero():
        return b.monic() if not b.is_zero() else DensePoly()
    if b.is_zero():
        return a.monic()
    return _from_sympy(_to_sympy(a).gcd(_to_sympy(b))).monic()


class RatFunc:
    """Element of Q(y) as a reduced fraction with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: DensePoly | Sequence[Number], den: DensePoly | Sequence[Number] | None = None):
        num = num if isinstance(num, DensePoly) else DensePoly(num)
        den = DensePoly([1]) if den is None else (den if isinstance(den, DensePoly) else DensePoly(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = DensePoly(), DensePoly([1])
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        lead = den.leading_coefficient
        self.num, self.den = num * (1 / lead), den * (1 / lead)

    @classmethod
    def _reduced(cls, num: DensePoly, den: DensePoly) -> "RatFunc":
        r = object.__new__(cls)
        r.num, r.den = num, den
        return r

    @classmethod
    def constant(cls, c: Number) -> "RatFunc":
        return cls(DensePoly([c]))

    @classmethod
    def y(cls) -> "RatFunc":
        return cls(DensePoly([0, 1]))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @property
    def degree(self) -> int:
        """Degree of the function: the number of its poles with multiplicity."""
        return max(self.num.degree, self.den.degree, 0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFunc.constant(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc(({self.num}) / ({self.den}))".replace("x", "y")

    def __add__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc._reduced(-self.num, self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc | Number") -> "RatFunc":
        if not isinstance(other, RatFunc):
            c = _q(other)
            return RatFunc._reduced(self.num * c, self.den) if c else RatFunc(DensePoly())
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def derivative(self) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def to_json(self) -> dict:
        return {"num": [str(c) for c in self.num.coeffs], "den": [str(c) for c in self.den.coeffs]}

    @classmethod
    def from_json(cls, obj: object) -> "RatFunc":
        if not isinstance(obj, dict) or set(obj) - {"num", "den"} or "num" not in obj:
            raise ValueError('rational function JSON needs "num" and optional "den" coefficient lists')
        num = [_parse_q(c) for c in _as_list(obj["num"], "num")]
        den = [_parse_q(c) for c in _as_list(obj.get("den", ["1"]), "den")]
        return cls(DensePoly(num), DensePoly(den))


def _as_list(v: object, name: str) -> list:
    if not isinstance(v, list):
        raise ValueError(f'"{name}" must be a list of coefficients, low degree first')
    return v


def _parse_q(c: object) -> Fraction:
    if isinstance(c, bool):
        raise ValueError("coefficients must be rationals")
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        try:
            return Fraction(c.strip())
        except ValueError:
            pass
    raise ValueError(f"bad rational coefficient {c!r}")


@lru_cache(maxsize=4096)
def _is_irreducible(coeffs: tuple[Fraction, ...]) -> bool:
    return _to_sympy(DensePoly(coeffs)).is_irreducible


@dataclass(frozen=True)
class Place:
    """A monic irreducible ``poly`` over Q, or the place at infinity when ``poly`` is None."""

    poly: DensePoly | None = None

    def __post_init__(self) -> None:
        if self.poly is not None:
            p = self.poly
            if p.degree < 1 or p.leading_coefficient != 1:
                raise ValueError("finite places need a monic non-constant polynomial")
            if not _is_irreducible(p.coeffs):
                raise ValueError(f"{p} is not irreducible over Q")

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def sort_key(self) -> tuple:
        if self.poly is None:
            return (1, 0, ())
        return (0, self.poly.degree, self.poly.coeffs)

    def __str__(self) -> str:
        return "inf" if self.poly is None else f"({str(self.poly).replace('x', 'y')})"

    def to_json(self) -> dict:
        if self.poly is None:
            return {"kind": "infinite"}
        return {"kind": "finite", "poly": [str(c) for c in self.poly.coeffs]}

    @classmethod
    def from_json(cls, obj: object) -> "Place":
        if not isinstance(obj, dict) or obj.get("kind") not in ("finite", "infinite"):
            raise ValueError('place JSON needs "kind": "finite" or "infinite"')
        if obj["kind"] == "infinite":
            if set(obj) != {"kind"}:
                raise ValueError("infinite place takes no other fields")
            return cls(None)
        if set(obj) != {"kind", "poly"}:
            raise ValueError('finite place needs exactly "kind" and "poly"')
        return cls(DensePoly(_parse_q(c) for c in _as_list(obj["poly"], "poly")))


def finite_places(p: DensePoly) -> list[tuple[Place, int]]:
    """Irreducible factors of ``p`` as places, with multiplicities."""
    if p.degree < 1:
        return []
    _, factors = _to_sympy(p).factor_list()
    out = [(Place(_from_sympy(fac).monic()), k) for fac, k in factors]
    return sorted(out, key=lambda t: t[0].sort_key())


def valuation(f: RatFunc, v: Place) -> int:
    """Order of vanishing of ``f`` at ``v``."""
    if f.is_zero():
        raise UndefinedInput("valuation of the zero function")
    if v.is_infinite:
        return f.den.degree - f.num.degree
    return _multiplicity(f.num, v.poly) - _multiplicity(f.den, v.poly)


def _multiplicity(p: DensePoly, pi: DensePoly) -> int:
    k = 0
    while p.degree >= pi.degree:
        q, r = divmod(p, pi)
        if not r.is_zero():
            break
        p, k = q, k + 1
    return k


def _poly_det(rows: list[list[DensePoly]]) -> DensePoly:
    # Bareiss fraction-free elimination; every division below is exact
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    prev = DensePoly([1])
    for k in range(n - 1):
        if m[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if swap is None:
                return DensePoly()
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return m[n - 1][n - 1] * sign


def _common_denominator(phis: Sequence[RatFunc]) -> DensePoly:
    D = DensePoly([1])
    for phi in phis:
        g = poly_gcd(D, phi.den)
        D = D * (phi.den // g)
    return D


def wronskian_det(phis: Sequence[RatFunc]) -> RatFunc:
    """Wronskian of ``phis`` with respect to ``y``.

    Uses ``W(D*phi_1, ..., D*phi_n) = D**n * W(phi_1, ..., phi_n)`` with ``D``
    a common denominator, so the determinant is taken over polynomials.
    """
    if not phis:
        raise ValueError("need at least one function")
    n = len(phis)
    D = _common_denominator(phis)
    polys = [phi.num * (D // phi.den) for phi in phis]
    rows = []
    cur = polys
    for _ in range(n):
        rows.append(cur)
        cur = [p.derivative() for p in cur]
    return RatFunc(_poly_det(rows), D**n)


def wronskian_wrt(phis: Sequence[RatFunc], t: RatFunc) -> RatFunc:
    """Wronskian with respect to a non-constant ``t``, differentiating by ``d/dt = (1/t') d/dy``."""
    dt = t.derivative()
    if dt.is_zero():
        raise ValueError("t must be non-constant")
    n = len(phis)
    rows = [list(phis)]
    for _ in range(n - 1):
        rows.append([p.derivative() / dt for p in rows[-1]])
    return _ratfunc_det(rows)


def _ratfunc_det(rows: list[list[RatFunc]]) -> RatFunc:
    m = [list(r) for r in rows]
    n = len(m)
    det = RatFunc.constant(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if not m[i][k].is_zero()), None)
        if piv is None:
            return RatFunc(DensePoly())
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det = det * m[k][k]
        for i in range(k + 1, n):
            if m[i][k].is_zero():
                continue
            factor = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] = m[i][j] - factor * m[k][j]
    return det


def local_parameter(v: Place) -> RatFunc:
    if v.is_infinite:
        return RatFunc(DensePoly([1]), DensePoly([0, 1]))
    return RatFunc(v.poly)


def wronskian_order_sum(phis: Sequence[RatFunc]) -> tuple[int, list[tuple[Place, int]]]:
    """Degree-weighted sum of ``v(W_{t_v})`` over all places, with the per-place values.

    ``W_{t_v} = (dy/dt_v)**C(n,2) * W_y``; at a finite place ``t_v`` is the
    irreducible itself (whose derivative is a unit there) and at infinity
    ``t_v = 1/y``.  Places outside the listed ones contribute zero.  For the
    genus-0 field the total is ``-2*C(n,2)``.
    """
    n = len(phis)
    W = wronskian_det(phis)
    if W.is_zero():
        raise DependenceError("functions are linearly dependent over Q")
    pairs = math.comb(n, 2)
    places = {p for p, _ in finite_places(W.num)} | {p for p, _ in finite_places(W.den)}
    places.add(Place.infinity())
    breakdown = []
    total = 0
    for v in sorted(places, key=Place.sort_key):
        dt_dy = local_parameter(v).derivative()
        order = valuation(W, v) - pairs * valuation(dt_dy, v)
        breakdown.append((v, order))
        total += v.degree * order
    return total, breakdown


@dataclass
class PlaceDetail:
    place: Place
    v_sigma: int
    min_v: int

    @property
    def contribution(self) -> int:
        return self.place.degree * (self.v_sigma - self.min_v)

    def to_json(self) -> dict:
        return {
            "place": self.place.to_json(),
            "degree": self.place.degree,
            "v_sigma": self.v_sigma,
            "min_v": self.min_v,
            "contribution": self.contribution,
        }


@dataclass
class Prop1Report:
    lhs: int
    rhs: int
    n: int
    r: int
    s_size: int
    details: list[PlaceDetail] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "n": self.n,
            "r": self.r,
            "S_size": self.s_size,
            "places": [d.to_json() for d in self.details],
        }


def minimal_place_set(phis: Sequence[RatFunc], r: int) -> set[Place]:
    """Poles of every ``phi_i`` together with zeros of the first ``r``."""
    S: set[Place] = set()
    inf = Place.infinity()
    for i, phi in enumerate(phis):
        S.update(p for p, _ in finite_places(phi.den))
        if valuation(phi, inf) < 0:
            S.add(inf)
        if i < r:
            S.update(p for p, _ in finite_places(phi.num))
            if valuation(phi, inf) > 0:
                S.add(inf)
    return S


def verify_prop1(phis: Sequence[RatFunc], r: int = 0, S: Iterable[Place] | None = None) -> Prop1Report:
    """Evaluate both sides of the S-unit sum inequality for ``phis``.

    ``lhs = sum_{v in S} deg v * (v(sigma) - min_i v(phi_i))`` with
    ``sigma = sum phi_i``; ``rhs = C(n,2) * (#S - 2) + sum_{i > r} deg phi_i``.
    """
    n = len(phis)
    if n == 0:
        raise ValueError("need at least one function")
    if not 0 <= r <= n:
        raise ValueError(f"r must lie in [0, {n}]")
    if any(phi.is_zero() for phi in phis):
        raise DependenceError("the zero function is dependent")
    if n > 1 and wronskian_det(phis).is_zero():
        raise DependenceError("functions are linearly dependent over Q")
    needed = minimal_place_set(phis, r)
    if S is None:
        places = needed
    else:
        places = set(S)
        missing = needed - places
        if missing:
            raise PreconditionError("S misses " + ", ".join(sorted(map(str, missing))))
    sigma = phis[0]
    for phi in phis[1:]:
        sigma = sigma + phi
    details = []
    for v in sorted(places, key=Place.sort_key):
        details.append(PlaceDetail(v, valuation(sigma, v), min(valuation(phi, v) for phi in phis)))
    lhs = sum(d.contribution for d in details)
    s_size = sum(v.degree for v in places)
    rhs = math.comb(n, 2) * (s_size - 2) + sum(phi.degree for phi in phis[r:])
    return Prop1Report(lhs, rhs, n, r, s_size, details)
