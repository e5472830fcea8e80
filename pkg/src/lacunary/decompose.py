"""Decomposition ``f = g(h)`` of lacunary polynomials over Q.

Candidates for the inner polynomial come from the polynomial part of
``f**(1/d)`` at infinity, one divisor ``d = deg g`` at a time.  Divisors are
limited to ``d <= 2*l*(l+1)`` where ``l`` is the number of terms of ``f``; a
proper decomposition (inner not of the form ``a*x**n + b``) never has a larger
outer degree.  Trivial decompositions ``h = x**n`` are read off the exponent gcd.

Before the exact candidate is built, a randomized screen modulo a 61-bit prime
discards divisors that provably admit no decomposition; every result returned
is verified by exact recomposition.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULT_LIMITS, Limits
from .series import (
    CandidateBudgetError,
    _root_coefficients,
    reachable_exponents,
)
from .sparse_poly import (
    CapExceeded,
    DensePoly,
    SparsePoly,
    UndefinedInput,
    compose_outer,
    exponent_gcd,
    from_dense,
    mul,
)

log = logging.getLogger(__name__)

_P = (1 << 61) - 1


@dataclass(frozen=True)
class DecompositionResult:
    outer: DensePoly
    inner: SparsePoly
    kind: str  # "trivial" or "proper"
    divisor_d: int

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "d": self.divisor_d,
            "outer": [str(c) for c in self.outer.coeffs],
            "inner": self.inner.to_json(),
        }


@dataclass
class Diagnostic:
    d: int
    status: str
    detail: str = ""

    def to_json(self) -> dict:
        return {"d": self.d, "status": self.status, "detail": self.detail}


def canonicalize(g: DensePoly, h: SparsePoly) -> tuple[DensePoly, SparsePoly]:
    """Rewrite ``g(h)`` so the inner polynomial is monic with zero constant term."""
    lam = h.leading_coefficient
    mu = h.coefficient(0)
    inner = (h - mu).scale(1 / lam)
    return g.compose(DensePoly([mu, lam])), inner


def _is_monomial(h: SparsePoly) -> bool:
    return h.term_count == 1


def _divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def trivial_decompose(f: SparsePoly, limits: Limits = DEFAULT_LIMITS) -> DecompositionResult | None:
    """``f = g(x**n)`` for the largest admissible ``n`` (``n >= 2`` and ``deg g >= 2``)."""
    if f.is_constant():
        raise UndefinedInput("f must be non-constant")
    m = f.degree
    n = exponent_gcd(f)
    if n == m:
        # f = a*x^m + c: every proper divisor of m works; keep the largest
        n = max((k for k in _divisors(m) if k < m), default=1)
    if n < 2:
        return None
    r = m // n
    if r > limits.dense_cap:
        raise CapExceeded(f"outer degree {r} exceeds dense cap {limits.dense_cap}")
    outer = DensePoly(f.coefficient(j * n) for j in range(r + 1))
    return DecompositionResult(outer, SparsePoly.monomial(1, n), "trivial", r)


def trivial_refinement(result: DecompositionResult, n: int) -> DecompositionResult:
    """The member ``(g(x**(N/n)), x**n)`` of a trivial family reported with inner ``x**N``."""
    if result.kind != "trivial":
        raise ValueError("only trivial results can be refined")
    N = result.inner.degree
    if n < 1 or N % n:
        raise ValueError(f"{n} does not divide the family exponent {N}")
    k = N // n
    coeffs = [Fraction(0)] * (result.outer.degree * k + 1)
    for j, c in enumerate(result.outer.coeffs):
        coeffs[j * k] = c
    outer = DensePoly(coeffs)
    return DecompositionResult(outer, SparsePoly.monomial(1, n), "trivial", outer.degree)


def _reversal_terms(f: SparsePoly, order: int) -> list[tuple[int, Fraction]]:
    m = f.degree
    lead = f.leading_coefficient
    return sorted((m - e, c / lead) for e, c in f if 0 < m - e < order)


def sparse_root_candidate(f: SparsePoly, d: int, budget: int | None = None) -> SparsePoly:
    """Polynomial part of ``f**(1/d)`` at infinity, for monic ``f`` with ``d | deg f``.

    Exponent ``e - n`` of the candidate carries the ``y**n`` coefficient of
    ``(f(x)/x**m)**(1/d)`` for ``n <= e = m/d``.  The constant term is included
    but is only determined up to the outer polynomial's shift.
    """
    budget = DEFAULT_LIMITS.candidate_budget if budget is None else budget
    if f.is_zero() or f.leading_coefficient != 1:
        raise ValueError("f must be monic")
    m = f.degree
    if d < 2 or m % d:
        raise ValueError(f"d = {d} must be at least 2 and divide deg f = {m}")
    e = m // d
    fk = _reversal_terms(f, e + 1)
    positions = reachable_exponents((k for k, _ in fk), e + 1, budget)
    a = _root_coefficients(fk, 1, d, positions, lambda acc, q: Fraction(acc) / q)
    return SparsePoly({e - n: c for n, c in a.items()})


def recover_outer(f: SparsePoly, h: SparsePoly, limits: Limits = DEFAULT_LIMITS) -> DensePoly | None:
    """The unique ``g`` with ``f = g(h)``, or ``None``.

    Peels ``b_j h**j`` from the top: ``b_j`` is read from the ``x**(j*deg h)``
    coefficient of the remainder, which must never exceed that degree.
    """
    if h.is_constant():
        raise UndefinedInput("inner polynomial must be non-constant")
    if f.is_zero():
        return DensePoly()
    e = h.degree
    m = f.degree
    if m % e:
        return None
    r = m // e
    if r > limits.dense_cap:
        raise CapExceeded(f"outer degree {r} exceeds dense cap {limits.dense_cap}")
    powers = [SparsePoly.constant(1)]
    for _ in range(r):
        powers.append(mul(powers[-1], h, limits.term_cap))
    lead = h.leading_coefficient
    b = [Fraction(0)] * (r + 1)
    residual = f
    for j in range(r, -1, -1):
        if residual.is_zero():
            break
        if residual.degree > j * e:
            return None
        c = residual.coefficient(j * e) / lead**j
        if c:
            b[j] = c
            residual = residual - powers[j].scale(c)
    if not residual.is_zero():
        return None
    return DensePoly(b)


# --- modular screen -------------------------------------------------------

def _modp(c: Fraction) -> int | None:
    if c.denominator % _P == 0:
        return None
    return c.numerator % _P * pow(c.denominator, -1, _P) % _P


def _horner_modp(dense: list[int], t: int) -> int:
    acc = 0
    for c in reversed(dense):
        acc = (acc * t + c) % _P
    return acc


def _sparse_eval_modp(terms: list[tuple[int, int]], t: int) -> int:
    return sum(c * pow(t, e, _P) for e, c in terms) % _P


def _polmulmod(a: list[int], b: list[int], mod: list[int]) -> list[int]:
    # product of a and b reduced modulo the monic polynomial `mod`
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    k = len(mod) - 1
    for i in range(len(out) - 1, k - 1, -1):
        c = out[i] % _P
        if c:
            for j in range(k):
                out[i - k + j] -= c * mod[j]
        out[i] = 0
    res = [v % _P for v in out[:k]]
    while res and not res[-1]:
        res.pop()
    return res


def _points_fit_degree(xs: list[int], ys: list[int], d: int) -> bool:
    # Newton divided differences: the points lie on a polynomial of degree <= d
    # iff every difference of order > d vanishes.
    coef = list(ys)
    n = len(xs)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            num = coef[i] - coef[i - 1]
            den = xs[i] - xs[i - level]
            coef[i] = num % _P * pow(den % _P, -1, _P) % _P
    return all(c == 0 for c in coef[d + 1:])


def _modular_screen(f: SparsePoly, d: int, budget: int, rng: random.Random) -> bool:
    """False only when no ``g`` of degree ``d`` has ``f = g(h)`` for any ``h``."""
    m = f.degree
    e = m // d
    fmod = []
    for ex, c in f:
        v = _modp(c)
        if v is None:
            return True
        fmod.append((ex, v))
    fk = [(k, v) for k, v in ((m - ex, c) for ex, c in fmod) if 0 < k <= e]
    fk.sort()
    positions = reachable_exponents((k for k, _ in fk), e + 1, budget)
    a = _root_coefficients(fk, 1, d, positions,
                           lambda acc, q: acc % _P * pow(q, -1, _P) % _P)
    hdense = [0] * (e + 1)
    for n, c in a.items():
        if n < e:
            hdense[e - n] = c
    if d <= e:
        # interpolate through d + 3 points with distinct inner values
        xs: list[int] = []
        ys: list[int] = []
        seen: set[int] = set()
        while len(xs) < d + 3:
            t = rng.randrange(1, _P)
            u = _horner_modp(hdense, t)
            if u in seen:
                continue
            seen.add(u)
            xs.append(u)
            ys.append(_sparse_eval_modp(fmod, t))
        return _points_fit_degree(xs, ys, d)
    # small inner degree: f must be constant modulo h(x) - h(t)
    t = rng.randrange(1, _P)
    mod = list(hdense)
    mod[0] = (mod[0] - _horner_modp(hdense, t)) % _P
    acc: list[int] = []
    cur, prev = [1], 0
    for ex, c in sorted(fmod):
        cur = _polmulmod(cur, _xpow_mod(ex - prev, mod), mod)
        prev = ex
        for i, v in enumerate(cur):
            if i == len(acc):
                acc.append(0)
            acc[i] = (acc[i] + c * v) % _P
    while acc and not acc[-1]:
        acc.pop()
    return len(acc) <= 1


def _xpow_mod(k: int, mod: list[int]) -> list[int]:
    result, base = [1], [0, 1]
    while k:
        if k & 1:
            result = _polmulmod(result, base, mod)
        k >>= 1
        if k:
            base = _polmulmod(base, base, mod)
    return result


# --- drivers --------------------------------------------------------------

def sparse_decompose(f: SparsePoly, limits: Limits = DEFAULT_LIMITS,
                     diagnostics: list[Diagnostic] | None = None,
                     screen: bool = True) -> list[DecompositionResult]:
    """All decompositions of ``f`` up to canonical normalization, sorted by ``deg g``.

    The trivial family is reported once, with the largest admissible ``n``;
    divisors of ``n`` give further trivial decompositions that are not listed.
    Budget exhaustion at a divisor is recorded in ``diagnostics`` and the search
    continues with the next divisor.
    """
    if f.is_constant():
        raise UndefinedInput("f must be non-constant")
    m = f.degree
    l = f.term_count
    bound = min(2 * l * (l + 1), m // 2)
    lead = f.leading_coefficient
    fm = f.scale(1 / lead)
    rng = random.Random(0x5EED ^ m)
    results: list[DecompositionResult] = []

    triv = trivial_decompose(f, limits)
    if triv is not None:
        results.append(triv)

    for d in _divisors(m):
        if d < 2 or d > bound:
            continue
        try:
            if screen and not _modular_screen(fm, d, limits.candidate_budget, rng):
                continue
            h = sparse_root_candidate(fm, d, limits.candidate_budget)
        except CandidateBudgetError as exc:
            if diagnostics is not None:
                diagnostics.append(Diagnostic(d, "budget-exceeded", str(exc)))
            log.info("divisor %d: candidate budget exhausted", d)
            continue
        h = h - h.coefficient(0)
        if _is_monomial(h):
            continue  # covered by the trivial family
        g = recover_outer(f, h, limits)
        if g is None:
            continue
        results.append(DecompositionResult(g, h, "proper", d))
        log.debug("proper decomposition at d=%d, inner terms=%d", d, h.term_count)

    for res in results:
        if compose_outer(res.outer, res.inner, limits.term_cap) != f:
            raise AssertionError(f"decomposition at d={res.divisor_d} does not recompose")
    results.sort(key=lambda r: (r.divisor_d, r.kind))
    return results


def dense_decompose_oracle(f: DensePoly, cap: int | None = None) -> list[DecompositionResult]:
    """Exhaustive dense decomposition for small degrees, used as an independent check.

    For each inner degree ``s`` the monic, constant-free inner polynomial is
    fixed by matching the top ``s - 1`` coefficients of ``h**r`` against ``f``
    one unknown at a time; the outer polynomial comes from repeated division.
    """
    cap = DEFAULT_LIMITS.oracle_cap if cap is None else cap
    m = f.degree
    if m < 1:
        raise UndefinedInput("f must be non-constant")
    if m > cap:
        raise CapExceeded(f"degree {m} exceeds oracle cap {cap}")
    fm = f.monic()
    out = []
    for s in _divisors(m):
        r = m // s
        if s < 2 or r < 2:
            continue
        hc = [Fraction(0)] * (s + 1)
        hc[s] = Fraction(1)
        for k in range(1, s):
            hc[s - k] = Fraction(0)
            cur = _top_coefficient_of_power(hc, s, r, k)
            hc[s - k] = (fm.coeffs[m - k] - cur) / r
        h = DensePoly(hc)
        g = _outer_by_division(f, h)
        if g is None:
            continue
        inner = from_dense(h)
        kind = "trivial" if _is_monomial(inner) else "proper"
        out.append(DecompositionResult(g, inner, kind, r))
    return out


def _top_coefficient_of_power(hc: list[Fraction], s: int, r: int, k: int) -> Fraction:
    # coefficient of x^(r*s - k) in h^r, from the top k+1 coefficients of h
    top = [hc[s - i] for i in range(k + 1)]   # top[i] = coeff of x^(s-i)
    acc = [Fraction(1)] + [Fraction(0)] * k
    for _ in range(r):
        nxt = [Fraction(0)] * (k + 1)
        for i, a in enumerate(acc):
            if a:
                for j in range(k + 1 - i):
                    if top[j]:
                        nxt[i + j] += a * top[j]
        acc = nxt
    return acc[k]


def _outer_by_division(f: DensePoly, h: DensePoly) -> DensePoly | None:
    coeffs = []
    rest = f
    while rest.degree >= h.degree:
        q, rem = divmod(rest, h)
        if rem.degree > 0:
            return None
        coeffs.append(rem.coeffs[0] if rem.coeffs else Fraction(0))
        rest = q
    if rest.degree > 0:
        return None
    coeffs.append(rest.coeffs[0] if rest.coeffs else Fraction(0))
    return DensePoly(coeffs)
