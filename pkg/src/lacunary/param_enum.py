"""Finite parametric catalog of decompositions ``f = g(h1/h2)`` of l-term polynomials.

Writing ``f = sum a_i x^m_i``, ``g = sum_{j<=ell} b_j x^j`` and
``h_r = sum_{k<=B} c_{r,k} x^{n_{r,k}}``, the cleared identity

    h2**ell * f - sum_j b_j * h1**j * h2**(ell-j) = 0

expands into terms ``gamma * x**mu`` whose coefficients ``gamma`` are monomials
in the a, b, c symbols and whose degrees ``mu`` are non-negative integer forms
in the m, n exponent variables.  Any concrete identity groups its terms by
equal degree; each grouping gives

* a homogeneous integer system (equal degrees inside each group) whose
  solutions form a subgroup of the exponent space, and
* one polynomial equation per group (its coefficients cancel).

The catalog lists every grouping that is consistent with strict separation
between groups, with its lattice basis and its equations.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .config import DEFAULT_LIMITS, CatalogCaps, Limits
from .decompose import sparse_decompose
from .lattice import coordinates, hnf, integer_kernel
from .sparse_poly import DensePoly, Number, SparsePoly, _q, exact_divide, mul, power

log = logging.getLogger(__name__)

SCHEMA = "lacunary.catalog/1"


class SizeGuardError(RuntimeError):
    """A combinatorial guard (term, partition or search-node count) was exceeded."""


class InvalidPoint(ValueError):
    """A coefficient point does not satisfy the partition's equations."""


class LaurentRejected(ValueError):
    """The lattice point gives a negative exponent."""


@dataclass(frozen=True)
class Shape:
    l: int
    ell: int
    B: int

    @property
    def coefficient_symbols(self) -> tuple[str, ...]:
        return (tuple(f"a{i}" for i in range(1, self.l + 1))
                + tuple(f"b{j}" for j in range(self.ell + 1))
                + tuple(f"c{r}_{k}" for r in (1, 2) for k in range(1, self.B + 1)))

    @property
    def exponent_variables(self) -> tuple[str, ...]:
        return (tuple(f"m{i}" for i in range(1, self.l + 1))
                + tuple(f"n{r}_{k}" for r in (1, 2) for k in range(1, self.B + 1)))

    def a_index(self, i: int) -> int:
        return i

    def b_index(self, j: int) -> int:
        return self.l + j

    def c_index(self, r: int, k: int) -> int:
        return self.l + self.ell + 1 + (r - 1) * self.B + k

    def m_index(self, i: int) -> int:
        return i

    def n_index(self, r: int, k: int) -> int:
        return self.l + (r - 1) * self.B + k

    def to_json(self) -> dict:
        return {"l": self.l, "ell": self.ell, "B": self.B}


@dataclass(frozen=True)
class LinearForm:
    """Integer linear form over the exponent variables."""

    coeffs: tuple[int, ...]

    def evaluate(self, w: Sequence[int]) -> int:
        return sum(c * x for c, x in zip(self.coeffs, w))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def render(self, names: Sequence[str]) -> str:
        parts = [(n if c == 1 else f"{c}*{n}") for c, n in zip(self.coeffs, names) if c]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class SymbolicTerm:
    scalar: Fraction
    monomial: tuple[int, ...]   # exponents over Shape.coefficient_symbols
    degree: LinearForm

    def coefficient_string(self, symbols: Sequence[str]) -> str:
        return _render_monomial(self.scalar, self.monomial, symbols)

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        acc = self.scalar
        for x, k in zip(values, self.monomial):
            if k:
                acc *= x**k
        return acc


def _render_monomial(scalar: Fraction, monomial: Sequence[int], symbols: Sequence[str]) -> str:
    factors = [(s if k == 1 else f"{s}^{k}") for s, k in zip(symbols, monomial) if k]
    body = "*".join(factors)
    if not body:
        return str(scalar)
    if scalar == 1:
        return body
    if scalar == -1:
        return "-" + body
    return f"{scalar}*{body}"


def _compositions(total: int, parts: int):
    """Exponent vectors of length ``parts`` summing to ``total``, lexicographically descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multinomial(hs: Sequence[int]) -> int:
    out = math.factorial(sum(hs))
    for h in hs:
        out //= math.factorial(h)
    return out


def expand_master_identity(l: int, ell: int, B: int, caps: CatalogCaps = CatalogCaps(),
                           override: bool = False) -> list[SymbolicTerm]:
    """All terms of ``h2**ell * f - sum_j b_j h1**j h2**(ell-j)`` with multinomial scalars."""
    if l < 1 or ell < 2 or B < 1:
        raise ValueError("need l >= 1, ell >= 2, B >= 1")
    if not override and (l > caps.l or ell > caps.ell or B > caps.B):
        raise SizeGuardError(f"(l, ell, B) = ({l}, {ell}, {B}) exceeds caps ({caps.l}, {caps.ell}, {caps.B})")
    shape = Shape(l, ell, B)
    nsym = len(shape.coefficient_symbols)
    nvar = len(shape.exponent_variables)
    terms: list[SymbolicTerm] = []

    def power_part(r: int, hs: Sequence[int], mono: list[int], deg: list[int]) -> None:
        for k, h in enumerate(hs, start=1):
            mono[shape.c_index(r, k) - 1] += h
            deg[shape.n_index(r, k) - 1] += h

    for i in range(1, l + 1):
        for hs in _compositions(ell, B):
            mono, deg = [0] * nsym, [0] * nvar
            power_part(2, hs, mono, deg)
            mono[shape.a_index(i) - 1] += 1
            deg[shape.m_index(i) - 1] += 1
            terms.append(SymbolicTerm(Fraction(_multinomial(hs)), tuple(mono), LinearForm(tuple(deg))))
    for j in range(ell + 1):
        for h1 in _compositions(j, B):
            for h2 in _compositions(ell - j, B):
                mono, deg = [0] * nsym, [0] * nvar
                power_part(1, h1, mono, deg)
                power_part(2, h2, mono, deg)
                mono[shape.b_index(j)] += 1
                scalar = -Fraction(_multinomial(h1) * _multinomial(h2))
                terms.append(SymbolicTerm(scalar, tuple(mono), LinearForm(tuple(deg))))
    return terms


@dataclass(frozen=True)
class PartitionScheme:
    groups: tuple[tuple[int, ...], ...]

    def group_of(self) -> dict[int, int]:
        return {t: g for g, members in enumerate(self.groups) for t in members}

    def to_json(self) -> list[list[int]]:
        return [list(g) for g in self.groups]


class _RowSpace:
    """Rational row space kept in insertion-order echelon form."""

    __slots__ = ("rows",)

    def __init__(self, rows: list[tuple[int, list[Fraction]]] | None = None):
        self.rows = rows or []

    def copy(self) -> "_RowSpace":
        return _RowSpace(list(self.rows))

    def reduce(self, v: Sequence[int | Fraction]) -> list[Fraction]:
        v = [Fraction(x) for x in v]
        for piv, row in self.rows:
            c = v[piv]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def add(self, v: Sequence[int]) -> bool:
        r = self.reduce(v)
        piv = next((k for k, a in enumerate(r) if a), None)
        if piv is None:
            return False
        lead = r[piv]
        self.rows.append((piv, [a / lead for a in r]))
        return True


@dataclass
class EnumerationStats:
    partitions: int = 0
    pruned: int = 0
    nodes: int = 0


def enumerate_partitions(terms: Sequence[SymbolicTerm], caps: CatalogCaps = CatalogCaps(),
                         stats: EnumerationStats | None = None, prune: bool = True) -> list[PartitionScheme]:
    """Set partitions of the terms whose groups can have pairwise distinct degrees.

    A branch is cut as soon as the equalities imposed so far force two
    different groups to share a degree for every solution; such groupings can
    only occur as a coarser partition, which is enumerated separately.  With
    ``prune=False`` every set partition is returned.
    """
    if not terms:
        raise ValueError("need at least one term")
    stats = stats if stats is not None else EnumerationStats()
    forms = [t.degree.coeffs for t in terms]
    n = len(terms)
    out: list[PartitionScheme] = []

    def forced_merge(space: _RowSpace, reps: list[int], only: int | None = None) -> bool:
        if not prune:
            return False
        pairs = ([(only, r) for r in reps if r != only] if only is not None
                 else itertools.combinations(reps, 2))
        for a, b in pairs:
            if space.contains([x - y for x, y in zip(forms[a], forms[b])]):
                return True
        return False

    def rec(i: int, groups: list[list[int]], space: _RowSpace) -> None:
        stats.nodes += 1
        if stats.nodes > caps.max_nodes:
            raise SizeGuardError(f"partition search exceeded {caps.max_nodes} nodes")
        if i == n:
            out.append(PartitionScheme(tuple(tuple(g) for g in groups)))
            if len(out) > caps.max_partitions:
                raise SizeGuardError(f"more than {caps.max_partitions} partitions")
            return
        reps = [g[0] for g in groups]
        for gi, g in enumerate(groups):
            sub = space.copy()
            changed = sub.add([x - y for x, y in zip(forms[i], forms[g[0]])])
            if changed and forced_merge(sub, reps):
                stats.pruned += 1
                continue
            g.append(i)
            rec(i + 1, groups, sub)
            g.pop()
        if forced_merge(space, reps + [i], only=i):
            stats.pruned += 1
        else:
            groups.append([i])
            rec(i + 1, groups, space)
            groups.pop()

    rec(0, [], _RowSpace())
    stats.partitions = len(out)
    if stats.pruned:
        log.info("pruned %d branches whose groups were forced to merge", stats.pruned)
    return out


@dataclass(frozen=True)
class ExponentLattice:
    """Integer solutions ``w = sum_j u_j * basis_j`` of a degree-equality system."""

    shape: Shape
    basis: tuple[tuple[int, ...], ...]   # p rows over Shape.exponent_variables, Hermite form

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def alpha(self) -> list[list[int]]:
        """l x p matrix: ``m_i = sum_j alpha[i][j] * u_j``."""
        return [[row[i] for row in self.basis] for i in range(self.shape.l)]

    @property
    def beta(self) -> list[list[list[int]]]:
        """2 x B x p array: ``n_{r,k} = sum_j beta[r][k][j] * u_j``."""
        return [[[row[self.shape.n_index(r, k) - 1] for row in self.basis]
                 for k in range(1, self.shape.B + 1)] for r in (1, 2)]

    def exponents(self, u: Sequence[int]) -> tuple[int, ...]:
        if len(u) != self.rank:
            raise ValueError(f"expected {self.rank} parameters, got {len(u)}")
        nvar = len(self.shape.exponent_variables)
        return tuple(sum(uj * row[v] for uj, row in zip(u, self.basis)) for v in range(nvar))

    def parameters(self, w: Sequence[int]) -> list[int] | None:
        """Inverse of :meth:`exponents`; None when ``w`` is not in the lattice."""
        if self.rank == 0:
            return [] if not any(w) else None
        return coordinates(self.basis, w)

    def to_json(self) -> dict:
        return {"rank": self.rank, "alpha": self.alpha, "beta": self.beta,
                "basis": [list(r) for r in self.basis]}


def solve_degree_system(partition: PartitionScheme, terms: Sequence[SymbolicTerm],
                        shape: Shape) -> ExponentLattice | None:
    """Lattice of exponent vectors making degrees equal inside every group.

    Non-negativity is not imposed here.  Returns None only when the system has
    the zero solution alone while the partition has several groups.
    """
    nvar = len(shape.exponent_variables)
    rows = []
    for g in partition.groups:
        rep = terms[g[0]].degree
        rows.extend(list((terms[t].degree - rep).coeffs) for t in g[1:])
    basis = integer_kernel(rows, nvar)
    if not basis and len(partition.groups) > 1:
        return None
    return ExponentLattice(shape, tuple(tuple(r) for r in hnf(basis)))


@dataclass(frozen=True)
class CoeffEquation:
    group: tuple[int, ...]
    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]   # (scalar, monomial), merged
    a_indices: tuple[int, ...]                            # 1-based a_i present in the group

    @property
    def kind(self) -> str:
        return "match" if self.a_indices else "vanish"

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        acc = Fraction(0)
        for scalar, mono in self.terms:
            v = scalar
            for x, k in zip(values, mono):
                if k:
                    v *= x**k
            acc += v
        return acc

    def render(self, symbols: Sequence[str]) -> str:
        parts = [_render_monomial(s, m, symbols) for s, m in self.terms]
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} = 0"


@dataclass(frozen=True)
class CoeffSystem:
    shape: Shape
    equations: tuple[CoeffEquation, ...]

    def violations(self, point: Mapping[str, Number]) -> list[CoeffEquation]:
        values = point_values(self.shape, point)
        return [eq for eq in self.equations if eq.evaluate(values)]

    def rendered(self) -> list[str]:
        return [eq.render(self.shape.coefficient_symbols) for eq in self.equations]


def point_values(shape: Shape, point: Mapping[str, Number]) -> list[Fraction]:
    symbols = shape.coefficient_symbols
    missing = [s for s in symbols if s not in point]
    extra = [s for s in point if s not in symbols]
    if missing or extra:
        raise ValueError(f"point must assign exactly {symbols}; missing {missing}, unknown {extra}")
    return [_q(point[s]) for s in symbols]


def coefficient_system(partition: PartitionScheme, terms: Sequence[SymbolicTerm], shape: Shape) -> CoeffSystem:
    """One equation per group: the group's coefficients sum to zero.

    Groups holding an ``a_i`` term are tagged ``match``: they tie a term of
    ``f`` to the composition side rather than forcing cancellation.
    """
    eqs = []
    for g in partition.groups:
        merged: dict[tuple[int, ...], Fraction] = {}
        a_idx = set()
        for t in g:
            term = terms[t]
            merged[term.monomial] = merged.get(term.monomial, Fraction(0)) + term.scalar
            for i in range(1, shape.l + 1):
                if term.monomial[shape.a_index(i) - 1]:
                    a_idx.add(i)
        items = tuple((c, m) for m, c in merged.items() if c)
        eqs.append(CoeffEquation(tuple(g), items, tuple(sorted(a_idx))))
    return CoeffSystem(shape, tuple(eqs))


@dataclass(frozen=True)
class CatalogEntry:
    partition: PartitionScheme
    lattice: ExponentLattice
    system: CoeffSystem

    def to_json(self) -> dict:
        symbols = self.lattice.shape.coefficient_symbols
        return {
            "partition": self.partition.to_json(),
            "lattice": self.lattice.to_json(),
            "equations": [
                {"group": list(eq.group), "kind": eq.kind, "a": list(eq.a_indices),
                 "equation": eq.render(symbols)}
                for eq in self.system.equations
            ],
        }


@dataclass
class Catalog:
    shape: Shape
    terms: list[SymbolicTerm]
    entries: list[CatalogEntry]
    stats: EnumerationStats = field(default_factory=EnumerationStats)

    def find(self, groups: Sequence[Sequence[int]]) -> CatalogEntry | None:
        key = tuple(tuple(g) for g in groups)
        if not hasattr(self, "_index"):
            self._index = {e.partition.groups: e for e in self.entries}
        return self._index.get(key)

    def to_json(self) -> dict:
        symbols = self.shape.coefficient_symbols
        names = self.shape.exponent_variables
        return {
            "schema": SCHEMA,
            "params": self.shape.to_json(),
            "coefficient_symbols": list(symbols),
            "exponent_variables": list(names),
            "terms": [
                {"index": i, "coefficient": t.coefficient_string(symbols),
                 "degree": t.degree.render(names), "degree_vector": list(t.degree.coeffs)}
                for i, t in enumerate(self.terms)
            ],
            "entries": [e.to_json() for e in self.entries],
            "stats": {"partitions": self.stats.partitions, "pruned_branches": self.stats.pruned,
                      "search_nodes": self.stats.nodes},
        }


def build_catalog(l: int, ell: int, B: int, caps: CatalogCaps = CatalogCaps(),
                  override: bool = False) -> Catalog:
    shape = Shape(l, ell, B)
    terms = expand_master_identity(l, ell, B, caps, override)
    stats = EnumerationStats()
    entries = []
    for part in enumerate_partitions(terms, caps, stats):
        lattice = solve_degree_system(part, terms, shape)
        if lattice is None:
            continue
        entries.append(CatalogEntry(part, lattice, coefficient_system(part, terms, shape)))
    entries.sort(key=lambda e: e.partition.groups)
    return Catalog(shape, terms, entries, stats)


@dataclass(frozen=True)
class Instance:
    f: SparsePoly
    g: DensePoly
    h1: SparsePoly
    h2: SparsePoly

    def inner(self) -> SparsePoly | None:
        """``h1 / h2`` when it is a polynomial."""
        if self.h2.is_zero():
            return None
        return exact_divide(self.h1, self.h2)


def _sparse_from(coeffs: Sequence[Fraction], exps: Sequence[int]) -> SparsePoly:
    return SparsePoly(list(zip(exps, coeffs)))


def identity_residual(shape: Shape, f: SparsePoly, b: Sequence[Fraction], h1: SparsePoly,
                      h2: SparsePoly, limits: Limits = DEFAULT_LIMITS) -> SparsePoly:
    """``h2**ell * f - sum_j b_j h1**j h2**(ell-j)``."""
    ell = shape.ell
    p1 = [SparsePoly.constant(1)]
    p2 = [SparsePoly.constant(1)]
    for _ in range(ell):
        p1.append(mul(p1[-1], h1, limits.term_cap))
        p2.append(mul(p2[-1], h2, limits.term_cap))
    acc = mul(p2[ell], f, limits.term_cap)
    for j, bj in enumerate(b):
        if bj:
            acc = acc - mul(p1[j], p2[ell - j], limits.term_cap).scale(bj)
    return acc


def instantiate(entry: CatalogEntry, point: Mapping[str, Number], u: Sequence[int],
                limits: Limits = DEFAULT_LIMITS) -> Instance:
    """Concrete ``f, g, h1, h2`` from a coefficient point and lattice parameters.

    The point must satisfy every equation of the entry and the exponents must
    be non-negative; the master identity is then checked exactly.
    """
    shape = entry.lattice.shape
    values = point_values(shape, point)
    bad = entry.system.violations(point)
    if bad:
        raise InvalidPoint("point violates: " + "; ".join(eq.render(shape.coefficient_symbols) for eq in bad))
    w = entry.lattice.exponents(u)
    if any(x < 0 for x in w):
        raise LaurentRejected(f"negative exponent in {dict(zip(shape.exponent_variables, w))}")
    l, ell, B = shape.l, shape.ell, shape.B
    a = values[:l]
    b = values[l:l + ell + 1]
    c1 = values[l + ell + 1:l + ell + 1 + B]
    c2 = values[l + ell + 1 + B:]
    m = w[:l]
    n1 = w[l:l + B]
    n2 = w[l + B:]
    f = _sparse_from(a, m)
    h1 = _sparse_from(c1, n1)
    h2 = _sparse_from(c2, n2)
    if not identity_residual(shape, f, b, h1, h2, limits).is_zero():
        raise AssertionError("valid point and lattice parameters failed the master identity")
    return Instance(f, DensePoly(b), h1, h2)


@dataclass(frozen=True)
class ConcreteIdentity:
    """Coefficients and exponents of one instance of the master identity."""

    a: tuple[Fraction, ...]
    m: tuple[int, ...]
    b: tuple[Fraction, ...]
    c1: tuple[Fraction, ...]
    n1: tuple[int, ...]
    c2: tuple[Fraction, ...]
    n2: tuple[int, ...]

    @property
    def shape(self) -> Shape:
        return Shape(len(self.a), len(self.b) - 1, len(self.c1))

    def point(self) -> dict[str, Fraction]:
        return dict(zip(self.shape.coefficient_symbols, self.a + self.b + self.c1 + self.c2))

    def exponents(self) -> tuple[int, ...]:
        return self.m + self.n1 + self.n2

    def holds(self) -> bool:
        s = self.shape
        return identity_residual(s, _sparse_from(self.a, self.m), self.b,
                                 _sparse_from(self.c1, self.n1), _sparse_from(self.c2, self.n2)).is_zero()


def natural_partition(terms: Sequence[SymbolicTerm], w: Sequence[int]) -> PartitionScheme:
    """Group term indices by their degree at the exponent vector ``w``."""
    by_degree: dict[int, list[int]] = {}
    for i, t in enumerate(terms):
        by_degree.setdefault(t.degree.evaluate(w), []).append(i)
    return PartitionScheme(tuple(sorted(tuple(g) for g in by_degree.values())))


def locate(catalog: Catalog, identity: ConcreteIdentity) -> tuple[CatalogEntry, list[int]] | None:
    """Catalog entry and lattice parameters reproducing ``identity``, if present."""
    if identity.shape != catalog.shape:
        raise ValueError(f"identity shape {identity.shape} differs from catalog shape {catalog.shape}")
    w = identity.exponents()
    part = natural_partition(catalog.terms, w)
    entry = catalog.find(part.groups)
    if entry is None:
        return None
    if entry.system.violations(identity.point()):
        return None
    u = entry.lattice.parameters(w)
    if u is None:
        return None
    return entry, u


# --- Corollary ------------------------------------------------------------

def _check_corollary_input(a: Sequence[Number], m: Sequence[int]) -> None:
    if len(a) != len(m) or not a:
        raise ValueError("a and m must be nonempty and of equal length")
    if any(_q(x) == 0 for x in a):
        raise ValueError("coefficients must be nonzero")
    if any(x <= 0 for x in m) or any(x <= y for x, y in zip(m, m[1:])):
        raise ValueError("exponents must be positive and strictly decreasing")


def corollary_membership(a: Sequence[Number], m: Sequence[int], limits: Limits = DEFAULT_LIMITS) -> bool:
    """Whether ``sum a_i x**m_i`` is a composition of two polynomials of degree > 1."""
    _check_corollary_input(a, m)
    f = SparsePoly(zip(m, a))
    return bool(sparse_decompose(f, limits))


@dataclass
class BoxScan:
    a: tuple[Fraction, ...]
    box: int
    members: list[tuple[int, ...]]
    scanned: int
    closure_checks: int
    closure_violations: list[tuple[tuple[int, ...], int]]

    def to_json(self) -> dict:
        return {
            "a": [str(x) for x in self.a],
            "box": self.box,
            "scanned": self.scanned,
            "members": [list(m) for m in self.members],
            "closure": {"checks": self.closure_checks,
                        "violations": [{"m": list(m), "t": t} for m, t in self.closure_violations]},
        }


def corollary_box_scan(a: Sequence[Number], box: int = 12, limits: Limits = DEFAULT_LIMITS,
                       max_points: int = 200_000) -> BoxScan:
    """Every decomposable exponent vector with ``box >= m_1 > ... > m_l >= 1``.

    Also checks closure under positive integer multiples inside the box.
    """
    a = tuple(_q(x) for x in a)
    if not a or any(x == 0 for x in a):
        raise ValueError("coefficients must be nonempty and nonzero")
    if box < len(a):
        raise ValueError("box too small for strictly decreasing positive exponents")
    total = math.comb(box, len(a))
    if total > max_points:
        raise SizeGuardError(f"{total} exponent vectors exceed the scan guard {max_points}")
    members = []
    scanned = 0
    for combo in itertools.combinations(range(box, 0, -1), len(a)):
        scanned += 1
        if corollary_membership(a, combo, limits):
            members.append(combo)
    members.sort()
    member_set = set(members)
    checks, violations = 0, []
    for mv in members:
        t = 2
        while t * mv[0] <= box:
            checks += 1
            if tuple(t * x for x in mv) not in member_set:
                violations.append((mv, t))
            t += 1
    return BoxScan(a, box, members, scanned, checks, violations)
