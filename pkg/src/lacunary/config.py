"""Resource limits shared across modules."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    term_cap: int = 10**6          # max terms produced by any expanding sparse operation
    dense_cap: int = 2**16         # max degree of a dense polynomial built from sparse data
    candidate_budget: int = 10**5  # max series positions examined per divisor
    oracle_cap: int = 64           # max degree accepted by the dense decomposition oracle


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class CatalogCaps:
    l: int = 3
    ell: int = 4
    B: int = 2
    max_partitions: int = 200_000
    max_nodes: int = 2_000_000
