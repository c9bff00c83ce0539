"""The default verification catalog."""

from __future__ import annotations

from .groups import AbelianGroup, make_group


def _partitions(k: int, largest: int | None = None):
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def _primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, int(p**0.5) + 1))]


def p_groups_upto(max_order: int) -> list[AbelianGroup]:
    """Every nontrivial abelian p-group of order <= max_order, sorted by (order, factors)."""
    out = []
    for p in _primes_upto(max_order):
        k = 1
        while p**k <= max_order:
            for part in _partitions(k):
                out.append(make_group([p**e for e in part]))
            k += 1
    return sorted(out, key=lambda G: (G.order, G.invariant_factors))


def default_catalog() -> list[AbelianGroup]:
    extra = [make_group([6]), make_group([2, 12]), make_group([3, 9])]
    groups = p_groups_upto(32)
    for G in extra:
        if G not in groups:
            groups.append(G)
    return groups
