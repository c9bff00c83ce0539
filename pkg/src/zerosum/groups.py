"""Finite abelian groups in invariant-factor form.

Elements are addressed by a canonical integer index: the mixed-radix value of
the coordinate vector, so index order is lexicographic coordinate order and
index 0 is the identity.  Every table-driven part of the package (DP kernels,
certificates, orbit computations) works with these indices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import GroupTooLarge, IncompatibleElement, InvalidFactor, SymmetryDisabled

ENUMERATION_CAP = 4096
SYMMETRY_CAP = 64


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def normalize_factors(factors: Iterable[int]) -> tuple[int, ...]:
    """Return the invariant factors n_1 | ... | n_r of C_{f_1} + ... + C_{f_k}."""
    powers: dict[int, list[int]] = {}
    for f in factors:
        if isinstance(f, bool) or not isinstance(f, (int, np.integer)) or f <= 1:
            raise InvalidFactor(f"invalid cyclic factor {f!r}; factors must be integers >= 2")
        for p, e in _factorize(int(f)).items():
            powers.setdefault(p, []).append(p**e)
    if not powers:
        return ()
    for plist in powers.values():
        plist.sort(reverse=True)
    rank = max(len(v) for v in powers.values())
    # k-th largest invariant factor is the product of the k-th largest prime powers
    inv = []
    for k in range(rank):
        prod = 1
        for plist in powers.values():
            if k < len(plist):
                prod *= plist[k]
        inv.append(prod)
    return tuple(reversed(inv))


@dataclass(frozen=True)
class AbelianGroup:
    """C_{n_1} + ... + C_{n_r} with 1 < n_1 | ... | n_r.

    Build instances with :func:`make_group`; the constructor assumes the
    factors are already normalized.
    """

    invariant_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        f = self.invariant_factors
        if any(x <= 1 for x in f) or any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise InvalidFactor(f"{f} is not a divisibility chain; use make_group()")

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    def __str__(self) -> str:
        return ",".join(str(n) for n in self.invariant_factors)

    def pretty(self) -> str:
        if not self.invariant_factors:
            return "C_1"
        return "+".join(f"C_{n}" for n in self.invariant_factors)

    @cached_property
    def _weights(self) -> tuple[int, ...]:
        w = []
        acc = 1
        for n in reversed(self.invariant_factors):
            w.append(acc)
            acc *= n
        return tuple(reversed(w))

    # -- element <-> index ------------------------------------------------

    def index_of(self, coords: Sequence[int]) -> int:
        if len(coords) != self.rank:
            raise IncompatibleElement(f"element {tuple(coords)} has rank {len(coords)}, group rank is {self.rank}")
        return sum((c % n) * w for c, n, w in zip(coords, self.invariant_factors, self._weights))

    def coords_of(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.order:
            raise IncompatibleElement(f"index {index} out of range for group of order {self.order}")
        out = []
        for n, w in zip(self.invariant_factors, self._weights):
            out.append((index // w) % n)
        return tuple(out)

    def element(self, *coords: int) -> "GroupElement":
        if len(coords) != self.rank:
            raise IncompatibleElement(f"coords {coords} do not match rank {self.rank}")
        return GroupElement(self, tuple(c % n for c, n in zip(coords, self.invariant_factors)))

    def element_order(self, index: int) -> int:
        order = 1
        for c, n in zip(self.coords_of(index), self.invariant_factors):
            order = math.lcm(order, n // math.gcd(c, n))
        return order

    # -- tables (enumeration-capped) ---------------------------------------

    def check_enumerable(self, cap: int | None = None) -> None:
        cap = ENUMERATION_CAP if cap is None else cap
        if self.order > cap:
            raise GroupTooLarge(f"group {self.pretty()} of order {self.order} exceeds enumeration cap {cap}")

    @cached_property
    def coords_array(self) -> np.ndarray:
        """(|G|, r) array of coordinates in canonical index order."""
        self.check_enumerable()
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(n) for n in self.invariant_factors], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def _encode(self, coords: np.ndarray) -> np.ndarray:
        if self.rank == 0:
            return np.zeros(coords.shape[:-1], dtype=np.int64)
        mods = np.asarray(self.invariant_factors, dtype=np.int64)
        return ((coords % mods) * np.asarray(self._weights, dtype=np.int64)).sum(axis=-1)

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords_array
        return self._encode(c[:, None, :] + c[None, :, :]).astype(np.int32)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self._encode(-self.coords_array).astype(np.int32)

    @cached_property
    def sub_table(self) -> np.ndarray:
        """sub_table[g, x] is the index of g - x."""
        return self.add_table[:, self.neg_table].astype(np.int32)

    @cached_property
    def order_table(self) -> np.ndarray:
        return np.array([self.element_order(i) for i in range(self.order)], dtype=np.int64)


@dataclass(frozen=True)
class GroupElement:
    group: AbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.group.rank:
            raise IncompatibleElement(f"coords {self.coords} do not match rank {self.group.rank}")
        if any(not 0 <= c < n for c, n in zip(self.coords, self.group.invariant_factors)):
            raise IncompatibleElement(f"coords {self.coords} are not reduced for {self.group.pretty()}")

    @property
    def index(self) -> int:
        return self.group.index_of(self.coords)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return add(self, other)

    def __neg__(self) -> "GroupElement":
        return negate(self)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self) -> str:
        return f"({','.join(map(str, self.coords))})"


def make_group(factors: Iterable[int]) -> AbelianGroup:
    return AbelianGroup(normalize_factors(list(factors)))


def parse_group(text: str) -> AbelianGroup:
    """Parse the comma-separated factor notation, e.g. ``"2,4"``; ``""`` is the trivial group."""
    text = text.strip()
    if not text:
        return make_group([])
    try:
        factors = [int(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise InvalidFactor(f"cannot parse group string {text!r}") from exc
    return make_group(factors)


def _check_pair(g: GroupElement, h: GroupElement) -> None:
    if g.group.invariant_factors != h.group.invariant_factors:
        raise IncompatibleElement(f"{g!r} and {h!r} belong to different groups")


def add(g: GroupElement, h: GroupElement) -> GroupElement:
    _check_pair(g, h)
    return GroupElement(g.group, tuple((a + b) % n for a, b, n in zip(g.coords, h.coords, g.group.invariant_factors)))


def negate(g: GroupElement) -> GroupElement:
    return GroupElement(g.group, tuple((-a) % n for a, n in zip(g.coords, g.group.invariant_factors)))


def is_zero(g: GroupElement) -> bool:
    return g.is_zero()


def element_arithmetic(g: GroupElement, h: GroupElement | None, op: str):
    if op == "add":
        if h is None:
            raise IncompatibleElement("add needs two elements")
        return add(g, h)
    if op == "negate":
        return negate(g)
    if op == "zero-test":
        return is_zero(g)
    raise ValueError(f"unknown element operation {op!r}")


def enumerate_elements(G: AbelianGroup, cap: int | None = None) -> list[GroupElement]:
    G.check_enumerable(cap)
    return [GroupElement(G, coords) for coords in itertools.product(*[range(n) for n in G.invariant_factors])]


def prime_of(G: AbelianGroup) -> int | None:
    """The prime p if G is a nontrivial p-group, else None."""
    primes = set()
    for n in G.invariant_factors:
        primes.update(_factorize(n))
    return primes.pop() if len(primes) == 1 else None


# -- automorphisms -------------------------------------------------------------


def _unit_generators(n: int) -> list[int]:
    units = [u for u in range(1, n) if math.gcd(u, n) == 1]
    gens: list[int] = []
    span = {1 % n}
    for u in units:
        if u in span:
            continue
        gens.append(u)
        frontier = list(span)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = (a * g) % n
                    if b not in span:
                        span.add(b)
                        nxt.append(b)
            frontier = nxt
    return gens


def _basis_map_permutation(G: AbelianGroup, images: np.ndarray) -> tuple[int, ...] | None:
    """Permutation of element indices induced by e_i -> images[i], or None if not an automorphism."""
    mods = np.asarray(G.invariant_factors, dtype=np.int64)
    for i, n in enumerate(G.invariant_factors):
        # image of e_i must have order dividing n_i
        if np.any((images[i] * n) % mods):
            return None
    perm = G._encode(G.coords_array @ images)
    if len(np.unique(perm)) != G.order:
        return None
    return tuple(int(x) for x in perm)


def automorphism_generators(G: AbelianGroup, cap: int = SYMMETRY_CAP) -> list[tuple[int, ...]]:
    """Permutations of element indices generating a group of automorphisms of G.

    Generators are the elementary basis moves (unit scalings, admissible
    transvections, swaps of equal factors); each one is checked to be a
    bijective homomorphism before it is returned.  Raises
    :class:`SymmetryDisabled` when ``|G| > cap``.
    """
    if G.order > cap:
        raise SymmetryDisabled(f"|G| = {G.order} exceeds symmetry cap {cap}")
    r = G.rank
    f = G.invariant_factors
    ident = np.eye(r, dtype=np.int64)
    candidates = []
    for i in range(r):
        for u in _unit_generators(f[i]):
            m = ident.copy()
            m[i, i] = u
            candidates.append(m)
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            m = ident.copy()
            m[i, j] = f[j] // math.gcd(f[i], f[j])
            candidates.append(m)
    for i in range(r - 1):
        if f[i] == f[i + 1]:
            m = ident.copy()
            m[[i, i + 1]] = m[[i + 1, i]]
            candidates.append(m)
    identity = tuple(range(G.order))
    gens: list[tuple[int, ...]] = []
    for m in candidates:
        perm = _basis_map_permutation(G, m)
        if perm is None:  # pragma: no cover - elementary moves are always automorphisms
            raise AssertionError(f"elementary map {m.tolist()} is not an automorphism")
        if perm != identity and perm not in gens:
            gens.append(perm)
    return gens


def translation_generators(G: AbelianGroup) -> list[tuple[int, ...]]:
    """Permutations x -> x + e_i for each basis vector.  Not automorphisms, but they
    preserve zero-sum-ness of every subsequence whose length is a multiple of exp(G)."""
    out = []
    for i in range(G.rank):
        e = [0] * G.rank
        e[i] = 1
        out.append(tuple(int(x) for x in G.add_table[:, G.index_of(e)]))
    return out


def all_automorphisms_bruteforce(G: AbelianGroup) -> list[tuple[int, ...]]:
    """Every automorphism, found by trying all assignments of basis images.  Tiny groups only."""
    G.check_enumerable(256)
    mods = np.asarray(G.invariant_factors, dtype=np.int64)
    pools = []
    for n in G.invariant_factors:
        ok = [g for g in range(G.order) if not np.any((G.coords_array[g] * n) % mods)]
        pools.append(ok)
    out = []
    for choice in itertools.product(*pools):
        images = G.coords_array[list(choice)] if choice else np.zeros((0, 0), dtype=np.int64)
        perm = _basis_map_permutation(G, images)
        if perm is not None:
            out.append(perm)
    return out


def closure_size(generators: Sequence[Sequence[int]], limit: int = 10**6) -> int:
    """Order of the permutation group spanned by ``generators`` (BFS, for tests)."""
    if not generators:
        return 1
    n = len(generators[0])
    start = tuple(range(n))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for p in frontier:
            for g in generators:
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > limit:
                        raise RuntimeError("closure exceeds limit")
        frontier = nxt
    return len(seen)
