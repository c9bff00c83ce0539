"""Sequences over a group, admissible length sets, and zero-sum length DP."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import kernels
from .errors import IncompatibleElement, InvalidSpec, LengthCapExceeded
from .groups import AbelianGroup

DP_CAP = 64


# -- length specifications -------------------------------------------------------


@dataclass(frozen=True)
class LengthSpec:
    """One of the five admissible-length shapes.

    ``kind`` is ``all``, ``exact``, ``range``, ``multiples`` or ``resup``.
    ``a``/``b`` hold the parameters (``exact:k`` uses ``a``; ``range:a,b``
    uses both; ``resup:i`` uses ``a``).
    """

    kind: str
    a: int = 0
    b: int = 0

    def __post_init__(self) -> None:
        k = self.kind
        if k in ("all", "multiples"):
            if self.a or self.b:
                raise InvalidSpec(f"{k} takes no parameters")
        elif k == "exact":
            if self.a < 1 or self.b:
                raise InvalidSpec(f"exact length must be >= 1, got {self.a}")
        elif k == "range":
            if not 1 <= self.a <= self.b:
                raise InvalidSpec(f"range needs 1 <= a <= b, got {self.a},{self.b}")
        elif k == "resup":
            if self.a < 1 or self.b:
                raise InvalidSpec(f"resup index must be >= 1, got {self.a}")
        else:
            raise InvalidSpec(f"unknown length spec kind {k!r}")

    def __str__(self) -> str:
        if self.kind in ("all", "multiples"):
            return self.kind
        if self.kind == "range":
            return f"range:{self.a},{self.b}"
        return f"{self.kind}:{self.a}"

    def check(self, n: int) -> None:
        if self.kind == "resup" and self.a > n:
            raise InvalidSpec(f"resup:{self.a} needs i <= exponent {n}")

    def translation_invariant(self, n: int) -> bool:
        """True when every admissible length is a multiple of n, so shifting all terms by g keeps avoiders avoiders."""
        if self.kind == "multiples":
            return True
        if self.kind == "exact":
            return self.a % n == 0
        return self.kind == "range" and self.a == self.b and self.a % n == 0

    def contains(self, t: int, n: int) -> bool:
        return spec_contains(self, t, n)

    def mask(self, n: int, upto: int) -> int:
        """Bitset of admissible lengths in [1, upto]."""
        self.check(n)
        m = 0
        for t in range(1, upto + 1):
            if spec_contains(self, t, n):
                m |= 1 << t
        return m


def All() -> LengthSpec:
    return LengthSpec("all")


def Exact(k: int) -> LengthSpec:
    return LengthSpec("exact", k)


def Range(a: int, b: int) -> LengthSpec:
    return LengthSpec("range", a, b)


def Multiples() -> LengthSpec:
    return LengthSpec("multiples")


def ResidueUpFrom(i: int) -> LengthSpec:
    return LengthSpec("resup", i)


def parse_spec(text: str) -> LengthSpec:
    text = text.strip().lower()
    head, _, rest = text.partition(":")
    try:
        if head in ("all", "multiples") and not rest:
            return LengthSpec(head)
        if head in ("exact", "resup"):
            return LengthSpec(head, int(rest))
        if head == "range":
            a, b = rest.split(",")
            return LengthSpec("range", int(a), int(b))
    except ValueError as exc:
        raise InvalidSpec(f"cannot parse length spec {text!r}") from exc
    raise InvalidSpec(f"cannot parse length spec {text!r}")


def spec_contains(L: LengthSpec, t: int, n: int) -> bool:
    if t < 1 or n < 1:
        raise InvalidSpec(f"need t >= 1 and n >= 1, got t={t}, n={n}")
    if L.kind == "all":
        return True
    if L.kind == "exact":
        return t == L.a
    if L.kind == "range":
        return L.a <= t <= L.b
    if L.kind == "multiples":
        return t % n == 0
    L.check(n)
    r = t % n
    return r == 0 or r >= L.a


# -- sequences --------------------------------------------------------------------


@dataclass(frozen=True)
class Sequence:
    """A multiset of group elements, stored as sorted (index, count) pairs."""

    group: AbelianGroup
    counts: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prev = -1
        for idx, c in self.counts:
            if not 0 <= idx < self.group.order:
                raise IncompatibleElement(f"element index {idx} not in group of order {self.group.order}")
            if c < 1:
                raise ValueError(f"multiplicity of {idx} must be positive")
            if idx <= prev:
                raise ValueError("counts must be sorted by element index without repeats")
            prev = idx

    @classmethod
    def from_indices(cls, group: AbelianGroup, indices: Iterable[int]) -> "Sequence":
        c = Counter(int(i) for i in indices)
        return cls(group, tuple(sorted(c.items())))

    @classmethod
    def from_coords(cls, group: AbelianGroup, elements: Iterable[Iterable[int]]) -> "Sequence":
        return cls.from_indices(group, (group.index_of(tuple(e)) for e in elements))

    @property
    def length(self) -> int:
        return sum(c for _, c in self.counts)

    def __len__(self) -> int:
        return self.length

    @property
    def indices(self) -> tuple[int, ...]:
        """Elements with repetition, in canonical (non-decreasing index) order."""
        return tuple(i for i, c in self.counts for _ in range(c))

    def multiplicity(self, idx: int) -> int:
        return dict(self.counts).get(idx, 0)

    def coords(self) -> list[tuple[int, ...]]:
        return [self.group.coords_of(i) for i in self.indices]

    def total(self) -> int:
        """Index of the sum of all elements."""
        G = self.group
        acc = [0] * G.rank
        for i, c in self.counts:
            for k, x in enumerate(G.coords_of(i)):
                acc[k] += c * x
        return G.index_of(acc)

    def is_zero_sum(self) -> bool:
        return self.total() == 0

    def is_submultiset_of(self, other: "Sequence") -> bool:
        big = dict(other.counts)
        return all(big.get(i, 0) >= c for i, c in self.counts)

    def prepend(self, idx: int) -> "Sequence":
        return Sequence.from_indices(self.group, self.indices + (idx,))

    def apply(self, perm) -> "Sequence":
        return Sequence.from_indices(self.group, (perm[i] for i in self.indices))

    def to_records(self) -> list[list[int]]:
        """Serialized form: ``[coords..., count]`` per distinct element, canonical order."""
        return [list(self.group.coords_of(i)) + [c] for i, c in self.counts]

    @classmethod
    def from_records(cls, group: AbelianGroup, records) -> "Sequence":
        pairs = Counter()
        for rec in records:
            *coords, count = rec
            pairs[group.index_of(coords)] += int(count)
        return cls(group, tuple(sorted(pairs.items())))

    def __repr__(self) -> str:
        body = " ".join(
            ("(" + ",".join(map(str, self.group.coords_of(i))) + ")") + (f"^{c}" if c > 1 else "")
            for i, c in self.counts
        )
        return f"Seq[{self.group}]({body})"


@dataclass(frozen=True)
class LengthSet:
    """Lengths t >= 1 of nonempty zero-sum subsequences, as a bitset over [1, max_length]."""

    bits: int
    max_length: int

    def __contains__(self, t: int) -> bool:
        return t >= 1 and bool((self.bits >> t) & 1)

    def lengths(self) -> list[int]:
        return [t for t in range(1, self.max_length + 1) if (self.bits >> t) & 1]

    def __iter__(self) -> Iterator[int]:
        return iter(self.lengths())

    def issubset(self, other: "LengthSet") -> bool:
        return self.bits & ~other.bits == 0


def _check_cap(S: Sequence, cap: int | None) -> None:
    cap = DP_CAP if cap is None else cap
    if S.length > cap:
        raise LengthCapExceeded(f"sequence length {S.length} exceeds DP cap {cap}")


def length_set(S: Sequence, cap: int | None = None) -> LengthSet:
    _check_cap(S, cap)
    bits = kernels.zero_sum_lengths(S.group.sub_table, list(S.indices))
    return LengthSet(bits, S.length)


def has_zero_sum_in(S: Sequence, L: LengthSpec, cap: int | None = None) -> bool:
    ls = length_set(S, cap)
    return bool(ls.bits & L.mask(S.group.exponent, S.length))


def extract_witness(S: Sequence, L: LengthSpec, cap: int | None = None) -> Sequence | None:
    """Shortest zero-sum subsequence with admissible length; lexicographically least among those."""
    ls = length_set(S, cap)
    hits = ls.bits & L.mask(S.group.exponent, S.length)
    if not hits:
        return None
    t = (hits & -hits).bit_length() - 1
    items = list(S.indices)
    k = len(items)
    sub = S.group.sub_table
    # suffix[j][g]: lengths of subsequences of items[j:] summing to g
    suffix = [None] * (k + 1)
    suffix[k] = kernels.sum_length_table(sub, [])
    for j in range(k - 1, -1, -1):
        suffix[j] = kernels.sum_length_table(sub, items[j:])
    chosen = []
    need_sum, need_len = 0, t
    for j, x in enumerate(items):
        if need_len == 0:
            break
        rest = int(sub[need_sum][x])
        if (suffix[j + 1][rest] >> (need_len - 1)) & 1:
            chosen.append(x)
            need_sum, need_len = rest, need_len - 1
    W = Sequence.from_indices(S.group, chosen)
    if not validate_witness(S, L, W):  # pragma: no cover - guards the back-trace
        raise AssertionError("witness extraction produced an invalid witness")
    return W


def validate_witness(S: Sequence, L: LengthSpec, T: Sequence) -> bool:
    return (
        T.length >= 1
        and T.is_submultiset_of(S)
        and T.is_zero_sum()
        and spec_contains(L, T.length, S.group.exponent)
    )


def is_avoider(S: Sequence, L: LengthSpec, cap: int | None = None) -> bool:
    return not has_zero_sum_in(S, L, cap)


def naive_length_set(S: Sequence) -> set[int]:
    """Reference oracle: sum every nonempty subset of the expanded element list."""
    G = S.group
    elems = [G.coords_of(i) for i in S.indices]
    out = set()
    for mask in range(1, 1 << len(elems)):
        acc = [0] * G.rank
        size = 0
        for j, e in enumerate(elems):
            if mask >> j & 1:
                size += 1
                for k, x in enumerate(e):
                    acc[k] += x
        if all(a % n == 0 for a, n in zip(acc, G.invariant_factors)):
            out.add(size)
    return out


def all_multisets(G: AbelianGroup, length: int) -> Iterator[Sequence]:
    for combo in itertools.combinations_with_replacement(range(G.order), length):
        yield Sequence.from_indices(G, combo)
