"""Exact computation of s_L(G) by exhaustive avoider search.

s_L(G) is one more than the length of the longest sequence with no zero-sum
subsequence of admissible length.  Avoiding is hereditary, so a depth-first
search over multisets (extended in non-decreasing element index) that cuts
every node already containing an admissible zero-sum visits exactly the
avoiders.  The kernel adds a branch-and-bound cut and orbit pruning on short
prefixes; neither can change the value or the certificate, which is the
lexicographically least longest avoider.
"""

from __future__ import annotations

import multiprocessing as mp
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .errors import GroupTooLarge, InvalidIndex
from .formulas import d_star
from .groups import ENUMERATION_CAP, AbelianGroup, parse_group
from .sequences import All, Exact, LengthSpec, Range, ResidueUpFrom, Sequence, parse_spec, spec_contains
from .symmetry import canonical_prefix_tables

DEFAULT_SYM_DEPTH = 2
DEFAULT_SPLIT_DEPTH = 2

INVARIANT_NAMES = ("davenport", "eta", "egz", "zeta", "eta_i")


@dataclass
class SearchStats:
    nodes: int = 0
    symmetry_prunes: int = 0
    bound_prunes: int = 0
    wall_time: float = 0.0
    workers: int = 1
    tasks: int = 1
    kernel: str = kernels.IMPLEMENTATION


@dataclass(frozen=True)
class InvariantResult:
    group: AbelianGroup
    spec: LengthSpec
    value: int
    certificate: Sequence
    exhaustive: bool
    stats: SearchStats = field(default_factory=SearchStats, compare=False)
    invariant: str | None = None
    index: int | None = None

    @property
    def capped(self) -> bool:
        return not self.exhaustive

    def payload(self) -> dict:
        """The schedule-independent part of the record."""
        return {
            "group": str(self.group),
            "spec": str(self.spec),
            "invariant": self.invariant,
            "i": self.index,
            "value": self.value,
            "exhaustive": self.exhaustive,
            "certificate": self.certificate.to_records(),
        }

    def to_record(self) -> dict:
        rec = self.payload()
        rec["stats"] = asdict(self.stats)
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "InvariantResult":
        G = parse_group(rec["group"])
        return cls(
            group=G,
            spec=parse_spec(rec["spec"]),
            value=int(rec["value"]),
            certificate=Sequence.from_records(G, rec["certificate"]),
            exhaustive=bool(rec["exhaustive"]),
            stats=SearchStats(**rec.get("stats", {})),
            invariant=rec.get("invariant"),
            index=rec.get("i"),
        )


@dataclass
class SearchOutcome:
    longest: int
    certificate: Sequence
    exhaustive: bool
    cap_hit: bool
    aborted: bool
    stats: SearchStats


def default_length_cap(G: AbelianGroup) -> int:
    return 4 * G.exponent + d_star(G)


def length_ceiling(G: AbelianGroup, L: LengthSpec) -> int:
    """(m-1)|G| + 1 where m is the least multiple of exp(G) in L: some element then repeats m times.

    Falls back to the default cap when L holds no multiple of the exponent
    (s_L may be infinite there).
    """
    n = G.exponent
    for m in range(n, n * (G.order + 2) + 1, n):
        if spec_contains(L, m, n):
            return (m - 1) * G.order + 1
    return default_length_cap(G)


def _problem(G: AbelianGroup, L: LengthSpec, length_cap: int, symmetry: bool, sym_depth: int, affine: bool | None = None):
    G.check_enumerable(ENUMERATION_CAP)
    n = G.exponent
    L.check(n)
    allowed = np.ones(G.order, dtype=np.uint8)
    if spec_contains(L, 1, n):
        # the identity alone is an admissible zero-sum
        allowed[0] = 0
    return {
        "sub_table": G.sub_table,
        "lmask": L.mask(n, length_cap),
        "cap": length_cap,
        "allowed": allowed,
        "canon": canonical_prefix_tables(G, sym_depth, affine=L.translation_invariant(n) if affine is None else affine)
        if symmetry and sym_depth > 0
        else (),
        "sigma_bound": L.kind == "all",
    }


_WORKER: dict = {}


def _run_task(prefix):
    w = _WORKER
    res = kernels.avoider_search(
        w["sub_table"],
        w["lmask"],
        w["cap"],
        w["allowed"],
        prefix=prefix,
        canon=w["canon"],
        shared=w["shared"],
        sigma_bound=w["sigma_bound"],
        node_limit=w["node_limit"],
        deadline=w["deadline"],
    )
    if res["aborted"] and w["shared"] is not None:
        w["shared"][1] = 1
    return res


def max_L_free(
    G: AbelianGroup,
    L: LengthSpec,
    length_cap: int,
    *,
    workers: int = 1,
    symmetry: bool = True,
    sym_depth: int = DEFAULT_SYM_DEPTH,
    split_depth: int = DEFAULT_SPLIT_DEPTH,
    node_limit: int = 0,
    time_budget: float | None = None,
) -> SearchOutcome:
    """Longest sequence over G (length <= length_cap) with no zero-sum of length in L."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    t0 = time.monotonic()
    prob = _problem(G, L, length_cap, symmetry, sym_depth)
    deadline = t0 + time_budget if time_budget else 0.0
    stats = SearchStats(workers=workers)

    frontier = None
    if workers > 1 and length_cap > split_depth:
        front = kernels.avoider_search(
            prob["sub_table"], prob["lmask"], split_depth, prob["allowed"],
            canon=prob["canon"], mode=1, target=split_depth,
        )
        frontier = [tuple(p) for p in front["collected"]]
        stats.nodes += front["nodes"]
        stats.symmetry_prunes += front["sym_prunes"]
        if len(frontier) < 2:
            frontier = None

    if frontier is None:
        res = kernels.avoider_search(
            prob["sub_table"], prob["lmask"], prob["cap"], prob["allowed"],
            canon=prob["canon"], sigma_bound=prob["sigma_bound"],
            node_limit=node_limit, deadline=deadline,
        )
        results = [res]
    else:
        shared = mp.RawArray("q", 2)
        _WORKER.clear()
        _WORKER.update(prob)
        _WORKER.update(
            shared=np.frombuffer(shared, dtype=np.int64),
            node_limit=node_limit,
            deadline=deadline,
        )
        ctx = mp.get_context("fork")
        with ctx.Pool(workers) as pool:
            results = list(pool.imap(_run_task, frontier, chunksize=1))
        _WORKER.clear()
        stats.tasks = len(frontier)

    longest = max(r["best_len"] for r in results)
    # tasks are in lexicographic prefix order, so the first one reaching the maximum holds the least certificate
    best_seq = next(r["best_seq"] for r in results if r["best_len"] == longest)
    cap_hit = any(r["cap_hit"] for r in results)
    aborted = any(r["aborted"] for r in results)
    for r in results:
        stats.nodes += r["nodes"]
        stats.symmetry_prunes += r["sym_prunes"]
        stats.bound_prunes += r["bound_prunes"]
    stats.wall_time = time.monotonic() - t0
    return SearchOutcome(
        longest=longest,
        certificate=Sequence.from_indices(G, best_seq),
        exhaustive=not (cap_hit or aborted),
        cap_hit=cap_hit,
        aborted=aborted,
        stats=stats,
    )


def s_L(
    G: AbelianGroup,
    L: LengthSpec,
    *,
    length_cap: int | None = None,
    invariant: str | None = None,
    index: int | None = None,
    **kw,
) -> InvariantResult:
    """s_L(G) with an extremal certificate.  Non-exhaustive results are lower bounds."""
    if length_cap is not None:
        out = max_L_free(G, L, length_cap, **kw)
    else:
        # a default cap that gets reached proves nothing; grow it up to the pigeonhole ceiling
        cap, ceiling = default_length_cap(G), length_ceiling(G, L)
        while True:
            out = max_L_free(G, L, cap, **kw)
            if not out.cap_hit or out.aborted or cap >= ceiling:
                break
            cap = min(2 * cap, ceiling)
    return InvariantResult(
        group=G,
        spec=L,
        value=out.longest + 1,
        certificate=out.certificate,
        exhaustive=out.exhaustive,
        stats=out.stats,
        invariant=invariant,
        index=index,
    )


def spec_for(G: AbelianGroup, name: str, i: int | None = None) -> LengthSpec:
    n = G.exponent
    if name in ("zeta", "eta_i"):
        if i is None or not 1 <= i <= n:
            raise InvalidIndex(f"{name} needs 1 <= i <= exp(G) = {n}, got {i}")
    if name == "davenport":
        return All()
    if name == "eta":
        return Range(1, n)
    if name in ("egz", "egz_s"):
        return Exact(n)
    if name == "zeta":
        return ResidueUpFrom(i)
    if name == "eta_i":
        return Range(i, n)
    raise ValueError(f"unknown invariant {name!r}; expected one of {', '.join(INVARIANT_NAMES)}")


def named_invariant(G: AbelianGroup, name: str, i: int | None = None, **kw) -> InvariantResult:
    if name == "egz_s":
        name = "egz"
    L = spec_for(G, name, i)
    return s_L(G, L, invariant=name, index=i if name in ("zeta", "eta_i") else None, **kw)


def davenport(G: AbelianGroup, **kw) -> InvariantResult:
    return named_invariant(G, "davenport", **kw)


def eta(G: AbelianGroup, **kw) -> InvariantResult:
    return named_invariant(G, "eta", **kw)


def egz(G: AbelianGroup, **kw) -> InvariantResult:
    return named_invariant(G, "egz", **kw)


def zeta(G: AbelianGroup, i: int, **kw) -> InvariantResult:
    return named_invariant(G, "zeta", i, **kw)


def eta_i(G: AbelianGroup, i: int, **kw) -> InvariantResult:
    return named_invariant(G, "eta_i", i, **kw)


def s_L_bruteforce(G: AbelianGroup, L: LengthSpec, limit: int = 12) -> int:
    """s_L by the definition: least ell such that every multiset of length ell has an admissible zero-sum.

    Checking length ell alone suffices because every longer sequence contains one
    of length ell.  Tiny groups only.
    """
    from .sequences import all_multisets, has_zero_sum_in

    for ell in range(1, limit + 1):
        if all(has_zero_sum_in(S, L) for S in all_multisets(G, ell)):
            return ell
    raise GroupTooLarge(f"s_L exceeds brute-force limit {limit}")
