"""Closed-form values and bounds for zero-sum invariants.

Every oracle reports applicability explicitly: a ``FormulaValue`` with
``applicable=False`` carries the failed hypothesis in ``reason`` and no value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import AbelianGroup, make_group, prime_of


@dataclass(frozen=True)
class FormulaValue:
    name: str
    anchor: str
    applicable: bool
    value: int | None = None
    lo: int | None = None
    hi: int | None = None
    reason: str = ""
    target: str = ""

    def __post_init__(self) -> None:
        if not self.applicable and (self.value is not None or self.lo is not None or self.hi is not None):
            raise ValueError("inapplicable formula cannot carry a value")
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def is_interval(self) -> bool:
        return self.value is None and (self.lo is not None or self.hi is not None)

    def admits(self, x: int) -> bool:
        if not self.applicable:
            return True
        if self.value is not None:
            return x == self.value
        return (self.lo is None or x >= self.lo) and (self.hi is None or x <= self.hi)

    def describe(self) -> str:
        if not self.applicable:
            return f"{self.name}: inapplicable ({self.reason})"
        if self.value is not None:
            return f"{self.name}: {self.value}"
        lo = "-inf" if self.lo is None else self.lo
        hi = "inf" if self.hi is None else self.hi
        return f"{self.name}: [{lo}, {hi}]"

    def to_record(self) -> dict:
        return {k: getattr(self, k) for k in ("name", "anchor", "target", "applicable", "value", "lo", "hi", "reason")}


def _na(name: str, anchor: str, reason: str, target: str = "") -> FormulaValue:
    return FormulaValue(name, anchor, False, reason=reason, target=target)


ANCHOR_OLSON = "p-group: D(G) = D*(G)"
ANCHOR_RANK2 = "rank <= 2: eta = 2n1+n2-2, s = 2n1+2n2-3"
ANCHOR_SNN = "p-group: s_{nN}(G) = D(G)+n-1"
ANCHOR_ZETA = "p-group: zeta_i(G) = D(G)+i-1"
ANCHOR_MAIN = "large-exponent p-group: eta(G) = 2D(G)-n"
ANCHOR_ETAI = "large-exponent p-group: eta_i(G) = 2D(G)-n+i-1"
ANCHOR_NEARD = "extension: D(C_a+G) = D*(C_a+G)"
ANCHOR_EXT = "extension: eta(C_a+G) = 2D-exp, p not dividing a"
ANCHOR_CHAIN = "odd p, large exponent: 2D-1 <= eta+n-1 <= s <= D+2n-2"
ANCHOR_GENERAL = "general: D <= eta <= s-n+1 <= |G|"
ANCHOR_LOWER = "lower bound: eta(G) >= 2(D(H)-1)+n"
ANCHOR_INDUCT = "inductive bound: eta(G) <= (eta(H)-1)exp(G/H)+eta(G/H)"
ANCHOR_DSTAR = "D*(G) = 1 + sum(n_i - 1) <= D(G)"


def d_star(G: AbelianGroup) -> int:
    return sum(n - 1 for n in G.invariant_factors) + 1


def is_large_exponent(G: AbelianGroup) -> bool:
    """p-group with D(G) <= 2 exp(G) - 1 (D computed as D*, exact for p-groups)."""
    return prime_of(G) is not None and d_star(G) <= 2 * G.exponent - 1


def cf_rank2(n1: int, n2: int) -> tuple[int, int]:
    """(s, eta) of C_{n1} + C_{n2} for n1 | n2."""
    if n1 < 1 or n2 % n1:
        raise ValueError(f"rank-2 formula needs 1 <= n1 | n2, got ({n1}, {n2})")
    return 2 * n1 + 2 * n2 - 3, 2 * n1 + n2 - 2


def rank2_values(G: AbelianGroup) -> dict[str, FormulaValue]:
    if G.rank > 2 or G.rank == 0:
        reason = f"rank {G.rank} is not 1 or 2"
        return {k: _na(f"rank2.{k}", ANCHOR_RANK2, reason, k) for k in ("D", "eta", "egz")}
    n1, n2 = (1, G.invariant_factors[0]) if G.rank == 1 else G.invariant_factors
    s, e = cf_rank2(n1, n2)
    return {
        "D": FormulaValue("rank2.D", ANCHOR_DSTAR, True, value=n1 + n2 - 1, target="D"),
        "eta": FormulaValue("rank2.eta", ANCHOR_RANK2, True, value=e, target="eta"),
        "egz": FormulaValue("rank2.egz", ANCHOR_RANK2, True, value=s, target="egz"),
    }


def cf_pgroup(G: AbelianGroup, p: int) -> dict[str, FormulaValue]:
    """Formula values for a p-group.

    Keys: ``D``, ``s_multiples``, ``zeta_i`` for i in [1, n], ``eta``, and
    ``eta_i`` for the indices covered by the large-exponent corollary.
    """
    pp = prime_of(G)
    if pp != p:
        reason = f"{G.pretty()} is not a {p}-group"
        return {"D": _na("olson.D", ANCHOR_OLSON, reason, "D")}
    n = G.exponent
    D = d_star(G)
    out = {
        "D": FormulaValue("olson.D", ANCHOR_OLSON, True, value=D, target="D"),
        "s_multiples": FormulaValue("snN", ANCHOR_SNN, True, value=D + n - 1, target="s_multiples"),
    }
    for i in range(1, n + 1):
        out[f"zeta_{i}"] = FormulaValue(f"zeta_values[{i}]", ANCHOR_ZETA, True, value=D + i - 1, target=f"zeta_{i}")
    if D <= 2 * n - 1:
        out["eta"] = FormulaValue("main.eta", ANCHOR_MAIN, True, value=2 * D - n, target="eta")
        top = min(n, max(2 * n - D, n // 2 + 1))
        for i in range(1, top + 1):
            out[f"eta_{i}"] = FormulaValue(
                f"eta_i_corollary[{i}]", ANCHOR_ETAI, True, value=2 * D - n + i - 1, target=f"eta_{i}"
            )
    else:
        out["eta"] = _na("main.eta", ANCHOR_MAIN, f"D = {D} > 2n - 1 = {2 * n - 1}", "eta")
    return out


def cf_extension(a: int, G: AbelianGroup, p: int) -> dict[str, FormulaValue]:
    """D and eta of C_a + G for a large-exponent p-group G."""
    if a < 1:
        reason = f"a = {a} must be positive"
        return {"D_ext": _na("nearD.D", ANCHOR_NEARD, reason, "D"), "eta_ext": _na("ext.eta", ANCHOR_EXT, reason, "eta")}
    if prime_of(G) != p:
        reason = f"{G.pretty()} is not a {p}-group"
        return {"D_ext": _na("nearD.D", ANCHOR_NEARD, reason, "D"), "eta_ext": _na("ext.eta", ANCHOR_EXT, reason, "eta")}
    n = G.exponent
    if d_star(G) > 2 * n - 1:
        reason = f"D(G) = {d_star(G)} > 2n - 1 = {2 * n - 1}"
        return {"D_ext": _na("nearD.D", ANCHOR_NEARD, reason, "D"), "eta_ext": _na("ext.eta", ANCHOR_EXT, reason, "eta")}
    Gp = extension_group(a, G)
    D_ext = d_star(Gp)
    out = {"D_ext": FormulaValue("nearD.D", ANCHOR_NEARD, True, value=D_ext, target="D")}
    if a % p == 0:
        out["eta_ext"] = _na("ext.eta", ANCHOR_EXT, f"p = {p} divides a = {a}", "eta")
    else:
        out["eta_ext"] = FormulaValue("ext.eta", ANCHOR_EXT, True, value=2 * D_ext - Gp.exponent, target="eta")
    return out


def extension_group(a: int, G: AbelianGroup) -> AbelianGroup:
    return make_group(([a] if a > 1 else []) + list(G.invariant_factors))


def bounds_eta(
    D: int,
    n: int,
    *,
    order: int | None = None,
    p_odd: bool = False,
    large_exponent: bool = False,
    D_H: int | None = None,
    exp_H_divides_n: bool = False,
    eta_H: int | None = None,
    eta_Q: int | None = None,
    exp_Q: int | None = None,
    exp_split: bool = False,
) -> list[FormulaValue]:
    """Interval constraints on eta(G) and s(G); callers intersect them.

    Each bound is emitted only when its hypotheses hold (passed as flags).
    """
    if D < 1 or n < 1:
        raise ValueError("D and n must be positive")
    out = [FormulaValue("general.eta_lower", ANCHOR_GENERAL, True, lo=D, hi=order, target="eta")]
    if order is not None:
        out.append(FormulaValue("general.egz_upper", ANCHOR_GENERAL, True, lo=D + n - 1, hi=order + n - 1, target="egz"))
    if p_odd and large_exponent:
        out.append(FormulaValue("chain.eta", ANCHOR_CHAIN, True, lo=2 * D - n, hi=D + n - 1, target="eta"))
        out.append(FormulaValue("chain.egz", ANCHOR_CHAIN, True, lo=2 * D - 1, hi=D + 2 * n - 2, target="egz"))
    if D_H is not None and exp_H_divides_n:
        out.append(FormulaValue("lower.eta", ANCHOR_LOWER, True, lo=2 * (D_H - 1) + n, target="eta"))
    if eta_H is not None and eta_Q is not None and exp_Q is not None and exp_split:
        out.append(FormulaValue("inductive.eta", ANCHOR_INDUCT, True, hi=(eta_H - 1) * exp_Q + eta_Q, target="eta"))
    return out


def group_bounds(G: AbelianGroup) -> list[FormulaValue]:
    """bounds_eta fed with everything derivable from G itself.

    The lower-bound route uses H = the complement of a largest cyclic factor,
    so it applies to every p (unlike the odd-p chain).
    """
    p = prime_of(G)
    n = G.exponent
    D = d_star(G) if (p is not None or G.rank <= 2) else None
    if D is None:
        return []
    H = AbelianGroup(G.invariant_factors[:-1])
    return bounds_eta(
        D,
        n,
        order=G.order,
        p_odd=p is not None and p % 2 == 1,
        large_exponent=p is not None and D <= 2 * n - 1,
        D_H=d_star(H) if (p is not None or H.rank <= 2) else None,
        exp_H_divides_n=n % H.exponent == 0,
    )


def oracle_table(G: AbelianGroup) -> dict[str, list[FormulaValue]]:
    """All applicable exact oracles keyed by invariant (``D``, ``eta``, ``egz``, ``zeta_i``, ``eta_i``...)."""
    table: dict[str, list[FormulaValue]] = {}

    def put(key, fv):
        table.setdefault(key, []).append(fv)

    for key, fv in rank2_values(G).items():
        put(key, fv)
    p = prime_of(G)
    if p is not None:
        for key, fv in cf_pgroup(G, p).items():
            put(key, fv)
    else:
        put("D", _na("olson.D", ANCHOR_OLSON, f"{G.pretty()} is not a p-group", "D"))
    return table
