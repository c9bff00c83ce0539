"""Pure-Python kernels.  Same contract as the compiled ``_kernels`` module.

Length sets are Python ints used as bitsets: bit t set means "some
subsequence of length t reaches this element".
"""

from __future__ import annotations

import time

IMPLEMENTATION = "python"


def _extend(dp, sub_row_for_x, G):
    return [dp[g] | (dp[sub_row_for_x[g]] << 1) for g in range(G)]


def _columns(sub_table):
    # sub_cols[x][g] = index of g - x
    G = len(sub_table)
    return [[int(sub_table[g][x]) for g in range(G)] for x in range(G)]


def sum_length_table(sub_table, items):
    """dp[g] = bitset of lengths of subsequences of ``items`` summing to g (bit 0 is the empty one)."""
    G = len(sub_table)
    cols = _columns(sub_table)
    dp = [0] * G
    dp[0] = 1
    for x in items:
        dp = _extend(dp, cols[int(x)], G)
    return dp


def zero_sum_lengths(sub_table, items):
    return sum_length_table(sub_table, items)[0] & ~1


def zero_sum_lengths_batch(sub_table, rows):
    G = len(sub_table)
    cols = _columns(sub_table)
    out = []
    for row in rows:
        dp = [0] * G
        dp[0] = 1
        for x in row:
            dp = _extend(dp, cols[int(x)], G)
        out.append(dp[0] & ~1)
    return out


class _Abort(Exception):
    pass


def avoider_search(
    sub_table,
    lmask,
    cap,
    allowed,
    prefix=(),
    canon=(),
    mode=0,
    target=0,
    require_zero_sum=False,
    shared=None,
    sigma_bound=False,
    node_limit=0,
    deadline=0.0,
    collect_limit=0,
):
    """Depth-first search over L-avoiding multisets in non-decreasing index order.

    mode 0: find the longest avoider (length <= cap), lexicographically least
    among the longest.  mode 1: collect every avoider of length exactly
    ``target`` (optionally zero-sum) that survives symmetry pruning.
    ``canon[k]`` is a flat table over codes of sorted (k+1)-prefixes; zero
    marks a prefix that is not minimal in its orbit.
    """
    G = len(sub_table)
    cols = _columns(sub_table)
    allowed = [bool(a) for a in allowed]
    canon = [list(t) for t in canon]
    sym_depth = len(canon)
    mask_all = (1 << (cap + 1)) - 1

    st = {
        "nodes": 0,
        "sym_prunes": 0,
        "bound_prunes": 0,
        "cap_hit": False,
        "aborted": False,
        "best_len": -1,
        "best_seq": [],
        "collected": [],
    }
    seq: list[int] = []

    def global_best():
        return int(shared[0]) if shared is not None else -1

    def publish(n):
        if shared is not None and n > shared[0]:
            shared[0] = n

    def check_abort():
        if node_limit and st["nodes"] >= node_limit:
            raise _Abort
        if st["nodes"] & 1023 == 0:
            if deadline and time.monotonic() > deadline:
                raise _Abort
            if shared is not None and shared[1]:
                raise _Abort

    def ext_bound(dp, d, valid, need):
        # upper bound on the number of further elements, stopping early once it reaches need
        if sigma_bound:
            sigma = sum(1 for g in range(1, G) if dp[g])
            if G - 1 - sigma < need:
                return G - 1 - sigma
        ext = len(valid)
        if ext >= need:
            return ext
        room = cap - d
        for x, child in valid:
            col = cols[x]
            cur = child
            m = 1
            while m < room:
                cur = _extend(cur, col, G)
                if cur[0] & lmask:
                    break
                m += 1
                ext += 1
                if ext >= need:
                    return ext
        return ext

    def visit(dp, d, last, code):
        st["nodes"] += 1
        check_abort()
        if mode == 0 and d > st["best_len"]:
            st["best_len"] = d
            st["best_seq"] = list(seq)
            publish(d)
        if mode == 1 and d == target:
            if not require_zero_sum or (dp[0] >> d) & 1:
                st["collected"].append(list(seq))
                if collect_limit and len(st["collected"]) >= collect_limit:
                    raise _Abort
            return
        valid = []
        for x in range(last, G):
            if not allowed[x]:
                continue
            child = _extend(dp, cols[x], G)
            if child[0] & lmask:
                continue
            valid.append((x, child))
        if not valid:
            return
        if mode == 0 and d >= cap:
            st["cap_hit"] = True
            return
        if mode == 0:
            need = max(st["best_len"] + 1, global_best()) - d
        else:
            need = target - d
        if need > 0 and ext_bound(dp, d, valid, need) < need:
            st["bound_prunes"] += 1
            return
        for x, child in valid:
            ccode = code * G + x
            if d < sym_depth and not canon[d][ccode]:
                st["sym_prunes"] += 1
                continue
            seq.append(x)
            visit([v & mask_all for v in child], d + 1, x, ccode)
            seq.pop()

    dp = [0] * G
    dp[0] = 1
    code = 0
    for x in prefix:
        dp = _extend(dp, cols[int(x)], G)
        seq.append(int(x))
        code = code * G + int(x)
    last = int(prefix[-1]) if len(prefix) else 0
    if dp[0] & lmask:
        return st
    try:
        visit(dp, len(seq), last, code)
    except _Abort:
        st["aborted"] = True
    return st
