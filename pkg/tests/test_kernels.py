"""Compiled and pure-Python kernels must agree exactly, including node counts."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zerosum import kernels
from zerosum.groups import make_group
from zerosum.search import _problem
from zerosum.sequences import All, Exact, Multiples, Range, ResidueUpFrom

py = kernels.get("python")
try:
    cy = kernels.get("cython")
except ImportError:  # pragma: no cover - extension not built
    cy = None

needs_ext = pytest.mark.skipif(cy is None, reason="compiled extension not built")

GROUPS = [make_group(f) for f in ([3], [4], [5], [6], [2, 2], [2, 4], [3, 3], [2, 2, 2], [8], [2, 6])]


@needs_ext
def test_implementation_names():
    assert cy.IMPLEMENTATION == "cython"
    assert py.IMPLEMENTATION == "python"


@needs_ext
@given(st.sampled_from(GROUPS), st.data())
def test_length_dp_parity(G, data):
    items = data.draw(st.lists(st.integers(0, G.order - 1), max_size=70))
    assert cy.zero_sum_lengths(G.sub_table, items) == py.zero_sum_lengths(G.sub_table, items)
    assert list(cy.sum_length_table(G.sub_table, items)) == list(py.sum_length_table(G.sub_table, items))


@needs_ext
def test_batch_parity():
    G = make_group([2, 4])
    rng = np.random.default_rng(7)
    rows = np.sort(rng.integers(0, G.order, size=(50, 9)), axis=1)
    assert list(cy.zero_sum_lengths_batch(G.sub_table, rows)) == list(py.zero_sum_lengths_batch(G.sub_table, rows))
    assert list(py.zero_sum_lengths_batch(G.sub_table, rows)) == [py.zero_sum_lengths(G.sub_table, list(r)) for r in rows]


SPECS = [All(), Range(1, 2), Exact(2), Multiples(), ResidueUpFrom(2)]


def _cases():
    for G in GROUPS[:8]:
        for L in SPECS:
            if L.kind == "exact" and G.exponent != 2:
                L = Exact(G.exponent)
            if L.kind == "range":
                L = Range(1, G.exponent)
            yield G, L


def _strip(res):
    res = dict(res)
    res["collected"] = [tuple(x) for x in res.get("collected") or []]
    res["best_seq"] = tuple(res["best_seq"])
    return res


@needs_ext
@pytest.mark.parametrize("symmetry", [True, False])
@pytest.mark.parametrize("G, L", list(_cases()), ids=lambda x: str(x))
def test_search_parity(G, L, symmetry):
    prob = _problem(G, L, 4 * G.exponent + 4, symmetry, 2)
    args = (prob["sub_table"], prob["lmask"], prob["cap"], prob["allowed"])
    kw = dict(canon=prob["canon"], sigma_bound=prob["sigma_bound"])
    assert _strip(cy.avoider_search(*args, **kw)) == _strip(py.avoider_search(*args, **kw))


@needs_ext
@pytest.mark.parametrize("G", GROUPS[:6], ids=str)
def test_collect_parity(G):
    n = G.exponent
    prob = _problem(G, Exact(n), n + 2, True, 2)
    args = (prob["sub_table"], prob["lmask"], n + 2, prob["allowed"])
    for zs in (False, True):
        kw = dict(canon=prob["canon"], mode=1, target=n + 1, require_zero_sum=zs)
        assert _strip(cy.avoider_search(*args, **kw)) == _strip(py.avoider_search(*args, **kw))


@pytest.mark.parametrize("impl", ["python", "cython"])
def test_node_limit_aborts(impl):
    if impl == "cython" and cy is None:
        pytest.skip("compiled extension not built")
    k = kernels.get(impl)
    G = make_group([3, 9])
    prob = _problem(G, Exact(9), 40, False, 0)
    res = k.avoider_search(prob["sub_table"], prob["lmask"], 40, prob["allowed"], node_limit=1000)
    assert res["aborted"]
    assert res["nodes"] <= 1100


def test_prefix_restriction_partitions_search():
    """Running each depth-1 prefix separately reproduces the whole search's maximum."""
    G = make_group([2, 4])
    prob = _problem(G, Range(1, 4), 12, False, 0)
    args = (prob["sub_table"], prob["lmask"], 12, prob["allowed"])
    whole = kernels.avoider_search(*args)
    parts = [kernels.avoider_search(*args, prefix=(x,)) for x in range(G.order) if prob["allowed"][x]]
    assert max(p["best_len"] for p in parts) == whole["best_len"]
