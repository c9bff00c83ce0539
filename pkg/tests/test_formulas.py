import pytest
from hypothesis import given, strategies as st

from zerosum.formulas import (
    FormulaValue,
    bounds_eta,
    cf_extension,
    cf_pgroup,
    cf_rank2,
    d_star,
    extension_group,
    group_bounds,
    is_large_exponent,
    oracle_table,
)
from zerosum.groups import make_group


def G_(*f):
    return make_group(list(f))


def test_d_star():
    assert d_star(G_(3, 3)) == 5
    assert d_star(G_(2, 2, 4)) == 6
    assert d_star(G_()) == 1


@pytest.mark.parametrize("n1, n2, expected", [(3, 3, (9, 7)), (1, 5, (9, 5)), (2, 4, (9, 6)), (2, 12, (25, 14))])
def test_rank2(n1, n2, expected):
    assert cf_rank2(n1, n2) == expected


def test_rank2_needs_divisibility():
    with pytest.raises(ValueError):
        cf_rank2(2, 3)


def test_pgroup_examples():
    v = cf_pgroup(G_(2, 4), 2)
    assert v["D"].value == 5
    assert v["s_multiples"].value == 8
    assert v["zeta_3"].value == 7
    assert v["eta"].value == 6
    assert sorted(k for k in v if k.startswith("eta_")) == ["eta_1", "eta_2", "eta_3"]

    v = cf_pgroup(G_(3, 9), 3)
    assert (v["D"].value, v["eta"].value) == (11, 13)

    v = cf_pgroup(G_(3, 3, 3), 3)
    assert v["D"].value == 7
    assert not v["eta"].applicable
    assert "7 > 2n - 1 = 5" in v["eta"].reason


def test_pgroup_wrong_prime():
    v = cf_pgroup(G_(6), 2)
    assert not v["D"].applicable


def test_extension_examples():
    v = cf_extension(3, G_(2, 4), 2)
    assert (v["D_ext"].value, v["eta_ext"].value) == (13, 14)
    assert v["eta_ext"].value == cf_rank2(2, 12)[1]
    assert extension_group(3, G_(2, 4)) == G_(2, 12)

    v = cf_extension(2, G_(3, 9), 3)
    assert (v["D_ext"].value, v["eta_ext"].value) == (20, 22)

    base = cf_pgroup(G_(2, 4), 2)
    v = cf_extension(1, G_(2, 4), 2)
    assert (v["D_ext"].value, v["eta_ext"].value) == (base["D"].value, base["eta"].value)


def test_extension_gates():
    assert not cf_extension(2, G_(2, 4), 2)["eta_ext"].applicable
    assert not cf_extension(3, G_(3, 3, 3), 3)["D_ext"].applicable
    assert not cf_extension(0, G_(2, 4), 2)["D_ext"].applicable


@given(st.sampled_from([[2, 4], [4], [8], [2, 8], [3, 9], [9], [5], [5, 25], [4, 8]]), st.integers(1, 40))
def test_extension_agrees_with_rank2(f, a):
    """When C_a + G has rank 2 and p does not divide a, both formulas must give the same eta."""
    G = make_group(f)
    p = [q for q in (2, 3, 5) if G.exponent % q == 0][0]
    if a % p == 0:
        return
    Gp = extension_group(a, G)
    v = cf_extension(a, G, p)
    if Gp.rank == 2 and v["eta_ext"].applicable:
        assert v["eta_ext"].value == cf_rank2(*Gp.invariant_factors)[1]


def test_bounds_examples():
    iv = {b.name: b for b in bounds_eta(11, 9, order=27, p_odd=True, large_exponent=True, D_H=3, exp_H_divides_n=True)}
    assert iv["chain.eta"].lo == 13
    assert iv["chain.egz"].hi == 27
    assert iv["lower.eta"].lo == 2 * (3 - 1) + 9
    iv = {b.name: b for b in bounds_eta(11, 9, eta_H=3, eta_Q=9, exp_Q=9, exp_split=True)}
    assert iv["inductive.eta"].hi == (3 - 1) * 9 + 9
    assert "chain.eta" not in iv


def test_group_bounds_contain_known_values():
    known = {(2, 4): (6, 9), (3, 3): (7, 9), (3, 9): (13, 21), (2, 2): (4, 5)}
    for f, (e, s) in known.items():
        for b in group_bounds(make_group(list(f))):
            assert b.admits(e if b.target == "eta" else s), b


def test_formula_value_contract():
    with pytest.raises(ValueError):
        FormulaValue("x", "", False, value=3)
    with pytest.raises(ValueError):
        FormulaValue("x", "", True, lo=4, hi=3)
    fv = FormulaValue("x", "", True, lo=2)
    assert fv.admits(100) and not fv.admits(1)
    assert FormulaValue("x", "", False, reason="r").admits(-5)


def test_oracle_table():
    t = oracle_table(G_(6))
    assert [fv.value for fv in t["eta"] if fv.applicable] == [6]
    assert not any(fv.applicable for fv in t["D"] if fv.name == "olson.D")
    assert is_large_exponent(G_(2, 4)) and not is_large_exponent(G_(3, 3, 3))
