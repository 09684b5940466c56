import pytest
from hypothesis import given, settings, strategies as st

from pcg import properties as P
from pcg import structure as S
from pcg.properties import Verdict

from conftest import SMALL_LABELS, group

# label: (semi verdicts for i = 1..r, p-abelian, regular)
EXPECTED = {
    "cyclic:p=3,k=3": ([True, True, True], True, True),
    "elementary:p=3,d=3": ([True], True, True),
    "extraspecial27_exp3": ([True], True, True),
    "extraspecial27_exp9": ([True, True], True, True),
    "m27": ([True, True], True, True),
    "c3wrc3": ([False, True], False, False),
    "c3wrc3xc3": ([False, True], False, False),
    "burnside:d=3": ([True], True, True),
    "m27xc9": ([True, True], True, True),
}


@pytest.mark.parametrize("label", sorted(EXPECTED))
def test_expected_verdicts(label):
    g = group(label)
    semi, pab, reg = EXPECTED[label]
    r = S.log_p(S.exponent(g), g.prime)
    assert [P.is_semi_abelian_pi(g, i).holds for i in range(1, r + 1)] == semi
    assert P.is_p_abelian(g, "exhaustive").holds is pab
    assert P.is_regular(g, "exhaustive").holds is reg


@pytest.mark.parametrize("label", SMALL_LABELS)
def test_pi_method_matches_definition(label):
    g = group(label)
    for i in (1, 2):
        a = P.is_semi_abelian_definitional(g, i, "exhaustive")
        b = P.is_semi_abelian_pi(g, i)
        assert a.holds is b.holds
        for v in (a, b):
            if not v.holds:
                x, y = v.witness
                assert P.semi_violation(x, y, g.prime ** i)


def test_c3wrc3_is_inner_semi_3():
    g = group("c3wrc3")
    v = P.is_inner_semi_abelian(g, 1)
    assert v.holds is True
    assert v.detail["group"] is False
    assert all(v.detail["maximal_subgroups"])
    assert P.is_inner_semi_abelian(group("m27"), 1).holds is False


def test_strongly_semi_abelian():
    assert P.is_strongly_semi_abelian(group("m27xc9")).holds is True
    assert P.is_strongly_semi_abelian(group("c3wrc3")).holds is False


def test_sampled_cannot_prove():
    with pytest.raises(ValueError):
        Verdict("x", True, P.SAMPLED)
    with pytest.raises(ValueError):
        Verdict("x", False, P.EXHAUSTIVE)


def test_sampled_mode_finds_counterexample():
    v = P.is_semi_abelian_definitional(group("c3wrc3xc3"), 1, "sampled", samples=5000, seed=3)
    assert v.holds is False and v.mode == P.SAMPLED and v.seed == 3
    again = P.is_semi_abelian_definitional(group("c3wrc3xc3"), 1, "sampled", samples=5000,
                                           seed=3)
    assert again.as_dict() == v.as_dict()


@pytest.mark.parametrize("label", ["c3wrc3", "ex27xex27", "m27xc9"])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_regular_groups_have_regular_power_structure(label, data):
    g = group(label)
    rep = P.power_structure_report(g)
    if P.is_regular(g, "exhaustive").holds:
        assert rep.regular_power_structure()
    # subgroups of semi-p-abelian groups stay semi-p-abelian
    codes = data.draw(st.lists(st.integers(0, g.order - 1), min_size=1, max_size=2))
    h = S.closure(g, [g.from_code(c) for c in codes])
    if P.is_semi_abelian_pi(g, 1).holds:
        assert P.is_semi_abelian_pi(h, 1).holds


def test_sections_report_scope():
    rep = P.sections_report(group("c3wrc3"))
    assert rep["scope"] == "group and maximal subgroups"
    assert len(rep["subjects"]) == 1 + 4


def test_example38_core_verdicts(ex38):
    assert P.is_semi_abelian_pi(ex38, 1).holds is True
    v = P.is_semi_abelian_pi(ex38, 2)
    assert v.holds is False
    assert P.semi_violation(*v.witness, 9)
