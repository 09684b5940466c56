import pytest
from hypothesis import given, settings, strategies as st

from pcg import identities as I
from pcg import properties as P

from conftest import SMALL_LABELS, group


def test_report_invariants():
    with pytest.raises(ValueError):
        I.ClaimReport("X", "s", I.SATISFIED, I.VACUOUS, P.STRUCTURAL)
    with pytest.raises(ValueError):
        I.ClaimReport("X", "s", I.VIOLATED, I.HOLDS, P.EXHAUSTIVE)
    with pytest.raises(ValueError):
        I.ClaimReport("X", "s", I.SATISFIED, I.FAILS, P.EXHAUSTIVE)
    assert I.ClaimReport("X", "s", I.VIOLATED, I.VACUOUS, P.STRUCTURAL).ok
    informative = I.ClaimReport("X", "s", I.SATISFIED, I.FAILS, P.EXHAUSTIVE,
                                witness=(1,), informative=True)
    assert informative.ok


@pytest.mark.parametrize("label", ["c3wrc3", "m27xc3", "cyclic:p=5,k=2"])
def test_hall_witt_exhaustive(label):
    r = I.hall_witt(group(label), mode="exhaustive")
    assert r.verdict == I.HOLDS and r.mode == P.EXHAUSTIVE


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3**15 - 1), st.integers(0, 3**15 - 1), st.integers(0, 3**15 - 1))
def test_hall_witt_on_example38(x, y, z):
    g = group("example38:n=3")
    x, y, z = g.from_code(x), g.from_code(y), g.from_code(z)
    c = g.commutator
    lhs = (g.conjugate(c(c(x, ~y), z), y) * g.conjugate(c(c(y, ~z), x), z)
           * g.conjugate(c(c(z, ~x), y), x))
    assert lhs.is_identity()


def test_claim_filter():
    g = group("m27")
    ids = [r.claim for r in I.verify_claims(g, ["L3.2"])]
    assert ids == ["L3.2.2", "L3.2.3", "L3.2.4"]
    ids = [r.claim for r in I.verify_claims(g, ["C3.8.*"])]
    assert ids == [f"C3.8.{k}" for k in range(1, 14)]
    assert [r.claim for r in I.verify_claims(g, ["HW", "T1.3"])] == ["T1.3", "HW"]


def test_vacuous_when_hypothesis_fails():
    for r in I.verify_claims(group("c3wrc3"), ["L3.1", "L3.3", "T1.3"]):
        assert r.verdict == I.VACUOUS and r.hypothesis == I.VIOLATED


@pytest.mark.parametrize("label", ["ex27xex27", "extraspecial27_exp9", "m27xc3"])
def test_permutation_identity_shortcut_agrees_with_scan(label):
    g = group(label)
    short = I.lemma32(g, 2, mode="exhaustive")
    scan = I.lemma32(g, 2, mode="exhaustive", shortcut=False)
    assert short.mode == P.STRUCTURAL
    assert scan.mode == P.EXHAUSTIVE and scan.stats["violations"] == 0
    assert short.verdict == scan.verdict == I.HOLDS


@pytest.mark.parametrize("label", SMALL_LABELS)
def test_torsion_commutator_identity_both_domains(label):
    g = group(label)
    a = I.lemma31(g, mode="exhaustive", domain="set")
    b = I.lemma31(g, mode="exhaustive", domain="subgroup")
    assert a.verdict == b.verdict
    assert a.ok


def _cube_expansion_holds(a, b):
    g = a.group
    ab = a * b
    c = g.commutator(ab, b)
    rhs = ab ** 3 * c ** 3 * g.conjugate(g.commutator(ab, b, ab), c ** 2) * g.commutator(ab, b, b)
    return a ** 3 * b ** 3 == rhs


@pytest.mark.parametrize("label", ["c3wrc3", "burnside:d=2", "m27xc3"])
def test_cube_expansion_matches_scalar_check(label):
    g = group(label)
    r = I.lemma34(g, mode="exhaustive")
    brute = all(_cube_expansion_holds(a, b) for a in g.elements() for b in g.elements())
    assert (r.verdict == I.HOLDS) is brute
    assert r.informative is False


def test_cube_expansion_informative_above_class_3(ex38):
    r = I.lemma34(ex38, mode="sampled", samples=500, seed=1)
    assert r.informative is True and r.ok


def test_sampled_identity_is_reproducible():
    g = group("example38:n=3")
    a = I.lemma31(g, mode="sampled", samples=2000, seed=5)
    b = I.lemma31(g, mode="sampled", samples=2000, seed=5)
    assert a.as_dict() == b.as_dict()
    assert a.stats["seed"] == 5 and a.stats["tuples"] == 2000


def test_semi_witness_classification(ex38):
    w = I.semi_witnesses(ex38, 2, budget=20)
    assert len(w.case1) == 20
    assert w.case2 == [] and w.complete
    for a, b in w.case1:
        a, b = ex38.from_code(a), ex38.from_code(b)
        assert ((a * b) ** 9).is_identity()
        assert not (a ** 9 * b ** 9).is_identity()
