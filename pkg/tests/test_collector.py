import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcg import catalog
from pcg.collector import build_group, check_consistency, PcGroup
from pcg.errors import InconsistentPresentationError, MixedGroupError, PresentationError
from pcg.presentation import parse

from conftest import group

SPECS = ["c3wrc3", "m27xc9", "burnside:d=3", "cyclic:p=5,k=2", "elementary:p=2,d=3",
         "example38:n=3"]


def elements(spec):
    g = group(spec)
    return st.integers(0, g.order - 1).map(g.from_code)


@pytest.mark.parametrize("spec", SPECS)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_group_axioms(spec, data):
    g = group(spec)
    a, b, c = (data.draw(elements(spec)) for _ in range(3))
    e = g.identity()
    assert (a * b) * c == a * (b * c)
    assert a * e == a == e * a
    assert a * ~a == e
    assert a ** g.element_order(a) == e
    assert a ** -1 == ~a
    assert g.commutator(a, b) == ~a * ~b * a * b
    assert g.conjugate(a, b) == ~b * a * b


@pytest.mark.parametrize("spec", SPECS)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_normal_form_of_words(spec, data):
    g = group(spec)
    a = data.draw(elements(spec))
    b = data.draw(elements(spec))
    assert g.normalize(g.word_of(a)) == a
    assert g.normalize(g.word_of(a) + g.word_of(b)) == a * b
    assert g.from_code(a.code) == a


@pytest.mark.parametrize("spec", SPECS)
def test_bulk_matches_scalar(spec):
    g = group(spec)
    rng = np.random.default_rng(7)
    a = rng.integers(0, g.order, 300)
    b = rng.integers(0, g.order, 300)
    prod = g.multiply_codes(a, b)
    comm = g.commutator_codes(a, b)
    inv = g.inverse_codes(a)
    orders = g.order_codes(a)
    for k in range(300):
        x, y = g.from_code(a[k]), g.from_code(b[k])
        assert prod[k] == (x * y).code
        assert comm[k] == g.commutator(x, y).code
        assert inv[k] == (~x).code
        assert orders[k] == g.element_order(x)


def test_power_relations_respected():
    g = group("m27")
    x = g.gen("x")
    assert g.element_order(x) == 9
    assert g.order == 27


def test_mixed_groups_rejected():
    g, h = group("c3wrc3"), group("m27")
    with pytest.raises(MixedGroupError):
        g.gen(0) * h.gen(0)


@pytest.mark.parametrize("label", [label for label, _ in catalog.default_corpus()])
def test_catalog_presentations_consistent(label):
    assert check_consistency(PcGroup(catalog.from_spec(label))) == []


@pytest.mark.parametrize("path", catalog.fixture_paths("bad"), ids=lambda p: p.name)
def test_bad_fixtures_rejected(path):
    pres = parse(path.read_text())
    failures = check_consistency(PcGroup(pres))
    assert failures
    assert all(f.kind in ("kji", "power-left", "power-right", "power-self") for f in failures)
    with pytest.raises(InconsistentPresentationError):
        build_group(pres)


def test_shape_violation_blocks_build():
    pres = parse("pgroup p=3\ngen a order 3\ngen b order 3\ncomm [b,a] = a\n")
    with pytest.raises(PresentationError):
        build_group(pres)


def test_example38_literal_reading_is_inconsistent():
    path = [p for p in catalog.fixture_paths("bad") if p.name == "example38_literal.pcp"][0]
    failures = check_consistency(PcGroup(parse(path.read_text())))
    assert {f.kind for f in failures} == {"kji"}
