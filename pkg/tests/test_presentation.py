import pytest
from hypothesis import given, strategies as st

from pcg import catalog
from pcg.errors import PresentationError
from pcg.presentation import parse, serialize, validate

C3WRC3 = """pgroup p=3
gen t order 3
gen u1 order 3
gen u2 order 3
gen u3 order 3
comm [u1,t] = u2
comm [u2,t] = u3
"""


def test_parse_basic():
    pres = parse(C3WRC3)
    assert pres.prime == 3
    assert pres.names == ("t", "u1", "u2", "u3")
    assert pres.order == 81
    assert len(pres.commutator_tails) == 2
    assert validate(pres) == []


@pytest.mark.parametrize("label", [label for label, _ in catalog.default_corpus()])
def test_serialize_round_trip(label):
    pres = catalog.from_spec(label)
    again = parse(serialize(pres))
    assert again == pres
    assert serialize(again) == serialize(pres)


@pytest.mark.parametrize("text, where", [
    ("pgroup p=4\ngen a order 4\n", "line 1"),
    ("pgroup p=3\ngen a order 6\n", "line 2"),
    ("pgroup p=3\ngen a order 3\npow a = q\n", "line 3"),
    ("pgroup p=3\ngen a order 3\ngen a order 3\n", "line 3"),
    ("pgroup p=3\ngen a order 3\nfrobnicate a\n", "line 3"),
])
def test_parse_errors_carry_location(text, where):
    with pytest.raises(PresentationError) as info:
        parse(text)
    assert where in str(info.value)


def test_shape_diagnostics():
    text = "pgroup p=3\ngen a order 3\ngen b order 3\ncomm [b,a] = a\n"
    diags = validate(parse(text))
    assert diags and diags[0].rule == "commutator-shape"


@pytest.mark.parametrize("path", catalog.fixture_paths("malformed"), ids=lambda p: p.name)
def test_malformed_fixtures_rejected(path):
    try:
        pres = parse(path.read_text())
    except PresentationError:
        return
    assert validate(pres), "expected a shape diagnostic"


@given(st.lists(st.integers(1, 3), min_size=1, max_size=5), st.sampled_from([2, 3, 5]))
def test_cyclic_products_round_trip(ks, p):
    text = catalog.cyclic_text(p, ks[0])
    for k in ks[1:]:
        text = catalog.direct_product_text(text, catalog.cyclic_text(p, k))
    pres = parse(text)
    assert pres.order == p ** sum(ks)
    assert parse(serialize(pres)) == pres
    assert validate(pres) == []
