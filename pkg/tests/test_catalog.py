import pytest

from pcg import catalog
from pcg import properties as P
from pcg import structure as S
from pcg.errors import ParameterError

from conftest import group

CHEAP = {
    "order": lambda g: g.order,
    "exponent": lambda g: S.exponent(g),
    "nilpotency_class": S.nilpotency_class,
    "rank": S.rank,
    "metabelian": S.is_metabelian,
    "lower_central_log": lambda g: [S.log_p(s.order, g.prime) for s in S.lower_central_series(g)],
    "g4_rank": lambda g: S.rank(S.lower_central_series(g)[3]),
}

VERDICTS = {
    "p_abelian": lambda g: P.is_p_abelian(g, "exhaustive").holds,
    "regular": lambda g: P.is_regular(g, "exhaustive").holds,
    "strongly_semi": lambda g: P.is_strongly_semi_abelian(g).holds,
    "semi_1": lambda g: P.is_semi_abelian_pi(g, 1).holds,
    "semi_2": lambda g: P.is_semi_abelian_pi(g, 2).holds,
    "inner_semi_2": lambda g: P.is_inner_semi_abelian(g, 2).holds,
}


def _specs():
    out = []
    for name in catalog.names():
        if name == "example38":
            continue
        out.append(catalog.entry(name).label())
    return out + ["cyclic:p=5,k=2", "elementary:p=2,d=3", "burnside:d=2"]


@pytest.mark.parametrize("spec", _specs())
def test_recorded_facts_recomputed(spec):
    name, params = catalog.parse_spec(spec)
    g = group(spec)
    for fact in catalog.entry(name).fact_list(**params):
        fn = CHEAP.get(fact.key) or VERDICTS.get(fact.key)
        assert fn is not None, f"no check for fact {fact.key}"
        assert fn(g) == fact.value, f"{spec}: {fact.key}"


def test_example38_structural_facts(ex38):
    for fact in catalog.entry("example38").fact_list(n=3):
        if fact.key in CHEAP:
            assert CHEAP[fact.key](ex38) == fact.value, fact.key


def test_example38_text_is_stable():
    shipped = (catalog.DATA / "example38_n3.pcp").read_text()
    assert shipped == catalog.example38_text(3)


def test_example38_larger_n():
    g = group("example38:n=4")
    assert g.order == 3**16
    assert S.exponent(g) == 81
    assert S.nilpotency_class(g) == 5


@pytest.mark.parametrize("spec", ["cyclic:p=4,k=1", "cyclic:p=3,k=0", "burnside:d=4",
                                  "example38:n=2", "nosuchgroup", "cyclic:p=3,q=1",
                                  "cyclic:p=three"])
def test_bad_parameters(spec):
    with pytest.raises(ParameterError):
        catalog.from_spec(spec)


def test_labels():
    assert catalog.label("example38") == "example38:n=3"
    assert catalog.label("cyclic:k=3,p=3") == "cyclic:p=3,k=3"
    assert catalog.label("m27") == "m27"
