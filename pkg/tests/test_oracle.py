import pytest

from pcg import oracle as O
from pcg import properties as P
from pcg.errors import CapacityError

from conftest import group


def test_table_is_group_table():
    t = O.build_table(group("c3wrc3"))
    assert O.table_defects(t) == []
    assert t.orders().max() == 9
    assert len(t.closure([1])) == 3


def test_corrupted_table_detected():
    g = group("m27")
    t = O.build_table(g)
    t.table[5, 7], t.table[5, 8] = t.table[5, 8], t.table[5, 7]
    report = O.cross_validate(g, t, spot=0)
    assert not report.ok
    assert report.disagreements[0]["op"] == "multiply"
    assert report.disagreements[0]["args"][0] == 5


def test_broken_latin_square_rejected():
    t = O.build_table(group("m27"))
    t.table[3, 4] = t.table[3, 5]
    assert "some row is not a permutation" in O.table_defects(t)


def test_capacity_guard():
    with pytest.raises(CapacityError):
        O.build_table(group("example38:n=3"))


def test_oracle_semi_witness():
    g = group("c3wrc3")
    t = O.build_table(g)
    v = O.oracle_semi_abelian(t, 1)
    assert v.holds is False
    assert P.semi_violation(*v.witness, 3)
    assert O.oracle_semi_abelian(t, 2).holds is True


def test_sampled_cross_validation_on_largest_small_group():
    g = group("burnside:d=3")
    t = O.build_table(g)
    report = O.cross_validate(g, t, samples=20_000, seed=1)
    assert report.sampled and report.ok and report.pairs == 20_000
