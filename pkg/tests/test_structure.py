import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcg import oracle as O
from pcg import structure as S

from conftest import SMALL_LABELS, group

KNOWN = {
    # label: (lower central orders as log_p, exponent, class, rank, metabelian)
    "cyclic:p=3,k=3": ([3, 0], 27, 1, 1, True),
    "elementary:p=3,d=3": ([3, 0], 3, 1, 3, True),
    "extraspecial27_exp3": ([3, 1, 0], 3, 2, 2, True),
    "m27": ([3, 1, 0], 9, 2, 2, True),
    "c3wrc3": ([4, 2, 1, 0], 9, 3, 2, True),
    "burnside:d=3": ([7, 4, 1, 0], 3, 3, 3, True),
    "ex27xex27": ([6, 2, 0], 3, 2, 4, True),
}


@pytest.mark.parametrize("label", sorted(KNOWN))
def test_known_invariants(label):
    g = group(label)
    lower, exp, cls, rank, meta = KNOWN[label]
    assert [S.log_p(s.order, g.prime) for s in S.lower_central_series(g)] == lower
    stats = S.group_stats(g)
    assert (stats.exponent, stats.nilpotency_class, stats.rank, stats.metabelian) == \
        (exp, cls, rank, meta)


def test_example38_series(ex38):
    assert [S.log_p(s.order, 3) for s in S.lower_central_series(ex38)] == [15, 10, 8, 6, 3, 0]
    assert [S.log_p(s.order, 3) for s in S.center_and_upper_series(ex38)] == \
        [0, 5, 9, 12, 13, 15]
    assert S.rank(ex38) == 2
    assert [ex38.spell(x) for x in S.minimal_generators(ex38)] == ["a1", "a2"]


def _members(h):
    return set(int(c) for c in h.members())


@pytest.mark.parametrize("label", [l for l in SMALL_LABELS if group(l).order <= 3**5])
def test_series_against_table(label):
    g = group(label)
    t = O.build_table(g)
    lower = S.lower_central_series(g)
    assert [s.order for s in lower] == t.lower_central_orders()
    z = S.center(g)
    every = np.arange(g.order)
    central = [x for x in every if (t.table[x] == t.table[:, x]).all()]
    assert _members(z) == set(central)
    phi, maximals = S.frattini_and_maximals(g)
    assert all(m.order * g.prime == g.order for m in maximals)
    inter = set(range(g.order))
    for m in maximals:
        inter &= _members(m)
    assert _members(phi) == inter
    # Phi = Agemo_1(G) G'
    assert _members(phi) == _members(S.join(S.agemo(g, 1)[1], S.derived_subgroup(S.whole_group(g))))
    assert len(maximals) == (g.prime ** S.rank(g) - 1) // (g.prime - 1)


@pytest.mark.parametrize("label", ["c3wrc3", "m27xc9", "ex27xex27", "burnside:d=2"])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_closure_is_closed(label, data):
    g = group(label)
    codes = data.draw(st.lists(st.integers(0, g.order - 1), min_size=1, max_size=3))
    h = S.closure(g, [g.from_code(c) for c in codes])
    mem = _members(h)
    assert set(codes) <= mem
    assert len(mem) == h.order
    arr = np.array(sorted(mem))
    a = np.repeat(arr, len(arr))
    b = np.tile(arr, len(arr))
    assert set(int(x) for x in g.multiply_codes(a, b)) == mem
    assert all(g.from_code(c) in h for c in codes)


@pytest.mark.parametrize("label", SMALL_LABELS)
def test_power_sets(label):
    g = group(label)
    t = O.build_table(g)
    r = S.log_p(S.exponent(g), g.prime)
    for i in range(1, r + 1):
        kset, w = S.omega(g, i)
        aset, a = S.agemo(g, i)
        assert (len(kset), len(aset), w.order, a.order) == O.oracle_power_sets(t, i)


def test_transversal_covers_group(ex38):
    reps, tail = S.whole_group(ex38).transversal()
    assert len(reps) * tail.order == ex38.order
    assert tail.issubgroup(S.center(ex38))
