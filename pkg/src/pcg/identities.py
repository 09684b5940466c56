"""Checkers for commutator identities and the claim registry.

Each checker returns a :class:`ClaimReport`. A checker first evaluates the
hypothesis of its claim with the decision procedures in
:mod:`pcg.properties`; when the hypothesis does not hold the report is
``vacuous`` and the identity itself is not examined.

Commutator identities only depend on their arguments modulo the center, so
exhaustive scans run over coset representatives of Z(G). The elements x of
order dividing 3 are taken from the set {x : x^3 = 1} by default, or from the
subgroup it generates with ``domain="subgroup"``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from . import properties as P
from . import structure as S
from .config import DEFAULT_LIMITS
from .errors import CapacityError

HOLDS, FAILS, VACUOUS, UNKNOWN = "holds", "fails", "vacuous", "unknown"
SATISFIED, VIOLATED, NOT_CHECKED = "satisfied", "violated", "not-checked"
BUDGETED = "budgeted"


@dataclass
class ClaimReport:
    claim: str
    statement: str
    hypothesis: str
    verdict: str
    mode: str
    witness: tuple = None
    stats: dict = field(default_factory=dict)
    informative: bool = False  # recorded, but not counted as a failure
    elapsed: float = 0.0

    def __post_init__(self):
        if (self.verdict == VACUOUS) != (self.hypothesis == VIOLATED):
            raise ValueError("vacuous exactly when the hypothesis is violated")
        if self.verdict == FAILS and self.witness is None:
            raise ValueError("a failing claim needs a witness")

    @property
    def ok(self):
        return self.verdict in (HOLDS, VACUOUS) or self.informative

    def as_dict(self, timings=False):
        out = {"claim": self.claim, "statement": self.statement,
               "hypothesis": self.hypothesis, "verdict": self.verdict, "mode": self.mode}
        if self.witness is not None:
            out["witness"] = [P.element_record(x) for x in self.witness]
        if self.stats:
            out["stats"] = self.stats
        if self.informative:
            out["informative"] = True
        if timings:
            out["elapsed"] = round(self.elapsed, 3)
        return out


class Facts:
    """Lazily computed and shared facts about one group."""

    def __init__(self, g, tasks=1, limits=DEFAULT_LIMITS):
        self.g = g
        self.tasks = tasks
        self.limits = limits
        self._memo = {}

    def _get(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    def semi(self, i):
        return self._get(("semi", i), lambda: P.is_semi_abelian_pi(self.g, i, self.tasks))

    def inner(self, i):
        return self._get(("inner", i), lambda: P.is_inner_semi_abelian(self.g, i, self.tasks))

    def strongly(self):
        return self._get("strongly", lambda: P.is_strongly_semi_abelian(self.g, self.tasks))

    @property
    def exponent(self):
        return self._get("exponent", lambda: S.exponent(self.g, self.tasks))

    @property
    def r(self):
        return S.log_p(self.exponent, self.g.prime)

    @property
    def d(self):
        return self._get("d", lambda: S.rank(self.g))

    @property
    def nilpotency_class(self):
        return S.nilpotency_class(self.g)

    @property
    def metabelian(self):
        return self._get("metabelian", lambda: S.is_metabelian(self.g))

    @property
    def center(self):
        return self._get("center", lambda: S.center(self.g))

    @property
    def lower(self):
        return S.lower_central_series(self.g)

    @property
    def upper(self):
        return S.center_and_upper_series(self.g)

    @property
    def derived(self):
        return self._get("derived", lambda: S.derived_subgroup(self.g))

    def center_reps(self):
        """Sorted representatives of G modulo Z(G), each the least code in its coset."""
        def build():
            reps, _ = S.whole_group(self.g).transversal()
            return _least_per_coset(self.center, reps)
        return self._get("zreps", build)

    def torsion_codes(self, domain):
        """Codes of x with x^3 = 1 (``set``) or of the subgroup they generate."""
        def build():
            kset, w = S.omega(self.g, 1, self.tasks)
            if domain == "set":
                return kset.head
            if domain == "subgroup":
                return w.members(self.limits.element_cap)
            raise ValueError(f"unknown domain {domain!r}")
        return self._get(("torsion", domain), build)

    def semi3_inner9(self):
        """The standing hypothesis of the later results: p = 3, semi-3, inner semi-9."""
        if self.g.prime != 3:
            return False, {"reason": "p != 3"}
        s1 = self.semi(1).holds
        i2 = self.inner(2).holds
        return bool(s1 and i2), {"semi_3": s1, "inner_semi_9": i2}


def _least_per_coset(sub, codes):
    if sub.order == 1:
        return np.asarray(codes, dtype=np.int64)
    labels = sub.coset_reps(codes)
    _, first = np.unique(labels, return_index=True)
    return np.sort(np.asarray(codes, dtype=np.int64)[first])


# ------------------------------------------------------------ bulk helpers

def _col(x, n):
    if np.ndim(x) == 0:
        return np.full(n, int(x), dtype=np.int64)
    return np.asarray(x, dtype=np.int64)


def _comm(g, *cols):
    """Left-normed commutator of code columns."""
    n = max(len(c) if np.ndim(c) else 1 for c in cols)
    out = _col(cols[0], n)
    for c in cols[1:]:
        out = g.commutator_codes(out, _col(c, n))
    return out


def _mul(g, *cols):
    n = max(len(c) if np.ndim(c) else 1 for c in cols)
    out = _col(cols[0], n)
    for c in cols[1:]:
        out = g.multiply_codes(out, _col(c, n))
    return out


def _conj(g, x, y):
    """x^y = y^-1 x y."""
    return _mul(g, g.inverse_codes(y), x, y)


def _tuple_chunks(sizes, chunk=1 << 20):
    """Index tuples of a product of ranges in lexicographic order, in blocks."""
    total = int(np.prod(sizes, dtype=object))
    for start in range(0, total, chunk):
        flat = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield np.unravel_index(flat, sizes)


def _first_row(cols, mask):
    k = int(np.argmax(mask))
    return tuple(int(c[k]) for c in cols)


def _least_row(cols, mask):
    idx = np.flatnonzero(mask)
    order = np.lexsort(tuple(c[idx] for c in reversed(cols)))
    k = idx[order[0]]
    return tuple(int(c[k]) for c in cols)


def _scan(domains, test, mode, samples, seed, cap):
    """Run a vectorized identity test over tuples drawn from ``domains``.

    ``test(cols)`` returns a boolean mask of violations. Exhaustive mode
    walks every tuple in lexicographic order and reports the first
    violation, which is the least one. Sampled mode draws ``samples`` tuples
    uniformly and reports the least violating sample.
    Returns (mode, tuples examined, violations, witness codes or None).
    """
    sizes = tuple(len(d) for d in domains)
    total = int(np.prod(sizes, dtype=object))
    if mode == "auto":
        mode = P.EXHAUSTIVE if total <= cap else P.SAMPLED
    if mode == P.EXHAUSTIVE:
        if total > cap:
            raise CapacityError(f"{total} tuples exceed the tuple cap {cap}")
        bad, first = 0, None
        for idx in _tuple_chunks(sizes):
            cols = [d[i] for d, i in zip(domains, idx)]
            mask = test(cols)
            hits = int(mask.sum())
            if hits and first is None:
                first = _first_row(cols, mask)
            bad += hits
        return mode, total, bad, first
    rng = np.random.default_rng(seed)
    cols = [d[rng.integers(0, len(d), size=samples)] for d in domains]
    mask = test(cols)
    bad = int(mask.sum())
    return mode, samples, bad, (_least_row(cols, mask) if bad else None)


def _elements(g, codes):
    return tuple(g.from_code(c) for c in codes)


def _report(claim, statement, hyp_ok, hyp_detail, t0, **kw):
    if not hyp_ok:
        stats = dict(kw.pop("stats", {}))
        stats["hypothesis"] = hyp_detail
        return ClaimReport(claim, statement, VIOLATED, VACUOUS, P.STRUCTURAL, stats=stats,
                           elapsed=time.perf_counter() - t0)
    stats = dict(kw.pop("stats", {}))
    if hyp_detail:
        stats["hypothesis"] = hyp_detail
    return ClaimReport(claim, statement, SATISFIED, stats=stats,
                       elapsed=time.perf_counter() - t0, **kw)


def _scan_report(claim, statement, g, mode, n, bad, first, recheck, t0, hyp_detail=None,
                 seed=None, extra=None, informative=False):
    stats = {"tuples": n, "violations": bad}
    if mode == P.SAMPLED:
        stats["seed"] = seed
    stats.update(extra or {})
    if first is None:
        return _report(claim, statement, True, hyp_detail, t0, verdict=HOLDS, mode=mode,
                       stats=stats, informative=informative)
    witness = _elements(g, first)
    if not recheck(*witness):
        raise AssertionError(f"{claim} witness does not re-verify")
    return _report(claim, statement, True, hyp_detail, t0, verdict=FAILS, mode=mode,
                   witness=witness, stats=stats, informative=informative)


# ----------------------------------------------------------- identities

def hall_witt(g, mode="auto", samples=100_000, seed=0, limits=DEFAULT_LIMITS):
    """[[x,y^-1],z]^y [[y,z^-1],x]^z [[z,x^-1],y]^x = 1 for all x, y, z.

    This holds in every group, so a violation points at the collector. In
    auto mode the scan is exhaustive only when there are no more triples
    than ``samples``.
    """
    t0 = time.perf_counter()
    if mode == "auto":
        mode = P.EXHAUSTIVE if g.order ** 3 <= samples else P.SAMPLED
    all_codes = np.arange(g.order, dtype=np.int64) if g.order <= limits.element_cap else None
    if all_codes is None:
        if mode == P.EXHAUSTIVE:
            raise CapacityError(f"order {g.order} exceeds the element cap")
        mode = P.SAMPLED
        rng = np.random.default_rng(seed)
        doms = [rng.integers(0, g.order, size=samples, dtype=np.int64) for _ in range(3)]
        # sample indices into already random columns: identity map
        domains = None
    else:
        domains = [all_codes] * 3

    def test(cols):
        x, y, z = cols
        xi, yi, zi = g.inverse_codes(x), g.inverse_codes(y), g.inverse_codes(z)
        u = _conj(g, _comm(g, _comm(g, x, yi), z), y)
        v = _conj(g, _comm(g, _comm(g, y, zi), x), z)
        w = _conj(g, _comm(g, _comm(g, z, xi), y), x)
        return _mul(g, u, v, w) != 0

    def recheck(x, y, z):
        u = g.commutator(g.commutator(x, ~y), z)
        v = g.commutator(g.commutator(y, ~z), x)
        w = g.commutator(g.commutator(z, ~x), y)
        return not (g.conjugate(u, y) * g.conjugate(v, z) * g.conjugate(w, x)).is_identity()

    if domains is None:
        mask = test(doms)
        bad = int(mask.sum())
        first = _least_row(doms, mask) if bad else None
        n = samples
    else:
        mode, n, bad, first = _scan(domains, test, mode, samples, seed, limits.tuple_cap)
    return _scan_report("HW", "Hall-Witt identity", g, mode, n, bad, first, recheck, t0,
                        seed=seed)


def _semi3(f):
    if f.g.prime != 3:
        return False, {"reason": "p != 3"}
    ok = f.semi(1).holds
    return bool(ok), {"semi_3": ok}


def _torsion_domain(f, domain, mode):
    """Elements x with x^3 = 1; reduced modulo the center for exhaustive scans."""
    codes = f.torsion_codes(domain)
    return codes, _least_per_coset(f.center, codes)


def lemma31(g, mode="auto", domain="set", samples=10_000, seed=0, tasks=1,
            limits=DEFAULT_LIMITS, facts=None):
    """[x,b,a][x,a,b] = 1 for x of order dividing 3 and all a, b (semi-3-abelian G)."""
    t0 = time.perf_counter()
    f = facts or Facts(g, tasks, limits)
    statement = "[x,b,a][x,a,b] = 1 when x^3 = 1"
    ok, hyp = _semi3(f)
    if not ok:
        return _report("L3.1", statement, False, hyp, t0)
    xs, xz = _torsion_domain(f, domain, mode)
    zr = f.center_reps()
    domains = _domains(mode, [xz, zr, zr], [xs, None, None], g, limits.tuple_cap)

    def test(cols):
        x, a, b = cols
        return _mul(g, _comm(g, x, b, a), _comm(g, x, a, b)) != 0

    def recheck(x, a, b):
        return not (g.commutator(x, b, a) * g.commutator(x, a, b)).is_identity()

    mode, n, bad, first = _scan(domains, test, mode, samples, seed, limits.tuple_cap)
    return _scan_report("L3.1", statement, g, mode, n, bad, first, recheck, t0, hyp, seed,
                        {"domain": domain})


def _domains(mode, reduced, full, g, cap):
    """Pick reduced domains for exhaustive scans and full ones for sampling.

    ``None`` in ``full`` stands for the whole group.
    """
    total = int(np.prod([len(d) for d in reduced], dtype=object))
    exhaustive = mode == P.EXHAUSTIVE or (mode == "auto" and total <= cap)
    if exhaustive:
        return reduced
    return [np.arange(g.order, dtype=np.int64) if d is None else d for d in full]


def _parity(perm):
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return inv % 2


def lemma32(g, k=3, mode="auto", domain="set", samples=10_000, seed=0, tasks=1,
            limits=DEFAULT_LIMITS, facts=None, shortcut=True):
    """[x, g_s(1), ..., g_s(k)] = [x, g_1, ..., g_k]^(2^delta(s)) for every permutation s.

    delta is 0 on even permutations and 1 on odd ones; x^3 = 1, G semi-3-abelian.
    When the class is at most k both sides are trivial; ``shortcut=False``
    scans the tuples anyway.
    """
    t0 = time.perf_counter()
    if not 2 <= k <= 4:
        raise ValueError("k must be 2, 3 or 4")
    f = facts or Facts(g, tasks, limits)
    statement = f"[x,g_s(1),...,g_s({k})] = [x,g_1,...,g_{k}]^(2^delta(s)) when x^3 = 1"
    claim = f"L3.2.{k}"
    ok, hyp = _semi3(f)
    if not ok:
        return _report(claim, statement, False, hyp, t0)
    if shortcut and f.nilpotency_class <= k and mode != P.SAMPLED:
        return _report(claim, statement, True, hyp, t0, verdict=HOLDS, mode=P.STRUCTURAL,
                       stats={"reason": f"class {f.nilpotency_class} <= {k}: both sides are 1"})
    xs, xz = _torsion_domain(f, domain, mode)
    zr = f.center_reps()
    domains = _domains(mode, [xz] + [zr] * k, [xs] + [None] * k, g, limits.tuple_cap)
    perms = [s for s in permutations(range(k)) if list(s) != list(range(k))]

    def test(cols):
        x, gs = cols[0], cols[1:]
        base = _comm(g, x, *gs)
        sq = g.power_codes(base, 2)
        bad = np.zeros(len(x), dtype=bool)
        for s in perms:
            lhs = _comm(g, x, *[gs[j] for j in s])
            bad |= lhs != (sq if _parity(s) else base)
        return bad

    def recheck(x, *gs):
        base = g.commutator(x, *gs)
        for s in perms:
            want = base ** 2 if _parity(s) else base
            if g.commutator(x, *[gs[j] for j in s]) != want:
                return True
        return False

    mode, n, bad, first = _scan(domains, test, mode, samples, seed, limits.tuple_cap)
    return _scan_report(claim, statement, g, mode, n, bad, first, recheck, t0, hyp, seed,
                        {"domain": domain, "k": k})


def lemma33(g, tasks=1, limits=DEFAULT_LIMITS, facts=None):
    """Omega_1(G) <= Z_(d+1)(G); and a^m in Z_d(G) when a is a generator and (a^m)^3 = 1."""
    t0 = time.perf_counter()
    f = facts or Facts(g, tasks, limits)
    statement = "Omega_1(G) <= Z_(d+1)(G), and a_i^m in Z_d(G) when (a_i^m)^3 = 1"
    ok, hyp = _semi3(f)
    if not ok:
        return _report("L3.3", statement, False, hyp, t0)
    d = f.d
    upper = f.upper
    top = upper[min(d + 1, len(upper) - 1)]
    z_d = upper[min(d, len(upper) - 1)]
    _, w = S.omega(g, 1, tasks)
    stats = {"d": d, "omega_1": w.order, "Z_d": z_d.order, "Z_d+1": top.order}
    for x in w.base_elements():
        if x not in top:
            return _report("L3.3", statement, True, hyp, t0, verdict=FAILS,
                           mode=P.EXHAUSTIVE, witness=(x,), stats=stats)
    gens = S.minimal_generators(g)
    checked = 0
    for a in gens:
        for m in range(1, g.element_order(a)):
            x = a ** m
            if (x ** 3).is_identity():
                checked += 1
                if x not in z_d:
                    return _report("L3.3", statement, True, hyp, t0, verdict=FAILS,
                                   mode=P.EXHAUSTIVE, witness=(a, x), stats=stats)
    stats["generators"] = [g.spell(a) for a in gens]
    stats["generator_powers_checked"] = checked
    return _report("L3.3", statement, True, hyp, t0, verdict=HOLDS, mode=P.EXHAUSTIVE,
                   stats=stats)


def lemma34(g, mode="auto", samples=100_000, seed=0, limits=DEFAULT_LIMITS, informative=None,
            facts=None):
    """a^3 b^3 = (ab)^3 [ab,b]^3 [ab,b,ab]^([ab,b]^2) [ab,b,b].

    Stated for all groups. On groups of class above 3 the verdict is
    recorded without counting as a failure unless ``informative`` is False.
    """
    t0 = time.perf_counter()
    f = facts or Facts(g, 1, limits)
    statement = "a^3 b^3 = (ab)^3 [ab,b]^3 [ab,b,ab]^([ab,b]^2) [ab,b,b]"
    if informative is None:
        informative = f.nilpotency_class > 3
    codes = np.arange(g.order, dtype=np.int64) if g.order <= limits.element_cap else None
    if codes is None:
        if mode == P.EXHAUSTIVE:
            raise CapacityError(f"order {g.order} exceeds the element cap")
        mode = P.SAMPLED

    def test(cols):
        a, b = cols
        ab = _mul(g, a, b)
        u = _comm(g, ab, b)
        rhs = _mul(g, g.power_codes(ab, 3), g.power_codes(u, 3),
                   _conj(g, _comm(g, ab, b, ab), g.power_codes(u, 2)), _comm(g, ab, b, b))
        return _mul(g, g.power_codes(a, 3), g.power_codes(b, 3)) != rhs

    def recheck(a, b):
        ab = a * b
        u = g.commutator(ab, b)
        rhs = ab ** 3 * u ** 3 * g.conjugate(g.commutator(ab, b, ab), u ** 2) * \
            g.commutator(ab, b, b)
        return a ** 3 * b ** 3 != rhs

    if codes is None:
        rng = np.random.default_rng(seed)
        cols = [rng.integers(0, g.order, size=samples, dtype=np.int64) for _ in range(2)]
        mask = test(cols)
        n, bad = samples, int(mask.sum())
        first = _least_row(cols, mask) if bad else None
    else:
        mode, n, bad, first = _scan([codes, codes], test, mode, samples, seed, limits.tuple_cap)
    return _scan_report("L3.4", statement, g, mode, n, bad, first, recheck, t0, None, seed,
                        {"class": f.nilpotency_class}, informative=informative)


# ------------------------------------------------- inner semi-9 witnesses

@dataclass
class SemiWitnesses:
    """Pairs violating semi-9-abelianness, split by direction, in lexicographic order."""

    case1: list
    case2: list
    complete: bool  # every pair was classified
    totals: dict


def _fiber_witnesses(reps, lab, labinv, pw, pwinv, budget):
    """Witnesses when {x : x^q = 1} is a subgroup W.

    Then (ab)^q = 1 iff bW = a^-1 W, and a^q b^q = 1 iff b^q = (a^q)^-1, so
    both conditions compare precomputed labels.
    """
    pv, pi = np.unique(pw, return_inverse=True)
    lv, li = np.unique(lab, return_inverse=True)
    nl = len(lv)
    lab_size = np.bincount(li, minlength=nl)
    pw_size = np.bincount(pi, minlength=len(pv))
    pair_key, pair_size = np.unique(pi.astype(np.int64) * nl + li, return_counts=True)
    labs_per_pw = np.bincount(pair_key // nl, minlength=len(pv))
    pws_per_lab = np.bincount(pair_key % nl, minlength=nl)

    # dense indices for a^-1 W and (a^q)^-1; -1 when the power value never occurs
    la = np.searchsorted(lv, labinv)
    pa = np.searchsorted(pv, pwinv)
    pa_ok = (pa < len(pv)) & (pv[np.minimum(pa, len(pv) - 1)] == pwinv)
    key = np.where(pa_ok, pa.astype(np.int64) * nl + la, -1)
    pos = np.searchsorted(pair_key, key)
    pos = np.minimum(pos, len(pair_key) - 1)
    shared = np.where(pa_ok & (pair_key[pos] == key), pair_size[pos], 0)
    has_pair = shared > 0

    n1 = lab_size[la] - shared  # b in a^-1 W with b^q != (a^q)^-1
    n2 = np.where(pa_ok, pw_size[np.minimum(pa, len(pv) - 1)], 0) - shared
    rows1 = pws_per_lab[la] - has_pair > 0
    rows2 = np.where(pa_ok, labs_per_pw[np.minimum(pa, len(pv) - 1)], 0) - has_pair > 0

    case1, case2 = [], []
    for s in np.flatnonzero(rows1):
        if len(case1) >= budget:
            break
        hits = np.flatnonzero((lab == labinv[s]) & (pw != pwinv[s]))[:budget - len(case1)]
        case1 += [(int(reps[s]), int(reps[t])) for t in hits]
    for s in np.flatnonzero(rows2):
        if len(case2) >= budget:
            break
        hits = np.flatnonzero((pw == pwinv[s]) & (lab != labinv[s]))[:budget - len(case2)]
        case2 += [(int(reps[s]), int(reps[t])) for t in hits]
    totals = {"case1_pairs": int(n1.sum()), "case2_pairs": int(n2.sum())}
    return case1, case2, totals


def semi_witnesses(g, i=2, budget=100, tasks=1, row_cap=None):
    """The first ``budget`` violating pairs of each direction for q = p^i.

    Pairs range over representatives modulo the central block of G, in
    lexicographic order of codes. Raising either element to the q-th power
    or multiplying them does not see the block, so nothing is lost.
    """
    whole = S.whole_group(g)
    q = g.prime ** i
    reps, tail = whole.transversal()
    pw = S._power_table(whole, q, tasks)
    pwinv = g.inverse_codes(pw)
    kset, w = S.omega(g, i, tasks)
    if len(kset) == w.order:
        lab = w.coset_reps(reps, tasks)
        labinv = w.coset_reps(g.inverse_codes(reps), tasks)
        case1, case2, totals = _fiber_witnesses(reps, lab, labinv, pw, pwinv, budget)
        return SemiWitnesses(case1, case2, True, totals)
    case1, case2 = [], []
    rows = len(reps) if row_cap is None else min(row_cap, len(reps))
    for s in range(rows):
        ab = g.left_multiply_codes(reps[s], reps)
        if tail.order > 1:
            ab = tail.coset_reps(ab)
        pos = np.minimum(np.searchsorted(kset.head, ab), len(kset.head) - 1)
        left = kset.head[pos] == ab
        right = pw == pwinv[s]
        for t in np.flatnonzero(left & ~right)[:max(0, budget - len(case1))]:
            case1.append((int(reps[s]), int(reps[t])))
        for t in np.flatnonzero(right & ~left)[:max(0, budget - len(case2))]:
            case2.append((int(reps[s]), int(reps[t])))
        if len(case1) >= budget and len(case2) >= budget:
            break
    return SemiWitnesses(case1, case2, rows == len(reps) or
                         (len(case1) >= budget and len(case2) >= budget), {"rows": s + 1})


def case1_defect(a, b, center):
    """None if the case-(1) conclusions hold for (a, b), else the failing clause."""
    g = a.group
    ab = a * b
    u = g.commutator(ab, b, b)
    if u ** 3 != g.commutator(ab, b, b, ab, ab):
        return "[ab,b,b]^3 = [ab,b,b,ab,ab]"
    if g.commutator(ab, b, b, ab, b) not in center:
        return "[ab,b,b,ab,b] central"
    return None


def case2_defect(a, b, center):
    """None if the case-(2) conclusions hold for (a, b), else the failing clause."""
    g = a.group
    cs = [g.commutator(b, a, b, b, b), g.commutator(b, a, b, b, a),
          g.commutator(a, b, a, a, a), g.commutator(a, b, a, a, b)]
    names = ["[b,a,b,b,b]", "[b,a,b,b,a]", "[a,b,a,a,a]", "[a,b,a,a,b]"]
    for c, name in zip(cs, names):
        if c not in center:
            return f"{name} central"
    prod = cs[0] * cs[1] * cs[2] * cs[3] * g.commutator(a, b, a, b, a, b)
    if not prod.is_identity():
        return "five-factor product = 1"
    return None


THM36_STATEMENTS = {
    1: "(ab)^9 = 1, a^9 b^9 != 1 => [ab,b,b]^3 = [ab,b,b,ab,ab] and [ab,b,b,ab,b] in Z(G)",
    2: "a^9 b^9 = 1, (ab)^9 != 1 => [b,a,b,b,b], [b,a,b,b,a], [a,b,a,a,a], [a,b,a,a,b] "
       "in Z(G) and their product with [a,b,a,b,a,b] is 1",
}


def thm36(g, case, budget=100, tasks=1, limits=DEFAULT_LIMITS, facts=None, row_cap=None):
    """Check one case of the structure theorem for inner semi-9-abelian groups.

    Witness pairs are collected in lexicographic order up to ``budget``
    per case and each one is tested. When no pair of the given direction
    exists at all, the case is vacuous.
    """
    t0 = time.perf_counter()
    f = facts or Facts(g, tasks, limits)
    claim = f"T3.6.{case}"
    statement = THM36_STATEMENTS[case]
    ok, hyp = f.semi3_inner9()
    if not ok:
        return _report(claim, statement, False, hyp, t0)
    found = f._get(("thm36", budget, row_cap),
                   lambda: semi_witnesses(g, 2, budget, tasks, row_cap))
    pairs = found.case1 if case == 1 else found.case2
    stats = {"budget": budget, "witnesses": len(pairs), "search_complete": found.complete,
             **found.totals}
    if not pairs:
        if found.complete:
            hyp = {**hyp, "pairs_of_this_direction": 0}
            return _report(claim, statement, False, hyp, t0, stats=stats)
        return _report(claim, statement, True, hyp, t0, verdict=UNKNOWN, mode=BUDGETED,
                       stats=stats)
    center = f.center
    defect = case1_defect if case == 1 else case2_defect
    for a, b in pairs:
        x, y = g.from_code(a), g.from_code(b)
        why = defect(x, y, center)
        if why is not None:
            stats["failed_clause"] = why
            return _report(claim, statement, True, hyp, t0, verdict=FAILS, mode=BUDGETED,
                           witness=(x, y), stats=stats)
    return _report(claim, statement, True, hyp, t0, verdict=HOLDS, mode=BUDGETED, stats=stats)


# ------------------------------------------------------ structural claims

def _nontrivial(sub):
    """A nontrivial element of a subgroup, as a one-element witness."""
    return (sub.base_elements()[0],)


def t11(f, t0):
    statement = "strongly semi-3-abelian, exp <= 3^r, d generators => class <= (r-1)(d+1)+3"
    g = f.g
    if g.prime != 3:
        return _report("T1.1", statement, False, {"reason": "p != 3"}, t0)
    sv = f.strongly()
    if not sv.holds:
        return _report("T1.1", statement, False, {"strongly_semi_3": False}, t0)
    r, d, c = f.r, f.d, f.nilpotency_class
    bound = (r - 1) * (d + 1) + 3
    stats = {"r": r, "d": d, "class": c, "bound": bound}
    if c <= bound:
        return _report("T1.1", statement, True, None, t0, verdict=HOLDS, mode=P.EXHAUSTIVE,
                       stats=stats)
    return _report("T1.1", statement, True, None, t0, verdict=FAILS, mode=P.EXHAUSTIVE,
                   witness=_nontrivial(f.lower[bound]), stats=stats)


def t12(f, t0):
    statement = "semi-3-abelian and inner semi-9-abelian => G_7 = 1"
    ok, hyp = f.semi3_inner9()
    if not ok:
        return _report("T1.2", statement, False, hyp, t0)
    lower = f.lower
    stats = {"lower_central_orders": [s.order for s in lower]}
    if len(lower) <= 7:
        return _report("T1.2", statement, True, hyp, t0, verdict=HOLDS, mode=P.EXHAUSTIVE,
                       stats=stats)
    return _report("T1.2", statement, True, hyp, t0, verdict=FAILS, mode=P.EXHAUSTIVE,
                   witness=_nontrivial(lower[6]), stats=stats)


def t13(f, t0):
    statement = "metabelian and semi-p-abelian => strongly semi-p-abelian"
    if not f.metabelian:
        return _report("T1.3", statement, False, {"metabelian": False}, t0)
    if not f.semi(1).holds:
        return _report("T1.3", statement, False, {"metabelian": True, "semi_p": False}, t0)
    sv = f.strongly()
    if sv.holds:
        return _report("T1.3", statement, True, None, t0, verdict=HOLDS, mode=P.EXHAUSTIVE,
                       stats={"r": f.r})
    return _report("T1.3", statement, True, None, t0, verdict=FAILS, mode=P.EXHAUSTIVE,
                   witness=sv.witness, stats={"failing_i": sv.detail.get("failing_i")})


def l21(f, t0, samples=100_000, seed=0):
    statement = ("two-generated metabelian: p-abelian <=> exp(G') <= p and class < p")
    g = f.g
    if f.d > 2 or not f.metabelian:
        return _report("L2.1", statement, False, {"d": f.d, "metabelian": f.metabelian}, t0)
    pa = P.is_p_abelian(g, "auto", samples=samples, seed=seed, tasks=f.tasks, limits=f.limits)
    exp_derived = S.exponent(f.derived)
    right = exp_derived <= g.prime and f.nilpotency_class < g.prime
    stats = {"p_abelian": pa.holds, "exp_derived": exp_derived, "class": f.nilpotency_class}
    if pa.holds is None:
        if right:
            return _report("L2.1", statement, True, None, t0, verdict=UNKNOWN, mode=P.SAMPLED,
                           stats=stats)
        # sampling found no violation but the right side fails: undecided
        return _report("L2.1", statement, True, None, t0, verdict=UNKNOWN, mode=P.SAMPLED,
                       stats=stats)
    if pa.holds == right:
        return _report("L2.1", statement, True, None, t0, verdict=HOLDS, mode=pa.mode,
                       stats=stats)
    if pa.holds:
        # p-abelian, yet G' has large exponent or the class is too big
        if exp_derived > g.prime:
            reps, _ = f.derived.transversal()
            orders = g.order_codes(reps)
            witness = (g.from_code(reps[int(np.argmax(orders))]),)
        else:
            witness = _nontrivial(f.lower[g.prime - 1])
    else:
        witness = pa.witness
    return _report("L2.1", statement, True, None, t0, verdict=FAILS, mode=pa.mode,
                   witness=witness, stats=stats)


def l22(f, t0, samples=100_000, seed=0):
    statement = "semi-p^i-abelian => ([a^(p^i),b] = 1 <=> [a,b]^(p^i) = 1)"
    g = f.g
    levels = [i for i in range(1, f.r + 1) if f.semi(i).holds]
    if not levels:
        return _report("L2.2", statement, False, {"semi_levels": []}, t0)
    exhaustive = g.order ** 2 <= f.limits.tuple_cap
    codes = np.arange(g.order, dtype=np.int64)
    total, per = 0, {}
    for i in levels:
        q = g.prime ** i

        def test(cols, q=q):
            a, b = cols
            left = _comm(g, g.power_codes(a, q), b) == 0
            right = g.power_codes(_comm(g, a, b), q) == 0
            return left != right

        if exhaustive:
            mode, n, bad, first = _scan([codes, codes], test, P.EXHAUSTIVE, samples, seed,
                                        f.limits.tuple_cap)
        else:
            rng = np.random.default_rng(seed + i)
            cols = [rng.integers(0, g.order, size=samples, dtype=np.int64) for _ in range(2)]
            mask = test(cols)
            mode, n, bad = P.SAMPLED, samples, int(mask.sum())
            first = _least_row(cols, mask) if bad else None
        per[i] = bad
        total += n
        if first is not None:
            a, b = _elements(g, first)
            assert (g.commutator(a ** q, b).is_identity()
                    != (g.commutator(a, b) ** q).is_identity())
            return _report("L2.2", statement, True, {"semi_levels": levels}, t0,
                           verdict=FAILS, mode=mode, witness=(a, b),
                           stats={"i": i, "tuples": n})
    stats = {"levels": levels, "tuples": total, "violations": per}
    if not exhaustive:
        stats["seed"] = seed
    return _report("L2.2", statement, True, {"semi_levels": levels}, t0, verdict=HOLDS,
                   mode=P.EXHAUSTIVE if exhaustive else P.SAMPLED, stats=stats)


def l23(f, t0):
    statement = "metabelian, semi-p-abelian and semi-p^2-abelian => strongly semi-p-abelian"
    hyp = {"metabelian": f.metabelian}
    if f.metabelian:
        hyp["semi_p"] = f.semi(1).holds
        if hyp["semi_p"]:
            hyp["semi_p2"] = f.semi(2).holds
    if not all(hyp.values()):
        return _report("L2.3", statement, False, hyp, t0)
    sv = f.strongly()
    if sv.holds:
        return _report("L2.3", statement, True, hyp, t0, verdict=HOLDS, mode=P.EXHAUSTIVE)
    return _report("L2.3", statement, True, hyp, t0, verdict=FAILS, mode=P.EXHAUSTIVE,
                   witness=sv.witness, stats={"failing_i": sv.detail.get("failing_i")})


def _inner(f):
    s1 = f.semi(1).holds
    i2 = f.inner(2).holds
    return bool(s1 and i2), {"semi_p": s1, "inner_semi_p2": i2}


def l25(f, t0):
    statement = "semi-p and inner semi-p^2 => exp(G') <= p^2, Agemo_2(G) <= Z(G), Agemo_1(G)' = 1"
    g = f.g
    ok, hyp = _inner(f)
    if not ok:
        return _report("L2.5", statement, False, hyp, t0)
    p = g.prime
    exp_derived = S.exponent(f.derived)
    _, ag2 = S.agemo(g, 2, f.tasks)
    _, ag1 = S.agemo(g, 1, f.tasks)
    ag1_derived = S.derived_subgroup(ag1)
    stats = {"exp_derived": exp_derived, "agemo_2": ag2.order,
             "agemo_2_central": ag2.issubgroup(f.center), "agemo_1_derived": ag1_derived.order}
    witness = None
    if exp_derived > p * p:
        reps, _ = f.derived.transversal()
        witness = (g.from_code(reps[int(np.argmax(g.order_codes(reps)))]),)
    elif not stats["agemo_2_central"]:
        witness = next((x,) for x in ag2.base_elements() if x not in f.center)
    elif ag1_derived.order > 1:
        witness = _nontrivial(ag1_derived)
    if witness is None:
        return _report("L2.5", statement, True, hyp, t0, verdict=HOLDS, mode=P.EXHAUSTIVE,
                       stats=stats)
    return _report("L2.5", statement, True, hyp, t0, verdict=FAILS, mode=P.EXHAUSTIVE,
                   witness=witness, stats=stats)


def l35(f, t0):
    statement = "semi-3 and inner semi-9 => G_3 <= Agemo_1(G), exp(G_4) <= 3, G_7 = 1"
    g = f.g
    ok, hyp = f.semi3_inner9()
    if not ok:
        return _report("L3.5", statement, False, hyp, t0)
    lower = f.lower
    g3 = lower[2] if len(lower) > 2 else S.trivial_subgroup(g)
    g4 = lower[3] if len(lower) > 3 else S.trivial_subgroup(g)
    _, ag1 = S.agemo(g, 1, f.tasks)
    exp4 = S.exponent(g4)
    stats = {"G3": g3.order, "agemo_1": ag1.order, "G3_in_agemo_1": g3.issubgroup(ag1),
             "exp_G4": exp4, "G7_trivial": len(lower) <= 7}
    witness = None
    if not stats["G3_in_agemo_1"]:
        witness = next((x,) for x in g3.base_elements() if x not in ag1)
    elif exp4 > 3:
        reps, _ = g4.transversal()
        witness = (g.from_code(reps[int(np.argmax(g.order_codes(reps)))]),)
    elif len(lower) > 7:
        witness = _nontrivial(lower[6])
    if witness is None:
        return _report("L3.5", statement, True, hyp, t0, verdict=HOLDS, mode=P.EXHAUSTIVE,
                       stats=stats)
    return _report("L3.5", statement, True, hyp, t0, verdict=FAILS, mode=P.EXHAUSTIVE,
                   witness=witness, stats=stats)


def r1(f, t0):
    statement = "semi-3 and inner semi-9 => class is 5 or 6"
    ok, hyp = f.semi3_inner9()
    if not ok:
        return _report("R1", statement, False, hyp, t0)
    c = f.nilpotency_class
    stats = {"class": c}
    if c in (5, 6):
        return _report("R1", statement, True, hyp, t0, verdict=HOLDS, mode=P.EXHAUSTIVE,
                       stats=stats)
    lower = f.lower
    # class too large: a nontrivial element of G_7; too small: G_5 is trivial and
    # the generators of G_4 show where the series stops
    witness = _nontrivial(lower[6]) if c > 6 else tuple(lower[min(3, c)].base_elements())
    return _report("R1", statement, True, hyp, t0, verdict=FAILS, mode=P.EXHAUSTIVE,
                   witness=witness or (f.g.identity(),), stats=stats)


# ------------------------------------------------- construction claims

def _construction_hypothesis(f, need_class5=False):
    g = f.g
    if "a1" not in g.names or "a2" not in g.names:
        return False, {"reason": "no generators named a1, a2"}, None, None
    a1, a2 = g.gen("a1"), g.gen("a2")
    if S.closure(g, [a1, a2]).order != g.order:
        return False, {"reason": "a1, a2 do not generate G"}, a1, a2
    ok, hyp = f.semi3_inner9()
    hyp = dict(hyp)
    hyp["comm_a1_a2_order_divides_9"] = (g.commutator(a1, a2) ** 9).is_identity()
    ok = ok and hyp["comm_a1_a2_order_divides_9"]
    if need_class5:
        hyp["class"] = f.nilpotency_class
        ok = ok and f.nilpotency_class == 5
    return ok, hyp, a1, a2


def _order_claim(claim, statement, f, t0, x, want):
    ok, hyp, a1, a2 = _construction_hypothesis(f)
    if not ok:
        return _report(claim, statement, False, hyp, t0)
    x = x(f.g, a1, a2)
    o = f.g.element_order(x)
    good = want(o)
    return _report(claim, statement, True, hyp, t0, verdict=HOLDS if good else FAILS,
                   mode=P.EXHAUSTIVE, witness=None if good else (x,), stats={"order": o})


def _construction_claims():
    out = {}

    def exp_derived(f, t0):
        statement = "exp(G') <= 9"
        ok, hyp, *_ = _construction_hypothesis(f)
        if not ok:
            return _report("C3.8.1", statement, False, hyp, t0)
        e = S.exponent(f.derived)
        reps, _ = f.derived.transversal()
        w = None if e <= 9 else (f.g.from_code(reps[int(np.argmax(f.g.order_codes(reps)))]),)
        return _report("C3.8.1", statement, True, hyp, t0, verdict=HOLDS if w is None else FAILS,
                       mode=P.EXHAUSTIVE, witness=w, stats={"exp_derived": e})

    def exp_g3(f, t0):
        statement = "exp(G_3) = 9"
        ok, hyp, *_ = _construction_hypothesis(f)
        if not ok:
            return _report("C3.8.2", statement, False, hyp, t0)
        g3 = f.lower[2]
        e = S.exponent(g3)
        reps, _ = g3.transversal()
        top = f.g.from_code(reps[int(np.argmax(f.g.order_codes(reps)))])
        return _report("C3.8.2", statement, True, hyp, t0, verdict=HOLDS if e == 9 else FAILS,
                       mode=P.EXHAUSTIVE, witness=None if e == 9 else (top,),
                       stats={"exp_G3": e})

    out["C3.8.1"] = exp_derived
    out["C3.8.2"] = exp_g3
    out["C3.8.3"] = lambda f, t0: _order_claim(
        "C3.8.3", "o(a1) = 9", f, t0, lambda g, a1, a2: a1, lambda o: o == 9)
    out["C3.8.4"] = lambda f, t0: _order_claim(
        "C3.8.4", "o(a2) = 3^n with n >= 3", f, t0, lambda g, a1, a2: a2, lambda o: o >= 27)
    out["C3.8.5"] = lambda f, t0: _order_claim(
        "C3.8.5", "o([a1,a2,a1]) = 3", f, t0,
        lambda g, a1, a2: g.commutator(a1, a2, a1), lambda o: o == 3)
    out["C3.8.6"] = lambda f, t0: _order_claim(
        "C3.8.6", "o([a1,a2,a2]) = 9", f, t0,
        lambda g, a1, a2: g.commutator(a1, a2, a2), lambda o: o == 9)

    def c387(f, t0):
        statement = "[a1,a2,a1,a_i,a_i] = 1 for i = 1, 2"
        ok, hyp, a1, a2 = _construction_hypothesis(f)
        if not ok:
            return _report("C3.8.7", statement, False, hyp, t0)
        g = f.g
        for a in (a1, a2):
            c = g.commutator(a1, a2, a1, a, a)
            if not c.is_identity():
                return _report("C3.8.7", statement, True, hyp, t0, verdict=FAILS,
                               mode=P.EXHAUSTIVE, witness=(a, c))
        return _report("C3.8.7", statement, True, hyp, t0, verdict=HOLDS, mode=P.EXHAUSTIVE)

    def c388(f, t0):
        statement = "[a1,a2,a2]^3 = [a1,a2,a2,a1,a1]"
        ok, hyp, a1, a2 = _construction_hypothesis(f)
        if not ok:
            return _report("C3.8.8", statement, False, hyp, t0)
        g = f.g
        lhs, rhs = g.commutator(a1, a2, a2) ** 3, g.commutator(a1, a2, a2, a1, a1)
        good = lhs == rhs
        return _report("C3.8.8", statement, True, hyp, t0, verdict=HOLDS if good else FAILS,
                       mode=P.EXHAUSTIVE, witness=None if good else (lhs, rhs))

    def c389(f, t0):
        statement = "4 < class <= 6"
        ok, hyp, *_ = _construction_hypothesis(f)
        if not ok:
            return _report("C3.8.9", statement, False, hyp, t0)
        c = f.nilpotency_class
        good = 4 < c <= 6
        lower = f.lower
        w = None if good else (_nontrivial(lower[6]) if c > 6 else (f.g.identity(),))
        return _report("C3.8.9", statement, True, hyp, t0, verdict=HOLDS if good else FAILS,
                       mode=P.EXHAUSTIVE, witness=w, stats={"class": c})

    def c3810(f, t0):
        statement = "class 5 => [a1,a2]^3 not in G_4"
        ok, hyp, a1, a2 = _construction_hypothesis(f, need_class5=True)
        if not ok:
            return _report("C3.8.10", statement, False, hyp, t0)
        x = f.g.commutator(a1, a2) ** 3
        good = x not in f.lower[3]
        return _report("C3.8.10", statement, True, hyp, t0, verdict=HOLDS if good else FAILS,
                       mode=P.EXHAUSTIVE, witness=None if good else (x,))

    def c3811(f, t0):
        statement = "class 5 => G_4 is elementary abelian of rank 9"
        ok, hyp, *_ = _construction_hypothesis(f, need_class5=True)
        if not ok:
            return _report("C3.8.11", statement, False, hyp, t0)
        g4 = f.lower[3]
        abelian = S.commutator_subgroup(g4, g4).order == 1
        e = S.exponent(g4)
        rank = S.log_p(g4.order, f.g.prime) if abelian and e == f.g.prime else None
        stats = {"order": g4.order, "abelian": abelian, "exponent": e, "rank": rank}
        good = abelian and e == 3 and rank == 9
        # the basis of G_4 certifies its rank
        return _report("C3.8.11", statement, True, hyp, t0, verdict=HOLDS if good else FAILS,
                       mode=P.EXHAUSTIVE, witness=None if good else tuple(g4.base_elements()),
                       stats=stats)

    def c3812(f, t0):
        statement = "G is semi-3-abelian"
        if "a1" not in f.g.names or f.g.prime != 3:
            return _report("C3.8.12", statement, False, {"reason": "not the example family"}, t0)
        v = f.semi(1)
        return _report("C3.8.12", statement, True, None, t0,
                       verdict=HOLDS if v.holds else FAILS, mode=v.mode, witness=v.witness,
                       stats=v.detail)

    def c3813(f, t0):
        statement = "G is inner semi-9-abelian (not semi-9, every maximal subgroup semi-9)"
        if "a1" not in f.g.names or f.g.prime != 3:
            return _report("C3.8.13", statement, False, {"reason": "not the example family"}, t0)
        v = f.inner(2)
        own = f.semi(2)
        witness = None
        if not v.holds:
            witness = v.witness if v.witness is not None else (f.g.identity(),)
        stats = {k: val for k, val in v.detail.items() if k != "witness_in_group"}
        stats["semi_9_witness_direction"] = own.detail.get("direction")
        return _report("C3.8.13", statement, True, None, t0,
                       verdict=HOLDS if v.holds else FAILS, mode=v.mode, witness=witness,
                       stats=stats)

    out.update({"C3.8.7": c387, "C3.8.8": c388, "C3.8.9": c389, "C3.8.10": c3810,
                "C3.8.11": c3811, "C3.8.12": c3812, "C3.8.13": c3813})
    return out


# --------------------------------------------------------------- registry

CLAIM_IDS = (
    ["T1.1", "T1.2", "T1.3", "L2.1", "L2.2", "L2.3", "L2.5",
     "L3.1", "L3.2", "L3.3", "L3.4", "L3.5", "T3.6.1", "T3.6.2"]
    + [f"C3.8.{k}" for k in range(1, 14)]
    + ["R1", "HW"]
)


@dataclass
class ClaimOptions:
    mode: str = "auto"
    samples: int = 10_000
    pair_samples: int = 100_000
    seed: int = 0
    tasks: int = 1
    witness_budget: int = 100
    domain: str = "set"
    limits: object = DEFAULT_LIMITS


def _matches(claim, selected):
    if selected is None:
        return True
    return any(claim == s or claim.startswith(s.rstrip("*").rstrip(".") + ".") or
               (s.endswith("*") and claim.startswith(s[:-1])) for s in selected)


def verify_claims(g, claims=None, options=None, facts=None):
    """One ClaimReport per registered claim matching ``claims`` (all by default).

    Filters are claim ids, or prefixes such as ``C3.8`` or ``C3.8.*``. ``L3.2``
    expands into one report for each k in 2..4.
    """
    o = options or ClaimOptions()
    f = facts or Facts(g, o.tasks, o.limits)
    construction = _construction_claims()
    out = []
    for claim in CLAIM_IDS:
        if not _matches(claim, claims):
            continue
        t0 = time.perf_counter()
        if claim == "T1.1":
            out.append(t11(f, t0))
        elif claim == "T1.2":
            out.append(t12(f, t0))
        elif claim == "T1.3":
            out.append(t13(f, t0))
        elif claim == "L2.1":
            out.append(l21(f, t0, o.pair_samples, o.seed))
        elif claim == "L2.2":
            out.append(l22(f, t0, o.pair_samples, o.seed))
        elif claim == "L2.3":
            out.append(l23(f, t0))
        elif claim == "L2.5":
            out.append(l25(f, t0))
        elif claim == "L3.1":
            out.append(lemma31(g, o.mode, o.domain, o.samples, o.seed, o.tasks, o.limits, f))
        elif claim == "L3.2":
            for k in (2, 3, 4):
                out.append(lemma32(g, k, o.mode, o.domain, o.samples, o.seed, o.tasks,
                                   o.limits, f))
        elif claim == "L3.3":
            out.append(lemma33(g, o.tasks, o.limits, f))
        elif claim == "L3.4":
            out.append(lemma34(g, o.mode, o.pair_samples, o.seed, o.limits, facts=f))
        elif claim == "L3.5":
            out.append(l35(f, t0))
        elif claim in ("T3.6.1", "T3.6.2"):
            out.append(thm36(g, int(claim[-1]), o.witness_budget, o.tasks, o.limits, f))
        elif claim == "R1":
            out.append(r1(f, t0))
        elif claim == "HW":
            out.append(hall_witt(g, o.mode, o.pair_samples, o.seed, o.limits))
        else:
            out.append(construction[claim](f, t0))
    return out
