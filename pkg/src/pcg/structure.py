"""Subgroups, series and characteristic subgroups.

Subgroups are stored by an induced sequence relative to the refined series
of the parent group. If g_i has relative order p^k, the refined series runs
through g_i, g_i^p, ..., g_i^(p^(k-1)) before g_(i+1), so each step has order
p and the series is central. Every element x then has a leading term: the
first coordinate x_i that is nonzero, its p-adic valuation t and the digit
c = (x_i / p^t) mod p. An induced sequence has at most one element per depth
(i, t), each with digit 1, and its subgroup has order p^(length).

Membership, cosets and orders come from sifting along the sequence, so large
subgroups never need to be listed. Member lists are produced on request and
are guarded by the element cap; they are always sorted by code, which is
lexicographic order of exponent vectors.

Enumerations over a group H use representatives modulo a central block: the
trailing elements of the induced sequence that are central in H with order p
generate an elementary abelian T <= Z(H), and every quantity built from p^i-th
powers or commutators with members of H is constant on cosets of T.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import _kernel as K
from .collector import Element, PcGroup, chunked
from .config import DEFAULT_LIMITS
from .errors import CapacityError, MixedGroupError


# ------------------------------------------------------------ refined depths

def _layout(group):
    """(digits per coordinate, first depth index of each coordinate)."""
    cached = group.__dict__.get("_depth_layout")
    if cached is None:
        p = group.prime
        digits = []
        for m in group.moduli:
            k = 0
            while m > 1:
                m //= p
                k += 1
            digits.append(k)
        start = np.concatenate([[0], np.cumsum(digits)]).astype(int)
        cached = group._depth_layout = (digits, start)
    return cached


def depth_count(group):
    digits, start = _layout(group)
    return int(start[-1])


def leading(group, vec):
    """(depth index, digit) of the leading term, or None for the identity."""
    p = group.prime
    _, start = _layout(group)
    for i, x in enumerate(vec):
        x = int(x)
        if x:
            t = 0
            while x % p == 0:
                x //= p
                t += 1
            return int(start[i]) + t, x % p
    return None


def depth_position(group, depth):
    """(coordinate, valuation) of a depth index."""
    _, start = _layout(group)
    i = int(np.searchsorted(start, depth, side="right")) - 1
    return i, depth - int(start[i])


def refined_generator(group, depth):
    i, t = depth_position(group, depth)
    vec = np.zeros(group.n, np.int64)
    vec[i] = group.prime ** t
    return vec


# ------------------------------------------------------------- element sets

class ElementSet:
    """A sorted set of elements, optionally saturated by a central block.

    ``head`` holds sorted codes of canonical representatives modulo the
    subgroup ``tail``; the set is the union of the cosets h*tail. With a
    trivial tail the head is the set itself.
    """

    def __init__(self, group, head, tail=None):
        self.group = group
        self.head = np.asarray(head, dtype=np.int64)
        self.tail = tail

    def __len__(self):
        return len(self.head) * (self.tail.order if self.tail is not None else 1)

    def __contains__(self, x):
        if not isinstance(x, Element) or x.group is not self.group:
            return False
        code = np.array([x.code], dtype=np.int64)
        if self.tail is not None:
            code = self.tail.coset_reps(code)
        pos = np.searchsorted(self.head, code[0])
        return bool(pos < len(self.head) and self.head[pos] == code[0])

    def codes(self, cap=None):
        limit = DEFAULT_LIMITS.element_cap if cap is None else cap
        if len(self) > limit:
            raise CapacityError(f"set of {len(self)} elements exceeds the element cap {limit}")
        if self.tail is None or self.tail.order == 1:
            return self.head.copy()
        parts = [self.group.right_multiply_codes(self.head, t) for t in self.tail.members()]
        return np.sort(np.concatenate(parts))

    def elements(self, cap=None):
        return [self.group.from_code(c) for c in self.codes(cap)]

    def __repr__(self):
        return f"ElementSet({self.group.name}, size={len(self)})"


# ---------------------------------------------------------------- subgroups

class Subgroup:
    """A subgroup given by an induced sequence; see the module docstring."""

    def __init__(self, group, base, gens=()):
        self.group = group
        vecs = [np.asarray(b, dtype=np.int64) for b in base]
        keyed = sorted((leading(group, v)[0], tuple(int(x) for x in v)) for v in vecs)
        self.depths = tuple(d for d, _ in keyed)
        self.base = tuple(v for _, v in keyed)
        self.gens = tuple(gens)
        self.order = group.prime ** len(self.base)
        self._cache = {}

    # -- basic facts ---------------------------------------------------

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"Subgroup(order={self.order} in {self.group.name})"

    def base_elements(self):
        return [Element(self.group, b) for b in self.base]

    def is_trivial(self):
        return self.order == 1

    def is_whole(self):
        return self.order == self.group.order

    def _sieve(self):
        if "sieve" not in self._cache:
            g = self.group
            digits, start = _layout(g)
            where = np.full((g.n, max(digits) if digits else 1), -1, dtype=np.int64)
            hpow = np.zeros((len(self.base), g.prime, g.n), dtype=np.int64)
            for h, (d, b) in enumerate(zip(self.depths, self.base)):
                i, t = depth_position(g, d)
                where[i, t] = h
                vec = np.array(b, dtype=np.int64)
                for c in range(1, g.prime):
                    hpow[h, c] = K.power_vec(vec, -c, *g._tab, *g._ws)
            self._cache["sieve"] = (where, hpow)
        return self._cache["sieve"]

    def coset_reps(self, codes, tasks=1):
        """Canonical representatives of the left cosets x*H, by code."""
        where, hpow = self._sieve()
        g = self.group
        return chunked(K.coset_reps, codes, tasks, where, hpow, g.prime, *g._tab)

    def contains_codes(self, codes, tasks=1):
        return self.coset_reps(codes, tasks) == 0

    def __contains__(self, x):
        if not isinstance(x, Element):
            return False
        if x.group is not self.group:
            raise MixedGroupError("element belongs to a different group")
        return bool(self.contains_codes(np.array([x.code], dtype=np.int64))[0])

    def issubgroup(self, other):
        """self <= other."""
        if self.group is not other.group:
            raise MixedGroupError("subgroups of different groups")
        if self.order > other.order or other.order % self.order:
            return False
        codes = np.array([self.group.encode(b) for b in self.base], dtype=np.int64)
        return bool(np.all(other.contains_codes(codes)))

    def __eq__(self, other):
        if not isinstance(other, Subgroup) or other.group is not self.group:
            return NotImplemented
        return self.order == other.order and self.issubgroup(other)

    def __le__(self, other):
        return self.issubgroup(other)

    def __hash__(self):
        return hash((id(self.group), self.order))

    # -- enumeration ---------------------------------------------------

    def _product_set(self, vecs):
        """Sorted codes of {v_1^e_1 ... v_k^e_k : 0 <= e < p} (an induced sequence)."""
        g = self.group
        codes = np.zeros(1, dtype=np.int64)
        for v in reversed(vecs):
            x = np.array(v, dtype=np.int64)
            parts = [codes]
            y = x.copy()
            for _ in range(1, g.prime):
                parts.append(g.left_multiply_codes(g.encode(y), codes))
                y = K.multiply_vec(y, x, *g._tab, *g._ws)
            codes = np.concatenate(parts)
        return np.sort(codes)

    def members(self, cap=None):
        """Sorted member codes; raises CapacityError above the cap."""
        limit = DEFAULT_LIMITS.element_cap if cap is None else cap
        if self.order > limit:
            raise CapacityError(f"subgroup of order {self.order} exceeds the element cap {limit}")
        if "members" not in self._cache:
            if self.is_whole():
                self._cache["members"] = np.arange(self.group.order, dtype=np.int64)
            else:
                self._cache["members"] = self._product_set(self.base)
        return self._cache["members"]

    def elements(self, cap=None):
        return [self.group.from_code(c) for c in self.members(cap)]

    def central_tail(self):
        """Number of trailing sequence elements forming a central block of exponent p."""
        if "tail" not in self._cache:
            g = self.group
            vecs = [np.array(b, dtype=np.int64) for b in self.base]
            count = 0
            for v in reversed(vecs):
                if not K.is_identity(K.power_vec(v, g.prime, *g._tab, *g._ws)):
                    break
                if any(not K.is_identity(K.commutator_vec(v, w, *g._tab, *g._ws)) for w in vecs):
                    break
                count += 1
            self._cache["tail"] = count
        return self._cache["tail"]

    def tail_subgroup(self):
        k = self.central_tail()
        return Subgroup(self.group, self.base[len(self.base) - k:])

    def transversal(self, cap=None):
        """(sorted representative codes, central block T) with H = reps * T."""
        limit = DEFAULT_LIMITS.element_cap if cap is None else cap
        k = self.central_tail()
        head = self.base[:len(self.base) - k]
        size = self.group.prime ** len(head)
        if size > limit:
            raise CapacityError(f"{size} representatives exceed the element cap {limit}")
        if "transversal" not in self._cache:
            tail = self.tail_subgroup()
            reps = self._product_set(head)
            if tail.order > 1:
                reps = np.sort(tail.coset_reps(reps))
            self._cache["transversal"] = (reps, tail)
        return self._cache["transversal"]


def whole_group(g):
    """G itself as a Subgroup (cached on the group)."""
    sub = g.__dict__.get("_whole")
    if sub is None:
        sub = Subgroup(g, [refined_generator(g, d) for d in range(depth_count(g))], g.gens())
        g._whole = sub
    return sub


def trivial_subgroup(g):
    return Subgroup(g, [])


def as_subgroup(obj):
    if isinstance(obj, Subgroup):
        return obj
    if isinstance(obj, PcGroup):
        return whole_group(obj)
    raise TypeError(f"expected a PcGroup or Subgroup, got {type(obj).__name__}")


# ------------------------------------------------------- induced sequences

class _Builder:
    """Grows an induced sequence from seeds, closed under conjugation by normalizers."""

    def __init__(self, group, base=(), normalizers=()):
        self.g = group
        self.base = {}
        self.neg = {}
        self.normalizers = [np.asarray(u, dtype=np.int64) for u in normalizers]
        for b in base:
            v = np.asarray(b, dtype=np.int64)
            self._insert(leading(group, v)[0], v)

    def _insert(self, depth, v):
        g = self.g
        self.base[depth] = v
        self.neg[depth] = [None] + [K.power_vec(v, -c, *g._tab, *g._ws) for c in range(1, g.prime)]

    def sift(self, v):
        g = self.g
        v = np.array(v, dtype=np.int64)
        while True:
            lead = leading(g, v)
            if lead is None:
                return None
            depth, c = lead
            if depth not in self.base:
                return v
            K.collect(v, self.neg[depth][c], *g._tab, *g._ws)

    def add(self, seeds):
        g = self.g
        tab, ws = g._tab, g._ws
        queue = deque(np.asarray(s, dtype=np.int64) for s in seeds)
        grew = False
        while queue:
            v = self.sift(queue.popleft())
            if v is None:
                continue
            depth, c = leading(g, v)
            if c != 1:
                v = K.power_vec(v, pow(c, -1, g.prime), *tab, *ws)
            others = list(self.base.values())
            self._insert(depth, v)
            grew = True
            queue.append(K.power_vec(v, g.prime, *tab, *ws))
            for w in others:
                queue.append(K.commutator_vec(v, w, *tab, *ws))
            for u in self.normalizers:
                queue.append(K.commutator_vec(v, u, *tab, *ws))
        return grew

    def subgroup(self, gens=()):
        return Subgroup(self.g, list(self.base.values()), gens)


def _vecs(elements):
    return [np.array(x.exps, dtype=np.int64) for x in elements]


def _check_group(g, elements):
    for x in elements:
        if x.group is not g:
            raise MixedGroupError("element belongs to a different group")


def closure(g, gens=()):
    """The subgroup generated by ``gens``."""
    gens = list(gens)
    _check_group(g, gens)
    b = _Builder(g)
    b.add(_vecs(gens))
    return b.subgroup(gens)


def normal_closure(g, gens, within=None):
    """Smallest subgroup containing ``gens`` and normalized by ``within`` (default G)."""
    gens = list(gens)
    _check_group(g, gens)
    within = as_subgroup(g) if within is None else within
    b = _Builder(g, normalizers=within.base)
    b.add(_vecs(gens))
    return b.subgroup(gens)


def closure_of_codes(g, codes, start=None):
    """Subgroup generated by a (large) array of element codes.

    Greedy: repeatedly add the first code not yet covered, testing the rest
    in bulk. At most log_p |G| rounds.
    """
    b = _Builder(g, base=() if start is None else start.base)
    remaining = np.asarray(codes, dtype=np.int64)
    while len(remaining):
        sub = b.subgroup()
        if sub.order > 1:
            remaining = remaining[sub.coset_reps(remaining) != 0]
        else:
            remaining = remaining[remaining != 0]
        if not len(remaining):
            break
        b.add([np.array(g.decode(remaining[0]), dtype=np.int64)])
        remaining = remaining[1:]
    return b.subgroup()


def join(h, k):
    """<H, K>."""
    if h.group is not k.group:
        raise MixedGroupError("subgroups of different groups")
    b = _Builder(h.group, base=h.base)
    b.add([np.array(x) for x in k.base])
    return b.subgroup()


def commutator_subgroup(h, k):
    """[H, K], the normal closure in <H, K> of commutators of generators."""
    if h.group is not k.group:
        raise MixedGroupError("subgroups of different groups")
    g = h.group
    hk = join(h, k)
    seeds = [K.commutator_vec(np.array(x), np.array(y), *g._tab, *g._ws)
             for x in h.base for y in k.base]
    b = _Builder(g, normalizers=hk.base)
    b.add(seeds)
    return b.subgroup()


def derived_subgroup(h):
    h = as_subgroup(h)
    return commutator_subgroup(h, h)


# ------------------------------------------------------------------- series

def lower_central_series(g):
    """[G_1, G_2, ..., G_(c+1)] with G_1 = G and G_(c+1) = 1."""
    cache = g.__dict__.setdefault("_series", {})
    if "lower" not in cache:
        gens = _vecs(g.gens())
        series = [whole_group(g)]
        while series[-1].order > 1:
            top = series[-1]
            seeds = [K.commutator_vec(np.array(x), u, *g._tab, *g._ws)
                     for x in top.base for u in gens]
            b = _Builder(g, normalizers=gens)
            b.add(seeds)
            nxt = b.subgroup()
            if nxt.order == top.order:
                raise RuntimeError("lower central series does not descend")
            series.append(nxt)
        cache["lower"] = series
    return list(cache["lower"])


def nilpotency_class(g):
    return len(lower_central_series(g)) - 1


def _digit_at(group, code, depth):
    i, t = depth_position(group, depth)
    x = group.decode(code)[i]
    return (x // group.prime ** t) % group.prime


def _nullspace_mod_p(rows, p):
    """Basis of {e : sum_l e_l * rows[l] = 0 (mod p)}."""
    m = len(rows)
    if m == 0:
        return []
    cols = len(rows[0])
    # Row-reduce the transpose A (cols x m); solve A e = 0.
    a = [[rows[l][c] % p for l in range(m)] for c in range(cols)]
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, cols) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][col], -1, p)
        a[r] = [(v * inv) % p for v in a[r]]
        for i in range(cols):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [(v - f * w) % p for v, w in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == cols:
            break
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        e = [0] * m
        e[f] = 1
        for i, pc in enumerate(pivots):
            e[pc] = (-a[i][f]) % p
        basis.append(e)
    return basis


def centralizing_preimage(g, n):
    """{x : [x, g_j] in N for every pc generator g_j}, for a normal subgroup N.

    This is the preimage of Z(G/N). It is computed layer by layer down the
    refined series: if every [x, g_j] already lies in N*L_d, the map
    x -> [x, g_j] N L_(d+1) is a homomorphism into a group of order at most
    p, so each layer cuts the candidate subgroup down to a kernel.
    """
    gens = _vecs(g.gens())
    current = whole_group(g)
    covered = set(n.depths)
    for depth in range(depth_count(g)):
        if depth in covered or current.order == 1:
            continue
        base = [np.array(b, dtype=np.int64) for b in current.base]
        comms = np.array([g.encode(K.commutator_vec(h, u, *g._tab, *g._ws))
                          for h in base for u in gens], dtype=np.int64)
        reps = n.coset_reps(comms) if n.order > 1 else comms
        digits = [_digit_at(g, c, depth) for c in reps]
        rows = [digits[l * len(gens):(l + 1) * len(gens)] for l in range(len(base))]
        if not any(any(r) for r in rows):
            continue
        seeds = []
        for l, h in enumerate(base):
            seeds.append(K.power_vec(h, g.prime, *g._tab, *g._ws))
            for w in base[:l]:
                seeds.append(K.commutator_vec(h, w, *g._tab, *g._ws))
        for e in _nullspace_mod_p(rows, g.prime):
            v = np.zeros(g.n, np.int64)
            for coef, h in zip(e, base):
                if coef:
                    K.collect(v, K.power_vec(h, coef, *g._tab, *g._ws), *g._tab, *g._ws)
            seeds.append(v)
        b = _Builder(g, normalizers=base)
        b.add(seeds)
        current = b.subgroup()
    return current


def center(g):
    return centralizing_preimage(g, trivial_subgroup(g))


def center_and_upper_series(g):
    """[Z_0 = 1, Z_1 = Z(G), ..., Z_c = G]."""
    cache = g.__dict__.setdefault("_series", {})
    if "upper" not in cache:
        series = [trivial_subgroup(g)]
        while series[-1].order < g.order:
            nxt = centralizing_preimage(g, series[-1])
            if nxt.order == series[-1].order:
                raise RuntimeError("upper central series does not ascend")
            series.append(nxt)
        cache["upper"] = series
    return list(cache["upper"])


def subgroup_center(h):
    """Z(H) for a subgroup, by enumerating H modulo its central block."""
    h = as_subgroup(h)
    if h.is_whole():
        return center(h.group)
    g = h.group
    reps, tail = h.transversal()
    keep = np.ones(len(reps), dtype=bool)
    for b in h.base:
        keep &= g.commutator_codes(reps, np.full(len(reps), g.encode(b))) == 0
    return closure_of_codes(g, reps[keep], start=tail)


# ----------------------------------------------------- powers and torsion

def _power_table(h, q, tasks=1):
    h = as_subgroup(h)
    key = ("powers", q)
    if key not in h._cache:
        reps, tail = h.transversal()
        h._cache[key] = chunked(K.bulk_power, reps, tasks, q, *h.group._tab)
    return h._cache[key]


def omega(g, i, tasks=1):
    """(the set {x : x^(p^i) = 1}, the subgroup it generates).

    ``g`` may be a PcGroup or a Subgroup.
    """
    h = as_subgroup(g)
    grp = h.group
    q = grp.prime ** i
    key = ("omega", i)
    if key not in h._cache:
        reps, tail = h.transversal()
        powers = _power_table(h, q, tasks)
        head = reps[powers == 0]
        sub = closure_of_codes(grp, head, start=tail)
        h._cache[key] = (ElementSet(grp, head, tail), sub)
    return h._cache[key]


def agemo(g, i, tasks=1):
    """(the set {x^(p^i)}, the subgroup it generates)."""
    h = as_subgroup(g)
    grp = h.group
    q = grp.prime ** i
    key = ("agemo", i)
    if key not in h._cache:
        image = np.unique(_power_table(h, q, tasks))
        sub = closure_of_codes(grp, image)
        h._cache[key] = (ElementSet(grp, image), sub)
    return h._cache[key]


# -------------------------------------------------- Frattini and maximals

def frattini_and_maximals(g):
    """(Phi(G), maximal subgroups) with Phi(G) = G^p G'.

    Maximal subgroups are the preimages of the hyperplanes of G/Phi(G),
    listed by the normalized linear form defining them.
    """
    cache = g.__dict__.setdefault("_series", {})
    if "frattini" not in cache:
        p = g.prime
        gens = _vecs(g.gens())
        seeds = [K.power_vec(u, p, *g._tab, *g._ws) for u in gens]
        seeds += [K.commutator_vec(u, w, *g._tab, *g._ws)
                  for a, u in enumerate(gens) for w in gens[:a]]
        b = _Builder(g, normalizers=gens)
        b.add(seeds)
        phi = b.subgroup()
        top = [d for d in range(depth_count(g)) if d not in set(phi.depths)]
        tops = [refined_generator(g, d) for d in top]
        maximals = []
        for form in _hyperplane_forms(len(top), p):
            a = next(idx for idx, c in enumerate(form) if c)
            extra = []
            for l, c in enumerate(form):
                if l == a:
                    continue
                v = tops[l].copy()
                if c:
                    K.collect(v, K.power_vec(tops[a], -c, *g._tab, *g._ws), *g._tab, *g._ws)
                extra.append(v)
            mb = _Builder(g, base=phi.base)
            mb.add(extra)
            m = mb.subgroup()
            if m.order * p != g.order:
                raise RuntimeError("hyperplane preimage has the wrong index")
            m.form = tuple(form)
            maximals.append(m)
        cache["frattini"] = (phi, maximals)
    phi, maximals = cache["frattini"]
    return phi, list(maximals)


def _hyperplane_forms(d, p):
    """Nonzero forms in (Z/p)^d whose first nonzero entry is 1, in lexicographic order."""
    out = []
    for v in product(range(p), repeat=d):
        nz = [c for c in v if c]
        if nz and nz[0] == 1:
            out.append(v)
    return out


def frattini(g):
    return frattini_and_maximals(g)[0]


def maximal_subgroups(g):
    return frattini_and_maximals(g)[1]


def minimal_generators(g):
    """A generating set of size d: refined generators whose depths lie outside Phi(G)."""
    phi = frattini(g)
    taken = set(phi.depths)
    return [g.element(refined_generator(g, d)) for d in range(depth_count(g)) if d not in taken]


def rank(g):
    """Minimal number of generators d, with |G : Phi(G)| = p^d.

    Subgroups are accepted too; their Frattini subgroup is Agemo_1(H) H'.
    """
    if isinstance(g, Subgroup):
        phi = join(agemo(g, 1)[1], derived_subgroup(g))
        return log_p(g.order // phi.order, g.group.prime)
    return log_p(g.order // frattini(g).order, g.prime)


# -------------------------------------------------------------- statistics

@dataclass(frozen=True)
class GroupStats:
    prime: int
    order: int
    exponent: int
    nilpotency_class: int
    rank: int
    metabelian: bool

    @property
    def exponent_log(self):
        """r with exponent = p^r."""
        return log_p(self.exponent, self.prime)

    def as_dict(self):
        return {"order": self.order, "exponent": self.exponent,
                "class": self.nilpotency_class, "rank": self.rank,
                "metabelian": self.metabelian}


def exponent(g, tasks=1):
    """Largest element order, by enumeration modulo the central block."""
    h = as_subgroup(g)
    reps, tail = h.transversal()
    orders = chunked(K.bulk_order, reps, tasks, h.group.prime, *h.group._tab)
    top = int(orders.max()) if len(orders) else 1
    if tail.order > 1:
        top = max(top, h.group.prime)
    return top


def is_metabelian(g):
    d = derived_subgroup(as_subgroup(g))
    return commutator_subgroup(d, d).order == 1


def group_stats(g, tasks=1):
    return GroupStats(prime=g.prime, order=g.order, exponent=exponent(g, tasks),
                      nilpotency_class=nilpotency_class(g), rank=rank(g),
                      metabelian=is_metabelian(g))


def log_p(n, p):
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k
