"""Brute-force ground truth from a full multiplication table.

Element codes double as table indices, so index 0 is the identity. The
table is filled once with the collector; everything after that (powers,
orders, closures, commutators, the semi-abelian test) uses table lookups
only.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_LIMITS
from .errors import CapacityError
from .properties import DIRECTIONS, EXHAUSTIVE, Verdict


@dataclass
class CayleyTable:
    prime: int
    order: int
    table: np.ndarray  # table[a, b] = index of a*b
    inverse: np.ndarray
    group: object = field(default=None, repr=False)

    def mul(self, a, b):
        return self.table[a, b]

    def powers(self, m):
        """x^m for every element, by square-and-multiply over the table."""
        x = np.arange(self.order)
        out = np.zeros_like(x)
        base = x
        while m:
            if m & 1:
                out = self.table[out, base]
            base = self.table[base, base]
            m >>= 1
        return out

    def orders(self):
        """Element orders; 0 marks an element whose powers never reach 0 (a broken table)."""
        x = np.arange(self.order)
        cur = x.copy()
        orders = np.ones(self.order, dtype=np.int64)
        done = cur == 0
        k = 1
        while not done.all() and k < self.order:
            cur = self.table[cur, x]
            k += 1
            orders[~done & (cur == 0)] = k
            done |= cur == 0
        orders[~done] = 0
        return orders

    def commutator(self, a, b):
        """[a, b] = a^-1 b^-1 a b on index arrays."""
        t = self.table
        return t[t[t[self.inverse[a], self.inverse[b]], a], b]

    def closure(self, gens):
        """Sorted indices of the subgroup generated by ``gens``."""
        gens = np.unique(np.asarray(gens, dtype=np.int64))
        gens = gens[gens != 0]
        seen = np.zeros(self.order, dtype=bool)
        seen[0] = True
        frontier = np.array([0])
        while len(frontier) and len(gens):
            nxt = np.unique(self.table[frontier][:, gens])
            nxt = nxt[~seen[nxt]]
            seen[nxt] = True
            frontier = nxt
        return np.flatnonzero(seen)

    def lower_central_orders(self):
        everything = np.arange(self.order)
        current = everything
        sizes = [len(current)]
        while len(current) > 1:
            a = np.repeat(current, self.order)
            b = np.tile(everything, len(current))
            nxt = self.closure(self.commutator(a, b))
            if len(nxt) == len(current):
                break
            current = nxt
            sizes.append(len(current))
        return sizes


def build_table(g, limits=DEFAULT_LIMITS, verify=True):
    """Multiplication table of ``g``, checked to be a Latin square."""
    if g.order > limits.oracle_cap:
        raise CapacityError(f"order {g.order} exceeds the oracle cap {limits.oracle_cap}")
    n = g.order
    codes = np.arange(n, dtype=np.int64)
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        table[a] = g.left_multiply_codes(a, codes)
    inverse = np.argmax(table == 0, axis=1)
    t = CayleyTable(prime=g.prime, order=n, table=table, inverse=inverse, group=g)
    if verify:
        problems = table_defects(t)
        if problems:
            raise ValueError("table is not a group table: " + "; ".join(problems))
    return t


def table_defects(t):
    """Reasons why ``t`` is not a valid group table with identity 0."""
    out = []
    target = np.arange(t.order)
    if not (np.sort(t.table, axis=1) == target).all():
        out.append("some row is not a permutation")
    if not (np.sort(t.table, axis=0) == target[:, None]).all():
        out.append("some column is not a permutation")
    if not (t.table[0] == target).all() or not (t.table[:, 0] == target).all():
        out.append("0 is not the identity")
    if not (t.table[target, t.inverse] == 0).all() or not (t.table[t.inverse, target] == 0).all():
        out.append("inverse table is inconsistent")
    return out


@dataclass
class CrossReport:
    pairs: int
    sampled: bool
    seed: int
    disagreements: list

    @property
    def ok(self):
        return not self.disagreements

    def as_dict(self):
        return {"pairs": self.pairs, "sampled": self.sampled, "seed": self.seed,
                "disagreements": self.disagreements[:20], "ok": self.ok}


def cross_validate(g, t, samples=1_000_000, seed=0, full_limit=3**6, spot=2_000):
    """Compare collector arithmetic with table lookups.

    Products are compared on all pairs up to ``full_limit`` elements and on
    ``samples`` random pairs above it. Inverses, powers and element orders
    are compared on every element. A further ``spot`` pairs are multiplied
    by collecting the concatenated words, a separate collector path.
    """
    n = t.order
    rng = np.random.default_rng(seed)
    bad = []
    sampled = n > full_limit
    if sampled:
        a = rng.integers(0, n, size=samples, dtype=np.int64)
        b = rng.integers(0, n, size=samples, dtype=np.int64)
    else:
        a = np.repeat(np.arange(n, dtype=np.int64), n)
        b = np.tile(np.arange(n, dtype=np.int64), n)
    prod = g.multiply_codes(a, b)
    for k in np.flatnonzero(prod != t.table[a, b])[:20]:
        bad.append({"op": "multiply", "args": [int(a[k]), int(b[k])],
                    "collector": int(prod[k]), "table": int(t.table[a[k], b[k]])})
    codes = np.arange(n, dtype=np.int64)
    inv = g.inverse_codes(codes)
    for k in np.flatnonzero(inv != t.inverse)[:20]:
        bad.append({"op": "inverse", "args": [int(k)], "collector": int(inv[k]),
                    "table": int(t.inverse[k])})
    for m in sorted({2, t.prime, t.prime ** 2}):
        pw = g.power_codes(codes, m)
        tp = t.powers(m)
        for k in np.flatnonzero(pw != tp)[:20]:
            bad.append({"op": f"power {m}", "args": [int(k)], "collector": int(pw[k]),
                        "table": int(tp[k])})
    orders = g.order_codes(codes)
    to = t.orders()
    for k in np.flatnonzero(orders != to)[:20]:
        bad.append({"op": "order", "args": [int(k)], "collector": int(orders[k]),
                    "table": int(to[k])})
    sa = rng.integers(0, n, size=spot)
    sb = rng.integers(0, n, size=spot)
    for x, y in zip(sa, sb):
        ex, ey = g.from_code(x), g.from_code(y)
        z = g.normalize(g.word_of(ex) + g.word_of(ey)).code
        if z != t.table[x, y]:
            bad.append({"op": "collect word", "args": [int(x), int(y)], "collector": int(z),
                        "table": int(t.table[x, y])})
            break
    return CrossReport(pairs=len(a), sampled=sampled, seed=seed, disagreements=bad)


def oracle_semi_abelian(t, i):
    """(ab)^q = 1 <=> a^q b^q = 1 over all pairs, by table lookups; q = p^i."""
    t0 = time.perf_counter()
    q = t.prime ** i
    pw = t.powers(q)
    n = t.order
    for a in range(n):
        left = pw[t.table[a]] == 0
        right = t.table[pw[a], pw] == 0
        diff = np.flatnonzero(left != right)
        if len(diff):
            b = int(diff[0])
            kind = 1 if left[b] else 2
            witness = None
            if t.group is not None:
                witness = (t.group.from_code(a), t.group.from_code(b))
            else:
                witness = (a, b)
            return Verdict(f"semi-{q}-abelian", False, EXHAUSTIVE, witness=witness,
                           detail={"direction": DIRECTIONS[kind], "source": "table"},
                           elapsed=time.perf_counter() - t0)
    return Verdict(f"semi-{q}-abelian", True, EXHAUSTIVE,
                   detail={"pairs": n * n, "source": "table"}, elapsed=time.perf_counter() - t0)


def oracle_power_sets(t, i):
    """(|{x : x^q = 1}|, |{x^q}|, |Omega_i|, |Agemo_i|) from the table."""
    q = t.prime ** i
    pw = t.powers(q)
    kernel = np.flatnonzero(pw == 0)
    image = np.unique(pw)
    return len(kernel), len(image), len(t.closure(kernel)), len(t.closure(image))
