"""Normal-form arithmetic for groups given by power-commutator presentations.

Commutators are ``[x, y] = x^-1 y^-1 x y`` and conjugation is
``x^y = y^-1 x y``; iterated commutators are left-normed,
``[x, y, z] = [[x, y], z]``.

Elements are exponent vectors ``(x_1, ..., x_n)`` with ``0 <= x_i < m_i``
where ``m_i`` is the relative order of the i-th generator, standing for the
word ``g_1^x_1 ... g_n^x_n``. Arithmetic is collection from the left, done by
the compiled kernel in :mod:`pcg._kernel`.
"""

from __future__ import annotations

from dataclasses import dataclass
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernel as K
from .config import DEFAULT_LIMITS
from .errors import (CapacityError, InconsistentPresentationError, MixedGroupError,
                     PresentationError)
from .presentation import Presentation, format_word, validate


@dataclass(frozen=True)
class OverlapFailure:
    """One consistency test whose two collections disagree."""

    kind: str  # "kji", "power-left", "power-right", "power-self"
    indices: tuple
    label: str
    left: tuple
    right: tuple

    def describe(self):
        return f"{self.kind} overlap {self.label}: {self.left} != {self.right}"


class PcGroup:
    """An immutable group built from a Presentation.

    Use :func:`build_group` rather than calling the constructor.
    """

    def __init__(self, pres: Presentation, name=None):
        self.presentation = pres
        self.prime = pres.prime
        self.names = pres.names
        self.n = len(pres.generators)
        self.moduli = pres.orders
        self.order = pres.order
        self.name = name or pres.metadata.get("name", "group")
        self._mods = np.array(self.moduli, dtype=np.int64)
        self._weights = [1] * self.n
        for i in range(self.n - 2, -1, -1):
            self._weights[i] = self._weights[i + 1] * self.moduli[i + 1]
        self._V = self._compile()
        self._mods.setflags(write=False)
        self._V.setflags(write=False)
        self._off.setflags(write=False)
        self._local = threading.local()

    # -- compilation ---------------------------------------------------

    def _compile(self):
        n = self.n
        pres = self.presentation
        off, total = K.table_layout(self.moduli)
        V = np.zeros((total, n), dtype=np.int64)
        ws = K.make_workspace()
        # Tails on generators after m only need the tables of those, so
        # compile from the last generator backwards.
        for m in range(n - 1, -1, -1):
            V[m] = self._word_vec(pres.power_tails.get(m, ()), V, off, ws)
            for j in range(m + 1, n):
                conj = self._word_vec(pres.commutator_tails.get((j, m), ()), V, off, ws)
                conj[j] += 1
                V[off[m, j] + self.moduli[j] + 1] = conj
            K.fill_tables(m, self._mods, V, off, *ws)
        self._off = off
        raw = np.zeros((2 * n + n * n, n), dtype=np.int64)
        raw[:n] = V[:n]
        for i in range(n):
            raw[n + i, i] = 1
            for j in range(i + 1, n):
                raw[2 * n + j * n + i] = V[off[i, j] + self.moduli[j] + 1]
        self._raw = raw
        return V

    def _word_vec(self, word, V, off, ws):
        r = np.zeros(self.n, dtype=np.int64)
        unit = np.zeros(self.n, dtype=np.int64)
        for idx, e in word:
            unit[idx] = 1
            K.collect(r, K.power_vec(unit, e, self._mods, V, off, *ws), self._mods, V, off, *ws)
            unit[idx] = 0
        return r

    @property
    def _ws(self):
        # collection stacks are scratch space, one pair per thread
        ws = getattr(self._local, "ws", None)
        if ws is None:
            ws = self._local.ws = K.make_workspace()
        return ws

    @property
    def _tab(self):
        return self._mods, self._V, self._off

    # -- element plumbing ----------------------------------------------

    def __repr__(self):
        return f"PcGroup({self.name!r}, p={self.prime}, order={self.order})"

    def __len__(self):
        return self.order

    def identity(self):
        return Element(self, (0,) * self.n)

    def gen(self, which):
        i = self.names.index(which) if isinstance(which, str) else which
        exps = [0] * self.n
        exps[i] = 1
        return Element(self, tuple(exps))

    def gens(self):
        return [self.gen(i) for i in range(self.n)]

    def element(self, exps):
        exps = tuple(int(x) for x in exps)
        if len(exps) != self.n or any(not 0 <= x < m for x, m in zip(exps, self.moduli)):
            raise ValueError(f"{exps} is not a normal-form vector for {self.name}")
        return Element(self, exps)

    def encode(self, exps):
        return sum(x * w for x, w in zip(exps, self._weights))

    def decode(self, code):
        code = int(code)
        out = []
        for m in reversed(self.moduli):
            out.append(code % m)
            code //= m
        return tuple(reversed(out))

    def from_code(self, code):
        return Element(self, self.decode(code))

    def all_codes(self, cap=None):
        limit = DEFAULT_LIMITS.element_cap if cap is None else cap
        if self.order > limit:
            raise CapacityError(f"{self.name}: order {self.order} exceeds element cap {limit}")
        return np.arange(self.order, dtype=np.int64)

    def elements(self, cap=None):
        return [self.from_code(c) for c in self.all_codes(cap)]

    def _vec(self, a):
        if a.group is not self:
            raise MixedGroupError("element belongs to a different group")
        return np.array(a.exps, dtype=np.int64)

    def _wrap(self, vec):
        return Element(self, tuple(int(x) for x in vec))

    # -- arithmetic ------------------------------------------------------

    def normalize(self, word):
        """Normal form of a word [(index, exponent), ...]."""
        for idx, _ in word:
            if not 0 <= idx < self.n:
                raise IndexError(f"generator index {idx} out of range")
        return self._wrap(self._word_vec(word, self._V, self._off, self._ws))

    def multiply(self, a, b):
        return self._wrap(K.multiply_vec(self._vec(a), self._vec(b), *self._tab, *self._ws))

    def inverse(self, a):
        return self._wrap(K.inverse_vec(self._vec(a), *self._tab, *self._ws))

    def power(self, a, m):
        return self._wrap(K.power_vec(self._vec(a), int(m), *self._tab, *self._ws))

    def element_order(self, a):
        return int(K.order_vec(self._vec(a), self.prime, *self._tab, *self._ws))

    def commutator(self, *xs):
        """Left-normed [x1, x2, ..., xk]."""
        if len(xs) == 1 and isinstance(xs[0], (list, tuple)):
            xs = tuple(xs[0])
        if len(xs) < 2:
            raise ValueError("a commutator needs at least two entries")
        vecs = [self._vec(x) for x in xs]
        r = vecs[0]
        for v in vecs[1:]:
            r = K.commutator_vec(r, v, *self._tab, *self._ws)
        return self._wrap(r)

    def conjugate(self, a, b):
        """a^b = b^-1 a b."""
        return self.multiply(self.inverse(b), self.multiply(a, b))

    def word_of(self, a):
        return tuple((i, e) for i, e in enumerate(a.exps) if e)

    def spell(self, a):
        return format_word(self.word_of(a), self.names)

    # -- bulk arithmetic on code arrays ---------------------------------

    def power_codes(self, codes, m):
        return K.bulk_power(np.asarray(codes, dtype=np.int64), int(m), *self._tab)

    def multiply_codes(self, a, b):
        return K.bulk_multiply(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64),
                               *self._tab)

    def inverse_codes(self, codes):
        return K.bulk_inverse(np.asarray(codes, dtype=np.int64), *self._tab)

    def commutator_codes(self, a, b):
        return K.bulk_commutator(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64),
                                 *self._tab)

    def order_codes(self, codes):
        return K.bulk_order(np.asarray(codes, dtype=np.int64), self.prime, *self._tab)

    def conjugate_codes(self, codes, by):
        return K.bulk_conjugate(np.asarray(codes, dtype=np.int64), int(by), *self._tab)

    def left_multiply_codes(self, x, codes):
        return K.left_multiply_all(int(x), np.asarray(codes, dtype=np.int64), *self._tab)

    def right_multiply_codes(self, codes, y):
        return K.right_multiply_all(np.asarray(codes, dtype=np.int64), int(y), *self._tab)


def chunked(fn, codes, tasks=1, *rest):
    """Apply a bulk kernel ``fn(chunk, *rest)`` over ``codes`` in ``tasks`` threads.

    The kernels release the GIL. Output order matches input order, so the
    result does not depend on ``tasks``.
    """
    codes = np.asarray(codes, dtype=np.int64)
    if tasks <= 1 or len(codes) < 4096:
        return fn(codes, *rest)
    parts = np.array_split(codes, tasks)
    with ThreadPoolExecutor(max_workers=tasks) as pool:
        outs = list(pool.map(lambda c: fn(c, *rest), parts))
    return np.concatenate(outs)


@dataclass(frozen=True)
class Element:
    group: PcGroup
    exps: tuple

    def __eq__(self, other):
        return isinstance(other, Element) and other.group is self.group and other.exps == self.exps

    def __hash__(self):
        return hash(self.exps)

    def __lt__(self, other):
        return self.exps < other.exps

    def __mul__(self, other):
        return multiply(self, other)

    def __pow__(self, m):
        return self.group.power(self, m)

    def __invert__(self):
        return self.group.inverse(self)

    @property
    def code(self):
        return self.group.encode(self.exps)

    def is_identity(self):
        return not any(self.exps)

    def __repr__(self):
        return f"<{self.group.spell(self)}>"


# ------------------------------------------------------------- module API

def build_group(pres, checked=True, limits=DEFAULT_LIMITS, name=None):
    """Compile a presentation; with ``checked`` the overlaps are verified first."""
    diags = validate(pres)
    if diags:
        raise PresentationError("; ".join(str(d) for d in diags), kind="shape")
    if len(pres.generators) > limits.max_generators:
        raise CapacityError(f"{len(pres.generators)} generators exceed the limit {limits.max_generators}")
    if pres.order > limits.max_order:
        raise CapacityError(f"order {pres.order} exceeds the limit {limits.max_order}")
    g = PcGroup(pres, name=name)
    if checked:
        failures = check_consistency(g)
        if failures:
            raise InconsistentPresentationError(failures)
    return g


def normalize(g, word):
    return g.normalize(word)


def multiply(a, b):
    if a.group is not b.group:
        raise MixedGroupError("cannot multiply elements of different groups")
    return a.group.multiply(a, b)


def inverse(a):
    return a.group.inverse(a)


def power(a, m):
    return a.group.power(a, m)


def element_order(a):
    return a.group.element_order(a)


def commutator(xs):
    xs = list(xs)
    if len(xs) < 2:
        raise ValueError("a commutator needs at least two entries")
    g = xs[0].group
    if any(x.group is not g for x in xs):
        raise MixedGroupError("commutator entries from different groups")
    return g.commutator(*xs)


def check_consistency(g):
    """Run the standard overlap tests; return the failing ones (empty = consistent).

    With m_i the relative order of g_i the tests are, for k > j > i,

        (g_k g_j) g_i = g_k (g_j g_i)
        (g_j^m_j) g_i = g_j^(m_j - 1) (g_j g_i)
        g_j (g_i^m_i) = (g_j g_i) g_i^(m_i - 1)
        g_i (g_i^m_i) = (g_i^m_i) g_i
    """
    n = g.n
    names, mods = g.names, g.moduli
    stacks = [np.zeros(K.STACK_SIZE, np.int64) for _ in range(3)]
    unit = np.eye(n, dtype=np.int64)
    tails = [g._raw[i] for i in range(n)]

    def prod(*factors):
        r = np.zeros(n, dtype=np.int64)
        for vec, rep in factors:
            K.collect_raw(r, vec, rep, g._raw, g._mods, *stacks)
        return r

    failures = []

    def record(kind, idx, label, left, right):
        if not np.array_equal(left, right):
            failures.append(OverlapFailure(kind, idx, label, tuple(int(x) for x in left),
                                           tuple(int(x) for x in right)))

    # g_j g_i collected once
    gjgi = {}
    for j in range(n):
        for i in range(j):
            gjgi[j, i] = prod((unit[j], 1), (unit[i], 1))

    for k in range(n):
        for j in range(k):
            for i in range(j):
                left = prod((gjgi[k, j], 1), (unit[i], 1))
                right = prod((unit[k], 1), (gjgi[j, i], 1))
                record("kji", (k, j, i), f"{names[k]}({names[j]}{names[i]})", left, right)
    for j in range(n):
        for i in range(j):
            left = prod((tails[j], 1), (unit[i], 1))
            right = prod((unit[j], int(mods[j]) - 1), (gjgi[j, i], 1))
            record("power-left", (j, i), f"({names[j]}^{mods[j]}){names[i]}", left, right)
            left = prod((unit[j], 1), (tails[i], 1))
            right = prod((gjgi[j, i], 1), (unit[i], int(mods[i]) - 1))
            record("power-right", (j, i), f"{names[j]}({names[i]}^{mods[i]})", left, right)
    for i in range(n):
        left = prod((unit[i], 1), (tails[i], 1))
        right = prod((tails[i], 1), (unit[i], 1))
        record("power-self", (i,), f"{names[i]}({names[i]}^{mods[i]})", left, right)
    return failures
