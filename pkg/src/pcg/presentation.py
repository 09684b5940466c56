"""Power-commutator presentations and the `.pcp` text format.

A document looks like::

    pgroup p=3
    #: name: extraspecial 27
    gen x order 3
    gen y order 3
    gen z order 3
    comm [y,x] = z

``gen`` lines fix the generator order. In ``comm [x,y] = w`` the first name
must come later in that order than the second. Relations that are not listed
are trivial: a missing ``pow`` line means ``g^order = 1`` and a missing
``comm`` line means the two generators commute. Lines starting with ``#:``
carry ``key: value`` metadata; any other ``#`` text is a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import PresentationError

Word = tuple  # tuple[tuple[int, int], ...]; () is the identity


@dataclass(frozen=True)
class Generator:
    name: str
    order: int


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    location: str
    message: str

    def __str__(self):
        return f"{self.rule} at {self.location}: {self.message}"


@dataclass(frozen=True, eq=True)
class Presentation:
    prime: int
    generators: tuple
    power_tails: dict = field(default_factory=dict)  # index -> Word
    commutator_tails: dict = field(default_factory=dict)  # (j, i), j > i -> Word
    metadata: dict = field(default_factory=dict)

    @property
    def names(self):
        return tuple(g.name for g in self.generators)

    @property
    def orders(self):
        return tuple(g.order for g in self.generators)

    @property
    def order(self):
        out = 1
        for g in self.generators:
            out *= g.order
        return out

    def __len__(self):
        return len(self.generators)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def __hash__(self):
        return hash((self.prime, self.generators,
                     tuple(sorted(self.power_tails.items())),
                     tuple(sorted(self.commutator_tails.items()))))


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power_exponent(order, p):
    """k with order == p**k and k >= 1, else None."""
    if order < p:
        return None
    k = 0
    while order % p == 0:
        order //= p
        k += 1
    return k if order == 1 else None


# ------------------------------------------------------------------ parsing

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_HEADER = re.compile(r"pgroup\s+p\s*=\s*(\S+)\s*$")
_GEN = re.compile(rf"gen\s+({_NAME})\s+order\s+(\S+)\s*$")
_POW = re.compile(rf"pow\s+({_NAME})\s*=\s*(.*)$")
_COMM = re.compile(rf"comm\s*\[\s*({_NAME})\s*,\s*({_NAME})\s*\]\s*=\s*(.*)$")
_TERM = re.compile(rf"\s*({_NAME})\s*(?:\^\s*(-?\d+))?\s*$")


def _parse_int(text, lineno, col):
    try:
        return int(text)
    except ValueError:
        raise PresentationError(f"expected an integer, got {text!r}", lineno, col) from None


def parse_word(text, names, lineno=None, col=None):
    """Parse ``1`` or ``a^2*b^-1*c`` against a name list (or name -> index map)."""
    index = names if isinstance(names, dict) else {n: i for i, n in enumerate(names)}
    text = text.strip()
    if text == "":
        raise PresentationError("empty word (write 1 for the identity)", lineno, col)
    if text == "1":
        return ()
    out = []
    offset = 0
    for piece in text.split("*"):
        m = _TERM.match(piece)
        if not m:
            raise PresentationError(f"malformed term {piece.strip()!r}", lineno,
                                    None if col is None else col + offset)
        name, exp = m.group(1), m.group(2)
        if name not in index:
            raise PresentationError(f"unknown generator {name!r}", lineno,
                                    None if col is None else col + offset, kind="unknown-generator")
        out.append((index[name], 1 if exp is None else int(exp)))
        offset += len(piece) + 1
    return tuple(out)


def parse(text):
    """Parse a `.pcp` document into a Presentation."""
    prime = None
    gens = []
    index = {}
    power_tails = {}
    comm_tails = {}
    metadata = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        if line.startswith("#:"):
            key, sep, value = line[2:].partition(":")
            if not sep:
                raise PresentationError("metadata lines need 'key: value'", lineno, col)
            metadata[key.strip()] = value.strip()
            continue
        if line.startswith("#"):
            continue
        if prime is None:
            m = _HEADER.match(line)
            if not m:
                raise PresentationError("document must start with 'pgroup p=<prime>'", lineno, col)
            prime = _parse_int(m.group(1), lineno, col + m.start(1))
            if not is_prime(prime):
                raise PresentationError(f"{prime} is not prime", lineno, col + m.start(1))
            continue
        head = line.split(None, 1)[0] if not line.startswith("comm[") else "comm"
        if head == "gen":
            m = _GEN.match(line)
            if not m:
                raise PresentationError("expected 'gen NAME order INT'", lineno, col)
            name = m.group(1)
            order = _parse_int(m.group(2), lineno, col + m.start(2))
            if name in index:
                raise PresentationError(f"duplicate generator {name!r}", lineno, col + m.start(1),
                                        kind="duplicate-generator")
            if prime_power_exponent(order, prime) is None:
                raise PresentationError(f"order {order} is not a positive power of {prime}",
                                        lineno, col + m.start(2), kind="bad-order")
            index[name] = len(gens)
            gens.append(Generator(name, order))
        elif head == "pow":
            m = _POW.match(line)
            if not m:
                raise PresentationError("expected 'pow NAME = word'", lineno, col)
            name = m.group(1)
            if name not in index:
                raise PresentationError(f"unknown generator {name!r}", lineno, col + m.start(1),
                                        kind="unknown-generator")
            i = index[name]
            if i in power_tails:
                raise PresentationError(f"second power relation for {name!r}", lineno, col)
            power_tails[i] = parse_word(m.group(2), index, lineno, col + m.start(2))
        elif head == "comm":
            m = _COMM.match(line)
            if not m:
                raise PresentationError("expected 'comm [NAME,NAME] = word'", lineno, col)
            for g in (1, 2):
                if m.group(g) not in index:
                    raise PresentationError(f"unknown generator {m.group(g)!r}", lineno,
                                            col + m.start(g), kind="unknown-generator")
            j, i = index[m.group(1)], index[m.group(2)]
            if j <= i:
                raise PresentationError(
                    f"in comm [{m.group(1)},{m.group(2)}] the first generator must come later",
                    lineno, col + m.start(1))
            if (j, i) in comm_tails:
                raise PresentationError("repeated commutator relation", lineno, col)
            comm_tails[(j, i)] = parse_word(m.group(3), index, lineno, col + m.start(3))
        else:
            raise PresentationError(f"unknown statement {head!r}", lineno, col)
    if prime is None:
        raise PresentationError("empty document", 1, 1)
    return Presentation(prime, tuple(gens), power_tails, comm_tails, metadata)


# -------------------------------------------------------------- serializing

def format_word(word, names):
    if not word:
        return "1"
    parts = []
    for i, e in word:
        parts.append(names[i] if e == 1 else f"{names[i]}^{e}")
    return "*".join(parts)


def serialize(pres):
    """Canonical text; relations sorted by generator index."""
    names = pres.names
    lines = [f"pgroup p={pres.prime}"]
    for key, value in pres.metadata.items():
        lines.append(f"#: {key}: {value}")
    for g in pres.generators:
        lines.append(f"gen {g.name} order {g.order}")
    for i in sorted(pres.power_tails):
        lines.append(f"pow {names[i]} = {format_word(pres.power_tails[i], names)}")
    for j, i in sorted(pres.commutator_tails):
        lines.append(f"comm [{names[j]},{names[i]}] = "
                     f"{format_word(pres.commutator_tails[(j, i)], names)}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- validation

def validate(pres):
    """Shape diagnostics; an empty list means the presentation is well formed.

    Power tails of g_i may only use generators after g_i, and the tail of
    [g_j, g_i] only generators after g_j. Consistency is a separate question
    answered by :func:`pcg.collector.check_consistency`.
    """
    out = []
    n = len(pres.generators)
    names = pres.names
    if not is_prime(pres.prime):
        out.append(Diagnostic("prime", "header", f"{pres.prime} is not prime"))
    seen = set()
    for i, g in enumerate(pres.generators):
        if g.name in seen:
            out.append(Diagnostic("unique-names", f"gen {g.name}", "duplicate generator name"))
        seen.add(g.name)
        if prime_power_exponent(g.order, pres.prime) is None:
            out.append(Diagnostic("order", f"gen {g.name}",
                                  f"order {g.order} is not a positive power of {pres.prime}"))

    def check_word(word, lowest, location, rule):
        for idx, e in word:
            if not (0 <= idx < n):
                out.append(Diagnostic("index-range", location, f"generator index {idx} out of range"))
            elif idx <= lowest:
                out.append(Diagnostic(rule, location,
                                      f"tail uses {names[idx]}, only generators after "
                                      f"{names[lowest]} are allowed"))

    for i, word in sorted(pres.power_tails.items()):
        if not (0 <= i < n):
            out.append(Diagnostic("index-range", f"pow #{i}", "generator index out of range"))
            continue
        check_word(word, i, f"pow {names[i]}", "power-shape")
    for (j, i), word in sorted(pres.commutator_tails.items()):
        if not (0 <= i < j < n):
            out.append(Diagnostic("commutator-shape", f"comm #{j},{i}",
                                  "need 0 <= second < first < n"))
            continue
        check_word(word, j, f"comm [{names[j]},{names[i]}]", "commutator-shape")
    return out
