"""Built-in presentations with documented facts.

Every entry is addressable as ``name`` or ``name:key=value,...``. Fixed
groups ship their ``.pcp`` text in ``data/``; parametrized families are
generated. Each fact carries a basis:

* ``definition``: forced by the presentation (e.g. the order);
* ``standard``: textbook knowledge about the group;
* ``computed``: established by running this package;
* ``claimed``: asserted for the example family and checked by the tests.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from ..errors import ParameterError
from ..presentation import Presentation, is_prime, parse, serialize

DATA = resources.files(__package__) / "data"


@dataclass(frozen=True)
class Fact:
    key: str
    value: object
    basis: str


@dataclass
class CatalogEntry:
    name: str
    description: str
    params: dict  # name -> (default, check, message)
    build: object  # params -> pcp text
    facts: object  # params -> list of Fact
    source: str = ""
    completion: list = field(default_factory=list)

    def resolve(self, **given):
        unknown = set(given) - set(self.params)
        if unknown:
            raise ParameterError(f"{self.name} takes no parameter {sorted(unknown)[0]!r}")
        out = {}
        for key, (default, check, message) in self.params.items():
            value = given.get(key, default)
            try:
                value = int(value)
            except (TypeError, ValueError):
                raise ParameterError(f"{self.name}: {key} must be an integer") from None
            if not check(value):
                raise ParameterError(f"{self.name}: {message} (got {key}={value})")
            out[key] = value
        return out

    def text(self, **given):
        return self.build(**self.resolve(**given))

    def presentation(self, **given):
        params = self.resolve(**given)
        pres = parse(self.build(**params))
        label = self.label(**params)
        meta = dict(pres.metadata)
        meta.setdefault("name", label)
        return Presentation(pres.prime, pres.generators, pres.power_tails,
                            pres.commutator_tails, meta)

    def label(self, **given):
        params = self.resolve(**given)
        if not params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v}" for k, v in params.items())

    def fact_list(self, **given):
        return self.facts(**self.resolve(**given))


def _data(name):
    return (DATA / name).read_text()


def _fixed(name):
    return lambda: _data(f"{name}.pcp")


# ------------------------------------------------------------- families

def cyclic_text(p, k):
    return f"pgroup p={p}\ngen g order {p ** k}\n"


def elementary_text(p, d):
    lines = [f"pgroup p={p}"] + [f"gen g{i + 1} order {p}" for i in range(d)]
    return "\n".join(lines) + "\n"


EXAMPLE38_COMPLETION = [
    "d3 = [c2,a1] is not a new generator: d3 = d2*e2*e7",
    "e5 = [d3,a1] = c2^3 equals e2^-1, so c2^3 = e2^-1",
    "e6 = [d3,a2] is trivial",
    "[c1,b] = e2^-1 (trivial in the literal reading)",
    "[c2,b] = e7^-1 (trivial in the literal reading)",
    "all other commutators of pc generators are trivial",
]


def example38_text(n):
    """The completed two-generator example with o(a2) = 3^n."""
    lines = [
        "pgroup p=3",
        "#: name: example38",
        f"#: n: {n}",
        "#: generators: b = [a1,a2], c_i = [b,a_i], d_(2i-2+j) = [c_i,a_j], "
        "e_(2r-2+j) = [d_r,a_j]",
        "#: completion: " + "; ".join(EXAMPLE38_COMPLETION),
        "gen a1 order 9",
        f"gen a2 order {3 ** n}",
        "gen b order 9",
        "gen c1 order 3",
        "gen c2 order 3",
        "gen d1 order 3",
        "gen d2 order 3",
        "gen d4 order 3",
        "gen e2 order 3",
        "gen e7 order 3",
        "gen e8 order 3",
        "pow c2 = e2^-1",
        "comm [a2,a1] = b^-1",
        "comm [b,a1] = c1",
        "comm [b,a2] = c2",
        "comm [c1,a1] = d1",
        "comm [c1,a2] = d2",
        "comm [c2,a1] = d2*e2*e7",
        "comm [c2,a2] = d4",
        "comm [d1,a2] = e2",
        "comm [d2,a1] = e2^-1",
        "comm [d4,a1] = e7",
        "comm [d4,a2] = e8",
        "comm [c1,b] = e2^-1",
        "comm [c2,b] = e7^-1",
    ]
    return "\n".join(lines) + "\n"


def direct_product_text(left, right, name=None):
    """Direct product of two presentations over the same prime.

    Generators of the right factor get a numeric suffix (``_2``, ``_3``, ...)
    when their names are already taken.
    """
    a, b = parse(left), parse(right)
    if a.prime != b.prime:
        raise ParameterError("factors must share the prime")
    taken = set(a.names) | set(b.names)
    rename = {}
    for n in b.names:
        if n in a.names:
            k = 2
            while f"{n}_{k}" in taken:
                k += 1
            taken.add(f"{n}_{k}")
            rename[n] = f"{n}_{k}"
    out = [f"pgroup p={a.prime}"]
    if name:
        out.append(f"#: name: {name}")
    body_a = [ln for ln in serialize(a).splitlines()[1:] if not ln.startswith("#")]
    out += body_a
    for ln in serialize(b).splitlines()[1:]:
        if ln.startswith("#"):
            continue
        out.append(_rename_line(ln, rename))
    # gen lines must precede relation lines
    gens = [ln for ln in out[1:] if ln.startswith("gen ")]
    rest = [ln for ln in out[1:] if not ln.startswith("gen ")]
    return "\n".join([out[0]] + [ln for ln in rest if ln.startswith("#:")] + gens +
                     [ln for ln in rest if not ln.startswith("#:")]) + "\n"


def _rename_line(line, rename):
    return re.sub(r"[A-Za-z_][A-Za-z0-9_]*",
                  lambda m: rename.get(m.group(0), m.group(0)) if m.group(0) not in
                  ("gen", "order", "pow", "comm") else m.group(0), line)


# ---------------------------------------------------------------- facts

def _f(**kv):
    """Facts from keyword groups: key=(value, basis)."""
    return [Fact(k, v, b) for k, (v, b) in kv.items()]


def _cyclic_facts(p, k):
    return _f(order=(p ** k, "definition"), exponent=(p ** k, "definition"),
              nilpotency_class=(1, "definition"), rank=(1, "definition"),
              metabelian=(True, "definition"), strongly_semi=(True, "standard"),
              regular=(True, "standard"))


def _elementary_facts(p, d):
    return _f(order=(p ** d, "definition"), exponent=(p, "definition"),
              nilpotency_class=(1, "definition"), rank=(d, "definition"),
              metabelian=(True, "definition"), strongly_semi=(True, "standard"),
              regular=(True, "standard"))


_CLASS2_EXP3 = dict(order=(27, "definition"), exponent=(3, "standard"),
                    nilpotency_class=(2, "standard"), rank=(2, "standard"),
                    metabelian=(True, "standard"), strongly_semi=(True, "standard"),
                    regular=(True, "standard"), p_abelian=(True, "standard"))
_MOD27 = dict(order=(27, "definition"), exponent=(9, "standard"),
              nilpotency_class=(2, "standard"), rank=(2, "standard"),
              metabelian=(True, "standard"), strongly_semi=(True, "standard"),
              regular=(True, "standard"), p_abelian=(True, "computed"))


def _burnside_facts(d):
    if d == 2:
        return _f(**_CLASS2_EXP3)
    return _f(order=(3 ** 7, "standard"), exponent=(3, "standard"),
              nilpotency_class=(3, "standard"), rank=(3, "standard"),
              metabelian=(True, "standard"), strongly_semi=(True, "standard"),
              p_abelian=(True, "standard"))


def _example38_facts(n):
    return _f(order=(3 ** (12 + n), "definition"), exponent=(3 ** n, "computed"),
              nilpotency_class=(5, "computed"), rank=(2, "computed"),
              metabelian=(False, "computed"), semi_1=(True, "claimed"),
              semi_2=(False, "claimed"), inner_semi_2=(True, "claimed"),
              regular=(False, "claimed"), p_abelian=(False, "computed"),
              lower_central_log=([12 + n, 10, 8, 6, 3, 0], "computed"),
              g4_rank=(6, "computed"))


# ------------------------------------------------------------- registry

REGISTRY = {}


def _register(entry):
    REGISTRY[entry.name] = entry
    return entry


_register(CatalogEntry(
    "cyclic", "cyclic group of order p^k",
    {"p": (3, is_prime, "p must be prime"), "k": (2, lambda k: 1 <= k <= 40, "k must be >= 1")},
    cyclic_text, _cyclic_facts))
_register(CatalogEntry(
    "elementary", "elementary abelian group of order p^d",
    {"p": (3, is_prime, "p must be prime"), "d": (2, lambda d: 1 <= d <= 40, "d must be >= 1")},
    elementary_text, _elementary_facts))
_register(CatalogEntry(
    "extraspecial27_exp3", "extraspecial group 3^(1+2) of exponent 3", {},
    _fixed("extraspecial27_exp3"), lambda: _f(**_CLASS2_EXP3)))
_register(CatalogEntry(
    "extraspecial27_exp9", "extraspecial group 3^(1+2) of exponent 9 (isomorphic to m27)", {},
    _fixed("extraspecial27_exp9"), lambda: _f(**_MOD27)))
_register(CatalogEntry(
    "m27", "modular group of order 27", {}, _fixed("m27"), lambda: _f(**_MOD27)))
_register(CatalogEntry(
    "c3wrc3", "wreath product C3 wr C3, order 81", {}, _fixed("c3wrc3"),
    lambda: _f(order=(81, "definition"), exponent=(9, "standard"),
               nilpotency_class=(3, "standard"), rank=(2, "standard"),
               metabelian=(True, "standard"), regular=(False, "standard"),
               p_abelian=(False, "computed"), semi_1=(False, "computed"))))
_register(CatalogEntry(
    "burnside", "free d-generator group of exponent 3 (d = 2 or 3)",
    {"d": (3, lambda d: d in (2, 3), "d must be 2 or 3")},
    lambda d: _data("extraspecial27_exp3.pcp").replace(
        "#: name: extraspecial27_exp3", "#: name: burnside_2_3") if d == 2
    else _data("burnside_3_3.pcp"),
    _burnside_facts))
_register(CatalogEntry(
    "example38", "two-generator 3-group, semi-3-abelian and inner semi-9-abelian",
    {"n": (3, lambda n: 3 <= n <= 30, "n must be at least 3")},
    example38_text, _example38_facts, completion=EXAMPLE38_COMPLETION))

_PRODUCTS = {
    "ex27xc3": ("extraspecial27_exp3", ("cyclic", {"p": 3, "k": 1})),
    "m27xc3": ("m27", ("cyclic", {"p": 3, "k": 1})),
    "c3wrc3xc3": ("c3wrc3", ("cyclic", {"p": 3, "k": 1})),
    "ex27xex27": ("extraspecial27_exp3", ("extraspecial27_exp3", {})),
    "m27xc9": ("m27", ("cyclic", {"p": 3, "k": 2})),
}


def _product_builder(name, left, right):
    def build():
        lt = REGISTRY[left].text()
        rname, rparams = right
        return direct_product_text(lt, REGISTRY[rname].text(**rparams), name)
    return build


def _product_facts(left, right):
    def facts():
        lf = {f.key: f for f in REGISTRY[left].fact_list()}
        rname, rparams = right
        rf = {f.key: f for f in REGISTRY[rname].fact_list(**rparams)}
        out = []
        for key, combine in (("order", lambda a, b: a * b), ("exponent", max),
                             ("nilpotency_class", max), ("rank", lambda a, b: a + b),
                             ("metabelian", lambda a, b: a and b)):
            if key in lf and key in rf:
                basis = "definition" if lf[key].basis == rf[key].basis == "definition" \
                    else "standard"
                out.append(Fact(key, combine(lf[key].value, rf[key].value), basis))
        return out
    return facts


for _name, (_left, _right) in _PRODUCTS.items():
    _register(CatalogEntry(
        _name, f"direct product {_left} x {_right[0]}", {},
        _product_builder(_name, _left, _right), _product_facts(_left, _right)))


# ---------------------------------------------------------------- access

def names():
    return sorted(REGISTRY)


def entry(name):
    try:
        return REGISTRY[name]
    except KeyError:
        raise ParameterError(f"unknown catalog entry {name!r}") from None


def get(name, **params):
    """The presentation of a catalog entry."""
    return entry(name).presentation(**params)


def example38(n=3):
    return get("example38", n=n)


def parse_spec(spec):
    """'name:k=v,k=v' -> (name, {k: v})."""
    name, _, rest = spec.partition(":")
    params = {}
    for part in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = part.partition("=")
        if not eq:
            raise ParameterError(f"parameter {part!r} needs the form key=value")
        params[key.strip()] = value.strip()
    return name.strip(), params


def from_spec(spec):
    name, params = parse_spec(spec)
    return get(name, **params)


def label(spec):
    name, params = parse_spec(spec)
    return entry(name).label(**params)


def default_corpus():
    """(label, presentation) for every fixed entry and a few family members."""
    specs = ["cyclic:p=3,k=1", "cyclic:p=3,k=2", "cyclic:p=3,k=3", "cyclic:p=5,k=2",
             "elementary:p=3,d=2", "elementary:p=3,d=3", "elementary:p=2,d=3",
             "extraspecial27_exp3", "extraspecial27_exp9", "m27", "c3wrc3",
             "burnside:d=2", "burnside:d=3"] + sorted(_PRODUCTS)
    return [(label(s), from_spec(s)) for s in specs]


def fixture_paths(kind):
    """Paths of the shipped broken documents: ``bad`` or ``malformed``."""
    if kind not in ("bad", "malformed"):
        raise ValueError(kind)
    return sorted(p for p in (DATA / kind).iterdir() if p.name.endswith(".pcp"))


__all__ = ["CatalogEntry", "Fact", "default_corpus", "entry",
           "example38", "fixture_paths", "from_spec", "get", "label", "names", "parse_spec"]
