"""Command-line front end.

    pcg validate --input g.pcp
    pcg props --catalog cyclic:p=3,k=2 --property semi:i=1
    pcg verify-paper --json report.json

Exit status: 0 when every requested claim holds (or is vacuous), 1 when a
claim fails or a verdict contradicts its expectation, 2 for input, parse or
consistency errors, 3 when a capacity limit is hit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import catalog
from . import identities as I
from . import oracle as O
from . import properties as P
from . import structure as S
from .collector import PcGroup, build_group, check_consistency
from .config import override_limits
from .errors import CapacityError, ParameterError, PcgError
from .presentation import parse, validate

SCHEMA = "pcg-report/1"
VERSION = "0.1.0"

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


class Report:
    """Collects sections of a run and renders them as deterministic JSON."""

    def __init__(self, command, args):
        self.data = {"schema": SCHEMA, "tool_version": VERSION, "command": command,
                     "options": {"mode": args.mode, "samples": args.samples, "seed": args.seed,
                                 "witness_budget": args.witness_budget, "cap": args.cap}}
        self.timings = {}
        self.started = time.perf_counter()

    def __setitem__(self, key, value):
        self.data[key] = value

    def __getitem__(self, key):
        return self.data[key]

    def setdefault(self, key, value):
        return self.data.setdefault(key, value)

    def dump(self, path, status, timings=False):
        self.data["exit_status"] = status
        out = dict(self.data)
        if timings:
            out["timings"] = {**self.timings, "total": round(time.perf_counter() - self.started, 3)}
        text = json.dumps(_plain(out), indent=2, sort_keys=True) + "\n"
        Path(path).write_text(text)


def _plain(x):
    """Make numpy scalars and tuples JSON friendly."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return x.item()
    return x


# ---------------------------------------------------------------- input

def _load(args, checked=True):
    """(presentation, group or None, input record)."""
    if args.input and args.catalog:
        raise ParameterError("use either --input or --catalog")
    if args.input:
        text = Path(args.input).read_text()
        record = {"file": Path(args.input).name,
                  "sha256": hashlib.sha256(text.encode()).hexdigest()}
        pres = parse(text)
        label = Path(args.input).stem
    else:
        spec = args.catalog or "example38"
        pres = catalog.from_spec(spec)
        label = catalog.label(spec)
        record = {"catalog": label}
    group = build_group(pres, checked=checked, name=label) if checked else None
    return pres, group, record


def _say(*parts):
    print(*parts, flush=True)


def _verdict_line(v):
    holds = {True: "true", False: "false", None: "unknown"}[v.holds]
    line = f"{v.name:<28} {holds:<8} [{v.mode}]"
    if v.witness is not None:
        line += "  witness: " + " , ".join(x.group.spell(x) for x in v.witness)
    if "direction" in v.detail:
        line += f"  ({v.detail['direction']})"
    return line


def _claim_line(c):
    line = f"{c.claim:<9} {c.verdict:<8} [{c.mode}] {c.statement}"
    if c.witness is not None:
        line += "\n          witness: " + " , ".join(x.group.spell(x) for x in c.witness)
    if c.informative and c.verdict == I.FAILS:
        line += "\n          (recorded, not counted)"
    return line


# ------------------------------------------------------------- commands

def cmd_validate(args, report):
    text = Path(args.input).read_text() if args.input else None
    if text is None:
        pres = catalog.from_spec(args.catalog or "example38")
    else:
        pres = parse(text)
    diags = validate(pres)
    report["diagnostics"] = [str(d) for d in diags]
    for d in diags:
        _say(str(d))
    _say("valid" if not diags else f"{len(diags)} diagnostic(s)")
    return EXIT_OK if not diags else EXIT_INPUT


def cmd_consistency(args, report):
    pres, _, record = _load(args, checked=False)
    report["input"] = record
    diags = validate(pres)
    if diags:
        report["diagnostics"] = [str(d) for d in diags]
        for d in diags:
            _say(str(d))
        return EXIT_INPUT
    failures = check_consistency(PcGroup(pres))
    report["failures"] = [f.describe() for f in failures]
    for f in failures:
        _say(f.describe())
    _say("consistent" if not failures else f"{len(failures)} overlap failure(s)")
    return EXIT_OK if not failures else EXIT_INPUT


def _completion(record):
    name = record.get("catalog", "").split(":")[0]
    if not name:
        return []
    return catalog.entry(name).completion


def cmd_info(args, report):
    pres, g, record = _load(args)
    report["input"] = record
    stats = S.group_stats(g, args.tasks)
    report["group"] = stats.as_dict()
    report["generators"] = [{"name": x.name, "order": x.order} for x in pres.generators]
    _say(f"group {g.name}: order {g.prime}^{S.log_p(g.order, g.prime)} = {g.order}")
    for key, value in stats.as_dict().items():
        _say(f"  {key:<11} {value}")
    delta = _completion(record)
    if delta:
        report["completion"] = delta
        _say("completion of the listed relations:")
        for line in delta:
            _say(f"  {line}")
    return EXIT_OK


def cmd_series(args, report):
    _, g, record = _load(args)
    report["input"] = record
    p = g.prime
    lower = S.lower_central_series(g)
    upper = S.center_and_upper_series(g)
    phi, maximals = S.frattini_and_maximals(g)
    derived = [S.whole_group(g)]
    while derived[-1].order > 1:
        nxt = S.derived_subgroup(derived[-1])
        if nxt.order == derived[-1].order:
            break
        derived.append(nxt)
    r = S.log_p(S.exponent(g, args.tasks), p)
    powers = []
    for i in range(1, r + 1):
        kset, w = S.omega(g, i, args.tasks)
        aset, a = S.agemo(g, i, args.tasks)
        powers.append({"i": i, "omega_set": len(kset), "omega": w.order,
                       "agemo_set": len(aset), "agemo": a.order})
    out = {"lower_central": [S.log_p(s.order, p) for s in lower],
           "upper_central": [S.log_p(s.order, p) for s in upper],
           "derived": [S.log_p(s.order, p) for s in derived],
           "frattini": S.log_p(phi.order, p), "maximal_subgroups": len(maximals),
           "powers": powers, "orders_as": f"log base {p}"}
    report["series"] = out
    for key in ("lower_central", "upper_central", "derived"):
        _say(f"{key:<16} {out[key]}")
    _say(f"{'frattini':<16} {out['frattini']}   maximal subgroups: {len(maximals)}")
    for row in powers:
        _say(f"  i={row['i']}: |Omega set| {row['omega_set']}  |Omega| {row['omega']}  "
             f"|Agemo set| {row['agemo_set']}  |Agemo| {row['agemo']}")
    return EXIT_OK


def _parse_property(text):
    name, _, rest = text.partition(":")
    try:
        params = dict(part.split("=", 1) for part in rest.split(",") if part)
        return name, {k: int(v) for k, v in params.items()}
    except ValueError:
        raise ParameterError(f"cannot read property {text!r}; use name:i=N") from None


PROPERTY_NAMES = ("p-abelian", "semi", "semi-def", "strongly", "inner", "regular",
                  "power-structure", "sections")


def _run_property(g, name, params, args):
    mode = args.mode
    if name == "p-abelian":
        return P.is_p_abelian(g, mode, args.samples, args.seed, args.tasks)
    if name == "semi":
        return P.is_semi_abelian_pi(g, params.get("i", 1), args.tasks)
    if name == "semi-def":
        return P.is_semi_abelian_definitional(g, params.get("i", 1), mode, args.samples,
                                              args.seed, args.tasks)
    if name == "strongly":
        return P.is_strongly_semi_abelian(g, args.tasks)
    if name == "inner":
        return P.is_inner_semi_abelian(g, params.get("i", 2), args.tasks)
    if name == "regular":
        return P.is_regular(g, mode, min(args.samples, 2_000), args.seed, args.tasks)
    raise ParameterError(f"unknown property {name!r}; choose from {', '.join(PROPERTY_NAMES)}")


def cmd_props(args, report):
    _, g, record = _load(args)
    report["input"] = record
    status = EXIT_OK
    verdicts = []
    for text in args.property or ["semi:i=1"]:
        name, params = _parse_property(text)
        if name == "power-structure":
            rep = P.power_structure_report(g, args.tasks)
            report.setdefault("power_structure", rep.as_dict())
            for row in rep.rows:
                _say(f"i={row.i}: (1) {row.property1}  (2) {row.property2}  "
                     f"pi well-defined {row.pi_well_defined}  injective {row.pi_injective}  "
                     f"|G:Omega| = |Agemo| {row.index_equality}")
            continue
        if name == "sections":
            rep = P.sections_report(g, args.tasks)
            report.setdefault("sections", rep)
            _say(f"P1 {rep['P1']}  P2 {rep['P2']}  P3 {rep['P3']}  (scope: {rep['scope']})")
            continue
        v = _run_property(g, name, params, args)
        verdicts.append(v.as_dict())
        _say(_verdict_line(v))
        if args.expect is not None:
            want = {"true": True, "false": False}[args.expect]
            if v.holds is not want:
                status = EXIT_FAIL
    report["verdicts"] = verdicts
    return status


def _options(args):
    return I.ClaimOptions(mode=args.mode, samples=args.samples, seed=args.seed,
                          tasks=args.tasks, witness_budget=args.witness_budget,
                          domain=args.domain)


def cmd_identities(args, report):
    _, g, record = _load(args)
    report["input"] = record
    claims = args.claims.split(",") if args.claims else None
    reports = I.verify_claims(g, claims, _options(args))
    report["claims"] = [c.as_dict() for c in reports]
    for c in reports:
        _say(_claim_line(c))
    return EXIT_OK if all(c.ok for c in reports) else EXIT_FAIL


# ---------------------------------------------------------- verify-paper

EXAMPLE38_EXPECTATIONS = (
    # (property, i, expected truth value)
    ("semi", 1, True),
    ("semi", 2, False),
    ("inner", 2, True),
)


def _catalog_checks(args):
    """Theorem checks and method agreement across the small catalog groups."""
    rows = []
    ok = True
    for label, pres in catalog.default_corpus():
        g = build_group(pres, name=label)
        if g.order > 3**6:
            continue
        opts = I.ClaimOptions(mode="exhaustive", seed=args.seed, tasks=args.tasks,
                              witness_budget=args.witness_budget)
        claims = I.verify_claims(g, ["T1.1", "T1.3"], opts)
        agree = {}
        for i in (1, 2):
            a = P.is_semi_abelian_definitional(g, i, "exhaustive", tasks=args.tasks).holds
            b = P.is_semi_abelian_pi(g, i, args.tasks).holds
            agree[f"i={i}"] = {"definitional": a, "pi": b, "agree": a == b}
            ok &= a == b
        ok &= all(c.ok for c in claims)
        rows.append({"group": label, "claims": [c.as_dict() for c in claims],
                     "semi_agreement": agree})
        _say(f"  {label:<22} " + "  ".join(f"{c.claim} {c.verdict}" for c in claims) +
             "  definitional/pi agree: " + str(all(x["agree"] for x in agree.values())))
    return rows, ok


def cmd_verify_paper(args, report):
    spec = args.catalog or "example38:n=3"
    if args.input:
        raise ParameterError("verify-paper runs on the example family; use --catalog example38:n=N")
    if catalog.parse_spec(spec)[0] != "example38":
        raise ParameterError("verify-paper expects --catalog example38[:n=N]")
    args.catalog = spec
    pres, _, record = _load(args, checked=False)
    report["input"] = record
    t0 = time.perf_counter()
    failures = check_consistency(PcGroup(pres))
    report["consistency"] = {"failures": [f.describe() for f in failures]}
    report["completion"] = _completion(record)
    _say(f"{record['catalog']}: consistency {'ok' if not failures else 'FAILED'}")
    for line in report["completion"]:
        _say(f"  completion: {line}")
    if failures:
        return EXIT_INPUT
    g = build_group(pres, name=record["catalog"])
    stats = S.group_stats(g, args.tasks)
    report["group"] = stats.as_dict()
    report.timings["stats"] = round(time.perf_counter() - t0, 3)
    _say("group: " + ", ".join(f"{k} {v}" for k, v in stats.as_dict().items()))

    status = EXIT_OK
    facts = I.Facts(g, args.tasks)
    verdicts = []
    for name, i, want in EXAMPLE38_EXPECTATIONS:
        v = facts.semi(i) if name == "semi" else facts.inner(i)
        verdicts.append({**v.as_dict(), "expected": want})
        _say(_verdict_line(v))
        if v.holds is not want or (not want and v.witness is None):
            status = EXIT_FAIL
    for extra in (lambda: P.is_p_abelian(g, "sampled", args.samples, args.seed),
                  lambda: P.is_semi_abelian_definitional(g, 2, "sampled", args.samples,
                                                         args.seed),
                  lambda: P.is_regular(g, "sampled", min(args.samples, 2_000), args.seed)):
        v = extra()
        verdicts.append(v.as_dict())
        _say(_verdict_line(v))
    report["verdicts"] = verdicts
    report["power_structure"] = P.power_structure_report(g, args.tasks).as_dict()
    report.timings["verdicts"] = round(time.perf_counter() - t0, 3)

    claims = I.verify_claims(g, None, _options(args), facts)
    report["claims"] = [c.as_dict() for c in claims]
    for c in claims:
        _say(_claim_line(c))
    if not all(c.ok for c in claims):
        status = EXIT_FAIL
    report.timings["claims"] = round(time.perf_counter() - t0, 3)

    _say("catalog-wide checks:")
    rows, ok = _catalog_checks(args)
    report["catalog"] = rows
    if not ok:
        status = EXIT_FAIL
    failed = [c.claim for c in claims if not c.ok]
    _say("all claims hold" if status == EXIT_OK else f"failed: {', '.join(failed) or 'see above'}")
    return status


def cmd_oracle_check(args, report):
    _, g, record = _load(args)
    report["input"] = record
    t = O.build_table(g)
    cross = O.cross_validate(g, t, samples=args.samples, seed=args.seed)
    out = {"cross_validation": cross.as_dict(), "semi": []}
    ok = cross.ok
    r = S.log_p(S.exponent(g), g.prime)
    for i in range(1, max(2, r) + 1):
        tv = O.oracle_semi_abelian(t, i)
        cv = P.is_semi_abelian_pi(g, i, args.tasks)
        out["semi"].append({"i": i, "table": tv.holds, "collector": cv.holds})
        ok &= tv.holds == cv.holds
        _say(f"semi i={i}: table {tv.holds}  collector {cv.holds}")
    report["oracle"] = out
    _say(f"cross-validation over {cross.pairs} pairs: "
         f"{'agree' if cross.ok else 'DISAGREE'}")
    for d in cross.disagreements[:5]:
        _say(f"  {d}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_list_catalog(args, report):
    rows = []
    for name in catalog.names():
        e = catalog.entry(name)
        params = {k: v[0] for k, v in e.params.items()}
        facts = [{"key": f.key, "value": f.value, "basis": f.basis} for f in e.fact_list()]
        rows.append({"name": name, "description": e.description, "defaults": params,
                     "facts": facts})
        shown = ",".join(f"{k}={v}" for k, v in params.items())
        _say(f"{name + (':' + shown if shown else ''):<24} {e.description}")
    report["catalog"] = rows
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "consistency": cmd_consistency,
    "info": cmd_info,
    "series": cmd_series,
    "props": cmd_props,
    "identities": cmd_identities,
    "verify-paper": cmd_verify_paper,
    "oracle-check": cmd_oracle_check,
    "list-catalog": cmd_list_catalog,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="FILE", help="a .pcp document")
    src.add_argument("--catalog", metavar="NAME[:k=v,...]", help="a catalog entry")
    common.add_argument("--mode", choices=["auto", "exhaustive", "sampled"], default="auto")
    common.add_argument("--samples", type=int, default=10_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tasks", type=int, default=1, help="worker threads")
    common.add_argument("--json", metavar="PATH", help="write the run report here")
    common.add_argument("--timings", action="store_true", help="include timings in the report")
    common.add_argument("--witness-budget", type=int, default=100)
    common.add_argument("--cap", type=int, default=None, metavar="ELEMENTS",
                        help="element cap for enumerations")

    parser = argparse.ArgumentParser(prog="pcg", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "props":
            sp.add_argument("--property", action="append",
                            help="p-abelian | semi:i=N | semi-def:i=N | strongly | inner:i=N "
                                 "| regular | power-structure | sections")
            sp.add_argument("--expect", choices=["true", "false"])
        if name in ("identities", "verify-paper"):
            sp.add_argument("--domain", choices=["set", "subgroup"], default="set")
        if name == "identities":
            sp.add_argument("--claims", help="comma-separated claim ids or prefixes")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    report = Report(args.command, args)
    cap = {"element_cap": args.cap} if args.cap else {}
    try:
        with override_limits(**cap):
            status = COMMANDS[args.command](args, report)
    except CapacityError as e:
        report["error"] = {"code": e.code, "message": str(e)}
        print(f"capacity: {e}", file=sys.stderr)
        status = EXIT_CAPACITY
    except (PcgError, OSError) as e:
        report["error"] = {"code": getattr(e, "code", "io"), "message": str(e)}
        print(f"error: {e}", file=sys.stderr)
        status = EXIT_INPUT
    if args.json:
        report.dump(args.json, status, args.timings)
    return status


if __name__ == "__main__":
    sys.exit(main())
