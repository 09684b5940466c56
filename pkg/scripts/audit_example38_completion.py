"""Compare the literal relations of example38 with the shipped completion.

Prints the overlap failures of the literal reading, the relations that the
completion adds or changes, and the invariants of the completed group.

    python3 scripts/audit_example38_completion.py [--n 3]
"""

import argparse

from pcg import catalog
from pcg import structure as S
from pcg.collector import PcGroup, build_group, check_consistency
from pcg.presentation import parse


def relations(pres):
    names = pres.names
    out = {}
    for i, w in pres.power_tails.items():
        out[f"{names[i]}^{pres.orders[i]}"] = w
    for (j, i), w in pres.commutator_tails.items():
        out[f"[{names[j]},{names[i]}]"] = w
    return out


def spell(word, names):
    return "*".join(f"{names[i]}^{e}" if e != 1 else names[i] for i, e in word) or "1"


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--n", type=int, default=3)
    args = ap.parse_args()

    literal_path = [p for p in catalog.fixture_paths("bad") if p.name == "example38_literal.pcp"][0]
    literal = parse(literal_path.read_text())
    completed = catalog.example38(args.n)

    print("literal reading (n = 3):")
    for f in check_consistency(PcGroup(literal)):
        print("  " + f.describe())

    print(f"\ncompleted presentation, n = {args.n}:")
    fails = check_consistency(PcGroup(completed))
    print(f"  overlap failures: {len(fails)}")

    if args.n == 3:
        old, new = relations(literal), relations(completed)
        print("\nrelations that differ (literal -> completed):")
        for key in sorted(set(old) | set(new)):
            a = spell(old.get(key, ()), literal.names) if key in old else "-"
            b = spell(new.get(key, ()), completed.names) if key in new else "-"
            if a != b:
                print(f"  {key:<10} {a:<24} -> {b}")
        gone = sorted(set(literal.names) - set(completed.names))
        if gone:
            print(f"  generators dropped: {', '.join(gone)}")

    print("\ndocumented completion:")
    for line in catalog.entry("example38").completion:
        print(f"  {line}")

    g = build_group(completed, name=f"example38:n={args.n}")
    stats = S.group_stats(g)
    print(f"\norder 3^{S.log_p(g.order, 3)}, exponent {stats.exponent}, class "
          f"{stats.nilpotency_class}, rank {stats.rank}, metabelian {stats.metabelian}")
    lower = S.lower_central_series(g)
    print("lower central series (log_3):", [S.log_p(s.order, 3) for s in lower])
    g4 = lower[3]
    print(f"G_4: order 3^{S.log_p(g4.order, 3)}, exponent {S.exponent(g4)}, rank {S.rank(g4)}")


if __name__ == "__main__":
    main()
