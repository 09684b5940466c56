"""Tabulate invariants and semi-abelian verdicts over the catalog corpus.

    python3 scripts/catalog_survey.py [--markdown]
"""

import argparse

from pcg import catalog
from pcg import properties as P
from pcg import structure as S
from pcg.collector import build_group


def row(label, g):
    stats = S.group_stats(g)
    r = stats.exponent_log
    semi = ["T" if P.is_semi_abelian_pi(g, i).holds else "F" for i in range(1, r + 1)]
    mode = "exhaustive" if g.order <= 3**7 else "sampled"
    return [label, g.prime, g.order, stats.exponent, stats.nilpotency_class, stats.rank,
            "T" if stats.metabelian else "F", "".join(semi) or "-",
            "T" if P.is_strongly_semi_abelian(g).holds else "F",
            {True: "T", False: "F", None: "?"}[P.is_p_abelian(g, mode).holds],
            {True: "T", False: "F", None: "?"}[P.is_regular(g, mode).holds]]


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--markdown", action="store_true")
    args = ap.parse_args()
    head = ["group", "p", "order", "exp", "class", "rank", "metab", "semi i=1..r",
            "strongly", "p-abelian", "regular"]
    rows = [row(label, build_group(pres, name=label)) for label, pres in catalog.default_corpus()]
    if args.markdown:
        print("| " + " | ".join(head) + " |")
        print("|" + "---|" * len(head))
        for r in rows:
            print("| " + " | ".join(map(str, r)) + " |")
        return
    widths = [max(len(str(x)) for x in col) for col in zip(head, *rows)]
    for r in [head] + rows:
        print("  ".join(str(x).ljust(w) for x, w in zip(r, widths)))


if __name__ == "__main__":
    main()
