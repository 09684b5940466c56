"""Full property report for example38(n), written as JSON.

    python3 scripts/example38_report.py --n 3 --out example38_n3.json
"""

import argparse
import json
import time

from pcg import catalog
from pcg import identities as I
from pcg import properties as P
from pcg import structure as S
from pcg.collector import build_group


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--budget", type=int, default=100, help="witnesses per direction")
    ap.add_argument("--tasks", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    t0 = time.perf_counter()
    g = build_group(catalog.example38(args.n), name=f"example38:n={args.n}")
    f = I.Facts(g, args.tasks)
    lower = S.lower_central_series(g)
    upper = S.center_and_upper_series(g)
    report = {
        "group": f"example38:n={args.n}",
        "stats": S.group_stats(g, args.tasks).as_dict(),
        "lower_central_log3": [S.log_p(s.order, 3) for s in lower],
        "upper_central_log3": [S.log_p(s.order, 3) for s in upper],
        "g4": {"order_log3": S.log_p(lower[3].order, 3), "exponent": S.exponent(lower[3]),
               "rank": S.rank(lower[3])},
    }
    print(json.dumps(report, indent=2))

    verdicts = {}
    for i in range(1, f.r + 1):
        v = f.semi(i)
        verdicts[f"semi_{3 ** i}"] = v.holds
        print(f"semi-{3 ** i}-abelian: {v.holds}")
    verdicts["inner_semi_9"] = f.inner(2).holds
    print(f"inner semi-9-abelian: {verdicts['inner_semi_9']}")
    report["verdicts"] = verdicts
    report["power_structure"] = P.power_structure_report(g, args.tasks).as_dict()

    w = I.semi_witnesses(g, 2, args.budget, args.tasks)
    report["semi_9_witnesses"] = {"case1": len(w.case1), "case2": len(w.case2),
                                  "complete": w.complete, "totals": w.totals}
    print("semi-9 violations by direction:", report["semi_9_witnesses"])
    report["seconds"] = round(time.perf_counter() - t0, 1)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
