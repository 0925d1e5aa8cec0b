"""A walk through the golden cut and project set: points, patches, gaps, repetitivity."""

from __future__ import annotations

from cutproject.classify import classify, repetitivity_scan, trend_test
from cutproject.diophantine import bad_scan, continued_fraction
from cutproject.gallery import build
from cutproject.scheme import generate
from cutproject.window import RegionDecomposition, cut_sets


def main():
    s = build("fibonacci").scheme
    print("slope", s.forms[0][0], "~", float(s.forms[0][0]))

    # the lift offsets over n = -8..8 spell out a Sturmian word
    pts = generate(s, 8)
    word = "".join("ab"[b.offset[0] - a.offset[0]] for a, b in zip(pts, pts[1:]))
    print("steps:", word)

    # three gaps, and one region per patch class
    for r in (1, 2, 5, 13):
        cut = cut_sets(s, r)[0]
        gaps = sorted({cut.gap(t) for t in range(len(cut))}, key=float)
        dec = RegionDecomposition(s, r)
        print(f"r={r:3d}  c(r)={dec.count:3d}  gap lengths {[round(float(g), 5) for g in gaps]}")

    cf = continued_fraction(s.forms[0][0])
    print("continued fraction", cf.partial_quotients, "period", cf.period)
    scan = bad_scan([s.forms[0][0]], 10 ** 6)
    print("inf n*||n/phi|| over n <= 10^6:", scan.infimum, "at n =", scan.witness)

    v = classify(s)
    print("verdict:", v.overall.value, [x.certificate for x in v.lr2])

    recs = repetitivity_scan(s, 64)
    print("R(r)/r at dyadic r:", [(rec.r, round(rec.ratio, 2)) for rec in recs if rec.r & (rec.r - 1) == 0])
    print("upward drift:", trend_test(recs).violated)


if __name__ == "__main__":
    main()
