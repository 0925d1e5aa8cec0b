"""Golden slope against a truncated Liouville slope: same complexity, very different repetitivity."""

from __future__ import annotations

from cutproject.classify import classify, repetitivity_scan
from cutproject.diophantine import continued_fraction
from cutproject.gallery import build

RS = [1, 2, 4, 8, 16, 32, 50, 64, 128, 256, 512, 1024, 2000]


def main():
    for name in ("fibonacci", "liouville"):
        s = build(name).scheme
        recs = repetitivity_scan(s, rs=RS)
        v = classify(s)
        cf = continued_fraction(s.forms[0][0], 40)
        print(f"{name}: verdict {v.overall.value}, largest partial quotient {cf.max_quotient()}")
        for rec in recs:
            print(f"   r={rec.r:5d}  c(r)={rec.c_r:5d}  R(r)={rec.R}  R/r={rec.ratio:8.2f}")
        print()


if __name__ == "__main__":
    main()
