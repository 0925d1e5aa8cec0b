"""Minimal patch frequency times r^3 for the five-dimensional example, both windows.

The canonical run takes a few minutes at r = 16.
"""

from __future__ import annotations

import sys

from cutproject.classify import pq_estimate
from cutproject.gallery import build


def main(rs_canonical=(2, 4, 8, 16)):
    cub = pq_estimate(build("lemma_5_3").scheme, range(1, 21))
    print("cubical window, exact minimal region volume * r^3")
    for rec in cub.records:
        print(f"   r={rec.r:3d}  {rec.scaled:.5f}")
    can = pq_estimate(build("lemma_5_3", {"window": "canonical"}).scheme, rs_canonical)
    print("canonical window, smallest class frequency * r^3")
    for rec in can.records:
        print(f"   r={rec.r:3d}  {rec.scaled:.3e}")


if __name__ == "__main__":
    main(tuple(int(a) for a in sys.argv[1:]) or (2, 4, 8, 16))
