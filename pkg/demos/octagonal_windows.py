"""Ammann-Beenker: cubical against canonical window, rank data and derivability."""

from __future__ import annotations

from cutproject.classify import classify, permutation_scan
from cutproject.gallery import build
from cutproject.scheme import distinct_patches, generate
from cutproject.window import RegionDecomposition, local_derivability


def main():
    cub = build("ammann_beenker").scheme
    can = build("ammann_beenker", {"window": "canonical"}).scheme

    print("points with |n| <= 10:", len(generate(cub, 10)), "cubical,",
          len(generate(can, 10, exact_internal=False)), "canonical")

    v = classify(cub)
    print("kernel ranks", v.ranks, "target", v.target, "->", v.overall.value)
    print("canonical window:", classify(can).overall.value, "/", classify(can).reason)
    print("derivability", local_derivability(cub).to_json())

    for r in (1, 2, 3):
        print(f"r={r}: regions {RegionDecomposition(cub, r).count}, "
              f"canonical classes in |n| <= {30 * r}: {len(distinct_patches(can, r, 30 * r))}")

    print("rank condition per choice of physical coordinates:")
    for rec in permutation_scan(cub):
        print("  ", [i + 1 for i in rec.physical], rec.ranks, rec.lr1)


if __name__ == "__main__":
    main()
