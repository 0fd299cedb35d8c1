"""Belted sums from the bundled link table: trace fields and degree growth.

Builds iterated belted sums out of the bundled arithmetic pieces, prints the
invariant trace field of each composite, checks pairwise incommensurability
of the bases, and certifies degree growth along a family with opaque pieces
of increasing degree.

    python3 scripts/belt_family_growth.py
"""

from __future__ import annotations

from itertools import combinations

from hyplat.linkfields import (
    belted_sum,
    family_degree_growth,
    field_report,
    incommensurability_verdict,
    invariant_trace_field,
    manifold_from_record,
    opaque_manifold,
    parse_link_table,
)
from hyplat.resources import bundled_path


def main() -> None:
    table = parse_link_table(bundled_path("links.tbl").read_text())
    print(f"bundled links: {', '.join(sorted(table))}\n")

    bases = {name: manifold_from_record(rec) for name, rec in table.items()}
    for name, m in sorted(bases.items()):
        print(f"  {name}: {field_report(m)}")
    print()

    print("pairwise verdicts for the bases:")
    for a, b in combinations(sorted(bases), 2):
        v = incommensurability_verdict(bases[a], bases[b])
        print(f"  {a} vs {b}: {v.status} ({v.reason})")
    print()

    print("iterated belted sums:")
    s1 = belted_sum(bases["whitehead"], bases["chain5"])
    s2 = belted_sum(s1, bases["chain3"])
    for label, m in [("whitehead+chain5", s1), ("(...)+chain3", s2)]:
        desc = invariant_trace_field(m)
        print(
            f"  {label}: generators {desc.generators}, "
            f"degree {desc.degree}, belts left {m.remaining_belts}"
        )
    print()

    print("chained sums with opaque pieces of increasing degree:")
    base = bases["whitehead"]
    for d in (3, 5, 7, 11):
        # two belts per piece: one consumed by this sum, one left to chain
        piece = opaque_manifold(d, belts=2)
        base = belted_sum(base, piece)
        lo, hi = invariant_trace_field(base).degree_bounds
        print(f"  after opaque degree {d}: trace-field degree in [{lo}, {hi}]")
    print()

    degrees = (3, 5, 7, 11)
    print(f"one-opaque family over whitehead, degrees {degrees}:")
    growth = family_degree_growth(bases["whitehead"], degrees)
    print(f"  lower bounds: {growth.lower_bounds}")
    print(f"  strictly increasing: {growth.strictly_increasing}")
    print(f"  {growth.certificate}")


if __name__ == "__main__":
    main()
