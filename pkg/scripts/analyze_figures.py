"""Survey every bundled Coxeter diagram: classification, arithmeticity,
splittability.

Run from anywhere:

    python3 scripts/analyze_figures.py
"""

from __future__ import annotations

from hyplat.algebra.numberfield import approx_at_embedding
from hyplat.coxeter import (
    classify,
    parse_diagram,
    unsplittable_check,
    vinberg_arithmeticity,
)
from hyplat.resources import bundled_path


def describe(name: str) -> None:
    diagram = parse_diagram(bundled_path(f"figures/{name}").read_text())
    cls = classify(diagram)
    print(f"{name}")
    print(f"  rank {diagram.rank}, signature {cls.signature} -> {cls.kind}", end="")
    if cls.kind == "Hyperbolic":
        print(f" dim {cls.hyperbolic_dim}, {cls.volume_type}")
    else:
        print()
        return

    rep = vinberg_arithmeticity(diagram)
    gens = ", ".join(f"sqrt({g})" for g in rep.field_square_generators) or "none"
    print(
        f"  cycle field: degree {rep.field_degree} (adjoined: {gens}), "
        f"totally real: {rep.totally_real}"
    )
    print(
        f"  cycles integral: {rep.all_cycles_integral}, "
        f"conjugates semidefinite: {rep.conjugates_semidefinite}"
    )
    print(f"  arithmeticity: {rep.verdict}")
    if rep.certificate:
        print(f"    certificate: {rep.certificate}")
    for label, value in rep.cycle_values:
        approx = float(approx_at_embedding(value, digits=6))
        print(f"    {label} = {value}  (~{approx:.6g})")

    split = unsplittable_check(diagram, cls.hyperbolic_dim)
    print(f"  splittability: {split.status} ({split.reason})")
    if split.candidates:
        for verts in split.candidates:
            print(f"    candidate separating subgroup on vertices {verts}")
    print()


def main() -> None:
    figures = sorted(
        p.name for p in bundled_path("figures").iterdir() if p.suffix == ".cox"
    )
    print(f"analyzing {len(figures)} bundled diagrams\n")
    for name in figures:
        describe(name)


if __name__ == "__main__":
    main()
