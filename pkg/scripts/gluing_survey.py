"""Two-block gluings over Q: which scalar pairs force orthogonal crossings.

For a grid of scalar pairs (a1, a2) the script builds the two-block complex
with ambient forms <a_i> + diag(1, 1, -1), checks the dissimilarity
hypotheses, and reports the square status of the gluing ratio a2/a1.  It
then demos the transport test and the exact angle on one nonsquare gluing.

    python3 scripts/gluing_survey.py
"""

from __future__ import annotations

from fractions import Fraction

from hyplat.algebra import QQ
from hyplat.hybrid import (
    BlockComplex,
    BuildingBlock,
    Gluing,
    angle_with_hypersurface,
    finiteness_verdict,
    transported_subspace_rational,
)
from hyplat.linalg import Subspace
from hyplat.quadform import QuadraticSpace


def pair_complex(a1: int, a2: int) -> BlockComplex:
    shared = QuadraticSpace.diagonal(QQ, [1, 1, -1])
    return BlockComplex(
        pattern="gps",
        blocks={
            "N1": BuildingBlock("N1", Fraction(a1), shared),
            "N2": BuildingBlock("N2", Fraction(a2), shared),
        },
        gluings=[Gluing("N1", "N2")],
    )


def survey() -> None:
    scalars = [1, 2, 3, 4, 5, 6]
    print("pair grid over Q, shared form diag(1,1,-1):\n")
    print(f"{'a1':>3} {'a2':>3}  {'ratio':>6}  {'square':>6}  verdict")
    for a1 in scalars:
        for a2 in scalars:
            if a2 < a1:
                continue
            complex = pair_complex(a1, a2)
            report = finiteness_verdict(complex)
            (pair,) = report.pairs
            print(
                f"{a1:>3} {a2:>3}  {str(pair.ratio):>6}  "
                f"{str(pair.ratio_is_square):>6}  {report.verdict}"
            )
    print()


def transport_demo() -> None:
    # Nonsquare ratio 2: only spans that cap the wall direction with a
    # base-field vector survive transport.
    complex = pair_complex(1, 2)
    glue = complex.glue_map(complex.gluings[0])
    U = Subspace(QQ, 4, [[0, 0, 1, 0]])
    print("transport across ratio-2 gluing, U = span{e2}:")
    for xi in ([1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 0, 1]):
        verdict = transported_subspace_rational(glue, U, xi)
        print(f"  xi = {xi}: {verdict.status} ({verdict.detail})")
    print()


def angle_demo() -> None:
    space = QuadraticSpace.diagonal(QQ, [1, 1, 1, -1])
    e = [1, 1, 0, 0]
    print("angles against walls in diag(1,1,1,-1), e = (1,1,0,0):")
    for name, vectors in [
        ("span{e0 - e1}", [[1, -1, 0, 0]]),
        ("span{e0, e2}", [[1, 0, 0, 0], [0, 0, 1, 0]]),
        ("span{e0 + e1}", [[1, 1, 0, 0]]),
    ]:
        Z = Subspace(QQ, 4, vectors)
        value = angle_with_hypersurface(space, e, Z)
        print(f"  Z = {name}: cos^2 = {value}")


def main() -> None:
    survey()
    transport_demo()
    angle_demo()


if __name__ == "__main__":
    main()
