"""Acceptance gate: five end-to-end criteria, one pass/fail line each.

Run with

    pytest tests/test_acceptance.py -v -s

Each test prints ``ACCEPTANCE <n> <name>: PASS (<elapsed>)`` on success and
enforces its stated runtime budget; a failure anywhere shows up as the
test's FAILED line.  All comparisons are exact unless a tolerance is part
of the criterion itself.
"""

from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction

from hyplat.algebra import QQ
from hyplat.algebra.multiquadratic import multiquadratic_field
from hyplat.algebra.numberfield import approx_at_embedding, is_square
from hyplat.algebra.quadratic_ext import QuadraticExt
from hyplat.coxeter import (
    classify,
    parse_diagram,
    unsplittable_check,
    vinberg_arithmeticity,
)
from hyplat.errors import DegenerateRestriction
from hyplat.hybrid import (
    BuildingBlock,
    GlueMap,
    angle_with_hypersurface,
    field_of_definition,
    transported_subspace_rational,
)
from hyplat.linalg import Matrix, Subspace, complement_q, project_q, signature_at
from hyplat.linkfields import (
    belted_sum,
    family_degree_growth,
    incommensurability_verdict,
    invariant_trace_field,
    load_link_table,
    manifold_from_record,
)
from hyplat.quadform import (
    QuadraticSpace,
    commensurable,
    hilbert_symbol,
    isometric_over_Q,
    relevant_primes,
    similar,
)
from hyplat.resources import bundled_path


class budget:
    """Context manager asserting the block finishes inside its budget."""

    def __init__(self, number: int, name: str, seconds: float):
        self.number = number
        self.name = name
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is None:
            assert elapsed < self.seconds, (
                f"criterion {self.number} took {elapsed:.2f}s, "
                f"budget {self.seconds:.0f}s"
            )
            print(
                f"\nACCEPTANCE {self.number} {self.name}: PASS ({elapsed:.2f}s)"
            )
        return False


# ---------------------------------------------------------------------------
# 1. Rationality of transported subspaces and forced orthogonality
# ---------------------------------------------------------------------------


def test_criterion_1_transport_rationality_and_orthogonality():
    with budget(1, "transport rationality + orthogonal angles", 5.0):
        shared = QuadraticSpace.diagonal(QQ, [1, 1, -1])
        b1 = BuildingBlock("N1", Fraction(1), shared)
        b2 = BuildingBlock("N2", Fraction(2), shared)
        glue = GlueMap.from_blocks(b1, b2)
        ambient2 = b2.ambient  # diag(2, 1, 1, -1), wall coordinate first
        e0 = [1, 0, 0, 0]

        # every coordinate subspace of the hypersurface H = {x0 = 0}
        subspaces = []
        for r in range(4):
            for idx in itertools.combinations((1, 2, 3), r):
                vectors = [[1 if j == i else 0 for j in range(4)] for i in idx]
                subspaces.append((idx, Subspace(QQ, 4, vectors)))

        # a deterministic grid of 100 vectors with nonzero wall coordinate
        grid = [
            xi
            for xi in itertools.product((1, 0, 2, -1), repeat=4)
            if xi[0] != 0
        ][:100]
        assert len(grid) == 100

        checked = rational_count = 0
        for idx, U in subspaces:
            for xi in grid:
                verdict = transported_subspace_rational(glue, U, xi)
                # expected: xi is a multiple of e0 modulo U, i.e. its
                # hypersurface part is absorbed by U
                h_part = [0, xi[1], xi[2], xi[3]]
                expected = U.contains(h_part)
                assert bool(verdict) == expected, (idx, xi, verdict.status)
                checked += 1
                if not verdict:
                    continue
                rational_count += 1
                W = verdict.k_basis
                assert W is not None and W.contains(e0)
                Z = complement_q(ambient2.gram, W)
                value = angle_with_hypersurface(ambient2, e0, Z)
                assert not value, (idx, xi, value)  # exactly zero
        assert checked == 800
        assert 0 < rational_count < checked


# ---------------------------------------------------------------------------
# 2. Commensurability engine over Q
# ---------------------------------------------------------------------------


def _random_diagonal_form(rng: random.Random) -> QuadraticSpace:
    dim = rng.randint(2, 4)
    entries = []
    for _ in range(dim):
        e = 0
        while e == 0:
            e = rng.randint(-6, 6)
        entries.append(Fraction(e))
    return QuadraticSpace.diagonal(QQ, entries)


def test_criterion_2_commensurability_engine():
    with budget(2, "commensurability engine", 10.0):
        rng = random.Random(20260814)
        corpus = [_random_diagonal_form(rng) for _ in range(50)]

        # (a) scaling by a nonzero rational is always Similar
        for _ in range(20):
            q = rng.choice(corpus)
            lam = Fraction(0)
            while lam == 0:
                lam = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            assert similar(q, q.scale(lam)).status == "Similar"

        # (b) symmetric + transitive: Similar must be an equivalence.
        # Partition a subcorpus into components of the Similar graph and
        # check that membership alone predicts every pairwise verdict.
        sub = corpus[:24]
        verdicts = {}
        for i, j in itertools.combinations(range(len(sub)), 2):
            vij = similar(sub[i], sub[j]).status
            vji = similar(sub[j], sub[i]).status
            assert vij == vji, f"asymmetric verdict on pair ({i}, {j})"
            verdicts[i, j] = vij
        component = list(range(len(sub)))
        for (i, j), v in verdicts.items():
            if v == "Similar":
                old, new = component[j], component[i]
                component = [new if c == old else c for c in component]
        for (i, j), v in verdicts.items():
            same = component[i] == component[j]
            assert (v == "Similar") == same, f"transitivity broken at ({i}, {j})"

        # (c) Hilbert-symbol product formula on 1000 random pairs
        for _ in range(1000):
            a = b = 0
            while a == 0:
                a = rng.randint(-60, 60)
            while b == 0:
                b = rng.randint(-60, 60)
            places = list(relevant_primes([Fraction(a)], [Fraction(b)]))
            product = hilbert_symbol(a, b, "inf")
            for p in places:
                product *= hilbert_symbol(a, b, p)
            assert product == 1, (a, b)

        # (d) the pinned verdict pair, witness verified independently
        q1 = QuadraticSpace.diagonal(QQ, [1, 1, 1, -1])
        q2 = QuadraticSpace.diagonal(QQ, [1, 1, 1, -2])
        q3 = QuadraticSpace.diagonal(QQ, [2, 2, 2, -2])
        assert commensurable(q1, q2).status == "NotCommensurable"
        verdict = commensurable(q1, q3)
        assert verdict.status == "Commensurable"
        lam = verdict.lambda_witness
        assert lam is not None
        assert isometric_over_Q(q1.scale(lam.to_fraction()), q3)


# ---------------------------------------------------------------------------
# 3. Coxeter verdicts on the bundled diagrams
# ---------------------------------------------------------------------------


def _analyze(name: str):
    diagram = parse_diagram(bundled_path(f"figures/{name}.cox").read_text())
    cls = classify(diagram)
    arith = vinberg_arithmeticity(diagram)
    split = unsplittable_check(diagram, cls.hyperbolic_dim)
    return cls, arith, split


def test_criterion_3_coxeter_verdicts():
    with budget(3, "Coxeter classification + arithmeticity", 10.0):
        cls, arith, split = _analyze("fig4_h5_simplex")
        assert cls.kind == "Hyperbolic" and cls.hyperbolic_dim == 5
        assert cls.volume_type == "FiniteVolumeNoncompact"
        # non-arithmetic and not quasi-arithmetic
        assert arith.verdict == "Neither"
        assert split.status == "UnsplittableCertified" and split.reason == "simplex"

        three_dim = {
            "fig5_a_compact_345": "Compact",
            "fig5_b_444": None,
            "fig5_c_tadpole_5": None,
            "fig6_a_3336": "FiniteVolumeNoncompact",
            "fig6_b_3436": "FiniteVolumeNoncompact",
            "fig6_c_3536": "FiniteVolumeNoncompact",
            "fig6_d_536_linear": "FiniteVolumeNoncompact",
        }
        for name, volume in three_dim.items():
            cls, arith, split = _analyze(name)
            assert cls.kind == "Hyperbolic" and cls.hyperbolic_dim == 3, name
            if volume is not None:
                assert cls.volume_type == volume, name
            assert arith.verdict == "Neither", name  # non-arithmetic
            assert split.status == "UnsplittableCertified", name
            assert split.reason == "simplex", name

        # control diagram: the [3,3,6] simplex group is arithmetic
        _, arith, _ = _analyze("fig_336_control")
        assert arith.verdict == "Arithmetic"


# ---------------------------------------------------------------------------
# 4. Link trace fields and degree growth
# ---------------------------------------------------------------------------


def test_criterion_4_link_fields():
    with budget(4, "belted sums + degree growth", 1.0):
        table = load_link_table()
        bases = {n: manifold_from_record(r) for n, r in table.items()}

        glued = belted_sum(bases["whitehead"], bases["chain3"])
        desc = invariant_trace_field(glued)
        assert desc.generators == (-1, 7)  # Q(sqrt(-1), sqrt(7)) = Q(i, sqrt(-7))
        assert desc.degree == 4

        for a, b in itertools.combinations(sorted(bases), 2):
            assert incommensurability_verdict(bases[a], bases[b]).status == (
                "Incommensurable"
            ), (a, b)

        growth = family_degree_growth(bases["whitehead"], (3, 5, 7, 9, 11, 13))
        assert growth.lower_bounds == (3, 5, 7, 9, 11, 13)
        assert growth.strictly_increasing
        assert "infinity" in growth.certificate


# ---------------------------------------------------------------------------
# 5. Property suites
# ---------------------------------------------------------------------------


def _random_symmetric(rng: random.Random, n: int) -> Matrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = Fraction(rng.randint(-4, 4))
    return Matrix(QQ, rows)


def _random_invertible(rng: random.Random, n: int) -> Matrix:
    while True:
        m = Matrix(
            QQ,
            [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)],
        )
        if m.det():
            return m


def test_criterion_5_property_suites():
    with budget(5, "exactness property suites", 60.0):
        rng = random.Random(5)

        # (i) Sylvester invariance under 200 random congruences
        for _ in range(200):
            n = rng.randint(2, 4)
            G = _random_symmetric(rng, n)
            S = _random_invertible(rng, n)
            congruent = S.transpose() @ G @ S
            assert signature_at(congruent) == signature_at(G)

        # (ii) projection idempotence and self-adjointness, 500 instances
        done = 0
        while done < 500:
            n = rng.randint(3, 4)
            G = Matrix.diagonal(
                QQ,
                [Fraction(rng.choice([1, 1, 2, 3, -1, -2]))] + [
                    Fraction(rng.choice([1, 2, 3, -1])) for _ in range(n - 1)
                ],
            )
            S = Subspace(
                QQ,
                n,
                [
                    [Fraction(rng.randint(-2, 2)) for _ in range(n)]
                    for _ in range(rng.randint(1, n - 1))
                ],
            )
            if S.is_zero:
                continue
            u = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
            v = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
            try:
                pu = project_q(G, S, u)
            except DegenerateRestriction:
                continue
            done += 1
            assert project_q(G, S, list(pu)) == pu  # idempotent
            pv = project_q(G, S, v)

            def pair(x, y):
                return sum(
                    xi * sum(G[i, j] * yj for j, yj in enumerate(y))
                    for i, (xi, _) in enumerate(zip(x, y))
                )

            assert pair(pu, v) == pair(u, pv)  # self-adjoint

        # (iii) angle closed form vs numeric supremum, 100 instances
        for _ in range(100):
            n = rng.randint(3, 4)
            diag = [Fraction(rng.randint(1, 5)) for _ in range(n)]
            space = QuadraticSpace.diagonal(QQ, diag)
            Z = Subspace.zero(QQ, n)
            while Z.dim not in (1, 2):
                Z = Subspace(
                    QQ,
                    n,
                    [
                        [Fraction(rng.randint(-2, 2)) for _ in range(n)]
                        for _ in range(rng.randint(1, 2))
                    ],
                )
            e = [Fraction(0)] * n
            while not space.evaluate(e):
                e = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
            exact = float(angle_with_hypersurface(space, e, Z).to_fraction())

            dfl = [float(d) for d in diag]

            def q_of(vec_f):
                return sum(d * x * x for d, x in zip(dfl, vec_f))

            def ip(x, y):
                return sum(d * a * b for d, a, b in zip(dfl, x, y))

            efl = [float(x) for x in e]
            basis = [[float(x.to_fraction()) for x in b] for b in Z.basis]

            def ratio(coeffs):
                z = [
                    sum(c * b[k] for c, b in zip(coeffs, basis))
                    for k in range(n)
                ]
                qz = q_of(z)
                if qz < 1e-12:
                    return 0.0
                return ip(efl, z) ** 2 / (q_of(efl) * qz)

            best_c, best = None, -1.0
            for _ in range(400):
                c = [rng.uniform(-1, 1) for _ in basis]
                r = ratio(c)
                assert r <= exact + 1e-9  # closed form dominates the samples
                if r > best:
                    best_c, best = c, r
            step = 0.5
            while step > 1e-9:
                improved = False
                for k in range(len(best_c)):
                    for sgn in (1, -1):
                        c = list(best_c)
                        c[k] += sgn * step
                        r = ratio(c)
                        if r > best:
                            best_c, best = c, r
                            improved = True
                if not improved:
                    step /= 2
            assert abs(best - exact) <= 1e-6, (diag, e, Z.basis, best, exact)

        # (iv) square detection: 500 squares, 500 certified nonsquares
        fields = [
            QQ,
            multiquadratic_field((2,)),
            multiquadratic_field((2, 5)),
        ]
        nonsquare_scalars = {0: [2, 3, 5, 7], 1: [3, 5, 7], 2: [3, 7, 11]}
        for k in range(500):
            K = fields[k % 3]
            a = K.zero
            while not a:
                a = K.element(
                    [Fraction(rng.randint(-3, 3)) for _ in range(K.degree)]
                )
            w = is_square(a * a)
            assert w is not None and w * w == a * a
            # multiply the square by a scalar with no square root in K
            d = rng.choice(nonsquare_scalars[k % 3])
            assert is_square(a * a * K.from_fraction(d)) is None

        # (v) descent to the base field round-trips, 200 random subspaces
        L = QuadraticExt(QQ, Fraction(2))
        for _ in range(200):
            n = rng.randint(2, 4)
            SK = Subspace(
                QQ,
                n,
                [
                    [Fraction(rng.randint(-3, 3)) for _ in range(n)]
                    for _ in range(rng.randint(1, n))
                ],
            )
            SL = Subspace(
                L, n, [[L.from_base(c) for c in b] for b in SK.basis]
            )
            descended = field_of_definition(SL)
            assert descended == SK
            if not SK.is_zero and SK.dim < n:
                # perturb one basis vector off the base field: no descent
                twisted = [list(b) for b in SL.basis]
                twisted[0][0] = twisted[0][0] + L.gen
                SL2 = Subspace(L, n, twisted)
                stable = field_of_definition(SL2)
                assert stable is None or stable.dim == SL2.dim
