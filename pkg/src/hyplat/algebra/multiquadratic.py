"""Multiquadratic composita Q(sqrt(d1), ..., sqrt(dt)).

Generators are squarefree integers (!= 0, 1).  They are canonicalized by
GF(2) linear algebra on prime-support vectors (with a sign bit), which both
removes multiplicative dependencies (e.g. {2, 3, 6}) and gives a canonical
generator list so that equal composita always present identical generators.

A totally real compositum (all canonical generators positive) is constructed
as an honest :class:`~hyplat.algebra.numberfield.NumberField` of degree 2^t
over the power basis of gamma = sum_i sqrt(d_i), together with conversion to
and from the monomial basis {prod_{i in S} sqrt(d_i)}.  A compositum with a
negative generator is returned as an :class:`ImaginaryCompositum` — a
degree/containment bookkeeping descriptor with no element arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from hyplat.algebra import polynomials as P
from hyplat.algebra.numberfield import (
    FieldElement,
    NumberField,
    rational_square_root,
    sign_at_embedding,
)

__all__ = [
    "multiquadratic_field",
    "MultiquadraticField",
    "ImaginaryCompositum",
    "squarefree_int",
]


def squarefree_int(n: int) -> bool:
    if n == 0:
        return False
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        while n % d == 0:
            n //= d
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _support_vector(d: int, primes: list[int]) -> int:
    """Bit vector: bit 0 = sign, bit (i+1) = parity of prime i's exponent."""
    v = 1 if d < 0 else 0
    for i, p in enumerate(primes):
        e = 0
        m = abs(d)
        while m % p == 0:
            m //= p
            e += 1
        if e & 1:
            v |= 1 << (i + 1)
    return v


def _canonical_generators(discs: Sequence[int]) -> list[int]:
    """GF(2)-reduce a list of squarefree discriminants to canonical form."""
    primes = sorted({p for d in discs for p in _prime_factors(d)})
    vecs = [_support_vector(d, primes) for d in discs]
    # XOR linear basis, kept sorted descending so insertion fully reduces.
    basis: list[int] = []
    for v in vecs:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    # Reduced echelon form: clear each leading bit from all other rows.
    reduced = list(basis)
    for i in range(len(reduced)):
        lead = 1 << (reduced[i].bit_length() - 1)
        for j in range(len(reduced)):
            if j != i and reduced[j] & lead:
                reduced[j] ^= reduced[i]
    # Convert back to integers.
    out = []
    for v in reduced:
        d = -1 if v & 1 else 1
        for i, p in enumerate(primes):
            if v & (1 << (i + 1)):
                d *= p
        if d != 1:
            out.append(d)
    return sorted(out, key=lambda d: (abs(d), d))


@dataclass(frozen=True)
class ImaginaryCompositum:
    """Bookkeeping descriptor for a compositum with complex embeddings.

    Carries exact degree and square-class containment, no element arithmetic.
    """

    generators: tuple[int, ...]

    @property
    def degree(self) -> int:
        return 1 << len(self.generators)

    @property
    def is_totally_real(self) -> bool:
        return False

    def contains_sqrt(self, d: int) -> bool:
        return _in_span(self.generators, d)

    def __repr__(self) -> str:
        gens = ", ".join(f"sqrt({d})" for d in self.generators)
        return f"ImaginaryCompositum(Q({gens}), degree {self.degree})"


def _in_span(generators: Sequence[int], d: int) -> bool:
    if not squarefree_int(d) and d != 1:
        raise ValueError(f"discriminant {d} is not squarefree")
    if d == 1:
        return True
    primes = sorted({p for g in list(generators) + [d] for p in _prime_factors(g)})
    vecs = [_support_vector(g, primes) for g in generators]
    target = _support_vector(d, primes)
    basis = []
    for v in vecs:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    for b in basis:
        target = min(target, target ^ b)
    return target == 0


class MultiquadraticField(NumberField):
    """A totally real multiquadratic compositum as a concrete number field."""

    def __init__(self, generators: Sequence[int]):
        gens = tuple(generators)
        t = len(gens)
        n = 1 << t
        # Monomial basis indexed by bitmasks: index S <-> prod_{i in S} sqrt(d_i);
        # products obey e_S * e_T = (prod_{i in S&T} d_i) * e_{S^T}.
        disc_prod = [1] * n
        for s in range(n):
            for i in range(t):
                if s & (1 << i):
                    disc_prod[s] *= gens[i]

        def mono_mul(u: list[Fraction], v: list[Fraction]) -> list[Fraction]:
            out = [Fraction(0)] * n
            for s, a in enumerate(u):
                if a:
                    for r, b in enumerate(v):
                        if b:
                            common = s & r
                            coeff = Fraction(1)
                            for i in range(t):
                                if common & (1 << i):
                                    coeff *= gens[i]
                            out[s ^ r] += a * b * coeff
            return out

        gamma = [Fraction(0)] * n
        for i in range(t):
            gamma[1 << i] = Fraction(1)
        if t == 0:
            gamma = [Fraction(0)]  # the zero element; field is Q

        # Powers of gamma in monomial coordinates, and the first linear
        # dependence among them = the minimal polynomial.
        powers: list[list[Fraction]] = []
        cur = [Fraction(1)] + [Fraction(0)] * (n - 1)
        for _ in range(n + 1):
            powers.append(cur)
            cur = mono_mul(cur, gamma)
        minpoly = _first_dependence(powers, n)
        if P.degree(minpoly) != n:
            raise ValueError(
                "generators do not produce a primitive element of full degree "
                f"(got degree {P.degree(minpoly)}, expected {n})"
            )
        super().__init__(minpoly, _trusted=True)
        if not self.is_totally_real:
            raise AssertionError("real multiquadratic compositum must be totally real")

        self.generators: tuple[int, ...] = gens
        self.t = t
        # power -> monomial change of basis: column j = gamma^j.
        pm = [[powers[j][s] for j in range(n)] for s in range(n)]
        self._power_to_mono = pm
        self._mono_to_power = _invert_fraction_matrix(pm)

        self._sqrts: dict[int, FieldElement] = {}
        for i in range(t):
            self._sqrts[gens[i]] = self.element(
                [self._mono_to_power[k][1 << i] for k in range(n)]
            )
        # Chosen embedding: the one where every sqrt generator is positive.
        chosen = None
        for j in range(self.n_real_embeddings):
            if all(sign_at_embedding(self._sqrts[d], j) > 0 for d in gens):
                chosen = j
                break
        if chosen is None:
            raise AssertionError("no all-positive embedding found")
        self.chosen_embedding = chosen
        self._sign_vectors: dict[int, tuple[int, ...]] = {}

    # -- multiquadratic-specific API ----------------------------------------

    def contains_sqrt(self, d: int) -> bool:
        return _in_span(self.generators, d)

    def sqrt(self, d: int) -> FieldElement:
        """The (positive at chosen embedding) square root of integer d."""
        if d == 1:
            return self.one
        if not self.contains_sqrt(d):
            raise ValueError(f"sqrt({d}) is not in {self!r}")
        # Find the monomial subset S whose generator product matches d mod
        # squares, then scale: prod_{i in S} sqrt(d_i) = m * sqrt(d).
        t, n = self.t, 1 << self.t
        for s in range(n):
            prod = 1
            for i in range(t):
                if s & (1 << i):
                    prod *= self.generators[i]
            ratio = rational_square_root(Fraction(prod, d))
            if ratio is not None:
                mono = self.element([self._mono_to_power[k][s] for k in range(n)])
                return mono / ratio
        raise AssertionError("span membership held but no monomial matched")

    def to_monomial(self, a: FieldElement) -> list[Fraction]:
        """Coordinates of `a` over the monomial basis (bitmask order)."""
        n = 1 << self.t
        return [
            sum(self._power_to_mono[s][j] * a.coords[j] for j in range(n))
            for s in range(n)
        ]

    def embedding_sign_vector(self, j: int) -> tuple[int, ...]:
        """Signs (sigma_j(sqrt(d_i)))_i characterizing the j-th embedding."""
        if j not in self._sign_vectors:
            self._sign_vectors[j] = tuple(
                sign_at_embedding(self._sqrts[d], j) for d in self.generators
            )
        return self._sign_vectors[j]

    def galois_action(self, j: int, a) -> FieldElement:
        """The automorphism sending each sqrt(d_i) to its sign at embedding j.

        The field is Galois over the rationals, so every embedding is an
        automorphism; evaluating an element at embedding j equals evaluating
        galois_action(j, element) at the chosen embedding.
        """
        a = self.coerce(a)
        signs = self.embedding_sign_vector(j)
        mono = self.to_monomial(a)
        for s in range(len(mono)):
            flip = 1
            for i in range(self.t):
                if s & (1 << i) and signs[i] < 0:
                    flip = -flip
            if flip < 0:
                mono[s] = -mono[s]
        n = 1 << self.t
        coords = [
            sum(self._mono_to_power[k][s] * mono[s] for s in range(n))
            for k in range(n)
        ]
        return self.element(coords)

    def __repr__(self) -> str:
        gens = ", ".join(f"sqrt({d})" for d in self.generators)
        return f"MultiquadraticField(Q({gens}), degree {self.degree})"


def _first_dependence(rows: list[list[Fraction]], n: int) -> P.Poly:
    """Monic combination: first k with rows[k] in span(rows[:k]).

    Returns the ascending coefficients of x^k - sum c_j x^j.
    """
    # Incremental elimination with recorded combinations.
    pivots: list[tuple[int, list[Fraction], list[Fraction]]] = []
    for k, row in enumerate(rows):
        vec = list(row)
        comb = [Fraction(0)] * len(rows)
        comb[k] = Fraction(1)
        for col, pvec, pcomb in pivots:
            if vec[col]:
                factor = vec[col]
                vec = [a - factor * b for a, b in zip(vec, pvec)]
                comb = [a - factor * b for a, b in zip(comb, pcomb)]
        lead = next((i for i, v in enumerate(vec) if v), None)
        if lead is None:
            # rows[k] = sum_{j<k} (-comb[j]) rows[j]; monic minimal polynomial.
            coeffs = [comb[j] for j in range(k)] + [Fraction(1)]
            return P.poly(coeffs)
        inv = 1 / vec[lead]
        vec = [v * inv for v in vec]
        comb = [c * inv for c in comb]
        pivots.append((lead, vec, comb))
    raise AssertionError("no linear dependence found among n+1 vectors")


def _invert_fraction_matrix(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [v / pv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [v - f * w for v, w in zip(A[r], A[col])]
    return [row[n:] for row in A]


def multiquadratic_field(
    discs: Iterable[int],
) -> MultiquadraticField | ImaginaryCompositum:
    """Compositum Q(sqrt(d) for d in discs) with canonical generators.

    Returns a full :class:`MultiquadraticField` when the compositum is
    totally real (all canonical generators positive) and an
    :class:`ImaginaryCompositum` descriptor otherwise.
    """
    ds = list(discs)
    for d in ds:
        if not isinstance(d, int) or d in (0, 1):
            raise ValueError(f"discriminant {d!r} must be an integer != 0, 1")
        if not squarefree_int(d):
            raise ValueError(f"discriminant {d} is not squarefree")
    gens = _canonical_generators(ds)
    if any(d < 0 for d in gens):
        return ImaginaryCompositum(tuple(gens))
    return MultiquadraticField(gens)
