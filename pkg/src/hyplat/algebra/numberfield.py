"""Number fields presented by a monic integer defining polynomial.

A field K = Q[x]/(f) is represented by f (monic, integral, irreducible,
ascending coefficients) together with Sturm isolating intervals for its real
roots and a *chosen* real embedding used wherever a single archimedean place
is needed (signatures, positivity, hyperboloid membership).  Elements are
coordinate vectors over the power basis 1, t, ..., t^(d-1) with Fraction
entries; all arithmetic is exact.

The rationals are the degree-1 field Q[x]/(x); `QQ` below is the shared
instance.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from hyplat.algebra import polynomials as P
from hyplat.errors import DivisionByZero, FieldMismatch

__all__ = [
    "NumberField",
    "FieldElement",
    "QQ",
    "sign_at_embedding",
    "approx_at_embedding",
    "is_algebraic_integer",
    "is_square",
    "rational_square_root",
]


class NumberField:
    """Q[x]/(f) with a distinguished real embedding.

    Parameters
    ----------
    coefficients:
        Ascending integer coefficients of the monic defining polynomial.
    embedding:
        Index into the ascending list of real roots; defaults to the largest
        real root.  (Multiquadratic composita built elsewhere use the
        all-positive embedding, which is the largest root.)
    """

    def __init__(
        self,
        coefficients: Sequence[int | Fraction],
        embedding: int | None = None,
        _trusted: bool = False,
    ):
        f = P.poly(coefficients)
        if P.degree(f) < 1:
            raise ValueError("defining polynomial must have degree >= 1")
        if any(c.denominator != 1 for c in f):
            raise ValueError("defining polynomial must have integer coefficients")
        if f[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        if not _trusted:
            _check_irreducible(f)
        self.poly: P.Poly = f
        self.degree: int = P.degree(f)
        self.real_roots: list[tuple[Fraction, Fraction]] = P.isolate_real_roots(f)
        if not self.real_roots:
            raise ValueError(
                "defining polynomial has no real root; totally imaginary fields "
                "are handled as composita bookkeeping only"
            )
        if embedding is None:
            embedding = len(self.real_roots) - 1
        if not -len(self.real_roots) <= embedding < len(self.real_roots):
            raise ValueError(
                f"embedding index {embedding} out of range for "
                f"{len(self.real_roots)} real roots"
            )
        self.chosen_embedding: int = embedding % len(self.real_roots)
        # Mutable cache of progressively refined isolating intervals.
        self._intervals: list[tuple[Fraction, Fraction]] = list(self.real_roots)

    # -- identity ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, NumberField)
            and self.poly == other.poly
            and self.chosen_embedding == other.chosen_embedding
        )

    def __hash__(self) -> int:
        return hash((self.poly, self.chosen_embedding))

    def __repr__(self) -> str:
        return f"NumberField({_poly_str(self.poly)}, embedding={self.chosen_embedding})"

    # -- basic data --------------------------------------------------------

    @property
    def is_rationals(self) -> bool:
        return self.degree == 1

    @property
    def n_real_embeddings(self) -> int:
        return len(self.real_roots)

    @property
    def is_totally_real(self) -> bool:
        return len(self.real_roots) == self.degree

    # -- element constructors ----------------------------------------------

    def element(self, coords: Iterable[Fraction | int]) -> "FieldElement":
        c = [Fraction(v) for v in coords]
        if len(c) > self.degree:
            raise ValueError(f"too many coordinates for degree {self.degree}")
        c += [Fraction(0)] * (self.degree - len(c))
        return FieldElement(self, tuple(c))

    def from_fraction(self, q: Fraction | int) -> "FieldElement":
        return self.element([Fraction(q)])

    @property
    def zero(self) -> "FieldElement":
        return self.from_fraction(0)

    @property
    def one(self) -> "FieldElement":
        return self.from_fraction(1)

    @property
    def gen(self) -> "FieldElement":
        """The class of x (a root of the defining polynomial)."""
        if self.degree == 1:
            return self.from_fraction(-self.poly[0])
        return self.element([0, 1])

    def coerce(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field == self:
                return value
            if value.is_rational:
                return self.from_fraction(value.to_fraction())
            raise FieldMismatch(f"cannot coerce element of {value.field} into {self}")
        if isinstance(value, (int, Fraction)):
            return self.from_fraction(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into a field element")

    # -- embeddings ---------------------------------------------------------

    def _interval(self, j: int) -> tuple[Fraction, Fraction]:
        return self._intervals[j]

    def _refine(self, j: int) -> tuple[Fraction, Fraction]:
        lo, hi = self._intervals[j]
        if lo != hi:
            width = (hi - lo) / 16
            lo, hi = P.refine_interval(self.poly, lo, hi, width)
            self._intervals[j] = (lo, hi)
        return lo, hi

    def root_approx(self, j: int | None = None, digits: int = 15) -> Fraction:
        """Rational approximation of the j-th real root, |err| <= 10^-digits."""
        if j is None:
            j = self.chosen_embedding
        tol = Fraction(1, 10**digits)
        lo, hi = self._intervals[j]
        while hi - lo > tol:
            lo, hi = self._refine(j)
        return (lo + hi) / 2


class FieldElement:
    """An element of a NumberField in power-basis coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple[Fraction, ...]):
        self.field = field
        self.coords = coords

    # -- plumbing ------------------------------------------------------------

    def _pair(self, other) -> tuple["FieldElement", "FieldElement"]:
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return self, other
            if other.is_rational:
                return self, self.field.from_fraction(other.to_fraction())
            if self.is_rational:
                return other.field.from_fraction(self.to_fraction()), other
            raise FieldMismatch(
                f"elements of {self.field} and {other.field} cannot be combined"
            )
        if isinstance(other, (int, Fraction)):
            return self, self.field.from_fraction(other)
        return self, NotImplemented  # type: ignore[return-value]

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def __bool__(self) -> bool:
        return any(self.coords)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.coords[0] == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field == self.field:
            return self.coords == other.coords
        if self.is_rational and other.is_rational:
            return self.coords[0] == other.coords[0]
        return False

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.coords[0])
        return hash((self.field, self.coords))

    def __repr__(self) -> str:
        return _poly_str(P.poly(self.coords))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(a.field, tuple(x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-x for x in self.coords))

    def __sub__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        return FieldElement(a.field, tuple(x - y for x, y in zip(a.coords, b.coords)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        prod = P.poly_mod(P.poly_mul(P.poly(a.coords), P.poly(b.coords)), a.field.poly)
        return a.field.element(prod)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise DivisionByZero("inverse of zero")
        # Extended Euclid: u*g + v*f = 1 with g this element's representative.
        g = P.poly(self.coords)
        f = self.field.poly
        r0, r1 = f, g
        s0, s1 = P.poly([]), P.poly([1])
        while P.degree(r1) > 0:
            q, r = P.poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, P.poly_sub(s0, P.poly_mul(q, s1))
        # r1 is a nonzero constant (f irreducible, g nonzero of lower degree).
        c = r1[0]
        return self.field.element(P.poly_scale(s1, 1 / c))

    def __truediv__(self, other):
        a, b = self._pair(other)
        if b is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


# ---------------------------------------------------------------------------
# Embedding evaluation
# ---------------------------------------------------------------------------


def sign_at_embedding(a: FieldElement, j: int | None = None) -> int:
    """Sign (+1, -1 or 0) of the image of `a` under the j-th real embedding.

    Certified by interval arithmetic over the isolating interval of the root:
    the interval is refined until the interval image of a's representative
    polynomial excludes zero, which terminates because a nonzero element
    cannot vanish at a root of the irreducible defining polynomial.
    """
    K = a.field
    if j is None:
        j = K.chosen_embedding
    if not a:
        return 0
    g = P.poly(a.coords)
    lo, hi = K._interval(j)
    if lo == hi:
        v = P.poly_eval(g, lo)
        return 0 if v == 0 else (1 if v > 0 else -1)
    while True:
        mlo, mhi = P.interval_eval(g, lo, hi)
        if mlo > 0:
            return 1
        if mhi < 0:
            return -1
        lo, hi = K._refine(j)


def approx_at_embedding(
    a: FieldElement, j: int | None = None, digits: int = 15
) -> Fraction:
    """Rational approximation of the embedded value, |err| <= 10^-digits."""
    K = a.field
    if j is None:
        j = K.chosen_embedding
    g = P.poly(a.coords)
    if not g:
        return Fraction(0)
    tol = Fraction(1, 10**digits)
    lo, hi = K._interval(j)
    if lo == hi:
        return P.poly_eval(g, lo)
    while True:
        mlo, mhi = P.interval_eval(g, lo, hi)
        if mhi - mlo <= 2 * tol:
            return (mlo + mhi) / 2
        lo, hi = K._refine(j)


# ---------------------------------------------------------------------------
# Integrality
# ---------------------------------------------------------------------------


def multiplication_matrix(a: FieldElement) -> list[list[Fraction]]:
    """Matrix of y -> a*y over the power basis (columns = images of t^i)."""
    K = a.field
    d = K.degree
    cols = []
    for i in range(d):
        basis_vec = K.element([0] * i + [1])
        cols.append((a * basis_vec).coords)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def is_algebraic_integer(a: FieldElement) -> bool:
    """True iff `a` is integral over Z.

    The characteristic polynomial of the multiplication-by-a matrix is a
    power of a's minimal polynomial; it has integer coefficients exactly when
    the minimal polynomial does.
    """
    cp = P.charpoly_rational(multiplication_matrix(a))
    return all(c.denominator == 1 for c in cp)


def element_charpoly(a: FieldElement) -> P.Poly:
    """Characteristic polynomial of multiplication by `a` (monic, ascending)."""
    return P.charpoly_rational(multiplication_matrix(a))


# ---------------------------------------------------------------------------
# Square testing
# ---------------------------------------------------------------------------


def rational_square_root(q: Fraction | int) -> Fraction | None:
    """Exact nonnegative square root of a rational, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    if q == 0:
        return Fraction(0)
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def _cf_rationalize(x: Fraction, max_den: int) -> Fraction:
    """Best continued-fraction approximation with denominator <= max_den."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    num, den = x.numerator, x.denominator
    while den:
        a = num // den
        num, den = den, num - a * den
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > max_den:
            return Fraction(p0, q0)
    return Fraction(p1, q1)


def _sqrt_approx(q: Fraction, bits: int) -> Fraction:
    """Rational approximation of sqrt(q) for q >= 0, error < 2^-bits."""
    if q == 0:
        return Fraction(0)
    shift = 2 * bits + (q.denominator.bit_length() + q.numerator.bit_length())
    scaled = (q.numerator << (2 * shift)) // q.denominator
    return Fraction(isqrt(scaled), 1 << shift)


def _solve_fraction(A: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a small invertible rational linear system by elimination."""
    n = len(A)
    M = [row[:] + [rhs[i]] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[pivot] = M[pivot], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                factor = M[r][col]
                M[r] = [v - factor * w for v, w in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def is_square(a: FieldElement, height_bound: int = 10**6) -> FieldElement | None:
    """An exact square root of `a` in its field, or None if none exists.

    Strategy: necessary sign checks at every real embedding, then numeric
    square roots per embedding, every sign pattern (global sign fixed), a
    linear solve back to power-basis coordinates, continued-fraction
    rationalization bounded by `height_bound`, and exact verification by
    squaring.  Verification makes false positives impossible; the precision /
    height ladder below makes the search complete for totally real fields at
    this package's scales.  For a field with complex embeddings the search
    can miss a genuine square root (it then returns None); no such field is
    constructed by this package.

    The returned root is normalized to be nonnegative at the largest real
    embedding.
    """
    K = a.field
    if not a:
        return K.zero
    if K.degree == 1:
        r = rational_square_root(a.to_fraction())
        return None if r is None else K.from_fraction(r)
    signs = [sign_at_embedding(a, j) for j in range(K.n_real_embeddings)]
    if any(s < 0 for s in signs):
        return None
    if a.is_rational:
        r = rational_square_root(a.to_fraction())
        if r is not None:
            return K.from_fraction(r)
        # A rational non-square may still be a square in K; fall through.
    if not K.is_totally_real:
        return None
    d = K.degree
    last = K.n_real_embeddings - 1
    for bits, height in ((96, height_bound), (192, height_bound**2), (384, height_bound**4)):
        digits = bits // 4
        roots = [K.root_approx(j, digits) for j in range(d)]
        values = [approx_at_embedding(a, j, digits) for j in range(d)]
        mags = [_sqrt_approx(max(v, Fraction(0)), bits) for v in values]
        V = [[roots[j] ** k for k in range(d)] for j in range(d)]
        for mask in range(1 << (d - 1)):
            rhs = [mags[0]] + [
                mags[j] if (mask >> (j - 1)) & 1 == 0 else -mags[j]
                for j in range(1, d)
            ]
            coords = _solve_fraction([row[:] for row in V], rhs)
            cand = K.element([_cf_rationalize(c, height) for c in coords])
            if cand * cand == a:
                if sign_at_embedding(cand, last) < 0:
                    cand = -cand
                return cand
    return None


# ---------------------------------------------------------------------------
# Irreducibility validation
# ---------------------------------------------------------------------------


def _check_irreducible(f: P.Poly) -> None:
    d = P.degree(f)
    if d == 1:
        return
    if not P.is_squarefree(f):
        raise ValueError("defining polynomial must be squarefree")
    roots = P.rational_roots(f)
    if roots:
        raise ValueError(f"defining polynomial has rational root {roots[0]}")
    if d <= 3:
        return  # no rational root => irreducible for degrees 2 and 3
    # Exact factorization is mature library territory; import lazily so the
    # common internally-constructed fields never touch it.
    import sympy

    x = sympy.Symbol("x")
    expr = sum(int(c) * x**i for i, c in enumerate(f))
    if not sympy.Poly(expr, x).is_irreducible:
        raise ValueError("defining polynomial is reducible")


def _poly_str(f: P.Poly, var: str = "t") -> str:
    if not f:
        return "0"
    parts = []
    for i, c in enumerate(f):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            term = f"{mag}{var}" + (f"^{i}" if i > 1 else "")
            if c < 0:
                term = "-" + term
            parts.append(term)
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


QQ = NumberField([0, 1])
"""The rational field, modeled as Q[x]/(x)."""
