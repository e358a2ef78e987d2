"""r-circulant matrices: construction, exact dense operations, determinants.

An r-circulant of order n with generator (a_0, ..., a_{n-1}) has entries

    M[i][j] = a_{j-i}        for j >= i
    M[i][j] = r * a_{n+j-i}  for j < i

so each row is the previous one shifted right, with the wrapped entry
multiplied by r.  r = 1 is the ordinary circulant, r = -1 the skew
circulant, r = 0 an upper-triangular band.

Entries may be exact (int, Fraction) or inexact (float, complex, mpmath
scalars).  The exact routines (determinant, shift-identity check) refuse
inexact entries instead of quietly degrading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch
from .sequence import check_k, term, terms_upto

try:  # scalar helpers must recognise mpmath types without requiring them
    from mpmath import mpc as _mpc, mpf as _mpf
    _MP_TYPES = (_mpf, _mpc)
except ImportError:  # pragma: no cover
    _MP_TYPES = ()

EXACT_TYPES = (int, Fraction)


def is_exact(x) -> bool:
    return isinstance(x, EXACT_TYPES)


def conj(x):
    """Complex conjugate; identity on real scalar types."""
    if isinstance(x, (complex, *_MP_TYPES)):
        return x.conjugate()
    return x


def abs_sq(x):
    """|x|^2, exact for exact input (avoids the sqrt round-trip of abs)."""
    if is_exact(x):
        return x * x
    if isinstance(x, complex):
        return x.real * x.real + x.imag * x.imag
    if _MP_TYPES and isinstance(x, _MP_TYPES[1]):
        return x.real * x.real + x.imag * x.imag
    return x * x


@dataclass(frozen=True)
class CirculantSpec:
    """Order, wrap factor r, and generator entries of an r-circulant."""

    n: int
    r: object
    entries: tuple

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"order n must be an integer >= 1, got {self.n!r}")
        if len(self.entries) != self.n:
            raise DimensionMismatch(
                f"generator has {len(self.entries)} entries for order {self.n}"
            )


@dataclass(frozen=True)
class DenseMatrix:
    """Square matrix as a tuple of row tuples."""

    n: int
    rows: tuple

    def __post_init__(self):
        if len(self.rows) != self.n or any(len(row) != self.n for row in self.rows):
            raise DimensionMismatch("rows do not form an n-by-n matrix")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries_exact(self) -> bool:
        return all(is_exact(e) for row in self.rows for e in row)


def build(spec: CirculantSpec) -> DenseMatrix:
    """Materialise the dense r-circulant for a generator spec."""
    n, r, a = spec.n, spec.r, spec.entries
    rows = []
    for i in range(n):
        wrapped = tuple(r * e for e in a[n - i:])
        rows.append(wrapped + tuple(a[: n - i]))
    return DenseMatrix(n=n, rows=tuple(rows))


def build_pell(k: int, n: int, r) -> DenseMatrix:
    """Dense r-circulant generated by the first n sequence terms."""
    check_k(k)
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"matrix order n must be an integer >= 2, got {n!r}")
    return build(CirculantSpec(n=n, r=r, entries=tuple(terms_upto(k, n - 1))))


def matvec_dense(m: DenseMatrix, x) -> list:
    """Literal row-by-row matrix-vector product."""
    if len(x) != m.n:
        raise DimensionMismatch(f"vector length {len(x)} vs order {m.n}")
    return [sum(e * v for e, v in zip(row, x)) for row in m.rows]


def hadamard(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    if a.n != b.n:
        raise DimensionMismatch(f"orders differ: {a.n} vs {b.n}")
    rows = tuple(
        tuple(e * f for e, f in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows)
    )
    return DenseMatrix(n=a.n, rows=rows)


def conj_transpose(m: DenseMatrix) -> DenseMatrix:
    rows = tuple(
        tuple(conj(m.rows[j][i]) for j in range(m.n)) for i in range(m.n)
    )
    return DenseMatrix(n=m.n, rows=rows)


def frobenius_sq_direct(m: DenseMatrix):
    """Sum of squared entry magnitudes; exact when the entries are exact."""
    return sum(abs_sq(e) for row in m.rows for e in row)


def frobenius_direct(m: DenseMatrix) -> float:
    return math.sqrt(frobenius_sq_direct(m))


def l1_direct(m: DenseMatrix):
    """Sum of entry magnitudes; exact for exact real entries."""
    return sum(abs(e) for row in m.rows for e in row)


# ---------------------------------------------------------------------------
# exact determinant

def _bareiss_int(a: list[list[int]]) -> int:
    # Fraction-free elimination with row pivoting; every // division is exact.
    n = len(a)
    sign = 1
    prev = 1
    for col in range(n - 1):
        pivot_row = next((i for i in range(col, n) if a[i][col]), None)
        if pivot_row is None:
            return 0
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            sign = -sign
        pivot = a[col][col]
        for i in range(col + 1, n):
            for j in range(col + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][col] * a[col][j]) // prev
            a[i][col] = 0
        prev = pivot
    return sign * a[-1][-1]


def det_exact(m: DenseMatrix) -> Fraction:
    """Exact determinant by fraction-free elimination.

    Requires exact rational entries; denominators are cleared per row so the
    core loop runs on plain integers.
    """
    if not m.entries_exact():
        raise ValueError("det_exact requires int or Fraction entries")
    scale = Fraction(1)
    int_rows = []
    for row in m.rows:
        lcm = math.lcm(*(Fraction(e).denominator for e in row))
        scale *= lcm
        int_rows.append([int(e * lcm) for e in row])
    return Fraction(_bareiss_int(int_rows)) / scale


# ---------------------------------------------------------------------------
# polynomials over exact scalars

@dataclass(frozen=True)
class Polynomial:
    """Dense polynomial, coefficients ascending, trailing zeros stripped."""

    coeffs: tuple

    @staticmethod
    def of(coeffs) -> "Polynomial":
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return Polynomial(coeffs=tuple(coeffs))

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial.of(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, c in enumerate(self.coeffs):
            for j, d in enumerate(other.coeffs):
                out[i + j] += c * d
        return Polynomial.of(out)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def generator_poly(k: int, n: int) -> Polynomial:
    """Polynomial with the first n sequence terms as coefficients."""
    check_k(k)
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n!r}")
    return Polynomial.of(terms_upto(k, n - 1))


def psi_times_Psi(k: int, n: int) -> Polynomial:
    """Exact product of the reciprocal characteristic polynomial
    (1 - 2k x - k x^2 - x^3) with the generator polynomial of order n.

    The product telescopes: every interior coefficient cancels, leaving
    x - P(n) x^n - (k P(n-1) + P(n-2)) x^{n+1} - P(n-1) x^{n+2}.
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"telescoping product needs n >= 3, got {n!r}")
    psi = Polynomial.of((1, -2 * k, -k, -1))
    return psi * generator_poly(k, n)


def telescoped_form(k: int, n: int) -> Polynomial:
    """The four-term right-hand side that psi_times_Psi must equal."""
    coeffs = [0] * (n + 3)
    coeffs[1] = 1
    coeffs[n] = -term(k, n)
    coeffs[n + 1] = -(k * term(k, n - 1) + term(k, n - 2))
    coeffs[n + 2] = -term(k, n - 1)
    return Polynomial.of(coeffs)


# ---------------------------------------------------------------------------
# shift identity

def _as_int_matrix(m: DenseMatrix) -> tuple[list[list[int]], Fraction]:
    """Clear a common denominator; returns (int rows, scale) with m = rows/scale."""
    lcm = math.lcm(*(Fraction(e).denominator for row in m.rows for e in row))
    rows = [[int(e * lcm) for e in row] for row in m.rows]
    return rows, Fraction(lcm)


def _matmul_int(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def shift_identity_check(k: int, n: int, r) -> bool:
    """Verify that the companion-style circulant Circ_r(1, -2k, -k, -1, 0...)
    times the sequence circulant collapses to a three-term circulant:
    Circ_r(-r P(n), 1 - r k P(n-1) - r P(n-2), -r P(n-1), 0, ...).

    Exact computation; r must be an int or Fraction.
    """
    check_k(k)
    if not isinstance(n, int) or n < 4:
        raise ValueError(f"shift identity needs n >= 4, got {n!r}")
    if not is_exact(r):
        raise ValueError("shift_identity_check requires exact rational r")
    shift_gen = (1, -2 * k, -k, -1) + (0,) * (n - 4)
    lhs_a = build(CirculantSpec(n=n, r=r, entries=shift_gen))
    lhs_b = build_pell(k, n, r)
    pn, pn1, pn2 = term(k, n), term(k, n - 1), term(k, n - 2)
    rhs_gen = (-r * pn, 1 - r * k * pn1 - r * pn2, -r * pn1) + (0,) * (n - 3)
    rhs = build(CirculantSpec(n=n, r=r, entries=rhs_gen))

    a_rows, a_scale = _as_int_matrix(lhs_a)
    b_rows, b_scale = _as_int_matrix(lhs_b)
    r_rows, r_scale = _as_int_matrix(rhs)
    product = _matmul_int(a_rows, b_rows)
    # product / (a_scale b_scale) must equal rhs / r_scale
    lhs_mult = int(r_scale)
    rhs_mult = int(a_scale * b_scale)
    return all(
        lhs_mult * product[i][j] == rhs_mult * r_rows[i][j]
        for i in range(n)
        for j in range(n)
    )


def to_complex_list(m: DenseMatrix) -> list[list[complex]]:
    """Entries coerced to double-precision complex (plumbing for numerics)."""
    return [[complex(e) for e in row] for row in m.rows]
