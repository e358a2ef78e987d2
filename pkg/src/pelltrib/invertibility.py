"""Invertibility of the sequence-generated r-circulants.

Three layers, strongest first:

* gcd_criterion: exact if-and-only-if test.  Circ_r(a) is invertible exactly
  when the generator polynomial is coprime to x^n - r (the eigenvalues are
  the generator polynomial's values on the n-th roots of r).
* sufficient_condition: the real-r sufficient theorem.  For r > 0 the
  guarantee excludes the reciprocal dominant root and the critical magnitude
  (P(n)/P(n-1))^(n/2); for r < 0 it excludes minus the critical magnitude.
  Values inside a 2^(-bits/2) relative band around an excluded point return
  an excluded verdict instead of a guarantee.  The band around the
  reciprocal root is widened to cover alpha^(-n) as well: that is where the
  eigenvalue grid actually collides with the reciprocal root, so refusing to
  certify there is the conservative reading.
* counterexample_scan: probes the uncertified critical values r* cell by
  cell at high precision, deciding singularity twice over (quadratic-root
  phase alignment vs. smallest eigenvalue magnitude) and reporting
  "undetermined" when the two routes disagree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf, mpc

from .circulant import is_exact
from .errors import PrecisionExhausted, ZeroR
from .sequence import char_roots, check_bits, check_k, term
from .spectral import eigen_grid, eigenvalues_direct, _r_to_mp

_GUARD = 32

GUARANTEED_INVERTIBLE = "guaranteed_invertible"
EXCLUDED_PARAMETER = "excluded_parameter"


@dataclass(frozen=True)
class InvertibilityVerdict:
    status: str
    reason: str
    witness: object = None


# ---------------------------------------------------------------------------
# exact coprimality criterion

def _strip(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    deg_b = len(b) - 1
    lead = b[-1]
    while len(a) - 1 >= deg_b:
        factor = a[-1] / lead
        shift = len(a) - 1 - deg_b
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a.pop()
        _strip(a)
        if not a:
            break
    return a


def gcd_criterion(entries, r) -> bool:
    """True iff Circ_r(entries) is invertible; exact rational arithmetic.

    Computes gcd(generator polynomial, x^n - r) by the Euclidean algorithm
    over the rationals; invertible exactly when the gcd is a constant.
    """
    if r == 0:
        raise ZeroR("gcd criterion needs r != 0")
    if not is_exact(r) or not all(is_exact(e) for e in entries):
        raise ValueError("gcd_criterion requires exact rational entries and r")
    n = len(entries)
    if n < 1:
        raise ValueError("generator must be nonempty")
    a = _strip([Fraction(e) for e in entries])
    b = _strip([Fraction(-r)] + [Fraction(0)] * (n - 1) + [Fraction(1)])
    while b:
        a, b = b, _poly_mod(a, b)
    # a now holds the gcd; zero generator gives gcd = x^n - r (degree n).
    return len(a) == 1


# ---------------------------------------------------------------------------
# sufficient condition for real r

def _critical_magnitude(k: int, n: int) -> mpf:
    # (P(n)/P(n-1))^(n/2), always a positive real
    ratio = mpf(term(k, n)) / term(k, n - 1)
    return ratio ** (mpf(n) / 2)


def _within_band(r_abs: mpf, value: mpf, tol: mpf) -> bool:
    return abs(r_abs - value) <= tol * max(abs(value), abs(r_abs))


def sufficient_condition(k: int, n: int, r, precision_bits: int = 256) -> InvertibilityVerdict:
    """Real-r sufficient invertibility theorem with conservative exclusion
    bands of relative width 2^(-precision_bits/2)."""
    check_k(k)
    check_bits(precision_bits)
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ValueError(f"matrix order n must be an integer >= 2, got {n!r}")
    if isinstance(r, complex) or (hasattr(r, "imag") and r.imag != 0):
        raise ValueError("sufficient_condition covers real r only")
    if r == 0:
        raise ZeroR("r must be nonzero")
    with mp.workprec(precision_bits + _GUARD):
        r_mp = mpmath.mpmathify(Fraction(r) if is_exact(r) else r)
        tol = mpf(2) ** (-precision_bits // 2)
        r_star = _critical_magnitude(k, n)
        alpha = char_roots(k, precision_bits).alpha
        if r_mp > 0:
            excluded = (
                (1 / alpha, "reciprocal dominant root 1/alpha"),
                (alpha ** (-n), "alpha^(-n), where the root grid meets 1/alpha"),
                (r_star, "critical magnitude (P(n)/P(n-1))^(n/2)"),
            )
            for value, label in excluded:
                if _within_band(r_mp, value, tol):
                    return InvertibilityVerdict(
                        status=EXCLUDED_PARAMETER,
                        reason=f"r within 2^-{precision_bits // 2} band of {label}",
                        witness=value,
                    )
            return InvertibilityVerdict(
                status=GUARANTEED_INVERTIBLE,
                reason="positive r away from all excluded values",
            )
        excluded_neg = ((-r_star, "minus the critical magnitude"),)
        for value, label in excluded_neg:
            if _within_band(r_mp, value, tol):
                return InvertibilityVerdict(
                    status=EXCLUDED_PARAMETER,
                    reason=f"r within 2^-{precision_bits // 2} band of {label}",
                    witness=value,
                )
        return InvertibilityVerdict(
            status=GUARANTEED_INVERTIBLE,
            reason="negative r away from the excluded value",
        )


def min_eigen_magnitude(k: int, n: int, r, precision_bits: int = 256) -> tuple[mpf, int]:
    """Smallest |lambda_m| and its index on the eigenvalue grid."""
    spectrum = eigenvalues_direct(k, n, r, precision_bits)
    with mp.workprec(precision_bits + _GUARD):
        mags = [abs(lam) for lam in spectrum.lambdas]
    idx = min(range(len(mags)), key=mags.__getitem__)
    return mags[idx], idx


# ---------------------------------------------------------------------------
# critical-value scan

@dataclass(frozen=True)
class ScanCell:
    k: int
    n: int
    sign: int
    r_star_log10: float
    min_abs_lambda_log10: float
    closed_residual_log10: float
    closed_singular: bool | None
    eigen_singular: bool | None
    verdict: str


def _scan_cell(k: int, n: int, sign: int, precision_bits: int) -> ScanCell:
    pn, pn1, pn2 = term(k, n), term(k, n - 1), term(k, n - 2)
    with mp.workprec(precision_bits + _GUARD):
        tol = mpf(2) ** (-precision_bits // 2)
        r_star = sign * _critical_magnitude(k, n)
        # quadratic whose roots r1, r2 are the only grid points that can
        # zero an eigenvalue: x^2 - Sx + Q
        s = (1 - r_star * (k * pn1 + pn2)) / (r_star * pn1)
        q = mpf(pn) / pn1
        disc = mpmath.sqrt(mpc(s * s - 4 * q))
        r1 = (s + disc) / 2
        r2 = (s - disc) / 2
        closed_res = min(abs(r1**n - r_star), abs(r2**n - r_star)) / abs(r_star)
        closed_singular = bool(closed_res <= tol)
        mags = []
        for lam in eigenvalues_direct(k, n, r_star, precision_bits).lambdas:
            mags.append(abs(lam))
        min_mag, max_mag = min(mags), max(mags)
        eigen_singular = bool(min_mag <= tol * max(mpf(1), max_mag))
        if closed_singular == eigen_singular:
            verdict = "singular" if closed_singular else "invertible"
        else:
            verdict = "undetermined"
        return ScanCell(
            k=k, n=n, sign=sign,
            r_star_log10=float(mpmath.log10(abs(r_star))),
            min_abs_lambda_log10=float(mpmath.log10(min_mag)) if min_mag > 0 else float("-inf"),
            closed_residual_log10=float(mpmath.log10(closed_res)) if closed_res > 0 else float("-inf"),
            closed_singular=closed_singular,
            eigen_singular=eigen_singular,
            verdict=verdict,
        )


def counterexample_scan(k_values, n_values, sign: int = 1,
                        precision_bits: int = 512) -> list[ScanCell]:
    """Probe the uncertified critical value r* = sign * (P(n)/P(n-1))^(n/2)
    for every (k, n) cell.  Numeric failure in a cell is reported as an
    "undetermined" row, never raised."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    check_bits(precision_bits)
    cells = []
    for k in k_values:
        check_k(k)
        for n in n_values:
            if not isinstance(n, int) or n < 2:
                raise ValueError(f"scan needs integer n >= 2, got {n!r}")
            try:
                cells.append(_scan_cell(k, n, sign, precision_bits))
            except (PrecisionExhausted, ArithmeticError):
                cells.append(ScanCell(
                    k=k, n=n, sign=sign,
                    r_star_log10=float("nan"),
                    min_abs_lambda_log10=float("nan"),
                    closed_residual_log10=float("nan"),
                    closed_singular=None, eigen_singular=None,
                    verdict="undetermined",
                ))
    return cells
