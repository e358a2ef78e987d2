"""Fast application of r-circulant matrices by scaled-DFT diagonalization.

An r-circulant with generator row (a_0 .. a_{n-1}) factors as
D F L F^-1 D^-1 where D = diag(rho^j) for the principal n-th root
rho of r, F is the positive-exponent DFT matrix F[j, m] = w^{jm},
and L holds the eigenvalues lambda_m = sum_j a_j (rho w^m)^j.  A
matrix-vector product therefore costs a diagonal scale, two FFTs and
a pointwise multiply: O(n log n) in double precision.

The scaling diag(rho^j) spans a dynamic range of |r| across the rows,
so accuracy claims are restricted to |r| within [1/4, 4].  High
precision eigenvalue work lives in the spectral module; this one
trades digits for speed.
"""

from __future__ import annotations

import cmath
import time
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroR
from .sequence import check_k, term

# forward transform exponent sign; +1 matches rho_m = r^(1/n) e^(2*pi*i*m/n)
FORWARD_SIGN = 1.0


def dft_naive(x) -> np.ndarray:
    """Literal O(n^2) forward DFT, kept as the permanent oracle."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.size
    j = np.arange(n, dtype=np.int64)
    # reduce j*m mod n in exact integers so exp never sees a large phase
    phases = np.outer(j, j) % n
    matrix = np.exp(FORWARD_SIGN * 2j * np.pi / n * phases)
    return matrix @ x


def _bit_reverse_indices(n: int) -> np.ndarray:
    levels = n.bit_length() - 1
    idx = np.arange(n, dtype=np.intp)
    rev = np.zeros_like(idx)
    for b in range(levels):
        rev = (rev << 1) | ((idx >> b) & 1)
    return rev


def _fft_pow2(x: np.ndarray) -> np.ndarray:
    n = x.size
    a = x[_bit_reverse_indices(n)].astype(np.complex128)
    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(FORWARD_SIGN * 2j * np.pi * np.arange(half) / size)
        blocks = a.reshape(-1, size)
        even = blocks[:, :half].copy()
        odd = blocks[:, half:] * twiddle
        blocks[:, :half] = even + odd
        blocks[:, half:] = even - odd
        size *= 2
    return a


def _chirp(n: int) -> np.ndarray:
    # w^(j^2/2) with the square reduced mod 2n in exact integers first,
    # so the phase argument never loses digits for large j
    j = np.arange(n, dtype=object)
    reduced = np.array([(v * v) % (2 * n) for v in j], dtype=np.float64)
    return np.exp(FORWARD_SIGN * 1j * np.pi * reduced / n)


def _bluestein(x: np.ndarray) -> np.ndarray:
    n = x.size
    chirp = _chirp(n)
    length = 1 << (2 * n - 1).bit_length()
    a = np.zeros(length, dtype=np.complex128)
    a[:n] = x * chirp
    b = np.zeros(length, dtype=np.complex128)
    b[:n] = np.conj(chirp)
    b[length - n + 1:] = np.conj(chirp[1:][::-1])
    conv = _fft_pow2(np.conj(_fft_pow2(a) * _fft_pow2(b)))
    conv = np.conj(conv) / length
    return chirp * conv[:n]


def fft(x) -> np.ndarray:
    """Forward DFT with the project-wide positive-exponent convention.

    Radix-2 for powers of two, Bluestein chirp-z for everything else.
    """
    x = np.asarray(x, dtype=np.complex128)
    n = x.size
    if n == 0:
        raise DimensionMismatch("empty input")
    if n & (n - 1) == 0:
        return _fft_pow2(x)
    return _bluestein(x)


def ifft(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    return np.conj(fft(np.conj(x))) / x.size


@dataclass(frozen=True)
class FastCirculantOperator:
    """Immutable double-precision spectral form of an r-circulant."""

    n: int
    r: complex
    scaled_spectrum: np.ndarray
    rho_scale: np.ndarray
    precision: str = "float64"


def fast_operator(entries, r) -> FastCirculantOperator:
    a = np.asarray([complex(e) for e in entries], dtype=np.complex128)
    n = a.size
    if n == 0:
        raise DimensionMismatch("generator row must be nonempty")
    rc = complex(r)
    if rc == 0:
        raise ZeroR("r = 0 breaks the diagonal scaling")
    if rc.imag == 0 and rc.real > 0:
        rho = complex(rc.real ** (1.0 / n))
    else:
        rho = cmath.exp(cmath.log(rc) / n)
    rho_scale = rho ** np.arange(n)
    spectrum = fft(a * rho_scale)
    return FastCirculantOperator(n=n, r=rc, scaled_spectrum=spectrum, rho_scale=rho_scale)


def fast_matvec(op: FastCirculantOperator, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (op.n,):
        raise DimensionMismatch(f"expected a vector of length {op.n}, got shape {x.shape}")
    w = ifft(x / op.rho_scale)
    return fft(w * op.scaled_spectrum) * op.rho_scale


def _dense_matvec(entries: np.ndarray, r: complex, x: np.ndarray) -> np.ndarray:
    # row i of the matrix is (r*a[n-i:], a[:n-i]); each row is sliced out
    # of one doubled buffer so the dense path stays O(n) in memory
    n = entries.size
    doubled = np.concatenate([r * entries, entries])
    y = np.empty(n, dtype=np.complex128)
    for i in range(n):
        y[i] = doubled[n - i:2 * n - i] @ x
    return y


@dataclass(frozen=True)
class BenchRow:
    n: int
    path: str
    mean_ns: float
    rel_err: float

    def csv(self) -> str:
        return f"{self.n},{self.path},{self.mean_ns:.1f},{self.rel_err:.3e}"


def _mean_ns(fn, reps: int) -> float:
    start = time.perf_counter_ns()
    for _ in range(reps):
        fn()
    return (time.perf_counter_ns() - start) / reps


def bench_generator(k: int, n: int) -> np.ndarray:
    """Deterministic generator row tied to k but bounded for doubles.

    The raw sequence outgrows float64 well before desk-scale n, so the
    row repeats the prefix of terms that stay below 2^40.
    """
    check_k(k)
    m = 0
    while term(k, m + 1) < 2 ** 40:
        m += 1
    return np.asarray([float(term(k, j % m)) for j in range(n)], dtype=np.complex128)


def bench_matvec(n_list, k: int, r, reps_fast: int = 30, reps_dense: int = 5) -> list[BenchRow]:
    """Wall-time fast vs dense application on deterministic inputs."""
    rng = np.random.default_rng(20240815)
    rows = []
    for n in n_list:
        entries = bench_generator(k, n)
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        op = fast_operator(entries, r)
        y_fast = fast_matvec(op, x)
        y_dense = _dense_matvec(entries, complex(r), x)
        scale = float(np.linalg.norm(y_dense))
        rel = float(np.linalg.norm(y_fast - y_dense)) / scale if scale else 0.0
        fast_ns = _mean_ns(lambda: fast_matvec(op, x), reps_fast)
        dense_ns = _mean_ns(lambda: _dense_matvec(entries, complex(r), x), reps_dense)
        rows.append(BenchRow(n=n, path="fast", mean_ns=fast_ns, rel_err=rel))
        rows.append(BenchRow(n=n, path="dense", mean_ns=dense_ns, rel_err=0.0))
    return rows


CSV_HEADER = "n,path,mean_ns,rel_err"
