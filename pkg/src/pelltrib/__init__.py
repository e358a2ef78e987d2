"""Exact and high-precision analysis of r-circulant matrices whose entries
come from k-Pell-Tribonacci sequences: closed-form sums and norms, spectra,
determinants, invertibility certificates, and an FFT-backed fast matvec."""

__version__ = "0.1.0"
