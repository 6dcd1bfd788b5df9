"""Fourier differentiation on uniform periodic grids.

All routines work with real samples ``v_k = v(k L / N)``, ``k = 0..N-1``, and
use the real FFT. The Nyquist mode is dropped from odd derivatives so that
derivatives of real data stay real.
"""

from __future__ import annotations

import numpy as np


def grid(length: float, n: int) -> np.ndarray:
    """Return the nodes ``s_k = k L / N``."""
    return np.arange(n) * (length / n)


def wavenumbers(length: float, n: int) -> np.ndarray:
    """Angular wavenumbers of the real FFT of N samples on a period L."""
    return 2.0 * np.pi * np.fft.rfftfreq(n, d=length / n)


def derivative_multiplier(length: float, n: int, order: int) -> np.ndarray:
    """Fourier multiplier ``(i k)^order`` with the Nyquist mode zeroed for odd orders."""
    multiplier = (1j * wavenumbers(length, n)) ** order
    if order % 2 == 1 and n % 2 == 0:
        multiplier[-1] = 0.0
    return multiplier


def dealias_mask(n: int) -> np.ndarray:
    """Two-thirds rule: keep the modes with index below N/3."""
    index = np.arange(n // 2 + 1)
    return index < n / 3.0


def derivative(values: np.ndarray, length: float, order: int = 1) -> np.ndarray:
    """Spectral derivative of periodic samples.

    Examples:
        >>> s = grid(2 * np.pi, 32)
        >>> bool(np.allclose(derivative(np.sin(s), 2 * np.pi), np.cos(s)))
        True

    """
    values = np.asarray(values, dtype=float)
    if order == 0:
        return values.copy()
    n = values.shape[-1]
    return np.fft.irfft(derivative_multiplier(length, n, order) * np.fft.rfft(values), n=n)


def jet_from_spectrum(spectrum: np.ndarray, length: float, n: int, order: int) -> list[np.ndarray]:
    """Return ``[v, v', ..., v^(order)]`` from the real FFT of the samples."""
    return [np.fft.irfft(derivative_multiplier(length, n, j) * spectrum, n=n) for j in range(order + 1)]


def jet(values: np.ndarray, length: float, order: int) -> list[np.ndarray]:
    """Return the jet ``[v, v', ..., v^(order)]`` of periodic samples."""
    values = np.asarray(values, dtype=float)
    jets = jet_from_spectrum(np.fft.rfft(values), length, values.shape[-1], order)
    jets[0] = values.copy()
    return jets


def shift(values: np.ndarray, length: float, offset: float) -> np.ndarray:
    """Evaluate the trigonometric interpolant of the samples at ``s_k + offset``."""
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    phase = np.exp(1j * wavenumbers(length, n) * offset)
    if n % 2 == 0:
        phase[-1] = np.cos(np.pi * n * offset / length)
    return np.fft.irfft(phase * np.fft.rfft(values), n=n)
