"""Autocorrelation-method linear prediction.

Sign convention: A(z) = 1 + sum_i a[i] z^-i, so a sample is predicted as
s(n) = -sum_i a[i] s(n-i) + e(n).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import LagTooLarge, SingularAutocorrelation


@dataclass(frozen=True)
class LpcModel:
    order: int
    coefficients: np.ndarray  # a[1..order]; a[0] = 1 is implicit
    gain_sq: float
    reflection: np.ndarray | None = None

    @property
    def polynomial(self) -> np.ndarray:
        """[1, a1, ..., aN]: the inverse filter taps."""
        return np.concatenate(([1.0], self.coefficients))


def autocorrelate(frame, max_lag: int) -> np.ndarray:
    """Biased autocorrelation R(j) = sum_n x(n) x(n-j), j = 0..max_lag."""
    x = np.asarray(frame)
    n = x.shape[0]
    if max_lag < 0 or max_lag >= n:
        raise LagTooLarge(f"max_lag {max_lag} must be below frame length {n}")
    if np.issubdtype(x.dtype, np.integer):
        return np.array([int(np.dot(x[j:], x[: n - j])) for j in range(max_lag + 1)])
    x = x.astype(float)
    return np.correlate(x, x, mode="full")[n - 1 : n + max_lag]


def levinson_durbin(r, order: int) -> LpcModel:
    r = np.asarray(r, dtype=float)
    if order < 0 or order > r.shape[0] - 1:
        raise LagTooLarge(f"order {order} needs {order + 1} autocorrelation lags, got {r.shape[0]}")
    if not r[0] > 0:
        raise SingularAutocorrelation("R(0) must be positive")
    a = np.zeros(order)
    k = np.zeros(order)
    err = r[0]
    for i in range(order):
        acc = r[i + 1] + np.dot(a[:i], r[i:0:-1])
        ki = -acc / err
        if not abs(ki) < 1.0:
            raise SingularAutocorrelation(f"reflection coefficient {ki:.6g} at stage {i + 1}")
        a[:i] = a[:i] + ki * a[:i][::-1]
        a[i] = ki
        k[i] = ki
        err = err * (1.0 - ki * ki)
        if err <= 0:
            raise SingularAutocorrelation(f"prediction error vanished at stage {i + 1}")
    return LpcModel(order, a, float(err), k)


def inverse_filter(frame, model: LpcModel) -> np.ndarray:
    """e(n) = s(n) + sum_i a[i] s(n-i), zero initial state."""
    return lfilter(model.polynomial, [1.0], np.asarray(frame, dtype=float))


def pre_emphasis(x, coeff: float = 0.97) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if coeff == 0:
        return x.copy()
    return lfilter([1.0, -coeff], [1.0], x)


def fit_lpc(frame, order: int) -> LpcModel:
    return levinson_durbin(autocorrelate(frame, order), order)
