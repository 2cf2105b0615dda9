"""Formant frequencies and bandwidths from the roots of the LPC inverse filter."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .audio import AudioSignal, frame_signal
from .errors import EmptySignal, RootFindingDivergence, SingularAutocorrelation
from .lpc import LpcModel, fit_lpc, pre_emphasis

log = logging.getLogger(__name__)

MIN_RADIUS = 0.7
GUARD_HZ = 50.0
ROOT_TOL = 1e-8
MAX_POLISH_ITER = 200


@dataclass(frozen=True)
class FormantSet:
    """Formants of one frame, ascending by frequency."""

    frequencies: np.ndarray
    bandwidths: np.ndarray
    radii: np.ndarray

    def __len__(self):
        return self.frequencies.shape[0]

    @classmethod
    def empty(cls) -> "FormantSet":
        return cls(np.zeros(0), np.zeros(0), np.zeros(0))


def pole_frequency(pole: complex, sample_rate_hz: float) -> float:
    return sample_rate_hz / (2 * math.pi) * math.atan2(pole.imag, pole.real)


def pole_bandwidth(radius: float, sample_rate_hz: float) -> float:
    return -sample_rate_hz / math.pi * math.log(radius)


def _polish(coeffs: np.ndarray, root: complex) -> complex:
    deriv = np.polyder(coeffs)
    z = root
    for _ in range(MAX_POLISH_ITER):
        val = np.polyval(coeffs, z)
        if abs(val) < ROOT_TOL:
            return z
        slope = np.polyval(deriv, z)
        if slope == 0:
            break
        z = z - val / slope
    if abs(np.polyval(coeffs, z)) < ROOT_TOL:
        return z
    raise RootFindingDivergence(f"root near {root:.6g} did not reach residual {ROOT_TOL}")


def polynomial_roots(model: LpcModel) -> np.ndarray:
    """z-plane poles of 1/A(z): companion-matrix eigenvalues, Newton-polished where needed.

    Trailing zero coefficients lower the degree, so A(z) = 1 has no roots.
    """
    coeffs = np.trim_zeros(model.polynomial, "b")
    if coeffs.shape[0] <= 1:
        return np.zeros(0, dtype=complex)
    roots = np.roots(coeffs).astype(complex)
    residual = np.abs(np.polyval(coeffs, roots))
    for i in np.flatnonzero(residual >= ROOT_TOL):
        roots[i] = _polish(coeffs, roots[i])
    return roots


def poles_to_formants(poles, sample_rate_hz: float, min_radius: float = MIN_RADIUS,
                      guard_hz: float = GUARD_HZ) -> FormantSet:
    poles = np.asarray(poles, dtype=complex)
    # one entry per conjugate pair; real poles carry no resonance
    upper = poles[poles.imag > 1e-12]
    radii = np.abs(upper)
    keep = (radii >= min_radius) & (radii < 1.0)
    upper, radii = upper[keep], radii[keep]
    freqs = np.array([pole_frequency(p, sample_rate_hz) for p in upper])
    bws = -sample_rate_hz / math.pi * np.log(radii)
    if freqs.size == 0:
        return FormantSet.empty()
    band = (freqs > guard_hz) & (freqs < sample_rate_hz / 2 - guard_hz)
    freqs, bws, radii = freqs[band], bws[band], radii[band]
    order = np.argsort(freqs, kind="stable")
    return FormantSet(freqs[order], bws[order], radii[order])


def formants_per_frame(signal: AudioSignal, frame_ms: float = 30.0, hop_ms: float = 15.0,
                       lpc_order: int = 12, emphasis: float = 0.0,
                       min_radius: float = MIN_RADIUS) -> list[FormantSet]:
    """Pre-emphasis, Hamming framing, LPC fit and root solving for every frame.

    Degenerate frames (digital silence, numerically singular autocorrelation,
    non-converging roots) yield an empty set instead of failing the utterance.
    """
    if len(signal) == 0:
        raise EmptySignal("no samples")
    emphasized = AudioSignal(pre_emphasis(signal.samples, emphasis), signal.sample_rate_hz)
    frames = frame_signal(emphasized, frame_ms, hop_ms, "hamming")
    out = []
    for frame in frames.frames:
        try:
            model = fit_lpc(frame, lpc_order)
            poles = polynomial_roots(model)
        except (SingularAutocorrelation, RootFindingDivergence) as exc:
            log.debug("empty formant frame: %s", exc)
            out.append(FormantSet.empty())
            continue
        out.append(poles_to_formants(poles, signal.sample_rate_hz, min_radius))
    return out


def median_formants(track: list[FormantSet], n_formants: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Median frequency and bandwidth of F1..Fn over frames holding at least n formants.

    Returns empty arrays when no frame qualifies.
    """
    voiced = [fs for fs in track if len(fs) >= n_formants]
    if not voiced:
        return np.zeros(0), np.zeros(0)
    freqs = np.array([fs.frequencies[:n_formants] for fs in voiced])
    bws = np.array([fs.bandwidths[:n_formants] for fs in voiced])
    return np.median(freqs, axis=0), np.median(bws, axis=0)
