"""Line detection in sampled population series."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from ..model import SystemParams, dressed_coefficients
from ..propagator import paper_frequencies, spectral_decomposition

MIN_SAMPLES = 1024
MIN_PERIODS = 10
NOISE_FLOOR = 1e-6


class UnderResolvedError(ValueError):
    pass


@dataclass
class PeakReport:
    """Angular frequencies (rad per unit time) of detected and expected lines.

    ``peaks`` lists the strong lines only; ``matched`` may point at weaker
    local maxima.
    """

    peaks: np.ndarray
    magnitudes: np.ndarray
    expected: np.ndarray
    bin_width: float
    matched: dict = field(default_factory=dict)  # expected -> detected
    missing: list = field(default_factory=list)
    unexplained: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.missing and not self.unexplained


def _distinct(freqs, tol):
    out = []
    for f in sorted(abs(float(x)) for x in freqs):
        if f > tol and all(abs(f - g) > tol for g in out):
            out.append(f)
    return np.array(out)


def spectral_peaks(series, dt: float, expected, rel_height: float = 0.05, require_all: bool = True) -> PeakReport:
    """Locate discrete-Fourier lines of ``series`` and match them to ``expected``.

    The mean is removed and a Hann window applied.  A detected line matches an
    expected angular frequency when they are within one bin.  With
    ``require_all=False`` expected lines without a peak are not reported as
    missing (useful when the candidate set is a superset, e.g. all pairwise
    eigenvalue gaps).
    """
    x = np.asarray(series, dtype=float)
    if x.size < MIN_SAMPLES:
        raise UnderResolvedError(f"need at least {MIN_SAMPLES} samples, got {x.size}")
    duration = dt * x.size
    bin_width = 2 * math.pi / duration
    expected = _distinct(expected, bin_width / 2)
    if expected.size == 0:
        raise ValueError("no non-zero expected frequency")
    if duration < MIN_PERIODS * 2 * math.pi / expected.min():
        raise UnderResolvedError(
            f"duration {duration:g} covers fewer than {MIN_PERIODS} periods of the slowest line {expected.min():g}"
        )
    nyquist = math.pi / dt
    if expected.max() >= nyquist - bin_width:
        raise UnderResolvedError(f"line {expected.max():g} at or above Nyquist {nyquist:g}")

    window = signal.windows.hann(x.size, sym=False)
    mag = np.abs(np.fft.rfft((x - x.mean()) * window))
    omega = 2 * math.pi * np.fft.rfftfreq(x.size, dt)
    mag[0] = 0.0
    top = mag.max()
    # every local maximum above round-off is a candidate for an expected line;
    # only those above rel_height can count as unexplained
    idx, _ = signal.find_peaks(mag, height=NOISE_FLOOR * top)
    peaks, heights = omega[idx], mag[idx]
    strong = heights >= rel_height * top

    report = PeakReport(peaks[strong], heights[strong], expected, bin_width)
    for p in peaks[strong]:
        if not np.any(np.abs(expected - p) <= bin_width):
            report.unexplained.append(float(p))
    for e in expected:
        close = np.abs(peaks - e) <= bin_width
        if np.any(close):
            report.matched[float(e)] = float(peaks[close][np.argmax(heights[close])])
        elif require_all:
            report.missing.append(float(e))
    return report


def expected_frequencies(params: SystemParams, backend: str) -> np.ndarray:
    if backend == "paper":
        return np.abs(paper_frequencies(dressed_coefficients(params)))
    if backend == "exact":
        dec = spectral_decomposition(params)
        # eigenvectors orthogonal to the initial state never show up
        w = dec.eigenvalues[np.abs(dec.weights[0]) > 1e-8]
        return np.array([abs(a - b) for a, b in itertools.combinations(w, 2)])
    raise ValueError(f"unknown backend {backend!r}")


def analysis_grid(params: SystemParams, backend: str, samples: int = 4096, periods: float = 20.0):
    """Uniform time grid covering ``periods`` cycles of the slowest expected line."""
    freqs = _distinct(expected_frequencies(params, backend), 1e-9)
    duration = periods * 2 * math.pi / freqs.min()
    dt = duration / samples
    return np.arange(samples) * dt, dt
