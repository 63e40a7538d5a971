"""Detector POVM weights and beam-splitter photocount statistics.

Everything here is diagonal in the Fock basis: detectors are per-Fock-state
outcome weights, and the signal/noise mixing enters only through the photon
number distribution it leaves in the transmitted port.  That distribution is
all the downstream error and coincidence formulas consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import ConfigurationError, DomainError, TruncationError

TWO_PLUS = 2  # detected-count label meaning "two or more photons"

_EXACT_LIMIT = 20   # largest index evaluated with exact integer factorials
_PAD = 64           # row granularity of the cached amplitude tables
_N_MAX_LIMIT = 4000  # guards the quadratically sized amplitude table


class DetectorKind(str, Enum):
    SPAD = "spad"
    PNRD = "pnrd"


@dataclass(frozen=True)
class DetectorModel:
    """Detector type with efficiency ``eta`` and dark-count rate ``dark``.

    ``dark`` is the mean number of spurious counts per detection gate.  It is
    the POVM parameter often written nu; renamed here so it cannot collide
    with the noise mean carried on the same axis in sweeps.
    """

    kind: DetectorKind
    eta: float = 1.0
    dark: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", DetectorKind(self.kind))
        if not 0.0 <= self.eta <= 1.0:
            raise DomainError(f"detector efficiency must lie in [0, 1], got {self.eta}")
        if self.dark < 0.0:
            raise DomainError(f"dark-count rate must be nonnegative, got {self.dark}")


@dataclass(frozen=True)
class TruncationPolicy:
    """Cutoff for the infinite thermal sums.

    ``n_max`` of None derives max(50, ceil(40*(nbar+1))), which keeps the
    neglected geometric tail below ~e^-40 for any mean.
    """

    n_max: int | None = None
    tail_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.n_max is not None and self.n_max < 1:
            raise DomainError(f"n_max must be at least 1, got {self.n_max}")
        if self.tail_tol <= 0.0:
            raise DomainError(f"tail_tol must be positive, got {self.tail_tol}")

    def resolve_n_max(self, nbar: float) -> int:
        if self.n_max is not None:
            return self.n_max
        return max(50, math.ceil(40.0 * (nbar + 1.0)))


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class PhotocountDistribution:
    """Transmitted-port photon number distribution for one Fock input.

    ``probs[s]`` is the probability of ``s`` photons; trailing exact zeros
    are trimmed.  ``truncation_tail`` bounds the thermal mass neglected by
    the cutoff, so sum(probs) + truncation_tail accounts for unit mass.
    """

    probs: np.ndarray
    incident_l: int
    truncation_tail: float


@dataclass(frozen=True)
class DetectionPmf:
    """Coarse-grained detected counts {0, 1, >=2} behind an imperfect PNRD."""

    p0: float
    p1: float
    p_two_plus: float


def _lgf(m: int) -> float:
    return math.lgamma(m + 1.0)


def _log_comb(m: int, j: int) -> float:
    return _lgf(m) - _lgf(j) - _lgf(m - j)


def bs_coefficient(l: int, n: int, k: int, s: int, t: float) -> float:
    """One interference term of the beam-splitter transition amplitude.

    Contribution, for Fock inputs ``|l>`` (signal port) and ``|n>`` (noise
    port), to the amplitude of finding ``s`` photons in the transmitted port
    via the path where ``k`` signal photons are transmitted.  Zero whenever
    a binomial constraint fails; indices above 20 switch to log-space
    factorials to avoid overflow.
    """
    for name, value in (("l", l), ("n", n), ("k", k), ("s", s)):
        if value < 0:
            raise DomainError(f"index {name} must be nonnegative, got {value}")
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"transmittance must lie in [0, 1], got {t}")
    if k > l or k > s or s - k > n:
        return 0.0
    # k <= min(l, s) and s - k <= n imply s <= l + n, so l + n - s >= 0 here.
    if max(l, n, s) <= _EXACT_LIMIT:
        mag = math.sqrt(
            math.factorial(s) * math.factorial(l + n - s)
            / (math.factorial(l) * math.factorial(n))
        ) * math.comb(l, k) * math.comb(n, s - k)
    else:
        log_mag = (
            0.5 * (_lgf(s) + _lgf(l + n - s) - _lgf(l) - _lgf(n))
            + _log_comb(l, k)
            + _log_comb(n, s - k)
        )
        mag = math.exp(log_mag)
    sign = -1.0 if (s - k) % 2 else 1.0
    return sign * mag * (1.0 - t) ** (0.5 * (l + s - 2 * k)) * t ** (0.5 * (n + 2 * k - s))


@lru_cache(maxsize=16)
def _amplitude_sq_matrix(l: int, t: float, n_rows: int) -> np.ndarray:
    """Squared k-summed amplitudes, indexed [noise Fock n, transmitted count s].

    Rows run to ``n_rows``, columns to ``l + n_rows``; entries with
    s > l + n are zero.  Cached because a boundary search revisits one
    transmittance with many different noise means.
    """
    n = np.arange(n_rows + 1)[:, None]
    s = np.arange(l + n_rows + 1)[None, :]
    lgf = gammaln(np.arange(l + n_rows + 1) + 1.0)  # log(i!)

    reflected = l + n - s
    valid_ns = reflected >= 0
    log_norm = 0.5 * (lgf[s] + lgf[np.maximum(reflected, 0)] - lgf[l] - lgf[n])

    total = np.zeros((n_rows + 1, l + n_rows + 1))
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(l + 1):
            j = s - k  # noise photons ending up in the transmitted port
            ok = valid_ns & (j >= 0) & (j <= n) & (k <= s)
            log_bin = (
                _log_comb(l, k)
                + lgf[n] - lgf[np.clip(j, 0, None)] - lgf[np.clip(n - j, 0, None)]
            )
            # exponents are clipped to zero on masked entries so 0**negative
            # can never appear; the mask then discards those slots entirely
            e_refl = np.where(ok, l + s - 2 * k, 0).astype(np.float64)
            e_trans = np.where(ok, n + 2 * k - s, 0).astype(np.float64)
            amp = (
                np.exp(log_norm + log_bin)
                * np.power(1.0 - t, 0.5 * e_refl)
                * np.power(t, 0.5 * e_trans)
            )
            sign = np.where((s - k) % 2 == 0, 1.0, -1.0)
            total += np.where(ok, sign * amp, 0.0)
    out = np.square(total)
    out.setflags(write=False)
    return out


def _thermal_weights(nbar: float, n_max: int) -> np.ndarray:
    if nbar == 0.0:
        w = np.zeros(n_max + 1)
        w[0] = 1.0
        return w
    ratio = nbar / (nbar + 1.0)
    return np.power(ratio, np.arange(n_max + 1)) / (nbar + 1.0)


def thermal_tail(nbar: float, n_max: int) -> float:
    """Geometric bound on the thermal mass above the cutoff ``n_max``."""
    if nbar == 0.0:
        return 0.0
    return (nbar / (nbar + 1.0)) ** (n_max + 1)


def photocount_pmf(
    l: int,
    nbar: float,
    t: float,
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> PhotocountDistribution:
    """Photocount distribution of Fock state ``|l>`` mixed with thermal noise.

    The signal enters a beam splitter of transmittance ``t`` whose other port
    carries a single-mode thermal state of mean ``nbar``; returned are the
    photon number probabilities in the transmitted port, with the thermal sum
    truncated per ``policy``.

    Raises:
        TruncationError: the policy's explicit ``n_max`` leaves more tail
            mass than ``tail_tol`` permits.
        DomainError: arguments out of range, or a cutoff so large that the
            quadratic amplitude table would be impractical (means above a
            few thousand photons are outside this model's intended regime).
    """
    if l < 0:
        raise DomainError(f"incident Fock number must be nonnegative, got {l}")
    if nbar < 0.0:
        raise DomainError(f"thermal mean must be nonnegative, got {nbar}")
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"transmittance must lie in [0, 1], got {t}")
    n_max = policy.resolve_n_max(nbar)
    if n_max > _N_MAX_LIMIT:
        raise DomainError(
            f"thermal cutoff n_max={n_max} exceeds the supported limit {_N_MAX_LIMIT}"
        )
    tail = thermal_tail(nbar, n_max)
    if tail > policy.tail_tol:
        raise TruncationError(
            f"thermal cutoff n_max={n_max} leaves tail {tail:.3e} above "
            f"tail_tol={policy.tail_tol:.3e}",
            achieved_tail=tail,
        )
    # tables are built at padded sizes so a noise-mean search at fixed t
    # keeps hitting the same cache entry
    n_rows = _PAD * max(1, math.ceil(n_max / _PAD))
    matrix = _amplitude_sq_matrix(int(l), float(t), n_rows)
    weights = _thermal_weights(float(nbar), n_max)
    probs = weights @ matrix[: n_max + 1, : l + n_max + 1]
    nonzero = np.nonzero(probs)[0]
    probs = probs[: nonzero[-1] + 1].copy() if nonzero.size else probs[:1].copy()
    probs.setflags(write=False)
    return PhotocountDistribution(probs=probs, incident_l=int(l), truncation_tail=tail)


def spad_weights(n: int, det: DetectorModel) -> tuple[float, float]:
    """(no-click, click) POVM weights of a SPAD for the Fock state ``|n>``.

    The pair sums to one exactly since the click weight is defined as the
    complement.
    """
    if det.kind is not DetectorKind.SPAD:
        raise ConfigurationError("spad_weights requires a SPAD detector model")
    if n < 0:
        raise DomainError(f"Fock index must be nonnegative, got {n}")
    no_click = math.exp(-det.dark) * (1.0 - det.eta) ** n
    return no_click, 1.0 - no_click


def pnrd_weights(count: int, k: int, det: DetectorModel) -> float:
    """PNRD outcome weight for Fock state ``|k>``.

    ``count`` is 0, 1 or ``TWO_PLUS``; the two-or-more weight is the
    complement of the other two, so the three sum to one exactly.
    """
    if det.kind is not DetectorKind.PNRD:
        raise ConfigurationError("pnrd_weights requires a PNRD detector model")
    if k < 0:
        raise DomainError(f"Fock index must be nonnegative, got {k}")
    damp = math.exp(-det.dark)
    p0 = damp * (1.0 - det.eta) ** k
    linear = 0.0 if k == 0 else k * det.eta * (1.0 - det.eta) ** (k - 1)
    p1 = damp * (linear + det.dark * (1.0 - det.eta) ** k)
    if count == 0:
        return p0
    if count == 1:
        return p1
    if count == TWO_PLUS:
        return 1.0 - p0 - p1
    raise DomainError(f"count must be 0, 1 or TWO_PLUS, got {count}")


def detect_pmf(pmf: PhotocountDistribution, det: DetectorModel) -> DetectionPmf:
    """Coarse-grain a photocount distribution through an imperfect PNRD.

    With a perfect detector this is the identity coarse-graining
    (0 -> 0, 1 -> 1, rest -> two-or-more).  The two-plus slot absorbs the
    truncation tail, which the policy already bounds below tolerance.
    """
    if det.kind is not DetectorKind.PNRD:
        raise ConfigurationError("detect_pmf coarse-grains onto PNRD outcomes")
    s = np.arange(len(pmf.probs))
    damp = math.exp(-det.dark)
    miss = np.power(1.0 - det.eta, s)
    linear = np.where(
        s > 0, s * det.eta * np.power(1.0 - det.eta, np.maximum(s - 1, 0)), 0.0
    )
    p0 = float((damp * miss) @ pmf.probs)
    p1 = float((damp * (linear + det.dark * miss)) @ pmf.probs)
    return DetectionPmf(p0=p0, p1=p1, p_two_plus=1.0 - p0 - p1)
