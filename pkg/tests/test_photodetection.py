import math

import numpy as np
import pytest

from qkdng.errors import ConfigurationError, DomainError, TruncationError
from qkdng.photodetection import (
    TWO_PLUS,
    DetectorKind,
    DetectorModel,
    PhotocountDistribution,
    TruncationPolicy,
    _amplitude_sq_matrix,
    bs_coefficient,
    detect_pmf,
    photocount_pmf,
    pnrd_weights,
    spad_weights,
)


def brute_force_pmf(l, nbar, t, s, n_sum):
    """Truncated direct evaluation of the photocount series, term by term."""
    total = 0.0
    for n in range(n_sum + 1):
        weight = (nbar / (nbar + 1.0)) ** n / (nbar + 1.0)
        amp = sum(bs_coefficient(l, n, k, s, t) for k in range(0, min(l, s) + 1))
        total += weight * amp * amp
    return total


class TestBsCoefficient:
    @pytest.mark.parametrize("t", [0.0, 0.3, 0.7, 1.0])
    def test_single_photon_transmitted(self, t):
        assert bs_coefficient(1, 0, 1, 1, t) == pytest.approx(math.sqrt(t), abs=1e-15)

    def test_blocked_binomial(self):
        assert bs_coefficient(1, 0, 0, 1, 0.5) == 0.0

    def test_vacuum(self):
        assert bs_coefficient(0, 0, 0, 0, 0.37) == 1.0

    def test_hong_ou_mandel_dip(self):
        amp = sum(bs_coefficient(1, 1, k, 1, 0.5) for k in (0, 1))
        assert amp == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("args", [(-1, 0, 0, 0), (0, -2, 0, 0), (0, 0, -1, 0), (0, 0, 0, -3)])
    def test_negative_indices(self, args):
        with pytest.raises(DomainError):
            bs_coefficient(*args, 0.5)

    def test_transmittance_domain(self):
        with pytest.raises(DomainError):
            bs_coefficient(1, 1, 0, 1, 1.5)

    @pytest.mark.parametrize("t", [0.0, 0.25, 0.5, 0.75, 1.0])
    @pytest.mark.parametrize("l", [0, 1])
    def test_unitarity_small(self, l, t):
        for n in range(0, 13, 3):
            total = 0.0
            for s in range(l + n + 1):
                amp = sum(bs_coefficient(l, n, k, s, t) for k in range(0, min(l, s) + 1))
                total += amp * amp
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_log_space_matches_exact_scaling(self):
        # n=40 forces the lgamma path; the analytic l=0 amplitude is a
        # binomial factor, so the squared k-sum must reproduce it
        n, t = 40, 0.6
        for s in (0, 5, 17, 40):
            amp = bs_coefficient(0, n, 0, s, t)
            expected = math.comb(n, s) * (1 - t) ** s * t ** (n - s)
            assert amp * amp == pytest.approx(expected, rel=1e-12)


class TestAmplitudeMatrix:
    @pytest.mark.parametrize("l", [0, 1, 2])
    @pytest.mark.parametrize("t", [0.0, 0.2, 0.8, 1.0])
    def test_matches_scalar_route(self, l, t):
        matrix = _amplitude_sq_matrix(l, t, 64)
        for n in range(0, 11):
            for s in range(0, l + n + 1):
                amp = sum(bs_coefficient(l, n, k, s, t) for k in range(0, min(l, s) + 1))
                assert matrix[n, s] == pytest.approx(amp * amp, abs=1e-13)

    @pytest.mark.parametrize("l", [0, 1, 2])
    def test_unitary_rows_at_scale(self, l):
        # every noise Fock index maps onto a unit-mass count distribution,
        # including rows deep in the log-space regime
        matrix = _amplitude_sq_matrix(l, 0.35, 512)
        row_sums = matrix.sum(axis=1)
        assert np.abs(row_sums - 1.0).max() < 1e-10


class TestPhotocountPmf:
    def test_vacuum_ancilla(self):
        pmf = photocount_pmf(1, 0.0, 0.7)
        assert len(pmf.probs) == 2
        assert pmf.probs[0] == pytest.approx(0.3, abs=1e-12)
        assert pmf.probs[1] == pytest.approx(0.7, abs=1e-12)
        assert pmf.truncation_tail == 0.0

    def test_unit_transmittance_decouples(self):
        pmf = photocount_pmf(1, 2.3, 1.0)
        assert pmf.probs[1] == pytest.approx(1.0, abs=1e-9)

    def test_thermal_mixing_oracle(self):
        # closed-form geometric sums for l=1, nbar=1, T=1/2
        pmf = photocount_pmf(1, 1.0, 0.5)
        assert pmf.probs[0] == pytest.approx(4.0 / 9.0, abs=1e-9)
        assert pmf.probs[1] == pytest.approx(8.0 / 27.0, abs=1e-9)

    def test_against_brute_force(self):
        pmf = photocount_pmf(1, 1.0, 0.5)
        for s in (0, 1, 2):
            assert pmf.probs[s] == pytest.approx(brute_force_pmf(1, 1.0, 0.5, s, 500), abs=1e-8)

    @pytest.mark.parametrize("l,nbar,t", [(0, 0.5, 0.3), (1, 1.0, 0.5), (1, 3.7, 0.85), (2, 0.8, 0.4)])
    def test_normalization(self, l, nbar, t):
        pmf = photocount_pmf(l, nbar, t)
        assert float(pmf.probs.sum()) + pmf.truncation_tail == pytest.approx(1.0, abs=1e-8)
        assert np.all(pmf.probs >= 0.0)
        assert np.all(pmf.probs <= 1.0)

    def test_vacuum_input_is_attenuated_thermal(self):
        nbar, t = 2.0, 0.4
        pmf = photocount_pmf(0, nbar, t)
        mean = (1.0 - t) * nbar
        geometric = (1.0 / (mean + 1.0)) * (mean / (mean + 1.0)) ** np.arange(10)
        assert np.abs(pmf.probs[:10] - geometric).max() < 1e-8

    def test_truncation_error_reports_tail(self):
        policy = TruncationPolicy(n_max=5, tail_tol=1e-10)
        with pytest.raises(TruncationError) as excinfo:
            photocount_pmf(1, 1.0, 0.5, policy)
        assert excinfo.value.achieved_tail == pytest.approx(0.5 ** 6, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            photocount_pmf(-1, 0.5, 0.5)
        with pytest.raises(DomainError):
            photocount_pmf(1, -0.5, 0.5)
        with pytest.raises(DomainError):
            photocount_pmf(1, 0.5, 1.2)


class TestSpadWeights:
    def test_vacuum_sees_only_dark_counts(self):
        det = DetectorModel(DetectorKind.SPAD, eta=0.33, dark=0.001)
        no_click, _ = spad_weights(0, det)
        assert no_click == pytest.approx(math.exp(-0.001), abs=1e-15)

    def test_perfect_detector_always_fires(self):
        det = DetectorModel(DetectorKind.SPAD, eta=1.0, dark=0.0)
        _, click = spad_weights(3, det)
        assert click == 1.0

    def test_single_photon(self):
        det = DetectorModel(DetectorKind.SPAD, eta=0.7, dark=0.001)
        no_click, _ = spad_weights(1, det)
        assert no_click == pytest.approx(0.3 * math.exp(-0.001), rel=1e-12)

    @pytest.mark.parametrize("n", [0, 1, 5, 40])
    def test_completeness(self, n):
        det = DetectorModel(DetectorKind.SPAD, eta=0.6, dark=0.02)
        no_click, click = spad_weights(n, det)
        assert no_click + click == pytest.approx(1.0, abs=1e-15)

    def test_kind_check(self):
        with pytest.raises(ConfigurationError):
            spad_weights(0, DetectorModel(DetectorKind.PNRD))


class TestPnrdWeights:
    def test_ideal_resolves_one_photon(self):
        det = DetectorModel(DetectorKind.PNRD, eta=1.0, dark=0.0)
        assert pnrd_weights(1, 1, det) == 1.0

    def test_vacuum_no_click(self):
        det = DetectorModel(DetectorKind.PNRD, eta=0.42, dark=0.05)
        assert pnrd_weights(0, 0, det) == pytest.approx(math.exp(-0.05), abs=1e-15)

    def test_vacuum_two_plus_is_dark_doubles(self):
        det = DetectorModel(DetectorKind.PNRD, eta=0.7, dark=0.001)
        expected = 1.0 - math.exp(-0.001) * (1.0 + 0.001)
        assert pnrd_weights(TWO_PLUS, 0, det) == pytest.approx(expected, rel=1e-9)
        assert pnrd_weights(TWO_PLUS, 0, det) == pytest.approx(4.9967e-7, rel=1e-4)

    @pytest.mark.parametrize("eta,dark", [(0.0, 0.0), (0.3, 0.01), (0.7, 0.001), (1.0, 0.1)])
    def test_completeness_and_positivity(self, eta, dark):
        det = DetectorModel(DetectorKind.PNRD, eta=eta, dark=dark)
        for k in range(201):
            parts = [pnrd_weights(c, k, det) for c in (0, 1, TWO_PLUS)]
            assert sum(parts) == pytest.approx(1.0, abs=1e-12)
            assert parts[1] >= 0.0

    def test_bad_count_label(self):
        with pytest.raises(DomainError):
            pnrd_weights(3, 0, DetectorModel(DetectorKind.PNRD))


class TestDetectPmf:
    def test_perfect_detection_is_identity(self):
        pmf = photocount_pmf(1, 0.0, 0.7)
        out = detect_pmf(pmf, DetectorModel(DetectorKind.PNRD))
        assert out.p0 == pmf.probs[0]
        assert out.p1 == pmf.probs[1]
        assert out.p_two_plus == pytest.approx(0.0, abs=1e-15)

    def test_vacuum_dark_count_term(self):
        pmf = PhotocountDistribution(
            probs=np.array([1.0]), incident_l=0, truncation_tail=0.0
        )
        out = detect_pmf(pmf, DetectorModel(DetectorKind.PNRD, eta=0.7, dark=0.001))
        assert out.p1 == pytest.approx(0.001 * math.exp(-0.001), rel=1e-12)

    @pytest.mark.parametrize("eta,dark", [(1.0, 0.0), (0.7, 0.001), (0.2, 0.3)])
    def test_completeness(self, eta, dark):
        pmf = photocount_pmf(1, 1.3, 0.6)
        out = detect_pmf(pmf, DetectorModel(DetectorKind.PNRD, eta=eta, dark=dark))
        assert out.p0 + out.p1 + out.p_two_plus == pytest.approx(1.0, abs=1e-10)

    def test_matches_weight_sum(self):
        pmf = photocount_pmf(1, 0.8, 0.45)
        det = DetectorModel(DetectorKind.PNRD, eta=0.55, dark=0.01)
        out = detect_pmf(pmf, det)
        by_hand0 = sum(pnrd_weights(0, s, det) * p for s, p in enumerate(pmf.probs))
        by_hand1 = sum(pnrd_weights(1, s, det) * p for s, p in enumerate(pmf.probs))
        assert out.p0 == pytest.approx(by_hand0, abs=1e-14)
        assert out.p1 == pytest.approx(by_hand1, abs=1e-14)

    def test_kind_check(self):
        pmf = photocount_pmf(0, 0.1, 0.5)
        with pytest.raises(ConfigurationError):
            detect_pmf(pmf, DetectorModel(DetectorKind.SPAD))


class TestDetectorModel:
    def test_validation(self):
        with pytest.raises(DomainError):
            DetectorModel(DetectorKind.PNRD, eta=1.2)
        with pytest.raises(DomainError):
            DetectorModel(DetectorKind.SPAD, dark=-0.1)

    def test_string_kind_coerced(self):
        det = DetectorModel("pnrd")
        assert det.kind is DetectorKind.PNRD
        assert detect_pmf(photocount_pmf(1, 0.0, 0.7), det).p1 == pytest.approx(0.7, abs=1e-12)
        with pytest.raises(ValueError):
            DetectorModel("apd")

    def test_policy_validation(self):
        with pytest.raises(DomainError):
            TruncationPolicy(n_max=0)
        with pytest.raises(DomainError):
            TruncationPolicy(tail_tol=0.0)
