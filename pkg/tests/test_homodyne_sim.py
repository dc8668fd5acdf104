import math

import numpy as np
import pytest

from config import Config
from src.bell import bell_max
from src.channel import apply_loss
from src.exceptions import DomainError, UnphysicalStateError, UnderdeterminedError
from src.gaussian_core import StandardForm, apply_local_symplectic, rotation, single_mode_squeezer
from src.homodyne_sim import (
    Setting, DEFAULT_SETTINGS, UNIQUE_ENTRIES, default_settings, design_matrix, sample_quadratures,
    estimate_cm, estimate_cm_from_variances, export_dataset, end_to_end, simulated_sweep, _evaluate
)

SQRT3_2 = math.sqrt(3.0) / 2.0


def _entry_errors(estimate, truth):
    return np.array([estimate.cm.entries[h, k] - truth.entries[h, k] for h, k in UNIQUE_ENTRIES])


class TestSettings:

    def test_default_settings_span_all_entries(self):
        assert len(DEFAULT_SETTINGS) == 14
        assert np.linalg.matrix_rank(design_matrix(DEFAULT_SETTINGS)) == 10

    def test_common_phase_settings_are_not_enough(self):
        common_phase = [s for s in default_settings() if s.offset == 0.0]
        assert np.linalg.matrix_rank(design_matrix(common_phase)) == 9

    def test_balanced_variances(self, pure_n1):
        cm = pure_n1.to_covariance_matrix()
        assert Setting("minus", 0.0).variance(cm) == pytest.approx(1.0 - SQRT3_2)
        assert Setting("plus", 0.0).variance(cm) == pytest.approx(1.0 + SQRT3_2)
        assert Setting("a", 0.0).variance(cm) == pytest.approx(1.0)

    @pytest.mark.parametrize("mode, theta", [("c", 0.0), ("a", -0.1), ("b", math.pi)])
    def test_invalid_setting(self, mode, theta):
        with pytest.raises(DomainError):
            Setting(mode, theta)


class TestSampling:

    def test_deterministic(self, pure_n1):
        cm = pure_n1.to_covariance_matrix()
        first = sample_quadratures(cm, N=1000, seed=5)
        second = sample_quadratures(cm, N=1000, seed=5)
        other = sample_quadratures(cm, N=1000, seed=6)
        for a, b, c in zip(first.samples, second.samples, other.samples):
            assert np.array_equal(a, b)
            assert not np.array_equal(a, c)

    def test_substreams_independent_of_setting_list(self, pure_n1):
        """A setting's samples depend only on (seed, index)"""
        cm = pure_n1.to_covariance_matrix()
        full = sample_quadratures(cm, N=500, seed=9)
        head = sample_quadratures(cm, DEFAULT_SETTINGS[:3], N=500, seed=9)
        for a, b in zip(full.samples[:3], head.samples):
            assert np.array_equal(a, b)

    def test_samples_are_read_only(self, vacuum):
        ds = sample_quadratures(vacuum.to_covariance_matrix(), N=10, seed=1)
        with pytest.raises(ValueError):
            ds.samples[0][0] = 1.0

    def test_vacuum_variance(self, vacuum):
        N = 100000
        ds = sample_quadratures(vacuum.to_covariance_matrix(), [Setting("a", 0.0)], N=N, seed=Config.DEFAULT_SEED)
        assert abs(ds.variances()[0] - 0.5) <= 4.0 * math.sqrt(2.0 / N) * 0.5

    def test_squeezing_identity(self, pure_n1):
        N = 100000
        ds = sample_quadratures(pure_n1.to_covariance_matrix(), [Setting("plus", 0.0), Setting("minus", 0.0)],
                                N=N, seed=3)
        plus, minus = ds.variances()
        stderr = math.sqrt(2.0 / N) * math.hypot(plus, minus)
        assert plus + minus == pytest.approx(2.0 * pure_n1.n, abs=5.0 * stderr)
        assert minus == pytest.approx(1.0 - SQRT3_2, abs=5.0 * math.sqrt(2.0 / N) * minus)

    def test_unphysical_rejected(self):
        with pytest.raises(UnphysicalStateError):
            sample_quadratures(StandardForm(0.5, 0.5, 0.3, -0.3).to_covariance_matrix(), N=10)

    def test_too_few_samples(self, vacuum):
        with pytest.raises(DomainError):
            sample_quadratures(vacuum.to_covariance_matrix(), N=1)

    def test_export(self, vacuum):
        ds = sample_quadratures(vacuum.to_covariance_matrix(), N=20, seed=2)
        frame = export_dataset(ds)
        assert list(frame.columns) == Config.DATASET_COLUMNS
        assert len(frame) == 20 * len(DEFAULT_SETTINGS)
        assert set(frame["mode"]) == {"a", "b", "plus", "minus"}
        assert np.array_equal(frame.loc[frame["setting"] == 4, "sample"].to_numpy(), ds.samples[4])


class TestEstimation:

    def test_exact_variances_recover_the_matrix(self):
        cm = apply_local_symplectic(StandardForm(1.3, 0.9, 0.5, -0.3).to_covariance_matrix(),
                                    single_mode_squeezer(0.2) @ rotation(0.5), rotation(1.1))
        variances = [s.variance(cm) for s in DEFAULT_SETTINGS]
        estimate = estimate_cm_from_variances(DEFAULT_SETTINGS, variances)
        assert np.allclose(estimate.cm.entries, cm.entries, atol=1e-12)
        assert np.all(estimate.standard_errors == 0.0)
        assert estimate.physical

    def test_balanced_difference_formula(self, pure_n1):
        cm = pure_n1.to_covariance_matrix()
        plus = Setting("plus", 0.0).variance(cm)
        minus = Setting("minus", 0.0).variance(cm)
        estimate = estimate_cm_from_variances(DEFAULT_SETTINGS, [s.variance(cm) for s in DEFAULT_SETTINGS])
        assert estimate.cm.entries[0, 2] == pytest.approx((plus - minus) / 2.0)

    def test_underdetermined(self, pure_n1):
        cm = pure_n1.to_covariance_matrix()
        settings = DEFAULT_SETTINGS[:8]
        with pytest.raises(UnderdeterminedError):
            estimate_cm_from_variances(settings, [s.variance(cm) for s in settings])

    def test_small_samples_flag_unphysical_estimates(self, vacuum):
        cm = vacuum.to_covariance_matrix()
        flags = [estimate_cm(sample_quadratures(cm, N=100, seed=seed)).physical for seed in range(20)]
        assert not all(flags)

    def test_standard_errors_shape(self, pure_n1):
        estimate = estimate_cm(sample_quadratures(pure_n1.to_covariance_matrix(), N=2000, seed=4))
        assert estimate.standard_errors.shape == (4, 4)
        assert np.all(estimate.standard_errors > 0.0)
        assert np.array_equal(estimate.standard_errors, estimate.standard_errors.T)

    @pytest.mark.slow
    def test_standard_errors_are_calibrated(self, pure_n1):
        truth = pure_n1.to_covariance_matrix()
        inside = 0
        total = 0
        for seed in range(100):
            estimate = estimate_cm(sample_quadratures(truth, N=100000, seed=seed))
            errors = _entry_errors(estimate, truth)
            bounds = np.array([3.0 * estimate.standard_errors[h, k] for h, k in UNIQUE_ENTRIES])
            inside += int(np.count_nonzero(np.abs(errors) <= bounds))
            total += len(UNIQUE_ENTRIES)
        assert inside / total >= 0.99

    @pytest.mark.slow
    def test_error_scales_as_inverse_root_n(self, pure_n1):
        truth = pure_n1.to_covariance_matrix()
        sizes = [1000, 10000, 100000]
        mean_errors = []
        for N in sizes:
            errors = [np.mean(np.abs(_entry_errors(estimate_cm(sample_quadratures(truth, N=N, seed=seed)), truth)))
                      for seed in range(50)]
            mean_errors.append(np.mean(errors))
        slope = np.polyfit(np.log10(sizes), np.log10(mean_errors), 1)[0]
        assert slope == pytest.approx(-0.5, abs=0.1)


class TestEndToEnd:

    @pytest.mark.slow
    def test_pure_state_large_sample(self, pure_n1):
        report = end_to_end(pure_n1, N=1000000, seed=Config.DEFAULT_SEED)
        assert abs(report.bell_max - bell_max(1.0, SQRT3_2)) <= 0.02
        assert report.verdicts_agree
        assert report.replicates == Config.BOOTSTRAP_REPLICATES
        assert report.bell_max_stderr < 0.02

    def test_pure_state_report(self, pure_n1):
        report = end_to_end(pure_n1, N=20000, seed=11, replicates=5)
        payload = report.as_dict()
        assert payload["true"]["bell_max"] == pytest.approx(bell_max(1.0, SQRT3_2))
        assert [c["name"] for c in payload["estimate"]["criteria"]] == ["PHS", "Duan", "Reid-AB", "Reid-BA"]
        assert all(c["stderr"] > 0.0 for c in payload["estimate"]["criteria"])
        assert payload["estimate"]["bell_max_symmetrized"] == pytest.approx(payload["estimate"]["bell_max"], abs=0.05)
        assert report.verdicts_agree

    def test_vacuum_shows_no_significant_entanglement(self, vacuum):
        report = end_to_end(vacuum, N=100000, seed=Config.DEFAULT_SEED)
        by_name = {c.name: c for c in report.criteria}
        for name in ("PHS", "Reid-AB", "Reid-BA"):
            criterion = by_name[name]
            assert not (criterion.verdict in ("entangled", "epr-steerable") and criterion.significant)
        assert abs(by_name["Duan"].witness) < 0.02
        assert report.bell_max == pytest.approx(2.0, abs=0.02)

    @pytest.mark.parametrize("seed", range(10))
    def test_vacuum_estimate_is_reported_for_every_seed(self, vacuum, seed):
        report = end_to_end(vacuum, N=100000, seed=seed, replicates=5)
        payload = report.as_dict()
        assert isinstance(payload["estimate"]["physical"], bool)
        symmetrized = payload["estimate"]["bell_max_symmetrized"]
        assert symmetrized is None or symmetrized == pytest.approx(2.0, abs=0.03)
        assert report.bell_max == pytest.approx(2.0, abs=0.03)
        assert abs({c.name: c for c in report.criteria}["Duan"].witness) < 0.03

    def test_sub_vacuum_estimate_has_no_symmetrized_value(self):
        evaluation = _evaluate(StandardForm(0.4998, 0.4999, 0.0, 0.0).to_covariance_matrix())
        assert evaluation["bell_max_symmetrized"] is None
        assert evaluation["bell_max"] == pytest.approx(2.0, abs=0.01)

    def test_lossy_state_entangled_but_local(self, pure_n1):
        lossy = apply_loss(pure_n1, Config.EXPERIMENTAL_TRANSMITTIVITY)
        report = end_to_end(lossy, N=100000, seed=Config.DEFAULT_SEED)
        by_name = {c.name: c for c in report.criteria}
        assert by_name["PHS"].verdict == "entangled" and by_name["PHS"].significant
        assert by_name["Duan"].verdict == "entangled" and by_name["Duan"].significant
        assert report.bell_max < 2.0
        assert report.bell_max + 3.0 * report.bell_max_stderr < 2.0


class TestSimulatedSweep:

    def test_estimates_follow_theory(self, pure_n1):
        frame = simulated_sweep(pure_n1, [0.7, 0.85, 1.0], N=50000, seed=8)
        assert list(frame["T"]) == [0.7, 0.85, 1.0]
        assert np.allclose(frame["bell_estimate"], frame["bell_theory"], atol=0.05)
        assert np.allclose(frame["duan_estimate"], frame["duan_theory"], atol=0.05)
        assert frame["bell_theory"].iloc[-1] > 2.0
