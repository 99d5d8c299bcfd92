"""Tests for the finite-blocklength Monte Carlo simulator."""

import numpy as np
import pytest
from scipy.stats import kendalltau

from keyregion.channels import Gdmmac, build_erasure_gdmmac
from keyregion.binary_examples import example1_design, example3_design, Example3Params
from keyregion.coding_sim import (
    BudgetError,
    Codebook,
    LeakageEstimate,
    RateQuad,
    SimConfig,
    generate_codebooks,
    plug_in_leakage,
    run_trial,
    simulate,
)
from keyregion.prob_core import Alphabet

ERASURE = build_erasure_gdmmac(p12=0.3, p21=0.3, p13=0.5, p23=0.1)


def noiseless_channel():
    """Deterministic channel: Y1 = X2, Y2 = X1, Y3 = (X1, X2)."""
    kernel = np.zeros((2, 2, 2, 2, 4))
    for x1 in range(2):
        for x2 in range(2):
            kernel[x1, x2, x2, x1, 2 * x1 + x2] = 1.0
    b = Alphabet((0, 1))
    return Gdmmac(b, b, b, b, Alphabet((0, 1, 2, 3)), kernel)


def erasure_config(**overrides):
    base = dict(
        channel=ERASURE,
        design=example1_design(),
        n=8,
        key_rates=RateQuad(r12=0.1, r23=0.1),
        randomization_rates=RateQuad(r12=0.5, r23=0.7),
        trials=40,
        seed=0,
        epsilon_typ=1.2 / np.sqrt(8),
    )
    base.update(overrides)
    return SimConfig(**base)


class TestConfig:
    def test_rates_must_be_nonnegative(self):
        with pytest.raises(ValueError):
            RateQuad(r12=-0.1)

    def test_trials_must_be_positive(self):
        with pytest.raises(ValueError):
            erasure_config(trials=0)

    def test_blocklength_must_be_positive(self):
        with pytest.raises(ValueError):
            erasure_config(n=0)

    def test_negative_slack_rejected(self):
        with pytest.raises(ValueError):
            erasure_config(epsilon_typ=-0.1)

    def test_t_layer_design_rejected(self):
        design = example3_design(
            Example3Params(0.2, 0.3, 0.1, 0.4, 0.25, 0.09, 0.1, 0.07)
        )
        from keyregion.channels import build_correlated_noise_gdmmac

        with pytest.raises(ValueError):
            erasure_config(
                channel=build_correlated_noise_gdmmac(0.09, 0.1, 0.07),
                design=design,
            )

    def test_budget_enforced(self):
        with pytest.raises(BudgetError):
            erasure_config(budget=10)

    def test_codebook_shapes(self):
        cfg = erasure_config(
            n=4,
            key_rates=RateQuad(r12=0.25),
            randomization_rates=RateQuad(),
        )
        assert cfg.codebook_shape("s12") == (2, 1)
        assert cfg.codebook_shape("s21") == (1, 1)


class TestCodebooks:
    def test_zero_rates_give_singleton_books(self):
        cfg = erasure_config(key_rates=RateQuad(), randomization_rates=RateQuad())
        book = generate_codebooks(cfg)
        for pair in ("s12", "s21", "s13", "s23"):
            assert book.entries[pair].shape[:2] == (1, 1)

    def test_same_seed_is_deterministic(self):
        cfg = erasure_config()
        a = generate_codebooks(cfg)
        b = generate_codebooks(cfg)
        for pair in a.entries:
            np.testing.assert_array_equal(a.entries[pair], b.entries[pair])

    def test_different_seeds_differ(self):
        a = generate_codebooks(erasure_config(seed=0))
        b = generate_codebooks(erasure_config(seed=1))
        assert any(
            not np.array_equal(a.entries[p], b.entries[p]) for p in a.entries
        )


class TestDecoding:
    def noiseless_setup(self, eps):
        cfg = SimConfig(
            channel=noiseless_channel(),
            design=example1_design(),
            n=4,
            key_rates=RateQuad(r12=0.25, r23=0.25),
            randomization_rates=RateQuad(),
            trials=20,
            seed=0,
            epsilon_typ=eps,
        )
        zeros = np.zeros((1, 1, 4), dtype=np.int64)
        book = Codebook(
            {
                "s12": np.array([[[0, 0, 1, 1]], [[1, 0, 1, 0]]]),
                "s21": zeros,
                "s13": zeros,
                "s23": np.array([[[0, 1, 0, 1]], [[1, 1, 0, 0]]]),
            }
        )
        return cfg, book

    @pytest.mark.parametrize("eps", [0.0, 0.5, 1.0])
    def test_noiseless_distinct_codewords_zero_error(self, eps):
        # Over a noiseless channel a distinct-codeword book decodes with
        # zero error regardless of the typicality slack.
        cfg, book = self.noiseless_setup(eps)
        for t in range(cfg.trials):
            out = run_trial(book, cfg, t)
            assert not (out.error_u1 or out.error_u2 or out.error_u3)

    def test_zero_slack_over_noisy_channel_rejects(self):
        # A noisy block essentially never produces an exactly on-type
        # empirical joint, so zero slack rejects nearly always.
        report = simulate(erasure_config(epsilon_typ=0.0))
        assert report.error_rates["u2"] > 0.8

    def test_rates_far_above_threshold_fail(self):
        # Keys at 150% of the admissible corner with randomization pinned at
        # its secrecy threshold overload the third receiver.
        report = simulate(
            erasure_config(
                key_rates=RateQuad(r12=0.2 * 1.5, r23=0.2 * 1.5),
                trials=100,
                seed=7,
            )
        )
        assert report.error_rates["u3"] > 0.5

    def test_rates_below_threshold_succeed(self):
        report = simulate(
            erasure_config(
                key_rates=RateQuad(r12=0.1, r23=0.1), trials=100, seed=7
            )
        )
        assert report.error_rates["u3"] < 0.2

    def test_error_rate_monotone_in_key_rate(self):
        # Error rate trends upward as the key rates scale through the
        # admissible corner (one-sided rank correlation at 5%).
        multipliers = [0.25, 0.5, 1.0, 1.25, 1.5]
        rates = []
        for m in multipliers:
            report = simulate(
                erasure_config(
                    key_rates=RateQuad(r12=0.2 * m, r23=0.2 * m),
                    trials=100,
                    seed=3,
                )
            )
            rates.append(report.error_rates["u3"])
        tau, pvalue = kendalltau(multipliers, rates, alternative="greater")
        assert tau > 0
        assert pvalue < 0.05


class TestLeakageEstimator:
    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            plug_in_leakage([(0, 0)])

    def test_single_key_value_is_degenerate(self):
        est = plug_in_leakage([(0, 0), (0, 1)])
        assert est.degenerate
        assert est.bits == 0.0

    def test_independent_key_stays_below_bias(self):
        rng = np.random.default_rng(0)
        samples = [
            (int(rng.integers(2)), int(rng.integers(64))) for _ in range(4000)
        ]
        est = plug_in_leakage(samples, n_buckets=64)
        assert not est.degenerate
        assert est.bits <= est.bias_bound + 0.01
        assert est.corrected_bits < 0.01

    def test_copied_key_recovers_entropy(self):
        rng = np.random.default_rng(1)
        samples = [(k := int(rng.integers(4)), k) for _ in range(4000)]
        est = plug_in_leakage(samples)
        assert abs(est.corrected_bits - 2.0) < 0.05

    def test_bias_bound_formula(self):
        est = plug_in_leakage([(0, 0), (1, 1)], n_buckets=16)
        assert abs(est.bias_bound - 15 / (2 * 2 * np.log(2))) < 1e-12


class TestSimulate:
    def test_deterministic_given_seed(self):
        cfg = erasure_config(n=4, trials=10)
        a, b = simulate(cfg), simulate(cfg)
        assert a.error_rates == b.error_rates
        for k in a.leakage_bits:
            assert a.leakage_bits[k].bits == b.leakage_bits[k].bits

    def test_single_trial_reports_degenerate_leakage(self):
        report = simulate(erasure_config(n=2, trials=1))
        assert report.trials == 1
        assert all(v.degenerate for v in report.leakage_bits.values())

    def test_report_json_schema(self):
        import json

        report = simulate(erasure_config(n=4, trials=5))
        payload = json.loads(report.to_json())
        assert set(payload) == {
            "config_echo",
            "errors",
            "leakage_bits",
            "leakage_raw_bits",
            "leakage_bias_bound",
            "trials",
            "seed",
            "runtime_ms",
        }
        assert set(payload["errors"]) == {"u1", "u2", "u3"}
        assert set(payload["leakage_bits"]) == {"k12", "k13", "k23"}

    def test_randomization_above_threshold_hides_key(self):
        # With randomization at the secrecy threshold the corrected leakage
        # estimate of the pairwise key is much smaller than without it.
        common = dict(
            key_rates=RateQuad(r12=0.25),
            trials=2000,
            seed=11,
        )
        protected = simulate(
            erasure_config(randomization_rates=RateQuad(r12=0.6), **common)
        )
        exposed = simulate(
            erasure_config(randomization_rates=RateQuad(), **common)
        )
        assert (
            protected.leakage_bits["k12"].corrected_bits
            < exposed.leakage_bits["k12"].corrected_bits
        )
