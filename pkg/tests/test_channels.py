"""Tests for channel models, auxiliary designs and joint composition."""

import itertools
import json

import numpy as np
import pytest

from keyregion.channels import (
    AuxDesign,
    Gdmmac,
    build_binary_sum_gdmmac,
    build_correlated_noise_gdmmac,
    build_erasure_gdmmac,
    channel_from_json,
    channel_to_json,
    induce_joint,
)
from keyregion.binary_examples import example1_design, example3_design, Example3Params
from keyregion.prob_core import (
    Alphabet,
    conditional_mutual_information as cmi,
    is_markov_chain,
    marginalize,
)


class TestBuilders:
    def test_erasure_output_probability(self):
        ch = build_erasure_gdmmac(p12=0.3, p21=0.2, p13=0.5, p23=0.1)
        # P(Y2 = 0 | x1, x2) is the X1 -> Y2 erasure probability.
        y2_erased = ch.kernel.sum(axis=(2, 4))[:, :, 1]
        np.testing.assert_allclose(y2_erased, 0.3)

    def test_erasure_domain(self):
        with pytest.raises(ValueError):
            build_erasure_gdmmac(1.5, 0.3, 0.5, 0.1)

    def test_binary_sum_flip_probability(self):
        # P(Y1 != X1 xor X2) equals the first crossover exactly.
        ch = build_binary_sum_gdmmac(0.09, 0.1, 0.07)
        for x1, x2 in itertools.product(range(2), repeat=2):
            flip = ch.kernel[x1, x2].sum(axis=(1, 2))[1 - (x1 ^ x2)]
            assert abs(flip - 0.09) < 1e-15

    def test_binary_sum_domain(self):
        with pytest.raises(ValueError):
            build_binary_sum_gdmmac(0.6, 0.1, 0.1)

    def test_correlated_noise_first_output_flip(self):
        # Z2 xor Z3 xor Z1 drives Y1, so P(Y1 != X1 xor X2) = p1*p2*p3 chained
        ch = build_correlated_noise_gdmmac(0.09, 0.1, 0.07)
        flip = ch.kernel[0, 0].sum(axis=(1, 2))[1]
        conv = lambda a, b: a * (1 - b) + b * (1 - a)
        assert abs(flip - conv(0.09, conv(0.1, 0.07))) < 1e-15

    def test_correlated_noise_requires_positive(self):
        with pytest.raises(ValueError):
            build_correlated_noise_gdmmac(0.0, 0.1, 0.1)

    def test_kernel_normalization_enforced(self):
        b = Alphabet((0, 1))
        with pytest.raises(ValueError):
            Gdmmac(b, b, b, b, b, np.ones((2, 2, 2, 2, 2)))


class TestMarginalProduct:
    def test_per_output_marginals_preserved(self):
        ch = build_correlated_noise_gdmmac(0.2, 0.3, 0.1)
        prod = ch.marginal_product()
        for axis_keep in ((2,), (3,), (4,)):
            drop = tuple(a for a in (2, 3, 4) if a not in axis_keep)
            np.testing.assert_allclose(
                ch.kernel.sum(axis=drop), prod.kernel.sum(axis=drop), atol=1e-12
            )

    def test_breaks_output_correlation(self):
        ch = build_correlated_noise_gdmmac(0.2, 0.3, 0.1)
        prod = ch.marginal_product()
        assert not np.allclose(ch.kernel, prod.kernel)


class TestAuxDesign:
    def test_t_layer_all_or_none(self):
        base = example1_design()
        with pytest.raises(ValueError):
            AuxDesign(
                base.p_s12, base.p_s13, base.p_s21, base.p_s23,
                base.k_x1, base.k_x2,
                k_t12=np.ones((2, 3, 2, 1)),
            )

    def test_with_singleton_t_layer(self):
        ch = build_erasure_gdmmac(0.3, 0.3, 0.5, 0.1)
        lifted = example1_design().with_singleton_t_layer(ch)
        assert lifted.has_t_layer
        assert lifted.k_t12.shape == (2, 3, 2, 1)
        with pytest.raises(ValueError):
            lifted.with_singleton_t_layer(ch)

    def test_marginal_normalization(self):
        with pytest.raises(ValueError):
            AuxDesign(
                np.array([0.5, 0.6]),
                np.array([1.0]),
                np.array([1.0]),
                np.array([0.5, 0.5]),
                np.eye(2)[:, None, :],
                np.eye(2)[None, :, :],
            )


class TestInduceJoint:
    def test_input_kernel_reproduced(self):
        ch = build_binary_sum_gdmmac(0.1, 0.2, 0.3)
        design = example1_design()
        joint = induce_joint(ch, design)
        # S12 = X1 by construction
        m = marginalize(joint, ["S12", "X1"]).table
        np.testing.assert_allclose(m, np.eye(2) * 0.5, atol=1e-12)

    def test_auxiliaries_independent(self):
        ch = build_correlated_noise_gdmmac(0.1, 0.2, 0.3)
        params = Example3Params(0.2, 0.3, 0.1, 0.4, 0.25, 0.1, 0.2, 0.3)
        joint = induce_joint(ch, example3_design(params))
        assert cmi(joint, ["S12"], ["S13", "S21", "S23"]) < 1e-12

    def test_t_layer_local_processing(self):
        # T13 is produced from (X1, Y1, S13) only, so conditionally on them
        # it is independent of everything at the other terminal.
        ch = build_correlated_noise_gdmmac(0.1, 0.2, 0.3)
        params = Example3Params(0.2, 0.3, 0.1, 0.4, 0.25, 0.1, 0.2, 0.3)
        joint = induce_joint(ch, example3_design(params))
        leak = cmi(
            joint, ["T13"], ["X2", "Y2", "S21", "S23"], ["X1", "Y1", "S13"]
        )
        assert leak < 1e-12

    def test_variable_order(self):
        ch = build_erasure_gdmmac(0.3, 0.3, 0.5, 0.1)
        joint = induce_joint(ch, example1_design())
        assert joint.names == (
            "S12", "S13", "S21", "S23", "X1", "X2", "Y1", "Y2", "Y3",
        )

    def test_degraded_chain_structure(self):
        ch = build_correlated_noise_gdmmac(0.1, 0.2, 0.3)
        joint = induce_joint(ch, example1_design())
        holds, violation = is_markov_chain(
            joint, [["X1", "X2"], ["Y2"], ["Y3"], ["Y1"]]
        )
        assert holds, violation

    def test_shape_mismatch_rejected(self):
        ch = build_erasure_gdmmac(0.3, 0.3, 0.5, 0.1)
        bad = AuxDesign(
            np.array([0.5, 0.5]),
            np.array([1.0]),
            np.array([1.0]),
            np.array([1.0]),  # S23 singleton but k_x2 expects two symbols
            np.eye(2)[:, None, :],
            np.eye(2)[None, :, :],
        )
        with pytest.raises(ValueError):
            induce_joint(ch, bad)


class TestChannelJson:
    def test_family_round_trip(self):
        text = json.dumps(
            {"family": "binary_sum", "params": {"p1": 0.1, "p2": 0.2, "p3": 0.3}}
        )
        ch = channel_from_json(text)
        ref = build_binary_sum_gdmmac(0.1, 0.2, 0.3)
        np.testing.assert_allclose(ch.kernel, ref.kernel, atol=1e-15)

    def test_custom_round_trip(self):
        ref = build_erasure_gdmmac(0.3, 0.2, 0.5, 0.1)
        back = channel_from_json(channel_to_json(ref))
        np.testing.assert_allclose(back.kernel, ref.kernel, atol=1e-15)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            channel_from_json(json.dumps({"family": "nope"}))

    def test_missing_params(self):
        with pytest.raises(ValueError):
            channel_from_json(json.dumps({"family": "erasure", "params": {}}))
