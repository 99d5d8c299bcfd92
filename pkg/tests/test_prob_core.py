"""Tests for the finite probability calculus."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from keyregion.prob_core import (
    Alphabet,
    JointPMF,
    binary_convolution,
    binary_entropy,
    conditional_entropy,
    conditional_mutual_information,
    entropy,
    is_markov_chain,
    marginalize,
)

B = Alphabet((0, 1))


def random_joint(rng, shape, names):
    table = rng.random(shape)
    table /= table.sum()
    return JointPMF(tuple((n, Alphabet(tuple(range(k)))) for n, k in zip(names, shape)), table)


class TestAlphabet:
    def test_distinct_symbols_required(self):
        with pytest.raises(ValueError):
            Alphabet((0, 0, 1))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Alphabet(())

    def test_index(self):
        a = Alphabet(("x", "y", "z"))
        assert a.size == 3
        assert a.index("y") == 1


class TestJointPMF:
    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            JointPMF((("A", B),), np.ones((3,)) / 3)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            JointPMF((("A", B),), np.array([1.5, -0.5]))

    def test_normalization_enforced(self):
        with pytest.raises(ValueError):
            JointPMF((("A", B),), np.array([0.7, 0.7]))

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            JointPMF((("A", B), ("A", B)), np.ones((2, 2)) / 4)

    def test_json_round_trip(self):
        rng = np.random.default_rng(0)
        pmf = random_joint(rng, (2, 3), ("A", "B"))
        back = JointPMF.from_json(pmf.to_json())
        assert back.names == pmf.names
        np.testing.assert_allclose(back.table, pmf.table, atol=1e-15)

    def test_json_is_valid_payload(self):
        pmf = JointPMF((("A", B),), np.array([0.25, 0.75]))
        payload = json.loads(pmf.to_json())
        assert payload["variables"][0]["name"] == "A"
        assert payload["table"] == [0.25, 0.75]


class TestScalarHelpers:
    def test_binary_entropy_endpoints(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0
        assert binary_entropy(0.5) == 1.0

    def test_binary_entropy_quarter(self):
        want = -(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75))
        assert abs(binary_entropy(0.25) - want) < 1e-15

    def test_binary_entropy_domain(self):
        with pytest.raises(ValueError):
            binary_entropy(1.2)

    def test_convolution_identities(self):
        assert binary_convolution(0.3, 0.0) == 0.3
        assert binary_convolution(0.3, 0.5) == 0.5
        assert binary_convolution(0.3, 1.0) == 0.7

    @given(
        st.floats(0, 1), st.floats(0, 1), st.floats(0, 1)
    )
    def test_convolution_commutes_and_associates(self, a, b, c):
        assert abs(binary_convolution(a, b) - binary_convolution(b, a)) < 1e-12
        left = binary_convolution(binary_convolution(a, b), c)
        right = binary_convolution(a, binary_convolution(b, c))
        assert abs(left - right) < 1e-12


class TestMarginalizeEntropy:
    def test_marginalize_reorders(self):
        rng = np.random.default_rng(1)
        pmf = random_joint(rng, (2, 3, 2), ("A", "B", "C"))
        swapped = marginalize(pmf, ["C", "A"])
        assert swapped.names == ("C", "A")
        direct = pmf.table.sum(axis=1).T
        np.testing.assert_allclose(swapped.table, direct, atol=1e-12)

    def test_uniform_entropy(self):
        pmf = JointPMF((("A", Alphabet(tuple(range(8)))),), np.ones(8) / 8)
        assert abs(entropy(pmf, ["A"]) - 3.0) < 1e-12

    def test_entropy_requires_variables(self):
        pmf = JointPMF((("A", B),), np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            entropy(pmf, [])

    def test_conditional_entropy_of_copy_is_zero(self):
        table = np.zeros((2, 2))
        table[0, 0] = table[1, 1] = 0.5
        pmf = JointPMF((("A", B), ("B", B)), table)
        assert conditional_entropy(pmf, ["B"], ["A"]) < 1e-12


class TestMutualInformation:
    def test_disjointness_enforced(self):
        rng = np.random.default_rng(2)
        pmf = random_joint(rng, (2, 2), ("A", "B"))
        with pytest.raises(ValueError):
            conditional_mutual_information(pmf, ["A"], ["A"])

    def test_independent_variables(self):
        table = np.outer([0.3, 0.7], [0.6, 0.4])
        pmf = JointPMF((("A", B), ("B", B)), table)
        assert conditional_mutual_information(pmf, ["A"], ["B"]) < 1e-12

    def test_copy_gives_full_entropy(self):
        table = np.zeros((2, 2))
        table[0, 0], table[1, 1] = 0.25, 0.75
        pmf = JointPMF((("A", B), ("B", B)), table)
        mi = conditional_mutual_information(pmf, ["A"], ["B"])
        assert abs(mi - binary_entropy(0.25)) < 1e-12

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_chain_rule_and_symmetry(self, seed):
        rng = np.random.default_rng(seed)
        pmf = random_joint(rng, (2, 2, 2), ("A", "B", "C"))
        # chain rule
        h_ab = entropy(pmf, ["A", "B"])
        split = entropy(pmf, ["A"]) + conditional_entropy(pmf, ["B"], ["A"])
        assert abs(h_ab - split) < 1e-12
        # symmetry and nonnegativity
        ab = conditional_mutual_information(pmf, ["A"], ["B"], ["C"])
        ba = conditional_mutual_information(pmf, ["B"], ["A"], ["C"])
        assert abs(ab - ba) < 1e-12
        assert ab >= 0.0

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_brute_force_oracle(self, seed):
        rng = np.random.default_rng(seed)
        pmf = random_joint(rng, (2, 2), ("A", "B"))
        p = pmf.table
        pa, pb = p.sum(axis=1), p.sum(axis=0)
        want = sum(
            p[i, j] * math.log2(p[i, j] / (pa[i] * pb[j]))
            for i in range(2)
            for j in range(2)
            if p[i, j] > 0
        )
        got = conditional_mutual_information(pmf, ["A"], ["B"])
        assert abs(got - max(want, 0.0)) < 1e-12


class TestMarkovChain:
    def _chain_joint(self):
        # A -> B through BSC(0.1), B -> C through BSC(0.2)
        table = np.zeros((2, 2, 2))
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    pb = 0.9 if a == b else 0.1
                    pc = 0.8 if b == c else 0.2
                    table[a, b, c] = 0.5 * pb * pc
        return JointPMF((("A", B), ("B", B), ("C", B)), table)

    def test_true_chain_detected(self):
        holds, violation = is_markov_chain(self._chain_joint(), [["A"], ["B"], ["C"]])
        assert holds
        assert violation < 1e-12

    def test_broken_chain_detected(self):
        # A -> C directly, B independent: A-B-C fails
        table = np.zeros((2, 2, 2))
        for a in range(2):
            for b in range(2):
                table[a, b, a] = 0.25
        pmf = JointPMF((("A", B), ("B", B), ("C", B)), table)
        holds, violation = is_markov_chain(pmf, [["A"], ["B"], ["C"]])
        assert not holds
        assert violation > 0.9

    def test_needs_three_groups(self):
        with pytest.raises(ValueError):
            is_markov_chain(self._chain_joint(), [["A"], ["B"]])

    def test_groups_must_be_disjoint(self):
        with pytest.raises(ValueError):
            is_markov_chain(self._chain_joint(), [["A"], ["B"], ["A"]])
