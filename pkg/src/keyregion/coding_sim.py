"""Finite-blocklength Monte Carlo simulation of the pre-generated-keys scheme.

One block of n channel uses: each transmitting user draws key and
randomization indices uniformly, picks the addressed codeword from a random
wiretap codebook, sends through the channel, and every receiver decodes by
strong-typicality matching. Leakage is diagnosed with a bucketed plug-in
mutual-information estimate.

All randomness is derived from a counter-based generator keyed by
(seed, stream, trial), so results are reproducible under any execution
schedule.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import chi2

from .channels import AuxDesign, Gdmmac, induce_joint
from .prob_core import JointPMF, marginalize

__all__ = [
    "BudgetError",
    "RateQuad",
    "SimConfig",
    "Codebook",
    "TrialOutcome",
    "LeakageEstimate",
    "SimulationReport",
    "generate_codebooks",
    "run_trial",
    "simulate",
    "plug_in_leakage",
]

class BudgetError(ValueError):
    """Raised when a run would exceed its configured enumeration budget."""


PAIRS = ("s12", "s21", "s13", "s23")
LEAKAGE_BUCKETS = 4096  # 2^12 observation buckets for the plug-in estimator
DEFAULT_BUDGET = 100_000_000
CHI2_REJECT_P = 1e-6

# RNG stream identifiers
_STREAM_CODEBOOK = {"s12": 0, "s21": 1, "s13": 2, "s23": 3}
_STREAM_KEYS = 8
_STREAM_INPUTS = 9
_STREAM_CHANNEL = 10


def _rng(seed: int, stream: int, trial: int = 0) -> np.random.Generator:
    key = np.array(
        [np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64((stream << 40) ^ trial)],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class RateQuad:
    """One rate per key pair, in bits per channel use."""

    r12: float = 0.0
    r21: float = 0.0
    r13: float = 0.0
    r23: float = 0.0

    def __post_init__(self):
        if min(self.r12, self.r21, self.r13, self.r23) < 0:
            raise ValueError("rates must be nonnegative")

    def of(self, pair: str) -> float:
        return getattr(self, "r" + pair[1:])

    def scaled(self, factor: float) -> "RateQuad":
        return RateQuad(
            self.r12 * factor, self.r21 * factor, self.r13 * factor, self.r23 * factor
        )


def _codebook_size(n: int, rate: float) -> int:
    return max(1, int(math.floor(2.0 ** (n * rate))))


@dataclass(frozen=True)
class SimConfig:
    channel: Gdmmac
    design: AuxDesign
    n: int
    key_rates: RateQuad
    randomization_rates: RateQuad
    trials: int
    seed: int
    epsilon_typ: float = 0.15
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("blocklength must be at least 1")
        if self.trials < 1:
            raise ValueError("trial count must be positive")
        if self.epsilon_typ < 0:
            raise ValueError("typicality slack must be nonnegative")
        if self.design.has_t_layer:
            raise ValueError("the simulator runs the S-layer scheme only")
        cost = self.enumeration_cost()
        if cost > self.budget:
            raise BudgetError(f"enumeration cost {cost} exceeds budget {self.budget}")

    def codebook_shape(self, pair: str) -> tuple:
        return (
            _codebook_size(self.n, self.key_rates.of(pair)),
            _codebook_size(self.n, self.randomization_rates.of(pair)),
        )

    def enumeration_cost(self) -> int:
        sizes = {p: np.prod(self.codebook_shape(p)) for p in PAIRS}
        # User 3 enumerates codeword pairs from the two codebooks it decodes.
        per_trial = sizes["s12"] + sizes["s21"] + sizes["s13"] * sizes["s23"]
        return int(per_trial * self.trials * self.n)


@dataclass(frozen=True)
class Codebook:
    """Indexed codeword families; entries[pair] has shape (keys, rand, n)
    holding auxiliary-symbol indices."""

    entries: dict

    def sequence(self, pair: str, key: int, rand: int) -> np.ndarray:
        return self.entries[pair][key, rand]


def _chi_square_sanity(draws: np.ndarray, p: np.ndarray, what: str) -> None:
    support = np.flatnonzero(p > 0)
    if support.size < 2:
        return
    counts = np.bincount(draws.ravel(), minlength=p.size)[support]
    expected = p[support] * draws.size
    if expected.min() < 5:
        return
    stat = float(np.sum((counts - expected) ** 2 / expected))
    pval = float(chi2.sf(stat, df=support.size - 1))
    if pval < CHI2_REJECT_P:
        raise RuntimeError(
            f"codebook {what}: symbol frequencies fail chi-square sanity "
            f"(p={pval:.2e})"
        )


def generate_codebooks(config: SimConfig) -> Codebook:
    """Draw the four independent wiretap codebooks, i.i.d. per symbol."""
    marginals = {
        "s12": config.design.p_s12,
        "s21": config.design.p_s21,
        "s13": config.design.p_s13,
        "s23": config.design.p_s23,
    }
    entries = {}
    for pair in PAIRS:
        keys, rand = config.codebook_shape(pair)
        p = marginals[pair]
        gen = _rng(config.seed, _STREAM_CODEBOOK[pair])
        draws = gen.choice(p.size, size=(keys, rand, config.n), p=p)
        _chi_square_sanity(draws, p, pair)
        entries[pair] = draws
    return Codebook(entries)


def _sample_rows(rows: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    """Sample one category per row of a (n, k) stochastic matrix."""
    cum = np.cumsum(rows, axis=1)
    u = gen.random(rows.shape[0])
    return (u[:, None] > cum).sum(axis=1).clip(0, rows.shape[1] - 1)


def _type_distances(
    base: np.ndarray, candidates: np.ndarray, n_cells: int, target_flat: np.ndarray
) -> np.ndarray:
    """L-infinity distance between each candidate's empirical joint type and
    the target joint. ``base`` carries the receiver's own symbols, already
    scaled so that cell index = base[i] + candidate_symbol[i]."""
    m, n = candidates.shape
    idx = base[None, :] + candidates + np.arange(m)[:, None] * n_cells
    counts = np.bincount(idx.ravel(), minlength=m * n_cells).reshape(m, n_cells)
    return np.abs(counts / n - target_flat[None, :]).max(axis=1)


def _accepts(distances: np.ndarray, eps: float, rand_size: int, key: int) -> bool:
    """Nearest-codeword acceptance.

    The minimum distance must lie within the slack and every codeword
    attaining it must carry the same, correct key index. Codewords of one
    key differ only in the randomization index, so a tie among them still
    determines the key; a tie across distinct keys is ambiguous and counts
    as an error.
    """
    dmin = distances.min()
    if dmin > eps:
        return False
    nearest_keys = set(np.flatnonzero(distances == dmin) // rand_size)
    return nearest_keys == {key}


def _accepts_pair(
    distances: np.ndarray, eps: float, rand_sizes: tuple, keys: tuple
) -> bool:
    """Pair variant of :func:`_accepts` over a (codewords, codewords) grid."""
    dmin = distances.min()
    if dmin > eps:
        return False
    nearest_keys = {
        (int(a) // rand_sizes[0], int(b) // rand_sizes[1])
        for a, b in np.argwhere(distances == dmin)
    }
    return nearest_keys == {keys}


def _conditional_rows(table: np.ndarray, n_obs: int) -> np.ndarray:
    """P(candidate symbols | observation cell) as rows of a (n_obs, k)
    matrix; observation cells of probability zero get all-zero rows."""
    rows = table.reshape(n_obs, -1)
    totals = rows.sum(axis=1, keepdims=True)
    return np.divide(rows, totals, out=np.zeros_like(rows), where=totals > 0)


@dataclass(frozen=True)
class _DecodeTargets:
    """Model conditionals P(candidate | observation) for the three decoders.

    Scoring a candidate against the observed empirical marginal composed
    with the model conditional, rather than against the model joint,
    removes the observation's own sampling fluctuation; it is shared by
    every candidate and carries no information about which codeword was
    sent.
    """

    user1: np.ndarray  # P(s21 | x1, y1), rows indexed by x1 * |Y1| + y1
    user2: np.ndarray  # P(s12 | x2, y2), rows indexed by x2 * |Y2| + y2
    user3: np.ndarray  # P(s13, s23 | y3), rows indexed by y3


def _decode_targets(config: SimConfig) -> _DecodeTargets:
    joint = induce_joint(config.channel, config.design)
    nx1 = config.channel.x1_alphabet.size
    ny1 = config.channel.y1_alphabet.size
    nx2 = config.channel.x2_alphabet.size
    ny2 = config.channel.y2_alphabet.size
    ny3 = config.channel.y3_alphabet.size
    return _DecodeTargets(
        user1=_conditional_rows(
            marginalize(joint, ["X1", "Y1", "S21"]).table, nx1 * ny1
        ),
        user2=_conditional_rows(
            marginalize(joint, ["X2", "Y2", "S12"]).table, nx2 * ny2
        ),
        user3=_conditional_rows(
            marginalize(joint, ["Y3", "S13", "S23"]).table, ny3
        ),
    )


def _composed_target(obs_index: np.ndarray, cond: np.ndarray) -> np.ndarray:
    """Flattened target joint: empirical observation marginal times the
    model conditional of the candidate symbols."""
    n = obs_index.size
    obs_hat = np.bincount(obs_index, minlength=cond.shape[0]) / n
    return (obs_hat[:, None] * cond).ravel()


@dataclass(frozen=True)
class TrialOutcome:
    keys: dict  # pair -> (key index, randomization index)
    error_u1: bool  # User 1 failed to recover s21's key
    error_u2: bool  # User 2 failed to recover s12's key
    error_u3: bool  # User 3 failed to recover the (s13, s23) key pair
    x1: np.ndarray
    x2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    y3: np.ndarray


def run_trial(
    codebook: Codebook,
    config: SimConfig,
    trial_index: int,
    targets: Optional[_DecodeTargets] = None,
) -> TrialOutcome:
    """Encode uniformly drawn keys, transmit one block, decode at all users.

    Each decoder ranks candidates by the distance between the empirical
    joint type and the target joint and succeeds only when the nearest
    codewords (or codeword pairs, for the third user) lie within
    epsilon_typ and all carry the single correct key index; no candidate
    within the slack, a wrong nearest codeword, and ties across distinct
    keys all count as errors.
    """
    if targets is None:
        targets = _decode_targets(config)
    design, channel, n = config.design, config.channel, config.n

    key_gen = _rng(config.seed, _STREAM_KEYS, trial_index)
    chosen = {}
    for pair in PAIRS:
        keys, rand = config.codebook_shape(pair)
        chosen[pair] = (int(key_gen.integers(keys)), int(key_gen.integers(rand)))
    s12 = codebook.sequence("s12", *chosen["s12"])
    s21 = codebook.sequence("s21", *chosen["s21"])
    s13 = codebook.sequence("s13", *chosen["s13"])
    s23 = codebook.sequence("s23", *chosen["s23"])

    input_gen = _rng(config.seed, _STREAM_INPUTS, trial_index)
    x1 = _sample_rows(design.k_x1[s12, s13], input_gen)
    x2 = _sample_rows(design.k_x2[s21, s23], input_gen)

    ny1 = channel.y1_alphabet.size
    ny2 = channel.y2_alphabet.size
    ny3 = channel.y3_alphabet.size
    noise_gen = _rng(config.seed, _STREAM_CHANNEL, trial_index)
    flat = _sample_rows(channel.kernel[x1, x2].reshape(n, ny1 * ny2 * ny3), noise_gen)
    y1, y2, y3 = np.unravel_index(flat, (ny1, ny2, ny3))

    eps = config.epsilon_typ

    # User 1 decodes s21 from (x1, y1).
    ns21 = design.p_s21.size
    book21 = codebook.entries["s21"]
    cells1 = channel.x1_alphabet.size * ny1 * ns21
    obs1 = x1 * ny1 + y1
    target1 = _composed_target(obs1, targets.user1)
    d1 = _type_distances(obs1 * ns21, book21.reshape(-1, n), cells1, target1)
    error_u1 = not _accepts(d1, eps, book21.shape[1], chosen["s21"][0])

    # User 2 decodes s12 from (x2, y2).
    ns12 = design.p_s12.size
    book12 = codebook.entries["s12"]
    cells2 = channel.x2_alphabet.size * ny2 * ns12
    obs2 = x2 * ny2 + y2
    target2 = _composed_target(obs2, targets.user2)
    d2 = _type_distances(obs2 * ns12, book12.reshape(-1, n), cells2, target2)
    error_u2 = not _accepts(d2, eps, book12.shape[1], chosen["s12"][0])

    # User 3 decodes the (s13, s23) pair from y3.
    ns13, ns23 = design.p_s13.size, design.p_s23.size
    book13 = codebook.entries["s13"].reshape(-1, n)
    book23 = codebook.entries["s23"].reshape(-1, n)
    cells3 = ny3 * ns13 * ns23
    target3 = _composed_target(np.asarray(y3), targets.user3)
    d3 = np.empty((book13.shape[0], book23.shape[0]))
    for a in range(book13.shape[0]):
        base3 = (y3 * ns13 + book13[a]) * ns23
        d3[a] = _type_distances(base3, book23, cells3, target3)
    rand13 = codebook.entries["s13"].shape[1]
    rand23 = codebook.entries["s23"].shape[1]
    error_u3 = not _accepts_pair(
        d3, eps, (rand13, rand23), (chosen["s13"][0], chosen["s23"][0])
    )

    return TrialOutcome(
        keys=chosen,
        error_u1=error_u1,
        error_u2=error_u2,
        error_u3=error_u3,
        x1=x1,
        x2=x2,
        y1=np.asarray(y1),
        y2=np.asarray(y2),
        y3=np.asarray(y3),
    )


@dataclass(frozen=True)
class LeakageEstimate:
    """Plug-in mutual information between a key tuple and a bucketed
    observation, with its first-order bias diagnostics."""

    bits: float  # raw plug-in estimate
    corrected_bits: float  # max(0, raw - Miller-Madow bias)
    bias_bound: float  # (buckets - 1) / (2 m ln 2)
    degenerate: bool  # fewer than two distinct key values seen

    def __float__(self) -> float:
        return self.bits


def plug_in_leakage(samples: list, n_buckets: Optional[int] = None) -> LeakageEstimate:
    """Estimate I(key; observation) in bits from (key, observation) samples.

    The raw estimate is the plug-in mutual information of the empirical
    joint. The reported correction subtracts the Miller-Madow first-order
    bias (distinct_keys - 1)(occupied_buckets - 1) / (2 m ln 2); the plain
    bucket-count bias bound is reported alongside.
    """
    m = len(samples)
    if m < 2:
        raise ValueError("need at least two samples")
    counts = {}
    for key, obs in samples:
        counts[(key, obs)] = counts.get((key, obs), 0) + 1
    key_tot = {}
    obs_tot = {}
    for (key, obs), c in counts.items():
        key_tot[key] = key_tot.get(key, 0) + c
        obs_tot[obs] = obs_tot.get(obs, 0) + c
    buckets = n_buckets if n_buckets is not None else len(obs_tot)
    bias_bound = (buckets - 1) / (2.0 * m * math.log(2.0))
    if len(key_tot) < 2:
        return LeakageEstimate(0.0, 0.0, bias_bound, degenerate=True)
    mi = 0.0
    for (key, obs), c in counts.items():
        p = c / m
        mi += p * math.log2(p * m * m / (key_tot[key] * obs_tot[obs]))
    mi = max(mi, 0.0)
    mm_bias = (len(key_tot) - 1) * (len(obs_tot) - 1) / (2.0 * m * math.log(2.0))
    return LeakageEstimate(mi, max(mi - mm_bias, 0.0), bias_bound, degenerate=False)


def _bucket(*seqs: np.ndarray) -> int:
    data = b"".join(np.ascontiguousarray(s, dtype=np.int64).tobytes() for s in seqs)
    digest = hashlib.blake2b(data, digest_size=8).digest()
    return int.from_bytes(digest, "little") % LEAKAGE_BUCKETS


@dataclass(frozen=True)
class SimulationReport:
    error_rates: dict  # {"u1", "u2", "u3"}
    leakage_bits: dict  # {"k12", "k13", "k23"} -> LeakageEstimate
    trials: int
    seed: int
    runtime_ms: float
    config_echo: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "config_echo": self.config_echo,
            "errors": self.error_rates,
            "leakage_bits": {
                k: v.corrected_bits for k, v in self.leakage_bits.items()
            },
            "leakage_raw_bits": {k: v.bits for k, v in self.leakage_bits.items()},
            "leakage_bias_bound": max(
                v.bias_bound for v in self.leakage_bits.values()
            ),
            "trials": self.trials,
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def simulate(config: SimConfig) -> SimulationReport:
    """Run the configured number of independent single-block trials."""
    start = time.perf_counter()
    codebook = generate_codebooks(config)
    targets = _decode_targets(config)
    errors = np.zeros(3, dtype=int)
    samples_k12 = []
    samples_k13 = []
    samples_k23 = []
    for t in range(config.trials):
        out = run_trial(codebook, config, t, targets)
        errors += (out.error_u1, out.error_u2, out.error_u3)
        samples_k12.append(
            ((out.keys["s12"][0], out.keys["s21"][0]), _bucket(out.y3))
        )
        samples_k13.append((out.keys["s13"][0], _bucket(out.x2, out.y2)))
        samples_k23.append((out.keys["s23"][0], _bucket(out.x1, out.y1)))
    if config.trials >= 2:
        leakage = {
            "k12": plug_in_leakage(samples_k12, LEAKAGE_BUCKETS),
            "k13": plug_in_leakage(samples_k13, LEAKAGE_BUCKETS),
            "k23": plug_in_leakage(samples_k23, LEAKAGE_BUCKETS),
        }
    else:
        # Too few samples for any estimate; report a flagged zero.
        bias = (LEAKAGE_BUCKETS - 1) / (2.0 * config.trials * math.log(2.0))
        degenerate = LeakageEstimate(0.0, 0.0, bias, degenerate=True)
        leakage = {"k12": degenerate, "k13": degenerate, "k23": degenerate}
    runtime_ms = (time.perf_counter() - start) * 1000.0
    echo = {
        "n": config.n,
        "trials": config.trials,
        "seed": config.seed,
        "epsilon_typ": config.epsilon_typ,
        "key_rates": {p: config.key_rates.of(p) for p in PAIRS},
        "randomization_rates": {
            p: config.randomization_rates.of(p) for p in PAIRS
        },
    }
    return SimulationReport(
        error_rates={
            "u1": errors[0] / config.trials,
            "u2": errors[1] / config.trials,
            "u3": errors[2] / config.trials,
        },
        leakage_bits=leakage,
        trials=config.trials,
        seed=config.seed,
        runtime_ms=runtime_ms,
        config_echo=echo,
    )
