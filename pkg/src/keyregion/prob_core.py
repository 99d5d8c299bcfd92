"""Exact probability calculus on finite joint distributions.

Everything here works on dense joint probability tables over named finite
random variables. All entropies and mutual informations are in bits
(base-2 logarithm) with the convention 0*log2(0) = 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-9
MI_CLAMP_TOL = 1e-9
DOMAIN_TOL = 1e-12

__all__ = [
    "Alphabet",
    "JointPMF",
    "binary_entropy",
    "binary_convolution",
    "marginalize",
    "entropy",
    "conditional_entropy",
    "conditional_mutual_information",
    "is_markov_chain",
]


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of distinct symbol labels for one random variable."""

    symbols: tuple

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(self.symbols) < 1:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be pairwise distinct")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol) -> int:
        return self.symbols.index(symbol)


BINARY = Alphabet((0, 1))


@dataclass(frozen=True)
class JointPMF:
    """Dense joint PMF over an ordered collection of named variables.

    ``variables`` is a tuple of (name, Alphabet) pairs; ``table`` has one
    axis per variable, in the same order, and sums to 1.
    """

    variables: tuple
    table: np.ndarray

    def __post_init__(self):
        variables = tuple((str(n), a) for n, a in self.variables)
        names = [n for n, _ in variables]
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        table = np.asarray(self.table, dtype=float)
        shape = tuple(a.size for _, a in variables)
        if table.shape != shape:
            raise ValueError(
                f"table shape {table.shape} does not match alphabets {shape}"
            )
        if table.min() < -DOMAIN_TOL:
            raise ValueError("probabilities must be nonnegative")
        table = np.clip(table, 0.0, None)
        total = table.sum()
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        table.setflags(write=False)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "table", table)

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.variables)

    def alphabet(self, name: str) -> Alphabet:
        for n, a in self.variables:
            if n == name:
                return a
        raise KeyError(name)

    def axes_of(self, names: Iterable[str]) -> tuple:
        order = self.names
        axes = []
        for n in names:
            if n not in order:
                raise KeyError(f"unknown variable {n!r}")
            axes.append(order.index(n))
        return tuple(axes)

    def to_json(self) -> str:
        payload = {
            "variables": [
                {"name": n, "symbols": list(a.symbols)} for n, a in self.variables
            ],
            "table": self.table.ravel().tolist(),
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "JointPMF":
        payload = json.loads(text)
        variables = tuple(
            (v["name"], Alphabet(tuple(v["symbols"]))) for v in payload["variables"]
        )
        shape = tuple(a.size for _, a in variables)
        table = np.asarray(payload["table"], dtype=float).reshape(shape)
        return cls(variables, table)


def binary_entropy(p: float) -> float:
    """Entropy in bits of a Bernoulli(p) variable."""
    if p < -DOMAIN_TOL or p > 1.0 + DOMAIN_TOL:
        raise ValueError(f"probability {p} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    out = 0.0
    if p > 0.0:
        out -= p * np.log2(p)
    if p < 1.0:
        out -= (1.0 - p) * np.log2(1.0 - p)
    return float(out)


def binary_convolution(a: float, b: float) -> float:
    """Crossover probability of two cascaded binary symmetric channels."""
    for p in (a, b):
        if p < -DOMAIN_TOL or p > 1.0 + DOMAIN_TOL:
            raise ValueError(f"probability {p} outside [0, 1]")
    a = min(max(a, 0.0), 1.0)
    b = min(max(b, 0.0), 1.0)
    return a * (1.0 - b) + b * (1.0 - a)


def marginalize(pmf: JointPMF, keep: Iterable[str]) -> JointPMF:
    """Sum out every variable not listed in ``keep``."""
    keep = list(keep)
    keep_axes = set(pmf.axes_of(keep))
    drop_axes = tuple(i for i in range(len(pmf.names)) if i not in keep_axes)
    table = pmf.table.sum(axis=drop_axes) if drop_axes else pmf.table
    # Reorder to the caller's requested variable order.
    kept_names = [n for n in pmf.names if n in set(keep)]
    perm = [kept_names.index(n) for n in keep]
    table = np.transpose(table, perm)
    variables = tuple((n, pmf.alphabet(n)) for n in keep)
    return JointPMF(variables, table / table.sum())


def _entropy_of_table(table: np.ndarray) -> float:
    flat = table.ravel()
    nz = flat[flat > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def entropy(pmf: JointPMF, vars: Iterable[str]) -> float:
    """Joint entropy in bits of the marginal on ``vars``."""
    vars = list(vars)
    if not vars:
        raise ValueError("entropy requires a nonempty variable set")
    axes = set(pmf.axes_of(vars))
    drop = tuple(i for i in range(len(pmf.names)) if i not in axes)
    table = pmf.table.sum(axis=drop) if drop else pmf.table
    return _entropy_of_table(np.asarray(table))


def conditional_entropy(pmf: JointPMF, a: Iterable[str], c: Iterable[str]) -> float:
    """H(A | C) in bits; C may be empty."""
    a, c = list(a), list(c)
    if not c:
        return entropy(pmf, a)
    return entropy(pmf, a + c) - entropy(pmf, c)


def conditional_mutual_information(
    pmf: JointPMF,
    a: Iterable[str],
    b: Iterable[str],
    c: Iterable[str] = (),
) -> float:
    """I(A; B | C) in bits, with tiny negatives clamped to zero."""
    a, b, c = list(a), list(b), list(c)
    if not a or not b:
        raise ValueError("both argument sets must be nonempty")
    pooled = a + b + c
    if len(set(pooled)) != len(pooled):
        raise ValueError("argument sets must be pairwise disjoint")
    value = (
        entropy(pmf, a + c)
        + entropy(pmf, b + c)
        - entropy(pmf, pooled)
        - (entropy(pmf, c) if c else 0.0)
    )
    if value < -MI_CLAMP_TOL:
        raise ValueError(f"mutual information {value} below clamp tolerance")
    return max(value, 0.0)


def is_markov_chain(
    pmf: JointPMF,
    chain: Sequence[Iterable[str]],
    tol: float = 1e-9,
) -> tuple:
    """Check whether the variable groups form a Markov chain.

    For each position i, tests I(chain[i]; chain[i+2:] | chain[i+1]) <= tol.
    Returns (holds, max_violation_bits).
    """
    groups = [list(g) for g in chain]
    if len(groups) < 3:
        raise ValueError("a Markov chain needs at least three groups")
    if any(not g for g in groups):
        raise ValueError("chain groups must be nonempty")
    pooled = [n for g in groups for n in g]
    if len(set(pooled)) != len(pooled):
        raise ValueError("chain groups must be disjoint")
    worst = 0.0
    for i in range(len(groups) - 2):
        future = [n for g in groups[i + 2 :] for n in g]
        worst = max(
            worst,
            conditional_mutual_information(pmf, groups[i], future, groups[i + 1]),
        )
    return worst <= tol, worst
