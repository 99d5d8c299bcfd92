"""Closed-form rate expressions for the three worked channel families.

These scalar formulas serve as independent oracles for the generic
evaluators in :mod:`keyregion.regions` and as the data source for figure
reproduction. The matching auxiliary designs (the exact substitutions used
to derive each closed form) are provided alongside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import AuxDesign
from .prob_core import binary_convolution as conv, binary_entropy as h

__all__ = [
    "Example2Params",
    "Example3Params",
    "example1_capacity",
    "example1_design",
    "example2_inner",
    "example2_inner_formula",
    "example2_outer",
    "example2_design",
    "example3_f",
    "example3_inner",
    "example3_pregen",
    "example3_outer",
    "example3_design",
    "example3_pregen_design",
]


def _clamp(x: float) -> float:
    return max(x, 0.0)


def _check_unit_half(**params) -> None:
    for name, value in params.items():
        if not 0.0 <= value <= 0.5:
            raise ValueError(f"{name}={value} outside [0, 0.5]")


@dataclass(frozen=True)
class Example2Params:
    """Design parameters (alpha, beta) and crossovers for the binary-sum
    channel family, under the standing ordering p2 <= p3 <= p1."""

    alpha: float
    beta: float
    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        _check_unit_half(alpha=self.alpha, beta=self.beta,
                         p1=self.p1, p2=self.p2, p3=self.p3)
        if not self.p2 <= self.p3 <= self.p1:
            raise ValueError(
                f"crossovers must satisfy p2 <= p3 <= p1, got "
                f"({self.p1}, {self.p2}, {self.p3})"
            )


@dataclass(frozen=True)
class Example3Params:
    """Design parameters for the correlated-noise channel family."""

    alpha: float
    alpha_p: float
    alpha_pp: float
    beta: float
    beta_p: float
    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        _check_unit_half(
            alpha=self.alpha, alpha_p=self.alpha_p, alpha_pp=self.alpha_pp,
            beta=self.beta, beta_p=self.beta_p,
        )
        for name, p in (("p1", self.p1), ("p2", self.p2), ("p3", self.p3)):
            if not 0.0 < p <= 0.5:
                raise ValueError(f"{name}={p} outside (0, 0.5]")


def example1_capacity(p12: float, p13: float, p23: float) -> tuple:
    """Capacity-region corner of the erasure family: (p13-p12, 0, p12-p23)."""
    for name, p in (("p12", p12), ("p13", p13), ("p23", p23)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name}={p} outside [0, 1]")
    if not p13 >= p12 >= p23:
        raise ValueError(
            f"erasure probabilities must satisfy p13 >= p12 >= p23, got "
            f"({p12}, {p13}, {p23})"
        )
    return (p13 - p12, 0.0, p12 - p23)


def example1_design() -> AuxDesign:
    """The capacity-achieving substitution for the erasure family:
    S12 = X1 uniform, S23 = X2 uniform, S13 and S21 constant."""
    uniform = np.array([0.5, 0.5])
    const = np.array([1.0])
    ident = np.eye(2)
    return AuxDesign(
        p_s12=uniform,
        p_s13=const,
        p_s21=const,
        p_s23=uniform,
        k_x1=ident[:, None, :],  # x1 = s12
        k_x2=ident[None, :, :],  # x2 = s23
    )


def example2_inner_formula(
    alpha: float, beta: float, p1: float, p2: float, p3: float
) -> tuple:
    """The binary-sum achievable-rate expressions, without the crossover
    ordering precondition. The values are oracle-comparable against the
    generic evaluator for any crossovers; only the outer-bound argument
    needs the ordering."""
    _check_unit_half(alpha=alpha, beta=beta, p1=p1, p2=p2, p3=p3)
    a, b = alpha, beta
    r12 = h(conv(a, p2)) + h(conv(b, p3)) - h(conv(a, conv(b, p3))) - h(p2)
    r23 = h(conv(b, p1)) - h(conv(b, conv(a, p3)))
    return (_clamp(r12), 0.0, _clamp(r23))


def example2_inner(params: Example2Params) -> tuple:
    """Achievable bounds for the binary-sum family (clamped at zero)."""
    return example2_inner_formula(
        params.alpha, params.beta, params.p1, params.p2, params.p3
    )


def example2_outer(p1: float, p2: float, p3: float) -> tuple:
    """Outer bound for the binary-sum family: (1-h(p2), 0, h(p1)-h(p3))."""
    _check_unit_half(p1=p1, p2=p2, p3=p3)
    if not p2 <= p3 <= p1:
        raise ValueError(
            f"crossovers must satisfy p2 <= p3 <= p1, got ({p1}, {p2}, {p3})"
        )
    return (1.0 - h(p2), 0.0, h(p1) - h(p3))


def _bsc(p: float) -> np.ndarray:
    return np.array([[1.0 - p, p], [p, 1.0 - p]])


def example2_design(alpha: float, beta: float) -> AuxDesign:
    """The substitution behind the binary-sum inner bound: S12 = X1 with
    bias alpha, S13 and S21 constant, X2 uniform reached from a uniform S23
    through a crossover-beta symmetric channel."""
    _check_unit_half(alpha=alpha, beta=beta)
    const = np.array([1.0])
    return AuxDesign(
        p_s12=np.array([1.0 - alpha, alpha]),
        p_s13=const,
        p_s21=const,
        p_s23=np.array([0.5, 0.5]),
        k_x1=np.eye(2)[:, None, :],  # x1 = s12
        k_x2=_bsc(beta)[None, :, :],
    )


def example3_f(a: float, b: float, c: float) -> float:
    """Entropy in bits of the pair (A+B, A+C) for independent binary A, B, C
    with parameters a, b, c (addition modulo 2)."""
    for name, p in (("a", a), ("b", b), ("c", c)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name}={p} outside [0, 1]")
    na, nb, nc = 1.0 - a, 1.0 - b, 1.0 - c
    masses = (
        a * b * c + na * nb * nc,
        a * nb * c + na * b * nc,
        a * b * nc + na * nb * c,
        a * nb * nc + na * b * c,
    )
    return float(-sum(m * np.log2(m) for m in masses if m > 0.0))


def example3_inner(params: Example3Params) -> tuple:
    """Generalized-scheme bounds for the correlated-noise family.

    Returns (r12, r13, r23, feasible); the bounds are valid achievable rates
    only when both transmissibility constraints hold (feasible=True).
    """
    a, ap, app = params.alpha, params.alpha_p, params.alpha_pp
    b, bp = params.beta, params.beta_p
    p1, p2, p3 = params.p1, params.p2, params.p3
    hx = example3_f(conv(b, p2), p3, bp)
    hy = example3_f(conv(a, conv(b, p2)), p3, bp)
    hz = example3_f(conv(b, p2), conv(p1, p3), bp)
    r12 = _clamp(hx - hy - h(conv(ap, p2)) + h(conv(a, conv(ap, p2))))
    r13 = h(conv(p1, conv(p3, app))) - h(conv(p1, app))
    big = h(conv(b, conv(p1, conv(p2, p3))))
    small = h(conv(a, conv(b, conv(p2, p3))))
    r23 = _clamp(big - small) + _clamp(hz - hy + small - big)
    lhs = h(conv(app, p1)) - h(app)
    c1 = lhs <= h(conv(a, conv(ap, conv(b, conv(p2, p3))))) - small
    c2 = lhs + hy - h(bp) <= 1.0
    return (r12, r13, r23, bool(c1 and c2))


def example3_pregen(
    alpha: float, alpha_p: float, beta: float,
    p1: float, p2: float, p3: float,
) -> tuple:
    """Pre-generated-keys bounds for the correlated-noise family."""
    _check_unit_half(alpha=alpha, alpha_p=alpha_p, beta=beta)
    a, ap, b = alpha, alpha_p, beta
    r12 = _clamp(
        h(conv(b, conv(p2, p3)))
        - h(conv(a, conv(b, conv(p2, p3))))
        - h(conv(ap, p2))
        + h(conv(a, conv(ap, p2)))
    )
    r23 = _clamp(
        h(conv(b, conv(p1, conv(p2, p3)))) - h(conv(a, conv(b, conv(p2, p3))))
    )
    return (r12, 0.0, r23)


def example3_outer(p1: float, p2: float, p3: float) -> tuple:
    """Outer bound for the correlated-noise family."""
    for name, p in (("p1", p1), ("p2", p2), ("p3", p3)):
        if not 0.0 < p <= 0.5:
            raise ValueError(f"{name}={p} outside (0, 0.5]")
    p13 = conv(p1, p3)
    return (1.0 - h(p2), h(p13) - h(p1), h(p13) - h(p3))


def example3_design(params: Example3Params) -> AuxDesign:
    """The substitution behind the generalized bounds: X1 = S12 + S13 with
    biases (alpha, alpha'), X2 uniform reached from uniform S23 through a
    crossover-beta symmetric channel, T13 and T23 as noisy copies of Y1 and
    Y2 with crossovers alpha'' and beta', T12 and T21 constant."""
    a, ap = params.alpha, params.alpha_p
    const = np.array([1.0])
    # x1 = s12 xor s13
    k_x1 = np.zeros((2, 2, 2))
    for s12 in range(2):
        for s13 in range(2):
            k_x1[s12, s13, s12 ^ s13] = 1.0
    t_const12 = np.ones((2, 2, 2, 1))  # P(t12 | x1, y1, s12), singleton T12
    t_const21 = np.ones((2, 2, 1, 1))  # P(t21 | x2, y2, s21), singleton T21
    k_t13 = np.zeros((2, 2, 2, 2))  # P(t13 | x1, y1, s13) = BSC(alpha'') on y1
    k_t23 = np.zeros((2, 2, 2, 2))  # P(t23 | x2, y2, s23) = BSC(beta') on y2
    bsc13 = _bsc(params.alpha_pp)
    bsc23 = _bsc(params.beta_p)
    for y in range(2):
        k_t13[:, y, :, :] = bsc13[y][None, None, :]
        k_t23[:, y, :, :] = bsc23[y][None, None, :]
    return AuxDesign(
        p_s12=np.array([1.0 - a, a]),
        p_s13=np.array([1.0 - ap, ap]),
        p_s21=const,
        p_s23=np.array([0.5, 0.5]),
        k_x1=k_x1,
        k_x2=_bsc(params.beta)[None, :, :],
        k_t12=t_const12,
        k_t13=k_t13,
        k_t21=t_const21,
        k_t23=k_t23,
    )


def example3_pregen_design(alpha: float, alpha_p: float, beta: float) -> AuxDesign:
    """S-layer-only variant of :func:`example3_design`."""
    _check_unit_half(alpha=alpha, alpha_p=alpha_p, beta=beta)
    k_x1 = np.zeros((2, 2, 2))
    for s12 in range(2):
        for s13 in range(2):
            k_x1[s12, s13, s12 ^ s13] = 1.0
    return AuxDesign(
        p_s12=np.array([1.0 - alpha, alpha]),
        p_s13=np.array([1.0 - alpha_p, alpha_p]),
        p_s21=np.array([1.0]),
        p_s23=np.array([0.5, 0.5]),
        k_x1=k_x1,
        k_x2=_bsc(beta)[None, :, :],
    )
