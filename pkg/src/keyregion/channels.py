"""Three-receiver multiple-access channel models and auxiliary designs.

A :class:`Gdmmac` is the memoryless kernel P(y1, y2, y3 | x1, x2) over finite
alphabets. An :class:`AuxDesign` fixes the distributions of the independent
auxiliary variables S12, S13, S21, S23 (and optionally T12, T13, T21, T23)
together with the input kernels P(x1 | s12, s13) and P(x2 | s21, s23);
composing a design with a channel yields the full joint PMF used by the
rate-region evaluators.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .prob_core import Alphabet, JointPMF, NORM_TOL

__all__ = [
    "Gdmmac",
    "AuxDesign",
    "build_erasure_gdmmac",
    "build_binary_sum_gdmmac",
    "build_correlated_noise_gdmmac",
    "induce_joint",
    "channel_from_json",
    "channel_to_json",
]

S_NAMES = ("S12", "S13", "S21", "S23")
T_NAMES = ("T12", "T13", "T21", "T23")
XY_NAMES = ("X1", "X2", "Y1", "Y2", "Y3")


def _check_kernel(kernel: np.ndarray, cond_ndim: int, what: str) -> np.ndarray:
    kernel = np.asarray(kernel, dtype=float)
    if kernel.min() < 0:
        raise ValueError(f"{what}: negative probability entry")
    sums = kernel.sum(axis=tuple(range(cond_ndim, kernel.ndim)))
    if np.max(np.abs(sums - 1.0)) > NORM_TOL:
        raise ValueError(f"{what}: conditional slices must each sum to 1")
    return kernel


@dataclass(frozen=True)
class Gdmmac:
    """Memoryless channel kernel P(y1, y2, y3 | x1, x2)."""

    x1_alphabet: Alphabet
    x2_alphabet: Alphabet
    y1_alphabet: Alphabet
    y2_alphabet: Alphabet
    y3_alphabet: Alphabet
    kernel: np.ndarray  # shape (|X1|, |X2|, |Y1|, |Y2|, |Y3|)

    def __post_init__(self):
        shape = (
            self.x1_alphabet.size,
            self.x2_alphabet.size,
            self.y1_alphabet.size,
            self.y2_alphabet.size,
            self.y3_alphabet.size,
        )
        kernel = np.asarray(self.kernel, dtype=float)
        if kernel.shape != shape:
            raise ValueError(f"kernel shape {kernel.shape}, expected {shape}")
        kernel = _check_kernel(kernel, 2, "channel kernel")
        kernel.setflags(write=False)
        object.__setattr__(self, "kernel", kernel)

    @property
    def output_alphabets(self) -> tuple:
        return (self.y1_alphabet, self.y2_alphabet, self.y3_alphabet)

    def marginal_product(self) -> "Gdmmac":
        """Replace the kernel by the product of its per-output marginals."""
        k = self.kernel
        p1 = k.sum(axis=(3, 4))
        p2 = k.sum(axis=(2, 4))
        p3 = k.sum(axis=(2, 3))
        product = (
            p1[:, :, :, None, None] * p2[:, :, None, :, None] * p3[:, :, None, None, :]
        )
        return Gdmmac(
            self.x1_alphabet,
            self.x2_alphabet,
            self.y1_alphabet,
            self.y2_alphabet,
            self.y3_alphabet,
            product,
        )


@dataclass(frozen=True)
class AuxDesign:
    """Auxiliary-variable design: independent S marginals, input kernels and
    an optional T layer of output-processing kernels."""

    p_s12: np.ndarray
    p_s13: np.ndarray
    p_s21: np.ndarray
    p_s23: np.ndarray
    k_x1: np.ndarray  # P(x1 | s12, s13), shape (|S12|, |S13|, |X1|)
    k_x2: np.ndarray  # P(x2 | s21, s23), shape (|S21|, |S23|, |X2|)
    k_t12: Optional[np.ndarray] = None  # P(t12 | x1, y1, s12)
    k_t13: Optional[np.ndarray] = None  # P(t13 | x1, y1, s13)
    k_t21: Optional[np.ndarray] = None  # P(t21 | x2, y2, s21)
    k_t23: Optional[np.ndarray] = None  # P(t23 | x2, y2, s23)

    def __post_init__(self):
        for attr in ("p_s12", "p_s13", "p_s21", "p_s23"):
            p = np.asarray(getattr(self, attr), dtype=float)
            _check_kernel(p, 0, attr)
            p.setflags(write=False)
            object.__setattr__(self, attr, p)
        for attr, cond in (("k_x1", 2), ("k_x2", 2)):
            k = _check_kernel(getattr(self, attr), cond, attr)
            k.setflags(write=False)
            object.__setattr__(self, attr, k)
        t_kernels = [self.k_t12, self.k_t13, self.k_t21, self.k_t23]
        present = [k is not None for k in t_kernels]
        if any(present) and not all(present):
            raise ValueError("T-layer kernels must be all present or all absent")
        if all(present):
            for attr in ("k_t12", "k_t13", "k_t21", "k_t23"):
                k = _check_kernel(getattr(self, attr), 3, attr)
                k.setflags(write=False)
                object.__setattr__(self, attr, k)

    @property
    def has_t_layer(self) -> bool:
        return self.k_t12 is not None

    def with_singleton_t_layer(self, channel: "Gdmmac") -> "AuxDesign":
        """Attach constant (size-1) T variables, sized for ``channel``."""
        if self.has_t_layer:
            raise ValueError("design already has a T layer")

        def ones(x: Alphabet, y: Alphabet, s: np.ndarray) -> np.ndarray:
            return np.ones((x.size, y.size, s.size, 1))

        return AuxDesign(
            self.p_s12,
            self.p_s13,
            self.p_s21,
            self.p_s23,
            self.k_x1,
            self.k_x2,
            k_t12=ones(channel.x1_alphabet, channel.y1_alphabet, self.p_s12),
            k_t13=ones(channel.x1_alphabet, channel.y1_alphabet, self.p_s13),
            k_t21=ones(channel.x2_alphabet, channel.y2_alphabet, self.p_s21),
            k_t23=ones(channel.x2_alphabet, channel.y2_alphabet, self.p_s23),
        )


def _erasure_output(p_erase: float) -> np.ndarray:
    """P(out | in) for the {-1,+1} -> {-1,0,+1} erasure map."""
    # rows: input index over (-1, +1); cols: output index over (-1, 0, +1)
    k = np.zeros((2, 3))
    k[0, 0] = 1.0 - p_erase
    k[0, 1] = p_erase
    k[1, 2] = 1.0 - p_erase
    k[1, 1] = p_erase
    return k


def build_erasure_gdmmac(p12: float, p21: float, p13: float, p23: float) -> Gdmmac:
    """Erasure channel family: each user receives erased copies of inputs.

    Y1 = X2*E21, Y2 = X1*E12 and Y3 = (X1*E13, X2*E23) with independent
    erasure indicators, Pr(Eij = 0) = pij. Y3 is a single composite variable
    over the 9 output pairs.
    """
    for p in (p12, p21, p13, p23):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"erasure probability {p} outside [0, 1]")
    xin = Alphabet((-1, 1))
    yout = Alphabet((-1, 0, 1))
    ypair = Alphabet(tuple(itertools.product((-1, 0, 1), repeat=2)))
    k21 = _erasure_output(p21)
    k12 = _erasure_output(p12)
    k13 = _erasure_output(p13)
    k23 = _erasure_output(p23)
    kernel = np.zeros((2, 2, 3, 3, 9))
    for ix1, ix2 in itertools.product(range(2), range(2)):
        y3 = np.outer(k13[ix1], k23[ix2]).ravel()  # pair index = 3*a + b
        kernel[ix1, ix2] = (
            k21[ix2][:, None, None] * k12[ix1][None, :, None] * y3[None, None, :]
        )
    return Gdmmac(xin, xin, yout, yout, ypair, kernel)


def _bsc(p: float) -> np.ndarray:
    return np.array([[1.0 - p, p], [p, 1.0 - p]])


def build_binary_sum_gdmmac(p1: float, p2: float, p3: float) -> Gdmmac:
    """Binary channel family with Yi = X1 xor X2 xor Zi, Zi ~ Bernoulli(pi)."""
    for p in (p1, p2, p3):
        if not 0.0 <= p <= 0.5:
            raise ValueError(f"crossover probability {p} outside [0, 0.5]")
    b = Alphabet((0, 1))
    flips = [_bsc(p1), _bsc(p2), _bsc(p3)]
    kernel = np.zeros((2, 2, 2, 2, 2))
    for ix1, ix2 in itertools.product(range(2), range(2)):
        s = ix1 ^ ix2
        kernel[ix1, ix2] = (
            flips[0][s][:, None, None]
            * flips[1][s][None, :, None]
            * flips[2][s][None, None, :]
        )
    return Gdmmac(b, b, b, b, b, kernel)


def build_correlated_noise_gdmmac(p1: float, p2: float, p3: float) -> Gdmmac:
    """Binary channel family with physically degraded, correlated noise.

    Y2 = X1 xor X2 xor Z2, Y3 = Y2 xor Z3, Y1 = Y3 xor Z1 with independent
    Zi ~ Bernoulli(pi); the outputs are correlated given the inputs.
    """
    for p in (p1, p2, p3):
        if not 0.0 < p <= 0.5:
            raise ValueError(f"crossover probability {p} outside (0, 0.5]")
    b = Alphabet((0, 1))
    kernel = np.zeros((2, 2, 2, 2, 2))
    for ix1, ix2, z1, z2, z3 in itertools.product(range(2), repeat=5):
        w = (
            (p1 if z1 else 1 - p1)
            * (p2 if z2 else 1 - p2)
            * (p3 if z3 else 1 - p3)
        )
        y2 = ix1 ^ ix2 ^ z2
        y3 = y2 ^ z3
        y1 = y3 ^ z1
        kernel[ix1, ix2, y1, y2, y3] += w
    return Gdmmac(b, b, b, b, b, kernel)


def induce_joint(channel: Gdmmac, design: AuxDesign) -> JointPMF:
    """Compose a design with a channel into the full joint PMF.

    The variable order is (S12, S13, S21, S23, X1, X2, Y1, Y2, Y3) followed
    by (T12, T13, T21, T23) when the design carries a T layer.
    """
    if design.k_x1.shape[:2] != (design.p_s12.size, design.p_s13.size):
        raise ValueError("k_x1 shape incompatible with S12/S13 marginals")
    if design.k_x2.shape[:2] != (design.p_s21.size, design.p_s23.size):
        raise ValueError("k_x2 shape incompatible with S21/S23 marginals")
    if design.k_x1.shape[2] != channel.x1_alphabet.size:
        raise ValueError("k_x1 output size incompatible with channel X1 alphabet")
    if design.k_x2.shape[2] != channel.x2_alphabet.size:
        raise ValueError("k_x2 output size incompatible with channel X2 alphabet")

    # indices: a=s12 b=s13 c=s21 d=s23, e=x1 f=x2, g=y1 h=y2 i=y3
    joint = np.einsum(
        "a,b,c,d,abe,cdf,efghi->abcdefghi",
        design.p_s12,
        design.p_s13,
        design.p_s21,
        design.p_s23,
        design.k_x1,
        design.k_x2,
        channel.kernel,
        optimize=True,
    )
    s_alphabets = [
        Alphabet(tuple(range(n)))
        for n in (
            design.p_s12.size,
            design.p_s13.size,
            design.p_s21.size,
            design.p_s23.size,
        )
    ]
    variables = list(zip(S_NAMES, s_alphabets)) + [
        ("X1", channel.x1_alphabet),
        ("X2", channel.x2_alphabet),
        ("Y1", channel.y1_alphabet),
        ("Y2", channel.y2_alphabet),
        ("Y3", channel.y3_alphabet),
    ]
    if design.has_t_layer:
        expected = {
            "k_t12": (channel.x1_alphabet.size, channel.y1_alphabet.size, design.p_s12.size),
            "k_t13": (channel.x1_alphabet.size, channel.y1_alphabet.size, design.p_s13.size),
            "k_t21": (channel.x2_alphabet.size, channel.y2_alphabet.size, design.p_s21.size),
            "k_t23": (channel.x2_alphabet.size, channel.y2_alphabet.size, design.p_s23.size),
        }
        for attr, shape in expected.items():
            k = getattr(design, attr)
            if k.shape[:3] != shape:
                raise ValueError(f"{attr} shape {k.shape[:3]} incompatible, expected {shape}")
        # j=t12 k=t13 l=t21 m=t23
        joint = np.einsum(
            "abcdefghi,egaj,egbk,fhcl,fhdm->abcdefghijklm",
            joint,
            design.k_t12,
            design.k_t13,
            design.k_t21,
            design.k_t23,
            optimize=True,
        )
        t_alphabets = [
            Alphabet(tuple(range(getattr(design, attr).shape[3])))
            for attr in ("k_t12", "k_t13", "k_t21", "k_t23")
        ]
        variables += list(zip(T_NAMES, t_alphabets))
    return JointPMF(tuple(variables), joint)


_FAMILIES = {
    "erasure": (build_erasure_gdmmac, ("p12", "p21", "p13", "p23")),
    "binary_sum": (build_binary_sum_gdmmac, ("p1", "p2", "p3")),
    "correlated_noise": (build_correlated_noise_gdmmac, ("p1", "p2", "p3")),
}


def channel_from_json(text: str) -> Gdmmac:
    """Parse {"family": ..., "params": {...}} or an explicit "custom" kernel."""
    payload = json.loads(text)
    family = payload.get("family")
    if family in _FAMILIES:
        builder, names = _FAMILIES[family]
        params = payload.get("params", {})
        missing = [n for n in names if n not in params]
        if missing:
            raise ValueError(f"channel family {family!r} missing params {missing}")
        return builder(**{n: float(params[n]) for n in names})
    if family == "custom":
        params = payload["params"]
        alphabets = [
            Alphabet(
                tuple(tuple(s) if isinstance(s, list) else s for s in params[key])
            )
            for key in ("x1_symbols", "x2_symbols", "y1_symbols", "y2_symbols", "y3_symbols")
        ]
        shape = tuple(a.size for a in alphabets)
        kernel = np.asarray(params["kernel"], dtype=float).reshape(shape)
        return Gdmmac(*alphabets, kernel)
    raise ValueError(f"unknown channel family {family!r}")


def channel_to_json(channel: Gdmmac) -> str:
    payload = {
        "family": "custom",
        "params": {
            "x1_symbols": list(channel.x1_alphabet.symbols),
            "x2_symbols": list(channel.x2_alphabet.symbols),
            "y1_symbols": list(channel.y1_alphabet.symbols),
            "y2_symbols": list(channel.y2_alphabet.symbols),
            "y3_symbols": [list(s) if isinstance(s, tuple) else s for s in channel.y3_alphabet.symbols],
            "kernel": channel.kernel.ravel().tolist(),
        },
    }
    return json.dumps(payload)
