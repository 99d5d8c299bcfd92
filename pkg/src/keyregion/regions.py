"""Inner- and outer-bound evaluators for the pairwise secret-key rate region.

The inner bounds come in two flavors: the pre-generated-keys scheme (S-layer
auxiliaries only) and the generalized scheme (S-layer plus T-layer with
transmissibility constraints). Outer bounds are evaluated on an explicit
joint that includes an auxiliary variable U.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .channels import AuxDesign, Gdmmac, induce_joint
from .prob_core import JointPMF, conditional_mutual_information as cmi

__all__ = [
    "RateTriple",
    "PreGenAtoms",
    "GenAtoms",
    "RegionEvaluation",
    "pregen_atoms",
    "pregen_region",
    "gen_atoms",
    "gen_region",
    "evaluate_design",
    "outer_bound_th2",
    "outer_bound_th4",
    "DesignFamily",
    "sweep",
    "pareto_project",
]

FEASIBILITY_TOL = 1e-9


def _clamp(x: float) -> float:
    return max(x, 0.0)


@dataclass(frozen=True)
class RateTriple:
    r12: float
    r13: float
    r23: float

    def __post_init__(self):
        if min(self.r12, self.r13, self.r23) < 0:
            raise ValueError("rates must be nonnegative")

    def as_tuple(self) -> tuple:
        return (self.r12, self.r13, self.r23)


@dataclass(frozen=True)
class PreGenAtoms:
    """The six rate atoms of the pre-generated-keys inner bound (bits)."""

    r12: float
    r21: float
    i12: float
    r13: float
    r23: float
    i3: float


@dataclass(frozen=True)
class GenAtoms:
    """Primary and secondary atoms of the generalized inner bound, plus the
    signed slacks of its five transmissibility constraints."""

    primary: PreGenAtoms
    secondary: PreGenAtoms
    constraint_slacks: tuple

    @property
    def feasible(self) -> bool:
        return all(s >= -FEASIBILITY_TOL for s in self.constraint_slacks)


@dataclass(frozen=True)
class RegionEvaluation:
    scheme: str  # "pregen" | "generalized"
    atoms: object
    bound_r12: float
    bound_r13: float
    bound_r23: float
    bound_r13_plus_r23: float
    feasible: bool


def _require(joint: JointPMF, names: Iterable[str]) -> None:
    missing = [n for n in names if n not in joint.names]
    if missing:
        raise ValueError(f"joint is missing variables {missing}")


def pregen_atoms(joint: JointPMF) -> PreGenAtoms:
    """Evaluate the six pre-generated-scheme rate atoms on a full joint."""
    _require(joint, ("S12", "S13", "S21", "S23", "X1", "X2", "Y1", "Y2", "Y3"))
    return PreGenAtoms(
        r12=_clamp(
            cmi(joint, ["S12"], ["X2", "Y2"]) - cmi(joint, ["S12"], ["Y3", "S13", "S23"])
        ),
        r21=_clamp(
            cmi(joint, ["S21"], ["X1", "Y1"]) - cmi(joint, ["S21"], ["Y3", "S13", "S23"])
        ),
        i12=cmi(joint, ["S12"], ["S21"], ["Y3", "S13", "S23"]),
        r13=_clamp(
            cmi(joint, ["S13"], ["Y3"], ["S23"])
            - cmi(joint, ["S13"], ["X2", "Y2", "S12"], ["S23"])
        ),
        r23=_clamp(
            cmi(joint, ["S23"], ["Y3"], ["S13"])
            - cmi(joint, ["S23"], ["X1", "Y1", "S21"], ["S13"])
        ),
        i3=cmi(joint, ["S13"], ["S23"], ["Y3"]),
    )


def pregen_region(atoms: PreGenAtoms) -> RegionEvaluation:
    return RegionEvaluation(
        scheme="pregen",
        atoms=atoms,
        bound_r12=_clamp(atoms.r12 + atoms.r21 - atoms.i12),
        bound_r13=atoms.r13,
        bound_r23=atoms.r23,
        bound_r13_plus_r23=_clamp(atoms.r13 + atoms.r23 - atoms.i3),
        feasible=True,
    )


def gen_atoms(joint: JointPMF) -> GenAtoms:
    """Evaluate the twelve generalized-scheme atoms and constraint slacks."""
    _require(
        joint,
        (
            "S12", "S13", "S21", "S23", "X1", "X2", "Y1", "Y2", "Y3",
            "T12", "T13", "T21", "T23",
        ),
    )
    primary = PreGenAtoms(
        r12=_clamp(
            cmi(joint, ["S12"], ["X2", "Y2"])
            - cmi(joint, ["S12"], ["Y3", "S13", "S23", "T13", "T23"])
        ),
        r21=_clamp(
            cmi(joint, ["S21"], ["X1", "Y1"])
            - cmi(joint, ["S21"], ["Y3", "S13", "S23", "T13", "T23"])
        ),
        i12=cmi(joint, ["S12"], ["S21"], ["Y3", "S13", "S23", "T13", "T23"]),
        r13=_clamp(
            cmi(joint, ["S13"], ["Y3"], ["S23"])
            - cmi(joint, ["S13"], ["X2", "Y2", "S12", "T12"], ["S23"])
        ),
        r23=_clamp(
            cmi(joint, ["S23"], ["Y3"], ["S13"])
            - cmi(joint, ["S23"], ["X1", "Y1", "S21", "T21"], ["S13"])
        ),
        i3=cmi(joint, ["S13"], ["S23"], ["Y3"]),
    )
    secondary = PreGenAtoms(
        r12=_clamp(
            cmi(joint, ["T12"], ["X2", "Y2"], ["S12", "S21"])
            - cmi(joint, ["T12"], ["Y3", "S13", "S23", "T13", "T23"], ["S12", "S21"])
        ),
        r21=_clamp(
            cmi(joint, ["T21"], ["X1", "Y1"], ["S12", "S21"])
            - cmi(joint, ["T21"], ["Y3", "S13", "S23", "T13", "T23"], ["S12", "S21"])
        ),
        i12=cmi(
            joint, ["T12"], ["T21"],
            ["Y3", "S13", "S23", "T13", "T23", "S12", "S21"],
        ),
        r13=_clamp(
            cmi(joint, ["T13"], ["Y3"], ["S13", "S23", "T23"])
            - cmi(joint, ["T13"], ["X2", "Y2", "S12", "T12"], ["S13", "S23", "T23"])
        ),
        r23=_clamp(
            cmi(joint, ["T23"], ["Y3"], ["S13", "S23", "T13"])
            - cmi(joint, ["T23"], ["X1", "Y1", "S21", "T21"], ["S13", "S23", "T13"])
        ),
        i3=cmi(joint, ["T13"], ["T23"], ["Y3", "S13", "S23"]),
    )
    slacks = (
        cmi(joint, ["S12"], ["X2", "Y2"])
        - cmi(joint, ["T12"], ["X1", "Y1"], ["X2", "Y2", "S12", "S21"]),
        cmi(joint, ["S13"], ["Y3"], ["S23"])
        - cmi(joint, ["T13"], ["X1", "Y1"], ["Y3", "S13", "S23", "T23"]),
        cmi(joint, ["S21"], ["X1", "Y1"])
        - cmi(joint, ["T21"], ["X2", "Y2"], ["X1", "Y1", "S12", "S21"]),
        cmi(joint, ["S23"], ["Y3"], ["S13"])
        - cmi(joint, ["T23"], ["X2", "Y2"], ["Y3", "S13", "S23", "T13"]),
        cmi(joint, ["S13", "S23"], ["Y3"])
        - cmi(joint, ["T13", "T23"], ["X1", "Y1", "X2", "Y2"], ["Y3", "S13", "S23"]),
    )
    return GenAtoms(primary=primary, secondary=secondary, constraint_slacks=slacks)


def gen_region(atoms: GenAtoms) -> RegionEvaluation:
    p, s = atoms.primary, atoms.secondary
    return RegionEvaluation(
        scheme="generalized",
        atoms=atoms,
        bound_r12=_clamp(p.r12 + p.r21 - p.i12) + _clamp(s.r12 + s.r21 - s.i12),
        bound_r13=p.r13 + s.r13,
        bound_r23=p.r23 + s.r23,
        bound_r13_plus_r23=_clamp(p.r13 + p.r23 - p.i3) + _clamp(s.r13 + s.r23 - s.i3),
        feasible=atoms.feasible,
    )


def evaluate_design(channel: Gdmmac, design: AuxDesign) -> RegionEvaluation:
    """Run the full pipeline for one design: compose, atoms, region."""
    joint = induce_joint(channel, design)
    if design.has_t_layer:
        return gen_region(gen_atoms(joint))
    return pregen_region(pregen_atoms(joint))


def _check_u_markov(joint: JointPMF, tol: float = 1e-9) -> None:
    violation = cmi(joint, ["U"], ["Y1", "Y2", "Y3"], ["X1", "X2"])
    if violation > tol:
        raise ValueError(
            f"U-(X1,X2)-(Y1,Y2,Y3) Markov chain violated by {violation} bits"
        )


def _outer_r12(joint: JointPMF) -> float:
    return (
        cmi(joint, ["X1"], ["Y2"], ["X2", "Y3"])
        + cmi(joint, ["X2"], ["Y1"], ["X1", "Y3"])
        + cmi(joint, ["Y1"], ["Y2"], ["X1", "X2", "Y3"])
        + cmi(joint, ["X1"], ["Y3"], ["X2", "U"])
        - cmi(joint, ["X1"], ["Y3"], ["U"])
    )


def outer_bound_th2(joint_with_u: JointPMF) -> RateTriple:
    """Outer bound for the pre-generated-keys scheme on one candidate joint."""
    _require(joint_with_u, ("U", "X1", "X2", "Y1", "Y2", "Y3"))
    _check_u_markov(joint_with_u)
    return RateTriple(
        r12=_clamp(_outer_r12(joint_with_u)),
        r13=cmi(joint_with_u, ["X1"], ["Y3"], ["X2", "Y2"]),
        r23=cmi(joint_with_u, ["X2"], ["Y3"], ["X1", "Y1"]),
    )


def outer_bound_th4(joint_with_u: JointPMF) -> RateTriple:
    """Outer bound for the generalized scheme on one candidate joint."""
    _require(joint_with_u, ("U", "X1", "X2", "Y1", "Y2", "Y3"))
    _check_u_markov(joint_with_u)
    return RateTriple(
        r12=_clamp(_outer_r12(joint_with_u)),
        r13=cmi(joint_with_u, ["X1", "Y1"], ["Y3"], ["X2", "Y2"]),
        r23=cmi(joint_with_u, ["X2", "Y2"], ["Y3"], ["X1", "Y1"]),
    )


@dataclass(frozen=True)
class DesignFamily:
    """A parameterized generator of auxiliary designs.

    ``build`` maps keyword parameters (one per name in ``param_names``) to an
    AuxDesign; ``param_ranges`` gives an inclusive (lo, hi) interval for each
    parameter.
    """

    param_names: tuple
    build: Callable[..., AuxDesign]
    param_ranges: dict = field(default_factory=dict)

    def range_of(self, name: str) -> tuple:
        return self.param_ranges.get(name, (0.0, 0.5))


def _grid_axis(lo: float, hi: float, step: float) -> np.ndarray:
    count = int(round((hi - lo) / step))
    values = lo + step * np.arange(count + 1)
    return np.minimum(values, hi)


def max_workers() -> int:
    """Parallelism cap: KEYREGION_THREADS, defaulting to 1."""
    raw = os.environ.get("KEYREGION_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sweep(
    channel: Gdmmac,
    family: DesignFamily,
    grid: dict,
) -> list:
    """Evaluate a design family over a lexicographic parameter grid.

    ``grid`` maps each parameter name either to a step size (float) or to an
    explicit sequence of values. Returns [(params_dict, RegionEvaluation)]
    in lexicographic parameter order; infeasible points are flagged, never
    dropped.
    """
    axes = []
    for name in family.param_names:
        spec = grid.get(name)
        if spec is None:
            raise ValueError(f"grid missing parameter {name!r}")
        if np.isscalar(spec):
            step = float(spec)
            if step <= 0:
                raise ValueError(f"grid step for {name!r} must be positive")
            lo, hi = family.range_of(name)
            axes.append(_grid_axis(lo, hi, step))
        else:
            values = np.asarray(list(spec), dtype=float)
            if values.size == 0:
                raise ValueError(f"empty grid for parameter {name!r}")
            axes.append(values)
    points = list(itertools.product(*axes))
    if not points:
        raise ValueError("empty parameter grid")

    def evaluate(point):
        params = dict(zip(family.param_names, point))
        return params, evaluate_design(channel, family.build(**params))

    workers = max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(evaluate, points))
    return [evaluate(p) for p in points]


def pareto_project(
    points: Sequence[RateTriple],
    axes: tuple,
    convex_hull: bool = False,
) -> list:
    """Project rate triples onto two axes and keep the maximal staircase.

    ``axes`` selects a coordinate pair, e.g. ("r23", "r12"). Returns (x, y)
    pairs sorted by x with no point dominated in both coordinates. With
    ``convex_hull=True``, returns the vertices of the upper concave envelope
    (time-sharing closure) of the staircase instead.
    """
    if not points:
        raise ValueError("empty point list")
    ax, ay = axes
    pairs = sorted({(getattr(p, ax), getattr(p, ay)) for p in points})
    # Sweep from the largest x down, keeping points with a new best y.
    frontier = []
    best_y = -np.inf
    for x, y in reversed(pairs):
        if y > best_y:
            frontier.append((x, y))
            best_y = y
    frontier.reverse()
    if not convex_hull:
        return frontier
    # Upper concave envelope (Andrew monotone chain, upper hull) of the
    # frontier plus its axis-intercept closure points.
    candidates = sorted(set(frontier) | {(0.0, frontier[0][1]), (frontier[-1][0], 0.0)})
    hull = []
    for point in candidates:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (point[1] - y1) - (y2 - y1) * (point[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(point)
    return hull
