"""Region-boundary data series for the standard comparison plots.

Each figure id names a panel comparing achievable regions of one channel
family: ``fig6`` shows the binary-sum inner region against its outer box and
the time-sharing segment; ``fig9a``/``fig9b``/``fig9c`` show 2-D projections
of the correlated-noise pre-generated and generalized regions against their
outer box, at three crossover parameter sets. Series are emitted as CSV data,
never rendered; plotting is external.
"""

from __future__ import annotations

import numpy as np

from . import binary_examples as bx
from .prob_core import binary_entropy
from .regions import RateTriple, pareto_project

__all__ = ["FIGURE_IDS", "DEFAULT_PARAMS", "figure_series", "write_figure_csv"]

FIGURE_IDS = ("fig6", "fig9a", "fig9b", "fig9c")

# Default crossover triples (p1, p2, p3) per panel.
DEFAULT_PARAMS = {
    "fig6": (0.09, 0.1, 0.07),
    "fig9a": (0.09, 0.1, 0.07),
    "fig9b": (0.01, 0.02, 0.01),
    "fig9c": (0.03, 0.05, 0.02),
}

_PROJECTIONS = (("r12", "r13"), ("r12", "r23"), ("r13", "r23"))


def _axis_values(step: float) -> np.ndarray:
    count = int(round(0.5 / step))
    return np.minimum(step * np.arange(count + 1), 0.5)


def _box(xmax: float, ymax: float) -> list:
    """Corner points of the rectangular outer region [0,xmax] x [0,ymax]."""
    return [(0.0, ymax), (xmax, ymax), (xmax, 0.0)]


def _binary_sum_series(params: tuple, grid_step: float) -> list:
    """Series for the binary-sum panel, on axes (r23, r12)."""
    p1, p2, p3 = params
    axes = ("r23", "r12")
    values = _axis_values(grid_step)
    points = []
    for alpha in values:
        for beta in values:
            r12, _, r23 = bx.example2_inner_formula(alpha, beta, p1, p2, p3)
            points.append(RateTriple(r12, 0.0, r23))
    inner = pareto_project(points, axes)
    # Outer box evaluated directly; the standard figure parameter sets fall
    # outside the ordering precondition of example2_outer.
    out12 = 1.0 - binary_entropy(p2)
    out23 = max(binary_entropy(p1) - binary_entropy(p3), 0.0)
    corner_a = bx.example2_inner_formula(0.5, 0.5, p1, p2, p3)
    corner_b = bx.example2_inner_formula(0.0, 0.0, p1, p2, p3)
    timeshare = sorted([(corner_a[2], corner_a[0]), (corner_b[2], corner_b[0])])
    return [
        ("inner", axes, inner),
        ("outer", axes, _box(out23, out12)),
        ("timeshare", axes, timeshare),
    ]


def _correlated_noise_series(params: tuple, grid_step: float) -> list:
    """Projected series for a correlated-noise panel, one trio per axis pair."""
    p1, p2, p3 = params
    values = _axis_values(grid_step)
    pregen_points = []
    for alpha in values:
        for alpha_p in values:
            for beta in values:
                r12, r13, r23 = bx.example3_pregen(alpha, alpha_p, beta, p1, p2, p3)
                pregen_points.append(RateTriple(r12, r13, r23))
    gen_points = []
    for alpha in values:
        for alpha_p in values:
            for alpha_pp in values:
                for beta in values:
                    for beta_p in values:
                        p = bx.Example3Params(
                            alpha, alpha_p, alpha_pp, beta, beta_p, p1, p2, p3
                        )
                        r12, r13, r23, feasible = bx.example3_inner(p)
                        if feasible:
                            gen_points.append(RateTriple(r12, r13, r23))
    outer = bx.example3_outer(p1, p2, p3)
    index = {"r12": 0, "r13": 1, "r23": 2}
    series = []
    for axes in _PROJECTIONS:
        series.append(("pregen", axes, pareto_project(pregen_points, axes)))
        series.append(("generalized", axes, pareto_project(gen_points, axes)))
        series.append(
            ("outer", axes, _box(outer[index[axes[0]]], outer[index[axes[1]]]))
        )
    return series


def figure_series(
    figure_id: str, params: tuple = None, grid_step: float = None
) -> list:
    """Compute every data series of one panel.

    Returns [(series_name, (axis_x, axis_y), [(x, y), ...]), ...]. ``params``
    defaults to the panel's standard crossover triple; ``grid_step`` defaults
    to 0.01 for the binary-sum panel and 0.1 for the five-parameter
    correlated-noise sweeps.
    """
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}")
    if params is None:
        params = DEFAULT_PARAMS[figure_id]
    if figure_id == "fig6":
        return _binary_sum_series(params, grid_step or 0.01)
    return _correlated_noise_series(params, grid_step or 0.1)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_figure_csv(path, series: list) -> None:
    """Write one panel's series as CSV with stable formatting."""
    with open(path, "w", newline="") as fh:
        fh.write("series,axis_x,axis_y,x,y\n")
        for name, (ax, ay), points in series:
            for x, y in points:
                fh.write(f"{name},{ax},{ay},{_fmt(x)},{_fmt(y)}\n")
