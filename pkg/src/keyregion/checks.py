"""Cross-module invariant self-checks.

Each check compares an independent closed-form oracle, a structural identity,
or a dominance relation against the generic evaluators and reports the worst
observed deviation next to the tolerated one. The suite is the engine behind
the ``check`` CLI subcommand and is deliberately cheap enough to run on every
build.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import binary_examples as bx
from .channels import (
    build_binary_sum_gdmmac,
    build_correlated_noise_gdmmac,
    build_erasure_gdmmac,
    induce_joint,
)
from .prob_core import Alphabet, JointPMF, is_markov_chain
from .regions import (
    evaluate_design,
    outer_bound_th2,
    outer_bound_th4,
    pregen_atoms,
    pregen_region,
)

__all__ = ["CheckResult", "run_all"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    observed: float
    tolerated: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"{status} {self.name}: observed deviation {self.observed:.3e}, "
            f"tolerated {self.tolerated:.1e}"
        )
        if self.detail:
            text += f" ({self.detail})"
        return text


def _result(name: str, observed: float, tolerated: float, detail: str = "") -> CheckResult:
    return CheckResult(name, observed <= tolerated, observed, tolerated, detail)


_EX2_PARAMS = (0.09, 0.1, 0.07)
_EX3_PARAMS = (0.09, 0.1, 0.07)


def check_oracle_example2() -> CheckResult:
    """Generic pre-generated pipeline vs the binary-sum closed forms."""
    p1, p2, p3 = _EX2_PARAMS
    channel = build_binary_sum_gdmmac(p1, p2, p3)
    worst = 0.0
    for alpha in np.linspace(0.0, 0.5, 6):
        for beta in np.linspace(0.0, 0.5, 6):
            ev = evaluate_design(channel, bx.example2_design(alpha, beta))
            want = bx.example2_inner_formula(alpha, beta, p1, p2, p3)
            worst = max(
                worst,
                abs(ev.bound_r12 - want[0]),
                abs(ev.bound_r13 - want[1]),
                abs(ev.bound_r23 - want[2]),
            )
    return _result("oracle-equivalence/binary-sum", worst, 1e-9, "6x6 (alpha, beta) grid")


def check_oracle_example3() -> CheckResult:
    """Generic generalized pipeline vs the correlated-noise closed forms."""
    p1, p2, p3 = _EX3_PARAMS
    channel = build_correlated_noise_gdmmac(p1, p2, p3)
    points = [
        (0.1, 0.2, 0.3, 0.4, 0.1),
        (0.5, 0.0, 0.5, 0.5, 0.5),
        (0.25, 0.25, 0.25, 0.25, 0.25),
        (0.0, 0.5, 0.1, 0.3, 0.45),
        (0.4, 0.1, 0.05, 0.2, 0.35),
        (0.3, 0.3, 0.45, 0.05, 0.15),
    ]
    worst = 0.0
    flag_mismatch = 0
    for alpha, alpha_p, alpha_pp, beta, beta_p in points:
        params = bx.Example3Params(alpha, alpha_p, alpha_pp, beta, beta_p, p1, p2, p3)
        ev = evaluate_design(channel, bx.example3_design(params))
        r12, r13, r23, feasible = bx.example3_inner(params)
        worst = max(
            worst,
            abs(ev.bound_r12 - r12),
            abs(ev.bound_r13 - r13),
            abs(ev.bound_r23 - r23),
        )
        if ev.feasible != feasible:
            flag_mismatch += 1
    detail = f"{len(points)} spot designs, {flag_mismatch} feasibility mismatches"
    if flag_mismatch:
        return CheckResult("oracle-equivalence/correlated-noise", False, worst, 1e-9, detail)
    return _result("oracle-equivalence/correlated-noise", worst, 1e-9, detail)


def check_inner_within_outer_example2() -> CheckResult:
    """Every achievable binary-sum point sits inside the outer box."""
    # An ordered crossover triple (p2 <= p3 <= p1), where the outer-bound
    # derivation applies.
    p1, p2, p3 = 0.2, 0.05, 0.1
    out12, _, out23 = bx.example2_outer(p1, p2, p3)
    worst = 0.0
    for alpha in np.linspace(0.0, 0.5, 11):
        for beta in np.linspace(0.0, 0.5, 11):
            r12, _, r23 = bx.example2_inner(bx.Example2Params(alpha, beta, p1, p2, p3))
            worst = max(worst, r12 - out12, r23 - out23)
    return _result("inner-within-outer/binary-sum", max(worst, 0.0), 1e-9)


def check_inner_within_outer_example3() -> CheckResult:
    """Every feasible correlated-noise point sits inside the outer box."""
    p1, p2, p3 = _EX3_PARAMS
    out = bx.example3_outer(p1, p2, p3)
    worst = 0.0
    grid = np.linspace(0.0, 0.5, 4)
    for alpha in grid:
        for alpha_p in grid:
            for alpha_pp in grid:
                for beta in grid:
                    for beta_p in grid:
                        params = bx.Example3Params(
                            alpha, alpha_p, alpha_pp, beta, beta_p, p1, p2, p3
                        )
                        r12, r13, r23, feasible = bx.example3_inner(params)
                        if not feasible:
                            continue
                        worst = max(
                            worst, r12 - out[0], r13 - out[1], r23 - out[2]
                        )
    return _result("inner-within-outer/correlated-noise", max(worst, 0.0), 1e-9)


def check_marginal_invariance() -> CheckResult:
    """Pre-generated atoms depend only on the per-output marginal channels."""
    channel = build_erasure_gdmmac(p12=0.3, p21=0.3, p13=0.5, p23=0.1)
    design = bx.example1_design()
    a = pregen_atoms(induce_joint(channel, design))
    b = pregen_atoms(induce_joint(channel.marginal_product(), design))
    worst = max(
        abs(getattr(a, f) - getattr(b, f))
        for f in ("r12", "r21", "i12", "r13", "r23", "i3")
    )
    return _result("marginal-channel-invariance/erasure", worst, 1e-12)


def check_singleton_t_reduction() -> CheckResult:
    """Generalized evaluation with constant T variables equals pre-generated."""
    channel = build_correlated_noise_gdmmac(*_EX3_PARAMS)
    worst = 0.0
    for alpha, alpha_p, beta in ((0.1, 0.2, 0.3), (0.5, 0.0, 0.5), (0.3, 0.45, 0.05)):
        design = bx.example3_pregen_design(alpha, alpha_p, beta)
        plain = evaluate_design(channel, design)
        lifted = evaluate_design(channel, design.with_singleton_t_layer(channel))
        worst = max(
            worst,
            abs(plain.bound_r12 - lifted.bound_r12),
            abs(plain.bound_r13 - lifted.bound_r13),
            abs(plain.bound_r23 - lifted.bound_r23),
            abs(plain.bound_r13_plus_r23 - lifted.bound_r13_plus_r23),
        )
    return _result("constant-extra-layer-reduction/correlated-noise", worst, 1e-12)


def check_degraded_markov_chain() -> CheckResult:
    """The correlated-noise outputs form the degraded chain (X1,X2)-Y2-Y3-Y1."""
    channel = build_correlated_noise_gdmmac(*_EX3_PARAMS)
    joint = induce_joint(channel, bx.example3_pregen_design(0.2, 0.3, 0.25))
    holds, violation = is_markov_chain(
        joint, [["X1", "X2"], ["Y2"], ["Y3"], ["Y1"]]
    )
    return _result("degraded-chain/correlated-noise", violation, 1e-9)


def _uniform_input_joint_with_u(channel) -> JointPMF:
    """Joint over (U, X1, X2, Y1, Y2, Y3) with constant U, uniform inputs."""
    nx1 = channel.x1_alphabet.size
    nx2 = channel.x2_alphabet.size
    table = channel.kernel / (nx1 * nx2)
    return JointPMF(
        (
            ("U", Alphabet((0,))),
            ("X1", channel.x1_alphabet),
            ("X2", channel.x2_alphabet),
            ("Y1", channel.y1_alphabet),
            ("Y2", channel.y2_alphabet),
            ("Y3", channel.y3_alphabet),
        ),
        table[None, ...],
    )


def check_outer_dominance() -> CheckResult:
    """The generalized-scheme outer bound dominates the pre-generated one."""
    worst = 0.0
    for p1, p2, p3 in ((0.09, 0.1, 0.07), (0.2, 0.3, 0.1), (0.5, 0.5, 0.5)):
        joint = _uniform_input_joint_with_u(build_binary_sum_gdmmac(p1, p2, p3))
        th2 = outer_bound_th2(joint)
        th4 = outer_bound_th4(joint)
        worst = max(worst, th2.r13 - th4.r13, th2.r23 - th4.r23)
    return _result("outer-bound-dominance/binary-sum", max(worst, 0.0), 1e-9)


def check_erasure_corner() -> CheckResult:
    """The erasure-channel design reaches its closed-form capacity corner."""
    channel = build_erasure_gdmmac(p12=0.3, p21=0.3, p13=0.5, p23=0.1)
    ev = pregen_region(pregen_atoms(induce_joint(channel, bx.example1_design())))
    want = bx.example1_capacity(p12=0.3, p13=0.5, p23=0.1)
    worst = max(
        abs(ev.bound_r12 - want[0]),
        abs(ev.bound_r13 - want[1]),
        abs(ev.bound_r23 - want[2]),
    )
    return _result("capacity-corner/erasure", worst, 1e-9)


_CHECKS = (
    check_oracle_example2,
    check_oracle_example3,
    check_inner_within_outer_example2,
    check_inner_within_outer_example3,
    check_marginal_invariance,
    check_singleton_t_reduction,
    check_degraded_markov_chain,
    check_outer_dominance,
    check_erasure_corner,
)


def run_all() -> list:
    """Run every registered invariant check and return the results."""
    return [check() for check in _CHECKS]
