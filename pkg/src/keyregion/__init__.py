"""Pairwise secret-key rate regions for three-user generalized MACs."""

from .prob_core import (
    Alphabet,
    JointPMF,
    binary_convolution,
    binary_entropy,
    conditional_mutual_information,
    entropy,
    is_markov_chain,
    marginalize,
)
from .channels import (
    AuxDesign,
    Gdmmac,
    build_binary_sum_gdmmac,
    build_correlated_noise_gdmmac,
    build_erasure_gdmmac,
    induce_joint,
)
from .binary_examples import (
    Example2Params,
    Example3Params,
    example1_capacity,
    example1_design,
    example2_design,
    example2_inner,
    example2_inner_formula,
    example2_outer,
    example3_design,
    example3_f,
    example3_inner,
    example3_outer,
    example3_pregen,
    example3_pregen_design,
)
from .coding_sim import (
    BudgetError,
    Codebook,
    LeakageEstimate,
    RateQuad,
    SimConfig,
    SimulationReport,
    generate_codebooks,
    plug_in_leakage,
    run_trial,
    simulate,
)
from .checks import CheckResult, run_all as run_self_checks
from .figures import FIGURE_IDS, figure_series, write_figure_csv
from .regions import (
    DesignFamily,
    GenAtoms,
    PreGenAtoms,
    RateTriple,
    RegionEvaluation,
    evaluate_design,
    gen_atoms,
    gen_region,
    outer_bound_th2,
    outer_bound_th4,
    pareto_project,
    pregen_atoms,
    pregen_region,
    sweep,
)

__version__ = "0.1.0"
