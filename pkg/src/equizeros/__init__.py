"""Zeros of random polynomials in bases adapted to a planar domain."""

from .bases import BASIS_KINDS, PolynomialBasis, build_basis, carleman_ratios, gram_matrix
from .domains import Disk, Domain, Ellipse, Laurent, domain_from_dict
from .ensembles import (
    CoefficientSequence,
    DistributionSpec,
    classify_log_moment,
    detect_gaps,
    running_max_records,
    sample_coefficients,
    sequence_diagnostics,
)
from .experiments import (
    ExperimentConfig,
    SummaryReport,
    TrialRecord,
    load_config,
    run_dichotomy,
    run_experiment,
    run_lemma_suite,
    run_prop23,
    trial_seed,
)
from .measures import EquiStats, collapse_detect, equi_stats, lognorm_profile, star_discrepancy
from .polyroots import MonomialPolynomial, RootSet, assemble, find_roots, recover_coefficient

__version__ = "0.1.0"
