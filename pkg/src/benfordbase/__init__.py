"""Multi-base Benford-Newcomb tests for election vote counts."""

__version__ = "0.1.0"

from .digits import (
    BenfordPmf,
    DomainError,
    benford_pmf,
    first_two_mass,
    leading_digit,
    leading_digits,
    theoretical_ratio,
)
from .ingest import ElectionKey, VoteRecord, build_candidate_samples, build_sample, load_votes
from .stats import (
    BaseCurve,
    DigitDistribution,
    OutlierReport,
    Sample,
    cohort_outliers,
    curve_sd,
    empirical_distribution,
    intrinsic_discrepancy,
    kl_curve,
    ratio_deviation_curve,
    uniform_comparison,
)
from .synth import FraudModel, GeneratorConfig, apply_fraud, gen_benford
