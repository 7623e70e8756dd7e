"""Certification suite: AIS-31, SP 800-90B IID and non-IID tests, PCC scan."""

from .ais31 import ais31_suite, coron_statistic, procedure_a, procedure_b
from .correlation import pcc_scan, pearson
from .distribution import (
    monobit_p_value,
    nonce_quality,
    poker_p_value,
    sign_balance,
    uniformity_chi_square,
)
from .estimators import (
    collision_estimate,
    compression_estimate,
    estimator_suite,
    markov_estimate,
    mcv_estimate,
)
from .iid import IidReport, IidStatistic, iid_permutation_suite
from .thresholds import THRESHOLDS, Threshold, get_threshold
from .types import BitSequence, PccReport, TestVerdict

__all__ = [
    "THRESHOLDS",
    "BitSequence",
    "IidReport",
    "IidStatistic",
    "PccReport",
    "TestVerdict",
    "Threshold",
    "ais31_suite",
    "collision_estimate",
    "compression_estimate",
    "coron_statistic",
    "estimator_suite",
    "get_threshold",
    "iid_permutation_suite",
    "markov_estimate",
    "mcv_estimate",
    "monobit_p_value",
    "nonce_quality",
    "pcc_scan",
    "pearson",
    "poker_p_value",
    "procedure_a",
    "procedure_b",
    "sign_balance",
    "uniformity_chi_square",
]
