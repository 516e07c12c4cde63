"""Evolutionary algorithms on monotone pseudo-boolean functions.

A simulator for elitist EA/GA variants on hard monotone instances, plus a
numeric predictor that classifies flip-count distributions as efficient or
stagnating from the dichotomy functional.
"""

from .algorithms import (
    AlgorithmSpec,
    ConfigError,
    OneFifthRule,
    Trajectory,
    acceptance_rule,
    run,
    selection_bias_estimate,
)
from .bitvec import BitVector, Density, density, flip_bits, ones_count
from .dichotomy import (
    DichotomyReport,
    PhiEvaluation,
    classify,
    critical_constants,
    phi_closed_poisson,
    phi_numeric,
    poisson_threshold,
)
from .flipdist import (
    BinomialFlips,
    FlipCountDistribution,
    MomentReport,
    PointMass,
    PoissonFlips,
    TableFlips,
    ZipfFlips,
    parse_dist,
)
from .functions import BinVal, LinearFunction, OneMax, eval_binval, eval_linear, eval_onemax
from .harness import ExperimentConfig, footnote_config, run_experiment
from .hottopic import (
    HotTopicFunction,
    HotTopicInstance,
    HotTopicParams,
    LevelState,
    build_instance,
    eval_ht,
    eval_ht_incremental,
    level,
)

__version__ = "0.1.0"
