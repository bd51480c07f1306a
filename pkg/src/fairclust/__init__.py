"""Individually fair k-clustering via critical balls and constrained local search."""

from fairclust.baselines import (
    EtaSearchResult,
    fair_k_center_jung,
    greedy_baseline,
    vanilla_local_search,
)
from fairclust.critical_balls import (
    CriticalBallSet,
    CriticalReport,
    build_critical_balls,
    verify_critical,
    verify_feasible,
)
from fairclust.errors import (
    FairClustError,
    InfeasibleError,
    InputError,
    OracleCapExceeded,
)
from fairclust.evaluation import EvalReport, EvalRow, compare, emit
from fairclust.fair_radius import FairRadii, brute_force_fair_radius, fair_radii
from fairclust.geometry import INFINITY, CostSpec, PointSet, cost, distance, nearest_two
from fairclust.instances import (
    AdversarialSpec,
    IngestSpec,
    adversarial_instance,
    load_csv,
    random_instance,
    standin_dataset,
)
from fairclust.local_search import (
    LSParams,
    Solution,
    evaluate_swap,
    fair_k_clustering,
    initialize,
    local_search,
)
from fairclust.oracle import OracleResult, brute_force_optimal, fairness_ratio

__all__ = [
    "INFINITY",
    "AdversarialSpec",
    "CostSpec",
    "CriticalBallSet",
    "CriticalReport",
    "EtaSearchResult",
    "EvalReport",
    "EvalRow",
    "FairClustError",
    "FairRadii",
    "InfeasibleError",
    "IngestSpec",
    "InputError",
    "LSParams",
    "OracleCapExceeded",
    "OracleResult",
    "PointSet",
    "Solution",
    "adversarial_instance",
    "brute_force_fair_radius",
    "brute_force_optimal",
    "build_critical_balls",
    "compare",
    "cost",
    "distance",
    "emit",
    "evaluate_swap",
    "fair_k_center_jung",
    "fair_k_clustering",
    "fair_radii",
    "fairness_ratio",
    "greedy_baseline",
    "initialize",
    "load_csv",
    "local_search",
    "nearest_two",
    "random_instance",
    "standin_dataset",
    "vanilla_local_search",
    "verify_critical",
    "verify_feasible",
]
