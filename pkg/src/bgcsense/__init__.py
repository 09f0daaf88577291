"""Deterministic girth-6 compressed sensing matrices from bipartite graphs."""

__version__ = "0.1.0"

from .graph import (BipartiteGraph, GirthReport, GraphBuilder, SubgraphFloors, expand_floors,
                    girth, has_four_cycle, is_maximal)
from .construct import (ConstructionConfig, ConstructionReport, bgc_construct,
                        estimate_regular_degree, peg_construct)
from .matrix import (CoherenceReport, SensingMatrix, coherence, realize_binary, realize_ternary,
                     sample_gaussian)
from .recovery import (RecoveryOutcome, SparseSignal, Tolerances, basis_pursuit, brute_force_l1,
                       generate_signal)
from .benchmark import BenchmarkPlan, PhaseTransitionResult, run_plan, run_point

__all__ = [
    "BipartiteGraph", "GirthReport", "GraphBuilder", "SubgraphFloors", "expand_floors", "girth",
    "has_four_cycle", "is_maximal", "ConstructionConfig", "ConstructionReport", "bgc_construct",
    "estimate_regular_degree", "peg_construct", "CoherenceReport", "SensingMatrix", "coherence",
    "realize_binary", "realize_ternary", "sample_gaussian", "RecoveryOutcome", "SparseSignal",
    "Tolerances", "basis_pursuit", "brute_force_l1", "generate_signal", "BenchmarkPlan",
    "PhaseTransitionResult", "run_plan", "run_point",
]
