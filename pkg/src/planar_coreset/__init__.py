"""Furthest-neighbor and k-center coresets in planar graph metrics.

Distance oracles over weighted graphs, metric structures (ladders,
comatchings, double ladders), hitting-set LP rounding, coreset constructors
with brute-force certification, and explicit lower-bound families.
"""
from .coreset import (CoresetResult, dual_comatching_diagnostic, greedy_coreset, greedy_run,
                      lp_coreset, verify_coreset)
from .errors import (CapExceededError, ConvergenceError, DisconnectedError, ExtractionError,
                     InputError)
from .generators import corpus, grid, random_point_subset, random_subdivision
from .hitting_set import (FractionalSolution, HittingSetInstance, exact_hitting_set,
                          greedy_hitting_set, lp_fractional, round_vc, verify_hitting)
from .kcenter import KCoresetResult, kcenter_coreset, verify_kcenter
from .lowerbounds import gen_planar_kd, gen_soko, gen_tree_k, verify_lower_bound
from .metric import (DistanceOracle, Instance, WeightedGraph, diameter, furthest_neighbor,
                     load_instance, sssp)
from .vc import SetSystem, ball_system, sauer_shelah, shatters, vc_dim_at_most

__version__ = "0.1.0"
