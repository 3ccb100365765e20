"""Transform one k-clustering into another with few cyclical and sequential moves."""

from .cdg import (ClusteringDifferenceGraph, DegreeProfile, MismatchedInstances, build_cdg,
                  degree_profile, residual, to_dot)
from .decompose import (CycleCover, PathCycleDecomposition, Strategy, disjoint_cycle_cover,
                        path_cycle_decompose)
from .model import (BoundViolationAtStep, Clustering, InvalidMove, ItemNotInSource, Move,
                    MoveKind, PlanSourceMismatch, SizeBounds, Transfer, TransformationPlan,
                    ValidationReport, apply_move, apply_plan, validate_clustering)
from .oracle import InstanceTooLarge, Unreachable, enumerate_moves, exact_distance
from .planner import (ApplicabilityUnmet, BoundReport, DiameterReport, EmptyPolytope,
                      InfeasibleEndpoints, PlanningCancelled, bounds, diameter_bounds, plan,
                      plan_bounded)

__all__ = [
    "ApplicabilityUnmet", "BoundReport", "BoundViolationAtStep", "Clustering",
    "ClusteringDifferenceGraph", "CycleCover", "DegreeProfile", "DiameterReport",
    "EmptyPolytope", "InfeasibleEndpoints", "InstanceTooLarge", "InvalidMove",
    "ItemNotInSource", "MismatchedInstances", "Move", "MoveKind", "PathCycleDecomposition",
    "PlanSourceMismatch", "PlanningCancelled", "SizeBounds", "Strategy", "Transfer",
    "TransformationPlan", "Unreachable", "ValidationReport", "apply_move", "apply_plan",
    "bounds", "build_cdg", "degree_profile", "diameter_bounds", "disjoint_cycle_cover",
    "enumerate_moves", "exact_distance", "path_cycle_decompose", "plan", "plan_bounded",
    "residual", "to_dot", "validate_clustering",
]
