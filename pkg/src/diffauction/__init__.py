"""Multi-unit diffusion auctions for unit-demand buyers on a social network."""
from .mechanisms import (
    MECHANISMS,
    Outcome,
    ReserveConfig,
    run_distance_based,
    run_fcfs_f,
    run_mechanism,
    run_nd_vcg,
)
from .network import AuctionInstance, BuyerType, InstanceError, ReportProfile, build_critical_tree

__all__ = [
    "AuctionInstance",
    "BuyerType",
    "InstanceError",
    "MECHANISMS",
    "Outcome",
    "ReportProfile",
    "ReserveConfig",
    "build_critical_tree",
    "run_distance_based",
    "run_fcfs_f",
    "run_mechanism",
    "run_nd_vcg",
]
__version__ = "0.1.0"
