"""Top-k drone delivery service composition over skyway networks."""

from .composition import (
    CompositionPlan,
    DeliveryQuery,
    base_comps,
    exhaustive_composition,
    extend_with_congestion,
    rank_comps,
    top_k_composition,
)
from .congestion import (
    CongestionEstimate,
    StationLoadProfile,
    StationProfiles,
    probability_wait_recharge,
    simulate_station,
)
from .fleet import DEFAULT_FLEET, DroneSpec, QualityDirectionConfig, block_nested_loop, count_diff
from .network import SkywayNetwork, extract_subnetwork, load_network, save_network
from .servicemodel import EnergyModelParams

__version__ = "0.1.0"

__all__ = [
    "CompositionPlan",
    "CongestionEstimate",
    "DEFAULT_FLEET",
    "DeliveryQuery",
    "DroneSpec",
    "EnergyModelParams",
    "QualityDirectionConfig",
    "SkywayNetwork",
    "StationLoadProfile",
    "StationProfiles",
    "base_comps",
    "block_nested_loop",
    "count_diff",
    "exhaustive_composition",
    "extend_with_congestion",
    "extract_subnetwork",
    "load_network",
    "probability_wait_recharge",
    "rank_comps",
    "save_network",
    "simulate_station",
    "top_k_composition",
]
