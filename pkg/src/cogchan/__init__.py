"""Occupancy-weighted channel selection for cognitive radio networks."""
from .channel import (
    ChannelParams,
    advance_pr_state,
    effective_reception_prob,
    initial_pr_state,
    stationary_to_transitions,
)
from .engine import SimConfig, SlotOutcome, TrialResult, World, run_experiment, run_slot, run_trial
from .metrics import (
    ConfidenceInterval,
    ExperimentSummary,
    avg_receivers,
    confidence_interval,
    delivery_ratio,
    oracle_expected_delivery,
    oracle_expected_receivers,
)
from .sensing import OccupancyEstimator, SensingMode
from .strategy import Strategy, channel_weight, rank_channels, select_adaptive, select_random

__version__ = "0.1.0"
