"""Converse bounds on two-way capacities of Holevo-Werner channels,
repeater chains and quantum networks."""

from .capacity import BoundReport, FiniteSizeParams, channel_bounds, crossover_eta, finite_rate_bound
from .errors import DimensionError, NetworkError, NoCrossoverError, ParameterError
from .measures import (
    Measure,
    SymmetricPPTPoint,
    TwoCopySolution,
    ree_one_copy,
    ree_two_copy,
    ree_two_copy_closed,
    ree_two_copy_numeric,
    rppt_ncopy_numeric,
    rppt_regularised,
    squashed_convexity_bound,
    squashed_purification_bound,
)
from .network import QuantumNetwork, chain_bounds, multi_path_bound, single_path_bound
from .werner import WernerParams, hw_apply, hw_choi, werner_state

__version__ = "0.1.0"
