"""Simulator and exhaustive verifier for protocols built from non-local boxes."""

from .engine import (Action, Channel, NlbInstance, PartyProgram, Seed,
                     SharedDomain, Strategy, Transcript, enumerate_seeds,
                     execute, nlb_evaluate, sample_seed)
from .games import Game, bmaj, get_game, is_winning, promised_inputs, winning_outcomes
from .strategies import get_strategy
from .analysis import (ExactDistribution, Exhaustive, Sample, SearchReport,
                       classical_value, exact_distribution,
                       impossibility_search, no_signaling_check,
                       resource_count, verify_winning)

__all__ = [
    "Action", "Channel", "ExactDistribution", "Exhaustive", "Game",
    "NlbInstance", "PartyProgram", "Sample", "SearchReport", "Seed",
    "SharedDomain", "Strategy", "Transcript", "bmaj", "classical_value",
    "enumerate_seeds", "exact_distribution", "execute", "get_game",
    "get_strategy", "impossibility_search", "is_winning", "nlb_evaluate",
    "no_signaling_check", "promised_inputs", "resource_count", "sample_seed",
    "verify_winning", "winning_outcomes",
]
