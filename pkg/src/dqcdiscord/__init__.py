"""Quantum discord in the one-clean-qubit (DQC1) model."""

from .dqc1 import (
    ConditionalEntropyResult,
    DiscordBreakdown,
    DQC1Instance,
    analytic_discord,
    assemble_state,
    conditional_entropy,
    discord,
    joint_entropy,
    marginal_entropy_M,
    minimize_conditional_entropy,
    post_measurement,
    typical_conditional_entropy,
)
from .errors import DimensionError, DiscordError, NumericError, ValidationError
from .haar import RandomStream, derive_substream, haar_unitary

__version__ = "0.1.0"
