"""Entropy identities over binary symmetric channels and parity-exchange reconciliation."""

from .channel import ExtensionSpec, bsc, extension, theorem1, uniform_input_joint
from .entropy import (
    binary_entropy,
    conditional_entropy,
    entropy,
    grouping_axiom_rhs,
    joint_entropy,
)
from .identities import (
    IdentityReport,
    ParityDecomposition,
    addition_formula,
    addition_formula_chain,
    general_block_decomposition,
    identity_capacity_form,
    identity_size2,
    identity_size3,
    refine_entropy_near_extreme,
)
from .reconciliation import (
    BitPair,
    CorrelationModel,
    analytic_round,
    generate_pair,
    ledger_check,
    optimize_block_size,
    parity_round,
    run_protocol,
)

__version__ = "0.1.0"
