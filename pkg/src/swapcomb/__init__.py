"""No-swap-regret learning for adversarial combinatorial bandits.

Library layout:

- ``policy``    sparse distributions over binary action vectors
- ``linalg``    co-occurrence matrices, pseudo-inverse, span projection
- ``domains``   concrete combinatorial action sets and their oracles
- ``spanner``   approximate barycentric spanners and the exploration policy
- ``geometry``  Caratheodory decomposition and KL projection onto scaled hulls
- ``learners``  lazy mirror-descent instance learners and baselines
- ``master``    the multi-scale master loop and doubling wrapper
- ``regret``    adversaries, ledgers, exact external/swap regret evaluation
- ``bench``     config-driven experiment harness (CSV metrics, CLI)
"""

from . import errors, rngkit
from .policy import Policy

__all__ = ["Policy", "errors", "rngkit"]

__version__ = "0.1.0"
