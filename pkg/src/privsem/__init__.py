"""privsem: design and verification of privacy mechanisms for private
semantic communication over finite alphabets.

The package computes privacy-utility bounds for single-task and multi-task
instances, constructs mechanisms that achieve the lower bounds, and checks
both against independent search oracles.  See the README for the CLI.
"""

from .errors import PrivsemError
from .prob_core import (
    Alphabet,
    DeterministicMap,
    InfoValue,
    JointDistribution,
    apply_map,
    conditional_entropy,
    entropy,
    key_identity_residual,
    mutual_information,
    product_compose,
    random_joint,
    validate_joint,
)

__version__ = "0.1.0"

__all__ = [
    "PrivsemError",
    "Alphabet",
    "JointDistribution",
    "DeterministicMap",
    "InfoValue",
    "validate_joint",
    "entropy",
    "conditional_entropy",
    "mutual_information",
    "apply_map",
    "product_compose",
    "key_identity_residual",
    "random_joint",
    "__version__",
]
