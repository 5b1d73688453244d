"""Weightless neural networks built from RAM nodes.

Classification with bleaching (:class:`Wisard`), clustered and
semi-supervised classification (:class:`ClusWisard`), RAM-based
regression with pluggable means (:class:`RegressionWisard`,
:class:`ClusRegressionWisard`), the binarizers that feed them, and JSON
persistence for all of it.  Every seeded operation is deterministic
across platforms and releases.
"""

from .cluswisard import ClusWisard
from .encoding import KernelCanvas, MeanThresholding, Thermometer, Thresholding
from .errors import (AddressRangeError, CounterValueError, EncodingError,
                     FormatVersionError, InputError, MappingError,
                     MeanDomainError, ModelError, NoInformationError,
                     ParseError, PersistenceError, RamnetError, SchemaError,
                     UnknownModelTypeError)
from .mapping import TupleMapping, encode_address, make_mapping
from .persistence import FORMAT_VERSION, MODEL_TYPES, load_model, save_model
from .ram import RamNode
from .regression import (MEAN_KINDS, ClusRegressionWisard, RegressionRamNode,
                         RegressionWisard, apply_mean)
from .wisard import Discriminator, ScoreTable, Wisard

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Wisard",
    "ClusWisard",
    "RegressionWisard",
    "ClusRegressionWisard",
    "Discriminator",
    "ScoreTable",
    "RamNode",
    "RegressionRamNode",
    "Thresholding",
    "MeanThresholding",
    "Thermometer",
    "KernelCanvas",
    "TupleMapping",
    "make_mapping",
    "encode_address",
    "MEAN_KINDS",
    "apply_mean",
    "FORMAT_VERSION",
    "MODEL_TYPES",
    "save_model",
    "load_model",
    "RamnetError",
    "EncodingError",
    "MappingError",
    "InputError",
    "ModelError",
    "NoInformationError",
    "MeanDomainError",
    "PersistenceError",
    "ParseError",
    "FormatVersionError",
    "UnknownModelTypeError",
    "SchemaError",
    "AddressRangeError",
    "CounterValueError",
]
