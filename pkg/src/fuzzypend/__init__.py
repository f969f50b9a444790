"""Mamdani and Takagi-Sugeno fuzzy control of an inverted pendulum on a cart."""
from .core import (
    FuzzyError,
    InferenceConfig,
    LinguisticVariable,
    MamdaniSystem,
    Rule,
    SugenoSystem,
    ZeroActivation,
    defuzzify,
    fuzzify,
    mamdani_infer,
    rule_strength,
    sugeno_infer,
)
from .fis import FisSyntaxError, FisValidationError, parse_fis, read_fis, serialize_fis, write_fis
from .membership import Constant, Gaussian, Linear, Trapezoidal, Triangular, eval_mf
from .plant import PlantParams, PlantState, StateLimits, check_limits, derivatives, step

__version__ = "0.1.0"
