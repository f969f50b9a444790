"""Mamdani and Takagi-Sugeno inference.

Systems are immutable; every inference call is a pure function of
``(system, inputs)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .membership import CONSEQUENTS, SHAPES, Constant, Linear


class FuzzyError(ValueError):
    """Invalid fuzzy-system definition."""


class ZeroActivation(ArithmeticError):
    """No rule fired, so there is nothing to defuzzify."""


AND_METHODS = ("min", "prod")
OR_METHODS = ("max", "probor")
IMP_METHODS = ("min", "prod")
AGG_METHODS = ("max", "bsum")
DEFUZZ_METHODS = ("centroid", "bisector", "mom")
CONNECTIVES = ("and", "or")


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    universe: tuple[float, float]
    terms: tuple[tuple[str, object], ...]

    def __post_init__(self):
        lo, hi = (float(v) for v in self.universe)
        object.__setattr__(self, "universe", (lo, hi))
        object.__setattr__(self, "terms", tuple((str(n), mf) for n, mf in self.terms))
        if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
            raise FuzzyError(f"variable {self.name!r}: universe must satisfy lo < hi, got [{lo}, {hi}]")
        if not self.terms:
            raise FuzzyError(f"variable {self.name!r} has no terms")
        names = [n for n, _ in self.terms]
        if len(set(names)) != len(names):
            raise FuzzyError(f"variable {self.name!r} has duplicate term names")

    @property
    def term_names(self) -> list[str]:
        return [n for n, _ in self.terms]

    @property
    def functions(self) -> list:
        return [mf for _, mf in self.terms]

    def term(self, name: str):
        return dict(self.terms)[name]


@dataclass(frozen=True)
class InferenceConfig:
    and_method: str = "min"
    or_method: str = "max"
    implication: str = "min"
    aggregation: str = "max"
    defuzzification: str = "centroid"
    resolution: int = 1001

    def __post_init__(self):
        for value, allowed, label in (
            (self.and_method, AND_METHODS, "and method"),
            (self.or_method, OR_METHODS, "or method"),
            (self.implication, IMP_METHODS, "implication"),
            (self.aggregation, AGG_METHODS, "aggregation"),
            (self.defuzzification, DEFUZZ_METHODS, "defuzzification"),
        ):
            if value not in allowed:
                raise FuzzyError(f"unknown {label} {value!r}; expected one of {allowed}")
        if isinstance(self.resolution, bool) or not isinstance(self.resolution, int) or self.resolution < 3:
            raise FuzzyError(f"resolution must be an integer >= 3, got {self.resolution!r}")


@dataclass(frozen=True)
class Rule:
    """One row of a rule base.

    ``antecedent`` holds one term index per input and ``consequent`` one per
    output; indices are 1-based and 0 means the variable does not take part.
    """

    antecedent: tuple[int, ...]
    consequent: tuple[int, ...]
    weight: float = 1.0
    connective: str = "and"

    def __post_init__(self):
        object.__setattr__(self, "antecedent", tuple(int(i) for i in self.antecedent))
        object.__setattr__(self, "consequent", tuple(int(i) for i in self.consequent))
        object.__setattr__(self, "weight", float(self.weight))
        if self.connective not in CONNECTIVES:
            raise FuzzyError(f"unknown connective {self.connective!r}")
        if not 0.0 < self.weight <= 1.0:
            raise FuzzyError(f"rule weight must lie in (0, 1], got {self.weight}")
        if any(i < 0 for i in self.antecedent + self.consequent):
            raise FuzzyError("negative term indices (NOT hedges) are not supported")
        if not any(self.antecedent):
            raise FuzzyError("rule needs at least one antecedent clause")
        if not any(self.consequent):
            raise FuzzyError("rule needs at least one consequent")


def _check_rules(rules, inputs, outputs):
    if not rules:
        raise FuzzyError("rule base is empty")
    for k, rule in enumerate(rules, 1):
        if len(rule.antecedent) != len(inputs):
            raise FuzzyError(f"rule {k}: expected {len(inputs)} antecedent indices, got {len(rule.antecedent)}")
        if len(rule.consequent) != len(outputs):
            raise FuzzyError(f"rule {k}: expected {len(outputs)} consequent indices, got {len(rule.consequent)}")
        for idx, var in zip(rule.antecedent + rule.consequent, tuple(inputs) + tuple(outputs)):
            if idx > len(var.terms):
                raise FuzzyError(f"rule {k}: term index {idx} out of range for {var.name!r} ({len(var.terms)} terms)")


@dataclass(frozen=True)
class MamdaniSystem:
    inputs: tuple[LinguisticVariable, ...]
    outputs: tuple[LinguisticVariable, ...]
    rules: tuple[Rule, ...]
    config: InferenceConfig = field(default_factory=InferenceConfig)
    name: str = "mamdani"

    def __post_init__(self):
        for attr in ("inputs", "outputs", "rules"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        if not self.inputs or not self.outputs:
            raise FuzzyError("a Mamdani system needs at least one input and one output")
        for var in self.inputs + self.outputs:
            for term, mf in var.terms:
                if not isinstance(mf, SHAPES):
                    raise FuzzyError(f"{var.name!r}.{term}: Mamdani variables need shape MFs, got {mf.kind}")
        _check_rules(self.rules, self.inputs, self.outputs)

    @property
    def kind(self) -> str:
        return "mamdani"

    @cached_property
    def _grids(self):
        grids = []
        for o, var in enumerate(self.outputs):
            xs = uniform_grid(*var.universe, self.config.resolution)
            samples = np.array([mf(xs) for mf in var.functions])
            used = [(r, rule.consequent[o] - 1) for r, rule in enumerate(self.rules) if rule.consequent[o]]
            rule_idx = np.array([r for r, _ in used], dtype=int)
            term_idx = np.array([t for _, t in used], dtype=int)
            grids.append((xs, samples[term_idx], rule_idx))
        return grids

    def infer(self, inputs: Sequence[float], strict: bool = False) -> tuple[float, ...]:
        return mamdani_infer(self, inputs, strict=strict)


@dataclass(frozen=True)
class SugenoSystem:
    """Takagi-Sugeno system with a single output of linear/constant terms."""

    inputs: tuple[LinguisticVariable, ...]
    output: LinguisticVariable
    rules: tuple[Rule, ...]
    and_method: str = "prod"
    or_method: str = "max"
    name: str = "sugeno"

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "rules", tuple(self.rules))
        if not self.inputs:
            raise FuzzyError("a Sugeno system needs at least one input")
        if self.and_method not in AND_METHODS:
            raise FuzzyError(f"unknown and method {self.and_method!r}")
        if self.or_method not in OR_METHODS:
            raise FuzzyError(f"unknown or method {self.or_method!r}")
        for var in self.inputs:
            for term, mf in var.terms:
                if not isinstance(mf, SHAPES):
                    raise FuzzyError(f"{var.name!r}.{term}: inputs need shape MFs, got {mf.kind}")
        for term, fn in self.output.terms:
            if not isinstance(fn, CONSEQUENTS):
                raise FuzzyError(f"{self.output.name!r}.{term}: Sugeno outputs need linear/constant MFs")
            if isinstance(fn, Linear) and len(fn.coefficients) != len(self.inputs) + 1:
                raise FuzzyError(
                    f"{self.output.name!r}.{term}: linear consequent needs {len(self.inputs) + 1} coefficients, "
                    f"got {len(fn.coefficients)}"
                )
        _check_rules(self.rules, self.inputs, (self.output,))

    @property
    def kind(self) -> str:
        return "sugeno"

    @property
    def outputs(self) -> tuple[LinguisticVariable, ...]:
        return (self.output,)

    @property
    def config(self) -> InferenceConfig:
        return InferenceConfig(and_method=self.and_method, or_method=self.or_method)

    def infer(self, inputs: Sequence[float], strict: bool = False) -> tuple[float, ...]:
        return (sugeno_infer(self, inputs, strict=strict),)


FuzzySystem = MamdaniSystem | SugenoSystem


def fuzzify(variable: LinguisticVariable, x: float) -> tuple[float, ...]:
    """Degree of ``x`` in each term of ``variable``, in term order."""
    return tuple(float(mf(x)) for mf in variable.functions)


def rule_strength(degrees: Sequence[float], connective: str = "and", method: str = "min", weight: float = 1.0) -> float:
    """Combine the degrees of the participating clauses and scale by ``weight``."""
    if not degrees:
        raise FuzzyError("no antecedent degrees to combine")
    if connective == "and":
        if method == "min":
            s = min(degrees)
        elif method == "prod":
            s = math.prod(degrees)
        else:
            raise FuzzyError(f"unknown and method {method!r}")
    elif connective == "or":
        if method == "max":
            s = max(degrees)
        elif method == "probor":
            s = 0.0
            for d in degrees:
                s = s + d - s * d
        else:
            raise FuzzyError(f"unknown or method {method!r}")
    else:
        raise FuzzyError(f"unknown connective {connective!r}")
    return float(s) * weight


def _strengths(system, inputs) -> list[float]:
    if len(inputs) != len(system.inputs):
        raise FuzzyError(f"expected {len(system.inputs)} inputs, got {len(inputs)}")
    degrees = [fuzzify(var, float(x)) for var, x in zip(system.inputs, inputs)]
    out = []
    for rule in system.rules:
        clauses = [degrees[i][t - 1] for i, t in enumerate(rule.antecedent) if t]
        method = system.config.and_method if rule.connective == "and" else system.config.or_method
        out.append(rule_strength(clauses, rule.connective, method, rule.weight))
    return out


def uniform_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """``n`` uniform samples of [lo, hi], mirror-symmetric about the midpoint."""
    u = np.linspace(-1.0, 1.0, n)
    u = 0.5 * (u - u[::-1])
    xs = 0.5 * (lo + hi) + 0.5 * (hi - lo) * u
    xs[0], xs[-1] = lo, hi
    return xs


def defuzzify(xs, mu, method: str = "centroid") -> float:
    """Collapse a sampled membership curve on a uniform grid to a crisp value."""
    xs = np.asarray(xs, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if xs.ndim != 1 or xs.shape != mu.shape or xs.size < 3:
        raise FuzzyError("defuzzify needs matching 1-D samples with at least 3 points")
    if not np.any(mu > 0):
        raise ZeroActivation("aggregated output set is empty")
    if method == "centroid":
        w = mu.copy()
        w[0] *= 0.5
        w[-1] *= 0.5
        # folded about the midpoint so mirror-symmetric sets cancel exactly
        mid = 0.5 * (xs[0] + xs[-1])
        offset = 0.5 * (xs - xs[::-1])
        half = xs.size // 2
        trap = np.ones_like(xs)
        trap[0] = trap[-1] = 0.5
        num = np.dot(trap[:half] * offset[:half], mu[:half] - mu[::-1][:half])
        value = float(mid + num / w.sum())
    elif method == "bisector":
        area = np.concatenate(([0.0], np.cumsum(0.5 * (mu[1:] + mu[:-1]) * np.diff(xs))))
        half = 0.5 * area[-1]
        k = int(np.searchsorted(area, half))
        k = min(max(k, 1), xs.size - 1)
        seg = area[k] - area[k - 1]
        frac = 0.0 if seg == 0 else (half - area[k - 1]) / seg
        value = float(xs[k - 1] + frac * (xs[k] - xs[k - 1]))
    elif method == "mom":
        peak = mu.max()
        value = float(xs[mu >= peak * (1 - 1e-12)].mean())
    else:
        raise FuzzyError(f"unknown defuzzification method {method!r}")
    return min(max(value, float(xs[0])), float(xs[-1]))


def aggregate(strengths, samples, implication: str = "min", aggregation: str = "max"):
    """Implicate each rule's consequent samples and aggregate them row-wise."""
    s = np.asarray(strengths, dtype=float)[:, None]
    clipped = np.minimum(s, samples) if implication == "min" else s * samples
    if aggregation == "max":
        return clipped.max(axis=0)
    return np.minimum(1.0, clipped.sum(axis=0))


def mamdani_infer(system: MamdaniSystem, inputs: Sequence[float], strict: bool = False) -> tuple[float, ...]:
    """Crisp value per output.

    When no rule fires for an output, the output falls back to its universe
    midpoint, or :class:`ZeroActivation` is raised if ``strict``.
    """
    strengths = np.asarray(_strengths(system, inputs))
    cfg = system.config
    result = []
    for var, (xs, samples, rule_idx) in zip(system.outputs, system._grids):
        try:
            if rule_idx.size == 0:
                raise ZeroActivation(f"no rule targets output {var.name!r}")
            mu = aggregate(strengths[rule_idx], samples, cfg.implication, cfg.aggregation)
            result.append(defuzzify(xs, mu, cfg.defuzzification))
        except ZeroActivation:
            if strict:
                raise
            result.append(0.5 * (var.universe[0] + var.universe[1]))
    return tuple(result)


def sugeno_infer(system: SugenoSystem, inputs: Sequence[float], strict: bool = False) -> float:
    """Firing-strength weighted average of the rule consequents (0 when nothing fires)."""
    strengths = _strengths(system, inputs)
    functions = system.output.functions
    num = den = 0.0
    for w, rule in zip(strengths, system.rules):
        if w > 0:
            num += w * functions[rule.consequent[0] - 1].value(inputs)
            den += w
    if den == 0:
        if strict:
            raise ZeroActivation("no Sugeno rule fired")
        return 0.0
    return num / den


def infer(system: FuzzySystem, inputs: Sequence[float], strict: bool = False) -> tuple[float, ...]:
    return system.infer(inputs, strict=strict)


__all__ = [
    "Constant",
    "FuzzyError",
    "InferenceConfig",
    "Linear",
    "LinguisticVariable",
    "MamdaniSystem",
    "Rule",
    "SugenoSystem",
    "ZeroActivation",
    "aggregate",
    "defuzzify",
    "fuzzify",
    "infer",
    "mamdani_infer",
    "rule_strength",
    "sugeno_infer",
]
