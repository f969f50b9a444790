"""Membership functions and Sugeno consequent functions.

Shape functions accept a float or a numpy array and return the same kind.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _finite(*values: float) -> bool:
    return all(math.isfinite(v) for v in values)


def _rising(x, a: float, b: float):
    if b > a:
        return (x - a) / (b - a)
    return np.where(x >= a, 1.0, 0.0)


def _falling(x, c: float, d: float):
    if d > c:
        return (d - x) / (d - c)
    return np.where(x <= d, 1.0, 0.0)


def _as_result(value, x):
    if np.ndim(x) == 0:
        return float(value)
    return value


@dataclass(frozen=True)
class Triangular:
    a: float
    b: float
    c: float

    kind = "trimf"

    def __post_init__(self):
        if not _finite(self.a, self.b, self.c):
            raise ValueError("triangular parameters must be finite")
        if not self.a <= self.b <= self.c:
            raise ValueError(f"triangular parameters must satisfy a <= b <= c, got {self.params}")

    @property
    def params(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c)

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        mu = np.clip(np.minimum(_rising(xs, self.a, self.b), _falling(xs, self.b, self.c)), 0.0, 1.0)
        return _as_result(mu, x)


@dataclass(frozen=True)
class Trapezoidal:
    a: float
    b: float
    c: float
    d: float

    kind = "trapmf"

    def __post_init__(self):
        if not _finite(self.a, self.b, self.c, self.d):
            raise ValueError("trapezoidal parameters must be finite")
        if not self.a <= self.b <= self.c <= self.d:
            raise ValueError(f"trapezoidal parameters must satisfy a <= b <= c <= d, got {self.params}")

    @property
    def params(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        mu = np.minimum(_rising(xs, self.a, self.b), _falling(xs, self.c, self.d))
        mu = np.clip(mu, 0.0, 1.0)
        return _as_result(mu, x)


@dataclass(frozen=True)
class Gaussian:
    """exp(-(x - center)**2 / (2 sigma**2)); parameters ordered as in gaussmf."""

    sigma: float
    center: float

    kind = "gaussmf"

    def __post_init__(self):
        if not _finite(self.sigma, self.center):
            raise ValueError("gaussian parameters must be finite")
        if not self.sigma > 0:
            raise ValueError(f"gaussian sigma must be > 0, got {self.sigma}")

    @property
    def params(self) -> tuple[float, ...]:
        return (self.sigma, self.center)

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        mu = np.exp(-((xs - self.center) ** 2) / (2.0 * self.sigma**2))
        return _as_result(mu, x)


@dataclass(frozen=True)
class Linear:
    """First-order Sugeno consequent: coefficients over the inputs, then a constant."""

    coefficients: tuple[float, ...]

    kind = "linear"

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if len(self.coefficients) < 1:
            raise ValueError("linear consequent needs at least the constant term")
        if not _finite(*self.coefficients):
            raise ValueError("linear coefficients must be finite")

    @property
    def params(self) -> tuple[float, ...]:
        return self.coefficients

    def value(self, inputs) -> float:
        *gains, constant = self.coefficients
        return float(sum(g * v for g, v in zip(gains, inputs)) + constant)


@dataclass(frozen=True)
class Constant:
    """Zero-order Sugeno consequent."""

    constant: float

    kind = "constant"

    def __post_init__(self):
        if not _finite(self.constant):
            raise ValueError("constant consequent must be finite")

    @property
    def params(self) -> tuple[float, ...]:
        return (self.constant,)

    def value(self, inputs) -> float:
        return float(self.constant)


SHAPES = (Triangular, Trapezoidal, Gaussian)
CONSEQUENTS = (Linear, Constant)
MembershipFunction = Triangular | Trapezoidal | Gaussian


def eval_mf(mf: MembershipFunction, x):
    """Degree of membership of ``x`` in ``mf``."""
    return mf(x)


def from_params(kind: str, params) -> Triangular | Trapezoidal | Gaussian | Linear | Constant:
    """Build a function from its FIS type token and parameter list."""
    params = [float(p) for p in params]
    arity = {"trimf": 3, "trapmf": 4, "gaussmf": 2, "constant": 1}
    if kind in arity and len(params) != arity[kind]:
        raise ValueError(f"{kind} takes {arity[kind]} parameters, got {len(params)}")
    if kind == "trimf":
        return Triangular(*params)
    if kind == "trapmf":
        return Trapezoidal(*params)
    if kind == "gaussmf":
        return Gaussian(*params)
    if kind == "linear":
        return Linear(tuple(params))
    if kind == "constant":
        return Constant(params[0])
    raise ValueError(f"unsupported MF type {kind!r}")
