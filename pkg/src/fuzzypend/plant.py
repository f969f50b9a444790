"""Inverted pendulum on a cart: nonlinear dynamics and fixed-step integration."""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass
from typing import Callable

STATE_FIELDS = ("x", "x_dot", "theta", "theta_dot")


class NonFiniteInput(ValueError):
    """State or force contains NaN or infinity."""


@dataclass(frozen=True)
class PlantParams:
    m: float = 0.1  # pendulum mass, kg
    M: float = 1.0  # cart mass, kg
    l: float = 1.0  # half pendulum length, m
    g: float = 10.0

    def __post_init__(self):
        for name, v in zip(("m", "M", "l", "g"), astuple(self)):
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"plant parameter {name} must be finite and > 0, got {v}")


@dataclass(frozen=True)
class PlantState:
    x: float = 0.0
    x_dot: float = 0.0
    theta: float = 0.0
    theta_dot: float = 0.0

    def __post_init__(self):
        for name in STATE_FIELDS:
            object.__setattr__(self, name, float(getattr(self, name)))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x, self.x_dot, self.theta, self.theta_dot)

    def __neg__(self) -> PlantState:
        return PlantState(-self.x, -self.x_dot, -self.theta, -self.theta_dot)

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in self.as_tuple())


@dataclass(frozen=True)
class StateDerivative:
    x_dot: float
    x_ddot: float
    theta_dot: float
    theta_ddot: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x_dot, self.x_ddot, self.theta_dot, self.theta_ddot)


@dataclass(frozen=True)
class StateLimits:
    theta: float = 0.3
    theta_dot: float = 1.0
    x: float = 3.0
    x_dot: float = 6.0

    def __post_init__(self):
        for name in STATE_FIELDS:
            v = getattr(self, name)
            if not v > 0:
                raise ValueError(f"limit on {name} must be > 0, got {v}")


def _rhs(x_dot, theta, theta_dot, F, p: PlantParams):
    total = p.m + p.M
    s, c = math.sin(theta), math.cos(theta)
    theta_ddot = (p.g * s - c * (F + p.m * p.l * theta_dot**2 * s) / total) / (
        p.l * (4.0 / 3.0 - p.m * c**2 / total)
    )
    x_ddot = (F + p.m * p.l * (theta_dot**2 * s - theta_ddot * c)) / total
    return x_dot, x_ddot, theta_dot, theta_ddot


def derivatives(state: PlantState, F: float, params: PlantParams = PlantParams()) -> StateDerivative:
    """Right-hand side of the cart-pole equations; the angular acceleration is
    solved first and the cart acceleration reuses it."""
    if not (state.is_finite() and math.isfinite(F)):
        raise NonFiniteInput(f"non-finite state {state} or force {F}")
    return StateDerivative(*_rhs(state.x_dot, state.theta, state.theta_dot, float(F), params))


def _rk4(y, F, dt, p):
    def f(v):
        return _rhs(v[1], v[2], v[3], F, p)

    k1 = f(y)
    k2 = f(tuple(a + 0.5 * dt * b for a, b in zip(y, k1)))
    k3 = f(tuple(a + 0.5 * dt * b for a, b in zip(y, k2)))
    k4 = f(tuple(a + dt * b for a, b in zip(y, k3)))
    return tuple(a + dt / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4))


def _euler(y, F, dt, p):
    k = _rhs(y[1], y[2], y[3], F, p)
    return tuple(a + dt * b for a, b in zip(y, k))


INTEGRATORS = {"rk4": _rk4, "euler": _euler}


def step(
    state: PlantState,
    force_fn: Callable[[float], float] | float,
    t: float,
    dt: float,
    method: str = "rk4",
    params: PlantParams = PlantParams(),
) -> PlantState:
    """Advance ``state`` from ``t`` to ``t + dt``.

    The force is sampled once at ``t`` and held for every stage (zero-order hold).
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    try:
        integrate = INTEGRATORS[method]
    except KeyError:
        raise ValueError(f"unknown integrator {method!r}; expected one of {sorted(INTEGRATORS)}") from None
    F = float(force_fn(t) if callable(force_fn) else force_fn)
    if not (state.is_finite() and math.isfinite(F)):
        raise NonFiniteInput(f"non-finite state {state} or force {F}")
    return PlantState(*integrate(state.as_tuple(), F, dt, params))


def integrate(
    state: PlantState,
    force_fn: Callable[[float], float] | float,
    duration: float,
    dt: float,
    method: str = "rk4",
    params: PlantParams = PlantParams(),
) -> PlantState:
    """Open-loop integration over ``round(duration / dt)`` fixed steps."""
    n = round(duration / dt)
    for k in range(n):
        state = step(state, force_fn, k * dt, dt, method, params)
    return state


def check_limits(state: PlantState, limits: StateLimits = StateLimits()) -> list[str]:
    """Names of the state components whose magnitude is not strictly inside its bound."""
    return [name for name in ("theta", "theta_dot", "x", "x_dot") if not abs(getattr(state, name)) < getattr(limits, name)]


def linearized_theta_ddot(theta: float, params: PlantParams = PlantParams()) -> float:
    """Small-angle angular acceleration with no force and no angular velocity."""
    return params.g * theta / (params.l * (4.0 / 3.0 - params.m / (params.m + params.M)))
