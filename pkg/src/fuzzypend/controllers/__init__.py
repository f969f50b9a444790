"""Shipped fuzzy controllers and the state-to-force adapter.

The bundled ``.fis`` files in this directory are generated from the builders
below (see ``scripts/generate_controllers.py``); ``load_*`` reads the files.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from ..core import InferenceConfig, LinguisticVariable, MamdaniSystem, Rule, SugenoSystem
from ..fis import parse_fis, read_fis
from ..membership import Gaussian, Linear, Triangular
from ..plant import STATE_FIELDS, PlantState

POLE_FORCE = 10.0
# a +-10 N cart output sustains a 0.1 rad limit cycle from moderate tilts
CART_FORCE = 5.0
OUTPUT_TERMS = ("NVVB", "NVB", "NB", "N", "Z", "P", "PB", "PVB", "PVVB")
TERMS_7 = ("NB", "NM", "NS", "Z", "PS", "PM", "PB")
TERMS_5 = ("NB", "N", "Z", "P", "PB")
TERMS_4 = ("NB", "NS", "PS", "PB")

# per-state gains of the Sugeno consequents: inner and outer terms
TS_THETA_GAIN = (35.0, 45.0)
TS_THETA_DOT_GAIN = (12.0, 14.0)
TS_X_GAIN = 1.0
TS_X_DOT_GAIN = 2.5

SHIPPED = {
    "ts": ("ts_default.fis",),
    "mamdani": ("mamdani_pole.fis", "mamdani_cart.fis"),
}


def _centers(half_width: float, n: int, pad: int = 0) -> list[float]:
    # rounding keeps the values readable in the FIS files and exactly antisymmetric
    return [round(half_width * (2 * k - (n - 1)) / (n - 1), 12) for k in range(-pad, n + pad)]


def triangular_partition(name: str, half_width: float, labels) -> LinguisticVariable:
    """Uniform 50%-overlap triangles; the end peaks sit on the universe edges."""
    cs = _centers(half_width, len(labels), pad=1)
    terms = [(lab, Triangular(*cs[k : k + 3])) for k, lab in enumerate(labels)]
    return LinguisticVariable(name, (-half_width, half_width), terms)


def gaussian_partition(name: str, half_width: float, labels) -> LinguisticVariable:
    """Uniform Gaussian centers with sigma equal to half the center spacing."""
    cs = _centers(half_width, len(labels))
    sigma = round((cs[1] - cs[0]) / 2, 12)
    return LinguisticVariable(name, (-half_width, half_width), [(lab, Gaussian(sigma, c)) for lab, c in zip(labels, cs)])


def diagonal_rules(n_first: int, n_second: int, n_out: int) -> list[Rule]:
    """Full grid; consequent offset is the clamped sum of the antecedent offsets."""
    rules = []
    mid_out = n_out // 2
    for i in range(n_first):
        for j in range(n_second):
            offset = (i - n_first // 2) + (j - n_second // 2)
            offset = max(-mid_out, min(mid_out, offset))
            rules.append(Rule((i + 1, j + 1), (offset + mid_out + 1,)))
    return rules


def build_mamdani_pole(config: InferenceConfig | None = None, force: float = POLE_FORCE) -> MamdaniSystem:
    inputs = (triangular_partition("theta", 0.3, TERMS_7), triangular_partition("theta_dot", 1.0, TERMS_5))
    output = triangular_partition("force", force, OUTPUT_TERMS)
    return MamdaniSystem(inputs, (output,), diagonal_rules(7, 5, 9), config or InferenceConfig(), "mamdani_pole")


def build_mamdani_cart(config: InferenceConfig | None = None, force: float = CART_FORCE) -> MamdaniSystem:
    # 5 terms on position and 7 on velocity: with 7 on position the linearized
    # loop has an unstable oscillatory pair
    inputs = (triangular_partition("x", 3.0, TERMS_5), triangular_partition("x_dot", 6.0, TERMS_7))
    output = triangular_partition("force", force, OUTPUT_TERMS)
    return MamdaniSystem(inputs, (output,), diagonal_rules(5, 7, 9), config or InferenceConfig(), "mamdani_cart")


def build_sugeno() -> SugenoSystem:
    inputs = (
        gaussian_partition("theta", 0.3, TERMS_4),
        gaussian_partition("theta_dot", 1.0, TERMS_4),
        gaussian_partition("x", 3.0, TERMS_4),
        gaussian_partition("x_dot", 6.0, TERMS_4),
    )
    terms, rules = [], []
    for i, ti in enumerate(TERMS_4):
        outer_i = i in (0, 3)
        for j, tj in enumerate(TERMS_4):
            outer_j = j in (0, 3)
            coeffs = (TS_THETA_GAIN[outer_i], TS_THETA_DOT_GAIN[outer_j], TS_X_GAIN, TS_X_DOT_GAIN, 0.0)
            terms.append((f"{ti}_{tj}", Linear(coeffs)))
            rules.append(Rule((i + 1, j + 1, 0, 0), (len(terms),)))
    output = LinguisticVariable("force", (-20.0, 20.0), terms)
    return SugenoSystem(inputs, output, rules, and_method="prod", or_method="max", name="ts_default")


@dataclass(frozen=True)
class SingleController:
    """One fuzzy system fed the state components named in ``input_map``."""

    system: MamdaniSystem | SugenoSystem
    input_map: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "input_map", tuple(self.input_map))
        if len(self.input_map) != len(self.system.inputs):
            raise ValueError(f"input map has {len(self.input_map)} entries, system has {len(self.system.inputs)} inputs")
        bad = [s for s in self.input_map if s not in STATE_FIELDS]
        if bad:
            raise ValueError(f"unknown state selectors {bad}; expected names from {STATE_FIELDS}")

    def force(self, state: PlantState) -> float:
        return self.system.infer([getattr(state, s) for s in self.input_map])[0]


@dataclass(frozen=True)
class CompositeController:
    """Pole controller over (theta, theta_dot) plus cart controller over (x, x_dot)."""

    pole: MamdaniSystem | SugenoSystem
    cart: MamdaniSystem | SugenoSystem

    def __post_init__(self):
        for sysm in (self.pole, self.cart):
            if len(sysm.inputs) != 2:
                raise ValueError(f"composite sub-controller {sysm.name!r} must have 2 inputs")

    def force(self, state: PlantState) -> float:
        return (
            self.pole.infer((state.theta, state.theta_dot))[0]
            + self.cart.infer((state.x, state.x_dot))[0]
        )


Controller = SingleController | CompositeController


def control_force(controller: Controller, state: PlantState) -> float:
    """Force (N) the controller applies to the cart in ``state``."""
    return controller.force(state)


def single_from_names(system) -> SingleController:
    """Wire a system whose input variables are named after state components."""
    return SingleController(system, tuple(v.name for v in system.inputs))


def shipped_path(filename: str) -> Path:
    return Path(str(resources.files(__package__).joinpath(filename)))


def _load(filename: str):
    return parse_fis(resources.files(__package__).joinpath(filename).read_text(encoding="ascii"))


@lru_cache(maxsize=None)
def default_sugeno_controller() -> SingleController:
    return single_from_names(_load(SHIPPED["ts"][0]))


@lru_cache(maxsize=None)
def default_mamdani_controller() -> CompositeController:
    pole, cart = (_load(f) for f in SHIPPED["mamdani"])
    return CompositeController(pole, cart)


def build_controller(kind: str) -> Controller:
    """Programmatic twin of the shipped controller ``kind``."""
    if kind == "ts":
        return single_from_names(build_sugeno())
    if kind == "mamdani":
        return CompositeController(build_mamdani_pole(), build_mamdani_cart())
    raise ValueError(f"unknown controller {kind!r}")


def resolve_controller(spec: str) -> Controller:
    """``ts``, ``mamdani``, one FIS path, or ``POLE.fis,CART.fis``."""
    if spec == "ts":
        return default_sugeno_controller()
    if spec == "mamdani":
        return default_mamdani_controller()
    paths = [p for p in spec.split(",") if p]
    if len(paths) not in (1, 2):
        raise ValueError(f"controller spec {spec!r}: expected 'ts', 'mamdani', or one or two FIS paths")
    systems = [read_fis(p) for p in paths]
    if len(systems) == 1:
        return single_from_names(systems[0])
    return CompositeController(*systems)
