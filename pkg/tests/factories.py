"""Random valid fuzzy systems, seeded through numpy Generators."""
import numpy as np
from hypothesis import strategies as st

from fuzzypend.core import InferenceConfig, LinguisticVariable, MamdaniSystem, Rule, SugenoSystem
from fuzzypend.membership import Constant, Gaussian, Linear, Trapezoidal, Triangular


def _round(v):
    return float(np.round(v, 6))


def random_shape(rng, lo, hi, kinds=("trimf", "trapmf", "gaussmf"), min_gap=0.0):
    """``min_gap`` is the smallest breakpoint spacing, as a fraction of ``hi - lo``."""
    kind = kinds[rng.integers(len(kinds))]
    width = hi - lo
    if kind == "gaussmf":
        return Gaussian(_round(rng.uniform(0.05, 0.5) * width), _round(rng.uniform(lo, hi)))
    n = 3 if kind == "trimf" else 4
    while True:
        pts = sorted(_round(v) for v in rng.uniform(lo - 0.2 * width, hi + 0.2 * width, n))
        if min(np.diff(pts)) >= min_gap * width:
            break
    return Triangular(*pts) if kind == "trimf" else Trapezoidal(*pts)


def random_variable(rng, name, n_terms=None, kinds=("trimf", "trapmf", "gaussmf")):
    lo = _round(rng.uniform(-10, 5))
    hi = _round(lo + rng.uniform(0.5, 10))
    n_terms = n_terms or int(rng.integers(2, 6))
    terms = [(f"T{k}", random_shape(rng, lo, hi, kinds)) for k in range(n_terms)]
    return LinguisticVariable(name, (lo, hi), terms)


def _antecedent(rng, inputs, allow_dont_care=True):
    while True:
        idx = tuple(int(rng.integers(0 if allow_dont_care else 1, len(v.terms) + 1)) for v in inputs)
        if any(idx):
            return idx


def random_mamdani(rng, n_inputs=2, n_outputs=1, n_rules=None, defuzz="centroid", resolution=1001):
    inputs = [random_variable(rng, f"in{k}") for k in range(n_inputs)]
    outputs = [random_variable(rng, f"out{k}") for k in range(n_outputs)]
    rules = []
    for _ in range(n_rules or int(rng.integers(3, 11))):
        cons = tuple(int(rng.integers(1, len(v.terms) + 1)) for v in outputs)
        weight = 1.0 if rng.random() < 0.5 else _round(rng.uniform(0.1, 1.0))
        rules.append(Rule(_antecedent(rng, inputs), cons, weight, "and" if rng.random() < 0.7 else "or"))
    config = InferenceConfig(
        and_method=("min", "prod")[rng.integers(2)],
        or_method=("max", "probor")[rng.integers(2)],
        implication=("min", "prod")[rng.integers(2)],
        aggregation=("max", "bsum")[rng.integers(2)],
        defuzzification=defuzz or ("centroid", "bisector", "mom")[rng.integers(3)],
        resolution=resolution,
    )
    return MamdaniSystem(inputs, outputs, rules, config, name=f"rand{rng.integers(1000)}")


def random_sugeno(rng, n_inputs=2, n_rules=16):
    inputs = [random_variable(rng, f"in{k}") for k in range(n_inputs)]
    terms = []
    for k in range(n_rules):
        if rng.random() < 0.8:
            terms.append((f"z{k}", Linear(tuple(_round(c) for c in rng.normal(0, 3, n_inputs + 1)))))
        else:
            terms.append((f"z{k}", Constant(_round(rng.normal(0, 3)))))
    output = LinguisticVariable("out", (-50.0, 50.0), terms)
    rules = [
        Rule(_antecedent(rng, inputs), (k + 1,), 1.0 if rng.random() < 0.5 else _round(rng.uniform(0.1, 1)),
             "and" if rng.random() < 0.7 else "or")
        for k in range(n_rules)
    ]
    return SugenoSystem(inputs, output, rules, and_method=("min", "prod")[rng.integers(2)],
                        or_method=("max", "probor")[rng.integers(2)], name="rand_ts")


def random_inputs(rng, system):
    return [float(rng.uniform(*v.universe)) for v in system.inputs]


seeds = st.integers(min_value=0, max_value=2**32 - 1)
mamdani_systems = seeds.map(lambda s: random_mamdani(np.random.default_rng(s), defuzz=None))
sugeno_systems = seeds.map(lambda s: random_sugeno(np.random.default_rng(s), n_inputs=int(np.random.default_rng(s).integers(1, 4)), n_rules=int(np.random.default_rng(s + 1).integers(1, 17))))
any_systems = st.one_of(mamdani_systems, sugeno_systems)
