import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fuzzypend.core import (
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
    uniform_grid,
)
from fuzzypend.membership import Constant, Gaussian, Linear, Triangular

from factories import mamdani_systems, random_inputs, random_mamdani, random_sugeno, seeds, sugeno_systems
from oracles import centroid_closed_form_ramp, mamdani_oracle, sugeno_oracle


@pytest.fixture
def two_terms():
    return LinguisticVariable("v", (-1, 2), [("A", Triangular(-1, 0, 1)), ("B", Triangular(0, 1, 2))])


def test_fuzzify_examples(two_terms):
    assert fuzzify(two_terms, 0.5) == (0.5, 0.5)
    assert fuzzify(two_terms, 0) == (1.0, 0.0)
    assert fuzzify(two_terms, -2) == (0.0, 0.0)


def test_rule_strength_examples():
    assert rule_strength((0.3, 0.7), "and", "min") == 0.3
    assert rule_strength((0.3, 0.7), "and", "prod") == pytest.approx(0.21, abs=1e-15)
    assert rule_strength((0.3, 0.7), "or", "max", weight=0.5) == 0.35
    assert rule_strength((0.3, 0.7), "or", "probor") == pytest.approx(0.79, abs=1e-15)


def test_variable_invariants():
    with pytest.raises(FuzzyError):
        LinguisticVariable("v", (1, 1), [("A", Triangular(0, 1, 2))])
    with pytest.raises(FuzzyError):
        LinguisticVariable("v", (0, 1), [])
    with pytest.raises(FuzzyError):
        LinguisticVariable("v", (0, 1), [("A", Triangular(0, 1, 2)), ("A", Triangular(0, 1, 2))])


def test_rule_invariants():
    with pytest.raises(FuzzyError):
        Rule((0, 0), (1,))
    with pytest.raises(FuzzyError):
        Rule((1, -1), (1,))
    with pytest.raises(FuzzyError):
        Rule((1,), (1,), weight=0)
    with pytest.raises(FuzzyError):
        Rule((1,), (1,), weight=1.5)


def test_config_invariants():
    with pytest.raises(FuzzyError):
        InferenceConfig(resolution=2)
    with pytest.raises(FuzzyError):
        InferenceConfig(defuzzification="lom")


def test_system_rejects_bad_rule_index(two_terms):
    out = LinguisticVariable("y", (0, 1), [("T", Triangular(0, 0.5, 1))])
    with pytest.raises(FuzzyError, match="out of range"):
        MamdaniSystem([two_terms], [out], [Rule((3,), (1,))])
    with pytest.raises(FuzzyError, match="empty"):
        MamdaniSystem([two_terms], [out], [])


# -- defuzzification -----------------------------------------------------------


def test_centroid_symmetric_triangle():
    xs = np.linspace(-1, 1, 1001)
    assert defuzzify(xs, Triangular(-1, 0, 1)(xs)) == pytest.approx(0, abs=1e-12)


def test_centroid_ramp_matches_closed_form():
    xs = np.linspace(0, 1, 1001)
    # trapezoid bias is h^2 / 3 for this ramp
    assert defuzzify(xs, xs) == pytest.approx(centroid_closed_form_ramp(), abs=1e-6)
    xs = np.linspace(0, 1, 100001)
    assert defuzzify(xs, xs) == pytest.approx(2 / 3, abs=1e-10)


def test_centroid_uniform_mass():
    xs = np.linspace(-3, 7, 1001)
    assert defuzzify(xs, np.full_like(xs, 0.4)) == pytest.approx(2.0, abs=1e-12)


def test_bisector_and_mom():
    xs = np.linspace(0, 4, 4001)
    mu = np.full_like(xs, 0.5)
    assert defuzzify(xs, mu, "bisector") == pytest.approx(2.0, abs=1e-9)
    mu = Triangular(0, 1, 4)(xs)
    assert defuzzify(xs, mu, "mom") == pytest.approx(1.0, abs=1e-12)
    # bisector of the triangle: the right tail beyond c has area (4-c)^2/6 = 1
    assert defuzzify(xs, mu, "bisector") == pytest.approx(4 - np.sqrt(6), abs=1e-6)


def test_defuzzify_empty_set_raises():
    xs = np.linspace(0, 1, 11)
    with pytest.raises(ZeroActivation):
        defuzzify(xs, np.zeros_like(xs))
    with pytest.raises(FuzzyError):
        defuzzify(xs[:2], xs[:2])


# -- Mamdani -------------------------------------------------------------------


def _single_rule_system():
    var_in = LinguisticVariable("x", (0, 2), [("T", Triangular(0, 1, 2))])
    var_out = LinguisticVariable("y", (-4, 6), [("T", Triangular(-1, 1, 3))])
    return MamdaniSystem([var_in], [var_out], [Rule((1,), (1,))])


def test_mamdani_single_symmetric_rule():
    assert mamdani_infer(_single_rule_system(), [1.0])[0] == pytest.approx(1.0, abs=1e-9)


def test_mamdani_symmetric_pair_gives_midpoint():
    var_in = LinguisticVariable("x", (-1, 1), [("A", Triangular(-1, 0, 1)), ("B", Triangular(-1, 0, 1))])
    var_out = LinguisticVariable("y", (0, 10), [("L", Triangular(0, 2, 4)), ("R", Triangular(6, 8, 10))])
    system = MamdaniSystem([var_in], [var_out], [Rule((1,), (1,)), Rule((2,), (2,))])
    assert mamdani_infer(system, [0.3])[0] == pytest.approx(5.0, abs=1e-9)


def test_mamdani_zero_activation_fallback():
    system = _single_rule_system()
    assert mamdani_infer(system, [5.0]) == (1.0,)
    with pytest.raises(ZeroActivation):
        mamdani_infer(system, [5.0], strict=True)


def test_mamdani_arity_checked():
    with pytest.raises(FuzzyError):
        mamdani_infer(_single_rule_system(), [1.0, 2.0])


def test_mamdani_multiple_outputs():
    var_in = LinguisticVariable("x", (0, 1), [("A", Triangular(0, 0, 1)), ("B", Triangular(0, 1, 1))])
    out1 = LinguisticVariable("y", (0, 1), [("lo", Triangular(0, 0, 0.5)), ("hi", Triangular(0.5, 1, 1))])
    out2 = LinguisticVariable("z", (-1, 1), [("mid", Triangular(-0.5, 0, 0.5))])
    system = MamdaniSystem([var_in], [out1, out2], [Rule((1,), (1, 0)), Rule((2,), (2, 1))])
    y, z = mamdani_infer(system, [0.0])
    assert y < 0.5
    assert z == 0.0  # only rule 2 drives z and it does not fire
    assert mamdani_infer(system, [1.0])[1] == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_mamdani_matches_pointwise_oracle(seed):
    rng = np.random.default_rng(seed)
    system = random_mamdani(rng)
    for _ in range(3):
        x = random_inputs(rng, system)
        assert mamdani_infer(system, x)[0] == pytest.approx(mamdani_oracle(system, x, 1001)[0], abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(mamdani_systems, st.data())
def test_mamdani_output_within_universe(system, data):
    x = [data.draw(st.floats(*v.universe)) for v in system.inputs]
    y = mamdani_infer(system, x)[0]
    lo, hi = system.outputs[0].universe
    assert lo <= y <= hi


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_mamdani_resolution_convergence(seed):
    rng = np.random.default_rng(seed)
    coarse = random_mamdani(rng, resolution=1001)
    fine = MamdaniSystem(coarse.inputs, coarse.outputs, coarse.rules,
                         InferenceConfig(**{**coarse.config.__dict__, "resolution": 100100}), coarse.name)
    x = random_inputs(rng, coarse)
    assert mamdani_infer(coarse, x)[0] == pytest.approx(mamdani_infer(fine, x)[0], abs=1e-4)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_mamdani_continuity_probe(seed):
    rng = np.random.default_rng(seed)
    system = random_mamdani(rng)
    system = MamdaniSystem(system.inputs, system.outputs, system.rules,
                           InferenceConfig(and_method="prod", implication="prod"), system.name)
    x = random_inputs(rng, system)
    y0 = mamdani_infer(system, x)[0]
    x[0] += 1e-9
    assert abs(mamdani_infer(system, x)[0] - y0) < 1e-5


# -- Sugeno --------------------------------------------------------------------


def _two_rule_sugeno(z1, z2, w1, w2):
    var = LinguisticVariable("x", (-1, 1), [("A", Triangular(-1, 0, 1)), ("B", Triangular(-1, 0, 1))])
    out = LinguisticVariable("y", (-10, 10), [("a", Constant(z1)), ("b", Constant(z2))])
    return SugenoSystem([var], out, [Rule((1,), (1,), w1), Rule((2,), (2,), w2)])


def test_sugeno_examples():
    assert sugeno_infer(_two_rule_sugeno(1, 3, 1, 1), [0]) == pytest.approx(2)
    assert sugeno_infer(_two_rule_sugeno(1, 3, 0.2, 0.8), [0]) == pytest.approx(2.6)
    var = LinguisticVariable("x", (-1, 1), [("A", Triangular(-1, 0, 1)), ("B", Triangular(1, 2, 3))])
    out = LinguisticVariable("y", (-10, 10), [("a", Constant(7)), ("b", Constant(99))])
    assert sugeno_infer(SugenoSystem([var], out, [Rule((1,), (1,)), Rule((2,), (2,))]), [0]) == 7


def test_sugeno_weighted_average_derived():
    # degrees 0.2 and 0.8 from two complementary ramps, z = (0, 10): 0.2*0 + 0.8*10
    var = LinguisticVariable("x", (0, 1), [("L", Triangular(0, 0, 1)), ("R", Triangular(0, 1, 1))])
    out = LinguisticVariable("y", (-10, 10), [("a", Constant(0)), ("b", Constant(10))])
    system = SugenoSystem([var], out, [Rule((1,), (1,)), Rule((2,), (2,))])
    assert sugeno_infer(system, [0.8]) == pytest.approx(8.0, abs=1e-12)


def test_sugeno_linear_consequent():
    var = LinguisticVariable("x", (0, 1), [("A", Gaussian(1, 0.5))])
    out = LinguisticVariable("y", (-10, 10), [("lin", Linear((2, 1)))])
    assert sugeno_infer(SugenoSystem([var], out, [Rule((1,), (1,))]), [0.25]) == 1.5


def test_sugeno_zero_activation():
    var = LinguisticVariable("x", (0, 1), [("A", Triangular(0, 0.5, 1))])
    out = LinguisticVariable("y", (-10, 10), [("c", Constant(4))])
    system = SugenoSystem([var], out, [Rule((1,), (1,))])
    assert sugeno_infer(system, [3]) == 0.0
    with pytest.raises(ZeroActivation):
        sugeno_infer(system, [3], strict=True)


def test_sugeno_rejects_wrong_coefficient_count():
    var = LinguisticVariable("x", (0, 1), [("A", Triangular(0, 0.5, 1))])
    out = LinguisticVariable("y", (-10, 10), [("lin", Linear((1, 2, 3)))])
    with pytest.raises(FuzzyError, match="coefficients"):
        SugenoSystem([var], out, [Rule((1,), (1,))])


@settings(max_examples=100, deadline=None)
@given(sugeno_systems, st.data())
def test_sugeno_matches_oracle_and_stays_in_hull(system, data):
    x = [data.draw(st.floats(*v.universe)) for v in system.inputs]
    y = sugeno_infer(system, x)
    assert y == pytest.approx(sugeno_oracle(system, x), abs=1e-12, rel=1e-12)
    active = [
        system.output.terms[r.consequent[0] - 1][1].value(x)
        for r, w in zip(system.rules, _weights(system, x)) if w > 0
    ]
    if active:
        assert min(active) - 1e-9 <= y <= max(active) + 1e-9


def _weights(system, x):
    from oracles import _degrees, _firing
    d = _degrees(system, x)
    return [_firing(r, d, system.and_method, system.or_method) for r in system.rules]


@settings(max_examples=100, deadline=None)
@given(seeds, st.floats(min_value=0.01, max_value=1.0))
def test_sugeno_invariant_under_weight_scaling(seed, k):
    rng = np.random.default_rng(seed)
    system = random_sugeno(rng, n_rules=16)
    scaled = SugenoSystem(system.inputs, system.output,
                          [Rule(r.antecedent, r.consequent, r.weight * k, r.connective) for r in system.rules],
                          system.and_method, system.or_method)
    x = random_inputs(rng, system)
    assert sugeno_infer(scaled, x) == pytest.approx(sugeno_infer(system, x), abs=1e-12, rel=1e-12)


def test_systems_are_hashable_and_comparable():
    a = _single_rule_system()
    b = _single_rule_system()
    assert a == b and hash(a) == hash(b)
    a.infer([1.0])  # populating the sample cache must not affect equality
    assert a == b


def test_subgrid_features_are_not_resolved():
    # a flank narrower than one grid cell is beyond what sampling at 1001 points can converge on
    lo, hi = 3.1562354996987096, 7.952753625157758
    spike = Triangular(6.854939, 6.901658, 6.906399)
    background = Gaussian(1.61383, 5.006918)

    def centroid(n):
        xs = uniform_grid(lo, hi, n)
        return defuzzify(xs, np.maximum(spike(xs), np.minimum(background(xs), 0.01)))

    assert abs(centroid(1001) - centroid(100001)) > 1e-4
