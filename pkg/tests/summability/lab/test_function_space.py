import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from summability.lab.constants import DEFAULT_SEED
from summability.lab.exceptions import DomainError, EvaluationError
from summability.lab.function_space import (
    classical_modulus2,
    conj_modulus2,
    make_abs_sine_power,
    make_constant,
    make_cosine,
    make_sine,
    make_weierstrass,
    ModulusCurve,
    norm,
    NormSpace,
    PeriodicFunction,
    phi,
    psi,
    trig_poly,
)


def test_trig_poly_evaluates_its_coefficients():
    f = trig_poly([2.0, 1.0], [0.0, 3.0])
    x = np.linspace(-math.pi, math.pi, 17)

    assert f(x) == pytest.approx(1.0 + np.cos(x) + 3.0 * np.sin(x), abs=1e-14)
    assert f.degree_hint == 1
    assert f.coeff_source == ((2.0, 1.0), (0.0, 3.0))


def test_trig_poly_scalar_and_array_shapes():
    f = trig_poly([0.0, 1.0])

    assert f(0.0).shape == ()
    assert f(np.zeros((3, 4))).shape == (3, 4)


def test_periodic_function_rejects_coefficients_above_degree():
    with pytest.raises(ValidationError) as cv:
        PeriodicFunction(
            evaluator=np.cos,
            degree_hint=1,
            coeff_source=((0.0, 1.0, 0.5), (0.0, 0.0, 0.0)),
        )

    assert 'above degree 1' in str(cv.value)


def test_periodic_function_rejects_unbalanced_coefficients():
    with pytest.raises(ValidationError):
        PeriodicFunction(evaluator=np.cos, coeff_source=((0.0, 1.0), (0.0,)))


def test_is_periodic(trig_poly_factory):
    assert trig_poly_factory(6, seed=3).is_periodic()
    assert not PeriodicFunction(evaluator=lambda x: x).is_periodic()


def test_scaled_scales_values_and_coefficients():
    f = make_cosine(2).scaled(3.0)

    assert f(0.0) == pytest.approx(3.0)
    assert f.coeff_source[0][2] == 3.0


@pytest.mark.parametrize(
    'options',
    (
        {'kind': 'Lp'},
        {'kind': 'Lp', 'p': 0.5},
        {'kind': 'C', 'p': 2},
        {'kind': 'C', 'grid_size': 63},
        {'kind': 'C', 'grid_size': 32},
        {'kind': 'sup'},
    ),
)
def test_norm_space_invalid(options):
    with pytest.raises(ValidationError):
        NormSpace(**options)


def test_norm_space_label(space_factory):
    assert space_factory().label == 'C'
    assert space_factory('Lp', 2).label == 'L^2'
    assert space_factory('Lp', 1.5).label == 'L^1.5'


def test_norm_space_grid(space_factory):
    grid = space_factory(grid_size=64).grid()

    assert grid.size == 64
    assert grid[0] == -math.pi
    assert grid[-1] < math.pi


def test_norm_sup_of_cosine(space_factory):
    assert norm(space_factory(), make_cosine()) == pytest.approx(1.0, abs=1e-15)


def test_norm_l2_of_cosine(space_factory):
    assert norm(space_factory('Lp', 2), make_cosine(3)) == pytest.approx(
        math.sqrt(math.pi),
        rel=1e-12,
    )


def test_norm_l1_of_constant(space_factory):
    assert norm(space_factory('Lp', 1), make_constant(1.0)) == pytest.approx(
        2 * math.pi,
        rel=1e-12,
    )

def _shifted_cosine():
    return trig_poly([1.0, 1.0], label='1/2 + cos')


def test_norm_l1_of_sine(space_factory):
    assert norm(space_factory('Lp', 1, grid_size=1024), make_sine()) == pytest.approx(
        4.0,
        abs=1e-10,
    )


def test_norm_l1_with_zeros_between_grid_points(space_factory):
    space = space_factory('Lp', 1, grid_size=1024)

    assert norm(space, _shifted_cosine()) == pytest.approx(
        math.pi / 3 + 2 * math.sqrt(3),
        abs=1e-10,
    )


@pytest.mark.parametrize(('kind', 'p'), (('C', None), ('Lp', 1), ('Lp', 1.5), ('Lp', 3)))
@pytest.mark.parametrize('factor', (-2.5, 0.3))
def test_norm_is_homogeneous(space_factory, kind, p, factor):
    space = space_factory(kind, p, grid_size=512)
    g = trig_poly([0.3, 1.0, -0.5], [0.0, 0.4, 0.2])

    assert norm(space, g.scaled(factor)) == pytest.approx(abs(factor) * norm(space, g), rel=1e-12)


@pytest.mark.parametrize(('p', 'tolerance'), ((1, 1e-8), (1.5, 1e-6), (2, 1e-8), (3, 1e-8)))
def test_norm_agrees_across_grids(space_factory, p, tolerance):
    g = trig_poly([0.3, 1.0, -0.5], [0.0, 0.4, 0.2])

    coarse = norm(space_factory('Lp', p, grid_size=2048), g)
    fine = norm(space_factory('Lp', p, grid_size=4096), g)

    assert coarse == pytest.approx(fine, rel=tolerance)



def test_measure_non_finite_value(space_factory):
    space = space_factory(grid_size=64)
    values = np.zeros(64)
    values[5] = np.nan

    with pytest.raises(EvaluationError) as cv:
        space.measure(values)

    assert cv.value.point == pytest.approx(space.grid()[5])


def test_psi_and_phi_of_cosine():
    f = make_cosine()
    x, t = 0.7, 0.3

    assert float(psi(f, x, t)) == pytest.approx(-2 * math.sin(x) * math.sin(t), abs=1e-14)
    assert float(phi(f, x, t)) == pytest.approx(2 * math.cos(x) * (math.cos(t) - 1), abs=1e-14)


@settings(deadline=None, max_examples=50)
@given(
    x=st.floats(min_value=-math.pi, max_value=math.pi),
    t=st.floats(min_value=0, max_value=math.pi),
)
def test_psi_is_odd_and_phi_even_in_t(x, t):
    f = trig_poly([0.5, 1.0, -0.25, 0.125], [0.0, 0.5, 0.75, -1.0])

    assert float(psi(f, x, -t)) == pytest.approx(-float(psi(f, x, t)), abs=1e-12)
    assert float(phi(f, x, -t)) == pytest.approx(float(phi(f, x, t)), abs=1e-12)


def test_conj_modulus2_of_cosine(space_factory):
    space = space_factory()

    assert conj_modulus2(space, make_cosine(), 0.5) == pytest.approx(2 * math.sin(0.5), rel=1e-12)


def test_classical_modulus2_of_cosine(space_factory):
    space = space_factory()

    assert classical_modulus2(space, make_cosine(), 0.5) == pytest.approx(
        2 * (1 - math.cos(0.5)),
        rel=1e-12,
    )

@pytest.mark.parametrize('modulus', (conj_modulus2, classical_modulus2))
@pytest.mark.parametrize(('kind', 'p', 'slack'), (('Lp', 2, 0.0), ('C', None, 1e-3)))
def test_moduli_are_nondecreasing(space_factory, modulus, kind, p, slack):
    space = space_factory(kind, p, grid_size=256)
    g = trig_poly([0.3, 1.0, -0.5], [0.0, 0.4, 0.2])
    deltas = np.sort(np.random.default_rng(DEFAULT_SEED).uniform(0, math.pi, 20))

    values = [modulus(space, g, delta) for delta in deltas]

    for earlier, later in zip(values, values[1:]):
        assert later >= earlier * (1 - slack)


@pytest.mark.parametrize(('kind', 'p'), (('Lp', 2), ('C', None)))
def test_conj_modulus2_is_subadditive(space_factory, kind, p):
    space = space_factory(kind, p, grid_size=256)
    g = trig_poly([0.3, 1.0, -0.5], [0.0, 0.4, 0.2])
    pairs = np.random.default_rng(DEFAULT_SEED).uniform(0, 0.5, (10, 2))

    for first, second in pairs:
        assert conj_modulus2(space, g, first + second) <= (
            conj_modulus2(space, g, first) + conj_modulus2(space, g, second) + 1e-3
        )



def test_moduli_vanish_at_zero(space_factory):
    space = space_factory()

    assert conj_modulus2(space, make_sine(), 0.0) == 0.0
    assert classical_modulus2(space, make_sine(), 0.0) == 0.0


@pytest.mark.parametrize('delta', (-0.1, 2 * math.pi + 0.1))
def test_moduli_delta_outside_domain(space_factory, delta):
    with pytest.raises(DomainError):
        conj_modulus2(space_factory(), make_cosine(), delta)


def test_modulus_curve_matches_direct_modulus(space_factory):
    space = space_factory(grid_size=256)
    f = make_cosine()
    curve = ModulusCurve(space, f)

    assert curve(0.5) == pytest.approx(conj_modulus2(space, f, 0.5), rel=1e-12)
    assert curve(0.0) == 0.0
    assert curve.many([0.1, 0.5]).shape == (2,)


def test_modulus_curve_classical(space_factory):
    space = space_factory(grid_size=256)
    curve = ModulusCurve(space, make_cosine(), kind='classical')

    assert curve(0.5) == pytest.approx(2 * (1 - math.cos(0.5)), rel=1e-12)


def test_modulus_curve_as_model(space_factory):
    curve = ModulusCurve(space_factory(grid_size=128), make_sine())

    model = curve.as_model()
    values = model.omega(np.linspace(0, 2 * math.pi, 50))

    assert model.omega(0.0) == 0.0
    assert np.all(np.diff(values) >= 0)
    assert 'measured conjugate modulus' in model.label


def test_make_weierstrass():
    f = make_weierstrass(alpha=0.5, terms=4)

    assert f.degree_hint == 8
    assert f.coeff_source[0][4] == pytest.approx(0.5)
    assert f(0.0) == pytest.approx(sum(2.0 ** (-j * 0.5) for j in range(4)))


@pytest.mark.parametrize('alpha', (0.0, -1.0, 1.5))
def test_make_weierstrass_invalid_alpha(alpha):
    with pytest.raises(DomainError):
        make_weierstrass(alpha=alpha)


def test_make_abs_sine_power_has_no_coefficients():
    f = make_abs_sine_power(0.5)

    assert f.coeff_source is None
    assert f(math.pi / 2) == pytest.approx(1.0)
    assert f(-math.pi / 2) == pytest.approx(1.0)


def test_make_constant():
    assert make_constant(3.0)(1.234) == pytest.approx(3.0)
