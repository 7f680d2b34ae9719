import pytest

from summability.lab.testing import make_experiment, make_space, make_trig_poly


@pytest.fixture
def trig_poly_factory():
    """
    This fixture allows to build reproducible random trigonometric
    polynomials given a degree and a seed.
    """
    return make_trig_poly


@pytest.fixture
def space_factory():
    """
    This fixture allows to instantiate a NormSpace
    given its kind, exponent and grid size.
    """
    return make_space


@pytest.fixture
def experiment_factory():
    """
    This fixture allows to instantiate an ExperimentSpec starting
    from a small Cesàro experiment and overriding any field.
    """
    return make_experiment
