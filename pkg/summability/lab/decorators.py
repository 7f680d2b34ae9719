import inspect

from summability.lab.constants import (
    FUNCTION_FAMILY_ATTR_NAME,
    MATRIX_FAMILY_ATTR_NAME,
    MODULUS_FAMILY_ATTR_NAME,
)
from summability.lab.exceptions import ConfigurationError


def _register(attr_name, name, description):
    def wrapper(func):
        setattr(
            func,
            attr_name,
            {
                'name': name,
                'factory': func.__name__,
                'description': description or (inspect.getdoc(func) or '').split('\n')[0],
            },
        )
        return func
    return wrapper


def function_family(name, description=None):
    """
    Mark a factory of `PeriodicFunction` as a function family
    selectable by `name` from an experiment config.

    Usage:

    ``` python
    from summability.lab.decorators import function_family
    from summability.lab.function_space import trig_poly


    @function_family('double-cosine')
    def double_cosine():
        return trig_poly([0, 0, 1])
    ```

    **Parameters:**

    * **name** - The id used in the `function` section of an experiment.
    * **description** - Optional description, defaults to the first docstring line.
    """
    return _register(FUNCTION_FAMILY_ATTR_NAME, name, description)


def matrix_family(name, description=None):
    """
    Mark a factory of `SummabilityMatrix` as a matrix family
    selectable by `name` from an experiment config.

    **Parameters:**

    * **name** - The id used in the `matrix` section of an experiment.
    * **description** - Optional description, defaults to the first docstring line.
    """
    return _register(MATRIX_FAMILY_ATTR_NAME, name, description)


def modulus_family(name, description=None):
    """
    Mark a factory of `ModulusModel` as a modulus family
    selectable by `name` from an experiment config.

    **Parameters:**

    * **name** - The id used in the `model` section of an experiment.
    * **description** - Optional description, defaults to the first docstring line.
    """
    return _register(MODULUS_FAMILY_ATTR_NAME, name, description)


def get_families(module, attr_name):
    """
    Inspects `module` for factories decorated with one of the
    registration decorators and returns them keyed by name.
    """
    families = {}
    for _, value in inspect.getmembers(module, inspect.isfunction):
        if hasattr(value, attr_name):
            families[getattr(value, attr_name)['name']] = value
    return families


def resolve(module, attr_name, name, params=None):
    families = get_families(module, attr_name)
    if name not in families:
        raise ConfigurationError(
            f'Unknown id *{name}*.',
            errors=[f'available: {", ".join(sorted(families))}'],
        )
    try:
        return families[name](**(params or {}))
    except TypeError as err:
        raise ConfigurationError(f'Invalid parameters for *{name}*: {err}.')
