import pytest

from summability.lab.constants import LOG_LEVEL_ENV, OUTPUT_DIR_ENV
from summability.lab.testing.fixtures import (  # noqa
    experiment_factory,
    space_factory,
    trig_poly_factory,
)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    monkeypatch.delenv(LOG_LEVEL_ENV, raising=False)


@pytest.fixture
def experiment_data():
    def _experiment_data(**overrides):
        data = {
            'id': 'cesaro-cos-t1',
            'function': {'id': 'cosine'},
            'matrix': {'id': 'cesaro'},
            'model': {'id': 'power', 'params': {'alpha': 1.0}},
            'n_values': [8, 16, 32, 64],
            'theorem': 'T1',
        }
        data.update(overrides)
        return data
    return _experiment_data


@pytest.fixture
def config_data(tmp_path, experiment_data):
    def _config_data(experiments=None, **settings):
        return {
            'settings': {
                'grid_size': 512,
                'output_dir': str(tmp_path / 'output'),
                **settings,
            },
            'experiments': experiments if experiments is not None else [experiment_data()],
        }
    return _config_data
