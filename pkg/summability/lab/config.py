import logging
import os
from typing import Dict, List, Optional

import pkg_resources
import toml
import yaml
from pydantic import BaseModel, root_validator, ValidationError, validator

from summability.lab.constants import (
    DEFAULT_GRID_SIZE,
    LOG_LEVEL_ENV,
    OUTPUT_DIR_ENV,
    QUADRATURE_TOLERANCE,
    TAIL_TOLERANCE,
)
from summability.lab.exceptions import ConfigurationError
from summability.lab.harness import ExperimentSpec


DEMO_CONFIG = 'demo.yaml'


class LoggingSettings(BaseModel):
    level: str = 'INFO'
    logzio_token: Optional[str]
    logzio_url: Optional[str]
    extra_fields: Dict = {}

    @validator('level')
    def _check_level(cls, value):
        value = value.upper()
        if not isinstance(logging.getLevelName(value), int):
            raise ValueError(f'unknown logging level {value}')
        return value


class Tolerances(BaseModel):
    quadrature: float = QUADRATURE_TOLERANCE
    tail: float = TAIL_TOLERANCE


class Settings(BaseModel):
    grid_size: int = DEFAULT_GRID_SIZE
    tolerances: Tolerances = Tolerances()
    output_dir: str = 'output'
    workers: int = 1
    logging: LoggingSettings = LoggingSettings()

    @validator('workers')
    def _check_workers(cls, value):
        if value < 1:
            raise ValueError('workers must be at least 1')
        return value


class Assertions(BaseModel):
    slope_min: Optional[float]
    slope_max: Optional[float]
    ratio_max: Optional[float]
    ratio_growth_max: Optional[float]
    extend_factor: int = 4


class ExperimentEntry(ExperimentSpec):
    assertions: Optional[Assertions]


class ExperimentConfig(BaseModel):
    """
    A configuration document: global `settings` and the list of `experiments`.
    Experiments without an explicit `space.grid_size` inherit `settings.grid_size`.
    """
    settings: Settings = Settings()
    experiments: List[ExperimentEntry] = []

    @root_validator(pre=True)
    def _inherit_grid_size(cls, values):
        settings = values.get('settings') or {}
        if isinstance(settings, Settings):
            grid_size = settings.grid_size
        else:
            grid_size = settings.get('grid_size', DEFAULT_GRID_SIZE)
        experiments = []
        for experiment in values.get('experiments') or []:
            if isinstance(experiment, dict):
                experiment = dict(experiment)
                space = dict(experiment.get('space') or {})
                space.setdefault('grid_size', grid_size)
                experiment['space'] = space
            experiments.append(experiment)
        values['experiments'] = experiments
        return values

    @validator('experiments')
    def _check_unique_ids(cls, value):
        ids = [experiment.id for experiment in value]
        duplicates = sorted({id_ for id_ in ids if ids.count(id_) > 1})
        if duplicates:
            raise ValueError(f'duplicated experiment ids: {", ".join(duplicates)}')
        return value


def _validation_messages(err):
    return [
        f'{".".join(str(part) for part in error["loc"])}: {error["msg"]}'
        for error in err.errors()
    ]


def parse_config(data, source='<config>'):
    try:
        config = ExperimentConfig.parse_obj(data or {})
    except ValidationError as err:
        raise ConfigurationError(
            f'Invalid configuration {source}.',
            errors=_validation_messages(err),
        )
    output_dir = os.getenv(OUTPUT_DIR_ENV)
    if output_dir:
        config.settings.output_dir = output_dir
    log_level = os.getenv(LOG_LEVEL_ENV)
    if log_level:
        try:
            config.settings.logging = LoggingSettings(
                **{**config.settings.logging.dict(), 'level': log_level},
            )
        except ValidationError as err:
            raise ConfigurationError(
                f'Invalid {LOG_LEVEL_ENV} value.',
                errors=_validation_messages(err),
            )
    return config


def _read(stream, suffix, source):
    try:
        if suffix == '.toml':
            return toml.load(stream)
        return yaml.safe_load(stream)
    except (yaml.YAMLError, toml.TomlDecodeError) as err:
        raise ConfigurationError(f'The configuration {source} cannot be parsed.', errors=[str(err)])


def load_config(path):
    """
    Loads an `ExperimentConfig` from a YAML (`.yaml`, `.yml`) or TOML (`.toml`)
    document and applies the environment overrides.
    """
    suffix = os.path.splitext(path)[1].lower()
    if suffix not in ('.yaml', '.yml', '.toml'):
        raise ConfigurationError(f'Unsupported configuration format *{suffix}*.')
    if not os.path.isfile(path):
        raise ConfigurationError(f'The configuration file {path} does not exist.')
    with open(path, 'r') as stream:
        return parse_config(_read(stream, suffix, path), source=path)


def load_demo_config():
    stream = pkg_resources.resource_stream('summability.lab', DEMO_CONFIG)
    with stream:
        return parse_config(yaml.safe_load(stream), source=DEMO_CONFIG)


def dump_config(config, stream=None):
    """Writes `config` as YAML; `load_config` reads the result back unchanged."""
    return yaml.safe_dump(config.dict(), stream, sort_keys=False, allow_unicode=True)
