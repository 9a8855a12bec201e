import logging
log = logging.getLogger(__name__)

import dataclasses
import os
from pathlib import Path

import yaml

from .exceptions import InvalidArgumentError


CONFIG_ENV = 'TOTIENTSHIFT_CONFIG'
JOBS_ENV = 'TOTIENTSHIFT_JOBS'


@dataclasses.dataclass(frozen=True)
class Config:
    '''
    Tunable settings shared by the library and the command-line tool

    Attributes
    ----------
    family_size : int
        Number of polynomials in the family built from A(d).
    spf_memory_limit : int
        Largest sieve limit `build_spf` accepts (one uint32 per entry).
    r_initial_span : int
        Width of the first r window searched for prime pairs.
    r_growth : int
        Factor the r window grows by whenever it yields too few hits.
    r_budget : int
        Maximum number of r candidates examined before giving up.
    scan_best_window : int
        Number of r values used to estimate prime-pair density per pair.
    chunk_size : int
        Number of candidates handed to a worker at a time.
    jobs : int
        Number of worker processes.
    '''
    family_size: int = 50
    spf_memory_limit: int = 50_000_000
    r_initial_span: int = 1024
    r_growth: int = 4
    r_budget: int = 100_000_000
    scan_best_window: int = 1000
    chunk_size: int = 65536
    jobs: int = 1

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidArgumentError(f'{field.name} must be an integer, got {value!r}')
            if value < 1:
                raise InvalidArgumentError(f'{field.name} must be positive, got {value}')
        if self.family_size < 2:
            raise InvalidArgumentError('family_size must be at least 2')
        if self.r_growth < 2:
            raise InvalidArgumentError('r_growth must be at least 2')

    def replace(self, **kwargs):
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return dataclasses.replace(self, **kwargs)


def _field_names():
    return [f.name for f in dataclasses.fields(Config)]


def load_config(path=None, environ=None):
    '''
    Build a Config from defaults, an optional YAML file and the environment

    Parameters
    ----------
    path : {None, str, pathlib.Path}
        YAML file with a mapping of setting names to values. If None, the
        file named by the TOTIENTSHIFT_CONFIG environment variable is used
        when it is set.
    environ : {None, mapping}
        Environment to read. Defaults to `os.environ`.

    Returns
    -------
    Config

    Raises
    ------
    InvalidArgumentError
        If the file contains unknown settings or invalid values.
    '''
    if environ is None:
        environ = os.environ
    if path is None:
        path = environ.get(CONFIG_ENV)

    settings = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise InvalidArgumentError(f'Configuration file {path} does not exist')
        settings = yaml.safe_load(path.read_text()) or {}
        if not isinstance(settings, dict):
            raise InvalidArgumentError(f'{path} must contain a mapping of settings')
        unknown = set(settings) - set(_field_names())
        if unknown:
            unknown = ', '.join(sorted(unknown))
            options = ', '.join(_field_names())
            raise InvalidArgumentError(f'Unknown settings {unknown}. Options are {options}.')
        log.info('Loaded settings from %s', path)

    if JOBS_ENV in environ:
        try:
            settings['jobs'] = int(environ[JOBS_ENV])
        except ValueError:
            raise InvalidArgumentError(f'{JOBS_ENV} must be an integer, got {environ[JOBS_ENV]!r}')

    return Config(**settings)


_config = None


def get_config():
    '''
    Return the process-wide configuration (read once, then cached)
    '''
    global _config
    if _config is None:
        _config = load_config()
    return _config


def set_config(config):
    global _config
    _config = config
