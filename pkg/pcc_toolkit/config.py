import os
from flask import Config

__all__ = ['DEFAULTS', 'ENV_PREFIX', 'load_config']

ENV_PREFIX = 'PCC'

DEFAULTS = {
    'SEED': 0,
    'TOLERANCE': 1e-9,
    'MAX_CONFIGS': 2 ** 32,
    'MAX_WITNESSES': 16,
    'WORKERS': 1,
    'BLOCK_SIZE': 2 ** 16,
    'MC_SAMPLES': 10 ** 6,

    # Fixed Monte Carlo tolerances recorded for MC_SAMPLES = 10**6.
    'MC_TOLERANCE_REAL': 0.005,
    'MC_TOLERANCE_COMPLEX': 0.01,
}


def load_config(filename=None):
    """Return the configuration as a `flask.Config` object.

    Values are taken from `DEFAULTS`, then from the optional Python
    configuration file, then from ``PCC_*`` environment variables
    (``PCC_SEED=7`` sets ``config['SEED'] = 7``).

    :param filename: Optional path to a Python configuration file
    """

    config = Config(os.getcwd(), defaults=DEFAULTS)
    if filename is not None:
        config.from_pyfile(os.path.abspath(filename))
    config.from_prefixed_env(ENV_PREFIX)
    return config
