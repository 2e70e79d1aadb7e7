import os
from typing import Optional

from dotenv import load_dotenv


def _optional_int(name: str) -> Optional[int]:
    value = os.environ.get(name)
    return int(value) if value else None


class Config:
    """Base configuration class"""
    DEBUG = False
    TESTING = False

    # Logging
    LOG_LEVEL = os.environ.get('HOPSAMPLER_LOG_LEVEL', 'INFO')

    # Embedding defaults
    DIMENSIONS = int(os.environ.get('HOPSAMPLER_DIMENSIONS', 50))
    SKETCH_SIZE = _optional_int('HOPSAMPLER_SKETCH_SIZE')  # None -> max(10, ceil(2 log2 n) + 1)
    NORM_EPSILON = float(os.environ.get('HOPSAMPLER_NORM_EPSILON', 0.1))
    MAP_EPSILON = float(os.environ.get('HOPSAMPLER_MAP_EPSILON', 0.01))
    SEED = int(os.environ.get('HOPSAMPLER_SEED', 0))

    # Execution
    WORKERS = int(os.environ.get('HOPSAMPLER_WORKERS', 1))
    BLOCK_SIZE = int(os.environ.get('HOPSAMPLER_BLOCK_SIZE', 64))

    # Norm sketch constants
    NORM_SKETCH_DEPTH = int(os.environ.get('HOPSAMPLER_NORM_SKETCH_DEPTH', 5))
    NORM_SKETCH_WIDTH_FACTOR = float(os.environ.get('HOPSAMPLER_NORM_SKETCH_WIDTH_FACTOR', 6))

    # Oracle / check guards
    ORACLE_NODE_LIMIT = int(os.environ.get('HOPSAMPLER_ORACLE_NODE_LIMIT', 10000))
    CHECK_COORDINATES = int(os.environ.get('HOPSAMPLER_CHECK_COORDINATES', 10000))
    CHECK_PAIRS = int(os.environ.get('HOPSAMPLER_CHECK_PAIRS', 50))

    # Evaluation
    OVERLAP_PAIRS = int(os.environ.get('HOPSAMPLER_OVERLAP_PAIRS', 1000))
    LINKPRED_HOLDOUT = float(os.environ.get('HOPSAMPLER_LINKPRED_HOLDOUT', 0.2))
    LINKPRED_PAIR_FRACTION = float(os.environ.get('HOPSAMPLER_LINKPRED_PAIR_FRACTION', 0.05))
    LINKPRED_K = int(os.environ.get('HOPSAMPLER_LINKPRED_K', 1000))


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True
    LOG_LEVEL = 'DEBUG'


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False
    LOG_LEVEL = 'WARNING'


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    DEBUG = True
    CHECK_COORDINATES = 2000


def get_config() -> Config:
    """Get configuration based on environment"""
    load_dotenv()
    env = os.environ.get('HOPSAMPLER_ENV', 'production')

    if env == 'development':
        return DevelopmentConfig()
    elif env == 'testing':
        return TestingConfig()
    else:
        return ProductionConfig()


def validate_config(config: Config) -> None:
    """Validate that all configured values are in range"""
    checks = {
        'DIMENSIONS': config.DIMENSIONS >= 1,
        'SKETCH_SIZE': config.SKETCH_SIZE is None or config.SKETCH_SIZE >= 1,
        'NORM_EPSILON': 0 < config.NORM_EPSILON < 1,
        'MAP_EPSILON': 0 < config.MAP_EPSILON <= 1,
        'SEED': 0 <= config.SEED < 2 ** 64,
        'WORKERS': config.WORKERS >= 1,
        'BLOCK_SIZE': config.BLOCK_SIZE >= 1,
        'NORM_SKETCH_DEPTH': config.NORM_SKETCH_DEPTH >= 1,
        'NORM_SKETCH_WIDTH_FACTOR': config.NORM_SKETCH_WIDTH_FACTOR > 0,
        'ORACLE_NODE_LIMIT': config.ORACLE_NODE_LIMIT >= 1,
        'CHECK_COORDINATES': config.CHECK_COORDINATES >= 1,
        'CHECK_PAIRS': config.CHECK_PAIRS >= 0,
        'OVERLAP_PAIRS': config.OVERLAP_PAIRS >= 1,
        'LINKPRED_HOLDOUT': 0 < config.LINKPRED_HOLDOUT < 1,
        'LINKPRED_PAIR_FRACTION': 0 < config.LINKPRED_PAIR_FRACTION <= 1,
        'LINKPRED_K': config.LINKPRED_K >= 1,
    }

    invalid = [name for name, ok in checks.items() if not ok]

    if invalid:
        raise ValueError(f"Invalid configuration values: {', '.join(invalid)}")
