"""
Application Configuration Settings
app/config/settings.py
"""
import os

from dotenv import load_dotenv

load_dotenv()


class Config:
    """Base configuration"""

    # Iteration caps
    N_MAX_DEGREES = int(os.getenv('N_MAX_DEGREES', 12))
    ORBIT_N_MAX = int(os.getenv('ORBIT_N_MAX', 64))
    P_MAX = int(os.getenv('P_MAX', 16))
    DEGREE_BOUND = int(os.getenv('DEGREE_BOUND', 200))

    # Numerics (reporting only)
    PRECISION = int(os.getenv('PRECISION', 53))
    SALEM_TOL = float(os.getenv('SALEM_TOL', 1e-9))
    ROOT_TOL = float(os.getenv('ROOT_TOL', 1e-12))
    PERIOD_ORDER_CAP = int(os.getenv('PERIOD_ORDER_CAP', 1000))

    # Randomized certificates (lines, transverse directions)
    SEED = int(os.getenv('SEED', 20240601))

    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

    FIXTURE_DIR = os.getenv(
        'FIXTURE_DIR',
        os.path.join(os.path.dirname(os.path.dirname(__file__)), 'fixtures')
    )


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True
    TESTING = False


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False
    TESTING = False
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'WARNING')


class TestingConfig(Config):
    """Testing configuration"""
    DEBUG = True
    TESTING = True

    # Smaller caps keep the suite at desk scale
    N_MAX_DEGREES = 8
    ORBIT_N_MAX = 40
    SEED = 1234


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


def get_config(config_name=None):
    """
    Get configuration object based on environment

    Args:
        config_name: Configuration name (development, production, testing)

    Returns:
        Configuration class
    """
    if config_name is None:
        config_name = os.getenv('BIRDYN_ENV', 'development')

    return config.get(config_name, DevelopmentConfig)
