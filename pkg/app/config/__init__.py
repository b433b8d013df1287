"""
Configuration package
"""
from app.config.settings import get_config, config

__all__ = ['get_config', 'config']
