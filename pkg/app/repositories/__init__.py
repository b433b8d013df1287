"""
Repositories Package
app/repositories/__init__.py

Provides access to parameter files and planar ledgers
"""
from app.repositories.parameter_repository import ParameterRepository

__all__ = ['ParameterRepository']
