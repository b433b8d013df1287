"""
Utility functions and helpers
"""
from .formatting import render_json, render_text

__all__ = ['render_json', 'render_text']
