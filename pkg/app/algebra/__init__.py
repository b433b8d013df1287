"""
Exact algebra package
"""
from app.algebra.cycnum import CycNum, cyc
from app.algebra.polynomial import HomogPoly, SparsePoly
from app.algebra.univariate import IntPoly, LaurentPoly, UniPoly

__all__ = ['CycNum', 'cyc', 'HomogPoly', 'SparsePoly', 'IntPoly', 'LaurentPoly', 'UniPoly']
