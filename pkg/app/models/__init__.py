"""
Models Package Init File
app/models/__init__.py
"""
from app.models.birational_map import BirationalMap, DegreeSequence, JacobianReport
from app.models.multiplier import MultiplierSolution, SingularityReport
from app.models.orbit import (
    ChartId, EventTag, OrbitCertificate, OrbitElement, OrbitEvent, OrbitSignature
)
from app.models.parameters import ConjugacyStep, MapParameters, ParamClass
from app.models.pic_action import DegreeReport, GrowthClass, GrowthKind, PicAction, SalemVerdict
from app.models.plane_ledger import (
    AutomorphismVerdict, ClassVector2D, LedgerCurve, LedgerPoint, PlaneLedger, PlaneOrbit
)
from app.models.report import AnalysisReport

__all__ = [
    'BirationalMap', 'DegreeSequence', 'JacobianReport',
    'MultiplierSolution', 'SingularityReport',
    'ChartId', 'EventTag', 'OrbitCertificate', 'OrbitElement', 'OrbitEvent', 'OrbitSignature',
    'ConjugacyStep', 'MapParameters', 'ParamClass',
    'DegreeReport', 'GrowthClass', 'GrowthKind', 'PicAction', 'SalemVerdict',
    'AutomorphismVerdict', 'ClassVector2D', 'LedgerCurve', 'LedgerPoint', 'PlaneLedger', 'PlaneOrbit',
    'AnalysisReport',
]
