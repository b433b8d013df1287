"""
Analysis Report Model
app/models/report.py
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA_VERSION = 1


@dataclass
class AnalysisReport:
    """Machine-readable summary of one analysis run"""
    command: str
    parameters: Optional[Dict] = None
    classification: Optional[Dict] = None
    signature: Optional[Dict] = None
    trace: Optional[List[Dict]] = None
    bracket_polynomial: Optional[List[int]] = None
    full_polynomial: Optional[List[int]] = None
    dynamical_degree: Optional[Dict] = None
    growth: Optional[Dict] = None
    period: Optional[int] = None
    degrees: Optional[Dict] = None
    invariants: Optional[List[Dict]] = None
    rotor: Optional[Dict] = None
    certificate: Optional[Dict] = None
    checks: List[Dict] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)
    settings: Dict[str, Any] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors and all(c.get('passed', True) for c in self.checks)

    def add_check(self, name: str, passed: bool, detail: str = ''):
        self.checks.append({'name': name, 'passed': bool(passed), 'detail': detail})

    def to_dict(self, include_timing: bool = False) -> Dict:
        """Convert report to dictionary, dropping empty sections"""
        data = {'schema': SCHEMA_VERSION, 'command': self.command}
        for key in ('parameters', 'classification', 'signature', 'trace',
                    'bracket_polynomial', 'full_polynomial', 'dynamical_degree',
                    'growth', 'period', 'degrees', 'invariants', 'rotor', 'certificate'):
            value = getattr(self, key)
            if value is not None:
                data[key] = value
        if self.checks:
            data['checks'] = list(self.checks)
        data['errors'] = list(self.errors)
        data['settings'] = dict(self.settings)
        if include_timing:
            data['timing'] = dict(self.timing)
        return data
