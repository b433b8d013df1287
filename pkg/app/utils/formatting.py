"""
Report Formatting Helpers
app/utils/formatting.py

Text and JSON renderings of analysis reports.
"""
import json
from typing import Dict, List, Optional

import pandas as pd
import sympy

T = sympy.Symbol('t')


def poly_filter(coeffs: Optional[List[int]]) -> str:
    """Integer polynomial, coefficients listed highest degree first"""
    if not coeffs:
        return '0'
    return str(sympy.factor(sympy.Poly(coeffs, T).as_expr()))


def float_filter(value, decimals: int = 8) -> str:
    try:
        return f"{float(value):.{decimals}f}"
    except (ValueError, TypeError):
        return str(value)


def checks_table(checks: List[Dict]) -> pd.DataFrame:
    frame = pd.DataFrame(checks, columns=['name', 'passed', 'detail'])
    frame['passed'] = frame['passed'].map({True: 'PASS', False: 'FAIL'})
    return frame


def degrees_table(degrees: Dict) -> pd.DataFrame:
    seq = degrees.get('degrees', degrees.get('symbolic', []))
    frame = pd.DataFrame({'n': range(1, len(seq) + 1), 'degree': seq})
    if 'predicted' in degrees:
        frame['predicted'] = degrees['predicted'][:len(seq)]
    if len(seq) > 2:
        frame['second_difference'] = frame['degree'].diff().diff()
    return frame


def render_json(data: Dict) -> str:
    """Stable JSON: sorted keys, fixed separators"""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)


def render_text(data: Dict) -> str:
    """Human summary of a report dictionary"""
    lines = [f"command: {data.get('command')}"]
    if data.get('classification'):
        cls = data['classification']
        lines.append(f"classification: {cls['tag']} ({cls['case']})")
    if data.get('signature'):
        sig = {k: v for k, v in data['signature'].items() if k != 'inverse'}
        lines.append(f"signature: {sig}")
    if data.get('bracket_polynomial'):
        lines.append(f"bracket polynomial: {poly_filter(data['bracket_polynomial'])}")
    if data.get('full_polynomial'):
        lines.append(f"full polynomial: {poly_filter(data['full_polynomial'])}")
    if data.get('dynamical_degree'):
        value = data['dynamical_degree'].get('value')
        approx = value.get('approx') if isinstance(value, dict) else value
        lines.append(f"dynamical degree: {float_filter(approx)}")
    if data.get('growth'):
        lines.append(f"growth: {data['growth'].get('kind')}")
    if 'period' in data:
        lines.append(f"period: {data['period']}")
    if data.get('degrees'):
        lines.append(degrees_table(data['degrees']).to_string(index=False))
    if data.get('certificate'):
        cert = data['certificate']
        lines.append(f"certificate: {cert.get('case')} closes as {cert.get('closure')}")
    if data.get('invariants'):
        for sol in data['invariants']:
            if 'dimension' in sol:
                lines.append(f"invariants: t={sol['multiplier']} dimension {sol['dimension']}")
            else:
                lines.append(f"pencil ratio: {sol.get('pencil_ratio')}")
    if data.get('rotor'):
        rotor = data['rotor']
        if 'charpoly' in rotor:
            lines.append(f"ledger {rotor['ledger']}: charpoly {poly_filter(rotor['charpoly'])}")
            lines.append(f"growth: {rotor['growth']['kind']}, verdict: {rotor['verdict']['verdict']}")
            for reason in rotor['verdict'].get('reasons', []):
                lines.append(f"  - {reason}")
        if 'exceptional' in rotor:
            for entry in rotor['exceptional']:
                status = f"-> {entry['image']}" if entry['verified'] else f"rejected: {entry['residue']}"
                lines.append(f"{entry['curve']}: {status}")
        if isinstance(rotor.get('degrees'), dict):
            lines.append(degrees_table(rotor['degrees']).to_string(index=False))
    if data.get('checks'):
        lines.append(checks_table(data['checks']).to_string(index=False))
    for err in data.get('errors', []):
        lines.append(f"error: {err}")
    return '\n'.join(lines)
