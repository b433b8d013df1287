"""
Parameter Repository
app/repositories/parameter_repository.py

Loads and saves parameter files and planar blowup ledgers, and resolves the
names of the bundled fixtures.
"""
import json
import logging
import os
from typing import Dict, List, Optional

from app.algebra.cycnum import CycNum
from app.algebra.polynomial import HomogPoly
from app.config import get_config
from app.exceptions import DegenerateParameters, InconsistentLedger, UsageError
from app.models.parameters import MapParameters
from app.models.plane_ledger import LedgerCurve, LedgerPoint, PlaneLedger
from app.services.planar_service import rotor_curves

logger = logging.getLogger(__name__)

LEDGER_PREFIX = 'ledger_'


class ParameterRepository:
    """Repository for parameter and ledger files"""

    def __init__(self, config=None, fixture_dir: Optional[str] = None):
        """
        Initialize repository over a fixture directory

        Args:
            config: configuration object (FIXTURE_DIR is used when fixture_dir is absent)
            fixture_dir: directory holding the bundled *.json fixtures
        """
        self.config = config or get_config()
        self.fixture_dir = fixture_dir or self.config.FIXTURE_DIR

    # ---- lookup ---------------------------------------------------------

    def list_fixtures(self) -> Dict[str, List[str]]:
        """Bundled fixture names, split into parameter sets and ledgers"""
        names = sorted(f[:-5] for f in os.listdir(self.fixture_dir) if f.endswith('.json'))
        return {
            'parameters': [n for n in names if not n.startswith(LEDGER_PREFIX)],
            'ledgers': [n for n in names if n.startswith(LEDGER_PREFIX)],
        }

    def resolve(self, name_or_path: str, ledger: bool = False) -> str:
        """Path of a file, or of the bundled fixture with that name"""
        if os.path.isfile(name_or_path):
            return name_or_path
        stem = name_or_path[:-5] if name_or_path.endswith('.json') else name_or_path
        candidates = [stem]
        if ledger and not stem.startswith(LEDGER_PREFIX):
            candidates.insert(0, LEDGER_PREFIX + stem)
        for candidate in candidates:
            path = os.path.join(self.fixture_dir, candidate + '.json')
            if os.path.isfile(path):
                return path
        raise UsageError(f"no such file or fixture: {name_or_path}")

    def _read(self, path: str) -> Dict:
        try:
            with open(path, encoding='utf-8') as fh:
                data = json.load(fh)
        except json.JSONDecodeError as e:
            raise UsageError(f"malformed JSON in {path}: {e}")
        if not isinstance(data, dict):
            raise UsageError(f"{path}: expected a JSON object")
        return data

    # ---- parameters -----------------------------------------------------

    def load_parameters(self, name_or_path: str) -> MapParameters:
        """
        Load a parameter file

        Args:
            name_or_path: file path or bundled fixture name

        Returns:
            validated MapParameters
        """
        path = self.resolve(name_or_path)
        data = self._read(path)
        try:
            params = MapParameters.from_dict(data)
        except (TypeError, ValueError) as e:
            raise UsageError(f"{path}: bad field element: {e}")
        logger.debug(f"Loaded {params} from {path}")
        return params

    def save_parameters(self, params: MapParameters, path: str, name: str = '') -> str:
        data = params.to_dict()
        if name:
            data = {'name': name, **data}
        with open(path, 'w', encoding='utf-8') as fh:
            json.dump(data, fh, indent=2)
        logger.info(f"✅ Saved parameters to {path}")
        return path

    # ---- ledgers --------------------------------------------------------

    @staticmethod
    def ledger_from_dict(data: Dict) -> PlaneLedger:
        """Build a ledger, filling closed-form rotor curves in from the label"""
        name = data.get('name', 'ledger')
        try:
            a = CycNum.from_json(data['a']) if data.get('a') is not None else None
            points = [
                LedgerPoint(p['label'], [CycNum.from_json(c) for c in p.get('coordinates', [])], p.get('parent'))
                for p in data.get('points', [])
            ]
            closed = rotor_curves(a) if a is not None and data.get('kind', 'cubic') == 'cubic' else {}
            curves = []
            for c in data.get('curves', []):
                if 'equation' in c:
                    equation = HomogPoly.from_sparse(HomogPoly.from_json(3, c['equation']))
                elif c['label'] in closed:
                    equation = closed[c['label']]
                else:
                    raise InconsistentLedger(f"{name}: curve {c['label']} has no equation")
                curves.append(LedgerCurve(c['label'], equation, list(c.get('orbit', []))))
            rules = {cls: {k: int(v) for k, v in image.items()} for cls, image in data['rules'].items()}
            return PlaneLedger(
                name=name,
                basis=list(data['basis']),
                rules=rules,
                points=points,
                curves=curves,
                a=a,
                kind=data.get('kind', 'cubic'),
                expected_charpoly=data.get('expected_charpoly'),
                expected_verdict=data.get('expected_verdict'),
            )
        except KeyError as e:
            raise InconsistentLedger(f"{name}: missing field {e}")
        except (TypeError, ValueError) as e:
            raise InconsistentLedger(f"{name}: {e}")

    def load_ledger(self, name_or_path: str) -> PlaneLedger:
        path = self.resolve(name_or_path, ledger=True)
        ledger = self.ledger_from_dict(self._read(path))
        logger.debug(f"Loaded {ledger!r} from {path}")
        return ledger

    def load_all_ledgers(self) -> List[PlaneLedger]:
        return [self.load_ledger(n) for n in self.list_fixtures()['ledgers']]

    def load_all_parameters(self) -> Dict[str, MapParameters]:
        out = {}
        for name in self.list_fixtures()['parameters']:
            try:
                out[name] = self.load_parameters(name)
            except DegenerateParameters as e:
                logger.warning(f"⚠️ Skipping fixture {name}: {e}")
        return out
