"""
Machine-readable verification reports.

Every numeric record carries a provenance tag; a report passes iff all of
its check records pass. Verdicts are recomputed from the recorded numbers,
so a parsed report can be re-evaluated independently (see ``reevaluate``).
"""
import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

SCHEMA = 'stein-embed/1'

RELATION_CLOSE = 'close'
RELATION_LE = 'le'
RELATION_INFO = 'info'

CSV_COLUMNS = ['name', 'relation', 'target', 'value', 'tolerance', 'stderr', 'provenance', 'passed']


def _plain(value: Any) -> Any:
    """JSON-safe copy: numpy scalars/arrays to lists, non-finite floats to strings."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    return value


def _number(value) -> float:
    return float(value) if value is not None else math.nan


def verdict(relation: str, target, value, tolerance) -> bool:
    if relation == RELATION_INFO:
        return True
    target, value, tolerance = _number(target), _number(value), _number(tolerance)
    if relation == RELATION_CLOSE:
        return abs(value - target) <= tolerance
    if relation == RELATION_LE:
        return value <= target + tolerance
    raise ValueError(f'unknown relation {relation!r}')


@dataclass
class CheckRecord:
    """One comparison of a computed value against a target."""

    name: str
    relation: str
    target: Any
    value: Any
    tolerance: float
    provenance: str
    stderr: Optional[float] = None
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = verdict(self.relation, self.target, self.value, self.tolerance)

    def to_dict(self) -> Dict[str, Any]:
        return _plain({
            'name': self.name,
            'relation': self.relation,
            'target': self.target,
            'value': self.value,
            'tolerance': self.tolerance,
            'stderr': self.stderr,
            'provenance': self.provenance,
            'passed': self.passed,
        })


@dataclass
class Report:
    command: str
    parameters: Dict[str, Any]
    seed: Optional[int] = None
    checks: List[CheckRecord] = field(default_factory=list)
    bounds: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    values: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    wall_clock: Optional[float] = None
    timestamp: Optional[str] = None

    def check(self, name: str, relation: str, target, value, tolerance: float = 0.0,
              provenance: str = 'exact', stderr: float = None) -> CheckRecord:
        record = CheckRecord(name, relation, target, value, tolerance, provenance, stderr)
        self.checks.append(record)
        return record

    def close(self, name, target, value, tolerance, provenance='exact', stderr=None):
        return self.check(name, RELATION_CLOSE, target, value, tolerance, provenance, stderr)

    def at_most(self, name, target, value, tolerance=0.0, provenance='exact', stderr=None):
        return self.check(name, RELATION_LE, target, value, tolerance, provenance, stderr)

    def info(self, name, target, value, provenance='exact', stderr=None):
        return self.check(name, RELATION_INFO, target, value, 0.0, provenance, stderr)

    def bound(self, name: str, value, provenance: str, **extra):
        self.bounds[name] = dict(value=value, provenance=provenance, **extra)

    def value(self, name: str, value, provenance: str, **extra):
        self.values[name] = dict(value=value, provenance=provenance, **extra)

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'schema': SCHEMA,
            'command': self.command,
            'parameters': self.parameters,
            'seed': self.seed,
            'checks': [record.to_dict() for record in self.checks],
            'bounds': self.bounds,
            'values': self.values,
            'notes': self.notes,
            'passed': self.passed,
        }
        if self.wall_clock is not None:
            data['wall_clock'] = self.wall_clock
        if self.timestamp is not None:
            data['timestamp'] = self.timestamp
        return _plain(data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator='\n')
        writer.writeheader()
        for record in self.checks:
            row = record.to_dict()
            writer.writerow({key: row[key] for key in CSV_COLUMNS})
        return buffer.getvalue()

    def render(self, fmt: str) -> str:
        return self.to_csv() if fmt == 'csv' else self.to_json()


def reevaluate(json_text: str) -> List[Dict[str, Any]]:
    """
    Recompute every verdict of a JSON report from its recorded numbers.

    Returns:
        One dict per check with keys name, recorded, recomputed
    """
    data = json.loads(json_text)
    if data.get('schema') != SCHEMA:
        raise ValueError(f"unsupported report schema {data.get('schema')!r}")
    results = []
    for record in data['checks']:
        recomputed = verdict(record['relation'], record['target'], record['value'], record['tolerance'])
        results.append({'name': record['name'], 'recorded': record['passed'], 'recomputed': recomputed})
    return results
