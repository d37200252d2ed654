"""
Case files: JSON documents describing branches, a foliation and a global curve.

Coefficients are written in a small literal grammar:

    RAT := INT | INT "/" POSINT
    CYC := RAT | "[" RAT ("," RAT)* "]"

where the bracketed form lists the coefficients of powers of ζ_N, lowest
first. Integers may also appear as JSON numbers and the bracketed form as a
JSON array.
"""

import json
import math
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from jsonschema import Draft7Validator

from .algebra import INFINITY, BiPoly, CycloField, Scalar, USeries, is_rational_scalar, scalar_to_fraction
from .branch import PuiseuxBranch, ramified_lift, reduced_equation, truncation_audit
from .errors import CaseFileError, FolboundError, NonRationalSingularity, TruncationInsufficient
from .foliation import VectorField
from .poincare import GlobalInstance, SingularPoint, point_label
from .utils.logger import get_logger

logger = get_logger(__name__)

COMMANDS = (
    "invariants",
    "resolve",
    "indices",
    "hertling",
    "theorem1",
    "theorem2",
    "theorem3",
    "theorem4",
    "diagnostics",
    "all",
)

_LITERAL = {"type": ["integer", "string", "array"]}
_MONOMIAL = {
    "type": "array",
    "minItems": 3,
    "maxItems": 3,
    "items": [{"type": "integer", "minimum": 0}, {"type": "integer", "minimum": 0}, _LITERAL],
}
_BRANCH = {
    "type": "object",
    "required": ["name", "n", "series"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "n": {"type": "integer", "minimum": 1},
        "series": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "items": [{"type": "integer", "minimum": 0}, _LITERAL],
            },
        },
        "vertical": {"type": "boolean"},
        "known_order": {"type": "integer", "minimum": 0},
    },
}

CASE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "field": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"cyclotomic_order": {"type": "integer", "minimum": 1}},
        },
        "branches": {"type": "array", "items": _BRANCH},
        "foliation": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "a": {"type": "array", "items": _MONOMIAL},
                "b": {"type": "array", "items": _MONOMIAL},
                "hamiltonian": {"type": "boolean"},
            },
        },
        "global": {
            "type": "object",
            "required": ["f"],
            "additionalProperties": False,
            "properties": {
                "f": {"type": "array", "items": _MONOMIAL, "minItems": 1},
                "projective": {"type": "boolean"},
                "singular_points": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["at", "branches"],
                        "additionalProperties": False,
                        "properties": {
                            "at": {"type": "array", "minItems": 2, "maxItems": 2, "items": _LITERAL},
                            "branches": {"type": "array", "items": _BRANCH, "minItems": 1},
                        },
                    },
                },
            },
        },
        "checks": {"type": "array", "items": {"enum": list(COMMANDS)}},
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "truncation_audit_order": {"type": "integer", "minimum": 1},
                "report_format": {"enum": ["text", "json"]},
                "branch": {"type": "string"},
            },
        },
    },
}

_RAT = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*")


def _locate(text: Optional[str], needle: str) -> Tuple[Optional[int], Optional[int]]:
    """1-based line and column of the first occurrence of needle."""
    if not text:
        return None, None
    pos = text.find(needle)
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    column = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, column


def parse_rational(literal: str) -> Fraction:
    """
    RAT := INT | INT "/" POSINT

    Raises:
        CaseFileError: For anything else, including a zero denominator
    """
    match = _RAT.fullmatch(literal)
    if not match:
        raise CaseFileError(f"malformed rational literal {literal!r}")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise CaseFileError(f"zero denominator in {literal!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def parse_literal(value: Any) -> Any:
    """
    A CYC literal as a Fraction or a list of Fractions (coefficients of ζ^k).

    Raises:
        CaseFileError: If the literal does not follow the grammar
    """
    if isinstance(value, bool):
        raise CaseFileError(f"boolean {value!r} is not a coefficient")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, list):
        if not value:
            raise CaseFileError("empty coefficient vector")
        return [_vector_entry(v) for v in value]
    if isinstance(value, str):
        text = value.strip()
        if text.startswith("["):
            if not text.endswith("]"):
                raise CaseFileError(f"unterminated coefficient vector {value!r}")
            parts = text[1:-1].split(",")
            if not text[1:-1].strip():
                raise CaseFileError("empty coefficient vector")
            return [parse_rational(p) for p in parts]
        return parse_rational(text)
    raise CaseFileError(f"unsupported coefficient {value!r}")


def _vector_entry(value) -> Fraction:
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise CaseFileError(f"coefficient vector entries must be rationals, got {value!r}")


@dataclass
class CaseFile:
    """A parsed and validated case."""

    name: str
    field: CycloField
    branches: List[PuiseuxBranch]
    foliation: Optional[VectorField] = None
    global_instance: Optional[GlobalInstance] = None
    projective: bool = True
    checks: List[str] = dc_field(default_factory=list)
    options: Dict[str, Any] = dc_field(default_factory=dict)
    source: Optional[Path] = None

    @property
    def report_format(self) -> str:
        return self.options.get("report_format", "text")

    @property
    def audit_order(self) -> Optional[int]:
        return self.options.get("truncation_audit_order")

    @property
    def selected_branch(self) -> Optional[str]:
        return self.options.get("branch")

    def branch(self, name: str) -> PuiseuxBranch:
        for b in self.branches:
            if b.name == name:
                return b
        raise CaseFileError(f"case {self.name} has no branch named {name!r}")

    def require_foliation(self) -> VectorField:
        if self.foliation is None:
            raise CaseFileError(f"case {self.name} has no foliation")
        return self.foliation

    def require_global(self) -> GlobalInstance:
        if self.global_instance is None:
            raise CaseFileError(f"case {self.name} has no global curve")
        if not self.projective:
            raise CaseFileError(f"case {self.name}: global checks need a projective instance")
        return self.global_instance


class _Reader:
    """Turns validated JSON into domain objects, reporting literal errors at their location."""

    def __init__(self, field: CycloField, text: Optional[str]):
        self.field = field
        self.text = text

    def scalar(self, value) -> Scalar:
        try:
            return self.field.coerce(parse_literal(value))
        except CaseFileError as e:
            line, column = _locate(self.text, json.dumps(value))
            raise CaseFileError(str(e), line, column) from None

    def poly(self, monomials: Sequence) -> BiPoly:
        return BiPoly.from_list((i, j, self.scalar(c)) for i, j, c in monomials)

    def point(self, coords: Sequence) -> Tuple[Fraction, Fraction]:
        values = [self.scalar(c) for c in coords]
        if not all(is_rational_scalar(v) for v in values):
            raise NonRationalSingularity(f"singular point {coords} is not rational")
        return scalar_to_fraction(values[0]), scalar_to_fraction(values[1])

    def branch(self, data: Dict[str, Any]) -> PuiseuxBranch:
        known = data.get("known_order", INFINITY)
        try:
            series = USeries.from_terms(((e, self.scalar(c)) for e, c in data["series"]), known)
            return PuiseuxBranch(data["name"], data["n"], series, vertical=data.get("vertical", False))
        except FolboundError:
            raise
        except ValueError as e:
            line, column = _locate(self.text, json.dumps(data["name"]))
            raise CaseFileError(f"branch {data['name']}: {e}", line, column) from e

    def branches(self, items: Sequence[Dict[str, Any]]) -> List[PuiseuxBranch]:
        out = [self.branch(b) for b in items]
        names = [b.name for b in out]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise CaseFileError(f"duplicate branch names {duplicates}")
        return out


def _schema_error(data: Any, text: Optional[str]):
    errors = sorted(Draft7Validator(CASE_SCHEMA).iter_errors(data), key=lambda e: list(e.absolute_path))
    if not errors:
        return
    error = errors[0]
    path = "/".join(str(p) for p in error.absolute_path) or "<root>"
    line = column = None
    keys = [p for p in error.absolute_path if isinstance(p, str)]
    if keys:
        line, column = _locate(text, json.dumps(keys[-1]))
    raise CaseFileError(f"{path}: {error.message}", line, column)


def _default_order(data: Dict[str, Any]) -> int:
    """lcm of every branch multiplicity in the case, so that the ramification fits."""
    sizes = [b["n"] for b in data.get("branches", [])]
    for point in data.get("global", {}).get("singular_points", []):
        sizes.extend(b["n"] for b in point["branches"])
    return reduce(lambda a, b: a * b // math.gcd(a, b), sizes, 1)


def _audit_branches(branches: Sequence[PuiseuxBranch], field: CycloField, audit_order: Optional[int], where: str):
    """Pairwise separation of the lifted branches below their known orders and the audit bound."""
    if not branches or any(b.vertical for b in branches):
        return
    try:
        worst = truncation_audit(ramified_lift(branches, field), audit_order)
    except TruncationInsufficient as e:
        raise CaseFileError(f"{where}: {e}") from e
    logger.debug(f"Truncation audit of {where}: separation below order {worst + 1}")


def parse_case(text: str, source: Optional[Path] = None) -> CaseFile:
    """
    Parse and validate a case file.

    Raises:
        CaseFileError: On JSON syntax errors, schema violations, malformed literals, or
            lifted branches that do not separate below their known orders and
            ``truncation_audit_order``
        InvalidBranch: If a branch is not in normal form
        TruncationInsufficient: If a truncated branch does not determine its characteristic data
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CaseFileError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from e
    _schema_error(data, text)

    name = data.get("name") or (source.stem if source else "case")
    field = CycloField(data.get("field", {}).get("cyclotomic_order") or _default_order(data))
    reader = _Reader(field, text)
    branches = reader.branches(data.get("branches", []))
    audit_order = data.get("options", {}).get("truncation_audit_order")
    _audit_branches(branches, field, audit_order, "branches")

    global_instance = None
    projective = True
    if "global" in data:
        g = data["global"]
        projective = g.get("projective", True)
        global_instance = GlobalInstance(
            f=reader.poly(g["f"]),
            singular_points=[
                SingularPoint(
                    at=reader.point(sp["at"]),
                    branches=reader.branches(sp["branches"]),
                )
                for sp in g.get("singular_points", [])
            ],
            name=name,
        )
        for point in global_instance.singular_points:
            _audit_branches(point.branches, field, None, f"singular point {point_label(point.at)}")

    foliation = None
    if "foliation" in data:
        fol = data["foliation"]
        if fol.get("hamiltonian"):
            if "a" in fol or "b" in fol:
                raise CaseFileError("foliation: give either a and b or hamiltonian, not both")
            if branches:
                foliation = VectorField.hamiltonian(reduced_equation(branches, field))
            elif global_instance is not None:
                foliation = VectorField.hamiltonian(global_instance.f)
            else:
                raise CaseFileError("foliation: hamiltonian needs branches or a global curve")
        else:
            if "a" not in fol or "b" not in fol:
                raise CaseFileError("foliation: both a and b are required")
            try:
                foliation = VectorField(reader.poly(fol["a"]), reader.poly(fol["b"])).saturated_at_origin()
            except ValueError as e:
                raise CaseFileError(f"foliation: {e}") from e
    if global_instance is not None:
        global_instance.field = foliation

    case = CaseFile(
        name=name,
        field=field,
        branches=branches,
        foliation=foliation,
        global_instance=global_instance,
        projective=projective,
        checks=list(data.get("checks", [])),
        options=dict(data.get("options", {})),
        source=source,
    )
    logger.debug(f"Parsed case {name}: {len(branches)} branches, foliation={'yes' if foliation else 'no'}")
    return case


def load_case(path) -> CaseFile:
    """Read and parse a case file from disk."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise CaseFileError(f"cannot read {path}: {e}") from e
    logger.info(f"Loading case file {path}")
    return parse_case(text, source=path)
