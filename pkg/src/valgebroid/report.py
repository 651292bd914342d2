"""Check reports: exact witnesses, deterministic text and JSON renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import format_rational, parse_rational

MAX_STORED_VIOLATIONS = 25


def render_vector(v, labels=None) -> dict[str, str]:
    """``{label: "p/q"}`` in sorted key order."""
    out = {}
    for k in sorted(v, key=_sort_key):
        name = labels(k) if callable(labels) else (labels[k] if labels is not None else str(k))
        out[name] = format_rational(v[k])
    return out


def _sort_key(k):
    return (0, k) if isinstance(k, int) else (1, repr(k))


@dataclass
class Violation:
    identity: str
    witness: tuple
    lhs: dict
    rhs: dict

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "witness": list(self.witness),
            "lhs": dict(self.lhs),
            "rhs": dict(self.rhs),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Violation":
        return cls(d["identity"], tuple(d["witness"]), dict(d["lhs"]), dict(d["rhs"]))

    def text(self) -> str:
        w = ", ".join(str(x) for x in self.witness)
        return f"{self.identity} at ({w}): lhs={_vec_text(self.lhs)} rhs={_vec_text(self.rhs)}"


def _vec_text(v: dict) -> str:
    if not v:
        return "0"
    return " + ".join(f"{c}*{k}" for k, c in v.items())


@dataclass
class Report:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    violation_count: int = 0
    notes: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    children: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violation_count == 0 and all(c.passed for c in self.children)

    def check(self, identity: str, witness: tuple, lhs: dict, rhs: dict, labels=None) -> bool:
        """Record one comparison of exact vectors; returns whether it held."""
        self.checked += 1
        if _equal(lhs, rhs):
            return True
        self.fail(identity, witness, render_vector(lhs, labels), render_vector(rhs, labels))
        return False

    def fail(self, identity: str, witness: tuple, lhs=None, rhs=None) -> None:
        self.violation_count += 1
        if len(self.violations) < MAX_STORED_VIOLATIONS:
            self.violations.append(Violation(identity, tuple(witness), lhs or {}, rhs or {}))

    def add(self, child: "Report") -> "Report":
        self.children.append(child)
        return child

    @property
    def total_checked(self) -> int:
        return self.checked + sum(c.total_checked for c in self.children)

    @property
    def total_violations(self) -> int:
        return self.violation_count + sum(c.total_violations for c in self.children)

    def first_violation(self):
        if self.violations:
            return self.violations[0]
        for c in self.children:
            v = c.first_violation()
            if v is not None:
                return v
        return None

    # serialization

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "violation_count": self.violation_count,
            "violations": [v.to_dict() for v in self.violations],
            "notes": list(self.notes),
            "data": self.data,
            "children": [c.to_dict() for c in self.children],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(
            name=d["name"],
            checked=d["checked"],
            violations=[Violation.from_dict(v) for v in d["violations"]],
            violation_count=d["violation_count"],
            notes=list(d["notes"]),
            data=d["data"],
            children=[cls.from_dict(c) for c in d["children"]],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def text(self, indent: int = 0) -> str:
        pad = "  " * indent
        status = "PASS" if self.passed else "FAIL"
        lines = [f"{pad}[{status}] {self.name}: {self.total_checked} checks, {self.total_violations} violations"]
        for v in self.violations:
            lines.append(f"{pad}    ! {v.text()}")
        if self.violation_count > len(self.violations):
            lines.append(f"{pad}    ! ... {self.violation_count - len(self.violations)} more")
        for n in self.notes:
            lines.append(f"{pad}    - {n}")
        for k in sorted(self.data):
            lines.append(f"{pad}    {k}: {_data_text(self.data[k])}")
        for c in self.children:
            lines.append(c.text(indent + 1))
        return "\n".join(lines)


def _data_text(x) -> str:
    if isinstance(x, list):
        return " ".join(_data_text(y) for y in x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {_data_text(x[k])}" for k in sorted(x)) + "}"
    return str(x)


def _equal(u: dict, v: dict) -> bool:
    keys = set(u) | set(v)
    return all(Fraction(u.get(k, 0)) == Fraction(v.get(k, 0)) for k in keys)


def rational_list(values) -> list[str]:
    return [format_rational(Fraction(x)) for x in values]


def parse_rational_list(values) -> list[Fraction]:
    return [parse_rational(x)[0] for x in values]
