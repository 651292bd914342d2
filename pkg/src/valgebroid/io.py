"""JSON input files.

Tables are sparse lists of entries whose last element is a rational string
``"p/q"``; basis vectors may be referenced by label or by index::

    {"T": 2,
     "A": {"basis": ["e"], "unit": "e", "product": [["e", "e", "e", "1"]]},
     "B": {"basis": ["beta"], "action": [["e", "beta", "beta", "1"]],
           "pairing": [["beta", "beta", "e", "1"]]},
     "sectors": {"beta": 1},
     "fibers": [{"dim": 1, "A0_action": [["e", 0, 0, "1"]]}]}

``anchor`` entries are ``[b, a, a', c]`` (pi(b)(a) has coefficient c on a'),
``partial`` entries ``[a, b, c]``, fiber ``g_action`` entries ``[g, u, u', c]``
with ``g`` a basis label of B^0 / A^0 dA^0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .algebroid import CommAlgebra, VertexAlgebroid
from .automorphism import GradedEndomorphism, SectorGrading
from .errors import InputError
from .linalg import parse_rational

TOP_FIELDS = {"T", "A", "B", "sectors", "fibers", "endomorphisms", "name", "description"}
A_FIELDS = {"basis", "unit", "product"}
B_FIELDS = {"basis", "action", "bracket", "pairing", "anchor", "partial"}
FIBER_FIELDS = {"dim", "labels", "A0_action", "g_action"}
END_FIELDS = {"name", "A", "B"}


@dataclass
class Problem:
    B: VertexAlgebroid
    grading: SectorGrading
    fibers: list = field(default_factory=list)  # raw fiber dicts, resolved later
    endomorphisms: list = field(default_factory=list)  # (name, GradedEndomorphism)
    warnings: list = field(default_factory=list)
    name: str = ""
    parser: object = field(default=None, repr=False, compare=False)

    @property
    def A(self) -> CommAlgebra:
        return self.B.A


class _Parser:
    def __init__(self):
        self.warnings: list = []

    def fail(self, path: str, msg: str):
        raise InputError(f"{path}: {msg}")

    def fields(self, obj, allowed: set, path: str) -> dict:
        if not isinstance(obj, dict):
            self.fail(path, "expected an object")
        for k in obj:
            if k not in allowed:
                self.fail(path, f"unknown field {k!r}")
        return obj

    def labels(self, obj, path: str) -> tuple:
        basis = obj.get("basis", [])
        if not isinstance(basis, list) or not all(isinstance(x, str) and x for x in basis):
            self.fail(path, "basis must be a list of nonempty strings")
        seen = set()
        for i, x in enumerate(basis):
            if x in seen:
                self.fail(f"{path}[{i}]", f"duplicate label {x!r}")
            seen.add(x)
        return tuple(basis)

    def index(self, ref, labels, path: str) -> int:
        if isinstance(ref, bool):
            self.fail(path, f"bad basis reference {ref!r}")
        if isinstance(ref, int):
            if not 0 <= ref < len(labels):
                self.fail(path, f"index {ref} outside 0..{len(labels) - 1}")
            return ref
        if isinstance(ref, str) and ref in labels:
            return labels.index(ref)
        self.fail(path, f"unknown basis vector {ref!r}")

    def scalar(self, text, path: str):
        try:
            value, reduced = parse_rational(text)
        except InputError as exc:
            self.fail(path, str(exc))
        if not reduced:
            self.warnings.append(f"{path}: rational {text!r} normalized to {value}")
        return value

    def table(self, entries, spaces: tuple, path: str) -> dict:
        """Entries ``[k1, ..., kn, out, c]`` -> ``{(k1..kn): {out: c}}``."""
        if entries is None:
            return {}
        if not isinstance(entries, list):
            self.fail(path, "expected a list of entries")
        out: dict = {}
        arity = len(spaces)
        for i, e in enumerate(entries):
            p = f"{path}[{i}]"
            if not isinstance(e, list) or len(e) != arity + 1:
                self.fail(p, f"expected {arity + 1} elements")
            ks = tuple(self.index(e[j], spaces[j], f"{p}[{j}]") for j in range(arity - 1))
            k = ks[0] if len(ks) == 1 else ks
            o = self.index(e[arity - 1], spaces[-1], f"{p}[{arity - 1}]")
            c = self.scalar(e[arity], f"{p}[{arity}]")
            row = out.setdefault(k, {})
            if o in row:
                self.fail(p, "duplicate entry")
            if c:
                row[o] = c
        return out


def parse_input(source) -> Problem:
    """Parse a path, a JSON string or an already-decoded dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = Path(source).read_text(encoding="utf-8") if not _looks_like_json(source) else source
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    P = _Parser()
    P.fields(data, TOP_FIELDS, "$")
    T = data.get("T", 1)
    if not isinstance(T, int) or isinstance(T, bool) or T < 1:
        P.fail("$.T", "T must be a positive integer")
    a = P.fields(data.get("A", {}), A_FIELDS, "$.A")
    LA = P.labels(a, "$.A.basis")
    if not LA:
        P.fail("$.A.basis", "A must be nonzero (it contains the unit)")
    if "unit" not in a:
        P.fail("$.A", "missing field 'unit'")
    unit = P.index(a["unit"], LA, "$.A.unit")
    prod = P.table(a.get("product"), (LA, LA, LA), "$.A.product")
    A = CommAlgebra(LA, prod, unit)
    b = P.fields(data.get("B", {}), B_FIELDS, "$.B")
    LB = P.labels(b, "$.B.basis")
    clash = set(LA) & set(LB)
    if clash:
        P.fail("$.B.basis", f"labels shared with A: {sorted(clash)}")
    B = VertexAlgebroid(
        A, LB,
        action=P.table(b.get("action"), (LA, LB, LB), "$.B.action"),
        bracket=P.table(b.get("bracket"), (LB, LB, LB), "$.B.bracket"),
        anchor=P.table(b.get("anchor"), (LB, LA, LA), "$.B.anchor"),
        pairing=P.table(b.get("pairing"), (LB, LB, LA), "$.B.pairing"),
        partial=P.table(b.get("partial"), (LA, LB), "$.B.partial"),
    )
    sectors = data.get("sectors", {})
    if not isinstance(sectors, dict):
        P.fail("$.sectors", "expected an object")
    sa, sb = [0] * len(LA), [0] * len(LB)
    for lab, r in sectors.items():
        p = f"$.sectors.{lab}"
        if not isinstance(r, int) or isinstance(r, bool) or not 0 <= r < T:
            P.fail(p, f"sector must be an integer in 0..{T - 1}")
        if lab in LA:
            sa[LA.index(lab)] = r
        elif lab in LB:
            sb[LB.index(lab)] = r
        else:
            P.fail(p, f"unknown basis vector {lab!r}")
    G = SectorGrading(T, tuple(sa), tuple(sb))
    fibers = data.get("fibers", [])
    if not isinstance(fibers, list):
        P.fail("$.fibers", "expected a list")
    for i, f in enumerate(fibers):
        P.fields(f, FIBER_FIELDS, f"$.fibers[{i}]")
    ends = []
    for i, e in enumerate(data.get("endomorphisms", []) or []):
        p = f"$.endomorphisms[{i}]"
        P.fields(e, END_FIELDS, p)
        fA = P.table(e.get("A"), (LA, LA), f"{p}.A")
        fB = P.table(e.get("B"), (LB, LB), f"{p}.B")
        ends.append((e.get("name", f"f{i}"), GradedEndomorphism(fA, fB)))
    return Problem(B, G, list(fibers), ends, P.warnings, data.get("name", ""), P)


def _looks_like_json(source) -> bool:
    return isinstance(source, str) and source.lstrip().startswith("{")


def resolve_fiber(prob: Problem, index: int, ctx):
    """Turn raw fiber ``index`` into a :class:`~valgebroid.twisted.TwistedFiber` for ``ctx``."""
    from .twisted import TwistedFiber

    P = prob.parser or _Parser()
    if not 0 <= index < len(prob.fibers):
        raise InputError(f"--fiber {index}: file has {len(prob.fibers)} fibers")
    f = prob.fibers[index]
    path = f"$.fibers[{index}]"
    dim = f.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        P.fail(f"{path}.dim", "dim must be a nonnegative integer")
    labels = tuple(f.get("labels", ())) or tuple(f"u{i}" for i in range(dim))
    if len(labels) != dim:
        P.fail(f"{path}.labels", "one label per fiber basis vector")
    A0 = tuple(prob.A.labels[a] for a in ctx.fixed.A_index)
    raw = P.table(f.get("A0_action"), (prob.A.labels, labels, labels), f"{path}.A0_action")
    for (a, u) in raw:
        if prob.A.labels[a] not in A0:
            P.fail(f"{path}.A0_action", f"{prob.A.labels[a]!r} is not in sector 0")
    g_act = P.table(f.get("g_action"), (ctx.g_labels, labels, labels), f"{path}.g_action")
    return TwistedFiber(dim, raw, g_act, labels)
