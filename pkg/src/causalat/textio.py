"""Line-oriented text formats and the workspace loader.

A workspace file is a sequence of blocks.  A block starts with a header line
and runs until the next header; ``#`` starts a comment.

    lattice m3
    elements 0 a b c 1
    covers 0<a 0<b 0<c a<1 b<1 c<1

    lattice two = chain(2)

    relation sep from two to m3
    0 ~> *
    * ~> 1

    quantale Q over E            quantale End = endo(two)
    unit e
    e & f = g

    action S of Q on L
    e . a = b

    amap g from m3 to two
    a |-> {1}

Files may refer to objects declared in other files of the same workspace.
In relation lines ``*`` stands for every element of that side.  Quantale and
action tables must be total; unlisted singletons of an amap map to ``{}``.
"""

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import lattice as lat
from .errors import DuplicateName, LatticeError, ParseError, UnresolvedReference
from .galois import CausalRelation, validate_relation
from .propositions import ActualityMap, is_continuous
from .quantaloid import InductionSystem, Quantale, check_quantale, endo_quantale, validate_action
from .report import Report

KINDS = ("lattice", "relation", "quantale", "action", "amap")

GENERATORS = {
    "chain": lat.chain,
    "boolean": lat.boolean,
    "mn": lat.mn,
    "n5": lat.n5,
    "subspace": lat.subspace_lattice,
}

_NAME = r"[A-Za-z_][\w.\-]*"
_HEADERS = {
    "lattice": re.compile(rf"^lattice\s+({_NAME})$"),
    "lattice=": re.compile(rf"^lattice\s+({_NAME})\s*=\s*(\w+)\(([^)]*)\)$"),
    "relation": re.compile(rf"^relation\s+({_NAME})\s+from\s+({_NAME})\s+to\s+({_NAME})$"),
    "quantale": re.compile(rf"^quantale\s+({_NAME})\s+over\s+({_NAME})$"),
    "quantale=": re.compile(rf"^quantale\s+({_NAME})\s*=\s*endo\(\s*({_NAME})\s*\)$"),
    "action": re.compile(rf"^action\s+({_NAME})\s+of\s+({_NAME})\s+on\s+({_NAME})$"),
    "amap": re.compile(rf"^amap\s+({_NAME})\s+from\s+({_NAME})\s+to\s+({_NAME})$"),
}
_ARROW = re.compile(r"^(\S+)\s+~>\s+(\S+)$")
_TIMES = re.compile(r"^(\S+)\s+&\s+(\S+)\s*=\s*(\S+)$")
_ACT = re.compile(r"^(\S+)\s+\.\s+(\S+)\s*=\s*(\S+)$")
_UNIT = re.compile(r"^unit\s+(\S+)$")
_IMAGE = re.compile(r"^(\S+?)\s*\|->\s*\{([^}]*)\}$")


@dataclass
class Block:
    kind: str
    header: tuple
    path: str
    line: int
    body: list = field(default_factory=list)  # (line number, text)

    def fail(self, message, line=None):
        return ParseError(self.path, line or self.line, message)


@dataclass
class Workspace:
    lattices: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    quantales: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)
    amaps: dict = field(default_factory=dict)
    reports: dict = field(default_factory=dict)  # (kind, name) -> Report

    def table(self, kind):
        return getattr(self, {"amap": "amaps"}.get(kind, kind + "s"))

    def get(self, kind, name):
        try:
            return self.table(kind)[name]
        except KeyError:
            raise UnresolvedReference(f"no {kind} named {name!r}", witness=name) from None

    def find(self, name, kinds=KINDS):
        """The single object called ``name`` among ``kinds``."""
        for kind in kinds:
            if name in self.table(kind):
                return kind, self.table(kind)[name]
        raise UnresolvedReference(f"nothing named {name!r}", witness=name)

    def add(self, kind, name, obj, report=None):
        table = self.table(kind)
        if name in table:
            raise DuplicateName(f"{kind} {name!r} declared twice", witness=name)
        table[name] = obj
        if report is not None:
            self.reports[(kind, name)] = report

    def valid(self, kind, name):
        report = self.reports.get((kind, name))
        return report is None or report.ok


def _strip(text):
    return text.split("#", 1)[0].strip()


def split_blocks(text, path="<string>"):
    blocks = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head in KINDS:
            for key, rx in _HEADERS.items():
                if key.rstrip("=") == head and (m := rx.match(line)):
                    blocks.append(Block(key, m.groups(), path, no))
                    break
            else:
                raise ParseError(path, no, f"malformed {head} header: {line!r}")
        elif not blocks:
            raise ParseError(path, no, f"statement outside any block: {line!r}")
        else:
            blocks[-1].body.append((no, line))
    return blocks


def _label(L, token, block, no):
    try:
        return L.index(token)
    except LatticeError:
        raise block.fail(f"{token!r} is not an element of {L.name}", no) from None


def _build_lattice(block):
    name = block.header[0]
    if block.kind == "lattice=":
        _, gen, args = block.header
        if block.body:
            raise block.fail("a generated lattice takes no body", block.body[0][0])
        if gen not in GENERATORS:
            raise block.fail(f"unknown generator {gen!r}")
        try:
            params = [int(a) for a in args.replace(" ", "").split(",") if a]
            return GENERATORS[gen](*params).renamed(name)
        except (ValueError, TypeError) as exc:
            raise block.fail(f"bad arguments for {gen}: {exc}") from None
    labels, covers = [], []
    for no, line in block.body:
        word, _, rest = line.partition(" ")
        if word == "elements":
            labels.extend(rest.split())
        elif word == "covers":
            for tok in rest.split():
                lo, sep, hi = tok.partition("<")
                if not sep or not lo or not hi:
                    raise block.fail(f"bad cover {tok!r}", no)
                covers.append((lo, hi, no))
        else:
            raise block.fail(f"unexpected statement in lattice: {line!r}", no)
    if len(set(labels)) != len(labels):
        dup = next(x for x in labels if labels.count(x) > 1)
        raise block.fail(f"element {dup!r} listed twice")
    known = set(labels)
    for lo, hi, no in covers:
        for x in (lo, hi):
            if x not in known:
                raise block.fail(f"cover mentions unknown element {x!r}", no)
    return lat.build_from_covers(labels, [(lo, hi) for lo, hi, _ in covers], name=name)


def _build_relation(block, ws):
    name, a, b = block.header
    L1, L2 = ws.get("lattice", a), ws.get("lattice", b)
    pairs = set()
    for no, line in block.body:
        m = _ARROW.match(line)
        if not m:
            raise block.fail(f"expected 'a ~> b', got {line!r}", no)
        left = L1.elements if m[1] == "*" else [_label(L1, m[1], block, no)]
        right = L2.elements if m[2] == "*" else [_label(L2, m[2], block, no)]
        pairs.update((x, y) for x in left for y in right)
    return CausalRelation.from_pairs(L1, L2, sorted(pairs), name=name)


def _total_table(block, rows, cols, rx, what):
    E_rows, E_cols, E_out = rows, cols[0], cols[1]
    table = np.full((E_rows.n, E_cols.n), -1, dtype=np.int32)
    unit = None
    for no, line in block.body:
        if (m := _UNIT.match(line)) and what == "&":
            unit = _label(E_rows, m[1], block, no)
            continue
        m = rx.match(line)
        if not m:
            raise block.fail(f"expected 'x {what} y = z', got {line!r}", no)
        i = _label(E_rows, m[1], block, no)
        j = _label(E_cols, m[2], block, no)
        k = _label(E_out, m[3], block, no)
        if table[i, j] >= 0 and table[i, j] != k:
            raise block.fail(f"conflicting entries for {m[1]} {what} {m[2]}", no)
        table[i, j] = k
    missing = np.argwhere(table < 0)
    if missing.size:
        i, j = map(int, missing[0])
        raise block.fail(f"table is not total: no entry for {E_rows.label(i)} {what} {E_cols.label(j)}")
    return table, unit


def _build_quantale(block, ws):
    if block.kind == "quantale=":
        name, base = block.header
        if block.body:
            raise block.fail("endo(...) takes no body", block.body[0][0])
        Q = endo_quantale(ws.get("lattice", base))
        Q = Quantale(Q.carrier.renamed(name + "-E"), Q.mult, Q.unit, name, Q.maps)
        return Q, Q.carrier
    name, over = block.header
    E = ws.get("lattice", over)
    mult, unit = _total_table(block, E, (E, E), _TIMES, "&")
    if unit is None:
        raise block.fail("quantale has no unit line")
    return Quantale(E, mult, unit, name), None


def _build_action(block, ws):
    name, qname, lname = block.header
    Q = ws.get("quantale", qname)
    L = ws.get("lattice", lname)
    table, _ = _total_table(block, Q.carrier, (L, L), _ACT, ".")
    return InductionSystem(Q, L, table, name)


def _build_amap(block, ws):
    name, a, b = block.header
    L1, L2 = ws.get("lattice", a), ws.get("lattice", b)
    images = [frozenset()] * L1.n
    seen = set()
    for no, line in block.body:
        m = _IMAGE.match(line)
        if not m:
            raise block.fail(f"expected 'a |-> {{b, c}}', got {line!r}", no)
        x = _label(L1, m[1], block, no)
        if x == L1.bottom:
            raise block.fail("the bottom element has no singleton image", no)
        if x in seen:
            raise block.fail(f"{m[1]} mapped twice", no)
        seen.add(x)
        toks = [t.strip() for t in m[2].split(",") if t.strip()]
        ys = frozenset(_label(L2, t, block, no) for t in toks)
        if L2.bottom in ys:
            raise block.fail("an actuality set cannot contain the bottom element", no)
        images[x] = ys
    return ActualityMap(L1, L2, tuple(images), name)


def _continuity_report(g):
    v = is_continuous(g)
    r = Report()
    shown = ""
    if not v:
        A, B = v.witness
        shown = f"A={g.src.fmt(A)} B={g.src.fmt(B)}"
    r.add("continuous", v.holds, [v.witness] if not v else (), shown=shown, note=v.note)
    return r


_BUILD_ORDER = ("lattice", "quantale", "relation", "action", "amap")
SUFFIXES = (".lat", ".rel", ".qa", ".am", ".ws")


def build(blocks, ws=None):
    """Build blocks kind by kind, so references may point into later files."""
    ws = ws or Workspace()
    for kind in _BUILD_ORDER:
        for block in blocks:
            if block.kind.rstrip("=") == kind:
                _build_block(ws, block, kind)
    return ws


def _build_block(ws, block, kind):
    name = block.header[0]
    try:
        if kind == "lattice":
            obj = _build_lattice(block)
            ws.add(kind, name, obj, obj.axioms_report())
        elif kind == "relation":
            obj = _build_relation(block, ws)
            ws.add(kind, name, obj, validate_relation(obj))
        elif kind == "quantale":
            obj, carrier = _build_quantale(block, ws)
            if carrier is not None:
                ws.add("lattice", carrier.name, carrier, carrier.axioms_report())
            ws.add(kind, name, obj, check_quantale(obj))
        elif kind == "action":
            obj = _build_action(block, ws)
            ws.add(kind, name, obj, validate_action(obj))
        else:
            obj = _build_amap(block, ws)
            ws.add(kind, name, obj, _continuity_report(obj))
    except (ParseError, UnresolvedReference, DuplicateName):
        raise
    except LatticeError as exc:
        raise block.fail(str(exc)) from None


def parse_text(text, path="<string>"):
    return build(split_blocks(text, path))


def workspace_files(paths):
    """Expand directories to their workspace files in name order."""
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(q for q in p.iterdir() if q.suffix in SUFFIXES and q.is_file()))
        else:
            out.append(p)
    return out


def parse_workspace(paths):
    blocks = []
    for p in workspace_files(paths):
        blocks.extend(split_blocks(p.read_text(encoding="utf-8"), str(p)))
    return build(blocks)


# canonical dumps ----------------------------------------------------------------


def dump_lattice(L, name=None):
    lines = [f"lattice {name or L.name}", "elements " + " ".join(L.labels)]
    covers = L.covers()
    if covers:
        lines.append("covers " + " ".join(f"{L.label(a)}<{L.label(b)}" for a, b in covers))
    return "\n".join(lines) + "\n"


def dump_relation(R, src_name=None, dst_name=None):
    lines = [f"relation {R.name or 'r'} from {src_name or R.src.name} to {dst_name or R.dst.name}"]
    lines += [f"{R.src.label(a)} ~> {R.dst.label(b)}" for a, b in R.pairs()]
    return "\n".join(lines) + "\n"


def dump_quantale(Q, carrier_name=None):
    E = Q.carrier
    lines = [f"quantale {Q.name or 'Q'} over {carrier_name or E.name}", f"unit {E.label(Q.unit)}"]
    lines += [f"{E.label(e)} & {E.label(f)} = {E.label(Q.times(e, f))}" for e in E.elements for f in E.elements]
    return "\n".join(lines) + "\n"


def dump_action(S, quantale_name=None, lattice_name=None):
    E, L = S.quantale.carrier, S.lattice
    lines = [f"action {S.name or 'S'} of {quantale_name or S.quantale.name} on {lattice_name or L.name}"]
    lines += [f"{E.label(e)} . {L.label(a)} = {L.label(S.act(e, a))}" for e in E.elements for a in L.elements]
    return "\n".join(lines) + "\n"


def dump_amap(g, src_name=None, dst_name=None):
    L1, L2 = g.src, g.dst
    lines = [f"amap {g.name or 'g'} from {src_name or L1.name} to {dst_name or L2.name}"]
    lines += [
        f"{L1.label(a)} |-> {{{', '.join(L2.label(y) for y in sorted(g.images[a]))}}}"
        for a in L1.elements
        if a != L1.bottom
    ]
    return "\n".join(lines) + "\n"
