"""``causalat`` command line.

Exit codes: 0 when every requested check passes, 1 on a law or validation
failure, 2 on an input error (syntax, unknown names, caps exceeded).
"""

import argparse
import os
import sys

from . import galois, propositions, quantaloid, textio
from .completion import (
    check_completion_universal_traits,
    frame_completion,
    is_frame,
    is_frame_exhaustive,
)
from .errors import (
    DuplicateName,
    ForeignElement,
    LatticeError,
    ParameterOutOfRange,
    ParseError,
    TooLarge,
    UnknownVerb,
    UnresolvedReference,
)
from .lattice import DEFAULT_CAP, is_isomorphic
from .report import Report

INPUT_ERRORS = (
    ParseError,
    UnresolvedReference,
    DuplicateName,
    UnknownVerb,
    ForeignElement,
    TooLarge,
    ParameterOutOfRange,
)

#: `laws` runs the completion traits and the quantaloid check only below these sizes
COMPLETION_LIMIT = 12
QUANTALOID_LIMIT = 4


class Out:
    def __init__(self, fmt, stream):
        self.fmt = fmt
        self.stream = stream

    def heading(self, title):
        if self.fmt == "text":
            self.stream.write(f"== {title} ==\n")

    def line(self, text=""):
        self.stream.write(text + "\n")

    def report(self, report, prefix=""):
        # text mode shows law names under a heading, lines mode qualifies them
        for text in report.lines(prefix if self.fmt == "lines" else ""):
            self.line(text)
        return report.ok


def _lattice_arg(ws, name):
    if os.path.isfile(name):
        local = textio.parse_workspace([name])
        if not local.lattices:
            raise UnresolvedReference(f"{name} declares no lattice", witness=name)
        return next(iter(local.lattices.values()))
    return ws.get("lattice", name)


def _relation_pair(rel, out, totalize_kernel):
    K = galois.kernel_K(rel)
    if K and totalize_kernel:
        rel, pair = galois.totalize(rel)
        out.line(f"kernel {rel.src.fmt(K)} totalized")
        return rel, pair
    return rel, galois.derive_pair(rel)


def cmd_check(ws, args, out):
    ok = True
    for kind in textio.KINDS:
        for name in ws.table(kind):
            if args.names and name not in args.names:
                continue
            out.heading(f"{kind} {name}")
            ok &= out.report(ws.reports.get((kind, name), Report()), f"{kind}.{name}.")
    for name in args.names:
        ws.find(name)
    return ok


def cmd_adjoint(ws, args, out):
    rel = ws.get("relation", args.relation)
    report = galois.validate_relation(rel)
    out.heading(f"relation {rel.name}")
    if not out.report(report, f"{rel.name}."):
        return False
    rel, pair = _relation_pair(rel, out, args.totalize)
    for line in pair.lower.lines("f*"):
        out.line(line)
    for line in pair.upper.lines("f_*"):
        out.line(line)
    v = pair.verify()
    r = Report()
    r.add("adjunction", v.holds, [v.witness] if not v else (), shown=_pair_label(pair.lower, v.witness))
    return out.report(r, f"{rel.name}.")


def _pair_label(f, w):
    return "" if w is None else f"({f.src.label(w[0])},{f.dst.label(w[1])})"


def cmd_compose(ws, args, out):
    r12 = ws.get("relation", args.first)
    r23 = ws.get("relation", args.second)
    for rel in (r12, r23):
        report = galois.validate_relation(rel)
        if not report.ok:
            out.heading(f"relation {rel.name}")
            out.report(report, f"{rel.name}.")
            return False
    pair = galois.compose_pairs(galois.derive_pair(r12), galois.derive_pair(r23))
    out.heading(f"{r12.name} ; {r23.name}")
    for line in pair.lower.lines("f*"):
        out.line(line)
    for line in pair.upper.lines("f_*"):
        out.line(line)
    v = pair.verify()
    r = Report()
    r.add("adjunction", v.holds, [v.witness] if not v else (), shown=_pair_label(pair.lower, v.witness))
    composite = galois.relation_of_pair(pair)
    r.add("relation-valid", galois.validate_relation(composite).ok)
    return out.report(r, "compose.")


def cmd_hom(ws, args, out):
    L1 = ws.get("lattice", args.source)
    L2 = ws.get("lattice", args.target)
    h = galois.enumerate_hom(L1, L2, args.kind, cap=args.cap)
    out.heading(f"hom {args.kind} {L1.name} -> {L2.name}")
    out.line(f"count {len(h)}")
    for i in range(len(h)):
        out.line(f"map {h.label(i)}")
    out.line(f"bottom {h.label(h.bottom)}")
    out.line(f"top {h.label(h.top)}")
    v = h.completeness()
    r = Report()
    r.add("complete", v.holds)
    return out.report(r, "hom.")


def cmd_act(ws, args, out):
    S = ws.get("action", args.action)
    E, L = S.quantale.carrier, S.lattice
    e = E.index(args.induction)
    rep = quantaloid.represent_star(S)
    out.heading(f"action {S.name} induction {E.label(e)}")
    if args.element is not None:
        a = L.index(args.element)
        out.line(f"{E.label(e)} . {L.label(a)} = {L.label(S.act(e, a))}")
    for line in rep.upper[e].lines("e_*"):
        out.line(line)
    for line in rep.lower[e].lines("e^*"):
        out.line(line)
    return True


def cmd_duality(ws, args, out):
    S = ws.get("action", args.action)
    out.heading(f"action {S.name}")
    return out.report(quantaloid.check_causal_duality(S), f"{S.name}.duality.")


def cmd_resolve(ws, args, out):
    L = ws.get("lattice", args.lattice)
    out.heading(f"lattice {L.name}")
    if args.embed is not None:
        x = L.index(args.embed)
        out.line(f"embed({L.label(x)}) = {L.fmt(propositions.embed(L, x))}")
    if args.members is not None:
        A = propositions.actuality_set(L, args.members)
        out.line(f"resolve({L.fmt(A)}) = {L.label(propositions.resolve(L, A))}")
    return out.report(propositions.check_resolution_adjunction(L, cap=args.cap), f"{L.name}.resolution.")


def cmd_propagate(ws, args, out):
    g = ws.get("amap", args.amap)
    out.heading(f"amap {g.name}")
    v = propositions.is_continuous(g, cap=args.cap, seed=args.seed)
    r = Report()
    shown = ""
    if not v:
        A, B = v.witness
        shown = f"A={g.src.fmt(A)} B={g.src.fmt(B)}"
    r.add("continuous", v.holds, [v.witness] if not v else (), shown=shown, note=v.note)
    ok = out.report(r, f"{g.name}.")
    if ok:
        for line in propositions.induced_map(g, cap=args.cap, seed=args.seed).lines("f"):
            out.line(line)
    return ok


def cmd_complete(ws, args, out):
    L = _lattice_arg(ws, args.lattice)
    C, e = frame_completion(L, cap=min(args.cap, COMPLETION_LIMIT))
    out.line(textio.dump_lattice(C, f"{L.name}-frame").rstrip("\n"))
    for x in L.elements:
        out.line(f"{L.label(x)} -> {C.label(e(x))}")
    return True


def law_suite(ws, cap=DEFAULT_CAP, seed=0):
    """Every validator and law check applicable to the workspace objects,
    in declaration order."""
    sections = []
    for name, L in ws.lattices.items():
        r = Report().extend(ws.reports[("lattice", name)], "axioms.")
        if L.n <= cap:
            r.extend(propositions.check_resolution_adjunction(L, cap=cap), "resolution.")
        if L.n <= COMPLETION_LIMIT:
            r.extend(check_completion_universal_traits(L), "completion.")
            C, _ = frame_completion(L)
            r.add("completion.idempotent", is_isomorphic(C, frame_completion(C).lattice) is not None)
        r.add("frame-agreement", is_frame(L).holds == _frame_exhaustive(L))
        sections.append((f"lattice {name}", f"lattice.{name}.", r))
    for name, R in ws.relations.items():
        r = Report().extend(ws.reports[("relation", name)])
        if r.ok and not galois.kernel_K(R):
            pair = galois.derive_pair(R)
            v = pair.verify()
            r.add("adjunction", v.holds, [v.witness] if not v else (), shown=_pair_label(pair.lower, v.witness))
            r.add("round-trip", galois.relation_of_pair(pair) == R)
        sections.append((f"relation {name}", f"relation.{name}.", r))
    for name, Q in ws.quantales.items():
        sections.append((f"quantale {name}", f"quantale.{name}.", ws.reports[("quantale", name)]))
    for name, S in ws.actions.items():
        r = Report().extend(ws.reports[("action", name)], "module.")
        if r.ok:
            r.extend(quantaloid.check_representation(S), "representation.")
            r.extend(quantaloid.check_causal_duality(S), "duality.")
        sections.append((f"action {name}", f"action.{name}.", r))
    for name, g in ws.amaps.items():
        r = Report().extend(ws.reports[("amap", name)])
        if r.ok:
            f = propositions.induced_map(g, seed=seed)
            r.add("lift-round-trip", propositions.induced_map(propositions.lift_map(f)) == f)
        sections.append((f"amap {name}", f"amap.{name}.", r))
    small = [L for L in ws.lattices.values() if L.n <= QUANTALOID_LIMIT]
    if small:
        sections.append(("quantaloid", "quantaloid.", quantaloid.check_quantaloid(small, cap=cap)))
    return sections


def _frame_exhaustive(L):
    if L.n > COMPLETION_LIMIT:
        return is_frame(L).holds
    return is_frame_exhaustive(L, cap=COMPLETION_LIMIT).holds


def cmd_laws(ws, args, out):
    ok = True
    for title, prefix, report in law_suite(ws, cap=args.cap, seed=args.seed):
        out.heading(title)
        ok &= out.report(report, prefix)
    out.line(f"RESULT {'PASS' if ok else 'FAIL'}")
    return ok


COMMANDS = {
    "check": cmd_check,
    "adjoint": cmd_adjoint,
    "compose": cmd_compose,
    "hom": cmd_hom,
    "act": cmd_act,
    "duality": cmd_duality,
    "resolve": cmd_resolve,
    "propagate": cmd_propagate,
    "complete": cmd_complete,
    "laws": cmd_laws,
}


def build_parser():
    p = argparse.ArgumentParser(prog="causalat", description="Finite causal-lattice workbench.")
    p.add_argument("-w", "--workspace", action="append", default=[], metavar="FILE",
                   help="workspace file to load (repeatable)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap on lattice size")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized scans")
    p.add_argument("--format", choices=("text", "lines"), default="text")
    sub = p.add_subparsers(dest="verb", metavar="VERB")

    s = sub.add_parser("check", help="run all validators")
    s.add_argument("names", nargs="*")
    s = sub.add_parser("adjoint", help="derive propagation and causation from a relation")
    s.add_argument("relation")
    s.add_argument("--totalize", action="store_true", help="adjoin a top when the kernel is non-empty")
    s = sub.add_parser("compose", help="compose the adjoint pairs of two relations")
    s.add_argument("first")
    s.add_argument("second")
    s = sub.add_parser("hom", help="enumerate a hom-lattice")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--kind", choices=("join", "meet"), default="join")
    s = sub.add_parser("act", help="evaluate an induction and print e_* and e^*")
    s.add_argument("action")
    s.add_argument("induction")
    s.add_argument("element", nargs="?")
    s = sub.add_parser("duality", help="check causal duality of an action")
    s.add_argument("action")
    s = sub.add_parser("resolve", help="evaluate embed/resolve")
    s.add_argument("lattice")
    s.add_argument("--embed", metavar="X")
    s.add_argument("--set", dest="members", nargs="*", metavar="A")
    s = sub.add_parser("propagate", help="continuity and induced map of an amap")
    s.add_argument("amap")
    s = sub.add_parser("complete", help="frame completion of a lattice (name or file)")
    s.add_argument("lattice")
    sub.add_parser("laws", help="run the full law suite")
    return p


def run_command(argv, stdout=None, stderr=None):
    """Parse ``argv``, run the verb and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    known = set(COMMANDS)
    verb = next((a for a in argv if not a.startswith("-") and a in known), None)
    try:
        if verb is None:
            positional = _first_positional(argv)
            if positional is not None:
                raise UnknownVerb(f"unknown verb {positional!r}; expected one of {', '.join(COMMANDS)}")
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return 0 if exc.code == 0 else 2
        if args.verb is None:
            parser.print_usage(stderr)
            return 2
        ws = textio.parse_workspace(args.workspace)
        ok = COMMANDS[args.verb](ws, args, Out(args.format, stdout))
        return 0 if ok else 1
    except INPUT_ERRORS as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except LatticeError as exc:
        stderr.write(f"failure: {exc}\n")
        return 1
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return 2


def _first_positional(argv):
    takes_value = {"-w", "--workspace", "--cap", "--seed", "--format"}
    skip = False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in takes_value:
            skip = True
            continue
        if a.startswith("-"):
            continue
        return a
    return None


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
