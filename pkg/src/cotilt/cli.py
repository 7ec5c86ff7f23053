"""Command-line front end: ``cotilt <subcommand> --algebra FILE --U EXPR ...``.

Exit codes: 0 when the computation succeeded and every verified property
held, 1 when a verification failed (including a "no" answer from the
reflexivity subcommands), 2 on malformed input.
"""
from __future__ import annotations

import argparse
import sys

from . import theorems as th
from .algebra import algebra_from_text
from .derived import Derived, parse_complex
from .duality import DualityContext
from .errors import CotiltError, HypothesisViolated, InputError
from .expr import evaluate, evaluate_summands, parse
from .modules import describe, projective_resolution, set_iso_seed
from .registry import REGISTRY, example_ids, run_example
from .spectral import check_e2_oracle, second_spectral

THEOREMS = ("driflessivi", "bb", "classes", "adjoint", "last", "lastt", "n2", "lemma",
            "atmostone")


class Report:
    """Ordered key=value pairs plus optional human-only lines."""

    def __init__(self, command):
        self.items = [("command", command)]
        self.notes = []
        self.failed = False

    def add(self, key, value):
        self.items.append((key, _text(value)))

    def note(self, line):
        self.notes.append(line)

    def fail(self, key, value):
        self.failed = True
        self.add(key, value)

    def render(self, fmt):
        if fmt == "machine":
            lines = ["%s=%s" % kv for kv in self.items]
            lines.append("status=%s" % ("fail" if self.failed else "ok"))
        else:
            width = max(len(k) for k, _ in self.items)
            lines = ["%-*s  %s" % (width, k, v) for k, v in self.items]
            lines.extend(self.notes)
            lines.append("FAIL" if self.failed else "OK")
        return "\n".join(lines) + "\n"


def _text(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if hasattr(v, "dim_vector"):
        return describe(v)
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_text(x) for x in v) + "]"
    return str(v)


# --- session ---------------------------------------------------------------------

class Session:
    def __init__(self, args):
        self.args = args
        if args.example:
            rec = REGISTRY.get(args.example)
            if rec is None:
                raise InputError("unknown example %r" % args.example)
            text, u_expr, labels = rec.algebra, rec.u, rec.labels
        else:
            if not args.algebra:
                raise InputError("--algebra FILE (or --example ID) is required")
            text = _read(args.algebra)
            u_expr, labels = args.U, None
        if args.labels:
            labels = [int(x) for x in args.labels.split(",")]
        self.A = algebra_from_text(text)
        self.u_expr = args.U or u_expr
        self._ctx = None
        self.labels = labels

    @property
    def ctx(self):
        if self._ctx is None:
            if not self.u_expr:
                raise InputError("--U EXPR is required for this subcommand")
            U = evaluate_summands(parse(self.u_expr), self.A)
            kw = {"labels": self.labels}
            if self.args.cap_res:
                kw["cap"] = self.args.cap_res
            self._ctx = DualityContext(self.A, U, **kw)
            self.D = Derived(self._ctx, cap=self.args.cap_res)
        return self._ctx

    def module(self, expr=None, side=None):
        expr = expr or self.args.module
        if not expr:
            raise InputError("--module EXPR is required for this subcommand")
        side = side or self.args.side
        if side == "right":
            return evaluate(expr, self.ctx.S, "right")
        return evaluate(expr, self.A)

    def complex(self):
        if not self.args.complex:
            raise InputError("--complex FILE is required for this subcommand")
        algebra = self.ctx.S if self.args.side == "right" else self.A
        side = "right" if self.args.side == "right" else "left"
        return parse_complex(_read(self.args.complex), lambda s: evaluate(s, algebra, side))


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise InputError("cannot read %s: %s" % (path, e.strerror)) from None


# --- subcommands ---------------------------------------------------------------

def cmd_resolve(s, rep):
    m = s.module(side="left") if s.args.side != "right" else s.module()
    res = projective_resolution(m, cap=s.args.cap_res or 16)
    rep.add("module", m)
    rep.add("length", len(res.terms) - 1)
    rep.add("complete", res.complete)
    for k, t in enumerate(res.terms):
        rep.add("term.%d" % k, t)


def cmd_ext(s, rep):
    ctx = s.ctx
    m = s.module()
    n = ctx.cd(m)
    rep.add("module", m)
    rep.add("cd", n)
    for i in range(0, (n if n is not None else 0) + 1):
        rep.add("ext.%d" % i, ctx.derived_module(m, i))


def cmd_dual(s, rep):
    ctx = s.ctx
    m = s.module()
    rep.add("module", m)
    rep.add("dual", ctx.functor_for(m)(m))


def cmd_eta(s, rep):
    ctx = s.ctx
    m = s.module()
    u = th._eta(s.D, m)
    rep.add("module", m)
    rep.add("double_dual", u.target)
    rep.add("rank", u.rank())
    iso = u.source.dim == u.target.dim and (u.source.dim == 0 or u.is_iso())
    rep.add("iso", iso)


def cmd_reflexive(s, rep):
    ctx = s.ctx
    m = s.module()
    rep.add("module", m)
    ok = ctx.is_reflexive(m)
    (rep.add if ok else rep.fail)("reflexive", ok)


def cmd_dreflexive(s, rep):
    ctx = s.ctx
    D = s.D
    if s.args.complex:
        x = s.complex()
        rep.add("complex_degrees", "%d..%d" % (x.lo, x.hi))
    else:
        m = s.module()
        rep.add("module", m)
        x = D.stalk(m)
    ok = D.is_d_reflexive(x)
    (rep.add if ok else rep.fail)("dreflexive", ok)
    g = D.g_complex(x)
    for k in g.degrees():
        rep.add("g.term.%d" % k, g.term(k))
    for k in g.nonzero_cohomology_degrees():
        rep.add("g.cohomology.%d" % k, g.cohomology(k))
    rep.note("G complex: " + " -> ".join("%s@%d" % (describe(g.term(k)), k) for k in g.degrees()))


def _grid(cells, ps, qs):
    width = max([len(describe(m)) for m in cells.values()] + [1])
    lines = []
    for q in qs:
        row = []
        for p in ps:
            m = cells.get((p, q))
            row.append((describe(m) if m is not None and m.dim else "0").ljust(width))
        lines.append("q=%3d  " % q + "  ".join(row))
    return lines


def cmd_spectral(s, rep):
    ctx = s.ctx
    a = s.module()
    sd = second_spectral(ctx, a, cap=s.args.cap_res)
    cells = sd.cells()
    ps = sorted({p for p, _ in cells})
    qs = sorted({q for _, q in cells}, reverse=True)
    rep.add("module", a)
    rep.add("stable_page", sd.stable)
    for r in sorted(sd.pages):
        for (p, q) in cells:
            m = sd.pages[r][(p, q)]
            if m.dim:
                rep.add("E%d.%d.%d" % (r, p, q), m)
        for (p, q) in cells:
            f = sd.diffs[r][(p, q)]
            if f.rank():
                rep.add("d%d.%d.%d.rank" % (r, p, q), f.rank())
        rep.note("E_%d page (rows q, columns p = %s):" % (r, ",".join(map(str, ps))))
        for line in _grid(sd.pages[r], ps, qs):
            rep.note("  " + line)
    for (p, q) in cells:
        m = sd.einf[(p, q)]
        if m.dim:
            rep.add("Einf.%d.%d" % (p, q), m)
    rep.note("E_infinity:")
    for line in _grid(sd.einf, ps, qs):
        rep.note("  " + line)
    for s_deg, (tot, ab) in sorted(sd.filtration_accounting().items()):
        if tot or ab:
            rep.add("abutment.%d" % s_deg, "%d/%d" % (tot, ab))
            if tot != ab:
                rep.fail("accounting.%d" % s_deg, False)
            for p in ps:
                f = sd.filtration_factor(s_deg, p)
                if f.dim:
                    rep.add("filtration.%d.%d" % (s_deg, p), f)
    bad = check_e2_oracle(sd)
    (rep.add if not bad else rep.fail)("e2_oracle", "ok" if not bad else bad)


def cmd_verify(s, rep):
    name = s.args.target
    if name not in THEOREMS:
        raise InputError("unknown theorem %r (choose from %s)" % (name, ", ".join(THEOREMS)))
    s.ctx
    D = s.D
    rep.add("theorem", name)
    try:
        _VERIFY[name](s, D, rep)
    except HypothesisViolated as e:
        rep.fail("hypothesis", "violated")
        rep.add("reason", str(e))
        for k, w in enumerate(e.witnesses):
            if isinstance(w, tuple) and len(w) == 4:
                rep.add("witness.%d" % k, "%s(i=%d,j=%d)=%s" % (w[0], w[1], w[2], describe(w[3])))
            else:
                rep.add("witness.%d" % k, w)
        if getattr(e, "round_trip", None) is not None:
            rep.add("round_trip", e.round_trip)


def _v_driflessivi(s, D, rep):
    m = s.module()
    r = th.verify_driflessivi(D, m)
    rep.add("module", m)
    rep.add("d_reflexive", r["d_reflexive"])
    rep.add("criterion", r["criterion"])
    (rep.add if r["agree"] else rep.fail)("agree", r["agree"])


def _v_bb(s, D, rep):
    m = s.module()
    r = th.bb_check(D, m)
    rep.add("module", m)
    for k in ("d_reflexive", "cond1", "cond2", "cond3"):
        rep.add(k, r[k])
    (rep.add if r["agree"] else rep.fail)("agree", r["agree"])


def _v_classes(s, D, rep):
    exprs = [e.strip() for e in s.args.module.split(";")] if s.args.module else []
    mods = [s.module(e) for e in exprs]
    for k, entry in enumerate(th.cotilting_classes(D, mods)):
        rep.add("module.%d" % k, entry["module"])
        rep.add("class.%d" % k, entry["class"])
        if "round_trip" in entry:
            (rep.add if entry["round_trip"] else rep.fail)("round_trip.%d" % k,
                                                          entry["round_trip"])


def _v_adjoint(s, D, rep):
    a = s.module()
    if not s.args.other:
        raise InputError("adjoint needs --other EXPR (a module on the other side)")
    other_side = "left" if s.args.side == "right" else "right"
    b = s.module(s.args.other, side=other_side)
    r = th.verify_adjoint_r1(D, a, b)
    rep.add("module", a)
    rep.add("other", b)
    rep.add("first", r["first"])
    rep.add("second", r["second"])
    (rep.add if r["holds"] else rep.fail)("holds", r["holds"])


def _v_last(s, D, rep):
    m = s.module()
    r = th.thm_last_check(D, m)
    rep.add("module", m)
    for k in ("d_reflexive", "cond1", "cond2", "cond3", "higher_vanish"):
        rep.add(k, r[k])
    rep.add("sequence", "0 -> %s -> %s -> %s -> 0" % r["sequence"])
    (rep.add if r["agree"] else rep.fail)("agree", r["agree"])


def _v_lastt(s, D, rep):
    m = s.module()
    rep.add("module", m)
    f = th.thm_lastt_filtration(D, m, converse=True)
    for k, fac in enumerate(f.bottom_up()):
        rep.add("factor.%d" % k, fac)
    (rep.add if f.ok else rep.fail)("factors_iso", f.ok)
    (rep.add if f.converse_agrees else rep.fail)("converse", f.converse_agrees)


def _v_n2(s, D, rep):
    m = s.module()
    r = th.n2_sequences(D, m)
    rep.add("module", m)
    rep.add("first", " -> ".join(describe(x) for x in r["first"]))
    (rep.add if r["first_exact"] else rep.fail)("first_exact", r["first_exact"])
    rep.add("second", " -> ".join(describe(x) for x in r["second"]))
    (rep.add if r["second_exact"] else rep.fail)("second_exact", r["second_exact"])


def _v_lemma(s, D, rep):
    r = th.lemma_lastt_check(D, s.complex())
    rep.add("applicable", r["applicable"])
    if r["applicable"]:
        rep.add("rho", ",".join("%d:%d" % kv for kv in sorted(r["rho"].items())))
        rep.add("cohomologies_d_reflexive", r["cohomologies_d_reflexive"])
        rep.add("condition", r["condition"])
        (rep.add if r["agree"] else rep.fail)("agree", r["agree"])


def _v_atmostone(s, D, rep):
    lhs, rhs = th.cohomology_criterion(D, s.complex())
    rep.add("d_reflexive", lhs)
    rep.add("cohomologies_d_reflexive", rhs)
    (rep.add if lhs == rhs else rep.fail)("agree", lhs == rhs)


_VERIFY = {"driflessivi": _v_driflessivi, "bb": _v_bb, "classes": _v_classes,
           "adjoint": _v_adjoint, "last": _v_last, "lastt": _v_lastt, "n2": _v_n2,
           "lemma": _v_lemma, "atmostone": _v_atmostone}


def cmd_worked_example(ident):
    """Run one registry record (or all of them for 'all'); returns a Report."""
    ids = example_ids() if ident == "all" else [ident]
    rep = Report("paper-example")
    for i in ids:
        res = run_example(i)
        for k, ch in enumerate(res.checks):
            key = "%s.%02d" % (i, k)
            rep.add(key + ".check", ch.name)
            rep.add(key + ".expected", ch.expected)
            rep.add(key + ".computed", ch.computed)
            (rep.add if ch.ok else rep.fail)(key + ".result", "pass" if ch.ok else "FAIL")
        (rep.add if res.passed else rep.fail)(i, "PASS" if res.passed else "FAIL")
    return rep


SUBCOMMANDS = {"resolve": cmd_resolve, "ext": cmd_ext, "dual": cmd_dual, "eta": cmd_eta,
               "reflexive": cmd_reflexive, "dreflexive": cmd_dreflexive,
               "spectral": cmd_spectral, "verify": cmd_verify}


def build_parser():
    p = argparse.ArgumentParser(prog="cotilt", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", choices=sorted(SUBCOMMANDS) + ["paper-example"])
    p.add_argument("target", nargs="?",
                   help="theorem name for verify, example id (or 'all') for paper-example")
    p.add_argument("--algebra", metavar="FILE")
    p.add_argument("--example", metavar="ID", help="take algebra and U from a registry record")
    p.add_argument("--module", metavar="EXPR")
    p.add_argument("--other", metavar="EXPR", help="module on the other side (verify adjoint)")
    p.add_argument("--U", metavar="EXPR")
    p.add_argument("--labels", metavar="L1,L2,...", help="vertex labels for End(U)")
    p.add_argument("--side", choices=("left", "right"), default="left",
                   help="evaluate --module over Lambda (left) or End(U) (right)")
    p.add_argument("--complex", metavar="FILE")
    p.add_argument("--format", choices=("human", "machine"), default="human")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap-res", type=int, default=None)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    if args.cap_res is not None and args.cap_res <= 0:
        print("error: --cap-res must be positive", file=sys.stderr)
        return 2
    set_iso_seed(args.seed)
    try:
        if args.subcommand == "paper-example":
            if not args.target:
                raise InputError("paper-example needs an id (one of %s, or all)" %
                                 ", ".join(example_ids()))
            rep = cmd_worked_example(args.target)
        else:
            rep = Report(args.subcommand)
            SUBCOMMANDS[args.subcommand](Session(args), rep)
    except InputError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except CotiltError as e:
        print("error: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return 1
    out.write(rep.render(args.format))
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
