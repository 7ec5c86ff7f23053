"""Worked examples with their expected outputs, runnable as golden tests.

Each record embeds an algebra, a module U and a check function.  Running a
record produces a list of :class:`Check` lines (expected vs computed); the
record passes when every line does.  Relations for algebras that are only
described through their projectives are reconstructions, and every record
first asserts that the projectives come out as displayed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import theorems as th
from .algebra import algebra_from_text
from .derived import BoundedComplex, Derived, parse_complex
from .duality import DualityContext
from .errors import HypothesisViolated, UnknownExample
from .expr import evaluate, evaluate_summands, parse
from .modules import (describe, hom_basis, injective, is_isomorphic, loewy_layers,
                      projective, radq, simple, socq)
from .spectral import check_e2_oracle, second_spectral


@dataclass
class Check:
    name: str
    expected: str
    computed: str
    ok: bool


@dataclass
class ExampleRecord:
    ident: str
    title: str
    algebra: str
    u: str
    labels: list = None
    runner: object = None

    def context(self):
        A = algebra_from_text(self.algebra)
        U = evaluate_summands(parse(self.u), A)
        return A, DualityContext(A, U, labels=self.labels)


@dataclass
class ExampleResult:
    ident: str
    title: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.ok]


class _Collector:
    """Accumulates checks; helpers render modules by dimension vector and factors."""

    def __init__(self):
        self.checks = []

    def equal(self, name, expected, computed):
        self.checks.append(Check(name, _fmt(expected), _fmt(computed), expected == computed))

    def iso(self, name, module, expected):
        ok = module.dim == expected.dim and (module.dim == 0 or is_isomorphic(module, expected))
        self.checks.append(Check(name, describe(expected), describe(module), ok))

    def layers(self, name, module, display):
        want = _layers_from_display(module.algebra, display)
        got = [tuple(v) for v in loewy_layers(module)]
        self.checks.append(Check(name, display, _layers_text(module.algebra, got), got == want))


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (list, tuple)):
        return "[" + ",".join(_fmt(v) for v in x) + "]"
    return str(x)


def _layers_from_display(A, display):
    """'1/2,3/4' -> one dimension vector per Loewy layer."""
    out = []
    for layer in display.split("/"):
        dv = [0] * A.n_vertices
        for v in layer.split(","):
            dv[A.vertex_index(int(v))] += 1
        out.append(tuple(dv))
    return out


def _layers_text(A, layers):
    parts = []
    for dv in layers:
        names = []
        for j, c in enumerate(dv):
            names.extend([str(A.vertices[j])] * c)
        parts.append(",".join(names))
    return "/".join(parts)


def _right(ctx, expr):
    return evaluate(expr, ctx.S, "right")


REGISTRY = {}


def register(ident, title, algebra, u, labels=None):
    def wrap(fn):
        REGISTRY[ident] = ExampleRecord(ident, title, algebra, u, labels, fn)
        return fn
    return wrap


def run_example(ident):
    rec = REGISTRY.get(ident)
    if rec is None:
        raise UnknownExample("no example with id %r (known: %s)" %
                             (ident, ", ".join(sorted(REGISTRY))))
    A, ctx = rec.context()
    col = _Collector()
    rec.runner(col, A, ctx, Derived(ctx))
    return ExampleResult(ident, rec.title, col.checks)


def example_ids():
    return list(REGISTRY)


def _g_cohomology(D, m):
    g = D.g_complex(D.stalk(m))
    return g, {k: g.cohomology(k) for k in g.nonzero_cohomology_degrees()}


# --- algebras ------------------------------------------------------------------

A4_RELATIONS = """[algebra]
field = Q
vertices = 1..4
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 3 -> 4
relation a*b
relation b*c
"""

THREE_ONE = """[algebra]
field = Q
vertices = 1..5
arrow a: 1 -> 2
arrow b: 1 -> 3
arrow c: 2 -> 4
arrow d: 3 -> 4
arrow e: 4 -> 5
arrow f: 5 -> 3
relation a*c - b*d
relation c*e
relation e*f
relation f*d
"""

THREE_ONE_COMPLEX = """[complex]
degrees = -4..0
term -4 = P(4)
term -3 = P(3)
term -2 = P(5)
term -1 = P(3)
term 0 = P(1)
"""

THREE_TWO = """[algebra]
field = Q
vertices = 1..5
arrow a: 1 -> 2
arrow b: 2 -> 1
arrow c: 2 -> 3
arrow d: 3 -> 4
arrow e: 4 -> 5
arrow f: 5 -> 3
relation a*c
relation b*a
relation c*d*e
relation e*f
relation f*d
"""

DIAMOND = """[algebra]
field = Q
vertices = 1..4
arrow a: 1 -> 2
arrow b: 1 -> 3
arrow c: 2 -> 4
arrow d: 3 -> 4
relation a*c
relation b*d
"""

A5_LINE = """[algebra]
field = Q
vertices = 0..4
arrow a: 0 -> 1
arrow b: 1 -> 2
arrow c: 2 -> 3
arrow d: 3 -> 4
relation a*b*c
relation b*c*d
"""

A8_LINE = ("[algebra]\nfield = Q\nvertices = 1..8\n"
           + "".join("arrow a%d: %d -> %d\n" % (i, i, i + 1) for i in range(1, 8))
           + "relation a3*a4\n")


# --- records -------------------------------------------------------------------

@register("ex-2-2a", "A4 with ba=cb=0 and W = S(1)+S(3)", A4_RELATIONS, "S(1)+S(3)")
def _ex_2_2a(c, A, ctx, D):
    for j, disp in enumerate(["1/2", "2/3", "3/4", "4"]):
        c.layers("projective P(%d)" % (j + 1), projective(A, j), disp)
    c.equal("dim End(W)", 2, ctx.S.dim)
    c.equal("End(W) semisimple", True, ctx.S.radical().dim == 0)
    s1 = simple(A, 0)
    c.equal("S(1) reflexive", True, ctx.is_reflexive(s1))
    c.equal("S(1) D-reflexive", False, D.is_d_reflexive_object(s1))
    g, coh = _g_cohomology(D, s1)
    c.equal("G(S(1)) cohomology degrees", [-2, 0], sorted(coh))
    if sorted(coh) == [-2, 0]:
        c.iso("G(S(1)) cohomology at -2", coh[-2], simple(A, 2))
        c.iso("G(S(1)) cohomology at 0", coh[0], simple(A, 0))
    c.equal("G(S(1)) term dims", [0, 1, 0, 1], [g.term(k).dim for k in range(-3, 1)])
    c.equal("W partial cotilting", False, ctx.is_partial_cotilting())


@register("ex-2-2b", "A4 with ba=cb=0 and the regular bimodule", A4_RELATIONS, "R")
def _ex_2_2b(c, A, ctx, D):
    s2 = simple(A, 1)
    c.equal("S(2) reflexive", False, ctx.is_reflexive(s2))
    c.equal("S(2) D-reflexive", True, D.is_d_reflexive_object(s2))
    c.equal("projectives reflexive", True,
            all(ctx.is_reflexive(projective(A, j)) for j in range(4)))
    c.equal("projectives acyclic", True, ctx.projectives_acyclic("lambda"))


@register("ex-3-1", "five-vertex algebra with a D-reflexive complex of non D-reflexive terms",
          THREE_ONE, "S(5)+P(3)+P(1)", [8, 7, 6])
def _ex_3_1(c, A, ctx, D):
    for j, disp in enumerate(["1/2,3/4", "2/4", "3/4/5", "4/5", "5/3"]):
        c.layers("projective P(%d)" % (j + 1), projective(A, j), disp)
    for v, disp in ((8, "8/7"), (7, "7/6"), (6, "6")):
        c.layers("S projective P(%d)" % v, projective(ctx.S, ctx.S.vertex_index(v), "right"), disp)
    c.iso("U as S-module", ctx.US, _right(ctx, "P(8)+P(7)+P(7)+P(6)+P(6)"))
    c.equal("partial cotilting", True, ctx.is_partial_cotilting())
    c.equal("projectives acyclic", True, ctx.projectives_acyclic("lambda"))
    x = parse_complex(THREE_ONE_COMPLEX, lambda s: evaluate(s, A))
    c.equal("complex D-reflexive", True, D.is_d_reflexive(x))
    c.equal("P(5) D-reflexive", False, D.is_d_reflexive_object(projective(A, 4)))
    c.equal("P(4) D-reflexive", False, D.is_d_reflexive_object(projective(A, 3)))


def three_two_complex(A):
    """P(1) -f-> P(1) -f-> P(1) in degrees -1..1 with im f = soc P(1), ker f = rad P(1)."""
    p1 = projective(A, 0)
    f = [h for h in hom_basis(p1, p1).basis if h.rank() == 1][0]
    return BoundedComplex(A, "left", -1, [p1, p1, p1], [f, f])


@register("ex-3-2", "five-vertex algebra whose D-reflexive complex has a bad cohomology",
          THREE_TWO, "rad(P(1))+P(1)+P(5)", [8, 7, 6])
def _ex_3_2(c, A, ctx, D):
    for j, disp in enumerate(["1/2/1", "2/1,3/4", "3/4/5", "4/5", "5/3"]):
        c.layers("projective P(%d)" % (j + 1), projective(A, j), disp)
    for v, disp in ((8, "8/7"), (7, "7/8/7"), (6, "6")):
        c.layers("S projective P(%d)" % v, projective(ctx.S, ctx.S.vertex_index(v), "right"), disp)
    c.iso("U as S-module", ctx.US, _right(ctx, "P(8)+P(7)+P(6)+P(6)"))
    c.equal("partial cotilting", True, ctx.is_partial_cotilting())
    x = three_two_complex(A)
    c.equal("complex D-reflexive", True, D.is_d_reflexive(x))
    c.equal("complex cohomology degrees", [-1, 0, 1], x.nonzero_cohomology_degrees())
    c.iso("middle cohomology", x.cohomology(0), simple(A, 1))
    s2 = simple(A, 1)
    c.equal("S(2) D-reflexive", False, D.is_d_reflexive_object(s2))
    g, coh = _g_cohomology(D, s2)
    c.equal("G(S(2)) term dims", [0, 0, 2, 2, 4, 4, 5, 2],
            [g.term(k).dim for k in range(-7, 1)])
    c.equal("G(S(2)) cohomology degrees", [-3, 0], sorted(coh))


@register("ex-5-1", "diamond algebra, second spectral sequence of (2,3/4)+1", DIAMOND, "R")
def _ex_5_1(c, A, ctx, D):
    for j, disp in enumerate(["1/2,3", "2/4", "3/4", "4"]):
        c.layers("projective P(%d)" % (j + 1), projective(A, j), disp)
    a = evaluate("I(4)+S(1)", A)
    c.equal("A D-reflexive", True, D.is_d_reflexive_object(a))
    sd = second_spectral(ctx, a)
    e = lambda s: evaluate(s, A)
    e2 = {(0, 0): e("P(1)+P(1)"), (0, -1): e("P(1)"), (1, -1): e("S(4)"),
          (2, -1): e("I(2)+I(3)"), (2, -2): e("I(2)+I(3)")}
    einf = {(0, 0): e("S(2)+S(3)"), (1, -1): e("S(4)"), (2, -2): e("S(1)")}
    for (grid, want) in (("E2", e2), ("Einf", einf)):
        for p in range(3):
            for q in range(-2, 1):
                got = sd.e2(p, q) if grid == "E2" else sd.einf.get((p, q))
                exp = want.get((p, q), e("0"))
                c.iso("%s(%d,%d)" % (grid, p, q), got if got is not None else e("0"), exp)
    c.equal("stable page", 3, sd.stable)
    c.equal("E2 matches double Ext", [], check_e2_oracle(sd))
    c.equal("filtration accounting", True,
            all(x == y for x, y in sd.filtration_accounting().values()))
    seqs = th.n2_sequences(D, a)
    c.equal("first sequence exact", True, seqs["first_exact"])
    c.equal("second sequence exact", True, seqs["second_exact"])
    for k, exp in enumerate(["P(1)", "I(2)+I(3)", "I(4)+S(1)", "I(4)"]):
        c.iso("first sequence term %d" % k, seqs["first"][k], e(exp))
    for k, exp in enumerate(["S(4)", "I(4)", "P(1)+P(1)", "I(2)+I(3)"]):
        c.iso("second sequence term %d" % k, seqs["second"][k], e(exp))


def nakayama_indecomposables(A):
    """All radical quotients of indecomposable projectives."""
    out = []
    for j in range(A.n_vertices):
        p = projective(A, j)
        for k in range(1, len(loewy_layers(p)) + 1):
            out.append(radq(p, k))
    return out


def _sample_indecomposables(A, side):
    """Radical quotients of projectives and socle quotients of injectives, up to iso."""
    out = []
    for j in range(A.n_vertices):
        for base, cut in ((projective(A, j, side), radq), (injective(A, j, side), socq)):
            for k in range(1, len(loewy_layers(base)) + 1):
                m = cut(base, k)
                if not any(n.dim == m.dim and is_isomorphic(n, m) for n in out):
                    out.append(m)
    return out


@register("ex-a5", "A5 line with an (n,1) context", A5_LINE, "P(2)+S(3)+P(1)+S(1)", [7, 8, 6, 5])
def _ex_a5(c, A, ctx, D):
    for j, disp in enumerate(["0/1/2", "1/2/3", "2/3/4", "3/4", "4"]):
        c.layers("projective P(%d)" % j, projective(A, j), disp)
    for v, disp in ((7, "7/6"), (8, "8/6"), (6, "6/5"), (5, "5")):
        c.layers("S projective P(%d)" % v, projective(ctx.S, ctx.S.vertex_index(v), "right"), disp)
    c.iso("U as S-module", ctx.US, _right(ctx, "S(7)+I(6)+P(7)+P(6)"))
    c.equal("cohomological dimensions", [2, 1], [ctx.n_phi, ctx.n_psi])
    c.equal("partial cotilting", True, ctx.is_partial_cotilting())
    x = evaluate("radq(P(1),2)", A)
    c.iso("Phi(1/2)", D.rmod(x, 0), _right(ctx, "S(5)"))
    c.iso("R1Phi(1/2)", D.rmod(x, 1), _right(ctx, "S(8)"))
    c.equal("R2Phi(1/2) dim", 0, D.rmod(x, 2).dim)
    rep = th.thm_last_check(D, x)
    c.equal("conditions of the (n,1) theorem", True, rep["conditions"])
    c.equal("theorem agrees", True, rep["agree"])
    c.iso("sequence kernel", rep["kernel"], simple(A, 2))
    c.iso("sequence image", rep["image"], simple(A, 1))
    bad = [describe(m) for m in nakayama_indecomposables(A) if not D.is_d_reflexive_object(m)]
    want = [describe(evaluate(s, A)) for s in ("P(0)", "radq(P(0),2)", "S(0)")]
    c.equal("non D-reflexive indecomposables", sorted(want), sorted(bad))
    s_side = _sample_indecomposables(ctx.S, "right")
    c.equal("sampled S-modules D-reflexive", True,
            all(D.is_d_reflexive_object(m) for m in s_side))


@register("ex-a8", "A8 line with an (n,n) context", A8_LINE,
          "P(1)+S(1)+P(3)+P(4)+P(5)+P(6)+P(7)+S(7)")
def _ex_a8(c, A, ctx, D):
    for j, disp in enumerate(["1/2/3/4", "2/3/4", "3/4", "4/5/6/7/8", "5/6/7/8", "6/7/8",
                              "7/8", "8"]):
        c.layers("projective P(%d)" % (j + 1), projective(A, j), disp)
    c.equal("cohomological dimension of Phi", 2, ctx.n_phi)
    c.equal("partial cotilting", True, ctx.is_partial_cotilting())
    inds = nakayama_indecomposables(A)
    c.equal("every indecomposable D-reflexive", True,
            all(D.is_d_reflexive_object(m) for m in inds))
    x = evaluate("radq(P(1),3)", A)
    grid_ok = all(th.double_derived(D, x, i, j).dim == 0
                  for i in range(3) for j in range(3) if i != j)
    c.equal("orthogonality for 1/2/3", True, grid_ok)
    for i in range(3):
        c.iso("R%dPsi R%dPhi(1/2/3)" % (i, i), th.double_derived(D, x, i, i), simple(A, i))
    filt = th.thm_lastt_filtration(D, x, converse=True)
    c.equal("filtration factors iso", True, filt.ok)
    for k, f in enumerate(filt.bottom_up()):
        c.iso("filtration factor %d from the bottom" % k, f, simple(A, 2 - k))
    try:
        th.thm_lastt_filtration(D, simple(A, 3))
        c.equal("simple 4 violates the hypothesis", True, False)
    except HypothesisViolated as err:
        c.equal("simple 4 violates the hypothesis", True, True)
        hit = [w for w in err.witnesses if w[0] == "Ext2(Ext1(M,U),U)"]
        c.equal("witness degrees", [(2, 1)], [(w[1], w[2]) for w in hit])
        if hit:
            c.iso("witness module", hit[0][3], simple(A, 2))
        c.iso("round trip of simple 4", err.round_trip, evaluate("radq(P(3),2)", A))
    concentrated = [r for r in (th.concentrated_round_trip(D, m) for m in inds) if r]
    c.equal("concentrated modules recovered", True,
            bool(concentrated) and all(r["iso"] for r in concentrated))
