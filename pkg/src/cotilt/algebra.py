"""Finite-dimensional algebras: quiver presentations and structure constants.

Conventions
-----------
In algebra files a path ``a*b`` means "first a, then b" (diagrammatic order).
Inside :class:`BasisAlgebra` the product is written in operator order, so for
paths ``p . q`` is "first q, then p".  With this choice a left module is the
same thing as a covariant representation of the quiver: the arrow ``a: i -> j``
acts as a linear map from the vertex-i space to the vertex-j space.

Every basis element ``x`` is homogeneous for the vertex idempotents:
``block[x] = (t, s)`` records that ``e_t x e_s = x``.  For a path from s to t
this is ``(t, s)``.
"""
from __future__ import annotations

import itertools
import re

import sympy

from .errors import CharNotZero, InfiniteDimensional, InputError, NonAdmissible
from .linalg import QQ, Echelon, Field, Matrix, fmt, kernel_of_rows

DEFAULT_PATH_BOUND = 64


class Presentation:
    """A quiver with relations.

    ``relations`` is a list of linear combinations, each a list of
    ``(coefficient, path)`` pairs where a path is a tuple of arrow names in
    diagrammatic order.
    """

    def __init__(self, vertices, arrows, relations=(), field=QQ):
        self.vertices = list(vertices)
        self.arrows = [tuple(a) for a in arrows]
        self.relations = [[(field(c), tuple(p)) for c, p in rel] for rel in relations]
        self.field = field
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise InputError("arrow names must be unique")
        self._arrow = {a[0]: a for a in self.arrows}
        for name, s, t in self.arrows:
            if s not in self.vertices or t not in self.vertices:
                raise InputError("arrow %s has an endpoint outside the vertex set" % name)
        for rel in self.relations:
            self._check_relation(rel)

    def source(self, path):
        return self._arrow[path[0]][1]

    def target(self, path):
        return self._arrow[path[-1]][2]

    def is_path(self, path):
        if not path:
            return False
        for a in path:
            if a not in self._arrow:
                raise InputError("unknown arrow %r" % a)
        return all(self._arrow[x][2] == self._arrow[y][1] for x, y in zip(path, path[1:]))

    def _check_relation(self, rel):
        ends = set()
        for c, p in rel:
            if len(p) < 2:
                raise NonAdmissible("relation term %s has length < 2" % "*".join(p))
            if not self.is_path(p):
                raise NonAdmissible("%s is not a composable path" % "*".join(p))
            ends.add((self.source(p), self.target(p)))
        if len(ends) > 1:
            raise NonAdmissible("relation mixes paths with different endpoints")

    def __eq__(self, other):
        return (isinstance(other, Presentation) and self.vertices == other.vertices
                and self.arrows == other.arrows and self.field == other.field
                and self.relations == other.relations)

    def to_text(self):
        lines = ["[algebra]", "field = %r" % self.field]
        v = self.vertices
        if v == list(range(1, len(v) + 1)):
            lines.append("vertices = %d" % len(v))
        else:
            lines.append("vertices = %d..%d" % (v[0], v[-1]))
        for name, s, t in self.arrows:
            lines.append("arrow %s: %s -> %s" % (name, s, t))
        for rel in self.relations:
            parts = []
            for c, p in rel:
                path = "*".join(p)
                if c == 1:
                    term = path
                elif c == -1:
                    term = "-" + path
                else:
                    term = "%s*%s" % (fmt(c), path)
                parts.append(term)
            text = parts[0]
            for t in parts[1:]:
                text += " - " + t[1:] if t.startswith("-") else " + " + t
            lines.append("relation " + text)
        return "\n".join(lines) + "\n"


_ARROW_RE = re.compile(r"^arrow\s+([A-Za-z_][\w']*)\s*:\s*(-?\d+)\s*->\s*(-?\d+)\s*$")
_NUM_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_field(text):
    text = text.strip()
    if text == "Q":
        return QQ
    m = re.fullmatch(r"Fp\((\d+)\)", text)
    if m:
        p = int(m.group(1))
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise InputError("Fp needs a prime, got %d" % p)
        return Field(p)
    raise InputError("unknown field %r" % text)


def _parse_relation(text, field):
    text = text.replace(" ", "")
    if not text:
        raise InputError("empty relation")
    terms = re.findall(r"[+-]?[^+-]+", text)
    out = []
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("+-")
        pieces = term.split("*")
        coef = field(1)
        if _NUM_RE.match(pieces[0]):
            coef = field(pieces[0])
            pieces = pieces[1:]
        if not pieces or not all(pieces):
            raise InputError("malformed relation term %r" % term)
        out.append((coef * sign, tuple(pieces)))
    return out


def parse_algebra(text):
    """Parse the line-oriented algebra format into a :class:`Presentation`."""
    field = QQ
    vertices = None
    arrows, relations = [], []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[algebra]":
            seen_header = True
            continue
        try:
            if line.startswith("field"):
                field = parse_field(line.split("=", 1)[1])
            elif line.startswith("vertices"):
                val = line.split("=", 1)[1].strip()
                m = re.fullmatch(r"(-?\d+)\s*\.\.\s*(-?\d+)", val)
                if m:
                    vertices = list(range(int(m.group(1)), int(m.group(2)) + 1))
                else:
                    vertices = list(range(1, int(val) + 1))
            elif line.startswith("arrow"):
                m = _ARROW_RE.match(line)
                if not m:
                    raise InputError("malformed arrow line")
                arrows.append((m.group(1), int(m.group(2)), int(m.group(3))))
            elif line.startswith("relation"):
                relations.append(line[len("relation"):])
            else:
                raise InputError("unrecognised line")
        except (InputError, ValueError, IndexError) as exc:
            raise InputError("algebra file line %d: %s" % (lineno, exc)) from None
    if not seen_header:
        raise InputError("algebra file lacks the [algebra] header")
    if vertices is None:
        raise InputError("algebra file lacks a vertices line")
    rels = [_parse_relation(r, field) for r in relations]
    return Presentation(vertices, arrows, rels, field)


class PathBasis:
    """Paths surviving the relations, with endpoints and lengths."""

    def __init__(self, paths, sources, targets):
        self.paths = paths
        self.sources = sources
        self.targets = targets

    def __len__(self):
        return len(self.paths)

    def labels(self, vertices):
        out = []
        for p, s in zip(self.paths, self.sources):
            out.append("*".join(p) if p else "e%s" % s)
        return out


def _free_paths(pres, max_len, limit=200000):
    """All composable paths of length 1..max_len, grouped by length."""
    by_len = {1: [(a[0],) for a in pres.arrows]}
    out_arrows = {}
    for name, s, t in pres.arrows:
        out_arrows.setdefault(s, []).append(name)
    total = len(by_len[1])
    for ell in range(2, max_len + 1):
        nxt = []
        for p in by_len[ell - 1]:
            for a in out_arrows.get(pres.target(p), []):
                nxt.append(p + (a,))
        total += len(nxt)
        if total > limit:
            raise InfiniteDimensional("path enumeration exceeded %d paths" % limit)
        by_len[ell] = nxt
    return by_len


def _truncated_ideal(pres, L):
    """Echelon of the ideal modulo paths longer than L, plus the column index."""
    by_len = _free_paths(pres, L)
    cols = []
    for ell in range(L, 0, -1):
        cols.extend(sorted(by_len[ell], reverse=True))
    index = {p: i for i, p in enumerate(cols)}
    e = Echelon(len(cols), pres.field)
    for rel in pres.relations:
        rlen = min(len(p) for _, p in rel)
        s, t = pres.source(rel[0][1]), pres.target(rel[0][1])
        lefts = [()] + [p for ell in range(1, L - rlen + 1) for p in by_len[ell]
                        if pres.target(p) == s]
        for u in lefts:
            room = L - rlen - len(u)
            rights = [()] + [p for ell in range(1, room + 1) for p in by_len[ell]
                             if pres.source(p) == t]
            for v in rights:
                vec = {}
                for c, p in rel:
                    q = u + p + v
                    if len(q) <= L:
                        vec[index[q]] = vec.get(index[q], 0) + c
                e.add(vec)
    return e, cols, index, by_len


def _presentation_ideal(pres, bound):
    start = max([2] + [max(len(p) for _, p in rel) for rel in pres.relations])
    for L in range(start, bound + 1):
        e, cols, index, by_len = _truncated_ideal(pres, L)
        if all(e.contains({index[p]: pres.field.one}) for p in by_len[L]):
            return L, e, cols, index
        if not by_len[L]:
            return L, e, cols, index
    raise InfiniteDimensional("relations do not bound path length by %d" % bound)


def path_basis(pres, bound=DEFAULT_PATH_BOUND):
    """Basis of kQ/I ordered by length, then lexicographically by arrow names."""
    _, e, cols, _ = _presentation_ideal(pres, bound)
    keep = sorted((cols[c] for c in e.complement()), key=lambda p: (len(p), p))
    paths = [() for _ in pres.vertices] + keep
    sources = list(pres.vertices) + [pres.source(p) for p in keep]
    targets = list(pres.vertices) + [pres.target(p) for p in keep]
    return PathBasis(paths, sources, targets)


class BasisAlgebra:
    """Associative unital algebra given by structure constants.

    ``mult[i][j]`` is a sparse dict giving basis_i . basis_j.  ``idem`` lists the
    basis indices of a complete family of orthogonal idempotents and
    ``block[i] = (t, s)`` says e_t . basis_i . e_s = basis_i.
    """

    def __init__(self, field, labels, mult, idem, block, vertices=None, gens=None,
                 presentation=None, lengths=None, check=True):
        self.field = field
        self.dim = len(labels)
        self.labels = list(labels)
        self.mult = mult
        self.idem = list(idem)
        self.block = list(block)
        self.vertices = list(vertices) if vertices is not None else list(range(1, len(idem) + 1))
        self.presentation = presentation
        self.lengths = lengths
        self._rad = None
        if check:
            self.check_associative()
            self.check_idempotents()
        self.gens = list(gens) if gens is not None else self._find_generators()

    # --- construction -------------------------------------------------
    @classmethod
    def from_presentation(cls, pres, bound=DEFAULT_PATH_BOUND):
        L, e, cols, index = _presentation_ideal(pres, bound)
        pb = path_basis(pres, bound)
        n = len(pres.vertices)
        vidx = {v: i for i, v in enumerate(pres.vertices)}
        pos = {p: i for i, p in enumerate(pb.paths) if p}
        F = pres.field

        def reduce_path(q):
            if len(q) >= L:
                return {}
            r = e.reduce({index[q]: F.one})
            return {pos[cols[c]]: x for c, x in r.items()}

        dim = len(pb)
        mult = [[{} for _ in range(dim)] for _ in range(dim)]
        for i in range(dim):
            for j in range(dim):
                pi, pj = pb.paths[i], pb.paths[j]
                # operator order: basis_i . basis_j = "basis_j then basis_i"
                if pb.targets[j] != pb.sources[i]:
                    continue
                if not pi and not pj:
                    mult[i][j] = {i: F.one}
                elif not pi:
                    mult[i][j] = {j: F.one}
                elif not pj:
                    mult[i][j] = {i: F.one}
                else:
                    mult[i][j] = reduce_path(pj + pi)
        block = [(vidx[t], vidx[s]) for s, t in zip(pb.sources, pb.targets)]
        arrow_idx = [pos[(a[0],)] for a in pres.arrows if (a[0],) in pos]
        labels = pb.labels(pres.vertices)
        return cls(F, labels, mult, list(range(n)), block, pres.vertices, arrow_idx,
                   pres, [len(p) for p in pb.paths])

    @classmethod
    def from_table(cls, field, labels, table, idem=(0,), block=None, vertices=None):
        """Build from a dense table ``table[i][j] = list of coefficients``."""
        dim = len(labels)
        mult = [[{k: field(c) for k, c in enumerate(table[i][j]) if c} for j in range(dim)]
                for i in range(dim)]
        if block is None:
            block = [(0, 0)] * dim
        return cls(field, labels, mult, idem, block, vertices)

    # --- basic arithmetic ---------------------------------------------
    def mul(self, x, y):
        """Product of two sparse vectors."""
        out = {}
        for i, a in x.items():
            row = self.mult[i]
            for j, b in y.items():
                ab = a * b
                for k, c in row[j].items():
                    out[k] = out.get(k, 0) + ab * c
        return {k: v for k, v in out.items() if v}

    def basis_vec(self, i):
        return {i: self.field.one}

    def one(self):
        return {i: self.field.one for i in self.idem}

    @property
    def n_vertices(self):
        return len(self.idem)

    def vertex_index(self, label):
        try:
            return self.vertices.index(label)
        except ValueError:
            raise InputError("vertex %r out of range" % (label,)) from None

    def check_associative(self):
        dim = self.dim
        for i, j, k in itertools.product(range(dim), repeat=3):
            bi, bj, bk = self.block[i], self.block[j], self.block[k]
            if bi[1] != bj[0] or bj[1] != bk[0]:
                continue
            lhs = self.mul(self.mult[i][j], {k: self.field.one})
            rhs = self.mul({i: self.field.one}, self.mult[j][k])
            if lhs != rhs:
                raise ValueError("structure constants not associative at %s" %
                                 ((self.labels[i], self.labels[j], self.labels[k]),))

    def check_idempotents(self):
        one = self.field.one
        for a, i in enumerate(self.idem):
            for b, j in enumerate(self.idem):
                expect = {i: one} if a == b else {}
                if self.mult[i][j] != expect:
                    raise ValueError("idempotents are not orthogonal")
        u = self.one()
        for i in range(self.dim):
            if self.mul(u, {i: one}) != {i: one} or self.mul({i: one}, u) != {i: one}:
                raise ValueError("idempotents do not sum to the identity")
            t, s = self.block[i]
            if self.mul({self.idem[t]: one}, {i: one}) != {i: one} or \
                    self.mul({i: one}, {self.idem[s]: one}) != {i: one}:
                raise ValueError("basis element %s is not block-homogeneous" % self.labels[i])

    def _find_generators(self):
        """Greedy generating set (beyond the idempotents), in basis order."""
        span = Echelon(self.dim, self.field)
        gens = []
        for i in self.idem:
            span.add({i: self.field.one})
        for i in range(self.dim):
            if span.contains({i: self.field.one}):
                continue
            gens.append(i)
            span = self._closure(gens)
        return gens

    def _closure(self, gens):
        span = Echelon(self.dim, self.field)
        frontier = [{i: self.field.one} for i in self.idem] + [{g: self.field.one} for g in gens]
        for v in frontier:
            span.add(v)
        while frontier:
            new = []
            for v in frontier:
                for g in gens:
                    w = self.mul({g: self.field.one}, v)
                    if span.add(w):
                        new.append(w)
            frontier = new
        return span

    def opposite(self):
        mult = [[self.mult[j][i] for j in range(self.dim)] for i in range(self.dim)]
        block = [(s, t) for t, s in self.block]
        return BasisAlgebra(self.field, [l + "^op" for l in self.labels], mult, self.idem,
                            block, self.vertices, self.gens, check=False)

    def quotient(self, ideal):
        """Quotient by a two-sided ideal given as an :class:`Echelon` (no idempotent data)."""
        keep = ideal.complement()
        pos = {c: i for i, c in enumerate(keep)}

        def red(v):
            r = ideal.reduce(v)
            return {pos[c]: x for c, x in r.items()}

        mult = [[red(self.mult[i][j]) for j in keep] for i in keep]
        return _Quotient(self.field, [self.labels[c] for c in keep], mult, red, self)

    # --- radical and splitting ----------------------------------------
    def left_mult_matrix(self, x):
        m = Matrix.zeros(self.dim, self.dim, self.field)
        for j in range(self.dim):
            for k, c in self.mul(x, {j: self.field.one}).items():
                m.rows[k][j] = c
        return m

    def radical(self):
        """Jacobson radical as an :class:`Echelon` subspace."""
        if self._rad is not None:
            return self._rad
        one = self.field.one
        if self.lengths is not None:
            self._rad = Echelon.span(self.dim, [{i: one} for i in range(self.dim)
                                               if self.lengths[i] > 0], self.field)
            return self._rad
        if self.field.char:
            raise CharNotZero("radical of a structure-constant algebra needs characteristic 0")
        # trace form of the regular representation
        traces = []
        for k in range(self.dim):
            traces.append(sum((self.mult[k][j].get(j, 0) for j in range(self.dim)),
                              self.field.zero))
        rows = []
        for i in range(self.dim):
            row = {}
            for j in range(self.dim):
                t = sum((c * traces[k] for k, c in self.mult[i][j].items()), self.field.zero)
                if t:
                    row[j] = t
            rows.append(row)
        ker = kernel_of_rows(rows, self.dim, self.field)
        self._rad = Echelon.span(self.dim, ker, self.field)
        return self._rad

    def radical_basis(self):
        e = self.radical()
        return Matrix.from_columns(e.basis(), self.dim, self.field)

    def radical_power(self, k):
        """rad^k as an Echelon subspace (k >= 0)."""
        one = self.field.one
        cur = Echelon.span(self.dim, [{i: one} for i in range(self.dim)], self.field)
        rad = self.radical().basis()
        for _ in range(k):
            nxt = Echelon(self.dim, self.field)
            for v in cur.basis():
                for r in rad:
                    nxt.add(self.mul(v, r))
            cur = nxt
        return cur

    def is_split(self):
        return check_split(self)

    def __repr__(self):
        return "BasisAlgebra(dim=%d, vertices=%d)" % (self.dim, len(self.idem))


class _Quotient:
    """Plain semisimple-quotient carrier used only by :func:`check_split`."""

    def __init__(self, field, labels, mult, red, parent):
        self.field, self.labels, self.mult = field, labels, mult
        self.dim = len(labels)
        self.red = red
        self.parent = parent

    def mul(self, x, y):
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.mult[i][j].items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in out.items() if v}


def _add(x, y, c=1):
    out = dict(x)
    for k, v in y.items():
        w = out.get(k, 0) + c * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _minpoly(alg, x, unit):
    """Minimal polynomial of ``x`` in the corner with identity ``unit``."""
    powers = [unit]
    e = Echelon(alg.dim, alg.field)
    e.add(unit)
    while True:
        nxt = alg.mul(x, powers[-1])
        if e.contains(nxt):
            # solve nxt = sum c_i powers_i
            cols = [dict(p) for p in powers]
            rows = [dict() for _ in range(alg.dim)]
            for j, c in enumerate(cols + [nxt]):
                for i, v in c.items():
                    rows[i][j] = v
            ker = kernel_of_rows(rows, len(powers) + 1, alg.field)
            rel = ker[0]
            lead = rel[len(powers)]
            x_sym = sympy.Symbol("x")
            coeffs = [sympy.Rational(int(rel.get(i, 0).numerator), int(rel.get(i, 0).denominator))
                      for i in range(len(powers) + 1)]
            poly = sum(c * x_sym ** i for i, c in enumerate(coeffs))
            return powers, sympy.Poly(poly, x_sym), lead
        e.add(nxt)
        powers.append(nxt)


def _eval_poly(alg, poly, x, unit):
    out = {}
    power = unit
    for i, c in enumerate(reversed(poly.all_coeffs())):
        if i:
            power = alg.mul(x, power)
        if c:
            cq = alg.field(sympy.Rational(c).p) / alg.field(sympy.Rational(c).q)
            out = _add(out, power, cq)
    return out


def _split_corner(alg, f, depth=0):
    one_corner = Echelon(alg.dim, alg.field)
    for i in range(alg.dim):
        one_corner.add(alg.mul(alg.mul(f, {i: alg.field.one}), f))
    if one_corner.dim <= 1:
        return True
    basis = one_corner.basis()
    cands = list(basis) + [_add(a, b) for a, b in itertools.combinations(basis, 2)] \
        + [_add(a, b, -1) for a, b in itertools.combinations(basis, 2)]
    x_sym = sympy.Symbol("x")
    for x in cands:
        _, m, _ = _minpoly(alg, x, f)
        if m.degree() < 2:
            continue
        _, factors = sympy.factor_list(m.as_expr(), x_sym)
        if len(factors) < 2:
            continue
        g = sympy.Poly(factors[0][0] ** factors[0][1], x_sym)
        h = sympy.quo(m, g)
        s, t, _ = sympy.gcdex(g, h)
        eps = _eval_poly(alg, sympy.Poly(s * g, x_sym), x, f)
        return _split_corner(alg, eps, depth + 1) and _split_corner(alg, _add(f, eps, -1),
                                                                    depth + 1)
    return False


def check_split(alg):
    """True iff alg / rad(alg) is a product of matrix algebras over the ground field."""
    if alg.lengths is not None:
        return True
    if alg.field.char:
        raise CharNotZero("splitting check needs characteristic 0")
    q = alg.quotient(alg.radical())
    for i in alg.idem:
        f = q.red({i: alg.field.one})
        if f and not _split_corner(q, f):
            return False
    return True


def algebra_from_text(text, bound=DEFAULT_PATH_BOUND):
    return BasisAlgebra.from_presentation(parse_algebra(text), bound)
