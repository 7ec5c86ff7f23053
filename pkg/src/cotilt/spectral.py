"""Cartan-Eilenberg resolutions, the double complex Psi(Q) and its second spectral sequence.

For a module A with projective resolution P, the complex C = F(P) (F the Hom
functor on A's side) is resolved by a Cartan-Eilenberg grid Q^j_p.  Applying
the other functor B gives the double complex

    D^{p,q} = B(Q^{-q}_p)

with p >= 0 (resolution direction) and q <= 0.  The q-direction differential
is twisted by (-1)^p so the two directions anticommute.  Filtering the total
complex by columns p >= const gives a spectral sequence with

    E_2^{p,q} = R^p B R^{-q} F (A)

abutting to H^{p+q}(Tot), which is R^{p+q}(BF)(A).  Pages are computed from
explicit Z_r / B_r subspace chains inside the total complex.
"""
from __future__ import annotations

from .derived import BoundedComplex, apply_contravariant
from .errors import CapExceeded, HypothesisViolated
from .linalg import Echelon, Matrix, NoSolution, kernel_of_rows, solve
from .modules import (DEFAULT_RES_CAP, ModuleMap, Resolution, Subquotient, cokernel,
                      direct_sum, full_space, image_echelon, is_isomorphic, kernel_echelon,
                      lift_through, projective_resolution, zero_map, zero_module)


# --- horseshoe and Cartan-Eilenberg -----------------------------------------

def _term(res, k, algebra, side):
    return res.terms[k] if k < len(res.terms) else zero_module(algebra, side)


def _diff(res, k, algebra, side):
    """res.maps[k] : P_k -> P_{k-1} (or the augmentation for k = 0), zero past the end."""
    if k < len(res.maps):
        return res.maps[k]
    tgt = _term(res, k - 1, algebra, side) if k >= 1 else res.module
    return zero_map(_term(res, k, algebra, side), tgt)


class Horseshoe:
    """Resolution of the middle of 0 -> A' -> A -> A'' -> 0 with P_n = P'_n + P''_n."""

    def __init__(self, res, incs, projs):
        self.res = res
        self.incs = incs
        self.projs = projs


def horseshoe(f, g, r1, r2):
    """Glue resolutions r1 of f.source and r2 of g.target along the exact f, g."""
    A, side = f.source.algebra, f.source.side
    n = max(len(r1.terms), len(r2.terms))
    terms, maps, incs, projs = [], [], [], []
    lam_prev = None
    sigma = None
    for k in range(n):
        p1, p2 = _term(r1, k, A, side), _term(r2, k, A, side)
        tot, inc, prj = direct_sum([p1, p2], A, side)
        terms.append(tot)
        incs.append(inc)
        projs.append(prj)
        if k == 0:
            sigma = lift_through(_diff(r2, 0, A, side), g)
            aug = (f @ _diff(r1, 0, A, side)) @ prj[0] + sigma @ prj[1]
            maps.append(aug)
            continue
        d1, d2 = _diff(r1, k, A, side), _diff(r2, k, A, side)
        if k == 1:
            lam = lift_through((sigma @ d2).scale(-1), f @ _diff(r1, 0, A, side))
        else:
            lam = lift_through((lam_prev @ d2).scale(-1), _diff(r1, k - 1, A, side))
        below = terms[k - 1]
        mat = (incs[k - 1][0].matrix @ d1.matrix @ prj[0].matrix
               + incs[k - 1][0].matrix @ lam.matrix @ prj[1].matrix
               + incs[k - 1][1].matrix @ d2.matrix @ prj[1].matrix)
        maps.append(ModuleMap(tot, below, mat))
        lam_prev = lam
    res = Resolution(f.target, terms, maps, True)
    return Horseshoe(res, incs, projs)


class CEResolution:
    """Cartan-Eilenberg resolution of a bounded complex.

    ``columns[j]`` is a :class:`Resolution` of C^j whose n-th term splits as
    (B^j_n + H^j_n) + B^{j+1}_n; ``horizontal(j, n)`` is the induced map
    Q^j_n -> Q^{j+1}_n (project to B^{j+1}_n, include as the first summand).
    """

    def __init__(self, c, columns, zparts, res_b, res_h):
        self.complex = c
        self.columns = columns
        self.zparts = zparts
        self.res_b = res_b
        self.res_h = res_h

    @property
    def length(self):
        return max([len(r.terms) for r in self.columns.values()] + [0])

    def term(self, j, n):
        c = self.complex
        if j not in self.columns:
            return zero_module(c.algebra, c.side)
        return _term(self.columns[j], n, c.algebra, c.side)

    def vertical(self, j, n):
        """Q^j_n -> Q^j_{n-1} for n >= 1."""
        c = self.complex
        return _diff(self.columns[j], n, c.algebra, c.side)

    def horizontal(self, j, n):
        src, tgt = self.term(j, n), self.term(j + 1, n)
        if j + 1 not in self.columns or not src.dim or not tgt.dim:
            return zero_map(src, tgt)
        cshoe, zshoe = self.columns_shoe[j], self.zparts[j + 1]
        if n >= len(cshoe.projs) or n >= len(zshoe.incs):
            return zero_map(src, tgt)
        to_b = cshoe.projs[n][1]
        into_z = zshoe.incs[n][0]
        into_q = self.columns_shoe[j + 1].incs[n][0]
        return into_q @ into_z @ to_b

    def check(self):
        """Columns resolve the terms, squares commute and rows are complexes."""
        c = self.complex
        for j in self.columns:
            if not self.columns[j].check_exact():
                return False
            for n in range(self.length):
                h = self.horizontal(j, n)
                h2 = self.horizontal(j + 1, n)
                if not (h2.matrix @ h.matrix).is_zero():
                    return False
                if n >= 1:
                    lhs = self.vertical(j + 1, n).matrix @ h.matrix if j + 1 in self.columns \
                        else None
                    if lhs is not None:
                        rhs = self.horizontal(j, n - 1).matrix @ self.vertical(j, n).matrix
                        if lhs != rhs:
                            return False
            aug = self.vertical(j, 0) if self.columns[j].terms else None
            if aug is not None and j + 1 in self.columns and self.columns[j + 1].terms:
                lhs = c.diff(j).matrix @ aug.matrix
                rhs = self.vertical(j + 1, 0).matrix @ self.horizontal(j, 0).matrix
                if lhs != rhs:
                    return False
        return True


def cartan_eilenberg(c, cap=DEFAULT_RES_CAP):
    """Cartan-Eilenberg resolution of a bounded complex of modules.

    Resolutions of boundaries and cohomologies are glued by two horseshoes per
    degree.  Raises :class:`CapExceeded` when one of them does not terminate.
    """
    A, side = c.algebra, c.side
    degs = list(c.degrees())
    bsq = {j: Subquotient(c.term(j), image_echelon(c.diff(j - 1))) for j in degs + [c.hi + 1]}
    res_b = {j: projective_resolution(bsq[j].module, cap=cap) for j in bsq}
    res_h, zparts, cshoes, columns = {}, {}, {}, {}
    for j in degs:
        d = c.diff(j)
        zsq = Subquotient(c.term(j), kernel_echelon(d))
        z_incl = zsq.inclusion()
        b_in_z = ModuleMap(bsq[j].module, zsq.module,
                           zsq.coords_matrix(bsq[j].reps) if bsq[j].reps else
                           Matrix.zeros(zsq.module.dim, 0, c.algebra.field))
        h, h_proj = cokernel(b_in_z)
        res_h[j] = projective_resolution(h, cap=cap)
        zparts[j] = horseshoe(b_in_z, h_proj, res_b[j], res_h[j])
        nxt = bsq[j + 1]
        cor = ModuleMap(c.term(j), nxt.module,
                        Matrix.from_columns([nxt.coords(d.matrix.col_dict(i))
                                             for i in range(c.term(j).dim)],
                                            nxt.module.dim, c.algebra.field))
        cshoes[j] = horseshoe(z_incl, cor, zparts[j].res, res_b[j + 1])
        columns[j] = cshoes[j].res
    ce = CEResolution(c, columns, zparts, res_b, res_h)
    ce.columns_shoe = cshoes
    return ce


# --- double complex -----------------------------------------------------------

class DoubleComplex:
    """Bounded grid D^{p,q} with d_p : (p,q)->(p+1,q) and d_q : (p,q)->(p,q+1).

    The given maps commute; the total differential is d_p + (-1)^p d_q.
    """

    def __init__(self, cells, dp, dq):
        self.cells = cells          # (p, q) -> module
        self.dp = dp                # (p, q) -> map to (p+1, q)
        self.dq = dq                # (p, q) -> map to (p, q+1)
        ps = [p for p, _ in cells] or [0]
        qs = [q for _, q in cells] or [0]
        self.p_range = (min(ps), max(ps))
        self.q_range = (min(qs), max(qs))

    def cell(self, p, q):
        return self.cells.get((p, q))

    def check(self):
        for (p, q), m in self.cells.items():
            a, b = self.dp.get((p, q)), self.dq.get((p, q))
            a2 = self.dp.get((p + 1, q))
            b2 = self.dq.get((p, q + 1))
            if a is not None and a2 is not None and not (a2.matrix @ a.matrix).is_zero():
                return False
            if b is not None and b2 is not None and not (b2.matrix @ b.matrix).is_zero():
                return False
            c1 = self.dq.get((p + 1, q))
            c2 = self.dp.get((p, q + 1))
            if a is not None and b is not None and c1 is not None and c2 is not None:
                if c1.matrix @ a.matrix != c2.matrix @ b.matrix:
                    return False
        return True

    def total_degrees(self):
        return range(self.p_range[0] + self.q_range[0], self.p_range[1] + self.q_range[1] + 1)

    def blocks(self, s):
        """[(p, q, module)] with p + q = s, in increasing p."""
        out = []
        for p in range(self.p_range[0], self.p_range[1] + 1):
            m = self.cells.get((p, s - p))
            if m is not None and m.dim:
                out.append((p, s - p, m))
        return out


def double_complex_of(ce, functor):
    """Apply a contravariant functor to a CE grid: D^{p,q} = functor(Q^{-q}_p)."""
    cells, dp, dq = {}, {}, {}
    L = ce.length
    for j in ce.columns:
        for p in range(L):
            cells[(p, -j)] = functor(ce.term(j, p))
    for j in ce.columns:
        for p in range(L):
            if p + 1 < L:
                dp[(p, -j)] = functor.on_map(ce.vertical(j, p + 1))
            if j - 1 in ce.columns:
                dq[(p, -j)] = functor.on_map(ce.horizontal(j - 1, p))
    return DoubleComplex(cells, dp, dq)


class Total:
    """Total complex of a double complex with block offsets and the column filtration."""

    def __init__(self, dc):
        self.dc = dc
        self.layout = {}
        mods = {}
        for s in dc.total_degrees():
            blocks = dc.blocks(s)
            off, lay = 0, []
            for p, q, m in blocks:
                lay.append((p, q, off, m.dim))
                off += m.dim
            self.layout[s] = lay
            if blocks:
                A = blocks[0][2].algebra
                mods[s] = direct_sum([m for _, _, m in blocks], A, blocks[0][2].side)[0]
        self.modules = mods
        A = next(iter(dc.cells.values())).algebra
        side = next(iter(dc.cells.values())).side
        self.algebra, self.side = A, side
        self.field = A.field
        degs = sorted(mods)
        self.lo = degs[0] if degs else 0
        self.hi = degs[-1] if degs else -1
        self.d = {s: self._diff(s) for s in range(self.lo, self.hi + 1)}
        terms = [self.term(s) for s in range(self.lo, self.hi + 1)]
        self.complex = BoundedComplex(A, side, self.lo, terms,
                                      [self.d[s] for s in range(self.lo, self.hi)])

    def term(self, s):
        m = self.modules.get(s)
        return m if m is not None else zero_module(self.algebra, self.side)

    def _diff(self, s):
        src, tgt = self.term(s), self.term(s + 1)
        mat = Matrix.zeros(tgt.dim, src.dim, self.field)
        where = {(p, q): off for p, q, off, _ in self.layout.get(s + 1, [])}
        for p, q, off, n in self.layout.get(s, []):
            pieces = [((p + 1, q), self.dc.dp.get((p, q)), 1),
                      ((p, q + 1), self.dc.dq.get((p, q)), -1 if p % 2 else 1)]
            for key, f, sign in pieces:
                if f is None or key not in where:
                    continue
                toff = where[key]
                for i in range(f.matrix.nrows):
                    row = f.matrix.rows[i]
                    for j in range(n):
                        x = row[j]
                        if x:
                            mat.rows[toff + i][off + j] += x if sign > 0 else -x
        return ModuleMap(src, tgt, mat)

    def filtration_space(self, p, s):
        """F^p T^s: coordinates of the blocks with column index >= p."""
        n = self.term(s).dim
        one = self.field.one
        vecs = []
        for pp, _, off, dim in self.layout.get(s, []):
            if pp >= p:
                vecs.extend({off + i: one} for i in range(dim))
        return Echelon.span(n, vecs, self.field)

    def coords_below(self, p, s):
        """Coordinates of blocks with column index < p."""
        out = []
        for pp, _, off, dim in self.layout.get(s, []):
            if pp < p:
                out.extend(range(off, off + dim))
        return out

    def block_coords(self, p, s):
        for pp, _, off, dim in self.layout.get(s, []):
            if pp == p:
                return list(range(off, off + dim))
        return []


# --- the spectral datum ---------------------------------------------------------

class SpectralDatum:
    """Pages E_r^{p,q}, differentials d_r, E_infinity and the filtration of H^s(Tot)."""

    def __init__(self, total, a=None, ctx=None):
        self.total = total
        self.a = a
        self.ctx = ctx
        self._z = {}
        self.pages = {}
        self.page_sq = {}
        self.diffs = {}
        self.stable = None
        self.einf = {}
        self.einf_sq = {}
        self.cohomology_sq = {}
        self.filtration = {}
        self.alpha = None

    # subspace chains
    def p_bounds(self):
        return self.total.dc.p_range

    def Z(self, r, p, s):
        """Z_r^{p,s} = {x in F^p T^s : d x in F^{p+r} T^{s+1}}; r = None means r = infinity."""
        key = (r, p, s)
        hit = self._z.get(key)
        if hit is not None:
            return hit
        T = self.total
        n = T.term(s).dim
        F = T.field
        plo, phi = self.p_bounds()
        if r is not None and r <= 0:
            res = T.filtration_space(p, s)
        else:
            cols = [c for c in range(n) if c not in set(T.coords_below(p, s))]
            d = T.d.get(s)
            bound = None if r is None else p + r
            rows_keep = range(T.term(s + 1).dim) if bound is None \
                else T.coords_below(bound, s + 1)
            rows = []
            if d is not None and cols:
                pos = {c: k for k, c in enumerate(cols)}
                for i in rows_keep:
                    row = {}
                    for c in cols:
                        x = d.matrix.rows[i][c]
                        if x:
                            row[pos[c]] = x
                    if row:
                        rows.append(row)
            ker = kernel_of_rows(rows, len(cols), F)
            res = Echelon.span(n, [{cols[k]: x for k, x in v.items()} for v in ker], F)
        self._z[key] = res
        return res

    def _image(self, space, s):
        d = self.total.d.get(s)
        n = self.total.term(s + 1).dim
        if d is None:
            return Echelon(n, self.total.field)
        return Echelon.span(n, [d.matrix.apply_sparse(v) for v in space.basis()],
                            self.total.field)

    def denominator(self, r, p, s):
        if r is None:
            zinf = self.Z(None, p + 1, s)
            bnd = image_echelon(self.total.d[s - 1]) if s - 1 in self.total.d \
                else Echelon(self.total.term(s).dim, self.total.field)
            return zinf + bnd.intersect(self.total.filtration_space(p, s))
        lower = self.Z(r - 1, p - r + 1, s - 1) if (s - 1) in self.total.d else None
        den = self.Z(r - 1, p + 1, s)
        if lower is not None:
            den = den + self._image(lower, s - 1)
        return den

    def cell_sq(self, r, p, q):
        s = p + q
        if r is None:
            return Subquotient(self.total.term(s), self.Z(None, p, s), self.denominator(None, p, s))
        return Subquotient(self.total.term(s), self.Z(r, p, s), self.denominator(r, p, s))

    def d_r(self, r, p, q):
        """The page differential E_r^{p,q} -> E_r^{p+r, q-r+1} as a module map."""
        src = self.page_sq[r][(p, q)]
        key = (p + r, q - r + 1)
        tgt = self.page_sq[r].get(key)
        s = p + q
        d = self.total.d.get(s)
        if tgt is None or d is None or not src.module.dim or not tgt.module.dim:
            tm = tgt.module if tgt is not None else zero_module(src.module.algebra,
                                                                src.module.side)
            return ModuleMap(src.module, tm, Matrix.zeros(tm.dim, src.module.dim,
                                                          self.total.field))
        cols = [tgt.coords(d.matrix.apply_sparse(v)) for v in src.reps]
        return ModuleMap(src.module, tgt.module,
                         Matrix.from_columns(cols, tgt.module.dim, self.total.field))

    def cells(self):
        dc = self.total.dc
        return sorted(dc.cells)

    def compute(self, first=2):
        plo, phi = self.p_bounds()
        width = phi - plo + 2
        for r in range(first, first + width + 1):
            self.page_sq[r] = {(p, q): self.cell_sq(r, p, q) for p, q in self.cells()}
            self.pages[r] = {k: v.module for k, v in self.page_sq[r].items()}
        for r in self.pages:
            self.diffs[r] = {(p, q): self.d_r(r, p, q) for p, q in self.cells()}
        self.einf_sq = {(p, q): self.cell_sq(None, p, q) for p, q in self.cells()}
        self.einf = {k: v.module for k, v in self.einf_sq.items()}
        inf_dims = {k: m.dim for k, m in self.einf.items()}
        last = max(self.pages)
        if {k: m.dim for k, m in self.pages[last].items()} != inf_dims:
            raise HypothesisViolated("spectral sequence did not stabilise within the grid")
        stable = last
        for r in sorted(self.pages, reverse=True):
            if {k: m.dim for k, m in self.pages[r].items()} == inf_dims and \
                    all(f.is_zero() for f in self.diffs[r].values()):
                stable = r
            else:
                break
        self.stable = stable
        for k in [r for r in self.pages if r > stable]:
            del self.pages[k], self.page_sq[k], self.diffs[k]
        T = self.total
        for s in range(T.lo, T.hi + 1):
            self.cohomology_sq[s] = T.complex.cohomology_sq(s)
            bnd = image_echelon(T.d[s - 1]) if s - 1 in T.d else Echelon(T.term(s).dim,
                                                                        T.field)
            chain = []
            for p in range(plo, phi + 2):
                chain.append((p, self.Z(None, p, s) + bnd))
            self.filtration[s] = chain
        return self

    # --- accounting ---
    def e2(self, p, q):
        m = self.pages.get(2, {}).get((p, q))
        if m is None:
            m = self.einf.get((p, q))
        return m

    def page_cell(self, r, p, q):
        """E_r^{p,q}; pages past the stable one equal E_infinity."""
        if r in self.pages:
            return self.pages[r].get((p, q))
        return self.einf.get((p, q))

    def abutment_dim(self, s):
        return self.total.complex.cohomology_dim(s) if self.total.lo <= s <= self.total.hi else 0

    def filtration_accounting(self):
        """For each s: (sum of dim E_inf^{p, s-p}, dim H^s(Tot))."""
        out = {}
        for s in range(self.total.lo, self.total.hi + 1):
            tot = sum(m.dim for (p, q), m in self.einf.items() if p + q == s)
            out[s] = (tot, self.abutment_dim(s))
        return out

    def filtration_factor(self, s, p):
        """F^p H^s / F^{p+1} H^s as a module (should be isomorphic to E_inf^{p,s-p})."""
        chain = dict(self.filtration[s])
        plo, phi = self.p_bounds()
        top = chain.get(p, chain[plo])
        nxt = chain.get(p + 1, Echelon(self.total.term(s).dim, self.total.field))
        return Subquotient(self.total.term(s), top, nxt).module

    # --- edge maps ---
    def cycle_in_column(self, vec, p, s):
        """Subtract from vec (in F^p T^s) an element of F^{p+1} T^s to make it a cycle."""
        T = self.total
        d = T.d.get(s)
        if d is None:
            return vec
        dx = d.matrix.apply_sparse(vec)
        if not dx:
            return vec
        cols = [c for c in range(T.term(s).dim) if c not in set(T.coords_below(p + 1, s))]
        if not cols:
            raise HypothesisViolated("class does not survive to E_infinity")
        sub = d.matrix.submatrix(list(range(d.matrix.nrows)), cols)
        rhs = Matrix.from_columns([dx], d.matrix.nrows, T.field)
        try:
            y = solve(sub, rhs)
        except NoSolution:
            raise HypothesisViolated("class does not survive to E_infinity") from None
        out = dict(vec)
        for k, c in enumerate(cols):
            x = y.rows[k][0]
            if x:
                out[c] = out.get(c, 0) - x
        return {k: x for k, x in out.items() if x}

    def h_class(self, vec, s):
        return self.cohomology_sq[s].coords(vec)


def _resolution_complex(res):
    """The resolution as a complex P_N -> ... -> P_0 in degrees -N..0."""
    A, side = res.module.algebra, res.module.side
    n = len(res.terms)
    if not n:
        return BoundedComplex.zero(A, side)
    terms = [res.terms[n - 1 - i] for i in range(n)]
    diffs = [res.maps[n - 1 - i] for i in range(n - 1)]
    return BoundedComplex(A, side, -(n - 1), terms, diffs)


def second_spectral(ctx, a, cap=None):
    """Second spectral sequence of a module a (over either side of the context)."""
    cap = cap or ctx.res_cap()
    F = ctx.functor_for(a)
    B = ctx.other_functor(a)
    res = projective_resolution(a, cap=cap)
    p = _resolution_complex(res)
    c = apply_contravariant(F, p) if res.terms else BoundedComplex.zero(F.C, F.C_side)
    if not c.terms:
        c = BoundedComplex(F.C, F.C_side, 0, [zero_module(F.C, F.C_side)], [])
    ce = cartan_eilenberg(c, cap=cap)
    dc = double_complex_of(ce, B)
    if not dc.cells:
        dc.cells[(0, 0)] = zero_module(a.algebra, a.side)
    total = Total(dc)
    sd = SpectralDatum(total, a, ctx).compute()
    sd.resolution = res
    sd.ce = ce
    sd.c = c
    sd.alpha = _comparison(sd, res, F, B, ce)
    return sd


def _comparison(sd, res, F, B, ce):
    """The map a -> H^0(Tot) induced by P_0 -> BF(P_0) -> B(Q^0_0)."""
    a = res.module
    T = sd.total
    h0 = sd.cohomology_sq.get(0)
    if h0 is None or not res.terms:
        tgt = h0.module if h0 is not None else zero_module(a.algebra, a.side)
        return ModuleMap(a, tgt, Matrix.zeros(tgt.dim, a.dim, a.field))
    P0 = res.terms[0]
    aug = res.maps[0]
    eta = F.unit(P0, B)
    eps = ce.vertical(0, 0)
    b_eps = B.on_map(eps)
    offs = T.block_coords(0, 0)
    to_tot = b_eps.matrix @ eta.matrix
    cols = []
    for i in range(a.dim):
        rhs = Matrix.from_columns([{i: a.field.one}], a.dim, a.field)
        x = solve(aug.matrix, rhs)
        y = to_tot.apply_sparse({k: x.rows[k][0] for k in range(x.nrows) if x.rows[k][0]})
        vec = {offs[k]: v for k, v in y.items()}
        cols.append(h0.coords(vec))
    return ModuleMap(a, h0.module, Matrix.from_columns(cols, h0.module.dim, a.field))


def e2_oracle(ctx, a, p, q):
    """R^p B R^{-q} F (a) computed directly from resolutions."""
    inner = ctx.derived_module(a, -q)
    return ctx.derived_module(inner, p)


def check_e2_oracle(sd):
    """Every E_2 cell is isomorphic to the double-Ext oracle; returns failing cells."""
    bad = []
    for (p, q) in sd.cells():
        e2 = sd.e2(p, q)
        want = e2_oracle(sd.ctx, sd.a, p, q)
        if e2.dim != want.dim or (e2.dim and not is_isomorphic(e2, want)):
            bad.append((p, q))
    return bad
