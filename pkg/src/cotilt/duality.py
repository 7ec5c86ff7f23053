"""The contravariant pair Phi = Hom_L(-, U) and Psi = Hom_S(-, U) with S = End(U).

Conventions: U is given as an ordered list of left-module summands U_1..U_m.
The basis of S is assembled block by block from Hom(U_b, U_a); the block
(j, j) starts with the identity of U_j, which becomes the idempotent of the
j-th vertex of S.  Multiplication in S is "first s, then t":
``s . t = t o s``, so that U is a right S-module through ``u . s = s(u)``.
With this choice Phi(U_j) is the right projective e_j S.
"""
from __future__ import annotations

from .algebra import BasisAlgebra, check_split
from .errors import CapExceeded, InputError, SplitFailure
from .linalg import Matrix
from .modules import (DEFAULT_RES_CAP, LEFT, RIGHT, FinModule, ModuleMap, Subquotient,
                      direct_sum, ext_dim, hom_basis, identity_map, injective_dimension,
                      kernel_echelon, image_echelon, projective_resolution)


class HomFunctor:
    """X -> Hom_B(X, base), made into a module over C by post-composition.

    ``base`` is U viewed as a B-module and ``other[c]`` is the matrix by which
    the basis element c of C acts on U (commuting with the B-action).
    """

    def __init__(self, base, other, C, C_side, name):
        self.base = base
        self.other = other
        self.C = C
        self.C_side = C_side
        self.name = name
        self._cache = {}

    def _hom(self, x):
        hit = self._cache.get(id(x))
        if hit is not None and hit[0] is x:
            return hit[1], hit[2]
        H = hom_basis(x, self.base)
        F = self.C.field
        n = len(H)
        act = []
        for c in range(self.C.dim):
            oc = self.other[c]
            mat = Matrix.zeros(n, n, F)
            if not oc.is_zero():
                for k, h in enumerate(H.basis):
                    co = H.coords(oc @ h.matrix)
                    for i, v in enumerate(co):
                        if v:
                            mat.rows[i][k] = v
            act.append(mat)
        mod = FinModule(self.C, self.C_side, n, act)
        self._cache[id(x)] = (x, mod, H)
        return mod, H

    def __call__(self, x):
        return self._hom(x)[0]

    def hom_space(self, x):
        return self._hom(x)[1]

    def on_map(self, f):
        """F(f): F(target) -> F(source), h |-> h o f."""
        src, Hs = self._hom(f.target)
        tgt, Ht = self._hom(f.source)
        cols = [Ht.coords(h.matrix @ f.matrix) for h in Hs.basis]
        return ModuleMap(src, tgt, Matrix.from_columns(cols, tgt.dim, src.field))

    def unit(self, x, back):
        """x -> back(self(x)), sending v to evaluation at v."""
        fx, H1 = self._hom(x)
        ffx, H2 = back._hom(fx)
        F = x.field
        cols = []
        for c in range(x.dim):
            ev = Matrix.from_columns([h.matrix.column(c) for h in H1.basis],
                                     self.base.dim, F)
            cols.append(H2.coords(ev))
        return ModuleMap(x, ffx, Matrix.from_columns(cols, ffx.dim, F))


def _rebase_with_identity(H, dim, field):
    """Basis change putting the identity first; returns (matrices, coords function)."""
    ident = Matrix.identity(dim, field)
    d = H.coords(ident)
    r = next(k for k, x in enumerate(d) if x)
    mats = [ident] + [b.matrix for k, b in enumerate(H.basis) if k != r]
    dr = d[r]

    def coords(h):
        c = H.coords(h)
        lead = c[r] / dr
        return [lead] + [c[k] - lead * d[k] for k in range(len(c)) if k != r]

    return mats, coords


def endomorphism_algebra(summands, labels=None):
    """S = End(U_1 + ... + U_m) as a BasisAlgebra plus the embedding data."""
    if any(u.dim == 0 for u in summands):
        raise InputError("U has a zero summand")
    U, incs, projs = direct_sum(summands)
    F = U.field
    m = len(summands)
    blocks = {}
    mats, blk, names = [], [], []
    idem = [None] * m
    for b in range(m):
        for a in range(m):
            H = hom_basis(summands[b], summands[a])
            if a == b:
                local, coords = _rebase_with_identity(H, summands[a].dim, F)
            else:
                local, coords = [h.matrix for h in H.basis], H.coords
            start = len(mats)
            for k, h in enumerate(local):
                if a == b and k == 0:
                    idem[a] = len(mats)
                mats.append(incs[a].matrix @ h @ projs[b].matrix)
                blk.append((b, a))
                names.append("h%d%d_%d" % (b + 1, a + 1, k))
            blocks[(b, a)] = (start, len(local), coords)

    def s_coords(phi):
        out = {}
        for (b, a), (start, n, coords) in blocks.items():
            if not n:
                continue
            sub = projs[a].matrix @ phi @ incs[b].matrix
            if sub.is_zero():
                continue
            for k, c in enumerate(coords(sub)):
                if c:
                    out[start + k] = c
        return out

    dim = len(mats)
    mult = [[s_coords(mats[j] @ mats[i]) if blk[i][1] == blk[j][0] else {}
             for j in range(dim)] for i in range(dim)]
    S = BasisAlgebra(F, names, mult, idem, blk,
                     vertices=labels if labels is not None else list(range(1, m + 1)))
    return S, U, mats, s_coords


class DualityContext:
    """Phi, Psi, their units, derived functors on modules and cotilting diagnostics."""

    def __init__(self, lam, summands, labels=None, cap=DEFAULT_RES_CAP, check=True):
        self.lam = lam
        self.summands = list(summands)
        self.cap = cap
        S, U, mats, s_coords = endomorphism_algebra(self.summands, labels)
        self.S, self.U = S, U
        self.s_coords = s_coords
        self.sigma = mats
        weights = []
        for j, u in enumerate(self.summands):
            weights.extend([j] * u.dim)
        self.US = FinModule(S, RIGHT, U.dim, mats, weights)
        if check:
            for g in lam.gens:
                for s in range(S.dim):
                    if U.act[g] @ mats[s] != mats[s] @ U.act[g]:
                        raise ValueError("U is not a bimodule")
            if not check_split(S):
                raise SplitFailure("End(U) is not split over the ground field")
        self.phi = HomFunctor(U, mats, S, RIGHT, "Phi")
        self.psi = HomFunctor(self.US, U.act, lam, LEFT, "Psi")
        self._n_phi = self._n_psi = False

    # --- dimensions -----------------------------------------------------
    @property
    def n_phi(self):
        """Cohomological dimension of Phi = injective dimension of U over Lambda."""
        if self._n_phi is False:
            try:
                self._n_phi = injective_dimension(self.U, self.cap)
            except CapExceeded:
                self._n_phi = None
        return self._n_phi

    @property
    def n_psi(self):
        """Cohomological dimension of Psi = injective dimension of U over S."""
        if self._n_psi is False:
            try:
                self._n_psi = injective_dimension(self.US, self.cap)
            except CapExceeded:
                self._n_psi = None
        return self._n_psi

    def res_cap(self):
        dims = [d for d in (self.n_phi, self.n_psi) if d is not None]
        return max([self.cap] + [d + 2 for d in dims])

    # --- functors and units ---------------------------------------------
    def functor_for(self, m):
        return self.phi if m.algebra is self.lam else self.psi

    def other_functor(self, m):
        return self.psi if m.algebra is self.lam else self.phi

    def eta(self, m):
        return self.phi.unit(m, self.psi)

    def xi(self, n):
        return self.psi.unit(n, self.phi)

    def is_reflexive(self, m):
        """True iff the unit at m (eta for Lambda-modules, xi for S-modules) is invertible."""
        u = self.eta(m) if m.algebra is self.lam else self.xi(m)
        return u.source.dim == u.target.dim and (u.source.dim == 0 or u.is_iso())

    def cd(self, m):
        """Cohomological dimension of the functor acting on m."""
        return self.n_phi if m.algebra is self.lam else self.n_psi

    def derived_module(self, m, i):
        """R^i of the Hom functor on m with its module structure (Ext^i(m, U))."""
        F = self.functor_for(m)
        if i < 0:
            return F(_zero_like(m))
        if m.dim == 0:
            return F(m)
        res = projective_resolution(m, length=i + 1, cap=max(self.cap, i + 2))
        terms = res.terms
        if i >= len(terms):
            return F(_zero_like(m))
        maps = res.maps
        d_out = F.on_map(maps[i + 1]) if i + 1 < len(terms) else None
        d_in = F.on_map(maps[i]) if i >= 1 else None
        X = F(terms[i])
        num = kernel_echelon(d_out) if d_out is not None else _full(X)
        den = image_echelon(d_in) if d_in is not None else None
        return Subquotient(X, num, den).module

    def r_phi(self, m, i):
        return self.derived_module(m, i)

    def r_psi(self, n, i):
        return self.derived_module(n, i)

    def _vanishing_range(self, m):
        d = self.cd(m)
        return range(1, (d if d is not None else self.cap) + 1)

    def is_acyclic(self, m):
        """Phi-acyclic for Lambda-modules, Psi-acyclic for S-modules."""
        base = self.U if m.algebra is self.lam else self.US
        return all(ext_dim(m, base, i, self.res_cap()) == 0 for i in self._vanishing_range(m))

    def is_phi_acyclic(self, m):
        return self.is_acyclic(m)

    def is_psi_acyclic(self, n):
        return self.is_acyclic(n)

    def is_psi_phi_acyclic(self, m):
        """Phi-acyclic with Phi(m) Psi-acyclic (or the mirror statement for S-modules)."""
        return self.is_acyclic(m) and self.is_acyclic(self.functor_for(m)(m))

    # --- flags ------------------------------------------------------------
    def projectives_acyclic(self, side="lambda"):
        """Whether all indecomposable projectives on one side are acyclic for the round trip."""
        from .modules import projective
        if side == "lambda":
            A = self.lam
            return all(self.is_psi_phi_acyclic(projective(A, j, LEFT))
                       for j in range(A.n_vertices))
        A = self.S
        return all(self.is_psi_phi_acyclic(projective(A, j, RIGHT))
                   for j in range(A.n_vertices))

    def partial_cotilting_report(self, powers=(1, 2, 4)):
        rep = {"injdim_left": self.n_phi, "injdim_right": self.n_psi}
        ok_left = ok_right = True
        failures = []
        if self.n_phi is not None:
            for t in powers:
                Ut = direct_sum([self.U] * t)[0]
                for i in range(1, self.n_phi + 1):
                    if ext_dim(Ut, self.U, i, self.res_cap()):
                        ok_left = False
                        failures.append(("left", t, i))
        if self.n_psi is not None:
            for t in powers:
                Ut = direct_sum([self.US] * t)[0]
                for i in range(1, self.n_psi + 1):
                    if ext_dim(Ut, self.US, i, self.res_cap()):
                        ok_right = False
                        failures.append(("right", t, i))
        rep["ext_orthogonal_left"] = ok_left
        rep["ext_orthogonal_right"] = ok_right
        rep["phi_free_psi_acyclic"] = self.is_acyclic(self.phi(self.lam_regular()))
        rep["failures"] = failures
        rep["partial_cotilting"] = (self.n_phi is not None and self.n_psi is not None
                                    and ok_left and ok_right and rep["phi_free_psi_acyclic"])
        return rep

    def is_partial_cotilting(self):
        return self.partial_cotilting_report()["partial_cotilting"]

    def lam_regular(self):
        from .modules import regular_module
        return regular_module(self.lam, LEFT)


def _zero_like(m):
    from .modules import zero_module
    return zero_module(m.algebra, m.side)


def _full(m):
    from .modules import full_space
    return full_space(m)
