"""Exact linear algebra over Q (gmpy2 rationals) or a prime field F_p.

Vectors used inside elimination are sparse dicts ``{column: scalar}``.
Dense matrices are :class:`Matrix` objects that remember their shape, so
0 x n and n x 0 matrices are legal values.

Pivoting is deterministic: a new pivot is always the smallest column that
survives reduction, so every result is reproducible run to run.

>>> m = Matrix.from_rows([[1, 2], [2, 4]])
>>> rank(m)
1
>>> kernel_basis(m).column(0)
[mpq(-2,1), mpq(1,1)]
>>> solve(Matrix.from_rows([[1, 1], [0, 1]]), Matrix.from_rows([[3], [1]])).rows
[[mpq(2,1)], [mpq(1,1)]]
"""
from __future__ import annotations

from gmpy2 import mpq


class NoSolution(ArithmeticError):
    """Raised by :func:`solve` when the system is inconsistent."""


class ModP:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.p = p
        self.v = int(v) % p

    def _lift(self, other):
        if isinstance(other, ModP):
            return other.v
        return int(other) % self.p

    def __add__(self, o):
        return ModP(self.v + self._lift(o), self.p)

    __radd__ = __add__

    def __sub__(self, o):
        return ModP(self.v - self._lift(o), self.p)

    def __rsub__(self, o):
        return ModP(self._lift(o) - self.v, self.p)

    def __mul__(self, o):
        return ModP(self.v * self._lift(o), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __truediv__(self, o):
        d = self._lift(o)
        if d == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return ModP(self.v * pow(d, self.p - 2, self.p), self.p)

    def __rtruediv__(self, o):
        return ModP(self._lift(o), self.p) / self

    def __eq__(self, o):
        try:
            return self.v == self._lift(o)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "ModP(%d,%d)" % (self.v, self.p)

    def __str__(self):
        return str(self.v)


class Field:
    """Ground field: ``Field(0)`` is Q, ``Field(p)`` is F_p."""

    def __init__(self, p=0):
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    def __call__(self, x):
        if self.p:
            return ModP(x.v if isinstance(x, ModP) else int(x), self.p)
        if isinstance(x, str):
            return mpq(x.strip())
        return mpq(x)

    @property
    def char(self):
        return self.p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("field", self.p))

    def __repr__(self):
        return "Q" if not self.p else "Fp(%d)" % self.p


QQ = Field(0)


def fmt(x):
    """Stable text form of a scalar: ``3``, ``-1/2``."""
    if isinstance(x, ModP):
        return str(x.v)
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


class Matrix:
    """Dense matrix with explicit shape."""

    __slots__ = ("nrows", "ncols", "rows", "field")

    def __init__(self, nrows, ncols, rows=None, field=QQ):
        self.nrows, self.ncols, self.field = nrows, ncols, field
        if rows is None:
            z = field.zero
            rows = [[z] * ncols for _ in range(nrows)]
        self.rows = rows

    @classmethod
    def from_rows(cls, rows, ncols=None, field=QQ):
        rows = [[field(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        return cls(len(rows), ncols, rows, field)

    @classmethod
    def from_columns(cls, cols, nrows, field=QQ):
        m = cls(nrows, len(cols), None, field)
        for j, c in enumerate(cols):
            if isinstance(c, dict):
                for i, x in c.items():
                    m.rows[i][j] = x
            else:
                for i in range(nrows):
                    m.rows[i][j] = c[i]
        return m

    @classmethod
    def identity(cls, n, field=QQ):
        m = cls(n, n, None, field)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @classmethod
    def zeros(cls, nrows, ncols, field=QQ):
        return cls(nrows, ncols, None, field)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __setitem__(self, ij, x):
        i, j = ij
        self.rows[i][j] = x

    def column(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def col_dict(self, j):
        return {i: r[j] for i, r in enumerate(self.rows) if r[j]}

    def row_dict(self, i):
        return {j: x for j, x in enumerate(self.rows[i]) if x}

    def copy(self):
        return Matrix(self.nrows, self.ncols, [list(r) for r in self.rows], self.field)

    @property
    def T(self):
        return Matrix(self.ncols, self.nrows,
                      [list(c) for c in zip(*self.rows)] if self.nrows else
                      [[] for _ in range(self.ncols)], self.field)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        z = self.field.zero
        out = []
        ocols = other.ncols
        orows = other.rows
        for r in self.rows:
            acc = [z] * ocols
            for k, a in enumerate(r):
                if a:
                    ok = orows[k]
                    for j in range(ocols):
                        b = ok[j]
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(self.nrows, ocols, out, self.field)

    def apply(self, vec):
        """Matrix times a dense vector (list)."""
        z = self.field.zero
        out = []
        for r in self.rows:
            acc = z
            for a, b in zip(r, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def apply_sparse(self, vec):
        """Matrix times a sparse vector, returning a sparse vector."""
        out = {}
        for j, b in vec.items():
            for i in range(self.nrows):
                a = self.rows[i][j]
                if a:
                    out[i] = out.get(i, 0) + a * b
        return {i: x for i, x in out.items() if x}

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(self.nrows, self.ncols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.field)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(self.nrows, self.ncols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
                      self.field)

    def __neg__(self):
        return Matrix(self.nrows, self.ncols, [[-a for a in r] for r in self.rows], self.field)

    def scale(self, c):
        return Matrix(self.nrows, self.ncols, [[c * a for a in r] for r in self.rows], self.field)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and all(a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)))

    def __hash__(self):
        return hash((self.shape, tuple(tuple(fmt(a) for a in r) for r in self.rows)))

    def is_zero(self):
        return not any(a for r in self.rows for a in r)

    def submatrix(self, rows, cols):
        return Matrix(len(rows), len(cols), [[self.rows[i][j] for j in cols] for i in rows],
                      self.field)

    def sparse_rows(self):
        return [{j: x for j, x in enumerate(r) if x} for r in self.rows]

    def __repr__(self):
        body = "; ".join(" ".join(fmt(a) for a in r) for r in self.rows)
        return "Matrix(%dx%d: %s)" % (self.nrows, self.ncols, body)


def block_diag(blocks, field=QQ):
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    out = Matrix.zeros(n, m, field)
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.nrows):
            out.rows[r0 + i][c0:c0 + b.ncols] = b.rows[i]
        r0 += b.nrows
        c0 += b.ncols
    return out


def hstack(blocks, nrows, field=QQ):
    out = Matrix.zeros(nrows, sum(b.ncols for b in blocks), field)
    c0 = 0
    for b in blocks:
        for i in range(nrows):
            out.rows[i][c0:c0 + b.ncols] = b.rows[i]
        c0 += b.ncols
    return out


def vstack(blocks, ncols, field=QQ):
    rows = []
    for b in blocks:
        rows.extend(list(r) for r in b.rows)
    return Matrix(len(rows), ncols, rows, field)


class Echelon:
    """Incrementally built reduced basis of a subspace of F^n.

    Each stored row has a 1 in its pivot column and 0 in every other pivot
    column, so coordinates and residues are read off directly.
    """

    def __init__(self, n, field=QQ):
        self.n = n
        self.field = field
        self.rows = {}

    @classmethod
    def span(cls, n, vectors, field=QQ):
        e = cls(n, field)
        for v in vectors:
            e.add(v)
        return e

    def copy(self):
        e = Echelon(self.n, self.field)
        e.rows = {k: dict(v) for k, v in self.rows.items()}
        return e

    @property
    def dim(self):
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)

    def reduce(self, vec):
        r = {k: x for k, x in vec.items() if x}
        rows = self.rows
        for pc in [c for c in r if c in rows]:
            c = r.get(pc)
            if c:
                for k, x in rows[pc].items():
                    y = r.get(k, 0) - c * x
                    if y:
                        r[k] = y
                    else:
                        r.pop(k, None)
        return r

    def add(self, vec):
        r = self.reduce(vec)
        if not r:
            return False
        pc = min(r)
        inv = self.field.one / r[pc]
        r = {k: x * inv for k, x in r.items()}
        for row in self.rows.values():
            c = row.get(pc)
            if c:
                for k, x in r.items():
                    y = row.get(k, 0) - c * x
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
        self.rows[pc] = r
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    def coords(self, vec):
        """Coordinates of ``vec`` (assumed inside) in the sorted-pivot basis."""
        z = self.field.zero
        return [vec.get(p, z) for p in self.pivots()]

    def basis(self):
        return [self.rows[p] for p in self.pivots()]

    def complement(self):
        """Columns not used as pivots; they index a basis of F^n / self."""
        return [c for c in range(self.n) if c not in self.rows]

    def contains_space(self, other):
        return all(self.contains(v) for v in other.basis())

    def __add__(self, other):
        e = self.copy()
        for v in other.basis():
            e.add(v)
        return e

    def intersect(self, other):
        """Intersection via the kernel of [A | -B]."""
        a, b = self.basis(), other.basis()
        cols = [dict(v) for v in a] + [{k: -x for k, x in v.items()} for v in b]
        ker = kernel_of_columns(cols, self.n, self.field)
        out = Echelon(self.n, self.field)
        for kv in ker:
            vec = {}
            for i, c in kv.items():
                if i < len(a):
                    for k, x in a[i].items():
                        vec[k] = vec.get(k, 0) + c * x
            out.add(vec)
        return out


def kernel_of_rows(rows, ncols, field=QQ):
    """Basis (sparse dicts) of {x : r.x = 0 for every sparse row r}."""
    e = Echelon(ncols, field)
    for r in rows:
        e.add(r)
    one = field.one
    out = []
    for f in e.complement():
        v = {f: one}
        for pc, row in e.rows.items():
            x = row.get(f)
            if x:
                v[pc] = -x
        out.append(v)
    return out


def kernel_of_columns(cols, nrows, field=QQ):
    """Kernel of the matrix whose columns are the given sparse vectors."""
    rows = [dict() for _ in range(nrows)]
    for j, c in enumerate(cols):
        for i, x in c.items():
            if x:
                rows[i][j] = x
    return kernel_of_rows(rows, len(cols), field)


def rank(m):
    e = Echelon(m.ncols, m.field)
    for r in m.sparse_rows():
        e.add(r)
    return e.dim


def kernel_basis(m):
    """Matrix whose columns form a basis of ker m."""
    ker = kernel_of_rows(m.sparse_rows(), m.ncols, m.field)
    return Matrix.from_columns(ker, m.ncols, m.field)


def solve(a, b):
    """Some x with a @ x == b; raises NoSolution if none exists."""
    if a.nrows != b.nrows:
        raise ValueError("solve: row mismatch %d vs %d" % (a.nrows, b.nrows))
    n = a.ncols
    e = Echelon(n + b.ncols, a.field)
    for ra, rb in zip(a.rows, b.rows):
        row = {j: x for j, x in enumerate(ra) if x}
        row.update({n + j: x for j, x in enumerate(rb) if x})
        e.add(row)
    if any(p >= n for p in e.rows):
        raise NoSolution("inconsistent linear system")
    x = Matrix.zeros(n, b.ncols, a.field)
    for p, row in e.rows.items():
        for k, v in row.items():
            if k >= n:
                x.rows[p][k - n] = v
    return x


def is_invertible(m):
    return m.nrows == m.ncols and rank(m) == m.nrows


def inverse(m):
    if not is_invertible(m):
        raise NoSolution("matrix is singular")
    return solve(m, Matrix.identity(m.nrows, m.field))


def dense(vec, n, field=QQ):
    z = field.zero
    out = [z] * n
    for k, x in vec.items():
        out[k] = x
    return out


def sparse(vec):
    return {k: x for k, x in enumerate(vec) if x}
