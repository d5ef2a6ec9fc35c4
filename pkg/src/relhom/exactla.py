"""Exact integer linear algebra.

Smith normal forms with transforms, integer kernels and solvers, finitely
generated abelian groups in canonical form, chain complexes (plain and
presented-by-relations) with homology in normalized coordinates, and induced
maps on homology.  Everything runs on arbitrary-precision Python integers;
no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ValidationError


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


# ---------------------------------------------------------------------------
# Matrices


class IntMatrix:
    """Dense integer matrix, immutable after construction."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[int]], cols: Optional[int] = None):
        rows = tuple(tuple(int(x) for x in r) for r in data)
        if rows:
            ncols = len(rows[0])
            for r in rows:
                if len(r) != ncols:
                    raise ValidationError("ragged matrix rows")
            if cols is not None and cols != ncols:
                raise ValidationError(f"cols={cols} disagrees with row length {ncols}")
            cols = ncols
        elif cols is None:
            cols = 0
        self.rows = len(rows)
        self.cols = cols
        self.data = rows

    # -- constructors

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(((0,) * cols for _ in range(rows)), cols=cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(
            (tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), cols=n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        cols = [list(c) for c in columns]
        if rows is None:
            if not cols:
                raise ValidationError("from_columns needs rows= when no columns given")
            rows = len(cols[0])
        for c in cols:
            if len(c) != rows:
                raise ValidationError("column length mismatch")
        return cls(
            (tuple(c[i] for c in cols) for i in range(rows)), cols=len(cols)
        )

    @classmethod
    def column_vector(cls, v: Sequence[int]) -> "IntMatrix":
        return cls(((int(x),) for x in v), cols=1)

    # -- access

    def row(self, i: int) -> Tuple[int, ...]:
        return self.data[i]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    def columns(self) -> List[List[int]]:
        return [[r[j] for r in self.data] for j in range(self.cols)]

    def to_rows(self) -> List[List[int]]:
        return [list(r) for r in self.data]

    def entry(self, i: int, j: int) -> int:
        return self.data[i][j]

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in r) for r in self.data)

    # -- arithmetic

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValidationError(
                f"shape mismatch in product: {self.shape} @ {other.shape}"
            )
        ob = other.data
        out = []
        for r in self.data:
            row = [0] * other.cols
            for k, a in enumerate(r):
                if a:
                    brow = ob[k]
                    for j, b in enumerate(brow):
                        if b:
                            row[j] += a * b
            out.append(tuple(row))
        return IntMatrix(out, cols=other.cols)

    def apply(self, vec: Sequence[int]) -> List[int]:
        if len(vec) != self.cols:
            raise ValidationError("vector length mismatch")
        out = []
        for r in self.data:
            s = 0
            for a, x in zip(r, vec):
                if a and x:
                    s += a * x
            out.append(s)
        return out

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValidationError("shape mismatch in sum")
        return IntMatrix(
            (tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)),
            cols=self.cols,
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + other.scale(-1)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix((tuple(k * x for x in r) for r in self.data), cols=self.cols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            (tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)),
            cols=self.rows,
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValidationError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    # -- misc

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.cols, self.data))

    def __repr__(self) -> str:
        if self.rows * self.cols <= 36:
            return f"IntMatrix({[list(r) for r in self.data]})"
        return f"IntMatrix(<{self.rows}x{self.cols}>)"


def hstack(mats: Sequence[IntMatrix]) -> IntMatrix:
    rows = mats[0].rows
    for m in mats:
        if m.rows != rows:
            raise ValidationError("hstack row mismatch")
    return IntMatrix(
        (tuple(x for m in mats for x in m.data[i]) for i in range(rows)),
        cols=sum(m.cols for m in mats),
    )


def vstack(mats: Sequence[IntMatrix]) -> IntMatrix:
    cols = mats[0].cols
    for m in mats:
        if m.cols != cols:
            raise ValidationError("vstack column mismatch")
    return IntMatrix((r for m in mats for r in m.data), cols=cols)


def block_diag(mats: Sequence[IntMatrix]) -> IntMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    ro = co = 0
    for m in mats:
        for i, r in enumerate(m.data):
            orow = out[ro + i]
            for j, x in enumerate(r):
                if x:
                    orow[co + j] = x
        ro += m.rows
        co += m.cols
    return IntMatrix(out, cols=cols)


def _sparse_columns(mat: IntMatrix) -> List[Dict[int, int]]:
    cols: List[Dict[int, int]] = [dict() for _ in range(mat.cols)]
    for i, row in enumerate(mat.data):
        for j, x in enumerate(row):
            if x:
                cols[j][i] = x
    return cols


def _sparse_apply(cols_a: List[Dict[int, int]], vec: Dict[int, int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for j, x in vec.items():
        for i, a in cols_a[j].items():
            v = out.get(i, 0) + a * x
            if v:
                out[i] = v
            elif i in out:
                del out[i]
    return out


# ---------------------------------------------------------------------------
# Lattices


class LatticeAccumulator:
    """Triangular basis of an integer sublattice of Z^dim.

    Columns are sparse dicts; each basis column is keyed by its minimal
    nonzero row (its pivot).  Supports incremental insertion and exact
    membership tests.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.pivots: Dict[int, Dict[int, int]] = {}

    @staticmethod
    def _combine(a: Dict[int, int], ca: int, b: Dict[int, int], cb: int) -> Dict[int, int]:
        out = {} if ca == 0 else {k: ca * v for k, v in a.items()}
        if cb:
            for k, v in b.items():
                w = out.get(k, 0) + cb * v
                if w:
                    out[k] = w
                elif k in out:
                    del out[k]
        return out

    def insert(self, vec: Dict[int, int]) -> bool:
        """Add a vector to the lattice; return True if the lattice grew."""
        v = {k: x for k, x in vec.items() if x}
        grew = False
        while v:
            r = min(v)
            piv = self.pivots.get(r)
            if piv is None:
                self.pivots[r] = v
                return True
            p = piv[r]
            c = v[r]
            if c % p == 0:
                v = self._combine(v, 1, piv, -(c // p))
            else:
                g, x, y = xgcd(p, c)
                newpiv = self._combine(piv, x, v, y)
                v = self._combine(v, p // g, piv, -(c // g))
                self.pivots[r] = newpiv
                grew = True
        return grew

    def insert_dense(self, vec: Sequence[int]) -> bool:
        return self.insert({i: x for i, x in enumerate(vec) if x})

    def contains(self, vec: Sequence[int]) -> bool:
        v = {i: int(x) for i, x in enumerate(vec) if x}
        while v:
            r = min(v)
            piv = self.pivots.get(r)
            if piv is None:
                return False
            if v[r] % piv[r]:
                return False
            v = self._combine(v, 1, piv, -(v[r] // piv[r]))
        return True

    def basis_columns(self) -> List[Dict[int, int]]:
        return [self.pivots[r] for r in sorted(self.pivots)]

    def rank(self) -> int:
        return len(self.pivots)

    def is_all_of_ambient(self) -> bool:
        return len(self.pivots) == self.dim and all(
            abs(self.pivots[r][r]) == 1 for r in self.pivots
        )


def column_image_basis(mat: IntMatrix) -> IntMatrix:
    """A lattice basis of the column span of `mat`, as matrix columns."""
    acc = LatticeAccumulator(mat.rows)
    for col in _sparse_columns(mat):
        acc.insert(col)
    cols = []
    for c in acc.basis_columns():
        dense = [0] * mat.rows
        for i, x in c.items():
            dense[i] = x
        cols.append(dense)
    return IntMatrix.from_columns(cols, rows=mat.rows)


# ---------------------------------------------------------------------------
# Smith normal form engine


class _Eliminator:
    """Row/column elimination with optional transform tracking.

    Maintains D = R * A * C where R, C are unimodular.  Optionally tracks R,
    Rinv, C, Cinv, and mirrors Cinv's row operations onto an external matrix
    (keeping mirror = Cinv @ B for an initial B).
    """

    def __init__(
        self,
        mat: IntMatrix,
        *,
        track_r: bool = False,
        track_rinv: bool = False,
        track_c: bool = False,
        track_cinv: bool = False,
        mirror: Optional[List[List[int]]] = None,
    ):
        self.s = mat.to_rows()
        self.m = mat.rows
        self.n = mat.cols
        self.r = [[1 if i == j else 0 for j in range(self.m)] for i in range(self.m)] if track_r else None
        self.rinv = [[1 if i == j else 0 for j in range(self.m)] for i in range(self.m)] if track_rinv else None
        self.c = [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)] if track_c else None
        self.cinv = [[1 if i == j else 0 for j in range(self.n)] for i in range(self.n)] if track_cinv else None
        self.mirror = mirror
        self.rank = 0

    # -- row operations (S <- E S, R <- E R, Rinv <- Rinv E^-1)

    def row_swap(self, i: int, k: int):
        if i == k:
            return
        self.s[i], self.s[k] = self.s[k], self.s[i]
        if self.r is not None:
            self.r[i], self.r[k] = self.r[k], self.r[i]
        if self.rinv is not None:
            for row in self.rinv:
                row[i], row[k] = row[k], row[i]

    def row_neg(self, i: int):
        self.s[i] = [-x for x in self.s[i]]
        if self.r is not None:
            self.r[i] = [-x for x in self.r[i]]
        if self.rinv is not None:
            for row in self.rinv:
                row[i] = -row[i]

    def row_axpy(self, i: int, k: int, q: int):
        """row_i += q * row_k."""
        if not q:
            return
        si, sk = self.s[i], self.s[k]
        self.s[i] = [a + q * b for a, b in zip(si, sk)]
        if self.r is not None:
            ri, rk = self.r[i], self.r[k]
            self.r[i] = [a + q * b for a, b in zip(ri, rk)]
        if self.rinv is not None:
            for row in self.rinv:
                row[k] -= q * row[i]

    def row_pair(self, i: int, k: int, x: int, y: int, u: int, w: int):
        """(row_i, row_k) <- (x ri + y rk, u ri + w rk); requires det == 1."""
        si, sk = self.s[i], self.s[k]
        self.s[i] = [x * a + y * b for a, b in zip(si, sk)]
        self.s[k] = [u * a + w * b for a, b in zip(si, sk)]
        if self.r is not None:
            ri, rk = self.r[i], self.r[k]
            self.r[i] = [x * a + y * b for a, b in zip(ri, rk)]
            self.r[k] = [u * a + w * b for a, b in zip(ri, rk)]
        if self.rinv is not None:
            for row in self.rinv:
                a, b = row[i], row[k]
                row[i] = w * a - u * b
                row[k] = -y * a + x * b

    # -- column operations (S <- S F, C <- C F, Cinv <- F^-1 Cinv)

    def col_swap(self, j: int, l: int):
        if j == l:
            return
        for row in self.s:
            row[j], row[l] = row[l], row[j]
        if self.c is not None:
            for row in self.c:
                row[j], row[l] = row[l], row[j]
        if self.cinv is not None:
            self.cinv[j], self.cinv[l] = self.cinv[l], self.cinv[j]
        if self.mirror is not None:
            self.mirror[j], self.mirror[l] = self.mirror[l], self.mirror[j]

    def col_neg(self, j: int):
        for row in self.s:
            row[j] = -row[j]
        if self.c is not None:
            for row in self.c:
                row[j] = -row[j]
        if self.cinv is not None:
            self.cinv[j] = [-x for x in self.cinv[j]]
        if self.mirror is not None:
            self.mirror[j] = [-x for x in self.mirror[j]]

    def col_axpy(self, j: int, l: int, q: int):
        """col_j += q * col_l."""
        if not q:
            return
        for row in self.s:
            row[j] += q * row[l]
        if self.c is not None:
            for row in self.c:
                row[j] += q * row[l]
        if self.cinv is not None:
            cj, cl = self.cinv[j], self.cinv[l]
            self.cinv[l] = [b - q * a for a, b in zip(cj, cl)]
        if self.mirror is not None:
            mj, ml = self.mirror[j], self.mirror[l]
            self.mirror[l] = [b - q * a for a, b in zip(mj, ml)]

    def col_pair(self, j: int, l: int, x: int, y: int, u: int, w: int):
        """(col_j, col_l) <- (x cj + y cl, u cj + w cl); requires det == 1.

        The column transform F has F[j][j]=x, F[l][j]=y, F[j][l]=u,
        F[l][l]=w, so F^-1 acts on rows as (rj, rl) <- (w rj - u rl,
        -y rj + x rl)."""
        for row in self.s:
            a, b = row[j], row[l]
            row[j] = x * a + y * b
            row[l] = u * a + w * b
        if self.c is not None:
            for row in self.c:
                a, b = row[j], row[l]
                row[j] = x * a + y * b
                row[l] = u * a + w * b
        if self.cinv is not None:
            cj, cl = self.cinv[j], self.cinv[l]
            self.cinv[j] = [w * a - u * b for a, b in zip(cj, cl)]
            self.cinv[l] = [-y * a + x * b for a, b in zip(cj, cl)]
        if self.mirror is not None:
            mj, ml = self.mirror[j], self.mirror[l]
            self.mirror[j] = [w * a - u * b for a, b in zip(mj, ml)]
            self.mirror[l] = [-y * a + x * b for a, b in zip(mj, ml)]

    # -- pivoting

    def _find_pivot(self, k: int) -> Optional[Tuple[int, int]]:
        # smallest nonzero absolute value; ties broken by lowest (row, col)
        best = None
        best_abs = 0
        for i in range(k, self.m):
            row = self.s[i]
            for j in range(k, self.n):
                v = row[j]
                if v:
                    a = -v if v < 0 else v
                    if a == 1:
                        return (i, j)
                    if best is None or a < best_abs:
                        best = (i, j)
                        best_abs = a
        return best

    def _row_echelon_pass(self):
        """Row echelon with pivots moved onto the diagonal and entries above
        each pivot reduced into [0, pivot); keeps entries minor-bounded."""
        s, m, n = self.s, self.m, self.n
        r = 0
        for j in range(n):
            if r >= m:
                break
            # gcd-eliminate column j below row r down to a single pivot
            while True:
                nz = [i for i in range(r, m) if s[i][j]]
                if not nz:
                    break
                best = min(nz, key=lambda i: (abs(s[i][j]), i))
                self.row_swap(best, r)
                if s[r][j] < 0:
                    self.row_neg(r)
                p = s[r][j]
                done = True
                for i in range(r + 1, m):
                    v = s[i][j]
                    if v:
                        self.row_axpy(i, r, -(v // p))
                        if s[i][j]:
                            done = False
                if done:
                    break
            if r < m and s[r][j]:
                p = s[r][j]
                for i in range(r):
                    q = s[i][j] // p
                    if q:
                        self.row_axpy(i, r, -q)
                if j != r:
                    self.col_swap(j, r)
                r += 1

    def _col_echelon_pass(self):
        """Column echelon with pivots on the diagonal and entries left of
        each pivot reduced into [0, pivot)."""
        s, m, n = self.s, self.m, self.n
        c = 0
        for i in range(m):
            if c >= n:
                break
            while True:
                nz = [j for j in range(c, n) if s[i][j]]
                if not nz:
                    break
                best = min(nz, key=lambda j: (abs(s[i][j]), j))
                self.col_swap(best, c)
                if s[i][c] < 0:
                    self.col_neg(c)
                p = s[i][c]
                done = True
                for j in range(c + 1, n):
                    v = s[i][j]
                    if v:
                        self.col_axpy(j, c, -(v // p))
                        if s[i][j]:
                            done = False
                if done:
                    break
            if c < n and s[i][c]:
                p = s[i][c]
                for j in range(c):
                    q = s[i][j] // p
                    if q:
                        self.col_axpy(j, c, -q)
                if i != c:
                    self.row_swap(i, c)
                c += 1

    def _is_diagonal(self) -> bool:
        for i, row in enumerate(self.s):
            for j, v in enumerate(row):
                if v and i != j:
                    return False
        return True

    def diagonalize(self):
        """Diagonalize by alternating reduced echelon passes (entries stay
        bounded by minor sizes), with a direct pivot-clearing fallback."""
        for _ in range(80):
            self._row_echelon_pass()
            if self._is_diagonal():
                break
            self._col_echelon_pass()
            if self._is_diagonal():
                break
        else:
            self._diagonalize_by_clearing()
        s = self.s
        k = 0
        while k < min(self.m, self.n) and s[k][k]:
            if s[k][k] < 0:
                self.row_neg(k)
            k += 1
        self.rank = k

    def _diagonalize_by_clearing(self):
        s, m, n = self.s, self.m, self.n
        k = 0
        while k < m and k < n:
            piv = self._find_pivot(k)
            if piv is None:
                break
            self.row_swap(piv[0], k)
            self.col_swap(piv[1], k)
            while True:
                for i in range(k + 1, m):
                    b = s[i][k]
                    if not b:
                        continue
                    a = s[k][k]
                    if b % a == 0:
                        self.row_axpy(i, k, -(b // a))
                    else:
                        g, x, y = xgcd(a, b)
                        self.row_pair(k, i, x, y, -(b // g), a // g)
                for j in range(k + 1, n):
                    b = s[k][j]
                    if not b:
                        continue
                    a = s[k][k]
                    if b % a == 0:
                        self.col_axpy(j, k, -(b // a))
                    else:
                        g, x, y = xgcd(a, b)
                        self.col_pair(k, j, x, y, -(b // g), a // g)
                if not any(s[i][k] for i in range(k + 1, m)) and not any(
                    s[k][j] for j in range(k + 1, n)
                ):
                    break
            k += 1

    def make_divisible(self):
        s = self.s
        changed = True
        while changed:
            changed = False
            for t in range(self.rank - 1):
                a, b = s[t][t], s[t + 1][t + 1]
                if b % a:
                    self._divis_fix(t, t + 1)
                    changed = True

    def _divis_fix(self, i: int, j: int):
        s = self.s
        a, b = s[i][i], s[j][j]
        self.col_axpy(i, j, 1)
        g, x, y = xgcd(a, b)
        self.row_pair(i, j, x, y, -(b // g), a // g)
        yb = s[i][j]
        assert yb % g == 0
        self.col_axpy(j, i, -(yb // g))
        if s[i][i] < 0:
            self.row_neg(i)
        if s[j][j] < 0:
            self.row_neg(j)

    def diag(self) -> List[int]:
        return [self.s[t][t] for t in range(self.rank)]

    def s_matrix(self) -> IntMatrix:
        return IntMatrix(self.s, cols=self.n)


@dataclass(frozen=True)
class SmithForm:
    """Decomposition a == u @ s @ v with u, v unimodular and s diagonal
    with a positive divisibility chain d1 | d2 | ... followed by zeros."""

    u: IntMatrix
    s: IntMatrix
    v: IntMatrix

    @property
    def invariants(self) -> List[int]:
        return [
            self.s.entry(i, i)
            for i in range(min(self.s.rows, self.s.cols))
            if self.s.entry(i, i)
        ]


def smith_form(a: IntMatrix) -> SmithForm:
    eng = _Eliminator(a, track_rinv=True, track_cinv=True)
    eng.diagonalize()
    eng.make_divisible()
    return SmithForm(
        u=IntMatrix(eng.rinv, cols=a.rows),
        s=eng.s_matrix(),
        v=IntMatrix(eng.cinv, cols=a.cols),
    )


def smith_invariants(a: IntMatrix) -> List[int]:
    eng = _Eliminator(a)
    eng.diagonalize()
    eng.make_divisible()
    return eng.diag()


def rank_z(a: IntMatrix) -> int:
    eng = _Eliminator(a)
    eng.diagonalize()
    return eng.rank


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a basis of the saturated integer kernel lattice of a."""
    eng = _Eliminator(a, track_c=True)
    eng.diagonalize()
    cols = [[eng.c[i][j] for i in range(a.cols)] for j in range(eng.rank, a.cols)]
    return IntMatrix.from_columns(cols, rows=a.cols)


class IntSolver:
    """Repeated exact solving of a*x == b for a fixed integer matrix a."""

    def __init__(self, a: IntMatrix):
        eng = _Eliminator(a, track_r=True, track_c=True)
        eng.diagonalize()
        self.m, self.n = a.rows, a.cols
        self.rank = eng.rank
        self.diag = eng.diag()
        self._r = eng.r
        self._c = eng.c

    def solve(self, b: Sequence[int]) -> Optional[List[int]]:
        if len(b) != self.m:
            raise ValidationError("right-hand side length mismatch")
        y = []
        for i in range(self.rank):
            s = 0
            for a, x in zip(self._r[i], b):
                if a and x:
                    s += a * x
            d = self.diag[i]
            if s % d:
                return None
            y.append(s // d)
        for i in range(self.rank, self.m):
            s = 0
            for a, x in zip(self._r[i], b):
                if a and x:
                    s += a * x
            if s:
                return None
        out = [0] * self.n
        for j, yj in enumerate(y):
            if yj:
                for i in range(self.n):
                    v = self._c[i][j]
                    if v:
                        out[i] += v * yj
        return out


def solve_integer(a: IntMatrix, b: Sequence[int]) -> Optional[List[int]]:
    """Some integer solution of a*x == b, or None if none exists."""
    return IntSolver(a).solve(b)


# ---------------------------------------------------------------------------
# Finitely generated abelian groups


def _factorize(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _invariant_chain(cyclic_orders: Sequence[int]) -> Tuple[int, ...]:
    """Canonical divisibility chain of a direct sum of finite cyclic groups."""
    by_prime: Dict[int, List[int]] = {}
    for d in cyclic_orders:
        if d in (0, 1):
            continue
        for p, e in _factorize(d).items():
            by_prime.setdefault(p, []).append(e)
    if not by_prime:
        return ()
    depth = max(len(v) for v in by_prime.values())
    chain = []
    for k in range(depth):
        # k-th largest exponent of each prime
        d = 1
        for p, es in by_prime.items():
            es_sorted = sorted(es, reverse=True)
            if k < len(es_sorted):
                d *= p ** es_sorted[k]
        chain.append(d)
    chain.reverse()
    return tuple(chain)


class FgAbGroup:
    """Finitely generated abelian group Z^r + Z/d1 + ... in canonical form."""

    __slots__ = ("free_rank", "torsion")

    def __init__(self, free_rank: int = 0, torsion: Sequence[int] = ()):
        if free_rank < 0:
            raise ValidationError("negative free rank")
        self.free_rank = int(free_rank)
        self.torsion = _invariant_chain([int(d) for d in torsion])

    @classmethod
    def from_invariants(cls, invariants: Sequence[int], ambient_rank: int) -> "FgAbGroup":
        inv = [d for d in invariants if d]
        return cls(ambient_rank - len(inv), [d for d in inv if d > 1])

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls(0, ())

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def order(self) -> Optional[int]:
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    # presentation in normalized coordinates: torsion generators first
    def presentation_rank(self) -> int:
        return len(self.torsion) + self.free_rank

    def relation_matrix(self) -> IntMatrix:
        t = len(self.torsion)
        n = self.presentation_rank()
        cols = [[self.torsion[i] if r == i else 0 for r in range(n)] for i in range(t)]
        return IntMatrix.from_columns(cols, rows=n) if cols else IntMatrix.zeros(n, 0)

    def direct_sum(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup(
            self.free_rank + other.free_rank, list(self.torsion) + list(other.torsion)
        )

    def tensor(self, other: "FgAbGroup") -> "FgAbGroup":
        tors: List[int] = []
        for a in self.torsion:
            for b in other.torsion:
                g, _, _ = xgcd(a, b)
                tors.append(g)
        tors.extend(list(self.torsion) * other.free_rank)
        tors.extend(list(other.torsion) * self.free_rank)
        return FgAbGroup(self.free_rank * other.free_rank, tors)

    def tor(self, other: "FgAbGroup") -> "FgAbGroup":
        tors = []
        for a in self.torsion:
            for b in other.torsion:
                g, _, _ = xgcd(a, b)
                tors.append(g)
        return FgAbGroup(0, tors)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FgAbGroup)
            and self.free_rank == other.free_rank
            and self.torsion == other.torsion
        )

    def __hash__(self) -> int:
        return hash((self.free_rank, self.torsion))

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"FgAbGroup({self.free_rank}, {list(self.torsion)})"


# ---------------------------------------------------------------------------
# Homology of a pair of composable boundary matrices


def homology_group(dn: IntMatrix, dnp1: IntMatrix) -> FgAbGroup:
    """ker(dn)/im(dnp1) as an abstract group (fast path, no coordinates)."""
    if dn.cols != dnp1.rows:
        raise ValidationError("boundary shapes are not composable")
    b = dnp1
    if b.cols > b.rows:
        b = column_image_basis(b)
    r1 = rank_z(dn)
    inv = smith_invariants(b)
    free = dn.cols - r1 - len(inv)
    if free < 0:
        raise ValidationError("boundaries do not compose to zero")
    return FgAbGroup(free, [d for d in inv if d > 1])


class HomologyData:
    """Homology group at one degree with normalized coordinate data.

    Generators are ordered torsion-first by increasing invariant factor,
    then free generators.  Coordinates of torsion generators are reduced
    modulo the invariant factor.
    """

    def __init__(self, dn: IntMatrix, dnp1: IntMatrix):
        if dn.cols != dnp1.rows:
            raise ValidationError("boundary shapes are not composable")
        chain_rank = dn.cols
        b = dnp1
        if b.cols > b.rows:
            b = column_image_basis(b)
        mirror = b.to_rows() if b.cols else [[] for _ in range(chain_rank)]
        eng1 = _Eliminator(dn, track_c=True, track_cinv=True, mirror=mirror)
        eng1.diagonalize()
        r = eng1.rank
        z = chain_rank - r
        for i in range(r):
            if any(mirror[i]):
                raise ValidationError("boundaries do not compose to zero")
        bpp = IntMatrix(mirror[r:], cols=b.cols) if z else IntMatrix.zeros(0, b.cols)
        eng2 = _Eliminator(bpp, track_r=True, track_rinv=True)
        eng2.diagonalize()
        eng2.make_divisible()
        d = eng2.diag()
        r2 = eng2.rank
        surviving = [i for i in range(r2) if d[i] > 1] + list(range(r2, z))
        self.degree_rank = chain_rank
        self._r = r
        self._z = z
        self._cinv = eng1.cinv
        self._kernel_cols = [
            [eng1.c[i][r + j] for i in range(chain_rank)] for j in range(z)
        ]
        self._r2 = eng2.r
        self._r2inv = eng2.rinv
        self._orders = [d[i] if i < r2 else 0 for i in surviving]
        self._surviving = surviving
        self.group = FgAbGroup(
            z - r2, [d[i] for i in range(r2) if d[i] > 1]
        )

    def generator_cycles(self) -> List[List[int]]:
        """Cycle vectors (in chain coordinates) for the normalized generators."""
        out = []
        for idx in self._surviving:
            vec = [0] * self.degree_rank
            for j in range(self._z):
                u = self._r2inv[j][idx]
                if u:
                    col = self._kernel_cols[j]
                    for i in range(self.degree_rank):
                        if col[i]:
                            vec[i] += u * col[i]
            out.append(vec)
        return out

    def coords_of_cycle(self, vec: Sequence[int]) -> List[int]:
        if len(vec) != self.degree_rank:
            raise ValidationError("cycle vector length mismatch")
        y = []
        for i in range(self.degree_rank):
            s = 0
            for a, x in zip(self._cinv[i], vec):
                if a and x:
                    s += a * x
            y.append(s)
        for i in range(self._r):
            if y[i]:
                raise ValidationError("vector is not a cycle")
        ker = y[self._r:]
        out = []
        for pos, idx in enumerate(self._surviving):
            s = 0
            for a, x in zip(self._r2[idx], ker):
                if a and x:
                    s += a * x
            order = self._orders[pos]
            out.append(s % order if order else s)
        return out


# ---------------------------------------------------------------------------
# Chain complexes


class ChainComplex:
    """Bounded complex of free abelian groups with validated boundaries.

    Degrees run over a contiguous range; boundary(n) maps degree n to n-1.
    Out-of-range boundaries are zero maps of the appropriate shape.
    """

    def __init__(
        self,
        lo: int,
        ranks: Sequence[int],
        boundaries: Dict[int, IntMatrix],
        validate: bool = True,
    ):
        self.lo = lo
        self.ranks = list(int(r) for r in ranks)
        self.hi = lo + len(self.ranks) - 1
        self._boundaries = dict(boundaries)
        for n, mat in self._boundaries.items():
            if not (self.lo < n <= self.hi):
                raise ValidationError(f"boundary at degree {n} outside range")
            if mat.shape != (self.rank(n - 1), self.rank(n)):
                raise ValidationError(
                    f"boundary {n} has shape {mat.shape}, expected "
                    f"({self.rank(n - 1)}, {self.rank(n)})"
                )
        if validate:
            self._check_dd_zero()
        self._homology_cache: Dict[Tuple[int, bool], object] = {}

    def _check_dd_zero(self):
        for n in range(self.lo + 2, self.hi + 1):
            a = self.boundary(n - 1)
            b = self.boundary(n)
            if not a.cols or not b.cols:
                continue
            acols = _sparse_columns(a)
            for col in _sparse_columns(b):
                if _sparse_apply(acols, col):
                    raise ValidationError(f"boundary squared is nonzero at degree {n}")

    def rank(self, n: int) -> int:
        if self.lo <= n <= self.hi:
            return self.ranks[n - self.lo]
        return 0

    def boundary(self, n: int) -> IntMatrix:
        mat = self._boundaries.get(n)
        if mat is None:
            return IntMatrix.zeros(self.rank(n - 1), self.rank(n))
        return mat

    def homology(self, n: int, coords: bool = False):
        """FgAbGroup at degree n, or HomologyData when coords is True."""
        key = (n, coords)
        if key not in self._homology_cache:
            dn = self.boundary(n)
            dnp1 = self.boundary(n + 1)
            if coords:
                self._homology_cache[key] = HomologyData(dn, dnp1)
            else:
                self._homology_cache[key] = homology_group(dn, dnp1)
        return self._homology_cache[key]

    def homology_data(self, n: int) -> HomologyData:
        return self.homology(n, coords=True)


class ChainMap:
    """Degree-preserving (up to a shift) map of chain complexes."""

    def __init__(
        self,
        source: ChainComplex,
        target: ChainComplex,
        components: Dict[int, IntMatrix],
        shift: int = 0,
        validate: bool = True,
    ):
        self.source = source
        self.target = target
        self.shift = shift
        self.components = dict(components)
        for n, mat in self.components.items():
            want = (target.rank(n + shift), source.rank(n))
            if mat.shape != want:
                raise ValidationError(
                    f"chain map component {n} has shape {mat.shape}, expected {want}"
                )
        if validate:
            self._check_commutes()

    def component(self, n: int) -> IntMatrix:
        mat = self.components.get(n)
        if mat is None:
            return IntMatrix.zeros(self.target.rank(n + self.shift), self.source.rank(n))
        return mat

    def _check_commutes(self):
        for n in range(self.source.lo + 1, self.source.hi + 1):
            left = self.target.boundary(n + self.shift) @ self.component(n)
            right = self.component(n - 1) @ self.source.boundary(n)
            if left != right:
                raise ValidationError(f"chain map does not commute at degree {n}")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        comps = {}
        for n in range(other.source.lo, other.source.hi + 1):
            comps[n] = self.component(n + other.shift) @ other.component(n)
        return ChainMap(
            other.source, self.target, comps, shift=self.shift + other.shift,
            validate=False,
        )


def induced_map(f: ChainMap, n: int) -> IntMatrix:
    """Matrix of H_n(f) in the normalized homology coordinates."""
    src = f.source.homology_data(n)
    tgt = f.target.homology_data(n + f.shift)
    comp = f.component(n)
    cols = [tgt.coords_of_cycle(comp.apply(c)) for c in src.generator_cycles()]
    nrows = tgt.group.presentation_rank()
    return IntMatrix.from_columns(cols, rows=nrows)


# -- maps between finitely generated abelian groups in canonical coordinates


def hom_cokernel(mat: IntMatrix, target: FgAbGroup) -> FgAbGroup:
    rel = target.relation_matrix()
    stacked = hstack([mat, rel]) if rel.cols else mat
    inv = smith_invariants(stacked)
    return FgAbGroup.from_invariants(inv, target.presentation_rank())


def hom_kernel(mat: IntMatrix, source: FgAbGroup, target: FgAbGroup) -> FgAbGroup:
    reln = target.relation_matrix()
    stacked = hstack([mat, reln]) if reln.cols else mat
    ker = kernel_basis(stacked)
    na = source.presentation_rank()
    acc = LatticeAccumulator(na)
    for j in range(ker.cols):
        acc.insert({i: ker.entry(i, j) for i in range(na) if ker.entry(i, j)})
    basis = acc.basis_columns()
    lat = IntMatrix.from_columns(
        [[c.get(i, 0) for i in range(na)] for c in basis], rows=na
    )
    # kernel subgroup = lat / source relations; express relations in lat basis
    rel_a = source.relation_matrix()
    if lat.cols == 0:
        return FgAbGroup.trivial()
    solver = IntSolver(lat)
    rel_cols = []
    for j in range(rel_a.cols):
        sol = solver.solve(rel_a.column(j))
        if sol is None:
            raise ValidationError("map does not kill source relations")
        rel_cols.append(sol)
    relmat = (
        IntMatrix.from_columns(rel_cols, rows=lat.cols)
        if rel_cols
        else IntMatrix.zeros(lat.cols, 0)
    )
    inv = smith_invariants(relmat)
    return FgAbGroup.from_invariants(inv, lat.cols)


def is_isomorphism(mat: IntMatrix, source: FgAbGroup, target: FgAbGroup) -> bool:
    return (
        hom_kernel(mat, source, target).is_trivial()
        and hom_cokernel(mat, target).is_trivial()
    )


def is_zero_map(mat: IntMatrix, target: FgAbGroup) -> bool:
    t = len(target.torsion)
    for j in range(mat.cols):
        for i in range(mat.rows):
            x = mat.entry(i, j)
            if i < t:
                if x % target.torsion[i]:
                    return False
            elif x:
                return False
    return True


def sequence_exact_at(
    f: IntMatrix,
    a: FgAbGroup,
    b: FgAbGroup,
    g: IntMatrix,
    c: FgAbGroup,
) -> Tuple[bool, str]:
    """Is im(f: A -> B) equal to ker(g: B -> C)?  Maps in canonical coords."""
    comp = g @ f
    if not is_zero_map(comp, c):
        return False, "composite is nonzero"
    # lattice of cycles: x with g x in relations of C
    rel_c = c.relation_matrix()
    stacked = hstack([g, rel_c]) if rel_c.cols else g
    ker = kernel_basis(stacked)
    nb = b.presentation_rank()
    rel_b = b.relation_matrix()
    image_cols = [f.column(j) for j in range(f.cols)] + [
        rel_b.column(j) for j in range(rel_b.cols)
    ]
    if image_cols:
        img = IntMatrix.from_columns(image_cols, rows=nb)
        solver = IntSolver(img)
    else:
        solver = None
    for j in range(ker.cols):
        v = [ker.entry(i, j) for i in range(nb)]
        if solver is None:
            if any(v):
                return False, "kernel not contained in image"
        elif solver.solve(v) is None:
            return False, "kernel not contained in image"
    return True, ""


# ---------------------------------------------------------------------------
# Presented complexes (chain groups given by free covers plus relations)


class PresentedComplex:
    """Complex of finitely presented abelian groups.

    Each degree carries a free cover of some rank and a list of relation
    blocks (row offset, relation matrix for the rows of that slot).  The
    boundaries are matrices between the free covers that commute with the
    relations.  Homology is computed on an equivalent complex of free
    groups (the total complex of the two-row resolution).
    """

    def __init__(
        self,
        lo: int,
        ranks: Sequence[int],
        boundaries: Dict[int, IntMatrix],
        relation_blocks: Optional[Dict[int, List[Tuple[int, IntMatrix]]]] = None,
    ):
        self.lo = lo
        self.ranks = [int(r) for r in ranks]
        self.hi = lo + len(self.ranks) - 1
        self._boundaries = dict(boundaries)
        self._relations: Dict[int, IntMatrix] = {}
        blocks = relation_blocks or {}
        for n in range(self.lo, self.hi + 1):
            rows = self.rank(n)
            blist = blocks.get(n, [])
            cols: List[List[int]] = []
            for offset, mat in blist:
                for j in range(mat.cols):
                    col = [0] * rows
                    for i in range(mat.rows):
                        v = mat.entry(i, j)
                        if v:
                            col[offset + i] = v
                    cols.append(col)
            if cols:
                reduced = column_image_basis(
                    IntMatrix.from_columns(cols, rows=rows)
                )
                self._relations[n] = reduced
            else:
                self._relations[n] = IntMatrix.zeros(rows, 0)
        for n, mat in self._boundaries.items():
            want = (self.rank(n - 1), self.rank(n))
            if mat.shape != want:
                raise ValidationError(
                    f"presented boundary {n} has shape {mat.shape}, expected {want}"
                )
        self._rho_solvers: Dict[int, IntSolver] = {}
        self._cone: Optional[ChainComplex] = None
        self._cone_rel_counts: Dict[int, int] = {}

    def rank(self, n: int) -> int:
        if self.lo <= n <= self.hi:
            return self.ranks[n - self.lo]
        return 0

    def boundary(self, n: int) -> IntMatrix:
        mat = self._boundaries.get(n)
        if mat is None:
            return IntMatrix.zeros(self.rank(n - 1), self.rank(n))
        return mat

    def relations(self, n: int) -> IntMatrix:
        mat = self._relations.get(n)
        if mat is None:
            return IntMatrix.zeros(self.rank(n), 0)
        return mat

    def has_relations(self) -> bool:
        return any(m.cols for m in self._relations.values())

    def _rho_solver(self, n: int) -> IntSolver:
        if n not in self._rho_solvers:
            self._rho_solvers[n] = IntSolver(self.relations(n))
        return self._rho_solvers[n]

    def solve_relations(self, n: int, vec: Sequence[int]) -> List[int]:
        sol = self._rho_solver(n).solve(vec)
        if sol is None:
            raise ValidationError(
                f"vector is not in the relation lattice at degree {n}"
            )
        return sol

    def cone(self) -> ChainComplex:
        """Free complex with the same homology in degrees <= hi (cached).

        Extends one degree above the top so that the top-degree relations
        are imposed on the top chain group.
        """
        if self._cone is not None:
            return self._cone
        if not self.has_relations():
            ranks = self.ranks
            bounds = {
                n: self.boundary(n)
                for n in range(self.lo + 1, self.hi + 1)
            }
            self._cone = ChainComplex(self.lo, ranks, bounds, validate=True)
            self._cone_rel_counts = {n: 0 for n in range(self.lo, self.hi + 2)}
            return self._cone
        ranks = []
        for n in range(self.lo, self.hi + 2):
            rc = self.relations(n - 1).cols if n - 1 >= self.lo else 0
            self._cone_rel_counts[n] = rc
            ranks.append(self.rank(n) + rc)
        bounds: Dict[int, IntMatrix] = {}
        for n in range(self.lo + 1, self.hi + 2):
            d_n = self.boundary(n)
            rho_prev = self.relations(n - 1)
            rows_f = self.rank(n - 1)
            rows_r = self.relations(n - 2).cols if n - 2 >= self.lo else 0
            cols_f = self.rank(n)
            cols_r = self._cone_rel_counts[n]
            d_cols = _sparse_columns(d_n)
            dprev_cols = _sparse_columns(self.boundary(n - 1)) if n - 1 > self.lo else None
            out_cols: List[List[int]] = []
            # columns from F_n: (D x, E x) with rho_{n-2} E = -D_{n-1} D_n
            for j in range(cols_f):
                col = [0] * (rows_f + rows_r)
                for i, v in d_cols[j].items():
                    col[i] = v
                if rows_r and dprev_cols is not None:
                    dd = _sparse_apply(dprev_cols, d_cols[j])
                    if dd:
                        dense = [0] * self.rank(n - 2)
                        for i, v in dd.items():
                            dense[i] = -v
                        e = self.solve_relations(n - 2, dense)
                        for i, v in enumerate(e):
                            if v:
                                col[rows_f + i] = v
                out_cols.append(col)
            # columns from R_{n-1}: (rho r, -B r) with rho_{n-2} B = D_{n-1} rho_{n-1}
            for j in range(cols_r):
                col = [0] * (rows_f + rows_r)
                rho_col = rho_prev.column(j)
                for i, v in enumerate(rho_col):
                    if v:
                        col[i] = v
                if rows_r and dprev_cols is not None:
                    img = _sparse_apply(
                        dprev_cols, {i: v for i, v in enumerate(rho_col) if v}
                    )
                    if img:
                        dense = [0] * self.rank(n - 2)
                        for i, v in img.items():
                            dense[i] = v
                        bb = self.solve_relations(n - 2, dense)
                        for i, v in enumerate(bb):
                            if v:
                                col[rows_f + i] = -v
                out_cols.append(col)
            bounds[n] = IntMatrix.from_columns(
                out_cols, rows=rows_f + rows_r
            ) if out_cols else IntMatrix.zeros(rows_f + rows_r, 0)
        self._cone = ChainComplex(self.lo, ranks, bounds, validate=True)
        return self._cone

    def lift_cycle(self, n: int, vec: Sequence[int]) -> List[int]:
        """Lift a free-cover cycle (boundary lands in relations) to the cone."""
        cone = self.cone()
        rc = self._cone_rel_counts.get(n, 0)
        if rc == 0:
            return list(vec)
        d = self.boundary(n)
        img = d.apply(vec)
        r = self.solve_relations(n - 1, [-x for x in img])
        return list(vec) + r

    def homology(self, n: int, coords: bool = False):
        return self.cone().homology(n, coords=coords)

    def homology_data(self, n: int) -> HomologyData:
        return self.cone().homology(n, coords=True)


class PresentedChainMap:
    """Map of presented complexes given on free covers (commuting with the
    boundaries modulo relations)."""

    def __init__(
        self,
        source: PresentedComplex,
        target: PresentedComplex,
        components: Dict[int, IntMatrix],
    ):
        self.source = source
        self.target = target
        self.components = dict(components)
        self._cone_map: Optional[ChainMap] = None

    def component(self, n: int) -> IntMatrix:
        mat = self.components.get(n)
        if mat is None:
            return IntMatrix.zeros(self.target.rank(n), self.source.rank(n))
        return mat

    def cone_map(self) -> ChainMap:
        if self._cone_map is not None:
            return self._cone_map
        src_cone = self.source.cone()
        tgt_cone = self.target.cone()
        comps: Dict[int, IntMatrix] = {}
        for n in range(self.source.lo, src_cone.hi + 1):
            f_n = self.component(n)
            src_rc = self.source.relations(n - 1).cols if n - 1 >= self.source.lo else 0
            tgt_rc = self.target.relations(n - 1).cols if n - 1 >= self.target.lo else 0
            rows = self.target.rank(n) + tgt_rc
            cols = self.source.rank(n) + src_rc
            out = [[0] * cols for _ in range(rows)]
            for i in range(f_n.rows):
                for j in range(f_n.cols):
                    v = f_n.entry(i, j)
                    if v:
                        out[i][j] = v
            if tgt_rc and n - 1 >= self.source.lo:
                # correction c_n: rho'_{n-1} c = f_{n-1} D_n - D'_n f_n
                dprime = self.target.boundary(n)
                dsrc = self.source.boundary(n)
                f_prev = self.component(n - 1)
                lhs = dprime @ f_n
                rhs = f_prev @ dsrc
                for j in range(self.source.rank(n)):
                    diff = [
                        rhs.entry(i, j) - lhs.entry(i, j)
                        for i in range(self.target.rank(n - 1))
                    ]
                    if any(diff):
                        cvec = self.target.solve_relations(n - 1, diff)
                        for i, v in enumerate(cvec):
                            if v:
                                out[self.target.rank(n) + i][j] = v
                # g_{n-1}: rho'_{n-1} g = f_{n-1} rho_{n-1}
                if src_rc:
                    rho_src = self.source.relations(n - 1)
                    mapped = f_prev @ rho_src
                    for j in range(src_rc):
                        col = [mapped.entry(i, j) for i in range(mapped.rows)]
                        gvec = self.target.solve_relations(n - 1, col)
                        for i, v in enumerate(gvec):
                            if v:
                                out[self.target.rank(n) + i][self.source.rank(n) + j] = v
            comps[n] = IntMatrix(out, cols=cols)
        self._cone_map = ChainMap(src_cone, tgt_cone, comps, validate=True)
        return self._cone_map

    def induced(self, n: int) -> IntMatrix:
        return induced_map(self.cone_map(), n)


def induced_map_presented(f: PresentedChainMap, n: int) -> IntMatrix:
    return f.induced(n)
