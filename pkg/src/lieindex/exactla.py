"""Exact linear algebra over the rationals: matrices, subspaces, pencils.

All arithmetic uses `fractions.Fraction`, so every rank, kernel and
subspace produced here is exact.  Subspace bases are kept in reduced
row-echelon form, which makes subspace equality plain structural equality.

A `MatrixPencil` is a matrix whose entries are linear forms in a set of
dual variables.  Its generic rank (the rank over the rational function
field) is computed either by seeded random evaluation -- a Schwartz-Zippel
argument bounds the failure probability by (size/coeff range) per trial --
or exactly, in certify mode, by fraction-free symbolic elimination.

Row reduction is fraction-free (Bareiss) on integer-scaled rows, with a
final rational normalisation pass; this keeps intermediate entries at
minor-of-the-input size instead of letting numerators explode.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Frac = Fraction

#: Largest pencil dimension for which certify mode attempts symbolic
#: elimination; above this the randomized path is used even when asked.
#: (Beyond this size the Bareiss minors of structure-constant pencils grow
#: into thousands of terms; callers needing certified results at larger
#: sizes use the kernel-field certificate in the index module instead.)
CERTIFY_DIM_LIMIT = 12


class AmbientMismatch(ValueError):
    """Subspace operands live in ambient spaces of different dimensions."""


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def fraction_to_str(x: Fraction) -> str:
    """Serialise as "p/q" (always with the slash, so parsing is uniform)."""
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(s: str) -> Fraction:
    return Fraction(s)


class QMatrix:
    """Dense immutable matrix of rationals.  0xn and nx0 shapes are legal."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence]):
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("shape mismatch")
        self.rows = rows
        self.cols = cols
        self.data = tuple(tuple(frac(x) for x in row) for row in data)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "QMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols required for a 0-row matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, [[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def vstack(cls, mats: Sequence["QMatrix"]) -> "QMatrix":
        if not mats:
            raise ValueError("vstack of nothing")
        cols = mats[0].cols
        if any(m.cols != cols for m in mats):
            raise ValueError("column mismatch in vstack")
        rows: list[Sequence] = []
        for m in mats:
            rows.extend(m.data)
        return cls(sum(m.rows for m in mats), cols, rows)

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.data[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.data)

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows,
                       [[self.data[i][j] for i in range(self.rows)]
                        for j in range(self.cols)])

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError("inner dimension mismatch")
        ot = other.transpose().data
        out = [[_dot(r, c) for c in ot] for r in self.data]
        return QMatrix(self.rows, other.cols, out)

    def mat_vec(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(_dot(r, v) for r in self.data)

    def is_zero(self) -> bool:
        return all(not x for row in self.data for x in row)

    def __eq__(self, other) -> bool:
        return (isinstance(other, QMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.data == other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols})"


def _dot(a: Sequence, b: Sequence) -> Fraction:
    s = Fraction(0)
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def _int_rows(data) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (rank-preserving)."""
    out = []
    for row in data:
        m = 1
        for x in row:
            if x:
                m = lcm(m, x.denominator)
        out.append([int(x * m) for x in row])
    return out


def _bareiss_echelon(mat: list[list[int]], cols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free forward elimination.  Returns (pivot rows, pivot cols).

    Entries stay integral throughout: every intermediate value is a minor
    of the integer input, and the Bareiss division is exact.
    """
    n = len(mat)
    r = 0
    prev = 1
    pivots: list[int] = []
    for c in range(cols):
        if r == n:
            break
        best = -1
        for i in range(r, n):
            v = mat[i][c]
            if v and (best < 0 or abs(v) < abs(mat[best][c])):
                best = i
        if best < 0:
            continue
        if best != r:
            mat[r], mat[best] = mat[best], mat[r]
        piv = mat[r][c]
        for i in range(r + 1, n):
            vic = mat[i][c]
            row_i = mat[i]
            row_r = mat[r]
            if vic:
                for j in range(c, cols):
                    row_i[j] = (piv * row_i[j] - vic * row_r[j]) // prev
            elif prev != 1 or piv != 1:
                for j in range(c, cols):
                    row_i[j] = (piv * row_i[j]) // prev
        pivots.append(c)
        prev = piv
        r += 1
    return mat[:r], pivots


def _rref(data, cols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row-echelon form (zero rows dropped) and pivot columns."""
    ech, pivots = _bareiss_echelon(_int_rows(data), cols)
    rows = [[Fraction(v) for v in row] for row in ech]
    for i in range(len(rows) - 1, -1, -1):
        c = pivots[i]
        piv = rows[i][c]
        if piv != 1:
            rows[i] = [x / piv for x in rows[i]]
        ri = rows[i]
        for k in range(i):
            f = rows[k][c]
            if f:
                rows[k] = [a - f * b for a, b in zip(rows[k], ri)]
    return rows, pivots


def rref(m: QMatrix) -> tuple[QMatrix, tuple[int, ...]]:
    rows, pivots = _rref(m.data, m.cols)
    return QMatrix(len(rows), m.cols, rows), tuple(pivots)


def rank(m: QMatrix) -> int:
    """Exact rank over the rationals (fraction-free elimination)."""
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _bareiss_echelon(_int_rows(m.data), m.cols)
    return len(pivots)


@dataclass(frozen=True)
class Subspace:
    """A linear subspace given by a reduced row-echelon basis.

    Invariants: basis rows are independent, pivots strictly increase, and
    two Subspace values are equal iff they are the same subspace.
    """

    ambient_dim: int
    basis: QMatrix

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise AmbientMismatch("vector length != ambient dimension")
        rows, _ = _rref([[frac(x) for x in v] for v in vecs], ambient_dim)
        return cls(ambient_dim, QMatrix(len(rows), ambient_dim, rows))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, QMatrix.zeros(0, ambient_dim))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, QMatrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> tuple[int, ...]:
        out = []
        for row in self.basis.data:
            for j, x in enumerate(row):
                if x:
                    out.append(j)
                    break
        return tuple(out)

    def reduce(self, v: Sequence) -> list[Fraction]:
        """Residual of v after eliminating along the basis rows."""
        w = [frac(x) for x in v]
        if len(w) != self.ambient_dim:
            raise AmbientMismatch("vector length != ambient dimension")
        for row, p in zip(self.basis.data, self.pivots):
            f = w[p]
            if f:
                w = [a - f * b for a, b in zip(w, row)]
        return w

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def coords_in_basis(self, v: Sequence) -> list[Fraction] | None:
        """Expansion of v in the echelon basis, or None if v is outside."""
        w = [frac(x) for x in v]
        coords = []
        for row, p in zip(self.basis.data, self.pivots):
            f = w[p]
            coords.append(f)
            if f:
                w = [a - f * b for a, b in zip(w, row)]
        return coords if not any(w) else None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis.data)


def contains(s: Subspace, v: Sequence) -> bool:
    return s.contains(v)


def subspace_sum(s: Subspace, t: Subspace) -> Subspace:
    if s.ambient_dim != t.ambient_dim:
        raise AmbientMismatch("ambient dimensions differ")
    return Subspace.from_vectors(s.ambient_dim, list(s.basis.data) + list(t.basis.data))


def subspace_intersect(s: Subspace, t: Subspace) -> Subspace:
    """Zassenhaus: reduce [S|S ; T|0]; rows with zero left half span s∩t."""
    if s.ambient_dim != t.ambient_dim:
        raise AmbientMismatch("ambient dimensions differ")
    n = s.ambient_dim
    block = [list(r) + list(r) for r in s.basis.data]
    block += [list(r) + [Fraction(0)] * n for r in t.basis.data]
    rows, _ = _rref(block, 2 * n)
    inter = [row[n:] for row in rows if not any(row[:n])]
    return Subspace.from_vectors(n, inter)


def is_direct(s: Subspace, t: Subspace) -> bool:
    return subspace_sum(s, t).dim == s.dim + t.dim


def quotient_map(s: Subspace) -> QMatrix:
    """Matrix of the projection ambient -> ambient/s in echelon coordinates.

    Coordinates on the quotient are the non-pivot coordinates of the
    residual after reduction along s.
    """
    n = s.ambient_dim
    pivset = set(s.pivots)
    free = [j for j in range(n) if j not in pivset]
    rows = []
    for nc in free:
        row = [Fraction(0)] * n
        row[nc] = Fraction(1)
        for brow, p in zip(s.basis.data, s.pivots):
            if brow[nc]:
                row[p] = -brow[nc]
        rows.append(row)
    return QMatrix(len(rows), n, rows)


def kernel(m: QMatrix) -> Subspace:
    """Null space {v : m v = 0}, dimension cols - rank."""
    rows, pivots = _rref(m.data, m.cols)
    pivset = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return Subspace.from_vectors(m.cols, basis)


def solve(a: QMatrix, b: Sequence) -> list[Fraction] | None:
    """Some x with a x = b, or None when the system is inconsistent."""
    if len(b) != a.rows:
        raise ValueError("rhs length != row count")
    aug = [list(row) + [frac(bv)] for row, bv in zip(a.data, b)]
    if a.rows == 0:
        return [Fraction(0)] * a.cols
    rows, pivots = _rref(aug, a.cols + 1)
    if pivots and pivots[-1] == a.cols:
        return None
    x = [Fraction(0)] * a.cols
    for row, p in zip(rows, pivots):
        x[p] = row[a.cols]
    return x


# --------------------------------------------------------------------------
# Matrix pencils


@dataclass(frozen=True)
class RandomCfg:
    """Seeded evaluation policy for generic-rank computations."""

    seed: int
    trials: int = 3
    coeff_bound: int = 1000
    certify: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.coeff_bound < 2:
            raise ValueError("coeff_bound must be >= 2")


class MatrixPencil:
    """Matrix whose (i,j) entry is a linear form in num_vars dual variables.

    Entries are stored as length-num_vars coefficient tuples.
    """

    __slots__ = ("rows", "cols", "num_vars", "entries")

    def __init__(self, rows: int, cols: int, num_vars: int, entries):
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError("shape mismatch")
        ent = tuple(tuple(tuple(frac(c) for c in cell) for cell in row)
                    for row in entries)
        for row in ent:
            for cell in row:
                if len(cell) != num_vars:
                    raise ValueError("coefficient vector has wrong length")
        self.rows = rows
        self.cols = cols
        self.num_vars = num_vars
        self.entries = ent

    @classmethod
    def zeros(cls, rows: int, cols: int, num_vars: int) -> "MatrixPencil":
        z = tuple(Fraction(0) for _ in range(num_vars))
        return cls(rows, cols, num_vars, [[z] * cols for _ in range(rows)])

    def __repr__(self):
        return f"MatrixPencil({self.rows}x{self.cols}, {self.num_vars} vars)"


def evaluate(p: MatrixPencil, xi: Sequence) -> QMatrix:
    """Entry-wise contraction of the coefficient vectors with xi."""
    if len(xi) != p.num_vars:
        raise ValueError("evaluation point has wrong length")
    xs = [frac(x) for x in xi]
    return QMatrix(p.rows, p.cols,
                   [[_dot(cell, xs) for cell in row] for row in p.entries])


def generic_rank(p: MatrixPencil, cfg: RandomCfg) -> int:
    """Generic rank of the pencil, i.e. max over xi of rank(evaluate(p, xi)).

    The randomized path returns the max over cfg.trials seeded integer
    points, a certified lower bound that equals the true generic rank
    except with Schwartz-Zippel failure probability at most
    (min(rows,cols)/(2*coeff_bound+1)) ** trials.  Certify mode removes
    the randomness entirely for pencils up to CERTIFY_DIM_LIMIT.
    """
    if cfg.certify and min(p.rows, p.cols) <= CERTIFY_DIM_LIMIT:
        return symbolic_rank(p)
    rng = random.Random(cfg.seed)
    best = 0
    bound = cfg.coeff_bound
    for _ in range(cfg.trials):
        xi = [rng.randint(-bound, bound) for _ in range(p.num_vars)]
        best = max(best, rank(evaluate(p, xi)))
    return best


# ---- symbolic generic rank -------------------------------------------------
#
# A Kronecker substitution xi_v -> t ** ((r+1) ** v), r = min(rows, cols),
# maps every r'xr' minor (per-variable degree <= r' <= r) injectively to a
# univariate polynomial, so the rank over Q(xi_1..xi_k) equals the rank of
# the substituted matrix over Q(t).  The latter is computed by fraction-free
# (Bareiss) elimination on sparse integer polynomials with Markowitz-style
# pivoting to limit fill-in.

Poly = dict[int, int]  # exponent -> integer coefficient, zero coeffs absent


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    out: Poly = {}
    if len(a) > len(b):
        a, b = b, a
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            elif e in out:
                del out[e]
    return out


def _psub(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) - c
        if v:
            out[e] = v
        elif e in out:
            del out[e]
    return out


def _pdivexact(a: Poly, b: Poly) -> Poly:
    """Exact division in Z[t]; the caller guarantees divisibility."""
    if not a:
        return {}
    eb = max(b)
    cb = b[eb]
    q: Poly = {}
    r = dict(a)
    while r:
        er = max(r)
        e = er - eb
        c = r[er] // cb
        if e < 0 or c * cb != r[er]:
            raise ArithmeticError("inexact polynomial division (elimination bug)")
        q[e] = c
        for eb2, cb2 in b.items():
            e2 = eb2 + e
            v = r.get(e2, 0) - c * cb2
            if v:
                r[e2] = v
            elif e2 in r:
                del r[e2]
    return q


def symbolic_rank(p: MatrixPencil) -> int:
    """Rank of the pencil over the rational function field, exactly."""
    if p.rows == 0 or p.cols == 0 or p.num_vars == 0:
        return 0
    base = min(p.rows, p.cols) + 1
    expo = [base ** v for v in range(p.num_vars)]
    cells: dict[tuple[int, int], Poly] = {}
    for i, row in enumerate(p.entries):
        scale = 1
        for cell in row:
            for c in cell:
                if c:
                    scale = lcm(scale, c.denominator)
        for j, cell in enumerate(row):
            poly = {}
            for v, c in enumerate(cell):
                if c:
                    poly[expo[v]] = int(c * scale)
            if poly:
                cells[(i, j)] = poly
    act_rows = set(range(p.rows))
    act_cols = set(range(p.cols))
    prev: Poly = {0: 1}
    rk = 0
    while cells:
        row_nnz: dict[int, int] = {}
        col_nnz: dict[int, int] = {}
        for (i, j) in cells:
            row_nnz[i] = row_nnz.get(i, 0) + 1
            col_nnz[j] = col_nnz.get(j, 0) + 1
        pick = min(cells, key=lambda ij: (len(cells[ij]),
                                          (row_nnz[ij[0]] - 1) * (col_nnz[ij[1]] - 1)))
        i0, j0 = pick
        piv = cells[pick]
        rk += 1
        act_rows.discard(i0)
        act_cols.discard(j0)
        col0 = {i: q for (i, j), q in cells.items() if j == j0 and i in act_rows}
        row0 = {j: q for (i, j), q in cells.items() if i == i0 and j in act_cols}
        new_cells: dict[tuple[int, int], Poly] = {}
        for (i, j), q in cells.items():
            if i not in act_rows or j not in act_cols:
                continue
            t = _pmul(piv, q)
            if i in col0 and j in row0:
                t = _psub(t, _pmul(col0[i], row0[j]))
            t = _pdivexact(t, prev)
            if t:
                new_cells[(i, j)] = t
        for i, ci in col0.items():
            for j, rj in row0.items():
                if (i, j) not in cells:
                    t = _pdivexact(_psub({}, _pmul(ci, rj)), prev)
                    if t:
                        new_cells[(i, j)] = t
        cells = new_cells
        prev = piv
    return rk
