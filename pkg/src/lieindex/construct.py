"""Constructors for the algebras and elements the verification suites use.

Matrix realizations of the classical families use the antidiagonal
symmetric form for so_n and the antidiagonal symplectic form for sp_2n,
so that the upper-triangular matrices in the algebra form a Borel
subalgebra and parabolic subalgebras are plain block conditions.

The Chevalley constructor works from a Cartan matrix: positive roots are
enumerated by root strings, structure constants are fixed by the
extraspecial-pair convention, and root vectors are then rescaled so that
the Killing form pairs e_a with e_{-a} to 1.

Nilpotent representatives for a partition are built directly from Jordan
blocks in type A.  For types B, C, D the element is found inside the
degree-2 piece of the grading defined by the partition's diagonal
semisimple element, by searching for a point whose bracket with the
degree-0 piece fills all of degree 2; the Jordan type of the result is
then verified exactly, so the search can never return a wrong orbit.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactla import QMatrix, Subspace, frac, kernel, rank, solve
from .liecore import (
    Element,
    LieAlgebra,
    ad,
    bracket,
    killing,
    validate,
)

SparseMat = dict[tuple[int, int], Fraction]


class InadmissiblePartition(ValueError):
    pass


class NotNilpotent(ValueError):
    pass


class CompletionFailed(RuntimeError):
    """The triple completion failed; for valid input this is a bug."""


class InvalidCartanMatrix(ValueError):
    pass


class InvalidSpec(ValueError):
    pass


# --------------------------------------------------------------------------
# Partitions and classical types


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts):
            raise ValueError("parts must be positive")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError("parts must be weakly decreasing")

    @classmethod
    def parse(cls, text: str) -> "Partition":
        return cls(tuple(int(p) for p in text.split(",")))

    @property
    def total(self) -> int:
        return sum(self.parts)

    def __str__(self):
        return ",".join(str(p) for p in self.parts)


@dataclass(frozen=True)
class ClassicalType:
    family: str
    rank: int

    def __post_init__(self):
        minimum = {"A": 1, "B": 2, "C": 2, "D": 3}
        if self.family not in minimum:
            raise ValueError(f"unknown classical family {self.family!r}")
        if self.rank < minimum[self.family]:
            raise ValueError(f"rank {self.rank} too small for type {self.family}")

    @property
    def matrix_size(self) -> int:
        r = self.rank
        return {"A": r + 1, "B": 2 * r + 1, "C": 2 * r, "D": 2 * r}[self.family]

    def __str__(self):
        return f"{self.family}{self.rank}"


def parse_type(text: str) -> "ClassicalType | str":
    """Parse "D4" / "G2" selectors; exceptional labels come back as strings."""
    family, rank = text[0].upper(), int(text[1:])
    if family in "ABCD":
        return ClassicalType(family, rank)
    if family in "EFG":
        return f"{family}{rank}"
    raise ValueError(f"cannot parse type selector {text!r}")


def _partitions(n: int, max_part: int | None = None) -> list[tuple[int, ...]]:
    if n == 0:
        return [()]
    cap = n if max_part is None else min(n, max_part)
    out = []
    for first in range(cap, 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return out


def admissible_partitions(t: ClassicalType) -> list[Partition]:
    """Partitions labelling nilpotent orbits of the given classical algebra.

    A: any partition of rank+1.  C: odd parts with even multiplicity.
    B/D: even parts with even multiplicity.  Very even partitions of type D
    label two orbits with identical numeric invariants; they appear once.
    """
    n = t.matrix_size
    if t.family == "A":
        ok = lambda lam: True
    elif t.family == "C":
        ok = lambda lam: all(lam.count(p) % 2 == 0 for p in set(lam) if p % 2 == 1)
    else:
        ok = lambda lam: all(lam.count(p) % 2 == 0 for p in set(lam) if p % 2 == 0)
    found = [Partition(lam) for lam in _partitions(n) if ok(lam)]
    return sorted(found, key=lambda q: q.parts, reverse=True)


def is_very_even(t: ClassicalType, lam: Partition) -> bool:
    return t.family == "D" and all(p % 2 == 0 for p in lam.parts)


# --------------------------------------------------------------------------
# Matrix realizations


def _smul(a: SparseMat, b: SparseMat) -> SparseMat:
    out: SparseMat = {}
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            if j == k:
                v = out.get((i, l), Fraction(0)) + x * y
                if v:
                    out[(i, l)] = v
                elif (i, l) in out:
                    del out[(i, l)]
    return out


def _scomm(a: SparseMat, b: SparseMat) -> SparseMat:
    out = _smul(a, b)
    for (i, j), x in _smul(b, a).items():
        v = out.get((i, j), Fraction(0)) - x
        if v:
            out[(i, j)] = v
        elif (i, j) in out:
            del out[(i, j)]
    return out


@dataclass(frozen=True)
class MatrixAlgebra:
    """A classical algebra together with its defining matrix realization."""

    family: str
    rank: int
    n: int
    algebra: LieAlgebra
    basis_mats: tuple
    rep_positions: tuple
    form: QMatrix | None

    def matrix_of(self, x: Element) -> SparseMat:
        out: SparseMat = {}
        for c, mat in zip(x.coords, self.basis_mats):
            if c:
                for pos, v in mat.items():
                    w = out.get(pos, Fraction(0)) + c * v
                    if w:
                        out[pos] = w
                    elif pos in out:
                        del out[pos]
        return out

    def element_from_matrix(self, m: SparseMat) -> Element:
        coords = self.expand(m)
        if coords is None:
            raise ValueError("matrix does not lie in the algebra")
        return self.algebra.element(coords)

    def expand(self, m: SparseMat) -> list[Fraction] | None:
        """Coordinates of a matrix in the defining basis, or None."""
        coords = [Fraction(0)] * self.algebra.dim
        if self.family == "A":
            diag = [m.get((i, i), Fraction(0)) for i in range(self.n)]
            if sum(diag):
                return None
            k = 0
            for (i, j) in self.rep_positions:
                if i == j:
                    coords[k] = sum(diag[: i + 1], Fraction(0))
                else:
                    coords[k] = m.get((i, j), Fraction(0))
                k += 1
        else:
            for k, (i, j) in enumerate(self.rep_positions):
                coords[k] = m.get((i, j), Fraction(0))
        # reconstruct to confirm membership
        check: SparseMat = {}
        for c, mat in zip(coords, self.basis_mats):
            if c:
                for pos, v in mat.items():
                    w = check.get(pos, Fraction(0)) + c * v
                    if w:
                        check[pos] = w
                    elif pos in check:
                        del check[pos]
        return coords if check == m else None

    def weight_of_position(self, weights: Sequence[Fraction], k: int) -> Fraction:
        i, j = self.rep_positions[k]
        return weights[i] - weights[j]


def _structure_constants(basis: list[SparseMat], expand) -> dict:
    brackets = {}
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            comm = _scomm(basis[a], basis[b])
            if not comm:
                continue
            coords = expand(comm)
            assert coords is not None, "bracket left the algebra (bad basis)"
            terms = [(k, c) for k, c in enumerate(coords) if c]
            if terms:
                brackets[(a, b)] = terms
    return brackets


@lru_cache(maxsize=None)
def classical(t: ClassicalType) -> MatrixAlgebra:
    """Matrix realization of sl/so/sp with the antidiagonal form convention."""
    n = t.matrix_size
    basis: list[SparseMat] = []
    positions: list[tuple[int, int]] = []
    labels: list[str] = []
    form = None
    if t.family == "A":
        for i in range(n):
            for j in range(n):
                if i != j:
                    basis.append({(i, j): Fraction(1)})
                    positions.append((i, j))
                    labels.append(f"E({i + 1},{j + 1})")
        for i in range(n - 1):
            basis.append({(i, i): Fraction(1), (i + 1, i + 1): Fraction(-1)})
            positions.append((i, i))
            labels.append(f"H({i + 1})")
    elif t.family in ("B", "D"):
        form = QMatrix(n, n, [[1 if i + j == n - 1 else 0 for j in range(n)]
                              for i in range(n)])
        for i in range(n):
            for j in range(n):
                if i + j < n - 1:
                    mat = {(i, j): Fraction(1)}
                    mi, mj = n - 1 - j, n - 1 - i
                    mat[(mi, mj)] = mat.get((mi, mj), Fraction(0)) - 1
                    basis.append(mat)
                    positions.append((i, j))
                    labels.append(f"X({i + 1},{j + 1})" if i != j else f"H({i + 1})")
    else:  # C
        half = n // 2
        sigma = [1 if i < half else -1 for i in range(n)]
        form = QMatrix(n, n, [[sigma[i] if i + j == n - 1 else 0 for j in range(n)]
                              for i in range(n)])
        for i in range(n):
            for j in range(n):
                if i + j < n - 1:
                    mat = {(i, j): Fraction(1)}
                    mi, mj = n - 1 - j, n - 1 - i
                    s = Fraction(-sigma[i] * sigma[j])
                    mat[(mi, mj)] = mat.get((mi, mj), Fraction(0)) + s
                    basis.append(mat)
                    positions.append((i, j))
                    labels.append(f"X({i + 1},{j + 1})" if i != j else f"H({i + 1})")
        for i in range(n):
            basis.append({(i, n - 1 - i): Fraction(1)})
            positions.append((i, n - 1 - i))
            labels.append(f"X({i + 1},{n - i})")
    out = MatrixAlgebra(t.family, t.rank, n, LieAlgebra(labels, {}),
                        tuple(basis), tuple(positions), form)
    # build the real table through a throwaway instance so expand() works
    brackets = _structure_constants(list(basis), out.expand)
    alg = LieAlgebra(labels, brackets)
    ma = MatrixAlgebra(t.family, t.rank, n, alg, tuple(basis), tuple(positions), form)
    if alg.dim <= 60:
        assert validate(alg), f"structure constants of {t} failed validation"
    return ma


def defining_eigenvalues(lam: Partition) -> list[int]:
    """h-eigenvalues on the defining module: m-1, m-3, ..., 1-m per part m."""
    eigs = []
    for m in lam.parts:
        eigs.extend(range(m - 1, -m, -2))
    return sorted(eigs, reverse=True)


def jordan_type(ma: MatrixAlgebra, e_mat: SparseMat) -> Partition:
    """Jordan type of a nilpotent matrix, from the ranks of its powers."""
    n = ma.n
    counts = []  # counts[k] = number of parts >= k+1
    power: SparseMat = {(i, i): Fraction(1) for i in range(n)}
    prev_rank = n
    while True:
        power = _smul(power, e_mat)
        r = _sparse_rank(power, n)
        counts.append(prev_rank - r)
        prev_rank = r
        if r == 0:
            break
    parts = []
    for j in range(counts[0]):
        parts.append(sum(1 for c in counts if c >= j + 1))
    return Partition(tuple(sorted(parts, reverse=True)))


def _sparse_rank(m: SparseMat, n: int) -> int:
    grid = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in m.items():
        grid[i][j] = v
    return rank(QMatrix(n, n, grid))


def _check_admissible(t: ClassicalType, lam: Partition) -> None:
    if lam.total != t.matrix_size:
        raise InadmissiblePartition(f"{lam} does not sum to {t.matrix_size}")
    if lam not in admissible_partitions(t):
        raise InadmissiblePartition(f"{lam} is not admissible for {t}")


def nilpotent_from_partition(ma: MatrixAlgebra, lam: Partition) -> Element:
    """A nilpotent element of the realization with Jordan type lam."""
    t = ClassicalType(ma.family, ma.rank)
    _check_admissible(t, lam)
    if ma.family == "A":
        mat: SparseMat = {}
        offset = 0
        for part in lam.parts:
            for k in range(part - 1):
                mat[(offset + k, offset + k + 1)] = Fraction(1)
            offset += part
        return ma.element_from_matrix(mat)
    if all(p == 1 for p in lam.parts):
        return ma.algebra.zero()
    eigs = defining_eigenvalues(lam)
    dim = ma.algebra.dim
    wt = [ma.weight_of_position(eigs, k) for k in range(dim)]
    g2 = [k for k in range(dim) if wt[k] == 2]
    g0 = [k for k in range(dim) if wt[k] == 0]
    L = ma.algebra
    unit = [[Fraction(1) if a == b else Fraction(0) for a in range(dim)]
            for b in range(dim)]
    # stable seed (hash() is randomized per process, which would break
    # cross-run determinism of the constructed representative)
    rng = random.Random(sum((i + 1) * p for i, p in enumerate(lam.parts)) * 7919
                        + ord(ma.family) * 131 + ma.rank)

    def is_dense_orbit_point(e_coords) -> bool:
        rows = []
        for k in g0:
            br = L.bracket_coords(unit[k], e_coords)
            rows.append([br[c] for c in g2])
        return rank(QMatrix.from_rows(rows, len(g2))) == len(g2)

    candidates = [[1] * len(g2)]
    for trial in range(400):
        bound = 1 + trial // 40
        candidates.append([rng.randint(-bound, bound) for _ in g2])
    for cand in candidates:
        e_coords = [Fraction(0)] * dim
        for c, k in zip(cand, g2):
            e_coords[k] = Fraction(c)
        if not any(e_coords):
            continue
        if not is_dense_orbit_point(e_coords):
            continue
        e = L.element(e_coords)
        if jordan_type(ma, ma.matrix_of(e)) == lam:
            return e
    raise CompletionFailed(f"no representative found for {t} {lam}")


# --------------------------------------------------------------------------
# sl2-triples


@dataclass(frozen=True)
class SL2Triple:
    e: Element
    h: Element
    f: Element

    def verify(self, L: LieAlgebra) -> bool:
        return (bracket(L, self.e, self.f) == self.h
                and bracket(L, self.h, self.e) == self.e.scale(2)
                and bracket(L, self.h, self.f) == self.f.scale(-2))


def is_ad_nilpotent(L: LieAlgebra, x: Element) -> bool:
    m = ad(L, x)
    r = rank(m)
    while r > 0:
        m = m @ m
        nr = rank(m)
        if nr == r:
            return False
        r = nr
    return True


def sl2_complete(L: LieAlgebra, e: Element) -> SL2Triple:
    """Complete a nonzero nilpotent e to a triple (e, h, f).

    Steps: pick h in the image of ad e with [h, e] = 2e; solve [e, z] = h;
    then correct f = z - u with u in the centraliser of e chosen so that
    [h, f] = -2f.  The correction equation (ad h + 2)u = [h, z] + 2z is
    solvable because ad h has nonnegative spectrum on the centraliser.
    """
    if e.is_zero() or not is_ad_nilpotent(L, e):
        raise NotNilpotent("sl2_complete needs a nonzero ad-nilpotent element")
    ad_e = ad(L, e)
    w = solve(ad_e @ ad_e, [-2 * c for c in e.coords])
    if w is None:
        raise CompletionFailed("no h with [h,e] = 2e inside Im(ad e)")
    h = bracket(L, e, L.element(w))
    z = solve(ad_e, h.coords)
    if z is None:
        raise CompletionFailed("[e,z] = h has no solution")
    z = L.element(z)
    zc = kernel(ad_e)
    rhs = bracket(L, h, z) + z.scale(2)
    rhs_in = zc.coords_in_basis(rhs.coords)
    if rhs_in is None:
        raise CompletionFailed("correction term left the centraliser")
    cols = []
    for row in zc.basis.data:
        img = L.bracket_coords(h.coords, row)
        img = [a + 2 * b for a, b in zip(img, row)]
        col = zc.coords_in_basis(img)
        if col is None:
            raise CompletionFailed("ad h does not preserve the centraliser")
        cols.append(col)
    op = QMatrix(zc.dim, zc.dim,
                 [[cols[j][i] for j in range(zc.dim)] for i in range(zc.dim)])
    u_coeff = solve(op, rhs_in)
    if u_coeff is None:
        raise CompletionFailed("(ad h + 2) not invertible on the centraliser")
    u = [Fraction(0)] * L.dim
    for c, row in zip(u_coeff, zc.basis.data):
        if c:
            u = [a + c * b for a, b in zip(u, row)]
    f = z - L.element(u)
    triple = SL2Triple(e, h, f)
    if not triple.verify(L):
        raise CompletionFailed("completed triple fails the bracket relations")
    return triple


# --------------------------------------------------------------------------
# Chevalley bases from Cartan data

_GRAM_BUILDERS = {}


@dataclass(frozen=True)
class RootDatum:
    label: str
    cartan: tuple[tuple[int, ...], ...]   # cartan[i][j] = 2(a_i,a_j)/(a_j,a_j)
    gram: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.cartan)


def root_datum(label: str) -> RootDatum:
    """Standard datum for a type label such as "A3", "G2", "E6"."""
    family, rank = label[0].upper(), int(label[1:])
    bounds = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 6, "F": 4, "G": 2}
    if family not in bounds or rank < bounds[family]:
        raise InvalidCartanMatrix(f"unsupported type {label!r}")
    if family in "EFG" and rank > {"E": 8, "F": 4, "G": 2}[family]:
        raise InvalidCartanMatrix(f"unsupported type {label!r}")
    norms = [Fraction(2)] * rank
    edges: dict[tuple[int, int], Fraction] = {}

    def chain(upto):
        for i in range(upto):
            edges[(i, i + 1)] = Fraction(-1)

    if family == "A":
        chain(rank - 1)
    elif family == "B":
        chain(rank - 1)
        norms[rank - 1] = Fraction(1)
    elif family == "C":
        chain(rank - 2) if rank > 2 else None
        norms[rank - 1] = Fraction(4)
        if rank >= 2:
            edges[(rank - 2, rank - 1)] = Fraction(-2)
    elif family == "D":
        chain(rank - 2)
        edges[(rank - 3, rank - 1)] = Fraction(-1)
    elif family == "E":
        # Bourbaki: node 2 hangs off node 4 (1-based); chain 1-3-4-5-...
        chain_nodes = [0] + list(range(2, rank))
        for a, b in zip(chain_nodes, chain_nodes[1:]):
            edges[(min(a, b), max(a, b))] = Fraction(-1)
        edges[(1, 3)] = Fraction(-1)
    elif family == "F":
        norms = [Fraction(2), Fraction(2), Fraction(1), Fraction(1)]
        edges[(0, 1)] = Fraction(-1)
        edges[(1, 2)] = Fraction(-1)
        edges[(2, 3)] = Fraction(-1, 2)
    else:  # G2, first root short
        norms = [Fraction(2), Fraction(6)]
        edges[(0, 1)] = Fraction(-3)
    gram = [[Fraction(0)] * rank for _ in range(rank)]
    for i in range(rank):
        gram[i][i] = norms[i]
    for (i, j), v in edges.items():
        gram[i][j] = v
        gram[j][i] = v
    cartan = [[int(2 * gram[i][j] / gram[j][j]) for j in range(rank)]
              for i in range(rank)]
    return RootDatum(label, tuple(tuple(r) for r in cartan),
                     tuple(tuple(r) for r in gram))


def _validate_datum(d: RootDatum) -> None:
    p = d.rank
    for i in range(p):
        if d.cartan[i][i] != 2:
            raise InvalidCartanMatrix("diagonal must be 2")
        for j in range(p):
            if i != j and d.cartan[i][j] > 0:
                raise InvalidCartanMatrix("off-diagonal entries must be <= 0")
            if i != j and (d.cartan[i][j] == 0) != (d.cartan[j][i] == 0):
                raise InvalidCartanMatrix("zero pattern must be symmetric")
    # positive definiteness of the symmetrization via leading minors
    g = [list(row) for row in d.gram]
    for k in range(1, p + 1):
        sub = QMatrix(k, k, [row[:k] for row in g[:k]])
        if _det(sub) <= 0:
            raise InvalidCartanMatrix("Cartan matrix is not of finite type")


def _det(m: QMatrix) -> Fraction:
    data = [list(r) for r in m.data]
    n = m.rows
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if data[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            data[c], data[piv] = data[piv], data[c]
            det = -det
        det *= data[c][c]
        inv = 1 / data[c][c]
        for i in range(c + 1, n):
            f = data[i][c] * inv
            if f:
                data[i] = [a - f * b for a, b in zip(data[i], data[c])]
    return det


@dataclass(frozen=True)
class ChevalleyAlgebra:
    """Chevalley realization: root vectors plus a Cartan in coroot scale."""

    datum: RootDatum
    algebra: LieAlgebra
    pos_roots: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def num_pos(self) -> int:
        return len(self.pos_roots)

    @property
    def highest_root(self) -> tuple[int, ...]:
        return self.pos_roots[-1]

    def root_index(self, root: tuple[int, ...]) -> int:
        m = self.num_pos
        try:
            return self.pos_roots.index(root)
        except ValueError:
            neg = tuple(-c for c in root)
            return m + self.pos_roots.index(neg)

    def root_vector(self, root: tuple[int, ...]) -> Element:
        return self.algebra.basis_element(self.root_index(root))

    def cartan_index(self, i: int) -> int:
        return 2 * self.num_pos + i


def _enumerate_positive_roots(d: RootDatum) -> list[tuple[int, ...]]:
    p = d.rank
    simple = [tuple(1 if k == i else 0 for k in range(p)) for i in range(p)]
    roots = set(simple)
    by_height = {1: list(simple)}
    height = 1
    while by_height.get(height):
        nxt = []
        for beta in by_height[height]:
            for j in range(p):
                pairing = sum(beta[i] * d.cartan[i][j] for i in range(p))
                down = 0
                cur = beta
                while True:
                    cur = tuple(a - b for a, b in zip(cur, simple[j]))
                    if cur in roots:
                        down += 1
                    else:
                        break
                if down - pairing > 0:
                    up = tuple(a + b for a, b in zip(beta, simple[j]))
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        height += 1
        if height > 200:
            raise InvalidCartanMatrix("root enumeration did not terminate")
        by_height[height] = nxt
    return sorted(roots, key=lambda r: (sum(r), r))


def _root_norm(d: RootDatum, beta: Sequence[int]) -> Fraction:
    p = d.rank
    return sum(beta[i] * beta[j] * d.gram[i][j] for i in range(p) for j in range(p))


@lru_cache(maxsize=None)
def chevalley(d: RootDatum) -> ChevalleyAlgebra:
    """Build the algebra over basis {e_root} + Cartan from the datum."""
    _validate_datum(d)
    p = d.rank
    pos = _enumerate_positive_roots(d)
    pos_set = set(pos)
    order = {r: k for k, r in enumerate(pos)}
    m = len(pos)

    def is_root(v):
        return v in pos_set or tuple(-c for c in v) in pos_set

    def p_val(alpha, beta):
        # largest k with beta - k*alpha a root
        k = 0
        cur = beta
        while True:
            cur = tuple(a - b for a, b in zip(cur, alpha))
            if is_root(cur) and any(cur):
                k += 1
            else:
                return k

    # extraspecial pairs and signs for positive special pairs
    nmap: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction] = {}

    def n_pos(alpha, beta):
        if order[alpha] > order[beta]:
            return -n_pos(beta, alpha)
        return nmap[(alpha, beta)]

    def n_any(x, y):
        s = tuple(a + b for a, b in zip(x, y))
        if not is_root(s) or not any(s):
            return Fraction(0)
        if x in pos_set and y in pos_set:
            return n_pos(x, y)
        nx = tuple(-c for c in x)
        ny = tuple(-c for c in y)
        if nx in pos_set and ny in pos_set:
            return -n_any(nx, ny)
        if x in pos_set:
            z = ny
            if s in pos_set:
                return -_ratio(d, s, x) * n_pos(z, s)
            sp = tuple(-c for c in s)
            return _ratio(d, sp, z) * n_pos(sp, x)
        return -n_any(y, x)

    def _ratio(dd, num_root, den_root):
        return _root_norm(dd, num_root) / _root_norm(dd, den_root)

    for gamma in pos:
        if sum(gamma) < 2:
            continue
        extra = None
        for alpha in pos:
            if order[alpha] >= order[gamma]:
                break
            beta = tuple(a - b for a, b in zip(gamma, alpha))
            if beta in pos_set:
                extra = (alpha, beta)
                break
        assert extra is not None
        a1, b1 = extra
        nmap[(a1, b1) if order[a1] < order[b1] else (b1, a1)] = \
            Fraction(p_val(a1, b1) + 1)
        for alpha in pos:
            if order[alpha] <= order[a1] or order[alpha] >= order[gamma]:
                continue
            beta = tuple(a - b for a, b in zip(gamma, alpha))
            if beta not in pos_set or order[alpha] > order[beta]:
                continue
            t2 = Fraction(0)
            d1 = tuple(a - b for a, b in zip(b1, alpha))
            if is_root(d1) and any(d1):
                t2 = (n_any(b1, tuple(-c for c in alpha))
                      * n_any(a1, tuple(-c for c in beta))
                      / _root_norm(d, d1))
            t3 = Fraction(0)
            d2 = tuple(a - b for a, b in zip(a1, alpha))
            if is_root(d2) and any(d2):
                t3 = (n_any(tuple(-c for c in alpha), a1)
                      * n_any(b1, tuple(-c for c in beta))
                      / _root_norm(d, d2))
            val = _root_norm(d, gamma) * (t2 + t3) / nmap[(a1, b1)]
            nmap[(alpha, beta)] = val

    # raw table on basis: positives, negatives, coroots
    def idx(root):
        if root in pos_set:
            return order[root]
        return m + order[tuple(-c for c in root)]

    labels = [f"x({','.join(map(str, r))})" for r in pos]
    labels += [f"x({','.join(str(-c) for c in r)})" for r in pos]
    labels += [f"h{i + 1}" for i in range(p)]
    dim = 2 * m + p
    brackets: dict[tuple[int, int], list[tuple[int, Fraction]]] = {}
    all_roots = pos + [tuple(-c for c in r) for r in pos]
    for a_i, alpha in enumerate(all_roots):
        for b_i in range(a_i + 1, len(all_roots)):
            beta = all_roots[b_i]
            s = tuple(x + y for x, y in zip(alpha, beta))
            if not any(s):
                # [x_a, x_{-a}] = coroot of a (a positive here since a_i < b_i)
                nrm = _root_norm(d, alpha)
                terms = [(2 * m + i, frac(alpha[i]) * d.gram[i][i] / nrm)
                         for i in range(p) if alpha[i]]
                brackets[(a_i, b_i)] = terms
            elif is_root(s):
                c = n_any(alpha, beta)
                if c:
                    brackets[(a_i, b_i)] = [(idx(s), c)]
    for i in range(p):
        hi = 2 * m + i
        for a_i, alpha in enumerate(all_roots):
            val = sum(alpha[k] * d.cartan[k][i] for k in range(p))
            if val:
                brackets[(hi, a_i)] = [(a_i, Fraction(val))]
    raw = LieAlgebra(labels, brackets)
    if raw.dim <= 60:
        assert validate(raw), f"Chevalley table for {d.label} failed validation"

    # rescale so the Killing form pairs e_r with e_{-r} to 1; the Cartan
    # basis becomes t_i = [e_i, e_{-i}], the Killing-dual of the i-th root
    phi = killing(raw)
    scales = [Fraction(1)] * dim
    for r_i in range(m):
        c = phi.gram.entry(r_i, m + r_i)
        assert c != 0
        scales[m + r_i] = 1 / c
    for i in range(p):
        simple = tuple(1 if k == i else 0 for k in range(p))
        c = phi.gram.entry(order[simple], m + order[simple])
        scales[2 * m + i] = 1 / c
    new_brackets: dict[tuple[int, int], list[tuple[int, Fraction]]] = {}
    for (i, j), row in raw._table.items():
        if i < j:
            terms = [(k, c * scales[i] * scales[j] / scales[k]) for k, c in row]
            new_brackets[(i, j)] = terms
    alg = LieAlgebra(labels, new_brackets)
    if alg.dim <= 60:
        assert validate(alg), f"rescaled table for {d.label} failed validation"
    return ChevalleyAlgebra(d, alg, tuple(pos))


def regular_nilpotent(ch: ChevalleyAlgebra) -> Element:
    """Sum of the simple-root vectors (all coefficients 1)."""
    coords = [Fraction(0)] * ch.algebra.dim
    for i in range(ch.rank):
        coords[ch.root_index(tuple(1 if k == i else 0 for k in range(ch.rank)))] = Fraction(1)
    return ch.algebra.element(coords)


def extreme_root_vectors(ch: ChevalleyAlgebra) -> tuple[Element, Element]:
    """Root vectors for the highest root and its negative (paired to 1)."""
    lam = ch.highest_root
    return ch.root_vector(lam), ch.root_vector(tuple(-c for c in lam))


# --------------------------------------------------------------------------
# Parabolic subalgebras


@dataclass(frozen=True)
class ParabolicSpec:
    composition: tuple[int, ...] | None = None
    levi_roots: frozenset | None = None

    @classmethod
    def from_composition(cls, comp: Sequence[int]) -> "ParabolicSpec":
        return cls(composition=tuple(comp))

    @classmethod
    def from_levi(cls, roots) -> "ParabolicSpec":
        return cls(levi_roots=frozenset(roots))


def parabolic(real, spec: ParabolicSpec) -> tuple[Subspace, Subspace, Subspace]:
    """(p, nilpotent radical, Levi) as subspaces of the realization.

    Matrix realizations take a block composition (palindromic for the
    so/sp families, where mirrored blocks pair under the form); Chevalley
    realizations take the subset of simple roots generating the Levi.
    """
    if isinstance(real, MatrixAlgebra):
        if spec.composition is None:
            raise InvalidSpec("matrix realizations need a block composition")
        comp = spec.composition
        if not comp or any(c <= 0 for c in comp) or sum(comp) != real.n:
            raise InvalidSpec(f"composition {comp} invalid for n={real.n}")
        if real.family != "A" and tuple(reversed(comp)) != comp:
            raise InvalidSpec("composition must be palindromic for so/sp")
        weights = []
        for b, size in enumerate(comp):
            weights.extend([Fraction(len(comp) - b)] * size)
        wt = [real.weight_of_position(weights, k) for k in range(real.algebra.dim)]
        dim = real.algebra.dim
    elif isinstance(real, ChevalleyAlgebra):
        if spec.levi_roots is None:
            raise InvalidSpec("Chevalley realizations need a simple-root subset")
        sub = spec.levi_roots
        if not sub <= set(range(1, real.rank + 1)):
            raise InvalidSpec("Levi subset out of range")
        dim = real.algebra.dim
        wt = []
        for k in range(dim):
            if k >= 2 * real.num_pos:
                wt.append(Fraction(0))
            else:
                root = (real.pos_roots[k] if k < real.num_pos
                        else tuple(-c for c in real.pos_roots[k - real.num_pos]))
                wt.append(Fraction(sum(c for i, c in enumerate(root, start=1)
                                       if i not in sub)))
    else:
        raise InvalidSpec(f"unsupported realization {type(real).__name__}")
    unit = QMatrix.identity(dim)
    p = Subspace.from_vectors(dim, [unit.row(k) for k in range(dim) if wt[k] >= 0])
    pu = Subspace.from_vectors(dim, [unit.row(k) for k in range(dim) if wt[k] > 0])
    levi = Subspace.from_vectors(dim, [unit.row(k) for k in range(dim) if wt[k] == 0])
    return p, pu, levi


def borel(real) -> tuple[Subspace, Subspace, Subspace]:
    if isinstance(real, MatrixAlgebra):
        return parabolic(real, ParabolicSpec.from_composition([1] * real.n))
    return parabolic(real, ParabolicSpec.from_levi(frozenset()))


# --------------------------------------------------------------------------
# Weighted Dynkin labels (classical recipes)


def weighted_dynkin(t: ClassicalType, lam: Partition) -> tuple[int, ...]:
    """Simple-root values of the dominant grading element of the orbit."""
    _check_admissible(t, lam)
    eigs = defining_eigenvalues(lam)
    r = t.rank
    if t.family == "A":
        labels = [eigs[i] - eigs[i + 1] for i in range(r)]
    elif t.family == "B":
        a = eigs[:r]
        labels = [a[i] - a[i + 1] for i in range(r - 1)] + [a[r - 1]]
    elif t.family == "C":
        a = eigs[:r]
        labels = [a[i] - a[i + 1] for i in range(r - 1)] + [2 * a[r - 1]]
    else:
        a = eigs[:r]
        labels = [a[i] - a[i + 1] for i in range(r - 1)] + [a[r - 2] + a[r - 1]]
    assert all(v in (0, 1, 2) for v in labels), \
        f"weighted labels {labels} outside {{0,1,2}} for {t} {lam}"
    return tuple(labels)


# --------------------------------------------------------------------------
# Search for nilpotents with a prescribed centraliser dimension


def nilpotent_search(real, target_dim_z: int, budget: int = 2000,
                     seed: int = 0) -> Element | None:
    """First nilpotent found with centraliser of the requested dimension.

    Tries 0/+1/-1 coefficient patterns on the positive part first, then
    seeded random small-integer combinations, up to `budget` candidates.
    """
    L = real.algebra
    if isinstance(real, ChevalleyAlgebra):
        pos_idx = list(range(real.num_pos))
    else:
        pos_idx = [k for k in range(L.dim)
                   if real.rep_positions[k][0] < real.rep_positions[k][1]]
    tried = 0
    for pattern in itertools.product((0, 1, -1), repeat=len(pos_idx)):
        if tried >= budget:
            return None
        if not any(pattern):
            continue
        tried += 1
        e = _from_pattern(L, pos_idx, pattern)
        if kernel(ad(L, e)).dim == target_dim_z and is_ad_nilpotent(L, e):
            return e
        if tried >= budget:
            return None
    rng = random.Random(seed)
    while tried < budget:
        tried += 1
        pattern = [rng.randint(-3, 3) for _ in pos_idx]
        if not any(pattern):
            continue
        e = _from_pattern(L, pos_idx, pattern)
        if kernel(ad(L, e)).dim == target_dim_z and is_ad_nilpotent(L, e):
            return e
    return None


def _from_pattern(L: LieAlgebra, pos_idx, pattern) -> Element:
    coords = [Fraction(0)] * L.dim
    for c, k in zip(pattern, pos_idx):
        coords[k] = Fraction(c)
    return L.element(coords)
