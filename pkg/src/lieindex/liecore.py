"""Structure-constant Lie algebras over the rationals.

A `LieAlgebra` is a labelled basis plus a sparse bracket table
[b_i, b_j] = sum_k c_ijk b_k.  Everything downstream (centralisers,
normalisers, Killing form, induced subalgebra structures, semidirect
products) is exact linear algebra on top of that table.

Algebras are immutable after construction and all operations are pure,
so values can be shared freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactla import (
    QMatrix,
    Subspace,
    frac,
    fraction_from_str,
    fraction_to_str,
    kernel,
    quotient_map,
    rank,
    subspace_sum,
)

#: Constructors run the full O(dim^3) Jacobi validation up to this size;
#: larger algebras are validated on demand.
VALIDATE_DIM_LIMIT = 60


class AlgebraMismatch(ValueError):
    """Elements of different algebras were combined."""


class NotASubalgebra(ValueError):
    """The given subspace is not closed under the bracket."""


class NotInvariant(ValueError):
    """The given subspace is not stable under the requested action."""


SparseRow = tuple[tuple[int, Fraction], ...]


class LieAlgebra:
    """Finite-dimensional Lie algebra given by structure constants."""

    __slots__ = ("dim", "labels", "_table", "_ad_cache", "_killing_cache")

    def __init__(self, labels: Sequence[str],
                 brackets: dict[tuple[int, int], Iterable[tuple[int, object]]],
                 fill_antisymmetric: bool = True):
        """brackets maps (i, j) to the expansion of [b_i, b_j].

        With fill_antisymmetric (the default) only one orientation per pair
        is required; the other is derived.  Passing both orientations is
        allowed and kept verbatim, which lets `validate` detect bad tables.
        """
        self.dim = len(labels)
        self.labels = tuple(str(s) for s in labels)
        table: dict[tuple[int, int], SparseRow] = {}
        for (i, j), terms in brackets.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise ValueError("bracket index out of range")
            row = tuple((k, frac(c)) for k, c in terms if frac(c))
            if row:
                table[(i, j)] = row
        if fill_antisymmetric:
            for (i, j), row in list(table.items()):
                if (j, i) not in table:
                    table[(j, i)] = tuple((k, -c) for k, c in row)
        self._table = table
        self._ad_cache: dict[int, QMatrix] = {}
        self._killing_cache: BilinearForm | None = None

    # -- elements ----------------------------------------------------------

    def element(self, coords: Sequence) -> "Element":
        if len(coords) != self.dim:
            raise ValueError("coordinate length != dim")
        return Element(self, tuple(frac(x) for x in coords))

    def basis_element(self, k: int) -> "Element":
        coords = [Fraction(0)] * self.dim
        coords[k] = Fraction(1)
        return Element(self, tuple(coords))

    def zero(self) -> "Element":
        return Element(self, tuple(Fraction(0) for _ in range(self.dim)))

    # -- brackets ----------------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> SparseRow:
        return self._table.get((i, j), ())

    def bracket_coords(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        nz_u = [(i, x) for i, x in enumerate(u) if x]
        nz_v = [(j, y) for j, y in enumerate(v) if y]
        for i, x in nz_u:
            for j, y in nz_v:
                row = self._table.get((i, j))
                if row:
                    xy = x * y
                    for k, c in row:
                        out[k] += xy * c
        return out

    def ad_basis(self, i: int) -> QMatrix:
        """Matrix of y -> [b_i, y]; column j holds the coords of [b_i, b_j]."""
        m = self._ad_cache.get(i)
        if m is None:
            cols = []
            for j in range(self.dim):
                col = [Fraction(0)] * self.dim
                for k, c in self._table.get((i, j), ()):
                    col[k] += c
                cols.append(col)
            m = QMatrix(self.dim, self.dim,
                        [[cols[j][k] for j in range(self.dim)] for k in range(self.dim)])
            self._ad_cache[i] = m
        return m

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        items = []
        for (i, j), row in sorted(self._table.items()):
            if i < j:
                items.append([i, j, [[k, fraction_to_str(c)] for k, c in row]])
        return json.dumps({"dim": self.dim, "labels": list(self.labels),
                           "brackets": items}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "LieAlgebra":
        obj = json.loads(text)
        brackets = {}
        for i, j, terms in obj["brackets"]:
            brackets[(i, j)] = [(k, fraction_from_str(c)) for k, c in terms]
        alg = cls(obj["labels"], brackets)
        if alg.dim != obj["dim"]:
            raise ValueError("dim field disagrees with label count")
        return alg

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim})"


@dataclass(frozen=True)
class Element:
    algebra: LieAlgebra
    coords: tuple[Fraction, ...]

    def __add__(self, other: "Element") -> "Element":
        _same_algebra(self, other)
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        _same_algebra(self, other)
        return Element(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Element":
        return Element(self.algebra, tuple(-a for a in self.coords))

    def scale(self, c) -> "Element":
        c = frac(c)
        return Element(self.algebra, tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)


def _same_algebra(x: Element, y: Element) -> None:
    if x.algebra is not y.algebra:
        raise AlgebraMismatch("elements belong to different algebras")


@dataclass(frozen=True)
class Representation:
    """Action of an algebra on a module, one matrix per basis vector."""

    algebra: LieAlgebra
    module_dim: int
    actions: tuple[QMatrix, ...]

    def act(self, x: Element, v: Sequence) -> tuple[Fraction, ...]:
        _check_member(self.algebra, x)
        out = [Fraction(0)] * self.module_dim
        for i, c in enumerate(x.coords):
            if c:
                av = self.actions[i].mat_vec(v)
                out = [a + c * b for a, b in zip(out, av)]
        return tuple(out)

    def validate(self) -> bool:
        """rho([b_i,b_j]) == rho(b_i)rho(b_j) - rho(b_j)rho(b_i) on all pairs."""
        L = self.algebra
        for i in range(L.dim):
            for j in range(i + 1, L.dim):
                acc = [[Fraction(0)] * self.module_dim for _ in range(self.module_dim)]
                for k, c in L.bracket_basis(i, j):
                    for r in range(self.module_dim):
                        for s in range(self.module_dim):
                            acc[r][s] += c * self.actions[k].entry(r, s)
                lhs = QMatrix(self.module_dim, self.module_dim, acc)
                a, b = self.actions[i], self.actions[j]
                if lhs != _commutator(a, b):
                    return False
        return True


def _commutator(a: QMatrix, b: QMatrix) -> QMatrix:
    ab = a @ b
    ba = b @ a
    return QMatrix(a.rows, a.cols,
                   [[ab.entry(i, j) - ba.entry(i, j) for j in range(a.cols)]
                    for i in range(a.rows)])


@dataclass(frozen=True)
class BilinearForm:
    gram: QMatrix

    def pair(self, x: Sequence, y: Sequence) -> Fraction:
        gx = self.gram.mat_vec(y)
        s = Fraction(0)
        for a, b in zip(x, gx):
            if a and b:
                s += a * b
        return s

    def is_nondegenerate(self) -> bool:
        return rank(self.gram) == self.gram.rows


def _check_member(L: LieAlgebra, x: Element) -> None:
    if x.algebra is not L:
        raise AlgebraMismatch("element does not belong to this algebra")


def bracket(L: LieAlgebra, x: Element, y: Element) -> Element:
    _check_member(L, x)
    _check_member(L, y)
    return Element(L, tuple(L.bracket_coords(x.coords, y.coords)))


def ad(L: LieAlgebra, x: Element) -> QMatrix:
    """Matrix of y -> [x, y] in the algebra basis."""
    _check_member(L, x)
    acc = [[Fraction(0)] * L.dim for _ in range(L.dim)]
    for i, c in enumerate(x.coords):
        if c:
            m = L.ad_basis(i)
            for r in range(L.dim):
                row = m.data[r]
                arow = acc[r]
                for j in range(L.dim):
                    if row[j]:
                        arow[j] += c * row[j]
    return QMatrix(L.dim, L.dim, acc)


def killing(L: LieAlgebra) -> BilinearForm:
    """Gram matrix of (x, y) -> trace(ad x ad y) on the basis."""
    if L._killing_cache is not None:
        return L._killing_cache
    n = L.dim
    ads = [L.ad_basis(i) for i in range(n)]
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        ai = ads[i].data
        for j in range(i, n):
            aj = ads[j].data
            s = Fraction(0)
            for r in range(n):
                row = ai[r]
                for t in range(n):
                    if row[t] and aj[t][r]:
                        s += row[t] * aj[t][r]
            gram[i][j] = s
            gram[j][i] = s
    form = BilinearForm(QMatrix(n, n, gram))
    L._killing_cache = form
    return form


def killing_pair(L: LieAlgebra, x: Element, y: Element) -> Fraction:
    return killing(L).pair(x.coords, y.coords)


def validate(L: LieAlgebra) -> bool:
    """Antisymmetry on all pairs and the Jacobi identity on all triples."""
    n = L.dim
    for i in range(n):
        if L.bracket_basis(i, i):
            return False
        for j in range(i + 1, n):
            pos = dict(L.bracket_basis(i, j))
            neg = dict(L.bracket_basis(j, i))
            if set(pos) != set(neg) or any(pos[k] != -neg[k] for k in pos):
                return False
    unit = [[Fraction(1) if a == b else Fraction(0) for a in range(n)] for b in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            bij = L.bracket_coords(unit[i], unit[j])
            for k in range(j + 1, n):
                bjk = L.bracket_coords(unit[j], unit[k])
                bik = L.bracket_coords(unit[i], unit[k])
                total = L.bracket_coords(unit[i], bjk)
                t2 = L.bracket_coords(unit[j], bik)
                t3 = L.bracket_coords(unit[k], bij)
                if any(a - b + c for a, b, c in zip(total, t2, t3)):
                    return False
    return True


def centralizer(L: LieAlgebra, gens: Sequence[Element]) -> Subspace:
    """{x : [x, g] = 0 for all g in gens}, the kernel of the stacked ad maps.

    [x, g] = -ad(g) x, so stacking the ad matrices of the generators works.
    """
    if not gens:
        return Subspace.full(L.dim)
    mats = [ad(L, g) for g in gens]
    return kernel(QMatrix.vstack(mats))


def centralizer_of_subspace(L: LieAlgebra, s: Subspace) -> Subspace:
    return centralizer(L, [L.element(v) for v in s.basis.data]) if s.dim else Subspace.full(L.dim)


def normalizer(L: LieAlgebra, s: Subspace) -> Subspace:
    """{x : [x, v] in s for every v in s}.

    For each basis vector v the map x -> [x, v] followed by the projection
    modulo s must vanish; the normaliser is the joint kernel.
    """
    if s.ambient_dim != L.dim:
        raise AlgebraMismatch("subspace is not in this algebra")
    if s.dim == 0 or s.dim == L.dim:
        return Subspace.full(L.dim)
    q = quotient_map(s)
    blocks = []
    for v in s.basis.data:
        m = ad(L, L.element(v))
        # column j of -m is [b_j, v]
        blocks.append(q @ m)
    return kernel(QMatrix.vstack(blocks))


def center(L: LieAlgebra) -> Subspace:
    return centralizer(L, [L.basis_element(i) for i in range(L.dim)])


def is_bracket_closed(L: LieAlgebra, q: Subspace) -> bool:
    for i in range(q.dim):
        for j in range(i + 1, q.dim):
            br = L.bracket_coords(q.basis.data[i], q.basis.data[j])
            if not q.contains(br):
                return False
    return True


def centre_of_subspace(L: LieAlgebra, q: Subspace) -> Subspace:
    """{x in q : [x, q] = 0}; q must itself be a subalgebra."""
    if not is_bracket_closed(L, q):
        raise NotASubalgebra("subspace is not closed under the bracket")
    if q.dim == 0:
        return q
    rows = []
    for j in range(q.dim):
        vj = q.basis.data[j]
        cols = [L.bracket_coords(q.basis.data[i], vj) for i in range(q.dim)]
        rows.append(QMatrix(L.dim, q.dim,
                            [[cols[i][r] for i in range(q.dim)] for r in range(L.dim)]))
    ker = kernel(QMatrix.vstack(rows))
    vecs = []
    for c in ker.basis.data:
        v = [Fraction(0)] * L.dim
        for i, ci in enumerate(c):
            if ci:
                v = [a + ci * b for a, b in zip(v, q.basis.data[i])]
        vecs.append(v)
    return Subspace.from_vectors(L.dim, vecs)


@dataclass(frozen=True)
class Subalgebra:
    """A subalgebra restructured as a standalone algebra plus its embedding."""

    algebra: LieAlgebra
    ambient: LieAlgebra
    basis: Subspace

    def to_ambient(self, x: Element) -> Element:
        _check_member(self.algebra, x)
        v = [Fraction(0)] * self.ambient.dim
        for c, row in zip(x.coords, self.basis.basis.data):
            if c:
                v = [a + c * b for a, b in zip(v, row)]
        return self.ambient.element(v)

    def from_ambient(self, x: Element) -> Element:
        _check_member(self.ambient, x)
        coords = self.basis.coords_in_basis(x.coords)
        if coords is None:
            raise ValueError("element lies outside the subalgebra")
        return self.algebra.element(coords)


def induced_subalgebra(L: LieAlgebra, q: Subspace, check: bool = True) -> Subalgebra:
    """Structure constants of the bracket in q's echelon basis."""
    if q.ambient_dim != L.dim:
        raise AlgebraMismatch("subspace is not in this algebra")
    labels = [L.labels[p] for p in q.pivots]
    brackets = {}
    for i in range(q.dim):
        for j in range(i + 1, q.dim):
            br = L.bracket_coords(q.basis.data[i], q.basis.data[j])
            coords = q.coords_in_basis(br)
            if coords is None:
                raise NotASubalgebra("subspace is not closed under the bracket")
            brackets[(i, j)] = list(enumerate(coords))
    sub = LieAlgebra(labels, brackets)
    if check and sub.dim <= VALIDATE_DIM_LIMIT:
        assert validate(sub), "induced structure constants failed validation"
    return Subalgebra(sub, L, q)


def induced_rep(L: LieAlgebra, q: Subspace, v: Subspace,
                sub: Subalgebra | None = None) -> Representation:
    """Action of the subalgebra q on the q-stable subspace v."""
    if sub is None:
        sub = induced_subalgebra(L, q)
    actions = []
    for qb in q.basis.data:
        cols = []
        for vb in v.basis.data:
            br = L.bracket_coords(qb, vb)
            coords = v.coords_in_basis(br)
            if coords is None:
                raise NotInvariant("subspace is not stable under the subalgebra")
            cols.append(coords)
        actions.append(QMatrix(v.dim, v.dim,
                               [[cols[j][i] for j in range(v.dim)] for i in range(v.dim)]))
    return Representation(sub.algebra, v.dim, tuple(actions))


def semidirect(q: LieAlgebra, rho: Representation) -> LieAlgebra:
    """Semidirect product with the module as an abelian ideal (module first)."""
    if rho.algebra is not q:
        raise AlgebraMismatch("representation does not act for this algebra")
    m = rho.module_dim
    labels = [f"v{i}" for i in range(m)] + list(q.labels)
    brackets: dict[tuple[int, int], list[tuple[int, Fraction]]] = {}
    for i in range(q.dim):
        act = rho.actions[i]
        for j in range(m):
            col = [act.entry(r, j) for r in range(m)]
            terms = [(r, c) for r, c in enumerate(col) if c]
            if terms:
                brackets[(m + i, j)] = terms
    for (i, j), row in q._table.items():
        if i < j:
            brackets[(m + i, m + j)] = [(m + k, c) for k, c in row]
    out = LieAlgebra(labels, brackets)
    if out.dim <= VALIDATE_DIM_LIMIT:
        assert validate(out), "semidirect product failed validation"
    return out


def orthogonal_complement(L: LieAlgebra, s: Subspace, form: BilinearForm) -> Subspace:
    """{x : form(x, v) = 0 for all v in s}."""
    if s.dim == 0:
        return Subspace.full(L.dim)
    rows = [form.gram.mat_vec(v) for v in s.basis.data]
    return kernel(QMatrix.from_rows(rows, L.dim))


def span_of_brackets(L: LieAlgebra, s: Subspace, t: Subspace) -> Subspace:
    """The subspace [s, t] spanned by brackets of the two bases."""
    vecs = []
    for a in s.basis.data:
        for b in t.basis.data:
            vecs.append(L.bracket_coords(a, b))
    return Subspace.from_vectors(L.dim, vecs)
