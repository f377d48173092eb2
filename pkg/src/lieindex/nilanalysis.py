"""Per-orbit analysis: gradings, centraliser chains, and the structure,
index and normaliser checks that the verification suites run orbit by
orbit.

Everything here takes a completed triple (e, h, f) and works with exact
subspace arithmetic.  Checks come in two flavours: asserted facts (a
failure is reported as status "fail" and makes a suite fail) and reported
conjecture values (status "reported", never a failure).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .exactla import (
    QMatrix,
    RandomCfg,
    Subspace,
    evaluate,
    is_direct,
    kernel,
    quotient_map,
    rank,
    solve,
    subspace_intersect,
    subspace_sum,
)
from .liecore import (
    Element,
    LieAlgebra,
    ad,
    bracket,
    centralizer,
    centralizer_of_subspace,
    centre_of_subspace,
    induced_rep,
    induced_subalgebra,
    killing,
    killing_pair,
    normalizer,
    orthogonal_complement,
    span_of_brackets,
)
from .construct import (
    ChevalleyAlgebra,
    MatrixAlgebra,
    Partition,
    SL2Triple,
    _smul,
    extreme_root_vectors,
    is_ad_nilpotent,
    is_very_even,
    nilpotent_from_partition,
    regular_nilpotent,
    sl2_complete,
)
from .index import (
    check_ideal_inequality,
    index_of,
    index_of_rep,
    kirillov_pencil,
)


class NotIntegerDiagonalizable(ValueError):
    pass


class CrossCheckFailed(RuntimeError):
    """Two independent computations of the same object disagreed: a bug."""


class SolveFailed(RuntimeError):
    pass


# --------------------------------------------------------------------------
# Gradings


@dataclass(frozen=True)
class GradedPieces:
    algebra: LieAlgebra
    pieces: dict[int, Subspace]

    def piece(self, i: int) -> Subspace:
        return self.pieces.get(i, Subspace.zero(self.algebra.dim))

    def degrees(self) -> list[int]:
        return sorted(self.pieces)

    def dims(self) -> dict[int, int]:
        return {i: s.dim for i, s in sorted(self.pieces.items())}

    def restrict(self, s: Subspace) -> dict[int, Subspace]:
        out = {}
        for i, g in self.pieces.items():
            inter = subspace_intersect(g, s)
            if inter.dim:
                out[i] = inter
        return out


def grading(L: LieAlgebra, h: Element) -> GradedPieces:
    """Integer eigenspace decomposition of ad h.

    Scans eigenvalues outward from 0 until the dimensions exhaust the
    algebra; raises NotIntegerDiagonalizable if they never do.
    """
    m = ad(L, h)
    pieces: dict[int, Subspace] = {}
    total = 0
    cap = 4 * L.dim + 8
    for magnitude in range(cap):
        for i in ((0,) if magnitude == 0 else (magnitude, -magnitude)):
            shifted = QMatrix(L.dim, L.dim,
                              [[m.entry(r, c) - (i if r == c else 0)
                                for c in range(L.dim)] for r in range(L.dim)])
            ker = kernel(shifted)
            if ker.dim:
                pieces[i] = ker
                total += ker.dim
        if total == L.dim:
            break
    if total != L.dim:
        raise NotIntegerDiagonalizable(
            "ad h is not diagonalizable with integer eigenvalues")
    g = GradedPieces(L, pieces)
    if L.dim <= 40:
        _check_bracket_grading(L, g)
    return g


def _check_bracket_grading(L: LieAlgebra, g: GradedPieces) -> None:
    degs = g.degrees()
    for i in degs:
        for j in degs:
            if i > j:
                continue
            target = g.piece(i + j)
            moved = span_of_brackets(L, g.piece(i), g.piece(j))
            if not target.contains_subspace(moved):
                raise CrossCheckFailed(f"[g({i}), g({j})] escapes g({i + j})")


def height(L: LieAlgebra, triple: SL2Triple, spaces: GradedPieces | None = None) -> int:
    """Largest nonzero degree; cross-checked against the nilpotency degree
    of ad e ((ad e)^m != 0, (ad e)^(m+1) = 0)."""
    if spaces is None:
        spaces = grading(L, triple.h)
    ht = max(spaces.degrees())
    m = ad(L, triple.e)
    power = m
    deg = 1
    while not power.is_zero():
        power = power @ m
        deg += 1
    if deg - 1 != ht:
        raise CrossCheckFailed(f"height {ht} vs ad-nilpotency degree {deg - 1}")
    return ht


# --------------------------------------------------------------------------
# Centraliser chain


@dataclass(frozen=True)
class CentralizerChain:
    z: Subspace   # centraliser of e
    d: Subspace   # double centraliser = centre of the centraliser
    n: Subspace   # normaliser of the centraliser


def centralizer_chain(L: LieAlgebra, triple: SL2Triple) -> CentralizerChain:
    """(z, d, n) with every cross-computation asserted:

    d as the centraliser of z equals the centre of z; n as the normaliser
    of z equals {s : [s, e] in d} and equals z + [f, d], with the last sum
    direct and dim n = dim z + dim d.
    """
    z = centralizer(L, [triple.e])
    d = centralizer_of_subspace(L, z)
    d_centre = centre_of_subspace(L, z)
    if d != d_centre:
        raise CrossCheckFailed("double centraliser is not the centre of z")
    n1 = normalizer(L, z)
    proj = quotient_map(d)
    n2 = kernel(proj @ ad(L, triple.e))
    fd = span_of_brackets(L, Subspace.from_vectors(L.dim, [triple.f.coords]), d)
    if not is_direct(z, fd):
        raise CrossCheckFailed("z and [f, d] overlap")
    n3 = subspace_sum(z, fd)
    if not (n1 == n2 == n3):
        raise CrossCheckFailed("three normaliser computations disagree")
    if n1.dim != z.dim + d.dim:
        raise CrossCheckFailed("dim n != dim z + dim d")
    return CentralizerChain(z, d, n1)


# --------------------------------------------------------------------------
# Individual checks.  Each returns (ok, detail).

CheckResult = tuple[bool, str]


def check_graded_decompositions(L: LieAlgebra, triple: SL2Triple,
                                spaces: GradedPieces) -> CheckResult:
    """g(i) = z_e(i) + [f, g(i+2)] and g(i) = z_f(i) + [e, g(i-2)] (direct),
    with ad e injective g(i-2) -> g(i) for i <= 1 and surjective for i >= 1."""
    z_e = centralizer(L, [triple.e])
    z_f = centralizer(L, [triple.f])
    f_line = Subspace.from_vectors(L.dim, [triple.f.coords])
    e_line = Subspace.from_vectors(L.dim, [triple.e.coords])
    degs = spaces.degrees()
    lo, hi = min(degs), max(degs)
    for i in range(lo, hi + 1):
        gi = spaces.piece(i)
        a = subspace_intersect(z_e, gi)
        b = span_of_brackets(L, f_line, spaces.piece(i + 2))
        if not (is_direct(a, b) and subspace_sum(a, b) == gi):
            return False, f"e-side decomposition fails at degree {i}"
        a2 = subspace_intersect(z_f, gi)
        b2 = span_of_brackets(L, e_line, spaces.piece(i - 2))
        if not (is_direct(a2, b2) and subspace_sum(a2, b2) == gi):
            return False, f"f-side decomposition fails at degree {i}"
        src = spaces.piece(i - 2)
        img = span_of_brackets(L, e_line, src)
        if i <= 1 and img.dim != src.dim:
            return False, f"ad e not injective into degree {i}"
        if i >= 1 and img.dim != gi.dim:
            return False, f"ad e not surjective onto degree {i}"
    return True, "all degrees pass"


def check_degree_two_line(L: LieAlgebra, triple: SL2Triple, chain: CentralizerChain,
                          spaces: GradedPieces) -> CheckResult:
    """dim d(2) = 1 for a simple algebra, and the space spanned by
    d_f(-2), [f, d(2)] and d(2) is a 3-dimensional subalgebra with
    nondegenerate Killing restriction."""
    d2 = subspace_intersect(chain.d, spaces.piece(2))
    if d2.dim != 1:
        return False, f"dim d(2) = {d2.dim} != 1"
    z_f = centralizer(L, [triple.f])
    d_f = centralizer_of_subspace(L, z_f)
    dfm2 = subspace_intersect(d_f, spaces.piece(-2))
    if dfm2.dim != 1:
        return False, f"dim d_f(-2) = {dfm2.dim} != 1"
    f_line = Subspace.from_vectors(L.dim, [triple.f.coords])
    mid = span_of_brackets(L, f_line, d2)
    tiny = subspace_sum(subspace_sum(dfm2, mid), d2)
    if tiny.dim != 3:
        return False, f"span has dimension {tiny.dim} != 3"
    try:
        sub = induced_subalgebra(L, tiny)
    except Exception:
        return False, "span is not bracket-closed"
    if not killing(sub.algebra).is_nondegenerate():
        return False, "Killing degenerate on the 3-dim subalgebra"
    return True, "d(2) is a line and generates a 3-dim simple piece with f-side"


def check_double_centralizer_pairing(L: LieAlgebra, triple: SL2Triple,
                                     chain: CentralizerChain) -> CheckResult:
    """d_e + [g, z_f] = g directly; Killing nondegenerate on d_e + d_f;
    and [g, z_f] is exactly the Killing-orthogonal of d_f."""
    z_f = centralizer(L, [triple.f])
    d_f = centralizer_of_subspace(L, z_f)
    moved = span_of_brackets(L, Subspace.full(L.dim), z_f)
    if not (is_direct(chain.d, moved) and subspace_sum(chain.d, moved).dim == L.dim):
        return False, "d + [g, z_f] is not a direct sum equal to g"
    both = list(chain.d.basis.data) + list(d_f.basis.data)
    phi = killing(L)
    gram = QMatrix(len(both), len(both),
                   [[phi.pair(u, v) for v in both] for u in both])
    if rank(gram) != len(both):
        return False, "Killing degenerate on d_e + d_f"
    if orthogonal_complement(L, moved, phi) != d_f:
        return False, "[g, z_f] orthogonal is not d_f"
    return True, "decomposition and nondegeneracy verified"


def check_positive_even_grading(chain: CentralizerChain,
                                spaces: GradedPieces) -> CheckResult:
    """The double centraliser lives in strictly positive even degrees."""
    degs = sorted(spaces.restrict(chain.d))
    bad = [i for i in degs if i <= 1 or i % 2]
    if bad:
        return False, f"d has pieces in degrees {bad}"
    return True, f"d graded in degrees {degs}"


def check_abelian_iff_regular(L: LieAlgebra, chain: CentralizerChain,
                              rk: int) -> CheckResult:
    """z abelian <=> dim z = rk (the regular case)."""
    abelian = span_of_brackets(L, chain.z, chain.z).dim == 0
    regular = chain.z.dim == rk
    if abelian != regular:
        return False, f"abelian={abelian} but dim z={chain.z.dim}, rk={rk}"
    return True, f"abelian={abelian}, dim z={chain.z.dim}"


def springer_regular_checks(L: LieAlgebra, triple: SL2Triple,
                            spaces: GradedPieces, chain: CentralizerChain,
                            q: Element, rk: int) -> CheckResult:
    """For a distinguished orbit with abelian centraliser and q a nonzero
    lowest-degree element: dim g(2) - dim g(4) = 1; c = q + e is regular
    semisimple (certified by dim z(c) = rk, z(c) abelian, Killing
    nondegenerate on it); and every x in z(e) corrects uniquely by a
    negative-degree z with x + z in z(c)."""
    if spaces.piece(2).dim - spaces.piece(4).dim != 1:
        return False, (f"dim g(2) - dim g(4) = "
                       f"{spaces.piece(2).dim - spaces.piece(4).dim} != 1")
    c = q + triple.e
    z_c = centralizer(L, [c])
    if z_c.dim != rk:
        return False, f"dim z(c) = {z_c.dim} != rk = {rk}"
    if span_of_brackets(L, z_c, z_c).dim != 0:
        return False, "z(c) is not abelian"
    both = list(z_c.basis.data)
    phi = killing(L)
    gram = QMatrix(len(both), len(both),
                   [[phi.pair(u, v) for v in both] for u in both])
    if rank(gram) != len(both):
        return False, "Killing degenerates on z(c)"
    neg = Subspace.zero(L.dim)
    for i in spaces.degrees():
        if i < 0:
            neg = subspace_sum(neg, spaces.piece(i))
    if subspace_intersect(chain.z, neg).dim:
        return False, "correction is not unique (z(e) meets the negative part)"
    cols = [L.bracket_coords(u, triple.e.coords) for u in neg.basis.data]
    mat = QMatrix(L.dim, neg.dim,
                  [[cols[j][r] for j in range(neg.dim)] for r in range(L.dim)])
    for x in chain.z.basis.data:
        rhs = [-v for v in L.bracket_coords(x, q.coords)]
        coeff = solve(mat, rhs)
        if coeff is None:
            raise SolveFailed("no negative-degree correction exists")
        zvec = [Fraction(0)] * L.dim
        for cf, row in zip(coeff, neg.basis.data):
            if cf:
                zvec = [a + cf * b for a, b in zip(zvec, row)]
        corrected = [a + b for a, b in zip(x, zvec)]
        if any(L.bracket_coords(corrected, c.coords)):
            return False, "corrected element does not centralise c"
    return True, "Springer slice checks pass"


def elashvili_result(L: LieAlgebra, chain: CentralizerChain, rk: int,
                     cfg: RandomCfg, family: str | None,
                     ht: int) -> tuple[int, bool, str]:
    """(ind z, ind z == rk, predicting-theorem tag)."""
    sub = induced_subalgebra(L, chain.z, check=False)
    ind_z = index_of(sub.algebra, cfg).index
    if chain.z.dim == rk:
        tag = "regular"
    elif chain.z.dim == rk + 2:
        tag = "subregular"
    elif ht == 2:
        tag = "height2"
    elif family == "A":
        tag = "type_A"
    else:
        tag = "conjecture"
    return ind_z, ind_z == rk, tag


@dataclass(frozen=True)
class HeartReport:
    m_sequence: tuple[int, ...]
    heart1: bool
    heart2: bool
    alpha_table: tuple[tuple[int, int, str], ...]
    detail: str


def heart_conditions(L: LieAlgebra, triple: SL2Triple, chain: CentralizerChain,
                     spaces: GradedPieces) -> HeartReport:
    """Eigenbasis conditions on the double centraliser.

    With e_1 = e and the half-eigenvalues m_1 <= ... <= m_l on d (ties
    broken by echelon position), heart2 asks that the m's form the
    arithmetic pattern m_i + m_j - 1 = m_{i+j-1} with simple spectrum, and
    heart1 that [[f, e_j], e_i] is a nonzero multiple of e_{i+j-1}
    whenever i + j - 1 <= l.
    """
    graded = spaces.restrict(chain.d)
    basis: list[tuple[int, list[Fraction]]] = []
    for deg in sorted(graded):
        for row in graded[deg].basis.data:
            basis.append((deg // 2, list(row)))
    # put e itself first (d(2) is one-dimensional in the suites)
    if basis and basis[0][0] == 1:
        basis[0] = (1, list(triple.e.coords))
    ms = tuple(m for m, _ in basis)
    l = len(basis)
    heart2 = len(set(ms)) == l
    for i in range(1, l + 1):
        for j in range(1, l + 1):
            if i + j - 1 <= l and ms[i - 1] + ms[j - 1] - 1 != ms[i + j - 2]:
                heart2 = False
    heart1 = True
    table = []
    detail = []
    for i in range(1, l + 1):
        for j in range(1, l + 1):
            if i + j - 1 > l:
                continue
            fe_j = L.bracket_coords(triple.f.coords, basis[j - 1][1])
            v = L.bracket_coords(fe_j, basis[i - 1][1])
            target = basis[i + j - 2][1]
            alpha = _proportionality(v, target)
            if alpha is None or alpha == 0:
                heart1 = False
                detail.append(f"[[f,e_{j}],e_{i}] not a nonzero multiple of e_{i + j - 1}")
            else:
                table.append((i, j, f"{alpha.numerator}/{alpha.denominator}"))
    return HeartReport(ms, heart1, heart2, tuple(table),
                       "; ".join(detail) if detail else "ok")


def _proportionality(v, w) -> Fraction | None:
    """alpha with v = alpha * w, or None if not proportional (w != 0)."""
    alpha = None
    for a, b in zip(v, w):
        if b:
            cand = a / b
            if alpha is None:
                alpha = cand
            elif alpha != cand:
                return None
        elif a:
            return None
    return alpha


def power_basis_check(ma: MatrixAlgebra, triple: SL2Triple,
                      chain: CentralizerChain) -> CheckResult:
    """In the defining realization, d is spanned by the matrix powers of e
    (odd powers outside type A) and [[e^i, f], e^j] = 2ij e^{i+j-1} holds
    verbatim on those powers."""
    e_m = ma.matrix_of(triple.e)
    f_m = ma.matrix_of(triple.f)
    step = 1 if ma.family == "A" else 2
    powers = {}
    cur = dict(e_m)
    k = 1
    while cur:
        powers[k] = cur
        cur = _smul(cur, e_m)
        k += 1
    degrees = [k for k in sorted(powers) if k == 1 or (k - 1) % step == 0]
    vecs = []
    for k in degrees:
        coords = ma.expand(powers[k])
        if coords is None:
            return False, f"e^{k} is not in the algebra"
        vecs.append(coords)
    span = Subspace.from_vectors(ma.algebra.dim, vecs)
    if span != chain.d:
        return False, "d is not the span of the expected powers of e"
    for i in degrees:
        for j in degrees:
            lhs = _smul(_scomm_mat(powers.get(i, {}), f_m), powers.get(j, {}))
            rhs = _smul(powers.get(j, {}), _scomm_mat(powers.get(i, {}), f_m))
            comm = _sub_sparse(lhs, rhs)
            want = {pos: 2 * i * j * v for pos, v in powers.get(i + j - 1, {}).items()}
            if comm != want:
                return False, f"[[e^{i},f],e^{j}] != 2*{i}*{j}*e^{i + j - 1}"
    return True, f"power identity holds on degrees {degrees}"


def _scomm_mat(a, b):
    return _sub_sparse(_smul(a, b), _smul(b, a))


def _sub_sparse(a, b):
    out = dict(a)
    for pos, v in b.items():
        w = out.get(pos, Fraction(0)) - v
        if w:
            out[pos] = w
        elif pos in out:
            del out[pos]
    return out


@dataclass(frozen=True)
class NormaliserReport:
    ind_z: int
    ind_n: int
    ind_n_on_z: int
    ind_n_on_d: int
    lower_bounds_hold: bool
    ideal_inequality_holds: bool
    equalities_apply: bool
    equalities_hold: bool
    conj_ind_n: bool
    conj_ind_n_on_z: bool
    detail: str


def normaliser_index_checks(L: LieAlgebra, chain: CentralizerChain, rk: int,
                            ind_z: int, cfg: RandomCfg) -> NormaliserReport:
    """Indices of the normaliser and of its modules z and d, with the
    unconditional lower bounds asserted, the equalities asserted exactly
    when ind(n, d) = 0, and the rank-based conjecture values reported."""
    n_sub = induced_subalgebra(L, chain.n, check=False)
    ind_n = index_of(n_sub.algebra, cfg).index
    rho_z = induced_rep(L, chain.n, chain.z, sub=n_sub)
    rho_d = induced_rep(L, chain.n, chain.d, sub=n_sub)
    ind_nz = index_of_rep(rho_z, cfg).index
    ind_nd = index_of_rep(rho_d, cfg).index
    dim_d = chain.d.dim
    lower = (ind_n >= ind_z - dim_d) and (ind_nz >= ind_z - dim_d)
    ideal = check_ideal_inequality(L, chain.n, chain.z, cfg).holds
    applies = ind_nd == 0
    equal = (not applies) or (ind_n == ind_nz == ind_z - dim_d)
    return NormaliserReport(
        ind_z, ind_n, ind_nz, ind_nd,
        lower, ideal, applies, equal,
        ind_n == rk - dim_d, ind_nz == rk - dim_d,
        f"ind n={ind_n}, ind(n,z)={ind_nz}, ind(n,d)={ind_nd}")


# --------------------------------------------------------------------------
# Regular-orbit suite (Chevalley realizations)


@dataclass(frozen=True)
class RegularSuiteReport:
    ok: bool
    dim_n: int
    ind_n: int
    frobenius_witness: bool
    detail: str


def regular_suite(ch: ChevalleyAlgebra, cfg: RandomCfg) -> RegularSuiteReport:
    """The special structure of a regular nilpotent in a Chevalley
    realization: the companion regular element in degree -2, the highest
    root vector as a Frobenius witness for the normaliser, and the two
    transversal-slice decompositions."""
    L = ch.algebra
    p = ch.rank
    e = regular_nilpotent(ch)
    triple = sl2_complete(L, e)
    spaces = grading(L, triple.h)
    chain = centralizer_chain(L, triple)
    e_top, e_bot = extreme_root_vectors(ch)
    problems = []

    # companion element: the unique solution of [e, fhat] = [e_top, e_bot]
    # inside degree -2; it must be regular nilpotent
    h_top = bracket(L, e_top, e_bot)
    gm2 = spaces.piece(-2)
    cols = [L.bracket_coords(e.coords, u) for u in gm2.basis.data]
    mat = QMatrix(L.dim, gm2.dim,
                  [[cols[j][r] for j in range(gm2.dim)] for r in range(L.dim)])
    coeff = solve(mat, list(h_top.coords))
    if coeff is None:
        raise SolveFailed("no degree -2 solution of [e, fhat] = h_top")
    fhat_coords = [Fraction(0)] * L.dim
    for cf, row in zip(coeff, gm2.basis.data):
        if cf:
            fhat_coords = [a + cf * b for a, b in zip(fhat_coords, row)]
    fhat = L.element(fhat_coords)
    if subspace_intersect(chain.z, gm2).dim:
        problems.append("companion element not unique")
    z_fhat = centralizer(L, [fhat])
    if z_fhat.dim != p or not is_ad_nilpotent(L, fhat):
        problems.append("companion element is not regular nilpotent")

    # z(c) sits inside z(e) + z(fhat) for c = e + e_bot
    c = e + e_bot
    z_c = centralizer(L, [c])
    both = subspace_sum(chain.z, z_fhat)
    if not (is_direct(chain.z, z_fhat) and both.contains_subspace(z_c)):
        problems.append("z(c) does not embed in z(e) + z(fhat)")

    # transversal slices: z(fhat) + [g, e] = g and A + [g, e] = g
    img_e = Subspace.from_vectors(L.dim, [ad(L, e).col(j) for j in range(L.dim)])
    if not (is_direct(z_fhat, img_e) and subspace_sum(z_fhat, img_e).dim == L.dim):
        problems.append("z(fhat) + [g, e] != g")
    f_line = Subspace.from_vectors(L.dim, [triple.f.coords])
    bot_line = Subspace.from_vectors(L.dim, [e_bot.coords])
    fz = span_of_brackets(L, f_line, chain.z)
    a_space = span_of_brackets(L, bot_line, fz)
    if not (is_direct(a_space, img_e) and subspace_sum(a_space, img_e).dim == L.dim):
        problems.append("[e_bot, [f, z]] + [g, e] != g")

    # the normaliser is Frobenius; the highest-root functional is a witness
    n_sub = induced_subalgebra(L, chain.n, check=False)
    ind_n = index_of(n_sub.algebra, cfg).index
    xi = [killing_pair(L, e_bot, n_sub.to_ambient(n_sub.algebra.basis_element(j)))
          for j in range(n_sub.algebra.dim)]
    pen = kirillov_pencil(n_sub.algebra)
    witness = rank(evaluate(pen, xi)) == n_sub.algebra.dim
    if ind_n != 0:
        problems.append(f"ind n = {ind_n} != 0")
    if not witness:
        problems.append("highest-root functional is singular on n")
    return RegularSuiteReport(not problems, chain.n.dim, ind_n, witness,
                              "; ".join(problems) if problems else "ok")


@dataclass(frozen=True)
class DMatrixReport:
    ok: bool
    exponents: tuple[int, ...]
    symmetric: bool
    nonsingular_at_witness: bool
    det_law_ok: bool
    det_law_constant: str | None
    triangular: bool
    rechoice_disc: str | None
    identification_flag: bool
    detail: str


def d_matrix_checks(ch: ChevalleyAlgebra, cfg: RandomCfg,
                    det_points: int = 5) -> DMatrixReport:
    """The symmetric bracket matrix of a regular orbit.

    Entries [e_i, [e_j, f]] of the graded centraliser basis, read as
    vectors in that basis, form a symmetric pencil.  It is checked to be
    nonsingular at the lowest-root functional, its determinant is matched
    against c * (pairing with the highest root)^p at several sampled dual
    points with one fitted constant, and the triangularity consequence of
    distinct exponents (below-antidiagonal entries vanish, antidiagonal
    ones are nonzero multiples of the highest root vector) is verified,
    after an exact isotropic basis re-choice inside a repeated-exponent
    eigenspace when there is one.
    """
    L = ch.algebra
    p = ch.rank
    e = regular_nilpotent(ch)
    triple = sl2_complete(L, e)
    spaces = grading(L, triple.h)
    chain = centralizer_chain(L, triple)
    e_top, e_bot = extreme_root_vectors(ch)
    problems = []

    graded = spaces.restrict(chain.z)
    basis: list[tuple[int, list[Fraction]]] = []
    for deg in sorted(graded):
        for row in graded[deg].basis.data:
            basis.append((deg // 2, list(row)))
    if basis and basis[0][0] == 1:
        basis[0] = (1, list(triple.e.coords))
    exps = tuple(m for m, _ in basis)

    def entry(i: int, j: int) -> list[Fraction] | None:
        ej_f = L.bracket_coords(basis[j][1], triple.f.coords)
        v = L.bracket_coords(basis[i][1], ej_f)
        return chain.z.coords_in_basis(v)

    distinct = len(set(exps)) == p
    rechoice_disc: str | None = None
    rational_rechoice = True
    repeated = [m for m in set(exps) if exps.count(m) > 1]
    if repeated:
        m0 = repeated[0]
        idxs = [k for k, m in enumerate(exps) if m == m0]
        if len(idxs) == 2:
            done, disc = _make_isotropic(L, triple, chain, basis, idxs)
            rechoice_disc = None if disc is None else \
                f"{disc.numerator}/{disc.denominator}"
            if not done:
                rational_rechoice = False
        else:
            rational_rechoice = False

    dmat = [[entry(i, j) for j in range(p)] for i in range(p)]
    if any(cell is None for row in dmat for cell in row):
        return DMatrixReport(False, exps, False, False, False, None, False,
                             rechoice_disc, False, "an entry left the centraliser")
    symmetric = all(dmat[i][j] == dmat[j][i] for i in range(p) for j in range(p))
    if not symmetric:
        problems.append("bracket matrix is not symmetric")

    def eval_at(y_coords) -> QMatrix:
        xi = [killing_pair(L, L.element(y_coords),
                           L.element(basis[k][1])) for k in range(p)]
        return QMatrix(p, p, [[sum((c * x for c, x in zip(dmat[i][j], xi)),
                                   Fraction(0))
                               for j in range(p)] for i in range(p)])

    nonsing = rank(eval_at(list(e_bot.coords))) == p
    if not nonsing:
        problems.append("singular at the lowest-root functional")

    # determinant law on the z(f) model of the dual
    z_f = centralizer(L, [triple.f])
    rng = random.Random(cfg.seed ^ 0xD37)
    const: Fraction | None = None
    law_ok = True
    seen = 0
    zero_side_checked = False
    for _ in range(200):
        if seen >= det_points and zero_side_checked:
            break
        coeffs = [rng.randint(-cfg.coeff_bound, cfg.coeff_bound)
                  for _ in range(z_f.dim)]
        y = [Fraction(0)] * L.dim
        for cf, row in zip(coeffs, z_f.basis.data):
            if cf:
                y = [a + cf * b for a, b in zip(y, row)]
        pairing = killing_pair(L, e_top, L.element(y))
        det = _det_small(eval_at(y))
        if pairing == 0:
            if det != 0:
                law_ok = False
            zero_side_checked = True
            continue
        if const is None:
            const = det / pairing ** p
        elif det != const * pairing ** p:
            law_ok = False
        seen += 1
    identification_flag = False
    det_law_ok = law_ok and seen >= det_points
    if not det_law_ok:
        if nonsing:
            identification_flag = True
        else:
            problems.append("determinant law fails")

    triangular = True
    for i in range(p):
        for j in range(p):
            if i + j + 2 > p + 1 and any(dmat[i][j]):   # 1-based i + j > p + 1
                triangular = False
    top_coords = chain.z.coords_in_basis(e_top.coords)
    for i in range(p):
        j = p - 1 - i
        mu = _proportionality(dmat[i][j], top_coords)
        if mu is None or mu == 0:
            triangular = False
    if distinct and not triangular:
        problems.append("triangularity fails despite distinct exponents")
    if repeated and not rational_rechoice:
        # true over the closure only: a definite form has no rational
        # isotropic vector, so this is reported rather than asserted
        problems = problems if triangular else problems
    detail = "; ".join(problems) if problems else "ok"
    if repeated and not rational_rechoice:
        detail += (f"; repeated-exponent re-choice impossible over Q "
                   f"(definite form, disc {rechoice_disc})")
    return DMatrixReport(not problems, exps, symmetric, nonsing, det_law_ok,
                         None if const is None else f"{const.numerator}/{const.denominator}",
                         triangular, rechoice_disc, identification_flag, detail)


def _make_isotropic(L, triple, chain, basis, idxs) -> tuple[bool, Fraction | None]:
    """Re-choose the two basis vectors of a repeated-exponent eigenspace so
    the second one is isotropic for the top-degree quadratic form.  Exact:
    the isotropic vector exists over the rationals iff the form's
    discriminant is a rational square, decided with integer square roots.
    Returns (succeeded, discriminant)."""
    i1, i2 = idxs
    u1, u2 = basis[i1][1], basis[i2][1]

    def q_val(a, b) -> Fraction | None:
        bf = L.bracket_coords(b, triple.f.coords)
        v = L.bracket_coords(a, bf)
        top = basis[-1][1]
        return _proportionality(v, top)

    a = q_val(u1, u1)
    bq = q_val(u1, u2)
    cq = q_val(u2, u2)
    if a is None or bq is None or cq is None:
        return False, None
    disc = bq * bq - a * cq
    if cq == 0:
        return True, disc
    if a == 0:
        basis[i1], basis[i2] = (basis[i1][0], u2), (basis[i2][0], u1)
        return True, disc
    if disc < 0:
        return False, disc
    num, den = disc.numerator, disc.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        return False, disc
    root = Fraction(rn, rd)
    t = (-bq + root) / a
    new2 = [t * x + y for x, y in zip(u1, u2)]
    basis[i2] = (basis[i2][0], new2)
    return True, disc


def _det_small(m: QMatrix) -> Fraction:
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
            fct = data[i][c] * inv
            if fct:
                data[i] = [x - fct * y for x, y in zip(data[i], data[c])]
    return det


# --------------------------------------------------------------------------
# Orbit reports


@dataclass
class OrbitReport:
    family: str
    rank: int
    label: str
    very_even: bool
    dim_g: int
    rk_g: int
    dim_z: int
    dim_d: int
    dim_n: int
    height: int
    is_even: bool
    is_distinguished: bool
    grading_dims: dict[int, int]
    m_sequence: tuple[int, ...]
    ind_z: int | None
    ind_n: int | None
    ind_n_on_z: int | None
    ind_n_on_d: int | None
    heart1: bool | None
    heart2: bool | None
    alpha_table: tuple
    elashvili_ok: bool
    predicted_by: str
    conj61_ok: bool | None
    conj62_ok: bool | None
    checks: dict[str, dict]
    seed: int
    trials: int
    coeff_bound: int
    certify: bool

    def to_dict(self) -> dict:
        out = {
            "family": self.family, "rank": self.rank, "label": self.label,
            "very_even": self.very_even,
            "dim_g": self.dim_g, "rk_g": self.rk_g,
            "dim_z": self.dim_z, "dim_d": self.dim_d, "dim_n": self.dim_n,
            "height": self.height, "is_even": self.is_even,
            "is_distinguished": self.is_distinguished,
            "grading_dims": {str(k): v for k, v in sorted(self.grading_dims.items())},
            "m_sequence": list(self.m_sequence),
            "ind_z": self.ind_z, "ind_n": self.ind_n,
            "ind_n_on_z": self.ind_n_on_z, "ind_n_on_d": self.ind_n_on_d,
            "heart1": self.heart1, "heart2": self.heart2,
            "alpha_table": [list(t) for t in self.alpha_table],
            "elashvili_ok": self.elashvili_ok, "predicted_by": self.predicted_by,
            "conj61_ok": self.conj61_ok, "conj62_ok": self.conj62_ok,
            "checks": self.checks,
            "rng": {"seed": self.seed, "trials": self.trials,
                    "coeff_bound": self.coeff_bound, "certify": self.certify},
        }
        return out

    @property
    def failed_checks(self) -> list[str]:
        return [k for k, v in self.checks.items() if v["status"] == "fail"]


def _zero_orbit_report(real, label: str, cfg: RandomCfg, rk: int) -> OrbitReport:
    L = real.algebra
    ind_g = index_of(L, cfg).index
    checks = {k: {"status": "skipped", "detail": "zero orbit"}
              for k in ("prop21", "thm23", "thm24", "prop26", "steinberg",
                        "springer", "heart", "thm44", "regular_suite", "dmatrix")}
    checks["elashvili"] = {
        "status": "pass" if ind_g == rk else "fail",
        "detail": f"ind z(0) = ind g = {ind_g}"}
    family = getattr(real, "family", real.datum.label[0] if hasattr(real, "datum") else "?")
    return OrbitReport(
        family=family, rank=getattr(real, "rank", rk), label=label,
        very_even=False, dim_g=L.dim, rk_g=rk,
        dim_z=L.dim, dim_d=0, dim_n=L.dim, height=0,
        is_even=True, is_distinguished=False,
        grading_dims={0: L.dim}, m_sequence=(),
        ind_z=ind_g, ind_n=ind_g, ind_n_on_z=None, ind_n_on_d=None,
        heart1=None, heart2=None, alpha_table=(),
        elashvili_ok=ind_g == rk, predicted_by="zero",
        conj61_ok=None, conj62_ok=None, checks=checks,
        seed=cfg.seed, trials=cfg.trials, coeff_bound=cfg.coeff_bound,
        certify=cfg.certify)


def orbit_report(real, selector, cfg: RandomCfg) -> OrbitReport:
    """Full per-orbit pipeline.

    `selector` is a Partition for matrix realizations, or an Element of
    the realization's algebra (then `label` records a search provenance).
    Deterministic for a fixed cfg.
    """
    L = real.algebra
    rk = real.rank
    very_even = False
    if isinstance(selector, Partition):
        label = str(selector)
        from .construct import ClassicalType
        ct = ClassicalType(real.family, real.rank)
        very_even = is_very_even(ct, selector)
        if all(p == 1 for p in selector.parts):
            return _zero_orbit_report(real, label, cfg, rk)
        e = nilpotent_from_partition(real, selector)
    else:
        e = selector
        label = f"search:{kernel(ad(L, e)).dim}"
        if e.is_zero():
            return _zero_orbit_report(real, label, cfg, rk)
    family = getattr(real, "family", None) or real.datum.label[0]
    triple = sl2_complete(L, e)
    spaces = grading(L, triple.h)
    ht = height(L, triple, spaces)
    chain = centralizer_chain(L, triple)
    is_even = all(d % 2 == 0 for d in spaces.degrees())
    z0 = subspace_intersect(chain.z, spaces.piece(0))
    distinguished = z0.dim == 0
    if chain.z.dim < rk:
        raise CrossCheckFailed("centraliser smaller than the rank")
    if chain.d.dim > rk:
        raise CrossCheckFailed("double centraliser larger than the rank")

    checks: dict[str, dict] = {}

    def record(name, ok, detail):
        checks[name] = {"status": "pass" if ok else "fail", "detail": detail}

    ok, detail = check_graded_decompositions(L, triple, spaces)
    record("prop21", ok, detail)
    ok, detail = check_degree_two_line(L, triple, chain, spaces)
    record("thm23", ok, detail)
    ok, detail = check_double_centralizer_pairing(L, triple, chain)
    record("thm24", ok, detail)
    ok, detail = check_positive_even_grading(chain, spaces)
    if distinguished and not is_even:
        ok, detail = False, detail + "; distinguished orbit fails to be even"
    record("prop26", ok, detail + ("; distinguished=>even holds" if distinguished else ""))
    ok, detail = check_abelian_iff_regular(L, chain, rk)
    record("steinberg", ok, detail)

    if chain.z.dim == rk:
        qspace = spaces.piece(-ht)
        q = L.element(qspace.basis.data[0])
        ok, detail = springer_regular_checks(L, triple, spaces, chain, q, rk)
        record("springer", ok, detail)
    else:
        checks["springer"] = {"status": "skipped", "detail": "orbit not regular"}

    ind_z, el_ok, tag = elashvili_result(L, chain, rk, cfg, family, ht)
    record("elashvili", el_ok, f"ind z = {ind_z}, rk = {rk} ({tag})")

    heart = heart_conditions(L, triple, chain, spaces)
    heart_detail = heart.detail
    if isinstance(real, MatrixAlgebra):
        applies = real.family in ("A", "B", "C") or \
            (real.family == "D" and isinstance(selector, Partition)
             and len(selector.parts) >= 3)
        if applies:
            p_ok, p_detail = power_basis_check(real, triple, chain)
            heart_detail += f"; powers: {p_detail}"
            record("heart", heart.heart1 and p_ok, heart_detail)
        else:
            checks["heart"] = {"status": "reported",
                               "detail": f"heart1={heart.heart1}, "
                                         f"heart2={heart.heart2}; {heart_detail}"}
    else:
        checks["heart"] = {"status": "reported",
                           "detail": f"heart1={heart.heart1}, heart2={heart.heart2}"}

    norm = normaliser_index_checks(L, chain, rk, ind_z, cfg)
    thm44_ok = norm.lower_bounds_hold and norm.ideal_inequality_holds and norm.equalities_hold
    record("thm44", thm44_ok, norm.detail)
    if heart.heart1 and not norm.equalities_apply:
        record("thm44", False, "heart1 holds but ind(n, d) != 0")

    checks["regular_suite"] = {"status": "skipped", "detail": "matrix orbit pipeline"}
    checks["dmatrix"] = {"status": "skipped", "detail": "matrix orbit pipeline"}

    return OrbitReport(
        family=family, rank=rk, label=label, very_even=very_even,
        dim_g=L.dim, rk_g=rk, dim_z=chain.z.dim, dim_d=chain.d.dim,
        dim_n=chain.n.dim, height=ht, is_even=is_even,
        is_distinguished=distinguished,
        grading_dims=spaces.dims(), m_sequence=heart.m_sequence,
        ind_z=ind_z, ind_n=norm.ind_n, ind_n_on_z=norm.ind_n_on_z,
        ind_n_on_d=norm.ind_n_on_d,
        heart1=heart.heart1, heart2=heart.heart2, alpha_table=heart.alpha_table,
        elashvili_ok=el_ok, predicted_by=tag,
        conj61_ok=norm.conj_ind_n, conj62_ok=norm.conj_ind_n_on_z,
        checks=checks, seed=cfg.seed, trials=cfg.trials,
        coeff_bound=cfg.coeff_bound, certify=cfg.certify)
