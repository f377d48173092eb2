"""Tests for the exact linear algebra layer."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lieindex.exactla import (
    AmbientMismatch,
    MatrixPencil,
    QMatrix,
    RandomCfg,
    Subspace,
    evaluate,
    generic_rank,
    is_direct,
    kernel,
    quotient_map,
    rank,
    rref,
    solve,
    subspace_intersect,
    subspace_sum,
    symbolic_rank,
)


def naive_rank(m: QMatrix) -> int:
    """Independent oracle: plain rational Gaussian elimination."""
    rows = [list(r) for r in m.data]
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


small_fracs = st.fractions(min_value=-9, max_value=9, max_denominator=4)


@st.composite
def matrices(draw, max_dim=6):
    r = draw(st.integers(min_value=0, max_value=max_dim))
    c = draw(st.integers(min_value=1, max_value=max_dim))
    data = draw(st.lists(st.lists(small_fracs, min_size=c, max_size=c),
                         min_size=r, max_size=r))
    return QMatrix(r, c, data)


class TestRank:
    def test_zero_matrix(self):
        assert rank(QMatrix.zeros(3, 3)) == 0

    def test_identity(self):
        assert rank(QMatrix.identity(4)) == 4

    def test_dependent_rows(self):
        # hand elimination: row2 = 2*row1, so exactly two pivots
        m = QMatrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        assert rank(m) == 2

    def test_degenerate_shapes(self):
        assert rank(QMatrix.zeros(0, 5)) == 0
        assert rank(QMatrix.zeros(5, 0)) == 0

    @given(matrices())
    @settings(max_examples=80, deadline=None)
    def test_matches_naive_elimination(self, m):
        assert rank(m) == naive_rank(m)

    @given(matrices())
    @settings(max_examples=80, deadline=None)
    def test_rank_transpose(self, m):
        assert rank(m) == rank(m.transpose())


class TestKernel:
    def test_identity_kernel_is_zero(self):
        assert kernel(QMatrix.identity(3)).dim == 0

    def test_zero_matrix_kernel_is_full(self):
        k = kernel(QMatrix.zeros(2, 5))
        assert k.dim == 5

    def test_single_row(self):
        # direct solve: x + y = 0 has the 2-dim solution space over (x,y,z)
        k = kernel(QMatrix.from_rows([[1, 1, 0]]))
        assert k.dim == 2
        assert k.contains([1, -1, 0])

    @given(matrices())
    @settings(max_examples=80, deadline=None)
    def test_rank_nullity(self, m):
        assert kernel(m).dim + rank(m) == m.cols

    @given(matrices())
    @settings(max_examples=60, deadline=None)
    def test_kernel_vectors_annihilate(self, m):
        k = kernel(m)
        for v in k.basis.data:
            assert all(x == 0 for x in m.mat_vec(v))


class TestSolve:
    def test_identity(self):
        assert solve(QMatrix.identity(2), [1, 2]) == [1, 2]

    def test_inconsistent(self):
        assert solve(QMatrix.zeros(2, 2), [1, 0]) is None

    def test_back_substitution(self):
        # by hand: y = 1, then x = 3 - y = 2
        a = QMatrix.from_rows([[1, 1], [0, 1]])
        assert solve(a, [3, 1]) == [2, 1]

    @given(matrices(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_solution_satisfies_system(self, m, data):
        x = data.draw(st.lists(small_fracs, min_size=m.cols, max_size=m.cols))
        b = m.mat_vec(x)
        got = solve(m, b)
        assert got is not None
        assert m.mat_vec(got) == tuple(b)


@st.composite
def subspaces(draw, ambient=5):
    nvec = draw(st.integers(min_value=0, max_value=ambient))
    vecs = draw(st.lists(st.lists(small_fracs, min_size=ambient, max_size=ambient),
                         min_size=nvec, max_size=nvec))
    return Subspace.from_vectors(ambient, vecs)


class TestSubspaces:
    def test_sum_of_axes_is_plane(self):
        s = Subspace.from_vectors(2, [[1, 0]])
        t = Subspace.from_vectors(2, [[0, 1]])
        assert subspace_sum(s, t) == Subspace.full(2)
        assert is_direct(s, t)

    def test_intersect_idempotent(self):
        s = Subspace.from_vectors(3, [[1, 2, 3], [0, 1, 1]])
        assert subspace_intersect(s, s) == s

    def test_line_in_plane(self):
        line = Subspace.from_vectors(3, [[1, 1, 0]])
        plane = Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]])
        assert subspace_intersect(line, plane) == line

    def test_ambient_mismatch(self):
        with pytest.raises(AmbientMismatch):
            subspace_sum(Subspace.full(2), Subspace.full(3))

    def test_coords_in_basis(self):
        s = Subspace.from_vectors(3, [[1, 0, 1], [0, 1, 1]])
        assert s.coords_in_basis([2, 3, 5]) == [2, 3]
        assert s.coords_in_basis([0, 0, 1]) is None

    def test_quotient_map(self):
        s = Subspace.from_vectors(3, [[1, 0, 2]])
        q = quotient_map(s)
        assert q.rows == 2
        # the map kills s and is surjective
        assert all(x == 0 for x in q.mat_vec([1, 0, 2]))
        assert rank(q) == 2

    @given(subspaces(), subspaces())
    @settings(max_examples=60, deadline=None)
    def test_dimension_formula(self, s, t):
        assert s.dim + t.dim == subspace_sum(s, t).dim + subspace_intersect(s, t).dim

    @given(subspaces(), subspaces())
    @settings(max_examples=40, deadline=None)
    def test_intersection_contained_in_both(self, s, t):
        i = subspace_intersect(s, t)
        assert s.contains_subspace(i)
        assert t.contains_subspace(i)


@st.composite
def pencils(draw, max_dim=4, max_vars=3):
    r = draw(st.integers(min_value=1, max_value=max_dim))
    c = draw(st.integers(min_value=1, max_value=max_dim))
    k = draw(st.integers(min_value=1, max_value=max_vars))
    coeff = st.integers(min_value=-3, max_value=3)
    ent = draw(st.lists(
        st.lists(st.lists(coeff, min_size=k, max_size=k), min_size=c, max_size=c),
        min_size=r, max_size=r))
    return MatrixPencil(r, c, k, ent)


class TestPencils:
    def test_evaluate_at_zero(self):
        p = MatrixPencil(2, 2, 3, [[[1, 2, 3]] * 2] * 2)
        assert evaluate(p, [0, 0, 0]).is_zero()

    def test_evaluate_arithmetic(self):
        p = MatrixPencil(1, 1, 2, [[[2, 1]]])
        assert evaluate(p, [1, 3]).entry(0, 0) == 5

    def test_single_variable_entry(self):
        p = MatrixPencil(1, 1, 1, [[[1]]])
        assert generic_rank(p, RandomCfg(seed=1)) == 1
        assert symbolic_rank(p) == 1

    def test_zero_pencil(self):
        p = MatrixPencil.zeros(3, 2, 2)
        assert generic_rank(p, RandomCfg(seed=1)) == 0
        assert symbolic_rank(p) == 0

    def test_skew_2x2(self):
        # any nonzero value of the variable already attains rank 2
        p = MatrixPencil(2, 2, 1, [[[0], [1]], [[-1], [0]]])
        assert generic_rank(p, RandomCfg(seed=7)) == 2
        assert symbolic_rank(p) == 2

    def test_rank_drop_pencil(self):
        # both columns carry the same form: generic rank is 1, not 2
        p = MatrixPencil(2, 2, 2, [[[1, 0], [1, 0]], [[0, 1], [0, 1]]])
        assert symbolic_rank(p) == 1
        assert generic_rank(p, RandomCfg(seed=3)) == 1

    def test_monotone_in_trials(self):
        p = MatrixPencil(2, 2, 2, [[[1, 0], [0, 1]], [[0, 1], [1, 1]]])
        prev = 0
        for t in range(1, 5):
            r = generic_rank(p, RandomCfg(seed=11, trials=t))
            assert r >= prev
            prev = r

    def test_certify_flag_routes_to_symbolic(self):
        p = MatrixPencil(2, 2, 1, [[[0], [1]], [[-1], [0]]])
        assert generic_rank(p, RandomCfg(seed=1, certify=True)) == 2

    @given(pencils())
    @settings(max_examples=60, deadline=None)
    def test_symbolic_at_least_random(self, p):
        sym = symbolic_rank(p)
        rnd = generic_rank(p, RandomCfg(seed=5, trials=4, coeff_bound=50))
        assert rnd <= sym
        # with 4 trials at these sizes, a miss would be a (reproducible) fluke
        assert rnd == sym

    @given(pencils(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_evaluation_rank_bounded_by_symbolic(self, p, data):
        xi = data.draw(st.lists(st.integers(min_value=-5, max_value=5),
                                min_size=p.num_vars, max_size=p.num_vars))
        assert rank(evaluate(p, xi)) <= symbolic_rank(p)


class TestRref:
    def test_idempotent(self):
        m = QMatrix.from_rows([[2, 4], [1, 3]])
        r1, piv = rref(m)
        r2, piv2 = rref(r1)
        assert r1 == r2 and piv == piv2

    @given(matrices())
    @settings(max_examples=60, deadline=None)
    def test_pivot_structure(self, m):
        r, pivots = rref(m)
        assert list(pivots) == sorted(pivots)
        for i, p in enumerate(pivots):
            col = [r.entry(k, p) for k in range(r.rows)]
            assert col[i] == 1
            assert all(col[k] == 0 for k in range(r.rows) if k != i)
