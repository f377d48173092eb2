"""Tests for the structure-constant Lie algebra layer.

The hand-built sl2 with basis (e, h, f) and the Heisenberg algebra serve
as ground truth: their adjoint matrices are small enough to write down.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lieindex.exactla import QMatrix, Subspace, rank, subspace_sum
from lieindex import liecore
from lieindex.liecore import (
    AlgebraMismatch,
    LieAlgebra,
    NotASubalgebra,
    Representation,
    ad,
    bracket,
    center,
    centralizer,
    centre_of_subspace,
    induced_rep,
    induced_subalgebra,
    killing,
    killing_pair,
    normalizer,
    orthogonal_complement,
    semidirect,
    span_of_brackets,
    validate,
)


def sl2() -> LieAlgebra:
    # basis order (e, h, f): [e,f] = h, [h,e] = 2e, [h,f] = -2f
    return LieAlgebra(["e", "h", "f"], {
        (0, 2): [(1, 1)],
        (1, 0): [(0, 2)],
        (1, 2): [(2, -2)],
    })


def heisenberg() -> LieAlgebra:
    return LieAlgebra(["x", "y", "z"], {(0, 1): [(2, 1)]})


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra([f"a{i}" for i in range(n)], {})


class TestBracket:
    def test_self_bracket_vanishes(self):
        L = sl2()
        x = L.element([1, 2, 3])
        assert bracket(L, x, x).is_zero()

    def test_e_f_gives_h(self):
        L = sl2()
        assert bracket(L, L.basis_element(0), L.basis_element(2)).coords == (0, 1, 0)

    def test_h_e_gives_2e(self):
        L = sl2()
        assert bracket(L, L.basis_element(1), L.basis_element(0)).coords == (2, 0, 0)

    def test_algebra_mismatch(self):
        with pytest.raises(AlgebraMismatch):
            bracket(sl2(), sl2().basis_element(0), sl2().basis_element(1))


class TestAd:
    def test_ad_zero(self):
        L = sl2()
        assert ad(L, L.zero()).is_zero()

    def test_ad_h_diagonal(self):
        L = sl2()
        m = ad(L, L.basis_element(1))
        assert m == QMatrix.from_rows([[2, 0, 0], [0, 0, 0], [0, 0, -2]])

    def test_trace_product_equals_killing(self):
        L = sl2()
        e, h = L.basis_element(0), L.basis_element(1)
        prod = ad(L, e) @ ad(L, h)
        tr = sum(prod.entry(i, i) for i in range(3))
        assert tr == killing_pair(L, e, h)


class TestKilling:
    def test_abelian_killing_zero(self):
        assert killing(abelian(3)).gram.is_zero()

    def test_sl2_values(self):
        # oracle: ad e, ad h, ad f written out by hand give
        # tr(ad e ad f) = 4 and tr(ad h ad h) = 8
        L = sl2()
        assert killing_pair(L, L.basis_element(0), L.basis_element(2)) == 4
        assert killing_pair(L, L.basis_element(1), L.basis_element(1)) == 8

    def test_sl2_nondegenerate(self):
        assert killing(sl2()).is_nondegenerate()

    @given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3),
                    min_size=9, max_size=9))
    @settings(max_examples=40, deadline=None)
    def test_associativity(self, coords):
        L = sl2()
        x = L.element(coords[0:3])
        y = L.element(coords[3:6])
        z = L.element(coords[6:9])
        assert killing_pair(L, bracket(L, x, y), z) == killing_pair(L, x, bracket(L, y, z))


class TestValidate:
    def test_constructed_algebras_validate(self):
        assert validate(sl2())
        assert validate(heisenberg())
        assert validate(abelian(4))

    def test_broken_antisymmetry_detected(self):
        bad = LieAlgebra(["a", "b"], {(0, 1): [(0, 1)], (1, 0): [(0, 1)]},
                         fill_antisymmetric=False)
        assert not validate(bad)

    def test_broken_jacobi_detected(self):
        # [a,[b,c]] + [b,[c,a]] + [c,[a,b]] = [b,-a] = [a,b] = c != 0
        bad = LieAlgebra(["a", "b", "c"], {
            (0, 1): [(2, 1)], (0, 2): [(0, 1)]})
        assert not validate(bad)


class TestCentralizer:
    def test_centralizer_of_zero(self):
        L = sl2()
        assert centralizer(L, [L.zero()]) == Subspace.full(3)

    def test_centralizer_of_e(self):
        L = sl2()
        c = centralizer(L, [L.basis_element(0)])
        assert c == Subspace.from_vectors(3, [[1, 0, 0]])

    def test_center_of_semisimple_is_zero(self):
        assert center(sl2()).dim == 0

    def test_center_of_heisenberg(self):
        assert center(heisenberg()) == Subspace.from_vectors(3, [[0, 0, 1]])


class TestNormalizer:
    def test_normalizer_of_whole_algebra(self):
        L = sl2()
        assert normalizer(L, Subspace.full(3)) == Subspace.full(3)

    def test_normalizer_of_zero(self):
        L = sl2()
        assert normalizer(L, Subspace.zero(3)) == Subspace.full(3)

    def test_normalizer_of_line_through_e(self):
        L = sl2()
        n = normalizer(L, Subspace.from_vectors(3, [[1, 0, 0]]))
        assert n == Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]])

    def test_centralizer_inside_normalizer(self):
        L = sl2()
        s = Subspace.from_vectors(3, [[1, 0, 0]])
        c = centralizer(L, [L.basis_element(0)])
        assert normalizer(L, s).contains_subspace(c)


class TestCentreOfSubspace:
    def test_abelian_subspace_is_its_own_centre(self):
        L = heisenberg()
        q = Subspace.from_vectors(3, [[1, 0, 0], [0, 0, 1]])
        assert centre_of_subspace(L, q) == q

    def test_not_a_subalgebra_raises(self):
        L = sl2()
        q = Subspace.from_vectors(3, [[1, 0, 0], [0, 0, 1]])  # span{e,f}
        with pytest.raises(NotASubalgebra):
            centre_of_subspace(L, q)

    def test_centre_of_borel(self):
        L = sl2()
        q = Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]])  # span{e,h}
        assert centre_of_subspace(L, q).dim == 0


class TestInducedSubalgebra:
    def test_whole_algebra(self):
        L = sl2()
        sub = induced_subalgebra(L, Subspace.full(3))
        assert sub.algebra.dim == 3
        assert validate(sub.algebra)

    def test_cartan_is_abelian(self):
        L = sl2()
        sub = induced_subalgebra(L, Subspace.from_vectors(3, [[0, 1, 0]]))
        assert sub.algebra.dim == 1
        assert not sub.algebra.bracket_basis(0, 0)

    def test_borel_structure(self):
        L = sl2()
        sub = induced_subalgebra(L, Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]]))
        # basis rows are (e, h); [e, h] = -2e
        assert sub.algebra.bracket_basis(0, 1) == ((0, Fraction(-2)),)

    def test_embedding_round_trip(self):
        L = sl2()
        sub = induced_subalgebra(L, Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]]))
        x = sub.algebra.element([3, 5])
        assert sub.from_ambient(sub.to_ambient(x)) == x


class TestInducedRep:
    def test_adjoint_on_self_matches_ad(self):
        L = sl2()
        rep = induced_rep(L, Subspace.full(3), Subspace.full(3))
        assert rep.validate()
        for i in range(3):
            assert rep.actions[i] == ad(L, L.basis_element(i))

    def test_borel_on_line_through_e(self):
        L = sl2()
        borel = Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]])
        line = Subspace.from_vectors(3, [[1, 0, 0]])
        rep = induced_rep(L, borel, line)
        # basis rows are (e, h): e acts by 0, h acts by 2
        assert rep.actions[0] == QMatrix.zeros(1, 1)
        assert rep.actions[1] == QMatrix.from_rows([[2]])

    def test_not_invariant_raises(self):
        L = sl2()
        borel = Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]])
        line_f = Subspace.from_vectors(3, [[0, 0, 1]])
        with pytest.raises(liecore.NotInvariant):
            induced_rep(L, borel, line_f)


class TestSemidirect:
    def test_trivial_action_gives_direct_sum(self):
        L = abelian(2)
        rho = Representation(L, 2, (QMatrix.zeros(2, 2), QMatrix.zeros(2, 2)))
        out = semidirect(L, rho)
        assert out.dim == 4
        assert validate(out)
        assert not out._table  # everything commutes

    def test_sl2_on_natural_module(self):
        L = sl2()
        # natural 2-dim representation: e, h, f as 2x2 matrices
        rho = Representation(L, 2, (
            QMatrix.from_rows([[0, 1], [0, 0]]),
            QMatrix.from_rows([[1, 0], [0, -1]]),
            QMatrix.from_rows([[0, 0], [1, 0]]),
        ))
        assert rho.validate()
        out = semidirect(L, rho)
        assert out.dim == 5
        assert validate(out)

    def test_module_is_abelian_ideal(self):
        L = sl2()
        rho = Representation(L, 2, (
            QMatrix.from_rows([[0, 1], [0, 0]]),
            QMatrix.from_rows([[1, 0], [0, -1]]),
            QMatrix.from_rows([[0, 0], [1, 0]]),
        ))
        out = semidirect(L, rho)
        module = Subspace.from_vectors(5, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]])
        assert span_of_brackets(out, module, module).dim == 0
        assert module.contains_subspace(span_of_brackets(out, Subspace.full(5), module))


class TestOrthogonalComplement:
    def test_complement_of_zero(self):
        L = sl2()
        assert orthogonal_complement(L, Subspace.zero(3), killing(L)) == Subspace.full(3)

    def test_complement_of_e_line(self):
        # only Phi(e, f) is nonzero among pairings with e
        L = sl2()
        s = Subspace.from_vectors(3, [[1, 0, 0]])
        assert orthogonal_complement(L, s, killing(L)) == \
            Subspace.from_vectors(3, [[1, 0, 0], [0, 1, 0]])


class TestSerialization:
    def test_round_trip_exact(self):
        L = sl2()
        text = L.to_json()
        M = LieAlgebra.from_json(text)
        assert M.to_json() == text
        assert M.labels == L.labels
        assert M._table == L._table

    def test_fractions_survive(self):
        L = LieAlgebra(["a", "b", "c"], {(0, 1): [(2, Fraction(3, 7))]})
        M = LieAlgebra.from_json(L.to_json())
        assert M.bracket_basis(0, 1) == ((2, Fraction(3, 7)),)
