"""Tests for the constructors: classical realizations, partitions,
nilpotent representatives, triple completion, Chevalley bases,
parabolics, weighted labels and the nilpotent search."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lieindex.exactla import Subspace, kernel, rank, subspace_sum, is_direct
from lieindex.liecore import (
    ad,
    bracket,
    killing,
    killing_pair,
    is_bracket_closed,
    span_of_brackets,
    validate,
)
from lieindex.construct import (
    ChevalleyAlgebra,
    ClassicalType,
    CompletionFailed,
    InadmissiblePartition,
    InvalidCartanMatrix,
    InvalidSpec,
    NotNilpotent,
    ParabolicSpec,
    Partition,
    RootDatum,
    admissible_partitions,
    borel,
    chevalley,
    classical,
    extreme_root_vectors,
    is_very_even,
    jordan_type,
    nilpotent_from_partition,
    nilpotent_search,
    parabolic,
    parse_type,
    regular_nilpotent,
    root_datum,
    sl2_complete,
    weighted_dynkin,
)


def brute_admissible(t: ClassicalType) -> set[tuple[int, ...]]:
    """Independent oracle: enumerate all partitions and filter."""
    n = t.matrix_size

    def parts_of(total, cap):
        if total == 0:
            yield ()
            return
        for first in range(min(total, cap), 0, -1):
            for rest in parts_of(total - first, first):
                yield (first,) + rest

    out = set()
    for lam in parts_of(n, n):
        if t.family == "A":
            out.add(lam)
        elif t.family == "C":
            if all(lam.count(p) % 2 == 0 for p in set(lam) if p % 2 == 1):
                out.add(lam)
        else:
            if all(lam.count(p) % 2 == 0 for p in set(lam) if p % 2 == 0):
                out.add(lam)
    return out


class TestClassical:
    def test_dims(self):
        assert classical(ClassicalType("A", 1)).algebra.dim == 3
        assert classical(ClassicalType("D", 4)).algebra.dim == 28   # 8*7/2
        assert classical(ClassicalType("C", 2)).algebra.dim == 10   # 2*2^2+2

    def test_validate_and_killing(self):
        for label in ["A2", "B2", "C2", "D4"]:
            ma = classical(parse_type(label))
            assert validate(ma.algebra)
            assert killing(ma.algebra).is_nondegenerate()

    def test_rank_bounds(self):
        with pytest.raises(ValueError):
            ClassicalType("D", 2)
        with pytest.raises(ValueError):
            ClassicalType("B", 1)

    def test_form_preserved(self):
        # every basis matrix X satisfies X^T S + S X = 0
        for label in ["B2", "C2", "D4"]:
            ma = classical(parse_type(label))
            S = ma.form
            n = ma.n
            for mat in ma.basis_mats:
                acc = {}
                for (i, j), v in mat.items():
                    for k in range(n):
                        if S.entry(i, k):   # (X^T S)_{jk} += X_{ij} S_{ik}
                            acc[(j, k)] = acc.get((j, k), 0) + v * S.entry(i, k)
                        if S.entry(k, i):   # (S X)_{kj} += S_{ki} X_{ij}
                            acc[(k, j)] = acc.get((k, j), 0) + v * S.entry(k, i)
                assert all(v == 0 for v in acc.values())


class TestPartitions:
    def test_a1(self):
        assert [p.parts for p in admissible_partitions(ClassicalType("A", 1))] == \
            [(2,), (1, 1)]

    def test_c2_frozen(self):
        assert [p.parts for p in admissible_partitions(ClassicalType("C", 2))] == \
            [(4,), (2, 2), (2, 1, 1), (1, 1, 1, 1)]

    def test_d4_contains_5_3(self):
        assert (5, 3) in {p.parts for p in admissible_partitions(ClassicalType("D", 4))}

    @pytest.mark.parametrize("label", ["A3", "B2", "B3", "C2", "C3", "D4"])
    def test_against_brute_force(self, label):
        t = parse_type(label)
        got = {p.parts for p in admissible_partitions(t)}
        assert got == brute_admissible(t)

    def test_very_even(self):
        d4 = ClassicalType("D", 4)
        assert is_very_even(d4, Partition((4, 4)))
        assert is_very_even(d4, Partition((2, 2, 2, 2)))
        assert not is_very_even(d4, Partition((5, 3)))


class TestNilpotents:
    def test_a1_single_block(self):
        ma = classical(ClassicalType("A", 1))
        e = nilpotent_from_partition(ma, Partition((2,)))
        assert ma.matrix_of(e) == {(0, 1): Fraction(1)}

    def test_a3_two_blocks_square_zero(self):
        ma = classical(ClassicalType("A", 3))
        e = nilpotent_from_partition(ma, Partition((2, 2)))
        m = ma.matrix_of(e)
        from lieindex.construct import _smul
        assert not _smul(m, m)
        assert jordan_type(ma, m) == Partition((2, 2))

    def test_d4_subregular_centralizer(self):
        ma = classical(ClassicalType("D", 4))
        e = nilpotent_from_partition(ma, Partition((5, 3)))
        assert kernel(ad(ma.algebra, e)).dim == 6

    def test_inadmissible(self):
        ma = classical(ClassicalType("D", 4))
        with pytest.raises(InadmissiblePartition):
            nilpotent_from_partition(ma, Partition((6, 2)))
        with pytest.raises(InadmissiblePartition):
            nilpotent_from_partition(ma, Partition((3, 3)))

    @pytest.mark.parametrize("label", ["A3", "B2", "C2", "C3"])
    def test_jordan_round_trip(self, label):
        ma = classical(parse_type(label))
        for lam in admissible_partitions(ClassicalType(ma.family, ma.rank)):
            e = nilpotent_from_partition(ma, lam)
            assert jordan_type(ma, ma.matrix_of(e)) == lam

    def test_deterministic(self):
        ma = classical(ClassicalType("B", 2))
        lam = Partition((3, 1, 1))
        e1 = nilpotent_from_partition(ma, lam)
        e2 = nilpotent_from_partition(ma, lam)
        assert e1 == e2


class TestSL2Complete:
    def test_sl2_standard(self):
        ma = classical(ClassicalType("A", 1))
        e = nilpotent_from_partition(ma, Partition((2,)))
        trip = sl2_complete(ma.algebra, e)
        assert trip.verify(ma.algebra)
        assert ma.matrix_of(trip.h) == {(0, 0): Fraction(1), (1, 1): Fraction(-1)}
        assert ma.matrix_of(trip.f) == {(1, 0): Fraction(1)}

    def test_postconditions(self):
        ma = classical(ClassicalType("A", 2))
        e = nilpotent_from_partition(ma, Partition((3,)))
        trip = sl2_complete(ma.algebra, e)
        assert trip.verify(ma.algebra)
        assert killing_pair(ma.algebra, trip.h, trip.h) != 0

    def test_rejects_zero_and_semisimple(self):
        ma = classical(ClassicalType("A", 1))
        with pytest.raises(NotNilpotent):
            sl2_complete(ma.algebra, ma.algebra.zero())
        h = ma.algebra.basis_element(ma.algebra.dim - 1)  # Cartan element
        with pytest.raises(NotNilpotent):
            sl2_complete(ma.algebra, h)

    @pytest.mark.parametrize("label", ["A3", "B2", "C2", "D4"])
    def test_all_orbits_complete(self, label):
        ma = classical(parse_type(label))
        for lam in admissible_partitions(ClassicalType(ma.family, ma.rank)):
            if all(p == 1 for p in lam.parts):
                continue
            e = nilpotent_from_partition(ma, lam)
            trip = sl2_complete(ma.algebra, e)
            assert trip.verify(ma.algebra)


class TestChevalley:
    def test_dims(self):
        assert chevalley(root_datum("A1")).algebra.dim == 3
        assert chevalley(root_datum("G2")).algebra.dim == 14   # 12 roots + 2
        assert chevalley(root_datum("B2")).algebra.dim == \
            classical(ClassicalType("B", 2)).algebra.dim

    def test_killing_normalization(self):
        ch = chevalley(root_datum("A2"))
        phi = killing(ch.algebra)
        for k in range(ch.num_pos):
            assert phi.gram.entry(k, ch.num_pos + k) == 1

    def test_invalid_cartan(self):
        bad = RootDatum("X2", ((2, -1), (-5, 2)),
                        ((Fraction(2), Fraction(-1)), (Fraction(-1), Fraction(2))))
        with pytest.raises(InvalidCartanMatrix):
            chevalley(bad)

    def test_regular_nilpotent_centralizer(self):
        for label, rk in [("A2", 2), ("B2", 2), ("G2", 2), ("A4", 4)]:
            ch = chevalley(root_datum(label))
            e = regular_nilpotent(ch)
            assert kernel(ad(ch.algebra, e)).dim == rk

    def test_highest_root(self):
        assert chevalley(root_datum("A2")).highest_root == (1, 1)
        assert chevalley(root_datum("G2")).highest_root == (3, 2)

    def test_extreme_vectors_paired_to_one(self):
        for label in ["A1", "A2", "G2"]:
            ch = chevalley(root_datum(label))
            lo, hi = ch.algebra, None
            e_top, e_bot = extreme_root_vectors(ch)
            assert killing_pair(ch.algebra, e_top, e_bot) == 1

    def test_cartan_is_killing_dual(self):
        # Phi(t_i, x) = alpha_i(x) for Cartan x, with alpha_i read through
        # the eigenvalue of ad x on the root vector
        ch = chevalley(root_datum("B2"))
        L = ch.algebra
        phi = killing(L)
        for i in range(ch.rank):
            ti = ch.cartan_index(i)
            for j in range(ch.rank):
                tj = ch.cartan_index(j)
                # eigenvalue of ad t_j on x_{alpha_i}
                simple = tuple(1 if k == i else 0 for k in range(ch.rank))
                vec = ad(L, L.basis_element(tj)).col(ch.root_index(simple))
                eig = vec[ch.root_index(simple)]
                assert phi.gram.entry(ti, tj) == eig


class TestParabolic:
    def test_full_composition(self):
        ma = classical(ClassicalType("A", 2))
        p, pu, l = parabolic(ma, ParabolicSpec.from_composition([3]))
        assert p.dim == ma.algebra.dim and pu.dim == 0 and l.dim == ma.algebra.dim

    def test_borel_sl2(self):
        ma = classical(ClassicalType("A", 1))
        p, pu, l = borel(ma)
        assert (p.dim, pu.dim, l.dim) == (2, 1, 1)

    def test_sl4_borel_dims(self):
        ma = classical(ClassicalType("A", 3))
        p, pu, l = parabolic(ma, ParabolicSpec.from_composition([1, 1, 1, 1]))
        assert (p.dim, pu.dim, l.dim) == (9, 6, 3)

    def test_structure(self):
        ma = classical(ClassicalType("C", 2))
        p, pu, l = parabolic(ma, ParabolicSpec.from_composition([1, 2, 1]))
        L = ma.algebra
        assert is_bracket_closed(L, p)
        assert is_bracket_closed(L, l)
        assert pu.contains_subspace(span_of_brackets(L, p, pu))  # ideal
        assert subspace_sum(l, pu) == p and is_direct(l, pu)

    def test_invalid_specs(self):
        ma = classical(ClassicalType("C", 2))
        with pytest.raises(InvalidSpec):
            parabolic(ma, ParabolicSpec.from_composition([3, 1]))  # not palindromic
        with pytest.raises(InvalidSpec):
            parabolic(ma, ParabolicSpec.from_composition([2, 1]))  # wrong total

    def test_chevalley_borel(self):
        ch = chevalley(root_datum("G2"))
        p, pu, l = borel(ch)
        assert (p.dim, pu.dim, l.dim) == (8, 6, 2)

    def test_chevalley_levi_subset(self):
        ch = chevalley(root_datum("A2"))
        p, pu, l = parabolic(ch, ParabolicSpec.from_levi({1}))
        assert (p.dim, pu.dim, l.dim) == (6, 2, 4)


class TestWeightedDynkin:
    def test_a1_regular(self):
        assert weighted_dynkin(ClassicalType("A", 1), Partition((2,))) == (2,)

    def test_a2(self):
        assert weighted_dynkin(ClassicalType("A", 2), Partition((3,))) == (2, 2)
        assert weighted_dynkin(ClassicalType("A", 2), Partition((2, 1))) == (1, 1)

    @pytest.mark.parametrize("label", ["A3", "B3", "C3", "D4"])
    def test_labels_in_range(self, label):
        t = parse_type(label)
        for lam in admissible_partitions(t):
            labels = weighted_dynkin(t, lam)
            assert all(v in (0, 1, 2) for v in labels)

    def test_regular_is_all_twos(self):
        assert weighted_dynkin(ClassicalType("D", 4), Partition((7, 1))) == (2, 2, 2, 2)
        assert weighted_dynkin(ClassicalType("C", 3), Partition((6,))) == (2, 2, 2)


class TestNilpotentSearch:
    def test_finds_regular(self):
        ch = chevalley(root_datum("A2"))
        e = nilpotent_search(ch, target_dim_z=2, budget=200, seed=1)
        assert e is not None
        assert kernel(ad(ch.algebra, e)).dim == 2

    def test_impossible_target(self):
        ch = chevalley(root_datum("A2"))
        assert nilpotent_search(ch, target_dim_z=1, budget=100, seed=1) is None

    def test_g2_subregular(self):
        ch = chevalley(root_datum("G2"))
        e = nilpotent_search(ch, target_dim_z=4, budget=2000, seed=1)
        assert e is not None
        assert kernel(ad(ch.algebra, e)).dim == 4
