"""Tests for the exact probability algebra and information measures."""

import math
from fractions import Fraction

import pytest

from privsem.errors import (
    MassNotOne,
    MixedRepresentation,
    NameCollision,
    NegativeMass,
    OverlappingSubsets,
    ShapeMismatch,
    SourceMismatch,
    UnknownVariable,
)
from privsem.prob_core import (
    Alphabet,
    DeterministicMap,
    apply_map,
    conditional_entropy,
    entropy,
    key_identity_residual,
    mutual_information,
    product_compose,
    random_joint,
    validate_joint,
)

A2 = Alphabet("A", ("0", "1"))
B2 = Alphabet("B", ("0", "1"))


def uniform(*alphabets):
    n = math.prod(a.size for a in alphabets)
    return validate_joint([Fraction(1, n)] * n, alphabets)


class TestValidateJoint:
    def test_uniform_2x2_is_valid(self):
        j = validate_joint([Fraction(1, 4)] * 4, (A2, B2))
        assert j.exact
        assert sum(j.mass) == 1

    def test_deficit_reported(self):
        with pytest.raises(MassNotOne):
            validate_joint([0.25, 0.25, 0.25, 0.249], (A2, B2))

    def test_negative_mass(self):
        with pytest.raises(NegativeMass):
            validate_joint([Fraction(11, 10), Fraction(-1, 10),
                            Fraction(0), Fraction(0)], (A2, B2))

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            validate_joint([Fraction(1, 2)] * 2, (A2, B2))

    def test_mixed_representation_rejected(self):
        with pytest.raises(MixedRepresentation):
            validate_joint([Fraction(1, 4), 0.25, 0.25, 0.25], (A2, B2))

    def test_doubles_accepted_with_tag(self):
        j = validate_joint([0.25] * 4, (A2, B2))
        assert not j.exact

    def test_duplicate_symbols_rejected(self):
        with pytest.raises(ShapeMismatch):
            Alphabet("A", ("x", "x"))


class TestEntropy:
    def test_uniform_four_symbols(self):
        j = uniform(Alphabet("Z", ("a", "b", "c", "d")))
        assert entropy(j).value == pytest.approx(2.0, abs=1e-12)

    def test_point_mass(self):
        j = validate_joint([Fraction(1), Fraction(0)], (A2,))
        assert entropy(j).value == 0.0

    def test_bernoulli_quarter(self):
        # Direct evaluation of -sum p log2 p as the expected value.
        expected = -(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75))
        j = validate_joint([Fraction(1, 4), Fraction(3, 4)], (A2,))
        assert entropy(j).value == pytest.approx(expected, abs=1e-12)

    def test_unknown_variable(self):
        j = uniform(A2, B2)
        with pytest.raises(UnknownVariable):
            entropy(j, ("C",))


class TestMutualInformation:
    def test_product_joint_gives_zero(self):
        j = product_compose([
            validate_joint([Fraction(1, 3), Fraction(2, 3)], (A2,)),
            validate_joint([Fraction(1, 5), Fraction(4, 5)], (B2,)),
        ])
        assert mutual_information(j, ("A",), ("B",)).value == pytest.approx(0.0, abs=1e-12)

    def test_conditioning_on_argument_gives_zero(self):
        j = random_joint((2, 3), seed=5, names=("A", "B"))
        assert mutual_information(j, ("A",), ("B",), ("B",)).value == pytest.approx(
            0.0, abs=1e-12
        )

    def test_sum_of_two_iid_bits(self):
        # X1, X2 iid uniform bits; I(X1+X2; (X1,X2)) = H(X1+X2) since the sum
        # is a function of the pair.  Expected value from the 4-point joint:
        # P(sum=0)=1/4, P(sum=1)=1/2, P(sum=2)=1/4.
        expected = -(0.25 * math.log2(0.25) * 2 + 0.5 * math.log2(0.5))
        pair = uniform(Alphabet("X1", ("0", "1")), Alphabet("X2", ("0", "1")))
        total = Alphabet("T", ("0", "1", "2"))
        sum_map = DeterministicMap(
            (pair.variables[0], pair.variables[1]),
            total,
            {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "2"},
        )
        j = apply_map(pair, sum_map, "T")
        got = mutual_information(j, ("T",), ("X1", "X2")).value
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx(entropy(j, ("T",)).value, abs=1e-12)

    def test_overlapping_arguments_rejected(self):
        j = uniform(A2, B2)
        with pytest.raises(OverlappingSubsets):
            mutual_information(j, ("A",), ("A",))


class TestApplyMap:
    def test_identity_duplicates_variable(self):
        j = random_joint((3,), seed=1, names=("X",))
        m = DeterministicMap.identity(j.variables[0], "Y")
        extended = apply_map(j, m, "Y")
        assert conditional_entropy(extended, ("Y",), ("X",)).value == pytest.approx(
            0.0, abs=1e-12
        )

    def test_constant_map_zero_entropy(self):
        j = random_joint((3,), seed=2, names=("X",))
        target = Alphabet("C", ("c",))
        m = DeterministicMap((j.variables[0],), target,
                             {s: "c" for s in j.variables[0].symbols})
        extended = apply_map(j, m, "C")
        assert entropy(extended, ("C",)).value == 0.0

    def test_xor_of_iid_bits(self):
        pair = uniform(Alphabet("X1", ("0", "1")), Alphabet("X2", ("0", "1")))
        xor = DeterministicMap(
            (pair.variables[0], pair.variables[1]),
            Alphabet("P", ("0", "1")),
            {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "0"},
        )
        j = apply_map(pair, xor, "P")
        marg = j.marginal(("P",))
        assert marg.mass == (Fraction(1, 2), Fraction(1, 2))

    def test_marginal_over_old_variables_unchanged(self):
        j = random_joint((2, 3), seed=3, names=("S", "X"))
        m = DeterministicMap.identity(j.variables[1], "H")
        extended = apply_map(j, m, "H")
        assert extended.marginal(("S", "X")).mass == j.mass

    def test_source_mismatch(self):
        j = random_joint((2,), seed=4, names=("X",))
        other = Alphabet("X", ("p", "q", "r"))
        m = DeterministicMap.identity(other, "Y")
        with pytest.raises(SourceMismatch):
            apply_map(j, m, "Y")


class TestProductCompose:
    def test_two_fair_bits(self):
        j = product_compose([uniform(A2), uniform(B2)])
        assert j.mass == tuple([Fraction(1, 4)] * 4)

    def test_single_part_unchanged(self):
        j = uniform(A2)
        assert product_compose([j]) is j

    def test_cross_part_mi_zero(self):
        j = product_compose([
            random_joint((2, 2), seed=10, names=("S1", "X1")),
            random_joint((3, 2), seed=11, names=("S2", "X2")),
        ])
        assert mutual_information(j, ("S1", "X1"), ("S2", "X2")).value == pytest.approx(
            0.0, abs=1e-12
        )

    def test_name_collision(self):
        with pytest.raises(NameCollision):
            product_compose([uniform(A2), uniform(Alphabet("A", ("x", "y")))])


class TestKeyIdentity:
    def test_random_shapes(self):
        seed = 0
        for shape in [(2, 2, 2), (3, 2, 4), (4, 4, 4), (2, 4, 3)]:
            for _ in range(10):
                j = random_joint(shape, seed=seed, names=("S", "X", "U"))
                seed += 1
                assert abs(key_identity_residual(j)) <= 1e-9

    def test_constant_u(self):
        j = random_joint((3, 3), seed=77, names=("S", "X"))
        const = Alphabet("Uc", ("u",))
        m = DeterministicMap((j.variables[1],), const,
                             {s: "u" for s in j.variables[1].symbols})
        extended = apply_map(j, m, "U")
        assert abs(key_identity_residual(extended)) <= 1e-9

    def test_fully_dependent(self):
        j = random_joint((4,), seed=78, names=("S",))
        ext = apply_map(j, DeterministicMap.identity(j.variables[0], "X"), "X")
        ext = apply_map(ext, DeterministicMap.identity(j.variables[0], "U"), "U")
        assert abs(key_identity_residual(ext)) <= 1e-9


class TestRandomJoint:
    def test_normalized(self):
        j = random_joint((2, 3), seed=7)
        assert sum(j.mass) == 1
        assert len(j.mass) == 6

    def test_same_seed_identical(self):
        assert random_joint((3, 3), seed=9).mass == random_joint((3, 3), seed=9).mass

    def test_different_seeds_differ(self):
        assert random_joint((3, 3), seed=1).mass != random_joint((3, 3), seed=2).mass

    def test_zero_fraction(self):
        j = random_joint((4, 4), seed=21, zero_fraction=0.5)
        assert any(m == 0 for m in j.mass)
        assert sum(j.mass) == 1


class TestAlgebraicProperties:
    def test_chain_rule(self):
        for seed in range(20):
            j = random_joint((3, 4), seed=seed, names=("A", "B"),
                             zero_fraction=0.2 if seed % 2 else 0.0)
            lhs = entropy(j, ("A", "B")).value
            rhs = entropy(j, ("A",)).value + conditional_entropy(j, ("B",), ("A",)).value
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_marginalization_commutes(self):
        for seed in range(10):
            j = random_joint((3, 2, 3), seed=seed, names=("A", "B", "C"))
            direct = entropy(j, ("A", "C")).value
            via_marginal = entropy(j.marginal(("A", "C"))).value
            assert direct == pytest.approx(via_marginal, abs=1e-12)

    def test_dual_difference_forms_agree(self):
        # H(B|A) - H(A|B) == H(B) - H(A), the chain-rule identity behind the
        # two displayed forms of the first lower bound.
        for seed in range(20):
            j = random_joint((4, 3), seed=seed + 100, names=("A", "B"))
            lhs = (conditional_entropy(j, ("B",), ("A",)).value
                   - conditional_entropy(j, ("A",), ("B",)).value)
            rhs = entropy(j, ("B",)).value - entropy(j, ("A",)).value
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_rational_marginals_exact(self):
        j = random_joint((3, 3, 2), seed=42, names=("A", "B", "C"))
        marg = j.marginal(("A",))
        assert all(isinstance(m, Fraction) for m in marg.mass)
        assert sum(marg.mass) == 1
        recomposed = j.marginal(("A", "B")).marginal(("A",))
        assert recomposed.mass == marg.mass
