"""Tests for the FRL/SFRL constructions and the separation technique."""

import math
from fractions import Fraction

import pytest

from privsem.errors import BijectionMismatch, NonRationalInput
from privsem.prob_core import (
    Alphabet,
    entropy,
    mutual_information,
    random_joint,
    validate_joint,
)
from privsem.representation import (
    apply_separation,
    enumerate_separations,
    frl_construct,
    sfrl_construct,
)

X2 = Alphabet("X", ("0", "1"))
Y2 = Alphabet("Y", ("0", "1"))


def assert_exact_frl(result, j2):
    """Independence, determinism, and cardinality checks, all exact."""
    x_name, y_name, u_name = result.extended.var_names
    nx = j2.variables[0].size
    ny = j2.variables[1].size
    marg_xu = result.extended.marginal((x_name, u_name))
    px = j2.marginal((x_name,)).mass
    for ix in range(nx):
        for k in range(result.u_size):
            cell = marg_xu.mass[ix * result.u_size + k]
            assert cell - px[ix] * result.u_pmf[k] == 0
    # Determinism: one positive y per (x, u) cell with positive mass.
    for ix, xs in enumerate(j2.variables[0].symbols):
        for k, us in enumerate(result.u_alphabet.symbols):
            positives = [
                ys for ys in j2.variables[1].symbols
                if result.extended.prob((xs, ys, us)) > 0
            ]
            assert len(positives) <= 1
            if positives:
                assert result.decoder(xs, us) == positives[0]
    assert result.u_size <= nx * (ny - 1) + 1
    assert sum(result.u_pmf) == 1


class TestFrl:
    def test_y_independent_of_x_carries_y(self):
        # P(x, y) = P(x) P(y): every row has identical intervals, so the
        # refinement is the row itself and U plays the role of Y.
        j = validate_joint(
            [Fraction(1, 3) * Fraction(1, 4), Fraction(1, 3) * Fraction(3, 4),
             Fraction(2, 3) * Fraction(1, 4), Fraction(2, 3) * Fraction(3, 4)],
            (X2, Y2),
        )
        result = frl_construct(j)
        assert_exact_frl(result, j)
        assert result.u_size == 2
        assert sorted(result.u_pmf) == sorted((Fraction(1, 4), Fraction(3, 4)))
        assert mutual_information(
            result.extended, ("X",), ("U",)
        ).value == pytest.approx(0.0, abs=1e-12)

    def test_deterministic_y_needs_no_randomness(self):
        j = validate_joint(
            [Fraction(1, 3), Fraction(0), Fraction(0), Fraction(2, 3)], (X2, Y2)
        )
        result = frl_construct(j)
        assert result.u_size == 1
        assert result.decoder("0", "u0") == "0"
        assert result.decoder("1", "u0") == "1"

    def test_two_row_refinement_atoms(self):
        # Rows (1/2, 1/2) and (1/4, 3/4) cut [0,1) at {1/4, 1/2}, giving
        # atoms of mass 1/4, 1/4, 1/2; verified cell-by-cell below.
        j = validate_joint(
            [Fraction(1, 4), Fraction(1, 4), Fraction(1, 8), Fraction(3, 8)],
            (X2, Y2),
        )
        result = frl_construct(j)
        assert_exact_frl(result, j)
        assert sorted(result.u_pmf) == [Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)]

    def test_random_rational_instances_exact(self):
        for seed in range(25):
            nx = 2 + seed % 4
            ny = 2 + (seed * 7) % 4
            j = random_joint((nx, ny), seed=seed, names=("X", "Y"),
                             zero_fraction=0.15 if seed % 3 == 0 else 0.0)
            result = frl_construct(j)
            assert_exact_frl(result, j)

    def test_reconstructs_conditional_rows(self):
        j = random_joint((3, 3), seed=4, names=("X", "Y"))
        result = frl_construct(j)
        # Summing atom masses through the decoder must give back P(y | x).
        px = j.marginal(("X",)).mass
        for ix, xs in enumerate(j.variables[0].symbols):
            for iy, ys in enumerate(j.variables[1].symbols):
                rebuilt = sum(
                    (length for k, length in enumerate(result.u_pmf)
                     if result.decoder(xs, result.u_alphabet.symbols[k]) == ys),
                    Fraction(0),
                )
                assert rebuilt * px[ix] == j.mass[ix * 3 + iy]

    def test_require_exact_rejects_doubles(self):
        j = validate_joint([0.25, 0.25, 0.25, 0.25], (X2, Y2))
        with pytest.raises(NonRationalInput):
            frl_construct(j, require_exact=True)
        frl_construct(j)  # lifted to exact binary fractions without the flag


class TestSfrl:
    def test_independent_case_meets_bound(self):
        j = validate_joint([Fraction(1, 4)] * 4, (X2, Y2))
        result = sfrl_construct(j, restarts=2, seed=0)
        assert result.measured["I(X;U|Y)"] == pytest.approx(0.0, abs=1e-9)
        assert result.meets_sfrl_bound

    def test_never_worse_than_plain_construction(self):
        for seed in range(15):
            j = random_joint((2 + seed % 4, 2 + (seed * 5) % 4), seed=seed + 50,
                             names=("X", "Y"))
            plain = frl_construct(j)
            strong = sfrl_construct(j, restarts=4, seed=seed)
            assert (strong.measured["I(X;U|Y)"]
                    <= plain.measured["I(X;U|Y)"] + 1e-12)
            assert_exact_frl(strong, j)

    def test_restarts_zero_is_deterministic(self):
        j = random_joint((3, 4), seed=8, names=("X", "Y"))
        a = sfrl_construct(j, restarts=0, seed=1)
        b = sfrl_construct(j, restarts=0, seed=2)
        assert a.u_pmf == b.u_pmf
        assert a.measured == b.measured

    def test_bound_flag_on_random_instances(self):
        for seed in range(20):
            j = random_joint((2 + seed % 4, 2 + (seed * 3) % 4), seed=seed + 200,
                             names=("X", "Y"))
            result = sfrl_construct(j, restarts=4, seed=seed)
            i_xy = mutual_information(j, ("X",), ("Y",)).value
            assert (result.measured["I(X;U|Y)"]
                    <= math.log2(i_xy + 1) + 4 + 1e-9)
            assert result.meets_sfrl_bound


class TestSeparations:
    def test_size_six(self):
        reps = enumerate_separations(6)
        assert [(r.sizes, r.padded) for r in reps] == [
            ((2, 3), False), ((3, 2), False)]

    def test_size_four(self):
        reps = enumerate_separations(4)
        assert [(r.sizes, r.padded) for r in reps] == [((2, 2), False)]

    def test_size_five_padded(self):
        reps = enumerate_separations(5)
        assert [(r.sizes, r.padded) for r in reps] == [((2, 3), True), ((3, 2), True)]
        for rep in reps:
            cells = {pair for _, pair in rep.bijection}
            n1, n2 = rep.sizes
            hole = (str(n1 - 1), str(n2 - 1))
            assert hole not in cells
            assert len(cells) == 5

    def test_size_three_uses_four(self):
        reps = enumerate_separations(3)
        assert [(r.sizes, r.padded) for r in reps] == [((2, 2), True)]

    def test_size_two_has_none(self):
        assert enumerate_separations(2) == []

    def test_apply_uniform_six(self):
        rep = enumerate_separations(6)[0]
        pmf = validate_joint([Fraction(1, 6)] * 6, (rep.source,))
        j = apply_separation(pmf, rep)
        assert j.mass == tuple([Fraction(1, 6)] * 6)

    def test_apply_point_mass(self):
        rep = enumerate_separations(4)[0]
        pmf = validate_joint(
            [Fraction(1), Fraction(0), Fraction(0), Fraction(0)], (rep.source,)
        )
        j = apply_separation(pmf, rep)
        assert sorted(j.mass, reverse=True)[0] == 1

    def test_apply_padded_five(self):
        rep = enumerate_separations(5)[0]
        pmf = validate_joint([Fraction(1, 5)] * 5, (rep.source,))
        j = apply_separation(pmf, rep)
        assert sorted(j.mass) == [Fraction(0)] + [Fraction(1, 5)] * 5

    def test_entropy_preserved(self):
        for seed in range(20):
            size = (5, 6, 7, 8, 9, 12)[seed % 6]
            for rep in enumerate_separations(size):
                pmf = random_joint((size,), seed=seed, names=("S",))
                pmf = validate_joint(
                    pmf.mass, (Alphabet("S", rep.source.symbols),)
                )
                split = apply_separation(pmf, rep)
                assert entropy(split).value == pytest.approx(
                    entropy(pmf).value, abs=1e-12
                )

    def test_bijection_mismatch(self):
        rep = enumerate_separations(6)[0]
        pmf = validate_joint([Fraction(1, 4)] * 4, (Alphabet("S", ("a", "b", "c", "d")),))
        with pytest.raises(BijectionMismatch):
            apply_separation(pmf, rep)

    def test_component_maps_reconstruct_symbols(self):
        rep = enumerate_separations(6)[1]
        m1, m2 = rep.component_maps()
        pairs = {(m1(s), m2(s)) for s in rep.source.symbols}
        assert len(pairs) == 6
