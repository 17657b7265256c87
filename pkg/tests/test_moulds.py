"""Mould product, composition, inverses, symmetries, arborification."""

import random
from fractions import Fraction

import pytest

from armould.moulds import (
    AlienWordExpansion,
    Mould,
    arborify,
    builtin_mould,
    check_separative,
    check_symmetry,
    mould_compose,
    mould_inverse_comp,
    mould_inverse_mul,
    mould_mul,
    symmetral_from_letter_weights,
    symmetrel_geometric,
    transition_apply,
    words_over,
)
from armould.values import GaussianRational
from armould.words import EMPTY_WORD, letter, parse_forest, parse_word, word

AB = [letter(1), letter(2)]
CLOSED = [letter(n) for n in range(1, 9)]  # additively closed up to total norm 8


def random_table_mould(rng, alphabet, cap, empty=None):
    tbl = {}
    for w in words_over(alphabet, cap):
        tbl[w] = Fraction(rng.randint(-12, 12), rng.randint(1, 9))
    if empty is not None:
        tbl[EMPTY_WORD] = Fraction(empty)
    return Mould.from_table(tbl, cap, alphabet)


class TestProduct:
    def test_unit(self):
        rng = random.Random(7)
        m = random_table_mould(rng, AB, 3)
        unit = builtin_mould("unit1")
        p = mould_mul(unit, m)
        q = mould_mul(m, unit)
        for w in words_over(AB, 3):
            assert p.value(w) == m.value(w)
            assert q.value(w) == m.value(w)

    def test_single_letter_expansion(self):
        rng = random.Random(8)
        m = random_table_mould(rng, AB, 2)
        n = random_table_mould(rng, AB, 2)
        w = word(1)
        expected = m.value(EMPTY_WORD) * n.value(w) + m.value(w) * n.value(EMPTY_WORD)
        assert mould_mul(m, n).value(w) == expected

    def test_associative(self):
        rng = random.Random(9)
        for _ in range(5):
            l = random_table_mould(rng, AB, 4)
            m = random_table_mould(rng, AB, 4)
            n = random_table_mould(rng, AB, 4)
            left = mould_mul(mould_mul(l, m), n)
            right = mould_mul(l, mould_mul(m, n))
            for w in words_over(AB, 4):
                assert left.value(w) == right.value(w)


class TestComposition:
    def test_identity_right_unit(self):
        rng = random.Random(10)
        m = random_table_mould(rng, CLOSED, 3)
        comp = mould_compose(m, builtin_mould("identityI"))
        for w in words_over(AB, 3):
            assert comp.value(w) == m.value(w)

    def test_two_letter_expansion(self):
        rng = random.Random(11)
        m = random_table_mould(rng, CLOSED, 2)
        n = random_table_mould(rng, CLOSED, 2)
        w = parse_word("(1,2)")
        expected = m.value(word(3)) * n.value(w) + m.value(w) * n.value(word(1)) * n.value(word(2))
        assert mould_compose(m, n).value(w) == expected

    def test_associative(self):
        rng = random.Random(12)
        for _ in range(4):
            l = random_table_mould(rng, CLOSED, 3)
            m = random_table_mould(rng, CLOSED, 3, empty=0)
            n = random_table_mould(rng, CLOSED, 3, empty=0)
            left = mould_compose(mould_compose(l, m), n)
            right = mould_compose(l, mould_compose(m, n))
            for w in words_over(AB, 3):
                assert left.value(w) == right.value(w)

    def test_exp_and_log_are_mutually_inverse(self):
        expm = builtin_mould("exp")
        logm = builtin_mould("standard_log")
        ident = builtin_mould("identityI")
        for w in words_over([letter(1)], 5):
            assert mould_compose(expm, logm).value(w) == ident.value(w)
            assert mould_compose(logm, expm).value(w) == ident.value(w)


class TestInverses:
    def test_mul_inverse_of_unit(self):
        unit = builtin_mould("unit1")
        inv = mould_inverse_mul(unit, 4)
        for w in words_over(AB, 4):
            assert inv.value(w) == unit.value(w)

    def test_mul_inverse_length_one(self):
        tbl = {EMPTY_WORD: Fraction(1), word(1): Fraction(5, 3)}
        m = Mould.from_table(tbl, 1, [letter(1)])
        inv = mould_inverse_mul(m, 1)
        assert inv.value(word(1)) == Fraction(-5, 3)

    def test_mul_inverse_two_sided(self):
        rng = random.Random(13)
        m = random_table_mould(rng, AB, 4, empty=Fraction(3, 2))
        inv = mould_inverse_mul(m, 4)
        unit = builtin_mould("unit1")
        for w in words_over(AB, 4):
            assert mould_mul(m, inv).value(w) == unit.value(w)
            assert mould_mul(inv, m).value(w) == unit.value(w)

    def test_comp_inverse_of_identity(self):
        ident = builtin_mould("identityI")
        inv = mould_inverse_comp(ident, 3)
        for w in words_over(AB, 3):
            assert inv.value(w) == ident.value(w)

    def test_comp_inverse_constant_letter_value(self):
        c = Fraction(7, 2)
        m = Mould(lambda w: c if w.length == 1 else Fraction(0))
        inv = mould_inverse_comp(m, 1)
        assert inv.value(word(4)) == 1 / c

    def test_comp_inverse_exhaustive(self):
        rng = random.Random(14)
        m = random_table_mould(rng, CLOSED, 3, empty=0)
        inv = mould_inverse_comp(m, 3)
        ident = builtin_mould("identityI")
        comp = mould_compose(m, inv)
        for w in words_over(AB, 3):
            assert comp.value(w) == ident.value(w)

    def test_comp_inverse_two_sided(self):
        rng = random.Random(18)
        m = random_table_mould(rng, CLOSED, 3, empty=0)
        inv = mould_inverse_comp(m, 3)
        ident = builtin_mould("identityI")
        other = mould_compose(inv, m)
        for w in words_over(AB, 3):
            assert other.value(w) == ident.value(w)


class TestSymmetry:
    def test_constant_mould_fails_symmetral(self):
        m = Mould(lambda w: Fraction(1), alphabet=AB)
        rep = check_symmetry(m, "symmetral", 2)
        assert not rep.passed

    def test_standard_log_alternel(self):
        rep = check_symmetry(builtin_mould("standard_log"), "alternel", 4, AB)
        assert rep.passed
        # length (1,1) case: -1/2 - 1/2 + 1 = 0
        slog = builtin_mould("standard_log")
        total = slog.value(word(1, 2)) + slog.value(word(2, 1)) + slog.value(word(3))
        assert total == 0

    def test_redom_ledom_alternel(self):
        for name in ("redom", "ledom"):
            rep = check_symmetry(builtin_mould(name), "alternel", 4, AB)
            assert rep.passed, str(rep)

    def test_generated_symmetral(self):
        m = symmetral_from_letter_weights({1: Fraction(2, 3), 2: Fraction(-1, 5)})
        assert check_symmetry(m, "symmetral", 4, AB).passed

    def test_generated_symmetrel(self):
        m = symmetrel_geometric(Fraction(3, 7))
        assert check_symmetry(m, "symmetrel", 4, AB).passed

    def test_products_preserve_symmetry(self):
        rng = random.Random(15)
        for _ in range(20):
            x1 = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            x2 = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            se = mould_mul(symmetrel_geometric(x1), symmetrel_geometric(x2))
            assert check_symmetry(se, "symmetrel", 4, AB).passed
            w1 = {1: Fraction(rng.randint(-9, 9), rng.randint(1, 9)), 2: Fraction(rng.randint(-9, 9), rng.randint(1, 9))}
            w2 = {1: Fraction(rng.randint(-9, 9), rng.randint(1, 9)), 2: Fraction(rng.randint(-9, 9), rng.randint(1, 9))}
            sy = mould_mul(symmetral_from_letter_weights(w1), symmetral_from_letter_weights(w2))
            assert check_symmetry(sy, "symmetral", 4, AB).passed


class TestBuiltins:
    def test_redom_values(self):
        redom = builtin_mould("redom")
        assert redom.value(word(1)) == -1
        assert redom.value(word(5)) == -1
        assert redom.value(word(1, 2)) == Fraction(1, 2)
        assert redom.value(word(1, 1)) == Fraction(1, 2)

    def test_ledom_is_negative_redom(self):
        redom, ledom = builtin_mould("redom"), builtin_mould("ledom")
        for w in words_over(AB, 3):
            if w.length:
                assert ledom.value(w) == -redom.value(w)

    def test_standard_log_value(self):
        assert builtin_mould("standard_log").value(word(1, 2, 3)) == Fraction(1, 3)

    def test_redom_zero_norm_rejected(self):
        redom = builtin_mould("redom")
        with pytest.raises(ZeroDivisionError):
            redom.value(word(1, -1))

    def test_table_mould_rejects_beyond_cap(self):
        m = Mould.from_table({EMPTY_WORD: Fraction(1), word(1): Fraction(2)}, 1, [letter(1)])
        with pytest.raises(KeyError):
            m.value(word(1, 1))


class TestArborify:
    def test_cherry_simple(self):
        rng = random.Random(16)
        m = random_table_mould(rng, [letter(1), letter(2), letter(3)], 3)
        arb = arborify(m, "simple")
        f = parse_forest("1(2,3)")
        assert arb.value(f) == m.value(word(1, 2, 3)) + m.value(word(1, 3, 2))

    def test_cherry_contracting_adds_double_cover(self):
        m = symmetrel_geometric(Fraction(1, 3))
        arb = arborify(m, "contracting", counting="merges")
        f = parse_forest("1(2,3)")
        expected = m.value(word(1, 2, 3)) + m.value(word(1, 3, 2)) + 2 * m.value(word(1, 5))
        assert arb.value(f) == expected

    def test_single_node_both_modes(self):
        m = symmetrel_geometric(Fraction(2, 5))
        f = parse_forest("4")
        assert arborify(m, "simple").value(f) == m.value(word(4))
        assert arborify(m, "contracting").value(f) == m.value(word(4))

    def test_simple_arborified_of_symmetral_is_separative(self):
        m = symmetral_from_letter_weights({1: Fraction(1, 2), 2: Fraction(4, 3)})
        rep = check_separative(arborify(m, "simple"), AB, 4)
        assert rep.passed, str(rep)

    def test_contracting_arborified_of_symmetrel_is_separative(self):
        # separativity holds under the surjection counting, which makes covers
        # of a disjoint union the contracting shuffle of the parts' covers
        m = symmetrel_geometric(Fraction(5, 4))
        rep = check_separative(arborify(m, "contracting", counting="surjections"), AB, 4)
        assert rep.passed, str(rep)

    def test_merges_counting_breaks_separativity_on_antichains(self):
        # documented discrepancy: the classical worked example's counting
        # double-counts merged covers, so the antichain value differs from
        # the product by exactly one contraction term
        m = symmetrel_geometric(Fraction(5, 4))
        arb = arborify(m, "contracting", counting="merges")
        f1, f2 = parse_forest("1"), parse_forest("2")
        lhs = arb.value(f1 * f2)
        rhs = arb.value(f1) * arb.value(f2)
        assert lhs - rhs == m.value(word(3))

    def test_arborified_of_constant_mould_not_separative(self):
        m = Mould(lambda w: Fraction(1))
        rep = check_separative(arborify(m, "simple"), AB, 2)
        assert not rep.passed


class TestTransition:
    def test_ledom_norm_one(self):
        exp = transition_apply(builtin_mould("ledom"), 1)
        assert exp.terms == {word(1): GaussianRational(1)}

    def test_ledom_norm_two(self):
        exp = transition_apply(builtin_mould("ledom"), 2)
        assert exp.terms[word(2)] == 1
        assert exp.terms[word(1, 1)] == Fraction(-1, 2)
        assert len(exp.terms) == 2

    def test_standard_log_norm_two(self):
        exp = transition_apply(builtin_mould("standard_log"), 2)
        assert exp.terms[word(2)] == 1
        assert exp.terms[word(1, 1)] == Fraction(-1, 2)

    def test_non_integer_norm_rejected(self):
        with pytest.raises(ValueError):
            transition_apply(builtin_mould("ledom"), Fraction(1, 2))


class TestSerialization:
    def test_json_round_trip(self):
        rng = random.Random(17)
        m = random_table_mould(rng, AB, 2)
        text = m.to_json()
        back = Mould.from_json(text)
        for w in words_over(AB, 2):
            assert back.value(w) == m.value(w)
