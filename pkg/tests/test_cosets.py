"""Coset enumeration, realized finite groups, conjugacy, center."""

import pytest

from burnside import cosets
from burnside.presentation import parse_presentation
from burnside.words import format_word, parse_word


def P(text):
    return parse_presentation(text)


KLEIN = "gens 2\nrel aa\nrel bb\nrel abab\n"
C5 = "gens 1\nrel aaaaa\n"
B23 = "gens 2\nrel aaa\nrel bbb\nrel ababab\nrel aBaBaB\n"
DINF = "gens 2\nrel aa\nrel bb\n"


def test_klein_trivial_subgroup():
    t = cosets.enumerate_cosets(P(KLEIN), (), 100)
    assert t.closed
    assert t.num_cosets == 4


def test_c5():
    t = cosets.enumerate_cosets(P(C5), (), 100)
    assert t.closed
    assert t.num_cosets == 5


def test_order_27():
    t = cosets.enumerate_cosets(P(B23), (), 5000)
    assert t.closed
    assert t.num_cosets == 27


def test_subgroup_index():
    # <a> in Klein four has index 2
    t = cosets.enumerate_cosets(P(KLEIN), [parse_word("a", 2)], 100)
    assert t.closed
    assert t.num_cosets == 2
    # <ab> in the order-27 group has order 3, index 9
    t = cosets.enumerate_cosets(P(B23), [parse_word("ab", 2)], 5000)
    assert t.closed
    assert t.num_cosets == 9


def test_infinite_group_exhausts():
    t = cosets.enumerate_cosets(P(DINF), (), 400)
    assert not t.closed
    assert t.status == "exhausted"
    assert t.rows is None


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        cosets.enumerate_cosets(P(KLEIN), (), 0)


def test_closed_table_is_sane():
    t = cosets.enumerate_cosets(P(B23), (), 5000)
    n = t.num_cosets
    for c in range(n):
        for x in range(4):
            d = t.rows[c][x]
            assert 0 <= d < n
            assert t.rows[d][x ^ 1] == c  # inverse edges match


def test_realization_orders():
    r = cosets.realize(cosets.enumerate_cosets(P(KLEIN), (), 100))
    assert r.element_order(parse_word("ab", 2)) == 2
    assert r.element_order(()) == 1
    assert r.exponent() == 2
    r27 = cosets.realize(cosets.enumerate_cosets(P(B23), (), 5000))
    assert r27.element_order(parse_word("aB", 2)) == 3
    assert r27.exponent() == 3
    # every nonidentity element of the exponent-3 group has order 3
    orders = {r27.element_order(r27.reps[c]) for c in range(1, 27)}
    assert orders == {3}


def test_transversal_is_shortlex_minimal():
    r = cosets.realize(cosets.enumerate_cosets(P(B23), (), 5000))
    assert r.reps[0] == ()
    seen = set()
    for c in range(27):
        w = r.reps[c]
        assert r.eval_word(w) == c
        assert w not in seen
        seen.add(w)
    # reps are minimal: no strictly earlier word reaches the same coset
    from burnside.words import reduced_words, shortlex_less

    stream = reduced_words(2)
    reached = {(): 0}
    while len(reached) < 27:
        w = next(stream)
        c = r.eval_word(w)
        if c not in reached.values():
            reached[w] = c
    for w, c in reached.items():
        assert not shortlex_less(w, r.reps[c]) or w == r.reps[c]


def test_conjugacy_examples():
    klein = cosets.realize(cosets.enumerate_cosets(P(KLEIN), (), 100))
    yes, g = cosets.conjugacy_decide(klein, parse_word("a", 2),
                                     parse_word("b", 2))
    assert not yes and g is None
    yes, g = cosets.conjugacy_decide(klein, parse_word("a", 2),
                                     parse_word("a", 2))
    assert yes and g == ()
    r27 = cosets.realize(cosets.enumerate_cosets(P(B23), (), 5000))
    yes, g = cosets.conjugacy_decide(r27, parse_word("ab", 2),
                                     parse_word("ba", 2))
    assert yes
    assert format_word(g, 2) == "a"  # ba = a^-1 (ab) a in every group


def test_conjugacy_witness_verifies():
    r27 = cosets.realize(cosets.enumerate_cosets(P(B23), (), 5000))
    u, v = parse_word("ab", 2), parse_word("aab", 2)
    yes, g = cosets.conjugacy_decide(r27, u, v)
    if yes:
        from burnside.words import concat, invert

        w = concat(concat(invert(g), u), g)
        assert r27.element_row(w) == r27.element_row(v)


def test_center_sizes():
    klein = cosets.realize(cosets.enumerate_cosets(P(KLEIN), (), 100))
    assert len(cosets.center(klein)) == 4  # abelian: everything central
    c5 = cosets.realize(cosets.enumerate_cosets(P(C5), (), 100))
    assert len(cosets.center(c5)) == 5
    r27 = cosets.realize(cosets.enumerate_cosets(P(B23), (), 5000))
    z = cosets.center(r27)
    assert len(z) == 3
    assert z[0] == ()  # identity listed first (shortlex order)


def test_multiplication_table_is_group():
    r = cosets.realize(cosets.enumerate_cosets(P(KLEIN), (), 100))
    rows = r.multiplication_table()
    from burnside.dihedral import FiniteGroupTable

    FiniteGroupTable(rows, verify=True)  # raises if not a group


def test_csv_export_shape():
    t = cosets.enumerate_cosets(P(KLEIN), (), 100)
    text = cosets.export_csv(t)
    lines = [l for l in text.strip().splitlines() if l]
    assert len(lines) == 1 + 4  # header + one row per coset
    assert lines[0].split(",")[0] == "coset"


def test_defined_total_counts_collapses():
    # enumeration may define more cosets than survive
    t = cosets.enumerate_cosets(P(B23), (), 5000)
    assert t.defined_total >= t.num_cosets
