"""Knuth-Bendix layer: seeding, completion, normal forms, order detector."""

import random

import pytest

from burnside import cosets, rewrite
from burnside.presentation import free_presentation, parse_presentation
from burnside.words import (
    format_word,
    free_reduce,
    parse_word,
    shortlex_key,
    shortlex_less,
)


def P(text):
    return parse_presentation(text)


def test_seed_rules_a_squared():
    system = rewrite.rules_from_presentation(P("gens 1\nrel aa\n"))
    rules = set(system.rules)
    assert ((0, 0), ()) in rules  # aa -> 1
    assert ((1,), (0,)) in rules  # A -> a, since a comes first in shortlex


def test_seed_rules_free_group():
    system = rewrite.rules_from_presentation(free_presentation(2))
    # cancellation only: xX -> 1 for all four letters
    assert set(system.rules) == {
        ((0, 1), ()), ((1, 0), ()), ((2, 3), ()), ((3, 2), ())}


def test_seed_orientation_abab():
    # relator abab splits into ab = (ab)^-1 = BA; the rule must point
    # from the shortlex-larger side down: BA -> ab, never ab -> BA
    system = rewrite.rules_from_presentation(P("gens 2\nrel abab\n"))
    ba_rule = [(l, r) for l, r in system.rules if l == (3, 1)]
    assert ba_rule == [((3, 1), (0, 2))]
    assert all(shortlex_less(r, l) for l, r in system.rules)


def test_rule_invariant_after_completion():
    for text in ["gens 2\nrel aa\nrel bb\nrel abab\n",
                 "gens 2\nrel aaa\nrel bbb\nrel ababab\n",
                 "gens 2\nrel aa\nrel bb\n"]:
        system = rewrite.complete_presentation(P(text))
        assert all(shortlex_less(r, l) for l, r in system.rules)


def test_reduce_examples():
    klein = rewrite.complete_presentation(P("gens 2\nrel aa\nrel bb\nrel abab\n"))
    assert klein.reduce(parse_word("abab", 2)) == ()
    assert klein.reduce(()) == ()
    dinf = rewrite.complete_presentation(P("gens 2\nrel aa\nrel bb\n"))
    assert dinf.reduce(parse_word("aab", 2)) == parse_word("b", 2)


def test_klein_four_normal_forms():
    system = rewrite.complete_presentation(P("gens 2\nrel aa\nrel bb\nrel abab\n"))
    assert system.confluent
    count, stabilized = rewrite.count_normal_forms(system, 10)
    assert (count, stabilized) == (4, True)
    nfs = {format_word(w, 2) for w in rewrite.normal_forms(system, 10)}
    assert nfs == {"1", "a", "b", "ab"}


def test_dinf_normal_forms_alternating():
    system = rewrite.complete_presentation(P("gens 2\nrel aa\nrel bb\n"))
    assert system.confluent
    count, stabilized = rewrite.count_normal_forms(system, 6)
    assert (count, stabilized) == (13, False)
    # alternating words in a, b: cross-check the first 10 in shortlex
    # against brute force over raw strings of length <= 5
    brute = []

    def walk(w):
        if len(w) > 5:
            return
        if w:
            brute.append(w)
        for x in "ab":
            if not w or w[-1] != x:
                walk(w + x)

    walk("")
    brute = [""] + brute
    brute.sort(key=lambda s: (len(s), s))
    got = [format_word(w, 2) for w in rewrite.normal_forms(system, 5)]
    want = ["1" if s == "" else s for s in brute]
    assert got[:10] == want[:10]


def test_free_rank2_census():
    system = rewrite.knuth_bendix(
        rewrite.rules_from_presentation(free_presentation(2)))
    assert system.confluent
    count, stabilized = rewrite.count_normal_forms(system, 2)
    assert (count, stabilized) == (17, False)
    assert rewrite.language_infinite(system)


def test_order27_normal_forms():
    system = rewrite.complete_presentation(
        P("gens 2\nrel aaa\nrel bbb\nrel ababab\nrel aBaBaB\n"))
    assert system.confluent
    count, stabilized = rewrite.count_normal_forms(system, 20)
    assert (count, stabilized) == (27, True)


def test_count_rejects_nonconfluent():
    system = rewrite.rules_from_presentation(P("gens 2\nrel aa\nrel bb\n"))
    with pytest.raises(ValueError):
        rewrite.count_normal_forms(system, 4)


def test_language_infinite_vs_finite():
    klein = rewrite.complete_presentation(P("gens 2\nrel aa\nrel bb\nrel abab\n"))
    assert not rewrite.language_infinite(klein)
    dinf = rewrite.complete_presentation(P("gens 2\nrel aa\nrel bb\n"))
    assert rewrite.language_infinite(dinf)


def test_finite_order_by_powers():
    klein = rewrite.complete_presentation(P("gens 2\nrel aa\nrel bb\nrel abab\n"))
    assert rewrite.finite_order_by_powers(klein, parse_word("ab", 2), 10) == 2
    assert rewrite.finite_order_by_powers(klein, (), 10) == 1
    dinf = rewrite.complete_presentation(P("gens 2\nrel aa\nrel bb\n"))
    assert rewrite.finite_order_by_powers(dinf, parse_word("ab", 2), 50) is None


def test_normal_form_equality_matches_cosets():
    # words of length <= 6 over the Klein presentation: NF equality must
    # agree with equality of coset actions
    p = P("gens 2\nrel aa\nrel bb\nrel abab\n")
    system = rewrite.complete_presentation(p)
    table = cosets.enumerate_cosets(p, (), 100)
    r = cosets.realize(table)

    all_words = [()]
    frontier = [()]
    for _ in range(6):
        nxt = []
        for w in frontier:
            for x in range(4):
                if w and x == (w[-1] ^ 1):
                    continue
                nxt.append(w + (x,))
        all_words.extend(nxt)
        frontier = nxt

    rows = {}
    for w in all_words:
        nf = system.reduce(w)
        row = r.element_row(w)
        if nf in rows:
            assert rows[nf] == row
        else:
            rows[nf] = row
    # distinct normal forms act distinctly
    assert len({tuple(v) for v in rows.values()}) == len(rows)


def test_soundness_random_relator_insertions():
    # inserting a conjugated relator anywhere never changes the normal form
    p = P("gens 2\nrel aaa\nrel bbb\nrel ababab\nrel aBaBaB\n")
    system = rewrite.complete_presentation(p)
    rng = random.Random(2024)
    relators = [list(r) for r in p.relators]
    for _ in range(200):
        w = []
        prev = None
        for _ in range(rng.randrange(0, 12)):
            x = rng.randrange(4)
            if prev is not None and x == prev ^ 1:
                continue
            w.append(x)
            prev = x
        base = tuple(w)
        rel = rng.choice(relators)
        rot = rng.randrange(len(rel))
        conj = rel[rot:] + rel[:rot]
        if rng.random() < 0.5:
            conj = [x ^ 1 for x in reversed(conj)]
        pos = rng.randrange(len(base) + 1)
        noisy = base[:pos] + tuple(conj) + base[pos:]
        assert system.reduce(noisy) == system.reduce(base)


def test_budget_exhaustion_is_status():
    p = P("gens 2\nrel aaa\nrel bbb\nrel ababab\nrel aBaBaB\n")
    system = rewrite.knuth_bendix(rewrite.rules_from_presentation(p),
                                  max_steps=40)
    assert not system.confluent
    assert system.stats["budget_hit"] == "max_steps"
    # the partial system is still sound: every rule is an equality in the
    # group, checked against the realized order-27 action
    table = cosets.enumerate_cosets(p, (), 5000)
    r = cosets.realize(table)
    for lhs, rhs in system.rules:
        assert r.element_row(lhs) == r.element_row(rhs)


def test_format_rules_roundtrip_text():
    system = rewrite.complete_presentation(P("gens 1\nrel aa\n"))
    text = rewrite.format_rules(system)
    assert "aa -> 1" in text
    assert "A -> a" in text
    assert text.count("\n") == len(system.rules)
