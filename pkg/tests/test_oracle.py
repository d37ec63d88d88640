"""Order-of-element oracle: cascade of strategies, evidence, certificates."""

from burnside import oracle
from burnside.presentation import parse_presentation
from burnside.subgrp import verify_certificate
from burnside.words import parse_word


def P(text):
    return parse_presentation(text)


ZSQ = "gens 2\nrel aa\n"  # Z2 * Z
TRIANGLE = "gens 2\nrel aaa\nrel bbb\nrel ababab\n"
B23 = "gens 2\nrel aaa\nrel bbb\nrel ababab\nrel aBaBaB\n"
DINF = "gens 2\nrel aa\nrel bb\n"


def order_of(text, word, **kw):
    p = P(text)
    return oracle.element_order(p, parse_word(word, 2), **kw)


def test_trivial_word():
    v = oracle.element_order(P(B23), ())
    assert v.finite and v.order == 1
    assert v.evidence["strategy"] == "trivial-word"


def test_free_product_orders():
    # <a, b | a^2>: a has order 2, b is free of infinite order
    v = order_of(ZSQ, "a")
    assert v.finite and v.order == 2
    v = order_of(ZSQ, "b")
    assert v.infinite
    assert v.certificate is not None
    ok, reason = verify_certificate(v.certificate)
    assert ok, reason


def test_triangle_group_split():
    # (3,3,3) triangle group: ab has order 3, aB acts as a translation
    v = order_of(TRIANGLE, "ab")
    assert v.finite and v.order == 3
    v = order_of(TRIANGLE, "aB")
    assert v.infinite
    ok, reason = verify_certificate(v.certificate)
    assert ok, reason


def test_finite_stage_uses_closure():
    v = order_of(B23, "aB")
    assert v.finite and v.order == 3
    assert v.evidence["strategy"] == "coset-closure"
    assert v.evidence["group_order"] == 27


def test_infinite_stage_skips_closure():
    ctx = oracle.StageContext(P(DINF))
    probe = ctx.infiniteness()
    assert probe is not None
    assert probe["probe"] == "kernel-abelianization-free-rank"
    assert ctx.known_infinite is not None
    v = oracle.element_order(P(DINF), parse_word("ab", 2), ctx=ctx)
    assert v.infinite
    # closure was skipped with a recorded reason, not attempted and failed
    # (evidence lives on unknown verdicts; here the certificate resolves it)
    ok, _ = verify_certificate(v.certificate)
    assert ok


def test_verdict_log_entry_shape():
    v = order_of(B23, "ab")
    entry = v.log_entry("ab")
    assert entry["word"] == "ab"
    assert entry["verdict"] == "finite"
    assert entry["order"] == 3
    assert "strategy" in entry
    v = order_of(DINF, "ab")
    entry = v.log_entry("ab")
    assert entry["verdict"] == "infinite"
    assert "certificate" in entry


def test_unknown_is_contagious_not_invented():
    # six fourth-power relators leave a group the desk budgets cannot
    # decide; the oracle must admit that rather than guess
    rels = "\n".join("rel " + w * 4
                     for w in ("a", "b", "ab", "aB", "aab", "abb"))
    p = P("gens 2\n" + rels + "\n")
    b = oracle.OracleBudgets(oracle_max_cosets=2000, kb_max_steps=20000)
    v = oracle.element_order(p, parse_word("aabb", 2), n_hint=4, budgets=b)
    assert v.kind == "unknown"
    attempts = v.evidence["attempts"]
    names = [a["strategy"] for a in attempts]
    assert "coset-closure" in names
    assert "kb-power" in names
    assert "kernel-certificate" in names


def test_kb_power_strategy_on_small_budget():
    # deny the closure strategy enough cosets so the cascade falls through
    b = oracle.OracleBudgets(oracle_max_cosets=5)
    v = order_of(B23, "ab", budgets=b)
    assert v.finite and v.order == 3
    assert v.evidence["strategy"] == "kb-power"


def test_n_hint_extends_power_search():
    # without the hint the power search stops too early for order 5
    p = P("gens 1\nrel aaaaa\n")
    v = oracle.element_order(p, parse_word("a", 1), n_hint=5)
    assert v.finite and v.order == 5


def test_stage_context_caches_are_reused():
    ctx = oracle.StageContext(P(B23))
    ctx.prepare_for_scan()
    v1 = oracle.element_order(P(B23), parse_word("a", 2), ctx=ctx)
    v2 = oracle.element_order(P(B23), parse_word("ab", 2), ctx=ctx)
    assert v1.order == 3 and v2.order == 3
    assert ctx.finite_stage_order() == 27
