"""Schreier subgroup data, Smith normal form, order certificates."""

import dataclasses
import json
import random

import pytest

from burnside.cosets import enumerate_cosets
from burnside.presentation import parse_presentation
from burnside.subgrp import (
    Certificate,
    KernelCertifier,
    NotInSubgroup,
    abelian_invariants,
    abelian_torsion_quotient,
    determinant,
    infinite_order_certificate,
    mat_mul,
    rewrite_in_subgroup,
    schreier_data,
    smith_normal_form,
    snf_diagonal,
    verify_certificate,
)
from burnside.words import format_word, parse_word


def P(text):
    return parse_presentation(text)


DINF = "gens 2\nrel aa\nrel bb\n"
TRIANGLE = "gens 2\nrel aaa\nrel bbb\nrel ababab\n"
KLEIN = "gens 2\nrel aa\nrel bb\nrel abab\n"
B23 = "gens 2\nrel aaa\nrel bbb\nrel ababab\nrel aBaBaB\n"


# --- Schreier data ---------------------------------------------------------


def test_schreier_rank_index_2():
    # kernel of F2 -> Z2 (both generators nontrivial)
    free2 = P("gens 2\n")
    gens = [parse_word(w, 2) for w in ("aa", "bb", "ab")]
    t = enumerate_cosets(free2, gens, 100)
    assert t.closed and t.num_cosets == 2
    sd = schreier_data(t.rows, 2)
    # Nielsen-Schreier: rank = index*(m-1) + 1
    assert sd.num_gens == 3
    assert sorted(format_word(g, 2) for g in sd.gens) == ["aa", "ab", "bA"]


def test_schreier_rank_index_3():
    free2 = P("gens 2\n")
    gens = [parse_word(w, 2) for w in ("aaa", "b", "abA", "aabAA")]
    t = enumerate_cosets(free2, gens, 100)
    assert t.closed and t.num_cosets == 3
    sd = schreier_data(t.rows, 2)
    assert sd.num_gens == 4


def test_rewrite_rejects_nonmember():
    free2 = P("gens 2\n")
    gens = [parse_word(w, 2) for w in ("aa", "bb", "ab")]
    t = enumerate_cosets(free2, gens, 100)
    sd = schreier_data(t.rows, 2)
    with pytest.raises(NotInSubgroup):
        rewrite_in_subgroup(sd, parse_word("a", 2))
    # membership rewrite roundtrips through the generators
    w = parse_word("aabb", 2)
    assert rewrite_in_subgroup(sd, w)  # nonempty, no exception


# --- Smith normal form -----------------------------------------------------


def test_snf_hand_values():
    S, U, V = smith_normal_form([[2, 0], [0, 3]])
    assert snf_diagonal(S) == [1, 6]
    S, _, _ = smith_normal_form([[3, 0], [0, 3]])
    assert snf_diagonal(S) == [3, 3]
    S, _, _ = smith_normal_form([[2, 4], [4, 2]])
    assert snf_diagonal(S) == [2, 6]
    S, _, _ = smith_normal_form([[0, 0], [0, 0]])
    assert snf_diagonal(S) == [0, 0]


def test_snf_empty_matrix():
    S, U, V = smith_normal_form([], ncols=3)
    assert S == []
    assert V == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_determinant():
    assert determinant([[1, 2], [3, 4]]) == -2
    assert determinant([[1, 0], [0, 1]]) == 1
    assert determinant([[2, 0, 0], [0, 3, 0], [0, 0, 5]]) == 30


def test_snf_random_property():
    rng = random.Random(1789)
    for _ in range(300):
        nr = rng.randint(1, 6)
        nc = rng.randint(1, 6)
        M = [[rng.randint(-9, 9) for _ in range(nc)] for _ in range(nr)]
        S, U, V = smith_normal_form(M)
        assert mat_mul(mat_mul(U, M), V) == S
        assert determinant(U) in (1, -1)
        assert determinant(V) in (1, -1)
        diag = snf_diagonal(S)
        for d in diag:
            assert d >= 0
        for i in range(len(diag) - 1):
            if diag[i + 1] != 0 or diag[i] == 0:
                assert diag[i] == 0 or diag[i + 1] % diag[i] == 0
        # off-diagonal entries all zero
        for i, row in enumerate(S):
            for j, v in enumerate(row):
                if i != j:
                    assert v == 0


# --- abelian invariants ----------------------------------------------------


def test_abelian_invariants():
    ab = abelian_invariants(P(KLEIN))
    assert ab.torsion == (2, 2) and ab.free_rank == 0
    assert ab.finite and ab.torsion_order == 4
    ab = abelian_invariants(P("gens 2\n"))
    assert ab.torsion == () and ab.free_rank == 2
    assert not ab.finite
    # Z2 x Z3 collapses to a single invariant factor
    ab = abelian_invariants(P("gens 2\nrel aa\nrel bbb\nrel abAB\n"))
    assert ab.torsion == (6,) and ab.free_rank == 0
    ab = abelian_invariants(P(B23))
    assert ab.torsion == (3, 3) and ab.free_rank == 0
    # infinite dihedral abelianizes to Z2 x Z2, no free part
    ab = abelian_invariants(P(DINF))
    assert ab.torsion == (2, 2) and ab.free_rank == 0


# --- kernel certificates ---------------------------------------------------


def test_dinf_kernel_sees_translation():
    p = P(DINF)
    kc = KernelCertifier(p, abelian_torsion_quotient(p))
    assert kc.kernel_free_rank == 1
    assert kc.action.size == 4
    cert = kc.certify(parse_word("ab", 2))
    assert cert is not None and cert.power == 2
    ok, reason = verify_certificate(cert)
    assert ok, reason
    # torsion elements are not certifiable
    assert kc.certify(parse_word("a", 2)) is None
    assert kc.certify(()) is None


def test_triangle_kernel_rank_two():
    p = P(TRIANGLE)
    kc = KernelCertifier(p, abelian_torsion_quotient(p))
    assert kc.kernel_free_rank == 2
    assert kc.action.size == 9
    # ab has order 3 here, so no certificate can exist for it
    assert kc.certify(parse_word("ab", 2)) is None
    cert = kc.certify(parse_word("aB", 2))
    assert cert is not None and cert.power == 3
    ok, reason = verify_certificate(cert)
    assert ok, reason


def test_finite_group_certifies_nothing():
    p = P(KLEIN)
    assert infinite_order_certificate(
        p, parse_word("ab", 2), abelian_torsion_quotient(p)) is None
    p27 = P(B23)
    assert infinite_order_certificate(
        p27, parse_word("ab", 2), abelian_torsion_quotient(p27)) is None


def test_certificate_json_roundtrip():
    p = P(DINF)
    cert = infinite_order_certificate(p, parse_word("ab", 2),
                                      abelian_torsion_quotient(p))
    blob = json.dumps(cert.to_json_dict())
    back = Certificate.from_json_dict(json.loads(blob))
    ok, reason = verify_certificate(back)
    assert ok, reason
    assert back.word == cert.word and back.power == cert.power


def test_certificate_tampering_is_caught():
    p = P(DINF)
    cert = infinite_order_certificate(p, parse_word("ab", 2),
                                      abelian_torsion_quotient(p))
    bad = dataclasses.replace(cert, witness_coordinate=cert.witness_coordinate + 1)
    ok, reason = verify_certificate(bad)
    assert not ok and reason
    bad = dataclasses.replace(cert, power=cert.power * 2)
    ok, _ = verify_certificate(bad)
    assert not ok
    bad = dataclasses.replace(cert, kernel_index=cert.kernel_index + 1)
    ok, reason = verify_certificate(bad)
    assert not ok and "index" in reason
    bad = dataclasses.replace(cert, word=parse_word("a", 2))
    ok, _ = verify_certificate(bad)
    assert not ok
    bad = dataclasses.replace(cert, witness_position=cert.num_schreier_gens + 5)
    ok, _ = verify_certificate(bad)
    assert not ok


def test_quotient_spec_must_hold():
    p = P(DINF)
    wrong = abelian_torsion_quotient(P(TRIANGLE))
    with pytest.raises(ValueError):
        KernelCertifier(p, wrong)
