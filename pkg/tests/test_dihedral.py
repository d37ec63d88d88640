"""Dihedral product targets and the embedding search."""

import math
import random

import pytest

from burnside import dihedral as dh
from burnside import tower


def test_dihedral_small():
    k4 = dh.build_dihedral(2)
    assert k4.order == 4
    assert k4.is_abelian()
    assert k4.exponent() == 2
    d6 = dh.build_dihedral(3)
    assert d6.order == 6
    assert not d6.is_abelian()
    assert d6.exponent() == 6
    d8 = dh.build_dihedral(4)
    assert d8.order == 8
    assert set(d8.order_spectrum()) == {1, 2, 4}
    assert d8.exponent() == 4


def test_cyclic_and_quaternion():
    assert dh.build_cyclic(5).exponent() == 5
    q8 = dh.build_quaternion()
    assert q8.order == 8
    assert q8.exponent() == 4
    # exactly one involution: the reason Q8 avoids dihedral products
    assert q8.order_spectrum()[2] == 1
    assert q8.order_spectrum()[4] == 6


def test_table_verification_catches_garbage():
    with pytest.raises(dh.TableError):
        dh.FiniteGroupTable([[0, 1], [1, 1]], verify=True)  # not a bijection
    with pytest.raises(dh.TableError):
        # row/column permutation ok but not associative
        dh.FiniteGroupTable(
            [[0, 1, 2, 3, 4],
             [1, 0, 3, 4, 2],
             [2, 4, 0, 1, 3],
             [3, 2, 4, 0, 1],
             [4, 3, 1, 2, 0]], verify=True)


def test_csv_roundtrip(tmp_path):
    d8 = dh.build_dihedral(4)
    text = d8.to_csv()
    back = dh.FiniteGroupTable.from_csv(text)
    assert back.rows == d8.rows
    assert back.order == 8


def test_direct_product_pins():
    c2 = dh.build_cyclic(2)
    klein = dh.direct_product([c2, c2])
    assert klein.order == 4 and klein.exponent() == 2
    p = dh.direct_product([dh.build_dihedral(2), dh.build_dihedral(2)])
    assert p.order == 16 and p.exponent() == 2
    p = dh.direct_product([dh.build_dihedral(4), dh.build_dihedral(4)])
    assert p.order == 64 and p.exponent() == 4


def test_direct_product_cell_budget():
    # order 512 squared exceeds the 2^16-cell cap
    with pytest.raises(dh.TableError):
        dh.direct_product([dh.build_dihedral(4)] * 3)


def test_product_exponent_is_lcm():
    rng = random.Random(7)
    pool = [dh.build_cyclic(k) for k in (2, 3, 4, 5, 6)]
    pool += [dh.build_dihedral(h) for h in (2, 3, 4)]
    for _ in range(20):
        parts = rng.sample(pool, 2)
        try:
            prod = dh.direct_product(parts)
        except dh.TableError:
            continue
        want = math.lcm(*(t.exponent() for t in parts))
        assert prod.exponent() == want


def test_lazy_product_agrees_with_table():
    factors = [dh.build_dihedral(4), dh.build_dihedral(2)]
    lazy = dh.LazyProduct(factors)
    table = dh.direct_product(factors)
    assert lazy.order == table.order
    assert lazy.exponent() == table.exponent()
    # identical order spectra, counted without materializing the table
    spectrum = table.order_spectrum()
    for d, count in spectrum.items():
        assert sum(1 for _ in lazy.elements_of_order(d)) == count
    assert lazy.element_order(lazy.identity) == 1
    # mul/inverse consistency on a few coordinates
    g = (2, 1)
    h = (3, 2)
    gh = lazy.mul(g, h)
    assert lazy.mul(lazy.inverse(g), gh) == h


def test_minimal_generating_tuple():
    assert dh.minimal_generating_tuple(dh.build_cyclic(4)) == [1]
    assert len(dh.minimal_generating_tuple(dh.build_dihedral(2))) == 2
    assert dh.minimal_generating_tuple(dh.build_cyclic(1)) == []


def test_spec_decomposition():
    s = dh.DihedralProductSpec(2)
    assert (s.k, s.n0) == (1, 1)
    s = dh.DihedralProductSpec(4)
    assert (s.k, s.n0) == (2, 1)
    s = dh.DihedralProductSpec(12)
    assert (s.k, s.n0) == (2, 3)
    amb = s.ambient(2)
    assert amb.order == 24 * 8 * 8
    with pytest.raises(ValueError):
        dh.DihedralProductSpec(0)


def test_klein_embeds_identically():
    r = dh.embed_search(dh.build_klein_four(), dh.DihedralProductSpec(2),
                        r_max=0)
    assert r.status == "embedding"
    assert r.copies_tried == 0
    assert len(set(r.images)) == len(r.images)


def test_c4_embeds_in_d8():
    r = dh.embed_search(dh.build_cyclic(4), dh.DihedralProductSpec(4),
                        r_max=0)
    assert r.status == "embedding"


def test_structural_refutations():
    r = dh.embed_search(dh.build_cyclic(5), dh.DihedralProductSpec(4),
                        r_max=2)
    assert r.status == "refuted_structural"
    assert "order 5" in r.reason
    r = dh.embed_search(dh.build_cyclic(3), dh.DihedralProductSpec(2),
                        r_max=1)
    assert r.status == "refuted_structural"


def test_quaternion_never_fits():
    # a single involution cannot survive in a dihedral 2-group product
    r = dh.embed_search(dh.build_quaternion(), dh.DihedralProductSpec(4),
                        r_max=1)
    assert r.status == "not_found_exhausted"
    assert r.nodes > 0
    assert r.images is None


def test_found_embeddings_are_verified_injective_homs():
    # replay the embedding of C4 by hand through the lazy ambient
    spec = dh.DihedralProductSpec(4)
    r = dh.embed_search(dh.build_cyclic(4), spec, r_max=0)
    amb = spec.ambient(r.copies_tried)
    c4 = dh.build_cyclic(4)
    images = {g: tuple(img) for g, img in zip(r.generators, r.images)}
    # generator image has matching order
    for g, img in images.items():
        assert amb.element_order(img) == c4.element_order(g)


def test_sampled_burnside_subgroups_embed():
    res = tower.run_tower(2, 2)
    table = dh.FiniteGroupTable(res.realization.multiplication_table(),
                                name="exponent-2 group", verify=True)
    spec = dh.DihedralProductSpec(2)
    subs = dh.sample_subgroups(table, 6, seed=11)
    assert subs
    for elems in subs:
        st = dh.subgroup_table(table, elems)
        r = dh.embed_search(st, spec, r_max=4)
        assert r.status == "embedding", (elems, r.status, r.reason)


def test_subgroup_table_requires_closure():
    d8 = dh.build_dihedral(4)
    with pytest.raises(dh.TableError):
        dh.subgroup_table(d8, [0, 2])  # rotation r alone: r*r missing
    with pytest.raises(dh.TableError):
        dh.subgroup_table(d8, [1, 2])  # identity missing
