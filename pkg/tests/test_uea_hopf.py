from fractions import Fraction

import pytest

import instances
from core_data import SpecFormatError
from lie_core import LieAlgebra
from sparse import SparseVector
from uea_hopf import hopf_report, index_splits, random_element, sigma12, UEA


def test_heisenberg_products(H_heis):
    d1, d2, d3 = (H_heis.unit_index(i) for i in range(3))
    assert H_heis.mul_monomials(d2, d1) == SparseVector({(1, 1, 0): 1, (0, 0, 1): -1})
    assert H_heis.mul_monomials(d1, d2) == SparseVector({(1, 1, 0): 1})
    assert H_heis.mul_monomials(d1, d1) == SparseVector({(2, 0, 0): 2})


def test_divided_powers_abelian():
    H = UEA(LieAlgebra.abelian(2))
    assert H.mul_monomials((2, 0), (1, 0)) == SparseVector({(3, 0): 3})
    assert H.mul_monomials((1, 1), (0, 1)) == SparseVector({(1, 2): 2})


def test_sl2_straightening():
    H = UEA(instances.sl2())
    f, h, e = (H.gen(i) for i in range(3))
    # e f = f e + h
    assert H.pbw_mul(e, f) == SparseVector({(1, 0, 1): 1, (0, 1, 0): 1})
    # e h = h e − 2e
    assert H.pbw_mul(e, h) == SparseVector({(0, 1, 1): 1, (0, 0, 1): -2})


def test_associativity_sl2(rng):
    H = UEA(instances.sl2())
    for _ in range(5):
        a, b, c = (random_element(H, rng, 2, terms=2) for _ in range(3))
        assert H.mul(H.mul(a, b), c) == H.mul(a, H.mul(b, c))


def test_antipode_heisenberg(H_heis):
    assert H_heis.antipode_monomial((1, 1, 0)) == SparseVector({(1, 1, 0): 1, (0, 0, 1): -1})
    assert H_heis.antipode(H_heis.gen(0)) == SparseVector({(1, 0, 0): -1})
    assert H_heis.antipode_monomial((2, 0, 0)) == SparseVector({(2, 0, 0): 1})


def test_coproduct_divided_power():
    H = UEA(LieAlgebra.abelian(1))
    assert H.coproduct(SparseVector({(2,): 1})) == SparseVector({((0,), (2,)): 1, ((1,), (1,)): 1, ((2,), (0,)): 1})
    assert sorted(index_splits((1, 1))) == [((0, 0), (1, 1)), ((0, 1), (1, 0)), ((1, 0), (0, 1)), ((1, 1), (0, 0))]


@pytest.mark.parametrize("name", ["abelian2", "heisenberg", "sl2"])
def test_hopf_identities_random(name, rng):
    H = UEA(instances.BUILTIN_ALGEBRAS[name]())
    for _ in range(50):
        f = random_element(H, rng, 4)
        g = random_element(H, rng, 2, terms=2)
        assert hopf_report(H, f, g) == []


def test_antipode_coproduct_identity_catches_bad_antipode(H_heis, monkeypatch):
    f = H_heis.gen(0)
    g = H_heis.one()
    assert "antipode coproduct" not in hopf_report(H_heis, f, g)
    monkeypatch.setattr(H_heis, 'antipode_monomial', lambda K: SparseVector({K: 1}))
    failures = hopf_report(H_heis, f, g)
    assert "antipode coproduct" in failures
    assert "antipode" in failures


def test_counit_and_filtration(H_heis):
    h = SparseVector({(0, 0, 0): 3, (1, 1, 0): 2})
    assert H_heis.counit(h) == 3
    assert H_heis.fil_degree(h) == 2
    assert H_heis.fil_degree(SparseVector()) == -1


def test_overline_borel(borel_sd):
    H = UEA(borel_sd.algebra)
    bar_h = H.overline(H.gen(0), borel_sd.chi)
    assert bar_h == SparseVector({(1, 0): 1, (0, 0): -2})
    assert H.overline(H.gen(1), borel_sd.chi) == H.gen(1)


def test_embed_into_pair(H_heis):
    pair = instances.heisenberg_line_pair()
    assert H_heis.embed(SparseVector({(1, 0, 1): 2}), pair) == SparseVector({(0, 1, 0, 1): 2})


def test_tensors_and_sigma(H_heis):
    x = H_heis.tensor(H_heis.gen(0), H_heis.gen(1))
    assert x == SparseVector({((1, 0, 0), (0, 1, 0)): 1})
    assert sigma12(x) == SparseVector({((0, 1, 0), (1, 0, 0)): 1})
    y = H_heis.tensor(H_heis.gen(1), H_heis.one())
    assert H_heis.mul_tensors(y, x) == SparseVector({((1, 1, 0), (0, 1, 0)): 1, ((0, 0, 1), (0, 1, 0)): -1})


def test_format_and_parse(H_heis):
    h = SparseVector({(2, 0, 1): Fraction(3, 2), (0, 0, 0): -1})
    text = H_heis.format(h)
    assert text == "3/2*d[2,0,1] - d[0,0,0]"
    assert H_heis.parse(text) == h
    assert H_heis.format(SparseVector()) == "0"
    with pytest.raises(SpecFormatError):
        H_heis.parse("d[1,0]")
    with pytest.raises(SpecFormatError):
        H_heis.parse("x + d[1,0,0]")
