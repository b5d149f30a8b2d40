import numpy as np

from conftest import srank
from lie2alg.butterfly import identity_butterfly, is_equivalence, morphism_to_butterfly
from lie2alg.corpus import make_family
from lie2alg.hfib import (
    HomotopyFiber,
    hfib_homology,
    hfib_of_butterfly,
    hfib_of_morphism,
    long_exact_sequence,
    mapping_cone_check,
    validate_chain_maps,
    validate_hfib_structure,
)
from lie2alg.l2a import homology
from lie2alg.morph import zero_morphism


def test_hfib_structures_valid(butterflies):
    for b in butterflies:
        r = validate_hfib_structure(hfib_of_butterfly(b))
        assert r.valid, r.text()
        assert validate_chain_maps(b).valid


def test_morphism_route_agrees(morphisms):
    for f in morphisms:
        assert hfib_of_morphism(f).same_as(hfib_of_butterfly(morphism_to_butterfly(f)))


def test_homology_dims_by_rank(butterflies):
    for b in butterflies:
        c = hfib_of_butterfly(b)
        r1, r0 = srank(c.d1), srank(c.d0)
        assert hfib_homology(c).dims == (c.c1_dim - r1, c.c0_dim - r1 - r0, c.cm1_dim - r0)


def test_equivalence_has_acyclic_fiber(equivalences):
    for b in equivalences:
        assert hfib_homology(hfib_of_butterfly(b)).dims == (0, 0, 0)


def test_zero_morphism_fiber_is_sum():
    L = make_family("der", "h3")
    HL = homology(L)
    H = hfib_homology(hfib_of_morphism(zero_morphism(L, L)))
    # with zero connecting maps: H1 = H1(W), H0 = H0(W) + H1(V), H-1 = H0(V)
    assert (HL.dim_h1, HL.dim_h0) == (1, 4)
    assert H.dims == (HL.dim_h1, HL.dim_h0 + HL.dim_h1, HL.dim_h0)


def test_les_exact_and_table(butterflies):
    for b in butterflies:
        les = long_exact_sequence(b)
        assert les.is_exact, les.table()
        for a, m in zip(les.maps, les.maps[1:]):
            assert not np.any(m @ a)
    text = long_exact_sequence(identity_butterfly(make_family("der", "h3"))).table()
    assert text.endswith("exact at all nodes")


def test_broken_les_is_detected():
    les = long_exact_sequence(morphism_to_butterfly(zero_morphism(*(make_family("der", "h3"),) * 2)))
    maps = list(les.maps)
    maps[1] = maps[1] * 0 + 1
    broken = type(les)(les.dims, tuple(maps))
    assert not broken.is_exact


def test_cone_agrees(morphisms):
    for f in morphisms:
        assert mapping_cone_check(f).agree


def test_perturbed_hfib_fails():
    b = identity_butterfly(make_family("string_type", "sl2"))
    c = hfib_of_butterfly(b)
    br0 = c.br0.copy()
    br0[0, 1, 0] += 1
    bad = HomotopyFiber(c.c1_dim, c.c0_dim, c.cm1_dim, c.d1, c.d0, c.br1, br0, c.brm1, c.br01, c.jac0, c.jacm1)
    assert not validate_hfib_structure(bad).valid
    assert is_equivalence(b)
