import numpy as np
import pytest

from conftest import srank
from lie2alg.butterfly import butterfly_to_morphism, identity_butterfly
from lie2alg.corpus import make_family
from lie2alg.exactla import QQ, asmat, identity, left_inverse, vstack, zeros
from lie2alg.morph import (
    CompositionError,
    L2AMorphism,
    L2ATransformation,
    compose_morphisms,
    compose_transformations,
    find_transformation,
    identity_morphism,
    induced_homology_maps,
    is_quasi_iso,
    validate_morphism,
    validate_transformation,
    zero_morphism,
)


def test_identity_and_zero_valid(objects):
    for L in objects:
        assert validate_morphism(identity_morphism(L)).valid, L
        assert validate_morphism(zero_morphism(L, L)).valid, L


def test_scaled_identity_breaks_bracket():
    L = make_family("lie", "sl2")
    f = L2AMorphism(L, L, 2 * identity(3), zeros(0, 0), zeros(3, 3, 0))
    r = validate_morphism(f)
    assert r.axioms_failed() == ["bracket_defect"]


def test_chain_map_failure():
    L = make_family("identity_xmod", "aff2")
    f = L2AMorphism(L, L, identity(2), zeros(2, 2), zeros(2, 2, 2))
    assert "chain_map" in validate_morphism(f).axioms_failed()


def test_composition_with_identity_and_associativity(morphisms):
    for f in morphisms:
        assert compose_morphisms(identity_morphism(f.target), f).same_as(f)
        assert compose_morphisms(f, identity_morphism(f.source)).same_as(f)
    nonstrict = [f for f in morphisms if not f.is_strict]
    assert nonstrict
    for f in nonstrict:
        ff = compose_morphisms(f, f)
        assert validate_morphism(ff).valid
        assert compose_morphisms(ff, f).same_as(compose_morphisms(f, ff))


def test_compose_mismatch():
    a = identity_morphism(make_family("lie", "sl2"))
    b = identity_morphism(make_family("lie", "h3"))
    with pytest.raises(CompositionError):
        compose_morphisms(a, b)


def _sections(L, seed_a, seed_b):
    rng = np.random.default_rng(seed_a)
    n = asmat(list(rng.integers(-2, 3, size=L.dim_v1 * L.dim_v0)), L.dim_v1, L.dim_v0)
    rng = np.random.default_rng(seed_b)
    m = asmat(list(rng.integers(-2, 3, size=L.dim_v1 * L.dim_v0)), L.dim_v1, L.dim_v0)
    return vstack(n, identity(L.dim_v0)), vstack(m, identity(L.dim_v0))


@pytest.mark.parametrize("args", [("string_type", "sl2"), ("identity_xmod", "aff2"), ("der", "h3"), ("acyclic",)])
def test_two_sections_give_transformation(args):
    L = make_family(*args)
    b = identity_butterfly(L)
    s, s2 = _sections(L, 1, 2)
    f = butterfly_to_morphism(b, s)
    f2 = butterfly_to_morphism(b, s2)
    theta = left_inverse(b.iota) @ (s - s2)
    t = L2ATransformation(f2, f, theta)
    assert validate_transformation(t).valid
    found = find_transformation(f, f2)
    assert found.found
    assert validate_transformation(found.witness).valid


def test_transformations_compose():
    L = make_family("string_type", "sl2")
    b = identity_butterfly(L)
    s1, s2 = _sections(L, 3, 4)
    s3, _ = _sections(L, 5, 6)
    f1, f2, f3 = (butterfly_to_morphism(b, s) for s in (s1, s2, s3))
    t12 = L2ATransformation(f2, f1, left_inverse(b.iota) @ (s1 - s2))
    t23 = L2ATransformation(f3, f2, left_inverse(b.iota) @ (s2 - s3))
    t = compose_transformations(t12, t23)
    assert validate_transformation(t).valid


def test_no_transformation_between_identity_and_zero():
    L = make_family("lie", "sl2")
    res = find_transformation(identity_morphism(L), zero_morphism(L, L))
    assert res.status == "linear_obstruction"


def test_wrong_theta_rejected():
    L = make_family("identity_xmod", "aff2")
    f = identity_morphism(L)
    t = L2ATransformation(f, f, identity(2))
    assert not validate_transformation(t).valid


def test_induced_maps_and_quasi_iso(morphisms):
    for f in morphisms:
        H0, H1 = induced_homology_maps(f)
        iso = H0.shape[0] == H0.shape[1] == srank(H0) and H1.shape[0] == H1.shape[1] == srank(H1)
        assert is_quasi_iso(f) == iso
    L = make_family("der", "h3")
    assert is_quasi_iso(identity_morphism(L))
    assert not is_quasi_iso(zero_morphism(L, L))


def test_homology_functorial(morphisms):
    for f in morphisms:
        for g in morphisms:
            if g.source is f.target or g.source.same_as(f.target):
                gf = compose_morphisms(g, f)
                A0, A1 = induced_homology_maps(gf)
                G0, G1 = induced_homology_maps(g)
                F0, F1 = induced_homology_maps(f)
                assert np.array_equal(A0, G0 @ F0) and np.array_equal(A1, G1 @ F1)


def test_eps_antisymmetry_failure():
    L = make_family("identity_xmod", "aff2")
    eps = zeros(2, 2, 2)
    eps[0, 0, 0] = QQ(1)
    f = L2AMorphism(L, L, identity(2), identity(2), eps)
    assert "eps_antisymmetry" in validate_morphism(f).axioms_failed()
