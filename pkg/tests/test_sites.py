import pytest

from sieveval import (
    Observable,
    build_extended_site,
    build_plain_site,
    close_monoid,
    diagonal_matrix,
    identity_matrix,
    mat_mul,
    matrix_from_rows,
    ray_from_vector,
    restrict_down,
    restrict_down_extended,
    restrict_to_rho,
    subspace_from_vectors,
    trivial_observable,
    zero_matrix,
    zero_augmented_atom_set,
)
from sieveval.errors import ClosureExceeded, NotInCommutant, OrbitExceeded, UnknownObjectError
from sieveval.sites import associativity_violations, identity_violations


def span(*vs):
    return subspace_from_vectors(len(vs[0]), list(vs))


def z_observable():
    return Observable("Z", (span([1, 0]), span([0, 1])))


def test_close_monoid_empty():
    monoid = close_monoid([], cap=4, dim=2)
    assert len(monoid) == 1
    assert monoid.elements[0] == identity_matrix(2)


def test_close_monoid_projectors():
    monoid = close_monoid([diagonal_matrix([1, 0]), diagonal_matrix([0, 1])], cap=8)
    assert len(monoid) == 4
    assert zero_matrix(2, 2) in monoid.elements


def test_close_monoid_involution():
    monoid = close_monoid([diagonal_matrix([1, -1])], cap=8)
    assert len(monoid) == 2


def test_close_monoid_table_is_total_product():
    monoid = close_monoid([diagonal_matrix([1, 0]), diagonal_matrix([0, 1])], cap=8)
    for i, a in enumerate(monoid.elements):
        for j, b in enumerate(monoid.elements):
            assert monoid.elements[monoid.mul(i, j)] == mat_mul(a, b)


def test_close_monoid_cap():
    shift = matrix_from_rows([[0, 1], [2, 0]])  # powers keep growing
    with pytest.raises(ClosureExceeded):
        close_monoid([shift], cap=6)


def test_build_plain_site_qubit(qubit_site):
    site = qubit_site
    assert [r for r in site.rays] == [span([1, 1]), span([1, 0]), span([0, 1])]
    out = site.arrows_from(0)
    assert len(out) == 3  # identity and the two projectors; zero acts nowhere
    homs = {(site.arrow_op(a), site.arrow_cod(a)) for a in out}
    assert homs == {(0, 0), (1, 1), (2, 2)}


def test_build_plain_site_eigenray():
    monoid = close_monoid([diagonal_matrix([1, 0]), diagonal_matrix([0, 1])], cap=8)
    site = build_plain_site(z_observable(), monoid, [ray_from_vector([1, 0])], cap=8)
    assert site.n_objects == 1
    assert len(site.arrows) == 2  # identity and the fixing projector


def test_build_plain_site_discrete():
    monoid = close_monoid([], cap=2, dim=2)
    site = build_plain_site(z_observable(), monoid, [ray_from_vector([1, 0])], cap=8)
    assert site.n_objects == 1
    assert len(site.arrows) == 1


def test_build_plain_site_rejects_noncommuting():
    flip = matrix_from_rows([[0, 1], [1, 0]])
    monoid = close_monoid([flip], cap=8)
    with pytest.raises(NotInCommutant):
        build_plain_site(z_observable(), monoid, [ray_from_vector([1, 1])], cap=8)


def test_orbit_cap():
    monoid = close_monoid([diagonal_matrix([1, 0]), diagonal_matrix([0, 1])], cap=8)
    with pytest.raises(OrbitExceeded):
        build_plain_site(z_observable(), monoid, [ray_from_vector([1, 1])], cap=1)


def test_plain_site_category_laws(qubit_site):
    assert associativity_violations(qubit_site) == []
    assert identity_violations(qubit_site) == []


def test_restrict_down(qubit_site):
    whole = restrict_down(qubit_site, ray_from_vector([1, 1]))
    assert whole.n_objects == qubit_site.n_objects
    single = restrict_down(qubit_site, ray_from_vector([1, 0]))
    assert single.n_objects == 1
    with pytest.raises(UnknownObjectError):
        restrict_down(qubit_site, ray_from_vector([2, 3]))


def extended_qubit():
    monoid = close_monoid([diagonal_matrix([1, 0]), diagonal_matrix([0, 1])], cap=8)
    return build_extended_site(
        [trivial_observable("unit", 2), z_observable()],
        monoid,
        [ray_from_vector([1, 1])],
        cap=16,
    )


def test_extended_site_membership_examples():
    site = extended_qubit()
    plus = span([1, 1])
    e1 = span([1, 0])
    stage = site.object_index(plus, 0)
    # the projector climbs to the finer observable at an eigenray
    p1_up = [
        a
        for a in site.arrows_from(stage)
        if site.arrow_op(a) == 1 and site.arrow_cod_rho(a) == 1
    ]
    assert len(p1_up) == 1
    assert site.arrows[p1_up[0]].cod_ray == site.rays.index(e1)
    # identities stay put at every object
    for o in range(site.n_objects):
        ident = site.identity_arrow(o)
        assert site.arrow_dom(ident) == site.arrow_cod(ident) == o
    # the identity operator cannot climb at a superposed ray
    id_up = [
        a
        for a in site.arrows_from(stage)
        if site.arrow_op(a) == 0 and site.arrow_cod_rho(a) == 1
    ]
    assert id_up == []
    assert zero_augmented_atom_set(plus, site.observables[0]) != zero_augmented_atom_set(
        plus, site.observables[1]
    )


def test_extended_site_category_laws():
    site = extended_qubit()
    assert associativity_violations(site) == []
    assert identity_violations(site) == []


def test_restrict_to_rho_matches_plain():
    site = extended_qubit()
    for rho in (0, 1):
        plain, op_map = restrict_to_rho(site, rho)
        fixed = {
            (m.dom_ray, site.monoid.operator(m.op), m.cod_ray)
            for m in site.arrows
            if m.dom_rho == rho and m.cod_rho == rho
        }
        rebuilt = {(a.dom, plain.monoid.operator(a.op), a.cod) for a in plain.arrows}
        assert plain.rays == site.rays
        assert fixed == rebuilt
        for sub_index, full_index in enumerate(op_map):
            assert plain.monoid.operator(sub_index) == site.monoid.operator(full_index)


def test_restrict_down_extended():
    site = extended_qubit()
    stage = site.object_index(span([1, 1]), 0)
    rest, arrow_map = restrict_down_extended(site, stage)
    # the superposed ray never reaches the finer observable stage
    assert (site.rays.index(span([1, 1])), 1) not in rest.objects
    assert all(rest.arrows[n] == site.arrows[o] for o, n in arrow_map.items())
    assert associativity_violations(rest) == []
    single = site.object_index(span([1, 0]), 1)
    rest_single, _ = restrict_down_extended(site, single)
    assert rest_single.n_objects == 1
