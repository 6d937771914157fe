import pytest

from sieveval import (
    Observable,
    Sieve,
    build_extended_site,
    build_plain_site,
    close_monoid,
    diagonal_matrix,
    equivalence_check,
    flat,
    full_space,
    heyting_iso_check,
    is_natural,
    is_projective,
    lift_eta,
    make_bridge_context,
    natural_characteristic,
    natural_map,
    natural_omega,
    ray_from_vector,
    restrict_down_extended,
    sharp,
    submonoid_commuting_with,
    subspace_from_vectors,
    trivial_observable,
    valuation,
    zero_space,
)
from sieveval.bridge import (
    is_natural_at,
    natural_sieves_at,
    projectivity_matches_naturality,
    sharp_by_intersection,
)
from sieveval.sieves import (
    atom_global_element,
    atom_presheaf,
    bottom_sieve,
    build_presheaf,
    enumerate_sieves,
    proposition_presheaf,
    top_sieve,
    true_subobject,
)


def span(*vs):
    return subspace_from_vectors(len(vs[0]), list(vs))


UNIVERSE = [
    zero_space(2),
    full_space(2),
    span([1, 0]),
    span([0, 1]),
    span([1, 1]),
    span([1, -1]),
]


@pytest.fixture(scope="module")
def bridge_setup():
    monoid = close_monoid([diagonal_matrix([1, 0]), diagonal_matrix([0, 1])], cap=8)
    unit = trivial_observable("unit", 2)
    z = Observable("Z", (span([1, 0]), span([0, 1])))
    extended = build_extended_site([unit, z], monoid, [ray_from_vector([1, 1])], cap=16)
    stage_full = extended.object_index(span([1, 1]), 0)
    rest, _ = restrict_down_extended(extended, stage_full)
    stage = rest.object_index(span([1, 1]), 0)
    sub, op_map = submonoid_commuting_with(monoid, unit)
    plain = build_plain_site(unit, sub, [ray_from_vector([1, 1])], cap=16)
    ctx = make_bridge_context(rest, stage, plain, op_map)
    return ctx


def plain_sieve_by_ops(ctx, ops):
    members = [
        a for a in ctx.plain.arrows_from(ctx.plain_stage) if ctx.plain.arrow_op(a) in ops
    ]
    return Sieve(ctx.plain_stage, frozenset(members))


def test_lift_eta(bridge_setup):
    ctx = bridge_setup
    assert lift_eta(ctx, bottom_sieve(ctx.plain_stage)) == frozenset()
    s_p1 = plain_sieve_by_ops(ctx, {1})
    lifted = lift_eta(ctx, s_p1)
    assert len(lifted) == 1
    (a,) = lifted
    assert ctx.extended.arrow_cod_rho(a) == ctx.rho
    top_lift = lift_eta(ctx, top_sieve(ctx.plain, ctx.plain_stage))
    ext_top = top_sieve(ctx.extended, ctx.stage)
    assert top_lift < ext_top.arrows  # proper subset: raising arrows exist


def test_sharp_examples(bridge_setup):
    ctx = bridge_setup
    assert sharp(ctx, bottom_sieve(ctx.plain_stage)) == bottom_sieve(ctx.stage)
    plain_top = top_sieve(ctx.plain, ctx.plain_stage)
    assert sharp(ctx, plain_top) == top_sieve(ctx.extended, ctx.stage)
    s_p2 = plain_sieve_by_ops(ctx, {2})
    sharped = sharp(ctx, s_p2)
    # the generated sieve holds the fixed arrow and its raise, nothing else
    assert len(sharped.arrows) == 2
    assert {ctx.extended.arrow_op(a) for a in sharped.arrows} == {2}
    assert {ctx.extended.arrow_cod_rho(a) for a in sharped.arrows} == {0, 1}
    # join preservation on the worked pair
    s_p1 = plain_sieve_by_ops(ctx, {1})
    from sieveval.sieves import heyting_join

    assert sharp(ctx, heyting_join(s_p1, s_p2)) == heyting_join(
        sharp(ctx, s_p1), sharp(ctx, s_p2)
    )


def test_sharp_matches_intersection_oracle(bridge_setup):
    ctx = bridge_setup
    for s in enumerate_sieves(ctx.plain, ctx.plain_stage, 64):
        assert sharp(ctx, s) == sharp_by_intersection(ctx, s, 64)


def test_flat_examples(bridge_setup):
    ctx = bridge_setup
    assert flat(ctx, top_sieve(ctx.extended, ctx.stage)) == top_sieve(
        ctx.plain, ctx.plain_stage
    )
    assert flat(ctx, bottom_sieve(ctx.stage)) == bottom_sieve(ctx.plain_stage)
    for s in enumerate_sieves(ctx.plain, ctx.plain_stage, 64):
        assert flat(ctx, sharp(ctx, s)) == s
    # a purely raising sieve flattens to nothing
    raising = [
        a
        for a in ctx.extended.arrows_from(ctx.stage)
        if ctx.extended.arrow_cod_rho(a) != ctx.rho
    ]
    pure = Sieve(ctx.stage, frozenset({raising[0]}))
    assert flat(ctx, pure).arrows == frozenset()


def test_natural_map_and_fixpoints(bridge_setup):
    ctx = bridge_setup
    ext_top = top_sieve(ctx.extended, ctx.stage)
    assert natural_map(ctx, ext_top) == ext_top
    assert natural_map(ctx, bottom_sieve(ctx.stage)) == bottom_sieve(ctx.stage)
    sieves = enumerate_sieves(ctx.extended, ctx.stage, 64)
    assert len(sieves) == 10  # worked by hand for this stage
    for s in sieves:
        image = natural_map(ctx, s)
        assert image <= s
        assert natural_map(ctx, image) == image  # idempotent
        assert is_natural(ctx, sharp(ctx, flat(ctx, s)))
    fixpoints = [s for s in sieves if is_natural(ctx, s)]
    assert len(fixpoints) == 5
    raising = [
        a
        for a in ctx.extended.arrows_from(ctx.stage)
        if ctx.extended.arrow_cod_rho(a) != ctx.rho
    ]
    from sieveval.sieves import principal_sieve

    pure = principal_sieve(ctx.extended, raising[0])
    assert pure.arrows and not is_natural_at(ctx.extended, ctx.stage, pure)


def test_natural_omega_presheaf(bridge_setup):
    ctx = bridge_setup
    rest = ctx.extended
    presheaf = natural_omega(rest, cap=64)
    presheaf.validate()
    for o in range(rest.n_objects):
        assert set(presheaf.values[o]) == set(natural_sieves_at(rest, o, 64))


def test_heyting_iso(bridge_setup):
    report = heyting_iso_check(bridge_setup, cap=64)
    assert report["passed"]
    assert report["plain_count"] == 5
    assert report["extended_count"] == 10
    assert report["fixpoint_count"] == 5


def test_single_rho_site_is_trivially_natural():
    monoid = close_monoid([diagonal_matrix([1, 0]), diagonal_matrix([0, 1])], cap=8)
    z = Observable("Z", (span([1, 0]), span([0, 1])))
    extended = build_extended_site([z], monoid, [ray_from_vector([1, 1])], cap=16)
    stage = extended.object_index(span([1, 1]), 0)
    sieves = enumerate_sieves(extended, stage, 64)
    assert all(is_natural_at(extended, stage, s) for s in sieves)
    assert len(sieves) == 5


@pytest.fixture(scope="module")
def extended_presheaves(bridge_setup):
    ctx = bridge_setup
    rest = ctx.extended
    propositions = proposition_presheaf(rest, UNIVERSE)
    atoms = atom_presheaf(rest, lambda o: rest.observables[rest.object_rho(o)])
    sigma = atom_global_element(rest, atoms, full_space(2))
    true_t = true_subobject(rest, sigma, propositions)
    return rest, propositions, true_t


def test_true_subobject_is_projective(extended_presheaves):
    rest, propositions, true_t = extended_presheaves
    for o in range(rest.n_objects):
        for x in propositions.values[o]:
            projective, witnesses = is_projective(rest, true_t, propositions, o, x)
            assert projective and not witnesses
    agree, mismatches = projectivity_matches_naturality(rest, true_t, propositions)
    assert agree and not mismatches


def adversarial_subpresheaf(rest, propositions):
    """Nonzero only at the fine stage of the first eigenray: its own span."""
    e1 = span([1, 0])
    target = rest.object_index(e1, 1)

    def values_at(o):
        return (e1,) if o == target else ()

    return build_presheaf(rest, values_at, lambda a, p: propositions.map(a, p))


def test_adversarial_subpresheaf_trips_both_detectors(extended_presheaves):
    rest, propositions, _ = extended_presheaves
    bad = adversarial_subpresheaf(rest, propositions)
    stage = rest.object_index(span([1, 1]), 0)
    x = span([1, 0])
    projective, witnesses = is_projective(rest, bad, propositions, stage, x)
    assert not projective and witnesses
    from sieveval.sieves import characteristic

    chi = characteristic(rest, bad, propositions, stage, x)
    assert not is_natural_at(rest, stage, chi)
    agree, mismatches = projectivity_matches_naturality(rest, bad, propositions)
    assert agree  # the two detectors fire together, never apart
    assert (stage, x) in mismatches or not mismatches


def test_natural_characteristic_and_uniqueness(extended_presheaves):
    rest, propositions, true_t = extended_presheaves
    result = natural_characteristic(rest, true_t, propositions)
    assert result["passed"]
    # perturbing one value breaks the pullback
    tau = {o: top_sieve(rest, o) for o in range(rest.n_objects)}
    stage = rest.object_index(span([1, 1]), 0)
    perturbed = dict(result["natural_chi"])
    perturbed[(stage, zero_space(2))] = tau[stage]
    broken = any(
        set(true_t.values[o])
        != {x for x in propositions.values[o] if perturbed[(o, x)] == tau[o]}
        for o in range(rest.n_objects)
    )
    assert broken


def test_equivalence_families_agree(bridge_setup):
    ctx = bridge_setup
    result = equivalence_check(ctx, full_space(2), UNIVERSE, valuation)
    assert result["passed"]
    for row in result["rows"]:
        assert row["a"] and row["b"] and row["c"]


def test_equivalence_unit_and_zero_rows(bridge_setup):
    ctx = bridge_setup
    result = equivalence_check(ctx, full_space(2), UNIVERSE, valuation)
    rows = {str(row["proposition"]): row for row in result["rows"]}
    unit_row = rows[str(full_space(2))]
    assert unit_row["plain"] == top_sieve(ctx.plain, ctx.plain_stage)
    assert unit_row["extended"] == top_sieve(ctx.extended, ctx.stage)
    zero_row = rows[str(zero_space(2))]
    assert zero_row["plain"].arrows == frozenset()  # no annihilating arrows here
