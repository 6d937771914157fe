"""The bridge between fixed-observable stages and extended stages.

At an extended stage (e, rho) the arrows that stay at rho form a copy of the
plain stage at e.  Flattening keeps exactly those arrows; sharpening rebuilds
the smallest extended sieve around their lifts.  The round trip down-then-up
is a deflationary idempotent whose fixpoints — the natural sieves — form a
Heyting algebra isomorphic to the plain stage's sieve lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalCheckError, NotASubPresheaf, UnknownObjectError
from .sieves import (
    Presheaf,
    Sieve,
    bottom_sieve,
    build_presheaf,
    characteristic_unchecked,
    enumerate_sieves,
    heyting_implies,
    is_subpresheaf,
    omega_transition,
    principal_sieve,
    top_sieve,
)
from .sites import ExtendedSite, PlainSite


@dataclass(frozen=True)
class BridgeContext:
    """A fixed extended stage paired with its plain counterpart.

    Arrow correspondence: a plain arrow out of the stage ray matches the
    extended arrow with the same operator that stays at the stage observable.
    """

    extended: ExtendedSite
    stage: int  # extended object index
    rho: int
    plain: PlainSite
    plain_stage: int  # plain object index of the same ray
    plain_to_ext: dict[int, int]
    ext_to_plain: dict[int, int]


def make_bridge_context(
    extended: ExtendedSite, stage: int, plain: PlainSite, op_map: tuple[int, ...]
) -> BridgeContext:
    rho = extended.object_rho(stage)
    ray = extended.object_ray(stage)
    plain_stage = plain.ray_index(ray)
    plain_to_ext: dict[int, int] = {}
    ext_to_plain: dict[int, int] = {}
    ext_by_op = {
        extended.arrow_op(a): a
        for a in extended.arrows_from(stage)
        if extended.arrow_cod_rho(a) == rho
    }
    for a in plain.arrows_from(plain_stage):
        full_op = op_map[plain.arrow_op(a)]
        twin = ext_by_op.get(full_op)
        if twin is None:
            raise InternalCheckError("plain arrow without an extended twin")
        plain_to_ext[a] = twin
        ext_to_plain[twin] = a
    if len(ext_to_plain) != len(ext_by_op):
        raise InternalCheckError("extended fixed-rho arrow without a plain twin")
    return BridgeContext(extended, stage, rho, plain, plain_stage, plain_to_ext, ext_to_plain)


def lift_eta(ctx: BridgeContext, s_e: Sieve) -> frozenset[int]:
    """Relabel a plain sieve as fixed-rho extended arrows; usually not a sieve."""
    if s_e.base != ctx.plain_stage:
        raise UnknownObjectError("plain sieve is not based at the bridge stage")
    return frozenset(ctx.plain_to_ext[a] for a in s_e.arrows)


def sharp(ctx: BridgeContext, s_e: Sieve) -> Sieve:
    """Smallest extended sieve containing the lift: postcomposites of lifts."""
    lifted = lift_eta(ctx, s_e)
    members: frozenset[int] = frozenset()
    for a in lifted:
        members |= principal_sieve(ctx.extended, a).arrows
    return Sieve(ctx.stage, members)


def sharp_by_intersection(ctx: BridgeContext, s_e: Sieve, cap: int) -> Sieve:
    """Oracle for `sharp`: intersect every enumerated sieve containing the lift."""
    lifted = lift_eta(ctx, s_e)
    candidates = [
        s for s in enumerate_sieves(ctx.extended, ctx.stage, cap) if lifted <= s.arrows
    ]
    if not candidates:  # pragma: no cover - the top sieve always qualifies
        raise InternalCheckError("no sieve contains the lift")
    arrows = candidates[0].arrows
    for s in candidates[1:]:
        arrows &= s.arrows
    return Sieve(ctx.stage, arrows)


def flat(ctx: BridgeContext, s: Sieve) -> Sieve:
    """Keep the arrows that stay at the stage observable, read as plain arrows."""
    if s.base != ctx.stage:
        raise UnknownObjectError("extended sieve is not based at the bridge stage")
    members = frozenset(
        ctx.ext_to_plain[a] for a in s.arrows if a in ctx.ext_to_plain
    )
    return Sieve(ctx.plain_stage, members)


def natural_map_at(site: ExtendedSite, obj: int, s: Sieve) -> Sieve:
    """Down-and-up at an arbitrary stage: regenerate from the fixed-rho part."""
    rho = site.object_rho(obj)
    members: frozenset[int] = frozenset()
    for a in s.arrows:
        if site.arrow_cod_rho(a) == rho:
            members |= principal_sieve(site, a).arrows
    return Sieve(obj, members)


def natural_map(ctx: BridgeContext, s: Sieve) -> Sieve:
    return natural_map_at(ctx.extended, ctx.stage, s)


def is_natural(ctx: BridgeContext, s: Sieve) -> bool:
    return natural_map(ctx, s) == s


def is_natural_at(site: ExtendedSite, obj: int, s: Sieve) -> bool:
    return natural_map_at(site, obj, s) == s


def natural_sieves_at(site: ExtendedSite, obj: int, cap: int) -> tuple[Sieve, ...]:
    return tuple(
        s for s in enumerate_sieves(site, obj, cap) if is_natural_at(site, obj, s)
    )


def natural_omega(site: ExtendedSite, cap: int) -> Presheaf:
    """The fixpoint subfunctor of the classifier; transitions are inherited."""
    return build_presheaf(
        site,
        lambda o: natural_sieves_at(site, o, cap),
        lambda a, s: omega_transition(site, a, s),
    )


def natural_implies(ctx: BridgeContext, s1: Sieve, s2: Sieve) -> Sieve:
    """The pseudocomplement inside the fixpoint lattice."""
    return sharp(ctx, heyting_implies(ctx.plain, flat(ctx, s1), flat(ctx, s2)))


def heyting_iso_check(ctx: BridgeContext, cap: int) -> dict:
    """Exhaustive audit of the stage isomorphism and its implication transport."""
    from .sieves import heyting_join, heyting_meet

    plain_sieves = enumerate_sieves(ctx.plain, ctx.plain_stage, cap)
    ext_sieves = enumerate_sieves(ctx.extended, ctx.stage, cap)
    fixpoints = tuple(s for s in ext_sieves if is_natural(ctx, s))

    round_trip_down_up = all(flat(ctx, sharp(ctx, s)) == s for s in plain_sieves)
    round_trip_up_down = all(sharp(ctx, flat(ctx, s)) == s for s in fixpoints)
    bijection = len(fixpoints) == len(plain_sieves)
    image_is_fixpoints = {sharp(ctx, s).arrows for s in plain_sieves} == {
        s.arrows for s in fixpoints
    }

    plain_top = top_sieve(ctx.plain, ctx.plain_stage)
    ext_top = top_sieve(ctx.extended, ctx.stage)
    tops_and_bottoms = (
        sharp(ctx, plain_top) == ext_top
        and flat(ctx, ext_top) == plain_top
        and sharp(ctx, bottom_sieve(ctx.plain_stage)) == bottom_sieve(ctx.stage)
        and flat(ctx, bottom_sieve(ctx.stage)) == bottom_sieve(ctx.plain_stage)
    )

    lattice_preserved = True
    for s1 in plain_sieves:
        for s2 in plain_sieves:
            if sharp(ctx, heyting_join(s1, s2)) != heyting_join(sharp(ctx, s1), sharp(ctx, s2)):
                lattice_preserved = False
            if sharp(ctx, heyting_meet(s1, s2)) != heyting_meet(sharp(ctx, s1), sharp(ctx, s2)):
                lattice_preserved = False
    for s1 in ext_sieves:
        for s2 in ext_sieves:
            if flat(ctx, heyting_join(s1, s2)) != heyting_join(flat(ctx, s1), flat(ctx, s2)):
                lattice_preserved = False
            if flat(ctx, heyting_meet(s1, s2)) != heyting_meet(flat(ctx, s1), flat(ctx, s2)):
                lattice_preserved = False

    implies_transport = True
    implies_dominates = True
    fixpoint_adjunction = True
    strict_somewhere = False
    closure_failures = 0
    for s1 in fixpoints:
        for s2 in fixpoints:
            fixpoint_implies = natural_implies(ctx, s1, s2)
            plain_implies = heyting_implies(ctx.plain, flat(ctx, s1), flat(ctx, s2))
            if flat(ctx, fixpoint_implies) != plain_implies:
                implies_transport = False
            ambient = heyting_implies(ctx.extended, s1, s2)
            if not fixpoint_implies <= ambient:
                implies_dominates = False
            if fixpoint_implies < ambient:
                strict_somewhere = True
            if not is_natural(ctx, ambient):
                closure_failures += 1
            for x in fixpoints:
                if (heyting_meet(s1, x) <= s2) != (x <= fixpoint_implies):
                    fixpoint_adjunction = False

    pseudo_inequality = True
    for s1 in plain_sieves:
        for s2 in plain_sieves:
            lhs = sharp(ctx, heyting_implies(ctx.plain, s1, s2))
            rhs = heyting_implies(ctx.extended, sharp(ctx, s1), sharp(ctx, s2))
            if not lhs <= rhs:
                pseudo_inequality = False
    for s1 in ext_sieves:
        for s2 in ext_sieves:
            lhs = flat(ctx, heyting_implies(ctx.extended, s1, s2))
            rhs = heyting_implies(ctx.plain, flat(ctx, s1), flat(ctx, s2))
            if not lhs <= rhs:
                pseudo_inequality = False

    return {
        "plain_count": len(plain_sieves),
        "extended_count": len(ext_sieves),
        "fixpoint_count": len(fixpoints),
        "round_trip_down_up": round_trip_down_up,
        "round_trip_up_down": round_trip_up_down,
        "bijection": bijection,
        "image_is_fixpoints": image_is_fixpoints,
        "tops_and_bottoms": tops_and_bottoms,
        "lattice_preserved": lattice_preserved,
        "implies_transport": implies_transport,
        "implies_dominates": implies_dominates,
        "fixpoint_adjunction": fixpoint_adjunction,
        "implies_strict_somewhere": strict_somewhere,
        "implies_closure_failures": closure_failures,
        "pseudocomplement_inequality": pseudo_inequality,
        "passed": all(
            [
                round_trip_down_up,
                round_trip_up_down,
                bijection,
                image_is_fixpoints,
                tops_and_bottoms,
                lattice_preserved,
                implies_transport,
                implies_dominates,
                fixpoint_adjunction,
                pseudo_inequality,
            ]
        ),
    }


def is_projective(
    site: ExtendedSite, n: Presheaf, m: Presheaf, obj: int, x, *, checked: bool = True
) -> tuple[bool, list[int]]:
    """Membership along a rho-raising arrow must imply membership along its
    fixed-rho twin.  Returns the verdict and the witnessing arrows."""
    if checked and not is_subpresheaf(n, m):
        raise NotASubPresheaf("projectivity is asked of a subfunctor")
    witnesses: list[int] = []
    for a in site.arrows_from(obj):
        twin = site.rho_arrow_twin(a)
        if m.map(a, x) in n.value_set(site.arrow_cod(a)):
            if m.map(twin, x) not in n.value_set(site.arrow_cod(twin)):
                witnesses.append(a)
    return (not witnesses, witnesses)


def projectivity_matches_naturality(
    site: ExtendedSite, n: Presheaf, m: Presheaf
) -> tuple[bool, list[tuple[int, object]]]:
    """The two detectors of the same property must agree on every (stage, x)."""
    mismatches: list[tuple[int, object]] = []
    sub_ok = is_subpresheaf(n, m)
    if not sub_ok:
        raise NotASubPresheaf("detector comparison needs a subfunctor")
    for o in range(site.n_objects):
        for x in m.values[o]:
            projective, _ = is_projective(site, n, m, o, x, checked=False)
            natural = is_natural_at(site, o, characteristic_unchecked(site, n, m, o, x))
            if projective != natural:
                mismatches.append((o, x))
    return (not mismatches, mismatches)


def natural_characteristic(
    site: ExtendedSite, n: Presheaf, m: Presheaf, candidate_budget: int = 10_000
) -> dict:
    """The classifying map with the fixpoint subfunctor as target.

    Validates: stage maps land on natural sieves, the squares commute, the
    inclusion recovers the plain characteristic map, the pullback against the
    fixpoint 'true' holds per object, and uniqueness (enumerated under the
    budget, otherwise pointwise-forced).
    """
    if not is_subpresheaf(n, m):
        raise NotASubPresheaf("characteristic factoring needs a subfunctor")
    chi = {
        (o, x): characteristic_unchecked(site, n, m, o, x)
        for o in range(site.n_objects)
        for x in m.values[o]
    }
    projective = all(
        is_projective(site, n, m, o, x, checked=False)[0]
        for o in range(site.n_objects)
        for x in m.values[o]
    )
    natural_chi = {
        key: natural_map_at(site, key[0], value) for key, value in chi.items()
    }
    factorization = all(natural_chi[key] == chi[key] for key in chi)
    naturality = True
    for a in range(len(site.arrows)):
        dom, cod = site.arrow_dom(a), site.arrow_cod(a)
        for x in m.values[dom]:
            lhs = omega_transition(site, a, natural_chi[(dom, x)])
            rhs = natural_chi[(cod, m.map(a, x))]
            if lhs != rhs:
                naturality = False
    tau = tuple(top_sieve(site, o) for o in range(site.n_objects))
    pullback = all(
        set(n.values[o]) == {x for x in m.values[o] if natural_chi[(o, x)] == tau[o]}
        for o in range(site.n_objects)
    )
    return {
        "projective": projective,
        "factorization": factorization,
        "naturality": naturality,
        "pullback": pullback,
        "chi": chi,
        "natural_chi": natural_chi,
        "passed": projective and factorization and naturality and pullback,
    }


def equivalence_check(
    ctx: BridgeContext, r, universe, valuation_fn
) -> dict:
    """The two valuation families agree through the stage isomorphism.

    For every proposition: flattening the extended value gives the plain
    value; the fixpoint image of the extended value flattens to the plain
    value; and sharpening the plain value gives the fixpoint image.
    """
    rows = []
    all_ok = True
    for p in universe:
        plain_value = valuation_fn(ctx.plain, ctx.plain_stage, r, p)
        ext_value = valuation_fn(ctx.extended, ctx.stage, r, p)
        nat_value = natural_map(ctx, ext_value)
        a_ok = flat(ctx, ext_value) == plain_value
        b_ok = flat(ctx, nat_value) == plain_value
        c_ok = sharp(ctx, plain_value) == nat_value
        all_ok = all_ok and a_ok and b_ok and c_ok
        rows.append(
            {
                "proposition": p,
                "plain": plain_value,
                "extended": ext_value,
                "natural_image": nat_value,
                "a": a_ok,
                "b": b_ok,
                "c": c_ok,
            }
        )
    return {"rows": rows, "passed": all_ok}
