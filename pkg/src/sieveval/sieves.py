"""Sieves over a built site: stage Heyting algebras, presheaves, valuations.

A sieve on an object is a postcomposition-closed set of arrows out of it.
Equivalently it is a union of principal sieves, which is how enumeration
works here: collect the distinct principal sieves and close them under
union.  That avoids filtering all 2^k arrow subsets.

Truth values: the valuation of a proposition P at a stage is the sieve of
arrows F with F(P) above the transported true atom.  It is computed twice —
once directly, once as the characteristic morphism of the true subobject —
and the two must agree arrow for arrow.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Sequence

from .errors import (
    EnumerationExceeded,
    InternalCheckError,
    NaturalityError,
    NotASubPresheaf,
)
from .subspaces import Ray, Subspace, apply_operator, leq, meet, project_onto_eigenspace


@dataclass(frozen=True, slots=True)
class Sieve:
    base: int
    arrows: frozenset[int]

    def __contains__(self, arrow: int) -> bool:
        return arrow in self.arrows

    def __le__(self, other: "Sieve") -> bool:
        _require_same_base(self, other)
        return self.arrows <= other.arrows

    def __lt__(self, other: "Sieve") -> bool:
        _require_same_base(self, other)
        return self.arrows < other.arrows

    def sort_key(self) -> tuple:
        return (len(self.arrows), tuple(sorted(self.arrows)))


def _require_same_base(a: Sieve, b: Sieve) -> None:
    if a.base != b.base:
        raise InternalCheckError(f"sieves based at {a.base} and {b.base}")


def is_sieve(site, s: Sieve) -> bool:
    for m in s.arrows:
        if site.arrow_dom(m) != s.base:
            return False
        for g in site.arrows_from(site.arrow_cod(m)):
            if site.compose(g, m) not in s.arrows:
                return False
    return True


@lru_cache(maxsize=None)
def principal_sieve(site, arrow: int) -> Sieve:
    """All postcomposites of one arrow (the arrow itself included)."""
    base = site.arrow_dom(arrow)
    members = {arrow}
    frontier = [arrow]
    while frontier:
        m = frontier.pop()
        for g in site.arrows_from(site.arrow_cod(m)):
            gm = site.compose(g, m)
            if gm not in members:
                members.add(gm)
                frontier.append(gm)
    return Sieve(base, frozenset(members))


def top_sieve(site, obj: int) -> Sieve:
    return Sieve(obj, frozenset(site.arrows_from(obj)))


def bottom_sieve(obj: int) -> Sieve:
    return Sieve(obj, frozenset())


@dataclass(frozen=True)
class StageHeyting:
    """One stage of the subobject (semi-)classifier: an ordered sieve lattice."""

    base: int
    top: Sieve
    bottom: Sieve
    sieves: tuple[Sieve, ...]

    def __len__(self) -> int:
        return len(self.sieves)

    def __contains__(self, s: Sieve) -> bool:
        return s in set(self.sieves)


@lru_cache(maxsize=None)
def enumerate_sieves(site, obj: int, cap: int) -> tuple[Sieve, ...]:
    """Every sieve on obj: all unions of principal sieves, plus the empty one."""
    principals = []
    seen_principals = set()
    for a in site.arrows_from(obj):
        p = principal_sieve(site, a)
        if p.arrows not in seen_principals:
            seen_principals.add(p.arrows)
            principals.append(p)
    collected: set[frozenset[int]] = {frozenset()}
    for p in principals:
        additions = []
        for existing in collected:
            union = existing | p.arrows
            if union not in collected:
                additions.append(union)
        collected.update(additions)
        if len(collected) > cap:
            raise EnumerationExceeded(cap)
    sieves = sorted((Sieve(obj, s) for s in collected), key=Sieve.sort_key)
    return tuple(sieves)


def omega_at(site, obj: int, cap: int) -> StageHeyting:
    return StageHeyting(
        base=obj,
        top=top_sieve(site, obj),
        bottom=bottom_sieve(obj),
        sieves=enumerate_sieves(site, obj, cap),
    )


def omega_transition(site, m: int, s: Sieve) -> Sieve:
    """Pull a sieve along an arrow: arrows whose composite with m lands in s."""
    if site.arrow_dom(m) != s.base:
        raise InternalCheckError("transition arrow does not start at the sieve's base")
    cod = site.arrow_cod(m)
    return Sieve(
        cod,
        frozenset(a for a in site.arrows_from(cod) if site.compose(a, m) in s.arrows),
    )


def heyting_join(s1: Sieve, s2: Sieve) -> Sieve:
    _require_same_base(s1, s2)
    return Sieve(s1.base, s1.arrows | s2.arrows)


def heyting_meet(s1: Sieve, s2: Sieve) -> Sieve:
    _require_same_base(s1, s2)
    return Sieve(s1.base, s1.arrows & s2.arrows)


def heyting_implies(site, s1: Sieve, s2: Sieve) -> Sieve:
    """Relative pseudocomplement: m is in, iff every postcomposite taking m
    into s1 also lands in s2."""
    _require_same_base(s1, s2)
    members = []
    for m in site.arrows_from(s1.base):
        ok = True
        for g in site.arrows_from(site.arrow_cod(m)):
            gm = site.compose(g, m)
            if gm in s1.arrows and gm not in s2.arrows:
                ok = False
                break
        if ok:
            members.append(m)
    return Sieve(s1.base, frozenset(members))


# ---------------------------------------------------------------------------
# presheaves


@dataclass(frozen=True, eq=False)
class Presheaf:
    """A functor to finite sets, stored stage-wise with transition tables."""

    site: object
    values: tuple[tuple[Hashable, ...], ...]
    transitions: tuple[dict, ...]  # per arrow: value at dom -> value at cod
    value_sets: tuple[frozenset, ...]

    def value_set(self, o: int) -> frozenset:
        return self.value_sets[o]

    def map(self, arrow: int, x):
        return self.transitions[arrow][x]

    def validate(self) -> None:
        site = self.site
        for o in range(site.n_objects):
            ident = site.identity_arrow(o)
            for x in self.values[o]:
                if self.map(ident, x) != x:
                    raise InternalCheckError("identity transition is not the identity")
        for f in range(len(site.arrows)):
            dom_values = self.values[site.arrow_dom(f)]
            cod_set = self.value_set(site.arrow_cod(f))
            for x in dom_values:
                if self.map(f, x) not in cod_set:
                    raise InternalCheckError("transition leaves the codomain value set")
            for g in site.arrows_from(site.arrow_cod(f)):
                gf = site.compose(g, f)
                for x in dom_values:
                    if self.map(gf, x) != self.map(g, self.map(f, x)):
                        raise InternalCheckError("functoriality failure")


def build_presheaf(site, values_at: Callable[[int], Sequence], transition):
    """Materialize values and transitions, then check functoriality."""
    values = tuple(tuple(values_at(o)) for o in range(site.n_objects))
    transitions = []
    for a in range(len(site.arrows)):
        table = {x: transition(a, x) for x in values[site.arrow_dom(a)]}
        transitions.append(table)
    presheaf = Presheaf(site, values, tuple(transitions), tuple(frozenset(v) for v in values))
    presheaf.validate()
    return presheaf


def proposition_presheaf(site, universe: Sequence[Subspace]) -> Presheaf:
    """The proposition functor: the same universe at every stage, operators act."""
    universe = tuple(universe)
    members = set(universe)

    def transition(a: int, p: Subspace) -> Subspace:
        image = apply_operator(site.operator_matrix(site.arrow_op(a)), p)
        if image not in members:
            raise InternalCheckError(
                f"proposition universe is not closed under the monoid action: {image}"
            )
        return image

    return build_presheaf(site, lambda o: universe, transition)


def atom_presheaf(site, observable_of: Callable[[int], object]) -> Presheaf:
    """Zero-augmented atom sets per stage (the stage ray against its observable)."""
    from .modal import compute_atoms

    def values_at(o: int):
        atoms = compute_atoms(Ray(site.object_ray(o)), observable_of(o))
        return atoms.zero_augmented

    def transition(a: int, atom: Subspace) -> Subspace:
        return apply_operator(site.operator_matrix(site.arrow_op(a)), atom)

    return build_presheaf(site, values_at, transition)


@dataclass(frozen=True)
class GlobalElement:
    """A compatible choice of one value per stage (a point of the presheaf)."""

    presheaf: Presheaf
    values: tuple[Hashable, ...]

    def validate(self) -> None:
        site = self.presheaf.site
        for o in range(site.n_objects):
            if self.values[o] not in self.presheaf.value_set(o):
                raise NaturalityError(f"chosen value at stage {o} is not in the presheaf")
        for a in range(len(site.arrows)):
            if self.presheaf.map(a, self.values[site.arrow_dom(a)]) != self.values[site.arrow_cod(a)]:
                raise NaturalityError(f"naturality square fails at arrow {a}")


def atom_global_element(site, atoms: Presheaf, r: Subspace) -> GlobalElement:
    """The section picking the projection onto a fixed eigenspace at each stage."""
    values = tuple(
        project_onto_eigenspace(Ray(site.object_ray(o)), r) for o in range(site.n_objects)
    )
    element = GlobalElement(atoms, values)
    element.validate()
    return element


def true_subobject(site, sigma: GlobalElement, propositions: Presheaf) -> Presheaf:
    """Stage-wise up-sets of the transported atom inside the proposition functor."""
    def values_at(o: int):
        atom = sigma.values[o]
        return tuple(p for p in propositions.values[o] if leq(atom, p))

    def transition(a: int, p: Subspace) -> Subspace:
        return propositions.map(a, p)

    return build_presheaf(site, values_at, transition)


def is_subpresheaf(n: Presheaf, m: Presheaf) -> bool:
    site = m.site
    for o in range(site.n_objects):
        if not n.value_set(o) <= m.value_set(o):
            return False
    for a in range(len(site.arrows)):
        for x in n.values[site.arrow_dom(a)]:
            if n.map(a, x) != m.map(a, x):
                return False
            if n.map(a, x) not in n.value_set(site.arrow_cod(a)):
                return False
    return True


def characteristic(site, n: Presheaf, m: Presheaf, obj: int, x) -> Sieve:
    """The classifying sieve of x against the subfunctor n of m."""
    if not is_subpresheaf(n, m):
        raise NotASubPresheaf("characteristic morphism needs a subfunctor")
    return characteristic_unchecked(site, n, m, obj, x)


def characteristic_unchecked(site, n: Presheaf, m: Presheaf, obj: int, x) -> Sieve:
    return Sieve(
        obj,
        frozenset(
            a
            for a in site.arrows_from(obj)
            if m.map(a, x) in n.value_set(site.arrow_cod(a))
        ),
    )


def filter_check(site, s: Presheaf, universe: Presheaf) -> list[tuple]:
    """Up-set and meet-closure violations of a proposition-set functor,
    relative to the enclosing proposition functor."""
    violations: list[tuple] = []
    for o in range(site.n_objects):
        stage = set(s.values[o])
        for p in sorted(stage, key=Subspace.sort_key):
            for q in universe.values[o]:
                if leq(p, q) and q not in stage:
                    violations.append(("up-set", o, p, q))
            for q in sorted(stage, key=Subspace.sort_key):
                if meet(p, q) not in stage:
                    violations.append(("meet", o, p, q))
    return violations


# ---------------------------------------------------------------------------
# valuations


def valuation(site, obj: int, r: Subspace, p: Subspace) -> Sieve:
    """Arrows F with F(P) above F of the stage atom.  The direct formula."""
    atom = project_onto_eigenspace(Ray(site.object_ray(obj)), r)
    members = []
    for a in site.arrows_from(obj):
        f = site.operator_matrix(site.arrow_op(a))
        if leq(apply_operator(f, atom), apply_operator(f, p)):
            members.append(a)
    return Sieve(obj, frozenset(members))


def bottom_annihilator(site, obj: int, e_r: Subspace) -> Sieve:
    """Arrows sending the true atom to the zero space; the valuation floor."""
    members = []
    for a in site.arrows_from(obj):
        f = site.operator_matrix(site.arrow_op(a))
        if apply_operator(f, e_r).is_zero:
            members.append(a)
    return Sieve(obj, frozenset(members))


def delta_omega_at(site, obj: int, e_r: Subspace, cap: int) -> StageHeyting:
    """The sieves above the annihilator bottom; a Heyting algebra of its own."""
    floor = bottom_annihilator(site, obj, e_r)
    stage = omega_at(site, obj, cap)
    kept = tuple(s for s in stage.sieves if floor.arrows <= s.arrows)
    return StageHeyting(base=obj, top=stage.top, bottom=floor, sieves=kept)


def omega_presheaf(site, cap: int) -> Presheaf:
    """The subobject classifier, stage lattices fully enumerated."""
    return build_presheaf(
        site,
        lambda o: enumerate_sieves(site, o, cap),
        lambda a, s: omega_transition(site, a, s),
    )


def delta_omega_presheaf(site, r: Subspace, cap: int) -> Presheaf:
    """The sieves above each stage's annihilator bottom, as a subfunctor."""
    def values_at(o: int):
        atom = project_onto_eigenspace(Ray(site.object_ray(o)), r)
        return delta_omega_at(site, o, atom, cap).sieves

    return build_presheaf(site, values_at, lambda a, s: omega_transition(site, a, s))


def tau_values(site) -> tuple[Sieve, ...]:
    """The 'true' section: the top sieve at every stage."""
    return tuple(top_sieve(site, o) for o in range(site.n_objects))


def semiclassifier_check(
    site,
    delta_omega: Presheaf,
    omega: Presheaf,
    delta_tau: tuple[Sieve, ...],
    pairs: Sequence[tuple[Presheaf, Presheaf]],
    candidate_budget: int = 10_000,
) -> list[dict]:
    """Per-object semi-classifier audit for a subfunctor of the classifier.

    For every (N, M) pair: (a) the characteristic morphism factors through
    the stage sets of delta_omega; (b) the square against delta_tau is a
    set-level pullback at every object; (c) the factored map is the only
    natural map with that pullback property (full candidate enumeration when
    the count fits the budget, otherwise a pointwise forcing argument).
    """
    rows: list[dict] = []
    if not is_subpresheaf(delta_omega, omega):
        rows.append({"pair": None, "passed": False, "reason": "not a subfunctor of the classifier"})
        return rows
    for a in range(len(site.arrows)):
        lhs = omega_transition(site, a, delta_tau[site.arrow_dom(a)])
        if lhs != delta_tau[site.arrow_cod(a)]:
            rows.append({"pair": None, "passed": False, "reason": "the 'true' section is not natural"})
            return rows
    for idx, (n, m) in enumerate(pairs):
        if not is_subpresheaf(n, m):
            raise NotASubPresheaf("semi-classifier check needs subfunctor pairs")
        chi = {
            (o, x): characteristic_unchecked(site, n, m, o, x)
            for o in range(site.n_objects)
            for x in m.values[o]
        }
        factors = all(
            chi[(o, x)] in delta_omega.value_set(o)
            for o in range(site.n_objects)
            for x in m.values[o]
        )
        pullback = all(
            set(n.values[o]) == {x for x in m.values[o] if chi[(o, x)] == delta_tau[o]}
            for o in range(site.n_objects)
        )
        count = 1
        for o in range(site.n_objects):
            count *= len(delta_omega.values[o]) ** len(m.values[o])
            if count > candidate_budget:
                break
        if count <= candidate_budget:
            survivors = _enumerate_pullback_maps(site, delta_omega, m, n, delta_tau)
            unique = survivors == [chi]
            mode = "enumerated"
        else:
            unique = _forced_pointwise_unique(site, delta_omega, m, n, delta_tau, chi)
            mode = "forced-pointwise"
        rows.append(
            {
                "pair": idx,
                "passed": factors and pullback and unique,
                "factors": factors,
                "pullback": pullback,
                "uniqueness": unique,
                "uniqueness_mode": mode,
            }
        )
    return rows


def _enumerate_pullback_maps(site, delta_omega, m, n, delta_tau) -> list[dict]:
    """All natural maps into the semi-classifier with the pullback property."""
    slots = [(o, x) for o in range(site.n_objects) for x in m.values[o]]
    choices = [delta_omega.values[o] for o, _ in slots]
    survivors = []
    for assignment in itertools.product(*choices):
        zeta = {slot: value for slot, value in zip(slots, assignment)}
        ok = True
        for o in range(site.n_objects):
            wanted = set(n.values[o])
            got = {x for x in m.values[o] if zeta[(o, x)] == delta_tau[o]}
            if wanted != got:
                ok = False
                break
        if ok:
            for a in range(len(site.arrows)):
                dom, cod = site.arrow_dom(a), site.arrow_cod(a)
                for x in m.values[dom]:
                    if omega_transition(site, a, zeta[(dom, x)]) != zeta[(cod, m.map(a, x))]:
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            survivors.append(zeta)
    return survivors


def _forced_pointwise_unique(site, delta_omega, m, n, delta_tau, chi) -> bool:
    """Pullback forces the top on members; off members the characteristic
    formula is the only natural choice — verify chi obeys both clauses."""
    for o in range(site.n_objects):
        n_set = set(n.values[o])
        for x in m.values[o]:
            if x in n_set:
                if chi[(o, x)] != delta_tau[o]:
                    return False
            else:
                if chi[(o, x)] == delta_tau[o]:
                    return False
                if chi[(o, x)] != characteristic_unchecked(site, n, m, o, x):
                    return False
    return True


def ib_condition_check(
    site,
    obj: int,
    r: Subspace,
    universe: Sequence[Subspace],
) -> dict:
    """Monotonicity, exclusivity, unit and null verdicts for one stage."""
    from .subspaces import full_space, zero_space

    n = site.object_ray(obj).ambient_dim
    atom = project_onto_eigenspace(Ray(site.object_ray(obj)), r)
    top = top_sieve(site, obj)
    floor = bottom_annihilator(site, obj, atom)
    values = {p: valuation(site, obj, r, p) for p in universe}
    monotone = all(
        values[p] <= values[q]
        for p in universe
        for q in universe
        if leq(p, q)
    )
    exclusive = True
    for p in universe:
        if values[p] != top:
            continue
        for q in universe:
            conj = valuation(site, obj, r, meet(p, q))
            if conj != top and values[q] == top:
                exclusive = False
    unit = valuation(site, obj, r, full_space(n)) == top
    null_value = valuation(site, obj, r, zero_space(n))
    return {
        "monotonicity": monotone,
        "exclusivity": exclusive,
        "unit": unit,
        "null_equals_floor": null_value == floor,
        "floor_nonempty": bool(floor.arrows),
        "null_fails_in_omega": null_value != bottom_sieve(obj),
        "null_passes_in_delta": null_value == floor,
    }
