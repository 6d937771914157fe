"""Finite truncations of the base categories.

A site is a finite category whose objects are rays (plain) or ray/observable
pairs (extended) and whose arrows are monoid operators acting nonzero on the
domain ray.  Both site kinds expose the same small protocol — `arrows_from`,
`compose`, `arrow_dom`/`arrow_cod`, `identity_arrow`, `object_ray` — so the
sieve machinery is written once.

Truncation policy: objects are the orbit of the declared seed states under
the declared generator monoid, which is required to close within its cap.
Every verified statement is a statement about this finite sub-site.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    ClosureExceeded,
    InternalCheckError,
    NotInCommutant,
    OrbitExceeded,
    UnknownObjectError,
)
from .linalg import ExactMatrix, identity_matrix, mat_mul
from .modal import Observable, in_commutant, observable_leq, zero_augmented_atom_set
from .subspaces import Ray, Subspace, apply_operator


@dataclass(frozen=True)
class OperatorMonoid:
    """A multiplicatively closed set of exact operators with its product table."""

    elements: tuple[ExactMatrix, ...]
    identity_index: int
    generator_indices: tuple[int, ...]
    table: tuple[tuple[int, ...], ...]  # table[i][j] = index of elements[i]·elements[j]

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def operator(self, i: int) -> ExactMatrix:
        return self.elements[i]


def close_monoid(
    generators: Sequence[ExactMatrix], cap: int, *, dim: int | None = None
) -> OperatorMonoid:
    """Smallest multiplicatively closed set containing the generators and I."""
    if dim is None:
        if not generators:
            raise ValueError("dim is required when there are no generators")
        dim = generators[0].rows
    for g in generators:
        if g.rows != dim or g.cols != dim:
            raise ValueError(f"generator is {g.rows}x{g.cols}, expected {dim}x{dim}")
    elements: list[ExactMatrix] = [identity_matrix(dim)]
    index: dict[ExactMatrix, int] = {elements[0]: 0}
    generator_indices: list[int] = []
    for g in generators:
        if g not in index:
            if len(elements) >= cap:
                raise ClosureExceeded(cap)
            index[g] = len(elements)
            elements.append(g)
        generator_indices.append(index[g])
    # Grow until every pairwise product is present.
    frontier = list(range(len(elements)))
    while frontier:
        new_frontier: list[int] = []
        for i in list(range(len(elements))):
            for j in frontier:
                for a, b in ((i, j), (j, i)):
                    product = mat_mul(elements[a], elements[b])
                    if product not in index:
                        if len(elements) >= cap:
                            raise ClosureExceeded(cap)
                        index[product] = len(elements)
                        elements.append(product)
                        new_frontier.append(index[product])
        frontier = new_frontier
    size = len(elements)
    table = tuple(
        tuple(index[mat_mul(elements[i], elements[j])] for j in range(size))
        for i in range(size)
    )
    return OperatorMonoid(tuple(elements), 0, tuple(generator_indices), table)


def submonoid_commuting_with(
    monoid: OperatorMonoid, observable: Observable
) -> tuple[OperatorMonoid, tuple[int, ...]]:
    """Intersect with a commutant.  Returns the sub-monoid and the index map
    from sub-monoid positions back into the original element list."""
    keep = [i for i, f in enumerate(monoid.elements) if in_commutant(f, observable)]
    position = {orig: new for new, orig in enumerate(keep)}
    elements = tuple(monoid.elements[i] for i in keep)
    table = tuple(
        tuple(position[monoid.mul(i, j)] for j in keep) for i in keep
    )
    generator_indices = tuple(position[g] for g in monoid.generator_indices if g in position)
    return (
        OperatorMonoid(elements, position[monoid.identity_index], generator_indices, table),
        tuple(keep),
    )


def _orbit(
    monoid: OperatorMonoid, seeds: Sequence[Subspace], cap: int
) -> tuple[Subspace, ...]:
    rays: list[Subspace] = []
    seen: set[Subspace] = set()
    for s in seeds:
        if s not in seen:
            seen.add(s)
            rays.append(s)
    cursor = 0
    while cursor < len(rays):
        base = rays[cursor]
        cursor += 1
        for f in monoid.elements:
            image = apply_operator(f, base)
            if image.is_zero or image in seen:
                continue
            if len(rays) >= cap:
                raise OrbitExceeded(cap)
            seen.add(image)
            rays.append(image)
    return tuple(rays)


@dataclass(frozen=True)
class PlainArrow:
    dom: int
    op: int
    cod: int


@dataclass(frozen=True, eq=False)
class PlainSite:
    """Truncation of the single-observable base category."""

    observable: Observable
    monoid: OperatorMonoid
    rays: tuple[Subspace, ...]
    arrows: tuple[PlainArrow, ...]
    _out: tuple[tuple[int, ...], ...]
    _by_dom_op: dict[tuple[int, int], int]
    _identity: tuple[int, ...]

    # -- category protocol -------------------------------------------------
    @property
    def n_objects(self) -> int:
        return len(self.rays)

    def object_ray(self, o: int) -> Subspace:
        return self.rays[o]

    def object_key(self, o: int) -> tuple:
        return ("ray", o)

    def arrows_from(self, o: int) -> tuple[int, ...]:
        return self._out[o]

    def arrow_dom(self, a: int) -> int:
        return self.arrows[a].dom

    def arrow_cod(self, a: int) -> int:
        return self.arrows[a].cod

    def arrow_op(self, a: int) -> int:
        return self.arrows[a].op

    def operator_matrix(self, op: int) -> ExactMatrix:
        return self.monoid.operator(op)

    def identity_arrow(self, o: int) -> int:
        return self._identity[o]

    def compose(self, g: int, f: int) -> int:
        """g∘f for cod(f) = dom(g); arrows compose by operator product."""
        fa, ga = self.arrows[f], self.arrows[g]
        if fa.cod != ga.dom:
            raise InternalCheckError("composed arrows are not adjacent")
        key = (fa.dom, self.monoid.mul(ga.op, fa.op))
        result = self._by_dom_op.get(key)
        if result is None:
            raise InternalCheckError("composite operator annihilates a reachable ray")
        return result

    # -- conveniences ------------------------------------------------------
    def ray_index(self, ray: Subspace) -> int:
        try:
            return self.rays.index(ray)
        except ValueError:
            raise UnknownObjectError(f"{ray} is not an object of the site") from None

    def hom(self, dom: int, cod: int) -> tuple[int, ...]:
        return tuple(a for a in self._out[dom] if self.arrows[a].cod == cod)


def build_plain_site(
    observable: Observable,
    monoid: OperatorMonoid,
    seed_states: Sequence[Ray],
    cap: int,
) -> PlainSite:
    for i, f in enumerate(monoid.elements):
        if not in_commutant(f, observable):
            raise NotInCommutant(i, observable.name)
    rays = _orbit(monoid, [s.space for s in seed_states], cap)
    arrows: list[PlainArrow] = []
    by_dom_op: dict[tuple[int, int], int] = {}
    ray_index = {ray: i for i, ray in enumerate(rays)}
    out: list[list[int]] = [[] for _ in rays]
    identity: list[int] = [-1] * len(rays)
    for d, ray in enumerate(rays):
        for op, f in enumerate(monoid.elements):
            image = apply_operator(f, ray)
            if image.is_zero:
                continue
            a = len(arrows)
            arrows.append(PlainArrow(d, op, ray_index[image]))
            by_dom_op[(d, op)] = a
            out[d].append(a)
            if op == monoid.identity_index:
                identity[d] = a
    return PlainSite(
        observable,
        monoid,
        rays,
        tuple(arrows),
        tuple(tuple(x) for x in out),
        by_dom_op,
        tuple(identity),
    )


def restrict_down(site: PlainSite, e: Ray) -> PlainSite:
    """The sub-site on objects reachable from e, hom-sets unchanged."""
    base = site.ray_index(e.space)
    keep = sorted({site.arrow_cod(a) for a in site.arrows_from(base)} | {base})
    new_index = {old: new for new, old in enumerate(keep)}
    rays = tuple(site.rays[i] for i in keep)
    arrows: list[PlainArrow] = []
    by_dom_op: dict[tuple[int, int], int] = {}
    out: list[list[int]] = [[] for _ in keep]
    identity: list[int] = [-1] * len(keep)
    for old in keep:
        for a in site.arrows_from(old):
            arr = site.arrows[a]
            if arr.cod not in new_index:  # pragma: no cover - closure guarantees
                raise InternalCheckError("down-restriction is not arrow-closed")
            idx = len(arrows)
            arrows.append(PlainArrow(new_index[arr.dom], arr.op, new_index[arr.cod]))
            by_dom_op[(new_index[arr.dom], arr.op)] = idx
            out[new_index[arr.dom]].append(idx)
            if arr.op == site.monoid.identity_index:
                identity[new_index[arr.dom]] = idx
    return PlainSite(
        site.observable,
        site.monoid,
        rays,
        tuple(arrows),
        tuple(tuple(x) for x in out),
        by_dom_op,
        tuple(identity),
    )


@dataclass(frozen=True)
class MorphismX:
    """A typed arrow of the extended site; equality is all four defining fields."""

    dom_ray: int
    dom_rho: int
    op: int
    cod_rho: int
    cod_ray: int


@dataclass(frozen=True, eq=False)
class ExtendedSite:
    """Truncation of the all-observables base category."""

    observables: tuple[Observable, ...]
    monoid: OperatorMonoid
    rays: tuple[Subspace, ...]
    objects: tuple[tuple[int, int], ...]  # (ray index, rho index)
    arrows: tuple[MorphismX, ...]
    rho_leq: tuple[tuple[bool, ...], ...]
    _object_index: dict[tuple[int, int], int]
    _out: tuple[tuple[int, ...], ...]
    _by_dom_op_rho: dict[tuple[int, int, int], int]
    _identity: tuple[int, ...]

    # -- category protocol -------------------------------------------------
    @property
    def n_objects(self) -> int:
        return len(self.objects)

    def object_ray(self, o: int) -> Subspace:
        return self.rays[self.objects[o][0]]

    def object_rho(self, o: int) -> int:
        return self.objects[o][1]

    def object_key(self, o: int) -> tuple:
        return ("ray-rho",) + self.objects[o]

    def arrows_from(self, o: int) -> tuple[int, ...]:
        return self._out[o]

    def arrow_dom(self, a: int) -> int:
        arr = self.arrows[a]
        return self._object_index[(arr.dom_ray, arr.dom_rho)]

    def arrow_cod(self, a: int) -> int:
        arr = self.arrows[a]
        return self._object_index[(arr.cod_ray, arr.cod_rho)]

    def arrow_op(self, a: int) -> int:
        return self.arrows[a].op

    def arrow_cod_rho(self, a: int) -> int:
        return self.arrows[a].cod_rho

    def operator_matrix(self, op: int) -> ExactMatrix:
        return self.monoid.operator(op)

    def identity_arrow(self, o: int) -> int:
        return self._identity[o]

    def compose(self, g: int, f: int) -> int:
        fa, ga = self.arrows[f], self.arrows[g]
        if (fa.cod_ray, fa.cod_rho) != (ga.dom_ray, ga.dom_rho):
            raise InternalCheckError("composed arrows are not adjacent")
        dom = self._object_index[(fa.dom_ray, fa.dom_rho)]
        key = (dom, self.monoid.mul(ga.op, fa.op), ga.cod_rho)
        result = self._by_dom_op_rho.get(key)
        if result is None:
            raise InternalCheckError("composition left the extended site")
        return result

    # -- conveniences ------------------------------------------------------
    def object_index(self, ray: Subspace, rho: int) -> int:
        for i, r in enumerate(self.rays):
            if r == ray:
                key = (i, rho)
                if key in self._object_index:
                    return self._object_index[key]
        raise UnknownObjectError(f"({ray}, rho={rho}) is not an object of the site")

    def rho_arrow_twin(self, a: int) -> int:
        """The arrow with the same domain and operator but codomain stage dom_rho."""
        arr = self.arrows[a]
        dom = self._object_index[(arr.dom_ray, arr.dom_rho)]
        key = (dom, arr.op, arr.dom_rho)
        twin = self._by_dom_op_rho.get(key)
        if twin is None:  # pragma: no cover - the rho-rho twin always exists
            raise InternalCheckError("missing rho-rho twin arrow")
        return twin


def in_product_category(
    site: ExtendedSite, dom_ray: int, dom_rho: int, op: int, cod_rho: int
) -> bool:
    """Membership before the atom condition: the product-order category."""
    if not site.rho_leq[dom_rho][cod_rho]:
        return False
    f = site.monoid.operator(op)
    if not in_commutant(f, site.observables[dom_rho]):
        return False
    return not apply_operator(f, site.rays[dom_ray]).is_zero


def build_extended_site(
    observables: Sequence[Observable],
    monoid: OperatorMonoid,
    seed_states: Sequence[Ray],
    cap: int,
) -> ExtendedSite:
    observables = tuple(observables)
    rho_leq = tuple(
        tuple(observable_leq(a, b) for b in observables) for a in observables
    )
    rays = _orbit(monoid, [s.space for s in seed_states], cap)
    commutes = {
        (op, k): in_commutant(f, observables[k])
        for op, f in enumerate(monoid.elements)
        for k in range(len(observables))
    }
    atom_sets = {
        (i, k): zero_augmented_atom_set(ray, observables[k])
        for i, ray in enumerate(rays)
        for k in range(len(observables))
    }
    images: dict[tuple[int, int], int | None] = {}
    ray_index = {ray: i for i, ray in enumerate(rays)}
    for op, f in enumerate(monoid.elements):
        for i, ray in enumerate(rays):
            image = apply_operator(f, ray)
            images[(op, i)] = None if image.is_zero else ray_index[image]

    objects = tuple(
        (i, k) for i in range(len(rays)) for k in range(len(observables))
    )
    object_index = {obj: n for n, obj in enumerate(objects)}
    arrows: list[MorphismX] = []
    out: list[list[int]] = [[] for _ in objects]
    by_dom_op_rho: dict[tuple[int, int, int], int] = {}
    identity: list[int] = [-1] * len(objects)
    for n, (i, k) in enumerate(objects):
        for op in range(len(monoid)):
            if not commutes[(op, k)]:
                continue
            cod_ray = images[(op, i)]
            if cod_ray is None:
                continue
            for k2 in range(len(observables)):
                if not rho_leq[k][k2]:
                    continue
                if atom_sets[(cod_ray, k)] != atom_sets[(cod_ray, k2)]:
                    continue
                a = len(arrows)
                arrows.append(MorphismX(i, k, op, k2, cod_ray))
                out[n].append(a)
                by_dom_op_rho[(n, op, k2)] = a
                if op == monoid.identity_index and k2 == k:
                    identity[n] = a
    site = ExtendedSite(
        observables,
        monoid,
        rays,
        objects,
        tuple(arrows),
        rho_leq,
        object_index,
        tuple(tuple(x) for x in out),
        by_dom_op_rho,
        tuple(identity),
    )
    _validate_composition(site)
    return site


def _validate_composition(site) -> None:
    """Every composable pair must compose to an arrow of the site."""
    for f in range(len(site.arrows)):
        for g in site.arrows_from(site.arrow_cod(f)):
            composite = site.compose(g, f)  # raises InternalCheckError on failure
            if site.arrow_dom(composite) != site.arrow_dom(f):
                raise InternalCheckError("composite has the wrong domain")


def restrict_to_rho(site: ExtendedSite, rho: int) -> tuple[PlainSite, tuple[int, ...]]:
    """The fixed-rho wide subcategory, reindexed as a plain site.

    Returns the plain site together with the map from sub-monoid operator
    indices back to the extended site's monoid indices.
    """
    observable = site.observables[rho]
    submonoid, op_map = submonoid_commuting_with(site.monoid, observable)
    plain = build_plain_site(
        observable,
        submonoid,
        [Ray(r) for r in site.rays],
        cap=max(len(site.rays), 1),
    )
    return plain, op_map


def restrict_down_extended(site: ExtendedSite, obj: int) -> tuple[ExtendedSite, dict[int, int]]:
    """Full subcategory on objects reachable from obj.

    Returns the restricted site and the map old-arrow-id -> new-arrow-id.
    """
    if obj < 0 or obj >= site.n_objects:
        raise UnknownObjectError(f"object index {obj} out of range")
    keep = sorted({site.arrow_cod(a) for a in site.arrows_from(obj)} | {obj})
    new_obj_index = {old: new for new, old in enumerate(keep)}
    objects = tuple(site.objects[i] for i in keep)
    arrows: list[MorphismX] = []
    arrow_map: dict[int, int] = {}
    out: list[list[int]] = [[] for _ in keep]
    by_dom_op_rho: dict[tuple[int, int, int], int] = {}
    identity: list[int] = [-1] * len(keep)
    for old in keep:
        for a in site.arrows_from(old):
            if site.arrow_cod(a) not in new_obj_index:  # pragma: no cover
                raise InternalCheckError("down-restriction is not arrow-closed")
            arr = site.arrows[a]
            idx = len(arrows)
            arrows.append(arr)
            arrow_map[a] = idx
            out[new_obj_index[old]].append(idx)
            by_dom_op_rho[(new_obj_index[old], arr.op, arr.cod_rho)] = idx
            if arr.op == site.monoid.identity_index and arr.cod_rho == arr.dom_rho:
                identity[new_obj_index[old]] = idx
    object_index = {site.objects[old]: new for old, new in new_obj_index.items()}
    restricted = ExtendedSite(
        site.observables,
        site.monoid,
        site.rays,
        objects,
        tuple(arrows),
        site.rho_leq,
        object_index,
        tuple(tuple(x) for x in out),
        by_dom_op_rho,
        tuple(identity),
    )
    return restricted, arrow_map


def associativity_violations(site) -> list[tuple[int, int, int]]:
    """All composable triples where (h∘g)∘f != h∘(g∘f)."""
    bad: list[tuple[int, int, int]] = []
    for f in range(len(site.arrows)):
        for g in site.arrows_from(site.arrow_cod(f)):
            gf = site.compose(g, f)
            for h in site.arrows_from(site.arrow_cod(g)):
                if site.compose(h, gf) != site.compose(site.compose(h, g), f):
                    bad.append((h, g, f))
    return bad


def identity_violations(site) -> list[int]:
    """Objects without an identity arrow, plus arrows not absorbed by identities."""
    bad: list[int] = []
    for o in range(site.n_objects):
        if site.identity_arrow(o) < 0:
            bad.append(o)
    for a in range(len(site.arrows)):
        if site.compose(site.identity_arrow(site.arrow_cod(a)), a) != a:
            bad.append(a)
        if site.compose(a, site.identity_arrow(site.arrow_dom(a))) != a:
            bad.append(a)
    return bad
