"""Orchestration: build sites and functors for a scenario, emit valuations.

Reports are plain dicts with deterministic key and list ordering, so the
JSON rendering is byte-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bridge import (
    BridgeContext,
    flat,
    make_bridge_context,
    natural_map,
)
from .errors import SievevalError, ValidationError
from .modal import TrueAtomSet, compute_atoms, in_determinate_sublattice
from .scenario import RunSpec, Scenario, proposition_universe
from .sieves import (
    GlobalElement,
    Presheaf,
    Sieve,
    atom_global_element,
    atom_presheaf,
    bottom_annihilator,
    proposition_presheaf,
    top_sieve,
    true_subobject,
    valuation,
)
from .sites import (
    ExtendedSite,
    OperatorMonoid,
    PlainSite,
    build_extended_site,
    build_plain_site,
    close_monoid,
    restrict_down_extended,
    submonoid_commuting_with,
)
from .subspaces import Ray, Subspace


@dataclass
class BuiltRun:
    """Everything a run needs, constructed once and reused by all checks."""

    scenario: Scenario
    spec: RunSpec
    state: Ray
    rho_index: int
    r_space: Subspace  # the chosen eigenspace of the run observable
    monoid: OperatorMonoid  # full generator closure
    universe: list[Subspace]
    universe_names: dict[Subspace, str]
    plain: PlainSite
    plain_op_map: tuple[int, ...]
    stage: int  # plain-site object of the run state
    atoms: TrueAtomSet
    e_r: Subspace
    propositions_l: Presheaf
    atoms_a: Presheaf
    sigma: GlobalElement
    true_t: Presheaf
    # populated only when the run declares an observable family
    family: tuple[int, ...] = ()
    extended_full: ExtendedSite | None = None
    rest: ExtendedSite | None = None
    rest_stage: int = -1
    ctx: BridgeContext | None = None
    propositions_l_ext: Presheaf | None = None
    atoms_a_ext: Presheaf | None = None
    sigma_ext: GlobalElement | None = None
    true_t_ext: Presheaf | None = None

    @property
    def has_extended(self) -> bool:
        return self.rest is not None


@dataclass
class BuiltScenario:
    scenario: Scenario
    monoid: OperatorMonoid
    universe: list[Subspace]
    universe_names: dict[Subspace, str]
    runs: list[BuiltRun]


def build_scenario(scenario: Scenario) -> BuiltScenario:
    monoid = close_monoid(
        scenario.generators, scenario.caps["monoid"], dim=scenario.dimension
    )
    universe, names = proposition_universe(scenario, monoid)
    extended_cache: dict[tuple[int, ...], ExtendedSite] = {}
    runs = [
        _build_run(scenario, spec, monoid, universe, names, extended_cache)
        for spec in scenario.runs
    ]
    return BuiltScenario(scenario, monoid, universe, names, runs)


def _build_run(
    scenario: Scenario,
    spec: RunSpec,
    monoid: OperatorMonoid,
    universe: list[Subspace],
    names: dict[Subspace, str],
    extended_cache: dict[tuple[int, ...], ExtendedSite],
) -> BuiltRun:
    state = scenario.states[spec.state]
    rho_index = scenario.observable_index[spec.observable]
    observable = scenario.observables[rho_index]
    r_space = observable.eigenspaces[spec.eigenspace]

    plain_monoid, op_map = submonoid_commuting_with(monoid, observable)
    plain = build_plain_site(
        observable,
        plain_monoid,
        list(scenario.states.values()),
        scenario.caps["orbit"],
    )
    stage = plain.ray_index(state.space)
    atoms = compute_atoms(state, observable)
    e_r = atoms.atom_for_eigenspace(spec.eigenspace)
    if e_r.is_zero:
        raise ValidationError(
            f"runs.{spec.name}.eigenspace",
            "the state projects to zero on the chosen eigenspace; no true atom there",
        )

    propositions_l = proposition_presheaf(plain, universe)
    atoms_a = atom_presheaf(plain, lambda o: observable)
    sigma = atom_global_element(plain, atoms_a, r_space)
    true_t = true_subobject(plain, sigma, propositions_l)

    run = BuiltRun(
        scenario=scenario,
        spec=spec,
        state=state,
        rho_index=rho_index,
        r_space=r_space,
        monoid=monoid,
        universe=universe,
        universe_names=names,
        plain=plain,
        plain_op_map=op_map,
        stage=stage,
        atoms=atoms,
        e_r=e_r,
        propositions_l=propositions_l,
        atoms_a=atoms_a,
        sigma=sigma,
        true_t=true_t,
    )

    if spec.extended:
        family = tuple(scenario.observable_index[name] for name in spec.extended)
        key = tuple(sorted(family))
        if key not in extended_cache:
            extended_cache[key] = build_extended_site(
                [scenario.observables[i] for i in sorted(family)],
                monoid,
                list(scenario.states.values()),
                scenario.caps["orbit"],
            )
        extended_full = extended_cache[key]
        family_sorted = tuple(sorted(family))
        rho_in_family = family_sorted.index(rho_index)
        stage_full = extended_full.object_index(state.space, rho_in_family)
        rest, _ = restrict_down_extended(extended_full, stage_full)
        rest_stage = rest.object_index(state.space, rho_in_family)
        ctx = make_bridge_context(rest, rest_stage, plain, op_map)

        run.family = family_sorted
        run.extended_full = extended_full
        run.rest = rest
        run.rest_stage = rest_stage
        run.ctx = ctx
        run.propositions_l_ext = proposition_presheaf(rest, universe)
        run.atoms_a_ext = atom_presheaf(
            rest, lambda o: rest.observables[rest.object_rho(o)]
        )
        run.sigma_ext = atom_global_element(rest, run.atoms_a_ext, r_space)
        run.true_t_ext = true_subobject(rest, run.sigma_ext, run.propositions_l_ext)
    return run


# ---------------------------------------------------------------------------
# serialization helpers


def serialize_subspace(s: Subspace) -> dict:
    return {"ambient_dim": s.ambient_dim, "basis": s.serialize()}


def serialize_plain_sieve(site: PlainSite, s: Sieve) -> list[list[int]]:
    rows = sorted(
        (site.arrow_op(a), site.arrow_cod(a)) for a in s.arrows
    )
    return [[op, cod] for op, cod in rows]


def serialize_extended_sieve(site: ExtendedSite, s: Sieve) -> list[list]:
    rows = sorted(
        (site.arrow_op(a), site.arrows[a].cod_ray, site.arrow_cod_rho(a))
        for a in s.arrows
    )
    return [[op, cod_ray, site.observables[rho].name] for op, cod_ray, rho in rows]


def _proposition_selection(run: BuiltRun) -> list[Subspace]:
    if run.spec.propositions is None:
        return list(run.universe)
    chosen = [run.scenario.propositions[name] for name in run.spec.propositions]
    return chosen


def valuate_run(run: BuiltRun) -> dict:
    """Per-proposition truth values at the run's stage, all layers."""
    plain = run.plain
    stage = run.stage
    top = top_sieve(plain, stage)
    floor = bottom_annihilator(plain, stage, run.e_r)
    rows = []
    for p in _proposition_selection(run):
        sieve = valuation(plain, stage, run.r_space, p)
        in_d = in_determinate_sublattice(p, run.atoms)
        row = {
            "name": run.universe_names.get(p, "?"),
            "subspace": serialize_subspace(p),
            "in_determinate": in_d,
            "bub": _bub(run, p) if in_d else None,
            "sieve": serialize_plain_sieve(plain, sieve),
            "flags": {
                "is_top": sieve == top,
                "is_bottom_annihilator": sieve == floor,
                "in_delta_omega": floor.arrows <= sieve.arrows,
            },
        }
        if run.has_extended:
            rest, rest_stage, ctx = run.rest, run.rest_stage, run.ctx
            ext_sieve = valuation(rest, rest_stage, run.r_space, p)
            nat = natural_map(ctx, ext_sieve)
            flattened = flat(ctx, ext_sieve)
            row["extended"] = {
                "sieve": serialize_extended_sieve(rest, ext_sieve),
                "natural_image": serialize_extended_sieve(rest, nat),
                "flat_image": serialize_plain_sieve(plain, flattened),
                "verdicts": {
                    "a": flattened == sieve,
                    "b": flat(ctx, nat) == sieve,
                    "c": _sharp_equals(ctx, sieve, nat),
                },
            }
        rows.append(row)
    report = {
        "run": run.spec.name,
        "state": run.spec.state,
        "observable": run.spec.observable,
        "eigenspace": run.spec.eigenspace,
        "true_atom": serialize_subspace(run.e_r),
        "stage_objects": [serialize_subspace(r) for r in plain.rays],
        "propositions": rows,
    }
    report["stage_heyting"] = _stage_heyting_tables(run)
    return report


def _stage_heyting_tables(run: BuiltRun) -> dict:
    """The fully enumerated sieve lattices at the run's stage, if they fit."""
    from .bridge import natural_sieves_at
    from .sieves import enumerate_sieves

    cap = run.scenario.caps["sieve_enum"]
    try:
        plain_sieves = enumerate_sieves(run.plain, run.stage, cap)
    except SievevalError:
        return {"within_cap": False}
    tables = {
        "within_cap": True,
        "plain_sieves": [serialize_plain_sieve(run.plain, s) for s in plain_sieves],
    }
    if run.has_extended:
        try:
            ext = enumerate_sieves(run.rest, run.rest_stage, cap)
        except SievevalError:
            tables["within_cap"] = False
            return tables
        tables["extended_sieves"] = [serialize_extended_sieve(run.rest, s) for s in ext]
        tables["natural_sieves"] = [
            serialize_extended_sieve(run.rest, s)
            for s in natural_sieves_at(run.rest, run.rest_stage, cap)
        ]
    return tables


def _bub(run: BuiltRun, p: Subspace) -> int:
    from .modal import bub_valuation

    return bub_valuation(run.e_r, p)


def _sharp_equals(ctx: BridgeContext, plain_sieve: Sieve, nat: Sieve) -> bool:
    from .bridge import sharp

    return sharp(ctx, plain_sieve) == nat


def run_valuate(scenario: Scenario, run_name: str) -> dict:
    built = build_scenario(scenario)
    for run in built.runs:
        if run.spec.name == run_name:
            return {
                "scenario": scenario.name,
                "dimension": scenario.dimension,
                "truncation": truncation_summary(built),
                "valuation": valuate_run(run),
            }
    raise ValidationError("run", f"no run named {run_name!r}")


def truncation_summary(built: BuiltScenario) -> dict:
    return {
        "monoid_size": len(built.monoid),
        "generators": list(built.scenario.generator_names),
        "universe_size": len(built.universe),
        "caps": dict(sorted(built.scenario.caps.items())),
        "seed_states": sorted(built.scenario.states),
    }


def dump_site(scenario: Scenario) -> dict:
    """Deterministic dump of every site a scenario builds."""
    built = build_scenario(scenario)
    monoid = built.monoid
    out = {
        "scenario": scenario.name,
        "dimension": scenario.dimension,
        "truncation": truncation_summary(built),
        "monoid": {
            "elements": [
                [[str(e) for e in row] for row in m.entries] for m in monoid.elements
            ],
            "identity": monoid.identity_index,
            "product_table": [list(row) for row in monoid.table],
        },
        "runs": [],
    }
    for run in built.runs:
        plain = run.plain
        entry = {
            "run": run.spec.name,
            "plain": {
                "observable": run.spec.observable,
                "operator_indices": list(run.plain_op_map),
                "objects": [serialize_subspace(r) for r in plain.rays],
                "morphisms": [
                    {"dom": a.dom, "op": run.plain_op_map[a.op], "cod": a.cod}
                    for a in plain.arrows
                ],
            },
        }
        if run.has_extended:
            from .sites import in_product_category

            rest = run.rest
            product_arrows = 0
            for i, k in rest.objects:
                for op in range(len(rest.monoid)):
                    for k2 in range(len(rest.observables)):
                        if in_product_category(rest, i, k, op, k2):
                            product_arrows += 1
            entry["extended"] = {
                "family": [rest.observables[k].name for k in range(len(rest.observables))],
                "product_category_arrows": product_arrows,
                "atom_condition_arrows": len(rest.arrows),
                "objects": [
                    {"ray": serialize_subspace(rest.rays[i]), "rho": rest.observables[k].name}
                    for (i, k) in rest.objects
                ],
                "morphisms": [
                    {
                        "dom_ray": m.dom_ray,
                        "dom_rho": rest.observables[m.dom_rho].name,
                        "op": m.op,
                        "cod_ray": m.cod_ray,
                        "cod_rho": rest.observables[m.cod_rho].name,
                    }
                    for m in rest.arrows
                ],
            }
        out["runs"].append(entry)
    return out
