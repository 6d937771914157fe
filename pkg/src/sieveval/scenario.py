"""Scenario files: declarative inputs for site construction and runs.

A scenario declares the ambient dimension, observables (as eigenspace
decompositions), generator operators, named states and propositions, caps,
and run specifications.  Everything is validated eagerly with field-anchored
diagnostics; all scalars must parse as exact Gaussian rationals.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import CommutantViolation, ParseError, ValidationError
from .linalg import ExactMatrix, matrix_from_rows
from .modal import Observable, in_commutant
from .rationals import parse_scalar
from .subspaces import (
    Ray,
    Subspace,
    apply_operator,
    full_space,
    subspace_from_vectors,
    zero_space,
)

DEFAULT_CAPS = {"monoid": 256, "orbit": 128, "sieve_enum": 4096, "lattice": 512}
ENV_CAP_PREFIX = "SIEVEVAL_CAP_"

ZERO_NAME = "0"
UNIT_NAME = "I"


@dataclass(frozen=True)
class RunSpec:
    name: str
    state: str
    observable: str
    eigenspace: int
    propositions: tuple[str, ...] | None  # None = all declared
    extended: tuple[str, ...]  # observable family; empty = plain-only run
    remainder_rays: tuple[str, ...] = ()


@dataclass(frozen=True)
class Scenario:
    name: str
    dimension: int
    observables: tuple[Observable, ...]
    observable_index: dict[str, int]
    generators: tuple[ExactMatrix, ...]
    generator_names: tuple[str, ...]
    states: dict[str, Ray]
    propositions: dict[str, Subspace]
    lattice_seeds: tuple[str, ...]
    caps: dict[str, int]
    runs: tuple[RunSpec, ...]

    def observable(self, name: str) -> Observable:
        return self.observables[self.observable_index[name]]


def _parse_vector(raw, dim: int, where: str) -> list:
    if not isinstance(raw, list) or len(raw) != dim:
        raise ValidationError(where, f"expected a vector of {dim} scalars")
    out = []
    for k, cell in enumerate(raw):
        if not isinstance(cell, str):
            raise ValidationError(f"{where}[{k}]", "scalar literals must be strings")
        try:
            out.append(parse_scalar(cell))
        except ParseError as exc:
            raise ValidationError(f"{where}[{k}]", str(exc)) from exc
    return out


def _parse_subspace(raw, dim: int, where: str) -> Subspace:
    if not isinstance(raw, list):
        raise ValidationError(where, "expected a list of basis vectors")
    vectors = [_parse_vector(v, dim, f"{where}[{i}]") for i, v in enumerate(raw)]
    return subspace_from_vectors(dim, vectors)


def _parse_fraction(raw, where: str) -> Fraction:
    if not isinstance(raw, str):
        raise ValidationError(where, "rational labels must be strings")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(where, f"bad rational literal {raw!r}") from exc


def effective_caps(declared: dict | None, env: dict | None = None) -> dict[str, int]:
    caps = dict(DEFAULT_CAPS)
    if declared:
        for key, value in declared.items():
            if key not in DEFAULT_CAPS:
                raise ValidationError(f"caps.{key}", "unknown cap")
            if not isinstance(value, int) or value < 1:
                raise ValidationError(f"caps.{key}", "caps must be positive integers")
            caps[key] = value
    env = os.environ if env is None else env
    for key in DEFAULT_CAPS:
        raw = env.get(ENV_CAP_PREFIX + key.upper())
        if raw is not None:
            try:
                caps[key] = int(raw)
            except ValueError as exc:
                raise ValidationError(
                    f"env.{ENV_CAP_PREFIX + key.upper()}", "not an integer"
                ) from exc
    return caps


def load_scenario(path: str | Path, env: dict | None = None) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return scenario_from_dict(data, default_name=path.stem, env=env)


def scenario_from_dict(data: dict, default_name: str = "scenario", env: dict | None = None) -> Scenario:
    if not isinstance(data, dict):
        raise ValidationError("$", "scenario root must be an object")
    name = data.get("name", default_name)
    dim = data.get("dimension")
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError("dimension", "must be a positive integer")

    observables: list[Observable] = []
    observable_index: dict[str, int] = {}
    raw_observables = data.get("observables", [])
    if not raw_observables:
        raise ValidationError("observables", "at least one observable is required")
    for i, raw in enumerate(raw_observables):
        where = f"observables[{i}]"
        if not isinstance(raw, dict) or "name" not in raw:
            raise ValidationError(where, "expected an object with a name")
        oname = raw["name"]
        if oname in observable_index:
            raise ValidationError(f"{where}.name", f"duplicate observable {oname!r}")
        eigenspaces = raw.get("eigenspaces")
        if not isinstance(eigenspaces, list) or not eigenspaces:
            raise ValidationError(f"{where}.eigenspaces", "expected a nonempty list")
        spaces = tuple(
            _parse_subspace(es, dim, f"{where}.eigenspaces[{j}]")
            for j, es in enumerate(eigenspaces)
        )
        labels = None
        if "labels" in raw:
            labels = tuple(
                _parse_fraction(x, f"{where}.labels[{j}]")
                for j, x in enumerate(raw["labels"])
            )
        obs = Observable(oname, spaces, labels)
        if "matrix" in raw:
            from .modal import validate_matrix_decomposition

            rows = raw["matrix"]
            if not isinstance(rows, list) or len(rows) != dim:
                raise ValidationError(f"{where}.matrix", f"expected {dim} rows")
            matrix = matrix_from_rows(
                [_parse_vector(row, dim, f"{where}.matrix[{j}]") for j, row in enumerate(rows)]
            )
            validate_matrix_decomposition(matrix, obs)
        observable_index[oname] = len(observables)
        observables.append(obs)

    generators: list[ExactMatrix] = []
    generator_names: list[str] = []
    for i, raw in enumerate(data.get("generators", [])):
        where = f"generators[{i}]"
        if not isinstance(raw, dict) or "matrix" not in raw:
            raise ValidationError(where, "expected an object with a matrix")
        rows = raw["matrix"]
        if not isinstance(rows, list) or len(rows) != dim:
            raise ValidationError(f"{where}.matrix", f"expected {dim} rows")
        matrix = matrix_from_rows(
            [_parse_vector(row, dim, f"{where}.matrix[{j}]") for j, row in enumerate(rows)]
        )
        gname = raw.get("name", f"g{i}")
        declared_under = raw.get("commutant_of")
        if declared_under is not None:
            if declared_under not in observable_index:
                raise ValidationError(f"{where}.commutant_of", f"unknown observable {declared_under!r}")
            obs = observables[observable_index[declared_under]]
            if not in_commutant(matrix, obs):
                from .linalg import mat_mul

                eigen = next(
                    j
                    for j in range(len(obs.eigenspaces))
                    if mat_mul(matrix, obs.projector(j)) != mat_mul(obs.projector(j), matrix)
                )
                raise CommutantViolation(
                    f"{where}",
                    f"{gname!r} does not commute with {declared_under!r} (eigenspace {eigen})",
                )
        generators.append(matrix)
        generator_names.append(gname)

    states: dict[str, Ray] = {}
    raw_states = data.get("states", {})
    if not isinstance(raw_states, dict) or not raw_states:
        raise ValidationError("states", "at least one named state is required")
    for sname, raw in raw_states.items():
        vector = _parse_vector(raw, dim, f"states.{sname}")
        if all(e.is_zero for e in vector):
            raise ValidationError(f"states.{sname}", "the zero vector is not a state")
        states[sname] = Ray(subspace_from_vectors(dim, [vector]))

    propositions: dict[str, Subspace] = {}
    for pname, raw in data.get("propositions", {}).items():
        if pname in (ZERO_NAME, UNIT_NAME):
            raise ValidationError(f"propositions.{pname}", "reserved name")
        propositions[pname] = _parse_subspace(raw, dim, f"propositions.{pname}")
    declared_props = dict(propositions)
    propositions[ZERO_NAME] = zero_space(dim)
    propositions[UNIT_NAME] = full_space(dim)

    lattice_seeds = tuple(data.get("lattice_seeds", sorted(declared_props)))
    for pname in lattice_seeds:
        if pname not in propositions:
            raise ValidationError("lattice_seeds", f"unknown proposition {pname!r}")

    caps = effective_caps(data.get("caps"), env=env)

    runs: list[RunSpec] = []
    seen_runs: set[str] = set()
    for i, raw in enumerate(data.get("runs", [])):
        where = f"runs[{i}]"
        if not isinstance(raw, dict):
            raise ValidationError(where, "expected an object")
        rname = raw.get("name", f"run{i}")
        if rname in seen_runs:
            raise ValidationError(f"{where}.name", f"duplicate run {rname!r}")
        seen_runs.add(rname)
        state = raw.get("state")
        if state not in states:
            raise ValidationError(f"{where}.state", f"unknown state {state!r}")
        oname = raw.get("observable")
        if oname not in observable_index:
            raise ValidationError(f"{where}.observable", f"unknown observable {oname!r}")
        eigenspace = raw.get("eigenspace", 0)
        obs = observables[observable_index[oname]]
        if not isinstance(eigenspace, int) or not (0 <= eigenspace < len(obs.eigenspaces)):
            raise ValidationError(f"{where}.eigenspace", "eigenspace index out of range")
        selection = raw.get("propositions")
        if selection is not None:
            selection = tuple(selection)
            for pname in selection:
                if pname not in propositions:
                    raise ValidationError(f"{where}.propositions", f"unknown proposition {pname!r}")
        extended = tuple(raw.get("extended", ()))
        for fname in extended:
            if fname not in observable_index:
                raise ValidationError(f"{where}.extended", f"unknown observable {fname!r}")
        if extended and oname not in extended:
            raise ValidationError(f"{where}.extended", "family must contain the run observable")
        remainder = tuple(raw.get("remainder_rays", ()))
        for pname in remainder:
            if pname not in propositions:
                raise ValidationError(f"{where}.remainder_rays", f"unknown proposition {pname!r}")
            if propositions[pname].dim != 1:
                raise ValidationError(f"{where}.remainder_rays", f"{pname!r} is not a ray")
        runs.append(RunSpec(rname, state, oname, eigenspace, selection, extended, remainder))
    if not runs:
        raise ValidationError("runs", "at least one run is required")

    return Scenario(
        name=name,
        dimension=dim,
        observables=tuple(observables),
        observable_index=observable_index,
        generators=tuple(generators),
        generator_names=tuple(generator_names),
        states=states,
        propositions=propositions,
        lattice_seeds=lattice_seeds,
        caps=caps,
        runs=tuple(runs),
    )


def proposition_universe(scenario: Scenario, monoid) -> tuple[list[Subspace], dict[Subspace, str]]:
    """Declared propositions plus {0} and I, closed under the monoid action.

    Returns the ordered universe and a naming map (closure-added members get
    deterministic derived names).
    """
    ordered: list[Subspace] = []
    names: dict[Subspace, str] = {}

    def add(space: Subspace, label: str) -> None:
        if space not in names:
            names[space] = label
            ordered.append(space)

    add(zero_space(scenario.dimension), ZERO_NAME)
    add(full_space(scenario.dimension), UNIT_NAME)
    for pname, space in scenario.propositions.items():
        add(space, pname)
    cursor = 0
    while cursor < len(ordered):
        base = ordered[cursor]
        base_name = names[base]
        cursor += 1
        for op_index, f in enumerate(monoid.elements):
            image = apply_operator(f, base)
            add(image, f"{base_name}@{op_index}")
    return ordered, names


def bundled_scenario_path(name: str) -> Path:
    """Path of a scenario shipped with the package."""
    here = Path(__file__).parent / "scenarios" / f"{name}.json"
    if not here.exists():
        raise ParseError(f"no bundled scenario named {name!r}")
    return here


def bundled_scenario_names() -> list[str]:
    directory = Path(__file__).parent / "scenarios"
    return sorted(p.stem for p in directory.glob("*.json"))
