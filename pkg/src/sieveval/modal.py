"""Observables, projected atoms, determinate sublattices, two-valued valuations.

An observable is its eigenspace decomposition; that decomposition is a
complete invariant of the equivalence class it represents (same eigenspaces
means same commutant), so no operator matrix is ever stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AmbientMismatch, OrthogonalityViolation, ValidationError
from .linalg import ExactMatrix, mat_mul
from .subspaces import (
    Ray,
    Subspace,
    full_space,
    generate_sublattice,
    join,
    leq,
    ortho,
    project_onto_eigenspace,
    projector_matrix,
    zero_space,
)


@dataclass(frozen=True)
class Observable:
    """An orthogonal eigenspace decomposition of complex n-space."""

    name: str
    eigenspaces: tuple[Subspace, ...]
    labels: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if not self.eigenspaces:
            raise ValidationError(self.name, "no eigenspaces")
        n = self.eigenspaces[0].ambient_dim
        if any(r.ambient_dim != n for r in self.eigenspaces):
            raise ValidationError(self.name, "eigenspaces in different ambient spaces")
        if any(r.is_zero for r in self.eigenspaces):
            raise OrthogonalityViolation(self.name, "zero eigenspace declared")
        for i, r in enumerate(self.eigenspaces):
            for s in self.eigenspaces[i + 1 :]:
                if not leq(r, ortho(s)):
                    raise OrthogonalityViolation(
                        self.name, f"eigenspaces {i} and later one are not orthogonal"
                    )
        total = zero_space(n)
        for r in self.eigenspaces:
            total = join(total, r)
        if not total.is_full:
            raise OrthogonalityViolation(self.name, "eigenspaces do not span the space")
        if self.labels is not None:
            if len(self.labels) != len(self.eigenspaces):
                raise ValidationError(self.name, "label count != eigenspace count")
            if len(set(self.labels)) != len(self.labels):
                raise ValidationError(self.name, "labels are not distinct")

    @property
    def ambient_dim(self) -> int:
        return self.eigenspaces[0].ambient_dim

    def projector(self, index: int) -> ExactMatrix:
        return projector_matrix(self.eigenspaces[index])


def validate_matrix_decomposition(matrix: ExactMatrix, observable: Observable) -> None:
    """Check that a matrix is scalar (with its declared label) on each eigenspace."""
    if observable.labels is None:
        raise ValidationError(observable.name, "labels required to validate a matrix")
    n = observable.ambient_dim
    if matrix.rows != n or matrix.cols != n:
        raise ValidationError(observable.name, "matrix shape does not match ambient")
    from .rationals import gaussian

    for r, label in zip(observable.eigenspaces, observable.labels):
        lam = gaussian(label)
        for v in r.vectors():
            image = matrix.apply(v)
            expected = tuple(lam * e for e in v)
            if image != expected:
                raise ValidationError(
                    observable.name, f"matrix is not scalar {label} on eigenspace"
                )


@dataclass(frozen=True)
class TrueAtomSet:
    """The nonzero projections of a state onto an observable's eigenspaces."""

    state: Ray
    observable: Observable
    atoms: tuple[Subspace, ...]
    eigenspace_indices: tuple[int, ...] = field(default=())

    @property
    def zero_augmented(self) -> tuple[Subspace, ...]:
        return self.atoms + (zero_space(self.state.ambient_dim),)

    def atom_for_eigenspace(self, index: int) -> Subspace:
        """The projection onto eigenspace #index, the zero space when it vanishes."""
        for atom, ei in zip(self.atoms, self.eigenspace_indices):
            if ei == index:
                return atom
        return zero_space(self.state.ambient_dim)


def compute_atoms(e: Ray, observable: Observable) -> TrueAtomSet:
    if e.ambient_dim != observable.ambient_dim:
        raise AmbientMismatch(
            f"state ambient {e.ambient_dim} vs observable {observable.ambient_dim}"
        )
    atoms: list[Subspace] = []
    indices: list[int] = []
    for i, r in enumerate(observable.eigenspaces):
        projected = project_onto_eigenspace(e, r)
        if not projected.is_zero:
            atoms.append(projected)
            indices.append(i)
    return TrueAtomSet(e, observable, tuple(atoms), tuple(indices))


def zero_augmented_atom_set(e: Subspace, observable: Observable) -> frozenset[Subspace]:
    """The atom set of a ray (given as its subspace), zero space included."""
    ray = Ray(e)
    return frozenset(compute_atoms(ray, observable).zero_augmented)


def in_determinate_sublattice(p: Subspace, atoms: TrueAtomSet) -> bool:
    """Membership predicate: each atom sits below p or below its complement."""
    if p.ambient_dim != atoms.state.ambient_dim:
        raise AmbientMismatch("proposition ambient mismatch")
    complement = ortho(p)
    return all(leq(a, p) or leq(a, complement) for a in atoms.atoms)


def enumerate_determinate_sublattice(
    atoms: TrueAtomSet, cap: int, extra_rays: tuple[Subspace, ...] = ()
) -> list[Subspace]:
    """The finitely generated part of the determinate sublattice.

    Generators are the atoms plus the orthogonal remainder of their join,
    treated as one block; callers may name extra rays inside that remainder.
    """
    n = atoms.state.ambient_dim
    spanned = zero_space(n)
    for a in atoms.atoms:
        spanned = join(spanned, a)
    remainder = ortho(spanned)
    generators: list[Subspace] = list(atoms.atoms)
    if not remainder.is_zero:
        generators.append(remainder)
    for ray in extra_rays:
        if ray.dim != 1 or not leq(ray, remainder):
            raise ValidationError(
                "extra_rays", "declared ray is not a ray inside the orthogonal remainder"
            )
        generators.append(ray)
    elements = generate_sublattice(generators, cap)
    for p in elements:
        if not in_determinate_sublattice(p, atoms):  # pragma: no cover - structural
            raise ValidationError("determinate sublattice", f"{p} escaped the predicate")
    return elements


def bub_valuation(e_r: Subspace, p: Subspace) -> int:
    """1 when the true atom lies below the proposition, else 0."""
    return 1 if leq(e_r, p) else 0


def in_commutant(f: ExactMatrix, observable: Observable) -> bool:
    """Exact commutation with every eigenprojector."""
    n = observable.ambient_dim
    if f.rows != n or f.cols != n:
        raise AmbientMismatch(f"operator {f.rows}x{f.cols} vs ambient {n}")
    for i in range(len(observable.eigenspaces)):
        pi = observable.projector(i)
        if mat_mul(f, pi) != mat_mul(pi, f):
            return False
    return True


def observable_leq(rho: Observable, rho_prime: Observable) -> bool:
    """Refinement order: every eigenspace of rho is a join of rho_prime's."""
    if rho.ambient_dim != rho_prime.ambient_dim:
        raise AmbientMismatch("observables in different ambient spaces")
    for r in rho.eigenspaces:
        parts = [rp for rp in rho_prime.eigenspaces if leq(rp, r)]
        total = zero_space(rho.ambient_dim)
        for rp in parts:
            total = join(total, rp)
        if total != r:
            return False
    return True


def trivial_observable(name: str, ambient_dim: int) -> Observable:
    return Observable(name, (full_space(ambient_dim),))
