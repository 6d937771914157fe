from fractions import Fraction

import pytest

from sieveval import (
    Observable,
    bub_valuation,
    compute_atoms,
    diagonal_matrix,
    enumerate_determinate_sublattice,
    full_space,
    in_commutant,
    in_determinate_sublattice,
    join,
    matrix_from_rows,
    observable_leq,
    ortho,
    ray_from_vector,
    subspace_from_vectors,
    trivial_observable,
    zero_augmented_atom_set,
    zero_space,
)
from sieveval.errors import OrthogonalityViolation, ValidationError
from sieveval.modal import validate_matrix_decomposition


def span(*vs):
    return subspace_from_vectors(len(vs[0]), list(vs))


def z_observable():
    return Observable("Z", (span([1, 0]), span([0, 1])))


def qutrit_observable():
    return Observable("R", (span([1, 0, 0]), span([0, 1, 0], [0, 0, 1])))


def test_observable_validation():
    with pytest.raises(OrthogonalityViolation):
        Observable("bad", (span([1, 0]), span([1, 1])))
    with pytest.raises(OrthogonalityViolation):
        Observable("short", (span([1, 0, 0]),))
    with pytest.raises(ValidationError):
        Observable("labels", (span([1, 0]), span([0, 1])), (Fraction(1), Fraction(1)))


def test_compute_atoms_eigenstate():
    atoms = compute_atoms(ray_from_vector([1, 0]), z_observable())
    assert atoms.atoms == (span([1, 0]),)
    assert atoms.eigenspace_indices == (0,)


def test_compute_atoms_superposition():
    atoms = compute_atoms(ray_from_vector([1, 1]), z_observable())
    assert atoms.atoms == (span([1, 0]), span([0, 1]))


def test_compute_atoms_qutrit():
    atoms = compute_atoms(ray_from_vector([1, 1, 1]), qutrit_observable())
    assert atoms.atoms == (span([1, 0, 0]), span([0, 1, 1]))
    assert zero_space(3) in atoms.zero_augmented


def test_in_determinate_sublattice():
    atoms = compute_atoms(ray_from_vector([1, 1, 1]), qutrit_observable())
    assert in_determinate_sublattice(full_space(3), atoms)
    assert in_determinate_sublattice(zero_space(3), atoms)
    assert not in_determinate_sublattice(span([1, 1, 1]), atoms)


def test_enumerate_determinate_sublattice_boolean_eight():
    atoms = compute_atoms(ray_from_vector([1, 1, 1]), qutrit_observable())
    lattice = enumerate_determinate_sublattice(atoms, cap=64)
    assert len(lattice) == 8
    for p in lattice:
        assert in_determinate_sublattice(p, atoms)


def test_enumerate_full_span_block_algebra():
    atoms = compute_atoms(ray_from_vector([1, 1]), z_observable())
    lattice = enumerate_determinate_sublattice(atoms, cap=64)
    assert len(lattice) == 4  # 2^n elements for n orthogonal atoms spanning


def test_enumerate_single_atom_with_remainder():
    obs = trivial_observable("unit", 3)
    e = ray_from_vector([1, 0, 0])
    atoms = compute_atoms(e, obs)
    lattice = enumerate_determinate_sublattice(atoms, cap=64)
    assert set(lattice) == {
        zero_space(3),
        e.space,
        ortho(e.space),
        full_space(3),
    }


def test_enumerate_with_declared_remainder_ray():
    obs = trivial_observable("unit", 3)
    e = ray_from_vector([1, 0, 0])
    atoms = compute_atoms(e, obs)
    extra = span([0, 1, 0])
    lattice = enumerate_determinate_sublattice(atoms, cap=64, extra_rays=(extra,))
    assert extra in lattice
    assert span([0, 0, 1]) in lattice  # complements close the enumeration
    with pytest.raises(ValidationError):
        enumerate_determinate_sublattice(atoms, cap=64, extra_rays=(span([1, 1, 0]),))


def test_bub_valuation():
    e_r = span([1, 0])
    assert bub_valuation(e_r, full_space(2)) == 1
    assert bub_valuation(e_r, zero_space(2)) == 0
    block = join(span([1, 0, 0]), span([0, 1, -1]))
    assert bub_valuation(span([1, 0, 0]), block) == 1


def test_in_commutant():
    z = z_observable()
    assert in_commutant(diagonal_matrix([1, 1]), z)
    assert in_commutant(diagonal_matrix([1, 0]), z)
    flip = matrix_from_rows([[0, 1], [1, 0]])
    assert not in_commutant(flip, z)


def test_observable_leq():
    coarse = qutrit_observable()
    fine = Observable("F", (span([1, 0, 0]), span([0, 1, 0]), span([0, 0, 1])))
    unit = trivial_observable("unit", 3)
    assert observable_leq(unit, coarse)
    assert observable_leq(coarse, coarse)
    assert observable_leq(coarse, fine)
    assert not observable_leq(fine, coarse)


def test_atom_set_inclusion_forces_equality():
    # the B1 statement at unit scale: comparable pair with inclusion
    coarse = qutrit_observable()
    fine = Observable("F", (span([1, 0, 0]), span([0, 1, 0]), span([0, 0, 1])))
    for ray in ([1, 0, 0], [0, 1, 0], [0, 1, 1], [1, 1, 1]):
        lower = zero_augmented_atom_set(span(ray), coarse)
        upper = zero_augmented_atom_set(span(ray), fine)
        if lower <= upper:
            assert lower == upper


def test_validate_matrix_decomposition():
    z = Observable("Z", (span([1, 0]), span([0, 1])), (Fraction(1), Fraction(-1)))
    validate_matrix_decomposition(diagonal_matrix([1, -1]), z)
    with pytest.raises(ValidationError):
        validate_matrix_decomposition(diagonal_matrix([1, 1]), z)
