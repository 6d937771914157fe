import pytest

from sieveval import (
    Observable,
    Ray,
    build_plain_site,
    close_monoid,
    diagonal_matrix,
    ray_from_vector,
    subspace_from_vectors,
)


def qubit_observable():
    e1 = subspace_from_vectors(2, [[1, 0]])
    e2 = subspace_from_vectors(2, [[0, 1]])
    return Observable("Z", (e1, e2))


def qubit_monoid():
    p1 = diagonal_matrix([1, 0])
    p2 = diagonal_matrix([0, 1])
    return close_monoid([p1, p2], cap=16)


@pytest.fixture
def qubit_site():
    return build_plain_site(
        qubit_observable(), qubit_monoid(), [ray_from_vector([1, 1])], cap=16
    )


@pytest.fixture
def qutrit_observable():
    r1 = subspace_from_vectors(3, [[1, 0, 0]])
    r23 = subspace_from_vectors(3, [[0, 1, 0], [0, 0, 1]])
    return Observable("R", (r1, r23))


@pytest.fixture
def w_state() -> Ray:
    return ray_from_vector([1, 1, 1])
