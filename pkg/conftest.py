"""Fixtures compartilhadas: gerador semeado e construtores de complexos de teste."""
import numpy as np
import pytest

from Complexo.triangulacao import Complex

collect_ignore = ["examples"]


def cyclic_polytope_boundary(n):
    """
    Bordo do politopo cíclico C(n, 4): tetraedros {i, i+1, j, j+1} (mod n) com os dois pares
    disjuntos. É uma 3-esfera com n(n-3)/2 tetraedros e todo d_i = 2(n-3).
    """
    tets = set()
    for i in range(n):
        for j in range(n):
            pair_a = {i, (i + 1) % n}
            pair_b = {j, (j + 1) % n}
            if pair_a.isdisjoint(pair_b):
                tets.add(tuple(sorted(pair_a | pair_b)))
    return Complex(n, tuple(sorted(tets)))


def stellar_subdivision(c, rng, count):
    """Aplica count subdivisões 1-4 em tetraedros sorteados (novo vértice no interior)."""
    n = c.vertex_count
    tets = list(c.tetrahedra)
    for _ in range(count):
        idx = int(rng.integers(len(tets)))
        tet = tets.pop(idx)
        for pos in range(4):
            new = list(tet)
            new[pos] = n
            tets.append(tuple(new))
        n += 1
    return Complex(n, tuple(tets))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def cyclic15():
    return cyclic_polytope_boundary(15)


@pytest.fixture
def cyclic_boundary():
    return cyclic_polytope_boundary


@pytest.fixture
def subdivide():
    return stellar_subdivision
