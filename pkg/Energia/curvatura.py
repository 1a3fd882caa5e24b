import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from Complexo.triangulacao import Packing
from Geometria.tetraedro import Radii4, classify, extended_solid_angles
from Utilidades import utils
from Utilidades.erros import DomainError

logger = logging.getLogger(__name__)

# Abaixo disso a avaliação por tetraedro roda na thread chamadora.
PARALLEL_MIN_TETRA = 64


def radii_array(c, r):
    """
    Converte um Packing ou sequência de raios num vetor float de tamanho N.

    Args:
        c (Complex): Triangulação que fixa N.
        r (Packing | array-like): Raios por vértice.

    Returns:
        np.ndarray: Vetor de raios (pode compartilhar memória com r).

    Raises:
        DomainError: Tamanho diferente de N, ou raio não positivo ou não finito.
    """
    if isinstance(r, Packing):
        r = r.radii
    arr = np.asarray(r, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != c.vertex_count:
        raise DomainError(f"Empacotamento com {arr.size} raios para complexo com N={c.vertex_count}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"Raios devem ser positivos e finitos: {utils.format_log(arr)}")
    return arr


def tetra_radii(c, r):
    """Radii4 de cada tetraedro, na ordem da lista de tetraedros."""
    arr = radii_array(c, r)
    return [Radii4(tuple(arr[list(tet)])) for tet in c.tetrahedra]


def map_tetrahedra(func, items):
    """
    Aplica func a cada item preservando a ordem. Com muitos tetraedros e mais de um
    worker (YAMABE3H_THREADS), usa um ThreadPoolExecutor.
    """
    workers = utils.worker_count()
    if workers > 1 and len(items) >= PARALLEL_MIN_TETRA:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


def tetra_angles(c, r):
    """Ângulos sólidos estendidos de cada tetraedro (lista de SolidAngles, ordem dos tetraedros)."""
    return map_tetrahedra(extended_solid_angles, tetra_radii(c, r))


def curvature(c, r):
    """
    Curvatura escalar estendida K̃_i = 4π - Σ α̃_i sobre os tetraedros que contêm i.
    A soma percorre os tetraedros em ordem crescente de índice, independente do número de threads.

    Returns:
        np.ndarray: Vetor de N curvaturas.
    """
    return curvature_state(c, r)[0]


def curvature_state(c, r):
    """Curvatura e número de tetraedros virtuais numa única passada pelos tetraedros."""
    k, classes = curvature_with_classes(c, r)
    return k, sum(1 for tc in classes if not tc.is_real)


def curvature_with_classes(c, r):
    """Curvatura e a classe (TetraClass) de cada tetraedro."""
    angles = tetra_angles(c, r)
    k = np.full(c.vertex_count, 4.0 * math.pi)
    for tet, alpha in zip(c.tetrahedra, angles):
        for local, v in enumerate(tet):
            k[v] -= alpha[local]
    return k, tuple(alpha.tetra_class for alpha in angles)


def class_counts(c, r):
    """(tetraedros reais, tetraedros virtuais) no empacotamento r."""
    classes = map_tetrahedra(classify, tetra_radii(c, r))
    virtual = sum(1 for tc in classes if not tc.is_real)
    return len(classes) - virtual, virtual


def is_real_packing(c, r):
    """True quando todo tetraedro é real (r pertence a M_T)."""
    return class_counts(c, r)[1] == 0
