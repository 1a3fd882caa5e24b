"""
Autoteste numérico executado por `yamabe3h selfcheck`.

Três verificações independentes:
    jacobian_at_unit     - ∂α/∂r em 𝟙 contra a matriz fechada c·M, e negatividade definida;
    cosine_agreement     - cos β por cofatores de Gram contra a fórmula fechada em tetraedros reais aleatórios;
    gradient_identities  - ∇Ũ = α̃ e ∇S̃ = K̃ por diferenças centrais, incluindo pontos virtuais.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from Complexo.triangulacao import generate
from Energia.curvatura import curvature, tetra_radii
from Energia.funcional import energy_rel, tetra_energy_rel
from Geometria.tetraedro import (PAIRS, Radii4, dihedral_cos_closed, dihedral_cos_cofactor,
                                 extended_solid_angles, q_value, solid_angle_jacobian)

logger = logging.getLogger(__name__)

JACOBIAN_TOL = 1e-10
COSINE_TOL = 1e-10
GRADIENT_TOL = 1e-5
FD_STEP = 1e-5
BOUNDARY_GAP = 1e-4     # |Q|/(Σy)² mínimo nos pontos de diferenças finitas
MAX_DRAWS = 1000


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    samples: int
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "max_error": self.max_error,
                "tolerance": self.tolerance, "samples": self.samples, "details": dict(self.details)}


def unit_jacobian_reference():
    """c·M em 𝟙: diagonal -3c·cosh2, fora da diagonal c."""
    ch, sh = math.cosh(2.0), math.sinh(2.0)
    c = 2.0 * sh / ((ch - 1.0) * (2.0 * ch + 1.0) * math.sqrt(1.0 + 4.0 * ch + 3.0 * ch * ch))
    m = np.ones((4, 4)) - np.eye(4) * (1.0 + 3.0 * ch)
    return c * m


def check_jacobian_at_unit():
    """Jacobiana em 𝟙 contra a forma fechada c·M; também confere que é negativa definida."""
    jac = solid_angle_jacobian((1.0, 1.0, 1.0, 1.0))
    err = float(np.max(np.abs(jac - unit_jacobian_reference())))
    top = float(np.linalg.eigvalsh(0.5 * (jac + jac.T))[-1])
    return CheckResult("jacobian_at_unit", err < JACOBIAN_TOL and top < 0.0, err, JACOBIAN_TOL, 1,
                       {"largest_eigenvalue": top})


def _log_uniform(rng, lo, hi, size):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def _gap(r4):
    y = r4.y
    return abs(q_value(r4)) / sum(y) ** 2


def random_real_tetra(rng, lo=0.05, hi=5.0, min_gap=0.0):
    """Sorteia raios log-uniformes em [lo, hi] até obter um tetraedro real com folga relativa > min_gap."""
    for _ in range(MAX_DRAWS):
        r4 = Radii4(tuple(_log_uniform(rng, lo, hi, 4)))
        if q_value(r4) > 0.0 and _gap(r4) > min_gap:
            return r4
    raise RuntimeError("random_real_tetra: nenhum tetraedro real sorteado")


def random_virtual_tetra(rng):
    """Tetraedro virtual longe da fronteira: um raio pequeno, três grandes."""
    for _ in range(MAX_DRAWS):
        r = list(rng.uniform(1.0, 3.0, 4))
        r[int(rng.integers(4))] = rng.uniform(0.02, 0.2)
        r4 = Radii4(tuple(r))
        if q_value(r4) < 0.0 and _gap(r4) > BOUNDARY_GAP:
            return r4
    raise RuntimeError("random_virtual_tetra: nenhum tetraedro virtual sorteado")


def check_cosine_agreement(rng, samples):
    """
    Compara cos β por cofatores e pela fórmula fechada em tetraedros reais sorteados.

    Args:
        rng (np.random.Generator): Gerador com semente.
        samples (int): Número de tetraedros.

    Returns:
        CheckResult: Maior diferença absoluta entre as duas fórmulas.
    """
    worst = 0.0
    for _ in range(samples):
        r4 = random_real_tetra(rng, min_gap=1e-12)
        for pair in PAIRS:
            worst = max(worst, abs(dihedral_cos_cofactor(r4, pair) - dihedral_cos_closed(r4, pair)))
    return CheckResult("cosine_agreement", worst < COSINE_TOL, worst, COSINE_TOL, samples)


def central_difference(func, x, h=FD_STEP):
    """Gradiente por diferenças centrais."""
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for m in range(x.size):
        step = np.zeros_like(x)
        step[m] = h
        grad[m] = (func(x + step) - func(x - step)) / (2.0 * h)
    return grad


def relative_error(approx, exact):
    return float(np.max(np.abs(approx - exact)) / max(1.0, float(np.max(np.abs(exact)))))


def _random_packing(rng, c, virtual):
    for _ in range(MAX_DRAWS):
        r = rng.uniform(0.2, 3.0, c.vertex_count)
        if virtual:
            r[int(rng.integers(c.vertex_count))] = rng.uniform(0.02, 0.1)
        tets = tetra_radii(c, r)
        has_virtual = any(q_value(r4) < 0.0 for r4 in tets)
        if has_virtual == virtual and all(_gap(r4) > BOUNDARY_GAP for r4 in tets):
            return r
    raise RuntimeError("_random_packing: nenhum empacotamento sorteado")


def check_gradient_identities(rng, samples):
    """Metade dos pontos (arredondada para cima) em configurações virtuais."""
    worst_u, worst_s = 0.0, 0.0
    virtual_points = 0
    c = generate("pentachoron")
    for n in range(samples):
        virtual = n % 2 == 0
        r4 = random_virtual_tetra(rng) if virtual else random_real_tetra(rng, 0.2, 3.0, BOUNDARY_GAP)
        fd = central_difference(lambda x: tetra_energy_rel(tuple(x)), r4.r)
        worst_u = max(worst_u, relative_error(fd, extended_solid_angles(r4).as_array()))
        r = _random_packing(rng, c, virtual)
        fd = central_difference(lambda x: energy_rel(c, x), r)
        worst_s = max(worst_s, relative_error(fd, curvature(c, r)))
        virtual_points += int(virtual)
        logger.debug(f"check_gradient_identities: ponto {n}, erros {worst_u:.2e} / {worst_s:.2e}")
    worst = max(worst_u, worst_s)
    return CheckResult("gradient_identities", worst < GRADIENT_TOL, worst, GRADIENT_TOL, samples,
                       {"tetra_energy_max_error": worst_u, "total_energy_max_error": worst_s,
                        "virtual_points": virtual_points})


def run_selfcheck(seed=0, cosine_samples=1000, gradient_samples=6):
    """Executa as três verificações com um gerador semeado; devolve a lista de CheckResult."""
    rng = np.random.default_rng(seed)
    results = [check_jacobian_at_unit(),
               check_cosine_agreement(rng, cosine_samples),
               check_gradient_identities(rng, gradient_samples)]
    for res in results:
        level = logging.INFO if res.passed else logging.ERROR
        logger.log(level, f"run_selfcheck: {res.name} {'ok' if res.passed else 'FALHOU'} "
                          f"(erro {res.max_error:.2e}, tolerância {res.tolerance:.0e})")
    return results
