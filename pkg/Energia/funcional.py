"""
Funcional de Cooper-Rivin estendido, relativo ao empacotamento unitário 𝟙.

Ũ(r) - Ũ(𝟙) é a integral da 1-forma fechada ω̃ = Σ α̃_m dr_m ao longo do segmento de 𝟙 a r.
A 1-forma é contínua mas só suave por partes (dobra onde Q muda de sinal), então o segmento é
cortado nesses pontos antes da quadratura.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize

from Energia.curvatura import curvature, curvature_state, map_tetrahedra, radii_array, tetra_radii
from Geometria.tetraedro import Radii4, extended_solid_angles, q_value, solid_angle_jacobian
from Utilidades.erros import DomainError, QuadratureError, UnsupportedError

logger = logging.getLogger(__name__)

ENERGY_ABS_TOL = 1e-10     # erro aceito por segmento
QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 200
CROSSING_SAMPLES = 64      # amostras de Q por segmento na busca de mudanças de sinal
RADIUS_MAX_W = 1024.0     # acima disso w(r) coincide com c₀ em precisão dupla

UNIT = (1.0, 1.0, 1.0, 1.0)


def _crossings(start, delta):
    """Parâmetros s em (0, 1) onde Q(start + s·delta) muda de sinal."""
    def q_at(s):
        return q_value(Radii4(tuple(start + s * delta)))

    grid = np.linspace(0.0, 1.0, CROSSING_SAMPLES + 1)
    values = [q_at(s) for s in grid]
    roots = []
    for a, b, qa, qb in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if qa == 0.0 and 0.0 < a < 1.0:
            roots.append(float(a))
        elif qa * qb < 0.0:
            roots.append(float(optimize.brentq(q_at, a, b, xtol=1e-15, rtol=1e-15)))
    return roots


def segment_integral(start, end):
    """
    ∫ ω̃ ao longo do segmento start -> end de um tetraedro.

    Raises:
        QuadratureError: Erro estimado acima de ENERGY_ABS_TOL.
    """
    start = np.asarray(Radii4(tuple(start)).r)
    end = np.asarray(Radii4(tuple(end)).r)
    delta = end - start
    if not np.any(delta):
        return 0.0
    points = _crossings(start, delta)

    def integrand(s):
        alpha = extended_solid_angles(Radii4(tuple(start + s * delta)))
        return float(np.dot(alpha.as_array(), delta))

    result = integrate.quad(integrand, 0.0, 1.0, points=points or None, epsabs=QUAD_EPSABS,
                            epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, full_output=1)
    value, abserr = result[0], result[1]
    if abserr > ENERGY_ABS_TOL:
        raise QuadratureError(f"segment_integral: erro estimado {abserr:.3e} acima de {ENERGY_ABS_TOL:.0e} "
                              f"de {tuple(start)} a {tuple(end)}", abserr)
    if len(result) > 3:
        logger.debug(f"segment_integral: quad avisou '{result[3].splitlines()[0]}' (erro {abserr:.2e})")
    logger.debug(f"segment_integral: {len(points)} cruzamentos de Q, valor {value:.6e}, erro {abserr:.1e}")
    return value


def path_integral(points):
    """∫ ω̃ ao longo de uma poligonal de Radii4 (independe do caminho, pois ω̃ é fechada)."""
    total = 0.0
    for a, b in zip(points[:-1], points[1:]):
        total += segment_integral(a, b)
    return total


def tetra_energy_rel(r):
    """Ũ(r) - Ũ(𝟙) de um tetraedro, pela integral de ω̃ no segmento de 𝟙 a r."""
    return segment_integral(UNIT, Radii4(tuple(r)).r)


@dataclass
class EnergyReport:
    """S_rel = S̃(r) - S̃(𝟙), seu gradiente (= K̃) e, opcionalmente, a Hessiana ∂K/∂r."""

    s_rel: float
    grad: np.ndarray
    hessian: object = None
    virtual_count: int = 0

    def to_dict(self):
        data = {
            "s_rel": float(self.s_rel),
            "grad": [float(x) for x in self.grad],
            "virtual_count": int(self.virtual_count),
        }
        if self.hessian is not None:
            data["hessian"] = [[float(x) for x in row] for row in self.hessian]
            data["hessian_min_eigenvalue"] = float(np.linalg.eigvalsh(self.hessian)[0])
        return data


def energy_rel(c, r):
    """S_rel(r) = Σ 4π(r_i - 1) - Σ_tet (Ũ_tet(r) - Ũ_tet(𝟙)), soma em ordem crescente de tetraedro."""
    arr = radii_array(c, r)
    parts = map_tetrahedra(tetra_energy_rel, tetra_radii(c, arr))
    total = 0.0
    for value in parts:
        total += value
    return 4.0 * math.pi * float(np.sum(arr - 1.0)) - total


def energy_change(c, r, step, epsabs=ENERGY_ABS_TOL):
    """
    S_rel(r + step) - S_rel(r) como integral de ∇S̃ = K̃ ao longo do segmento.

    Não passa por 𝟙: o erro acompanha o tamanho do passo, não o da energia total.

    Args:
        c (Complex): Triangulação.
        r (array-like): Ponto inicial.
        step (array-like): Deslocamento; r + step deve ter raios positivos.
        epsabs (float): Erro absoluto aceito.

    Returns:
        float: Variação de S_rel.

    Raises:
        QuadratureError: Erro estimado acima de epsabs + QUAD_EPSREL·|valor|.
    """
    arr = radii_array(c, r)
    step = np.asarray(step, dtype=float)
    end = radii_array(c, arr + step)
    step = end - arr
    if not np.any(step):
        return 0.0

    def integrand(s):
        return float(np.dot(curvature(c, arr + s * step), step))

    result = integrate.quad(integrand, 0.0, 1.0, epsabs=epsabs, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT,
                            full_output=1)
    value, abserr = result[0], result[1]
    if abserr > epsabs + QUAD_EPSREL * abs(value):
        raise QuadratureError(f"energy_change: erro estimado {abserr:.3e} acima de {epsabs:.1e}", abserr)
    return value


def curvature_hessian(c, r):
    """
    ∂K/∂r: espalha -∂α/∂r de cada tetraedro na matriz N x N. Simétrica e positiva definida em M_T.

    Raises:
        UnsupportedError: Algum tetraedro é virtual.
    """
    arr = radii_array(c, r)
    h = np.zeros((c.vertex_count, c.vertex_count))
    for idx, (tet, r4) in enumerate(zip(c.tetrahedra, tetra_radii(c, arr))):
        if q_value(r4) <= 0.0:
            raise UnsupportedError(f"Hessiana indisponível: tetraedro {idx} {tet} é virtual")
        h[np.ix_(tet, tet)] -= solid_angle_jacobian(r4)
    return h


def total_energy_rel(c, r, hessian=False):
    """EnergyReport em r; a Hessiana só é montada se pedida e se todo tetraedro for real."""
    arr = radii_array(c, r)
    grad, virtual = curvature_state(c, arr)
    h = None
    if hessian:
        if virtual:
            raise UnsupportedError(f"Hessiana indisponível: {virtual} tetraedro(s) virtual(is)")
        h = curvature_hessian(c, arr)
    return EnergyReport(s_rel=energy_rel(c, arr), grad=grad, hessian=h, virtual_count=virtual)


# --- Coordenadas w -------------------------------------------------------------

def _w_integrand(u):
    # 2u / sqrt(sinh(u²)) escrito sem estouro para u grande
    if u == 0.0:
        return 2.0
    x = u * u
    return 2.0 * u * math.exp(-0.5 * x) / math.sqrt(-0.5 * math.expm1(-2.0 * x))


def w_coordinate(r):
    """w(r) = ∫_0^r ds / sqrt(sinh s), com s = u² para remover a singularidade em 0."""
    r = float(r)
    if not r >= 0.0 or not math.isfinite(r):
        raise DomainError(f"w_coordinate exige r >= 0 finito, recebeu {r}")
    if r == 0.0:
        return 0.0
    value, _ = integrate.quad(_w_integrand, 0.0, math.sqrt(r), epsabs=1e-14, epsrel=1e-13, limit=QUAD_LIMIT)
    return value


@lru_cache(maxsize=1)
def w_limit():
    """c₀ = w(∞) = ∫_0^∞ ds / sqrt(sinh s)."""
    value, _ = integrate.quad(_w_integrand, 0.0, math.inf, epsabs=1e-14, epsrel=1e-13, limit=QUAD_LIMIT)
    return value


def w_inverse(w):
    """r com w(r) = w, para 0 <= w < c₀."""
    w = float(w)
    if not 0.0 <= w < w_limit():
        raise DomainError(f"w_inverse exige 0 <= w < {w_limit():.12f}, recebeu {w}")
    if w == 0.0:
        return 0.0
    hi = 1.0
    while w_coordinate(hi) < w:
        hi *= 2.0
        if hi > 2.0 * RADIUS_MAX_W:
            raise DomainError(f"w_inverse: w = {w!r} indistinguível de c₀ em precisão dupla")
    return optimize.brentq(lambda x: w_coordinate(x) - w, 0.0, hi, xtol=1e-15, rtol=1e-15, maxiter=300)


def to_w(r):
    """Aplica w_coordinate a cada raio: r ∈ (0, ∞)^N para w ∈ (0, c₀)^N."""
    return np.array([w_coordinate(x) for x in np.asarray(r, dtype=float)])


def from_w(w):
    """Inversa de to_w, componente a componente.

    Raises:
        DomainError: Alguma coordenada fora de [0, c₀).
    """
    return np.array([w_inverse(x) for x in np.asarray(w, dtype=float)])


def w_gradient(c, r):
    """∂S̃/∂w_i = K̃_i·sqrt(sinh r_i); nas coordenadas w o fluxo estendido é dw/dt = -∇_w S̃."""
    arr = radii_array(c, r)
    k, _ = curvature_state(c, arr)
    return k * np.sqrt(np.sinh(arr))
