"""Empacotamentos planos: o regular t₀·𝟙 de complexos tetra-regulares e o refinamento de Newton."""
import logging
import math

import numpy as np
from scipy import optimize

from Complexo.triangulacao import DEGREE_HIGH, Packing
from Energia.curvatura import curvature, is_real_packing, radii_array
from Energia.funcional import curvature_hessian, energy_change
from Geometria.tetraedro import ALPHA_E, regular_solid_angle
from Utilidades import utils
from Utilidades.erros import DomainError, NewtonError, NoSolutionError, PreconditionError

logger = logging.getLogger(__name__)

BRACKET = (1e-8, 50.0)
BISECT_XTOL = np.finfo(float).tiny
BISECT_RTOL = 4.0 * np.finfo(float).eps  # menor rtol aceito por scipy.optimize.bisect
BISECT_MAXITER = 200
MAX_BACKTRACK = 40
ARMIJO_C = 1e-4
ARMIJO_QUAD_TOL = 1e-3     # erro da quadratura relativo à descida prevista λ·(K̃·δ)
ARMIJO_SLOPE_FLOOR = 1e-20  # abaixo disso a descida prevista está no nível de arredondamento de K̃: passo pleno


def solve_regular(d):
    """
    Raio t₀ do empacotamento regular plano de um complexo tetra-regular de grau d,
    isto é, a raiz de regular_solid_angle(t) = 4π/d, por bissecção (scipy.optimize.bisect) em
    BRACKET com tolerância relativa de 4 ulps.

    Args:
        d (int): Grau dos vértices.

    Returns:
        float: t₀.

    Raises:
        DomainError: d < 1.
        NoSolutionError: d <= 22; como d·α₁ᴱ < 4π, não existe empacotamento plano (real ou virtual).
    """
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
        raise DomainError(f"Grau deve ser inteiro, recebeu {d!r}")
    d = int(d)
    if d < 1:
        raise DomainError(f"Grau deve ser >= 1, recebeu {d}")
    if d < DEGREE_HIGH:
        raise NoSolutionError(
            f"Não existe empacotamento por bolas (real ou virtual) com curvatura nula para grau {d} <= 22: "
            f"{d}·α₁ᴱ = {d * ALPHA_E:.6f} < 4π")
    target = 4.0 * math.pi / d
    lo, hi = BRACKET
    if regular_solid_angle(hi) > target:
        raise NoSolutionError(f"Raiz para grau {d} está acima de t = {hi}")
    t0 = optimize.bisect(lambda t: regular_solid_angle(t) - target, lo, hi,
                         xtol=BISECT_XTOL, rtol=BISECT_RTOL, maxiter=BISECT_MAXITER)
    logger.debug(f"solve_regular: d={d}, t0={t0!r}, resíduo {abs(regular_solid_angle(t0) - target):.2e}")
    return t0


def newton_refine(c, r, tol=1e-12, max_iter=50):
    """
    Newton amortecido em S_rel: resolve (∂K/∂r)·δ = K̃ e aceita r - λδ com λ = 1, 1/2, ...
    quando o passo mantém raios positivos e todos os tetraedros reais, e satisfaz a
    condição de Armijo S_rel(r - λδ) - S_rel(r) <= -ARMIJO_C·λ·(K̃·δ). Com λ·(K̃·δ) abaixo de
    ARMIJO_SLOPE_FLOOR o passo admissível é aceito sem o teste de energia.

    Raises:
        PreconditionError: Algum tetraedro virtual no ponto inicial.
        NewtonError: Hessiana singular, nenhum passo admissível ou max_iter esgotado.
    """
    arr = radii_array(c, r)
    if not is_real_packing(c, arr):
        raise PreconditionError("newton_refine exige todos os tetraedros reais no ponto inicial")
    k = curvature(c, arr)
    norm = float(np.max(np.abs(k)))
    if norm < tol:
        return r if isinstance(r, Packing) else Packing(tuple(arr))
    for iteration in range(1, max_iter + 1):
        try:
            delta = np.linalg.solve(curvature_hessian(c, arr), k)
        except np.linalg.LinAlgError as exc:
            raise NewtonError(f"Hessiana singular na iteração {iteration}: {exc}") from None
        slope = float(np.dot(k, delta))
        if not slope > 0.0:
            raise NewtonError(f"Direção de Newton não é de descida na iteração {iteration} (K·δ = {slope:.3e})")
        lam = 1.0
        for _ in range(MAX_BACKTRACK):
            trial = arr - lam * delta
            try:
                if np.all(trial > 0.0) and is_real_packing(c, trial):
                    if lam * slope < ARMIJO_SLOPE_FLOOR:
                        change = math.nan
                        break
                    change = energy_change(c, arr, trial - arr, epsabs=ARMIJO_QUAD_TOL * lam * slope)
                    if change <= -ARMIJO_C * lam * slope:
                        break
            except DomainError:
                pass
            lam *= 0.5
        else:
            raise NewtonError(f"Nenhum passo admissível na iteração {iteration} (‖K‖∞ = {norm:.3e})")
        arr = trial
        k = curvature(c, arr)
        norm = float(np.max(np.abs(k)))
        logger.debug(f"newton_refine: iteração {iteration}, λ={lam:g}, ΔS={change:.3e}, ‖K‖∞={norm:.3e}, "
                     f"r={utils.format_log(arr)}")
        if norm < tol:
            return Packing(tuple(arr))
    raise NewtonError(f"newton_refine não convergiu em {max_iter} iterações (‖K‖∞ = {norm:.3e})")
