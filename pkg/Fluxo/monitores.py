"""
Monitores sobre trajetórias do fluxo: cotas de decaimento e de raio mínimo/máximo,
monotonicidade da energia e o espectro da linearização num empacotamento plano.

Cada monitor devolve um MonitorReport; as violações são listadas por índice de amostra.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from Complexo.triangulacao import DEGREE_HIGH, DEGREE_LOW
from Energia.curvatura import curvature, is_real_packing, radii_array, tetra_angles
from Energia.funcional import ENERGY_ABS_TOL, curvature_hessian
from Fluxo.solucionador import solve_regular
from Geometria.tetraedro import ALPHA_E
from Utilidades.erros import HypothesisError, PreconditionError

logger = logging.getLogger(__name__)

REL_SLACK = 1e-9
FLAT_TOL = 1e-8


@dataclass
class MonitorReport:
    name: str
    holds: bool
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "holds": self.holds,
                "violations": list(self.violations), "details": dict(self.details)}


def fit_rate(times, values):
    """
    Taxa exponencial λ de mínimos quadrados para values ≈ A·exp(-λt).
    Ignora entradas não positivas; devolve nan com menos de dois pontos úteis.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = np.isfinite(values) & (values > 0.0)
    if np.count_nonzero(mask) < 2 or np.ptp(times[mask]) == 0.0:
        return math.nan
    slope, _ = np.polyfit(times[mask], np.log(values[mask]), 1)
    return float(-slope)


def decay_bound_check(trace, d_max):
    """
    tanh(r_M(t)/2) <= tanh(r_M(0)/2)·exp(-εt) em toda amostra, com ε = 4π - d_max·α₁ᴱ.

    Raises:
        HypothesisError: d_max > 22 (ε deixa de ser positivo).
    """
    if d_max > DEGREE_LOW:
        raise HypothesisError(f"decay_bound_check exige d_max <= {DEGREE_LOW}, recebeu {d_max}")
    eps = 4.0 * math.pi - d_max * ALPHA_E
    t = trace.times()
    lhs = np.tanh(0.5 * trace.r_max())
    rhs = lhs[0] * np.exp(-eps * t)
    violations = [int(i) for i in np.flatnonzero(lhs > rhs * (1.0 + REL_SLACK))]
    rate = fit_rate(t, lhs)
    logger.debug(f"decay_bound_check: ε={eps:.6f}, taxa ajustada {rate:.6f}, {len(violations)} violações")
    return MonitorReport("decay_bound", not violations, violations,
                         {"epsilon": eps, "d_max": int(d_max), "fitted_rate": rate})


def lower_bound_check(trace, d_min, degree=DEGREE_HIGH):
    """
    min_i r_i(t) >= min(min_i r_i(0), C) em toda amostra, com C = solve_regular(degree).
    O padrão degree = 23 vale para qualquer d_min >= 23; degree = d_min dá a cota mais fina.

    Raises:
        HypothesisError: d_min < 23 ou degree > d_min.
    """
    if d_min < DEGREE_HIGH:
        raise HypothesisError(f"lower_bound_check exige d_min >= {DEGREE_HIGH}, recebeu {d_min}")
    if not DEGREE_HIGH <= degree <= d_min:
        raise HypothesisError(f"degree deve estar em [{DEGREE_HIGH}, {d_min}], recebeu {degree}")
    const = solve_regular(degree)
    r_min = trace.r_min()
    bound = min(float(r_min[0]), const)
    violations = [int(i) for i in np.flatnonzero(r_min < bound * (1.0 - REL_SLACK))]
    return MonitorReport("lower_bound", not violations, violations,
                         {"C": const, "bound": bound, "d_min": int(d_min), "min_r_min": float(np.min(r_min))})


def upper_bound_check(trace, c):
    """
    Sempre que todo α̃ incidente no vértice de maior raio é <= 2π/d_max em duas amostras
    consecutivas, r_max não pode crescer entre elas.
    """
    d_max = max(c.degrees)
    limit = 2.0 * math.pi / d_max
    guarded = []
    for s in trace.samples:
        v = s.argmax
        angles = tetra_angles(c, s.radii)
        incident = [angles[idx][c.tetrahedra[idx].index(v)] for idx in c.incident[v]]
        guarded.append(max(incident) <= limit)
    r_max = trace.r_max()
    violations = [k + 1 for k in range(len(r_max) - 1)
                  if guarded[k] and guarded[k + 1] and r_max[k + 1] > r_max[k] * (1.0 + REL_SLACK)]
    return MonitorReport("upper_bound", not violations, violations,
                         {"angle_limit": limit, "guarded_samples": int(sum(guarded)),
                          "r_max_initial": float(r_max[0]), "r_max_peak": float(np.max(r_max))})


def energy_monotone_check(trace, slack=None):
    """S_rel não cresce de uma amostra à seguinte além de slack (padrão: 10·stop_tol)."""
    if slack is None:
        slack = max(10.0 * trace.config.stop_tol, ENERGY_ABS_TOL)
    s = trace.s_rel()
    violations = [k + 1 for k in range(len(s) - 1)
                  if np.isfinite(s[k]) and np.isfinite(s[k + 1]) and s[k + 1] > s[k] + slack]
    increase = np.diff(s[np.isfinite(s)])
    return MonitorReport("energy_monotone", not violations, violations,
                         {"slack": slack, "max_increase": float(np.max(increase, initial=-math.inf))})


def max_vertex_curvature_check(trace, d_max):
    """
    K̃ no vértice de maior raio é >= 4π - d_max·α₁ᴱ > 0 em toda amostra.

    Raises:
        HypothesisError: d_max > 22.
    """
    if d_max > DEGREE_LOW:
        raise HypothesisError(f"max_vertex_curvature_check exige d_max <= {DEGREE_LOW}, recebeu {d_max}")
    bound = 4.0 * math.pi - d_max * ALPHA_E
    values = np.array([s.curvature[s.argmax] for s in trace.samples])
    violations = [int(i) for i in np.flatnonzero(values < bound - REL_SLACK)]
    return MonitorReport("max_vertex_curvature", not violations, violations,
                         {"bound": bound, "min_value": float(np.min(values))})


@dataclass
class SpectrumReport:
    """Autovalores (crescentes) de -Σ^{1/2}(∂K/∂r)Σ^{1/2}, Σ = diag(sinh r*)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rate: float
    symmetric_defect: float

    @property
    def stable(self):
        return bool(np.all(self.eigenvalues < 0.0))

    def to_dict(self):
        return {"eigenvalues": [float(x) for x in self.eigenvalues], "rate": self.rate,
                "symmetric_defect": self.symmetric_defect, "stable": self.stable}


def stability_spectrum(c, r_star):
    """
    Espectro da linearização do fluxo em um empacotamento plano; a taxa de convergência
    exponencial é |maior autovalor|.

    Raises:
        PreconditionError: ‖K̃(r*)‖∞ >= 1e-8 ou algum tetraedro virtual.
    """
    arr = radii_array(c, r_star)
    k_inf = float(np.max(np.abs(curvature(c, arr))))
    if k_inf >= FLAT_TOL:
        raise PreconditionError(f"stability_spectrum exige empacotamento plano, ‖K‖∞ = {k_inf:.3e}")
    if not is_real_packing(c, arr):
        raise PreconditionError("stability_spectrum exige todos os tetraedros reais")
    root = np.sqrt(np.sinh(arr))
    op = -(root[:, None] * curvature_hessian(c, arr) * root[None, :])
    defect = float(np.max(np.abs(op - op.T)))
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (op + op.T))
    rate = float(abs(eigenvalues[-1]))
    logger.info(f"stability_spectrum: N={c.vertex_count}, autovalores em [{eigenvalues[0]:.6g}, "
                f"{eigenvalues[-1]:.6g}], assimetria {defect:.1e}")
    return SpectrumReport(eigenvalues=eigenvalues, eigenvectors=eigenvectors, rate=rate, symmetric_defect=defect)
