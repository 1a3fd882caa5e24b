"""
Integração no tempo do fluxo de Yamabe combinatório estendido dr_i/dt = -K̃_i·sinh(r_i).

Com FlowConfig.extended = False integra o fluxo não estendido e para na primeira vez
em que algum tetraedro fica virtual (status left_real_domain).
"""
import csv
import io
import logging
import math
from collections import deque
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from Energia.curvatura import curvature_with_classes, radii_array
from Energia.funcional import energy_rel
from Utilidades import utils
from Utilidades.erros import ConfigError, DomainError, NumericError, QuadratureError

logger = logging.getLogger(__name__)


class FlowStatus(str, Enum):
    CONVERGED = "converged_to_flat"
    DECAYED = "decayed_to_zero"
    T_MAX = "t_max_reached"
    NUMERIC_FAILURE = "numeric_failure"
    LEFT_REAL = "left_real_domain"


METHODS = ("rk4", "rkf45")


@dataclass(frozen=True)
class FlowConfig:
    """Configuração de uma integração. Valores padrão: RK4 com dt = 1e-3."""

    method: str = "rk4"
    dt: float = 1e-3
    rtol: float = 1e-8
    atol: float = 1e-12
    t_max: float = 10.0
    stop_tol: float = 1e-10
    output_stride: int = 10
    monitor_energy: bool = True
    extended: bool = True
    decay_threshold: float = 1e-6
    decay_window: int = 50
    max_halvings: int = 60
    max_steps: int = 10_000_000

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"Método de integração desconhecido: {self.method}")
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ConfigError(f"dt deve ser positivo, recebeu {self.dt}")
        if not (math.isfinite(self.t_max) and self.t_max > 0.0):
            raise ConfigError(f"t_max deve ser positivo, recebeu {self.t_max}")
        for name in ("rtol", "stop_tol", "atol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ConfigError(f"{name} deve estar em (0, 1), recebeu {value}")
        if not 0.0 < self.decay_threshold < 1.0:
            raise ConfigError(f"decay_threshold deve estar em (0, 1), recebeu {self.decay_threshold}")
        for name in ("output_stride", "decay_window", "max_halvings", "max_steps"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} deve ser inteiro >= 1, recebeu {value!r}")

    def to_dict(self):
        return asdict(self)


@dataclass
class FlowSample:
    t: float
    radii: np.ndarray
    curvature: np.ndarray
    s_rel: float
    real_count: int
    virtual_count: int

    @property
    def r_min(self):
        return float(np.min(self.radii))

    @property
    def r_max(self):
        return float(np.max(self.radii))

    @property
    def argmax(self):
        # np.argmax devolve o menor índice em empates
        return int(np.argmax(self.radii))

    @property
    def argmin(self):
        return int(np.argmin(self.radii))

    @property
    def k_inf(self):
        return float(np.max(np.abs(self.curvature)))


@dataclass
class FlowTrace:
    """Amostras de uma trajetória e o status terminal."""

    config: FlowConfig
    samples: list = field(default_factory=list)
    status: FlowStatus = None
    message: str = ""
    steps: int = 0

    @property
    def final(self):
        return self.samples[-1]

    def times(self):
        return np.array([s.t for s in self.samples])

    def r_max(self):
        return np.array([s.r_max for s in self.samples])

    def r_min(self):
        return np.array([s.r_min for s in self.samples])

    def s_rel(self):
        return np.array([s.s_rel for s in self.samples])

    def k_inf(self):
        return np.array([s.k_inf for s in self.samples])

    def header(self):
        """Colunas do CSV: t, r_0..r_{N-1}, K_0..K_{N-1}, S_rel, r_min, r_max, virtual_count."""
        n = len(self.samples[0].radii) if self.samples else 0
        return (["t"] + [f"r_{i}" for i in range(n)] + [f"K_{i}" for i in range(n)]
                + ["S_rel", "r_min", "r_max", "virtual_count"])

    def write_csv(self, stream):
        """Uma linha por amostra; números com 17 algarismos significativos."""
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.header())
        for s in self.samples:
            writer.writerow([utils.format_number(s.t)]
                            + [utils.format_number(x) for x in s.radii]
                            + [utils.format_number(x) for x in s.curvature]
                            + [utils.format_number(s.s_rel), utils.format_number(s.r_min),
                               utils.format_number(s.r_max), str(s.virtual_count)])

    def csv_text(self):
        buffer = io.StringIO()
        self.write_csv(buffer)
        return buffer.getvalue()


class _StepFailure(Exception):
    pass


class YamabeFlow:
    """Integrador do fluxo estendido num complexo fixo."""

    # Tabela de Butcher de Runge-Kutta-Fehlberg 4(5): linhas 0-4 geram os estágios 2-6,
    # a linha 5 é a solução de 4ª ordem propagada.
    RKF45_STAGES = (
        (1 / 4,),
        (3 / 32, 9 / 32),
        (1932 / 2197, -7200 / 2197, 7296 / 2197),
        (439 / 216, -8.0, 3680 / 513, -845 / 4104),
        (-8 / 27, 2.0, -3554 / 2565, 1859 / 4104, -11 / 40),
    )
    RKF45_WEIGHTS = (25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0)
    RKF45_ERROR = (1 / 360, 0.0, -128 / 4275, -2197 / 75240, 1 / 50, 2 / 55)

    SAFETY = 0.9
    GROWTH_MAX = 5.0
    SHRINK_MIN = 0.2

    def __init__(self, complex_, config=None):
        self.complex = complex_
        self.config = config if config is not None else FlowConfig()

    def evaluate(self, r):
        """(dr/dt, K̃, classes dos tetraedros) em r."""
        k, classes = curvature_with_classes(self.complex, r)
        return -k * np.sinh(r), k, classes

    def rhs(self, r):
        """(-K̃_i·sinh r_i)_i em r."""
        return self.evaluate(radii_array(self.complex, r))[0]

    def _f(self, r):
        if not np.all(np.isfinite(r)) or np.any(r <= 0.0):
            raise _StepFailure("estágio com raio não positivo")
        try:
            return self.evaluate(r)[0]
        except DomainError as exc:
            raise _StepFailure(str(exc)) from None

    def step(self, r, h, f0):
        """
        Interface para o passo do método configurado.
        Devolve (r_novo, erro_normalizado); o erro é None nos métodos de passo fixo.
        """
        if self.config.method == "rk4":
            return self.step_rk4(r, h, f0), None
        elif self.config.method == "rkf45":
            return self.step_rkf45(r, h, f0)
        else:
            raise ConfigError(f"Método de integração desconhecido: {self.config.method}")

    def step_rk4(self, r, h, k1):
        """Runge-Kutta clássico de 4ª ordem."""
        k2 = self._f(r + 0.5 * h * k1)
        k3 = self._f(r + 0.5 * h * k2)
        k4 = self._f(r + h * k3)
        return r + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def step_rkf45(self, r, h, k1):
        """Passo de 4ª ordem com estimativa de erro embutida; erro normalizado por atol + rtol·|r|."""
        ks = [k1]
        for row in self.RKF45_STAGES:
            slope = sum(a * k for a, k in zip(row, ks))
            ks.append(self._f(r + h * slope))
        r_new = r + h * sum(b * k for b, k in zip(self.RKF45_WEIGHTS, ks))
        err = h * sum(e * k for e, k in zip(self.RKF45_ERROR, ks))
        scale = self.config.atol + self.config.rtol * np.maximum(np.abs(r), np.abs(r_new))
        return r_new, float(np.max(np.abs(err) / scale))

    def _advance(self, r, f, h, classes):
        """
        Um passo aceito a partir de (r, f). Reduz o passo à metade quando algum raio ficaria
        não positivo; se algum Q muda de sinal, repete uma vez com metade do passo.

        Returns:
            tuple: (r_novo, (f, K, classes) em r_novo, h usado, h sugerido para o próximo passo)
        """
        cfg = self.config
        attempts = 0
        crossing_retried = False
        while True:
            try:
                r_new, err = self.step(r, h, f)
                if not np.all(np.isfinite(r_new)) or np.any(r_new <= 0.0):
                    raise _StepFailure("raio não positivo no fim do passo")
                state = self.evaluate(r_new)
            except (_StepFailure, DomainError) as exc:
                attempts += 1
                if attempts > cfg.max_halvings:
                    raise NumericError(f"passo reduzido {cfg.max_halvings} vezes sem sucesso: {exc}") from None
                h *= 0.5
                logger.debug(f"_advance: {exc}; passo reduzido para {h:.3e}")
                continue
            if err is not None:
                if err > 1.0:
                    attempts += 1
                    if attempts > cfg.max_halvings:
                        raise NumericError(f"controle de erro rejeitou {attempts} passos seguidos (h = {h:.3e})")
                    h *= max(self.SHRINK_MIN, self.SAFETY * err ** -0.2)
                    continue
                h_next = h * (self.GROWTH_MAX if err == 0.0 else min(self.GROWTH_MAX, self.SAFETY * err ** -0.2))
            else:
                h_next = cfg.dt
            if not crossing_retried and state[2] != classes:
                crossing_retried = True
                h *= 0.5
                logger.debug(f"_advance: mudança de sinal de Q no passo; repetindo com h = {h:.3e}")
                continue
            return r_new, state, h, h_next

    def _sample(self, t, r, k, classes):
        s_rel = math.nan
        if self.config.monitor_energy:
            try:
                s_rel = energy_rel(self.complex, r)
            except QuadratureError as exc:
                logger.warning(f"_sample: energia indisponível em t={t:.6g}: {exc}")
        virtual = sum(1 for tc in classes if not tc.is_real)
        return FlowSample(t=t, radii=r.copy(), curvature=k.copy(), s_rel=s_rel,
                          real_count=len(classes) - virtual, virtual_count=virtual)

    def _terminal(self, t, f, k, classes, window):
        cfg = self.config
        if not cfg.extended and any(not tc.is_real for tc in classes):
            return FlowStatus.LEFT_REAL
        if np.max(np.abs(k)) < cfg.stop_tol and np.max(np.abs(f)) < cfg.stop_tol:
            return FlowStatus.CONVERGED
        if (window[-1] < cfg.decay_threshold and len(window) == window.maxlen
                and all(b <= a for a, b in zip(window, list(window)[1:]))):
            return FlowStatus.DECAYED
        if cfg.t_max - t <= 1e-12 * max(1.0, cfg.t_max):
            return FlowStatus.T_MAX
        return None

    def integrate(self, r0):
        """
        Integra a partir de r0 até convergir, decair, atingir t_max ou falhar.

        Returns:
            FlowTrace: Amostras a cada output_stride passos aceitos, mais a amostra final.
        """
        cfg = self.config
        r = radii_array(self.complex, r0).copy()
        trace = FlowTrace(config=cfg)
        f, k, classes = self.evaluate(r)
        t = 0.0
        trace.samples.append(self._sample(t, r, k, classes))
        window = deque([float(np.max(r))], maxlen=cfg.decay_window + 1)
        h = cfg.dt
        logger.info(f"integrate: método {cfg.method}, N={self.complex.vertex_count}, "
                    f"r0={utils.format_log(r)}, t_max={cfg.t_max}")
        status = self._terminal(t, f, k, classes, window)
        if status is FlowStatus.T_MAX:
            status = None
        while status is None:
            if trace.steps >= cfg.max_steps:
                status = FlowStatus.NUMERIC_FAILURE
                trace.message = f"limite de {cfg.max_steps} passos atingido"
                break
            h_try = min(h, cfg.t_max - t)
            try:
                r, (f, k, classes), h_used, h = self._advance(r, f, h_try, classes)
            except NumericError as exc:
                status = FlowStatus.NUMERIC_FAILURE
                trace.message = str(exc)
                logger.error(f"integrate: falha numérica em t={t:.6g}: {exc}")
                break
            t += h_used
            trace.steps += 1
            window.append(float(np.max(r)))
            status = self._terminal(t, f, k, classes, window)
            if status is not None or trace.steps % cfg.output_stride == 0:
                trace.samples.append(self._sample(t, r, k, classes))
        if trace.samples[-1].t != t:
            trace.samples.append(self._sample(t, r, k, classes))
        trace.status = status
        logger.info(f"integrate: {status.value} em t={t:.6g} após {trace.steps} passos, "
                    f"|K|_inf={np.max(np.abs(k)):.3e}, r_max={np.max(r):.3e}")
        return trace


def rhs(c, r):
    """Lado direito do fluxo estendido: (-K̃_i·sinh r_i)_i."""
    return YamabeFlow(c).rhs(r)


def integrate(c, r0, cfg=None):
    """Atalho para YamabeFlow(c, cfg).integrate(r0)."""
    return YamabeFlow(c, cfg).integrate(r0)
