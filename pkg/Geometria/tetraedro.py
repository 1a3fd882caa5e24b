"""Geometria de um tetraedro hiperbólico gerado por quatro bolas mutuamente tangentes.

Tudo aqui é função pura dos quatro raios: quantidade Q de não degenerescência,
classificação real/virtual, ângulos diedrais (via cofatores da matriz de Gram e via
fórmula fechada), ângulos sólidos, a extensão contínua aos tetraedros virtuais e as
derivadas analíticas dos ângulos sólidos.

Convenção de índices: vértices 0..3; o par (i, j) designa a aresta ij e (k, l) os
dois vértices restantes em ordem crescente.
"""
import logging
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from Utilidades import utils
from Utilidades.erros import ConfigError, DegenerateTetraError, DomainError, NearBoundaryError, NumericError

logger = logging.getLogger(__name__)

# Domínio padrão dos raios (coth transborda fora dele); o ambiente pode estreitá-lo ou alargá-lo.
RADIUS_MIN = 1e-8
RADIUS_MAX = 50.0

ARCCOS_TOL = 1e-9           # folga antes de saturar o argumento do arccos
STRICT_MIN_TOL = 1e-12      # separação relativa mínima entre os dois menores raios quando Q <= 0
NEAR_DEGENERATE_TOL = 1e-14 # Q abaixo disso (relativo a (Σy)²) marca o tetraedro como quase degenerado

PAIRS = tuple(combinations(range(4), 2))


def radius_bounds():
    """
    Intervalo [mínimo, máximo] aceito para os raios.
    Lido de YAMABE3H_RADIUS_MIN e YAMABE3H_RADIUS_MAX a cada chamada, com RADIUS_MIN e RADIUS_MAX
    como padrão.

    Raises:
        ConfigError: Variável inválida ou mínimo >= máximo.
    """
    try:
        lo = utils.env_float(utils.ENV_RADIUS_MIN, RADIUS_MIN)
        hi = utils.env_float(utils.ENV_RADIUS_MAX, RADIUS_MAX)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if lo >= hi:
        raise ConfigError(f"Domínio de raios vazio: [{lo}, {hi}]")
    return lo, hi


# Ângulo sólido do tetraedro euclidiano regular e a folga 4π - 22·α₁ᴱ.
ALPHA_E = 3.0 * math.acos(1.0 / 3.0) - math.pi
EPSILON_0 = 4.0 * math.pi - 22.0 * ALPHA_E


@dataclass(frozen=True)
class Radii4:
    """Raios das quatro bolas de um tetraedro, com y_m = coth(r_m) derivado."""

    r: tuple

    def __post_init__(self):
        values = tuple(float(x) for x in self.r)
        if len(values) != 4:
            raise DomainError(f"Radii4 exige 4 raios, recebeu {len(values)}")
        lo, hi = radius_bounds()
        for m, x in enumerate(values):
            if not math.isfinite(x) or x <= 0.0:
                raise DomainError(f"Raio r_{m} = {x} não é positivo")
            if x < lo or x > hi:
                raise DomainError(f"Raio r_{m} = {x} fora de [{lo}, {hi}]")
        object.__setattr__(self, "r", values)

    @property
    def y(self):
        return tuple(1.0 / math.tanh(x) for x in self.r)

    def __getitem__(self, m):
        return self.r[m]

    def __iter__(self):
        return iter(self.r)

    def permuted(self, perm):
        """Radii4 com os raios reordenados: o novo vértice m é o antigo perm[m]."""
        return Radii4(tuple(self.r[p] for p in perm))


@dataclass(frozen=True)
class TetraClass:
    """Real (index None) ou Virtual(index): Q <= 0 com r_index estritamente mínimo."""

    index: object = None

    @property
    def is_real(self):
        return self.index is None

    def __str__(self):
        return "Real" if self.index is None else f"Virtual({self.index})"


REAL = TetraClass()


@dataclass(frozen=True)
class DihedralAngles:
    """Os seis ângulos diedrais β_mn e comprimentos l_mn = r_m + r_n, indexados por par ordenado."""

    angles: dict
    lengths: dict

    def at(self, m, n):
        return self.angles[(min(m, n), max(m, n))]

    def length(self, m, n):
        return self.lengths[(min(m, n), max(m, n))]


@dataclass(frozen=True)
class SolidAngles:
    """Quatro ângulos sólidos, com a classe do tetraedro e a marca de quase degenerescência."""

    values: tuple
    tetra_class: TetraClass = REAL
    near_degenerate: bool = False

    def __getitem__(self, m):
        return self.values[m]

    def __iter__(self):
        return iter(self.values)

    def as_array(self):
        return np.array(self.values, dtype=float)


def as_radii4(r):
    """Aceita Radii4 ou qualquer sequência de quatro números."""
    if isinstance(r, Radii4):
        return r
    return Radii4(tuple(r))


def opposite(i, j):
    """Os dois vértices fora do par (i, j), em ordem crescente."""
    if i == j or not (0 <= i < 4 and 0 <= j < 4):
        raise DomainError(f"Par de vértices inválido: ({i}, {j})")
    k, l = (m for m in range(4) if m != i and m != j)
    return k, l


def _q(y):
    s = y[0] + y[1] + y[2] + y[3]
    return s * s - 2.0 * (y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]) + 4.0


def q_value(r):
    """
    Quantidade de não degenerescência Q = (Σy)² - 2Σy² + 4, com y = coth r.
    O tetraedro de bolas tangentes existe (é real) exatamente quando Q > 0.
    """
    return _q(as_radii4(r).y)


def classify(r):
    """
    Classifica a quádrupla: Real se Q > 0; senão Virtual(i), i o índice do menor raio.

    Raises:
        NearBoundaryError: Q <= 0 e os dois menores raios coincidem dentro de STRICT_MIN_TOL.
    """
    r = as_radii4(r)
    if _q(r.y) > 0.0:
        return REAL
    order = sorted(range(4), key=lambda m: (r.r[m], m))
    i, second = order[0], order[1]
    if r.r[second] - r.r[i] <= STRICT_MIN_TOL * r.r[i]:
        raise NearBoundaryError(
            f"Q <= 0 mas o mínimo não é estrito: r_{i} = {r.r[i]!r}, r_{second} = {r.r[second]!r}")
    return TetraClass(i)


def boundary_radius(others):
    """
    Raio r_i sobre a fronteira do i-ésimo espaço virtual, dados os outros três raios:
    coth(r_i) = f_i = y_j + y_k + y_l + 2·sqrt(y_j·y_k + y_k·y_l + y_l·y_j + 1).
    """
    values = tuple(float(x) for x in others)
    if len(values) != 3:
        raise DomainError(f"boundary_radius exige 3 raios, recebeu {len(values)}")
    if any(not math.isfinite(x) or x <= 0.0 for x in values):
        raise DomainError(f"Raios devem ser positivos: {values}")
    yj, yk, yl = (1.0 / math.tanh(x) for x in values)
    f = yj + yk + yl + 2.0 * math.sqrt(yj * yk + yk * yl + yl * yj + 1.0)
    return math.atanh(1.0 / f)


def gram_matrix(r):
    """Matriz de Gram G: -1 na diagonal e -cosh(r_m + r_n) fora dela."""
    rr = np.array(as_radii4(r).r)
    g = -np.cosh(np.add.outer(rr, rr))
    np.fill_diagonal(g, -1.0)
    return g


def _det_plus_ones(m):
    """det(M + 𝟙𝟙ᵀ) = det(M) + soma das entradas de adj(M), para M 3x3."""
    cof_sum = 0.0
    for a in range(3):
        ra = [x for x in range(3) if x != a]
        for b in range(3):
            cb = [x for x in range(3) if x != b]
            minor = m[ra[0], cb[0]] * m[ra[1], cb[1]] - m[ra[0], cb[1]] * m[ra[1], cb[0]]
            cof_sum += (-1.0) ** (a + b) * minor
    return float(np.linalg.det(m)) + cof_sum


def gram_cofactor(r, row, col):
    """
    Cofator (row, col) da matriz de Gram.

    G = -(𝟙𝟙ᵀ + E), com E_mn = cosh(l_mn) - 1 = 2·sinh²(l_mn/2) fora da diagonal e 0 nela;
    cada menor 3x3 é avaliado pelo lema do determinante para atualização de posto um,
    o que evita a perda de dígitos em cosh(l) ≈ 1 para raios pequenos.
    """
    rr = np.array(as_radii4(r).r)
    e = 2.0 * np.sinh(np.add.outer(rr, rr) / 2.0) ** 2
    np.fill_diagonal(e, 0.0)
    rows = [m for m in range(4) if m != row]
    cols = [m for m in range(4) if m != col]
    minor = -_det_plus_ones(e[np.ix_(rows, cols)])  # det(-(J+E)) = -det(J+E) em 3x3
    return (-1.0) ** (row + col) * minor


def _require_real(r, where):
    q = _q(r.y)
    if q <= 0.0:
        raise DegenerateTetraError(f"{where}: tetraedro não real (Q = {q!r}) para r = {r.r}")
    return q


def dihedral_cos_cofactor(r, pair):
    """cos β_ij = c_kl / sqrt(c_kk·c_ll), com c os cofatores da matriz de Gram."""
    r = as_radii4(r)
    _require_real(r, "dihedral_cos_cofactor")
    i, j = pair
    k, l = opposite(i, j)
    c_kl = gram_cofactor(r, k, l)
    prod = gram_cofactor(r, k, k) * gram_cofactor(r, l, l)
    if not prod > 0.0:
        raise NumericError(f"dihedral_cos_cofactor: c_kk·c_ll = {prod!r} <= 0 em r = {r.r}")
    return c_kl / math.sqrt(prod)


def _closed_parts(rr, y, q, i, j):
    k, l = opposite(i, j)
    s_ijk = math.sinh(rr[i] + rr[j] + rr[k])
    s_ijl = math.sinh(rr[i] + rr[j] + rr[l])
    pref = (math.sinh(rr[i]) * math.sinh(rr[j]) * math.sqrt(math.sinh(rr[k]) * math.sinh(rr[l]))
            / (4.0 * math.sqrt(s_ijk * s_ijl)))
    return pref, q - (y[i] + y[j]) ** 2 + (y[k] - y[l]) ** 2


def _cos_closed(rr, y, q, i, j):
    pref, poly = _closed_parts(rr, y, q, i, j)
    return pref * poly


def dihedral_cos_closed(r, pair):
    """
    cos β_ij pela fórmula fechada:
    sinh r_i sinh r_j sqrt(sinh r_k sinh r_l) / (4 sqrt(sinh(r_i+r_j+r_k) sinh(r_i+r_j+r_l)))
    · (Q - (y_i+y_j)² + (y_k-y_l)²).
    """
    r = as_radii4(r)
    q = _require_real(r, "dihedral_cos_closed")
    i, j = pair
    return _cos_closed(r.r, r.y, q, i, j)


def _arccos(c, where):
    if c > 1.0 or c < -1.0:
        if abs(c) - 1.0 > ARCCOS_TOL:
            raise NumericError(f"{where}: cosseno {c!r} fora de [-1, 1] além da tolerância")
        c = math.copysign(1.0, c)
    return math.acos(c)


def dihedral_angles(r):
    """Os seis ângulos diedrais de um tetraedro real, pela fórmula fechada."""
    r = as_radii4(r)
    q = _require_real(r, "dihedral_angles")
    rr, y = r.r, r.y
    angles = {}
    lengths = {}
    for i, j in PAIRS:
        angles[(i, j)] = _arccos(_cos_closed(rr, y, q, i, j), f"beta_{i}{j}")
        lengths[(i, j)] = rr[i] + rr[j]
    return DihedralAngles(angles=angles, lengths=lengths)


def solid_angles(r):
    """
    Ângulos sólidos α_m = β_mn + β_mp + β_mq - π de um tetraedro real.

    Raises:
        DegenerateTetraError: Q(r) <= 0.
    """
    r = as_radii4(r)
    q = _require_real(r, "solid_angles")
    beta = dihedral_angles(r)
    alpha = tuple(sum(beta.at(m, n) for n in range(4) if n != m) - math.pi for m in range(4))
    scale = sum(r.y) ** 2
    near = q < NEAR_DEGENERATE_TOL * scale
    if near:
        logger.warning(f"solid_angles: tetraedro quase degenerado (Q = {q:.3e}) em r = {r.r}")
    return SolidAngles(values=alpha, tetra_class=REAL, near_degenerate=near)


def extended_solid_angles(r):
    """Ângulos sólidos estendidos: iguais a solid_angles se real; (2π em i, 0 nos demais) se Virtual(i)."""
    r = as_radii4(r)
    tc = classify(r)
    if tc.is_real:
        return solid_angles(r)
    values = tuple(2.0 * math.pi if m == tc.index else 0.0 for m in range(4))
    return SolidAngles(values=values, tetra_class=tc)


def regular_solid_angle(t):
    """α₁(t·𝟙) = 3·arccos(cosh2t / (1 + 2cosh2t)) - π; decrescente, de α₁ᴱ (t→0) a 0 (t→∞)."""
    t = float(t)
    if not t > 0.0:
        raise DomainError(f"regular_solid_angle exige t > 0, recebeu {t}")
    if t > 350.0:
        return 0.0
    c = math.cosh(2.0 * t)
    return 3.0 * math.acos(c / (1.0 + 2.0 * c)) - math.pi


def face_angle(r, i, j, k):
    """
    Ângulo no vértice i da face (i, j, k), por meio-ângulo:
    sin²(γ/2) = sinh r_j sinh r_k / (sinh(r_i+r_j) sinh(r_i+r_k)).
    """
    rr = as_radii4(r).r
    if len({i, j, k}) != 3:
        raise DomainError(f"Face inválida: ({i}, {j}, {k})")
    s2 = math.sinh(rr[j]) * math.sinh(rr[k]) / (math.sinh(rr[i] + rr[j]) * math.sinh(rr[i] + rr[k]))
    return 2.0 * math.asin(math.sqrt(min(1.0, s2)))


def solid_angle_lhuilier(r, i):
    """
    Ângulo sólido em i como área do triângulo esférico do link de i, cujos lados são
    os três ângulos de face em i (fórmula de L'Huilier). Só para tetraedros reais.
    """
    r = as_radii4(r)
    _require_real(r, "solid_angle_lhuilier")
    j, k, l = (m for m in range(4) if m != i)
    a = face_angle(r, i, k, l)
    b = face_angle(r, i, j, l)
    c = face_angle(r, i, j, k)
    s = 0.5 * (a + b + c)
    prod = (math.tan(0.5 * s) * math.tan(0.5 * (s - a))
            * math.tan(0.5 * (s - b)) * math.tan(0.5 * (s - c)))
    return 4.0 * math.atan(math.sqrt(max(prod, 0.0)))


# --- Derivadas ---------------------------------------------------------------

def dihedral_partials(r):
    """
    Matriz 6x4 de ∂β_p/∂r_m (linhas na ordem de PAIRS), derivando a fórmula fechada
    pela regra da cadeia: cos β = A(r)·B(y), dy/dr = 1 - y².
    """
    r = as_radii4(r)
    q = _require_real(r, "dihedral_partials")
    rr, y = r.r, r.y
    total_y = sum(y)
    dy = [1.0 - v * v for v in y]
    out = np.zeros((6, 4))
    for p, (i, j) in enumerate(PAIRS):
        k, l = opposite(i, j)
        coth_ijk = 1.0 / math.tanh(rr[i] + rr[j] + rr[k])
        coth_ijl = 1.0 / math.tanh(rr[i] + rr[j] + rr[l])
        a, poly = _closed_parts(rr, y, q, i, j)
        c = a * poly
        sin_b = math.sqrt(max(0.0, 1.0 - c * c))
        if sin_b == 0.0:
            raise NumericError(f"dihedral_partials: β_{i}{j} degenerado em r = {rr}")
        dln_a = {
            i: y[i] - 0.5 * coth_ijk - 0.5 * coth_ijl,
            j: y[j] - 0.5 * coth_ijk - 0.5 * coth_ijl,
            k: 0.5 * y[k] - 0.5 * coth_ijk,
            l: 0.5 * y[l] - 0.5 * coth_ijl,
        }
        db_dy = {
            i: 2.0 * total_y - 4.0 * y[i] - 2.0 * (y[i] + y[j]),
            j: 2.0 * total_y - 4.0 * y[j] - 2.0 * (y[i] + y[j]),
            k: 2.0 * total_y - 4.0 * y[k] + 2.0 * (y[k] - y[l]),
            l: 2.0 * total_y - 4.0 * y[l] - 2.0 * (y[k] - y[l]),
        }
        for m in range(4):
            dc = a * db_dy[m] * dy[m] + c * dln_a[m]
            out[p, m] = -dc / sin_b
    return out


def solid_angle_jacobian_chain(r):
    """∂α/∂r montada a partir de dihedral_partials (α_m soma os β dos pares que contêm m)."""
    d = dihedral_partials(r)
    jac = np.zeros((4, 4))
    for p, (i, j) in enumerate(PAIRS):
        jac[i] += d[p]
        jac[j] += d[p]
    return jac


def dihedral_partial_incident(r, pair):
    """Forma fechada de ∂β_ij/∂r_i (derivada em relação a um extremo da aresta)."""
    r = as_radii4(r)
    q = _require_real(r, "dihedral_partial_incident")
    rr, y = r.r, r.y
    i, j = pair
    k, l = opposite(i, j)
    yi, yj, yk, yl = y[i], y[j], y[k], y[l]
    pref = (math.sinh(rr[j]) ** 2 * math.sinh(rr[k]) * math.sinh(rr[l])
            / (2.0 * math.sqrt(q) * math.sinh(rr[i] + rr[j] + rr[k]) * math.sinh(rr[i] + rr[j] + rr[l])))
    ratio = yi / yj
    braces = (yj * yj * (-yk * yk - yl * yl
                         - 2.0 * ratio * (yi * yk + yi * yl + yk * yl * (2.0 + ratio))
                         + (yj - yi) * (2.0 * yi + yk + yl))
              - 4.0 + 2.0 * yj * yj + (yk - yl) ** 2 - 3.0 * yj * (yk + yl) - 3.0 * yi * (2.0 * yj + yk + yl))
    return pref * braces


def dihedral_partial_opposite(r, pair, k):
    """Forma fechada de ∂β_ij/∂r_k, k fora da aresta ij."""
    r = as_radii4(r)
    q = _require_real(r, "dihedral_partial_opposite")
    rr, y = r.r, r.y
    i, j = pair
    others = opposite(i, j)
    if k not in others:
        raise DomainError(f"Vértice {k} não é oposto à aresta ({i}, {j})")
    l = others[0] if others[1] == k else others[1]
    return (math.sinh(rr[i] + rr[j])
            / (2.0 * math.sqrt(q) * math.sinh(rr[k]) * math.sinh(rr[i] + rr[j] + rr[k]))
            * (y[i] + y[j] + y[k] - y[l]))


def solid_angle_partial(r, i, j):
    """∂α_i/∂r_j para i != j (simétrica em i, j)."""
    r = as_radii4(r)
    q = _require_real(r, "solid_angle_partial")
    return _offdiag(r.r, r.y, q, i, j)


def _offdiag(rr, y, q, i, j):
    k, l = opposite(i, j)
    pref = (math.sinh(rr[k]) * math.sinh(rr[l])
            / (math.sqrt(q) * math.sinh(rr[i] + rr[j] + rr[k]) * math.sinh(rr[i] + rr[j] + rr[l])))
    return pref * (2.0 - (y[k] - y[l]) ** 2 + y[i] * (y[j] + y[k] + y[l]) + y[j] * (y[i] + y[k] + y[l]))


def solid_angle_partial_diagonal(r, i):
    """∂α_i/∂r_i pela forma fechada (negativa em todo tetraedro real)."""
    r = as_radii4(r)
    q = _require_real(r, "solid_angle_partial_diagonal")
    return _diagonal(r.r, r.y, q, i)


def _diagonal(rr, y, q, i):
    j, k, l = (m for m in range(4) if m != i)
    yi, yj, yk, yl = y[i], y[j], y[k], y[l]
    pref = -(math.sinh(rr[i]) * (math.sinh(rr[j]) * math.sinh(rr[k]) * math.sinh(rr[l])) ** 2
             / (math.sqrt(q) * math.sinh(rr[i] + rr[j] + rr[k]) * math.sinh(rr[i] + rr[j] + rr[l])
                * math.sinh(rr[i] + rr[k] + rr[l])))
    bracket = (2.0 * yi + yj + yk + yl
               + yi / yj * (yi + yk + yl) + yi / yk * (yi + yj + yl) + yi / yl * (yi + yj + yk)
               + (2.0 / yi + 1.0 / yj + 1.0 / yk + 1.0 / yl) * q)
    rest = (6.0 - 2.0 * yk ** 2 + 6.0 * yk * yl - yk ** 3 * yl - 2.0 * yl ** 2 + 2.0 * yk ** 2 * yl ** 2
            - yk * yl ** 3 - yj ** 3 * (yk + yl) + 4.0 * yi ** 2 * (yj + yk + yl) ** 2
            + 2.0 * yj ** 2 * (-1.0 + yk ** 2 + yk * yl + yl ** 2)
            - yj * (yk ** 3 - 2.0 * yk ** 2 * yl + yl * (-6.0 + yl ** 2) - 2.0 * yk * (3.0 + yl ** 2))
            + yi * (-2.0 * yj ** 3 + 10.0 * yk - 2.0 * yk ** 3 + 10.0 * yl + 3.0 * yk ** 2 * yl
                    + 3.0 * yk * yl ** 2 - 2.0 * yl ** 3 + 3.0 * yj ** 2 * (yk + yl)
                    + yj * (10.0 + 3.0 * yk ** 2 + 16.0 * yk * yl + 3.0 * yl ** 2)))
    return pref * (yi * yi * yj * yk * yl * bracket + rest)


def solid_angle_jacobian(r):
    """
    Matriz 4x4 ∂α/∂r de um tetraedro real pelas formas fechadas (diagonal e fora dela).
    É simétrica (Hessiana do funcional de Cooper-Rivin do tetraedro) e negativa definida.
    """
    r = as_radii4(r)
    q = _require_real(r, "solid_angle_jacobian")
    rr, y = r.r, r.y
    jac = np.empty((4, 4))
    for i in range(4):
        jac[i, i] = _diagonal(rr, y, q, i)
    for i, j in PAIRS:
        jac[i, j] = jac[j, i] = _offdiag(rr, y, q, i, j)
    return jac
