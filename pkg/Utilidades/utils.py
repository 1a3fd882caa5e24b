import hashlib
import json
import logging
import math
import os

import numpy as np

logger = logging.getLogger(__name__)

# Variáveis de ambiente reconhecidas pelo projeto.
ENV_THREADS = "YAMABE3H_THREADS"
ENV_RADIUS_MIN = "YAMABE3H_RADIUS_MIN"
ENV_RADIUS_MAX = "YAMABE3H_RADIUS_MAX"


def env_float(name, default):
    """
    Lê um número real de uma variável de ambiente.

    Args:
        name (str): Nome da variável.
        default (float): Valor usado quando a variável não está definida.

    Returns:
        float: Valor lido ou o padrão.

    Raises:
        ValueError: Se a variável existir mas não for um número positivo.
    """
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return float(default)
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"Variável {name} inválida: {raw!r}") from None
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"Variável {name} deve ser um número positivo: {raw!r}")
    return value


def worker_count():
    """
    Número de threads para avaliações por tetraedro.
    Usa YAMABE3H_THREADS quando definido; caso contrário, o paralelismo da máquina.
    """
    raw = os.environ.get(ENV_THREADS)
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"worker_count: {ENV_THREADS}={raw!r} ignorado (não é inteiro)")
        return os.cpu_count() or 1
    return max(1, value)


def format_log(values, max_len=64):
    """
    Trunca representações longas no meio para facilitar a leitura nos logs.
    Aceita strings ou sequências numéricas (vetores de raios, curvaturas).
    """
    if not isinstance(values, str):
        values = np.array2string(np.asarray(values, dtype=float), precision=6, separator=",",
                                 threshold=10**6, max_line_width=10**6)
    if len(values) > max_len:
        return f"{values[:(max_len-3)//2]}...{values[-(max_len-3)//2:]}"
    return values


def format_number(value):
    """Número com 17 algarismos significativos (ida e volta exata para float64)."""
    return format(float(value), ".17g")


def sha256_digest(data):
    """Resumo SHA-256 em hexadecimal de bytes ou texto UTF-8."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def to_jsonable(obj):
    """
    Converte arrays e escalares numpy em tipos nativos para json.
    Reais não finitos (nan, ±inf) viram None, que o json grava como null.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def dump_json(obj):
    """Serialização determinística (chaves ordenadas, indentação fixa)."""
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_text(path, text):
    """Grava texto UTF-8 e devolve o resumo SHA-256 do conteúdo gravado."""
    data = text.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)
    logger.info(f"write_text: {path} ({len(data)} bytes)")
    return sha256_digest(data)
