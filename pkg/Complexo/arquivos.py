"""Formatos em disco (JSON UTF-8) de triangulações e empacotamentos."""
import json
import logging

from Complexo.triangulacao import Complex, Packing
from Utilidades.erros import FormatError

logger = logging.getLogger(__name__)

TRI_FORMAT = "yamabe3h-tri/1"
PACKING_FORMAT = "yamabe3h-packing/1"

TRI_FIELDS = ("format", "vertex_count", "tetrahedra")
PACKING_FIELDS = ("format", "radii")


def _load_object(document, expected_format, fields):
    if isinstance(document, (bytes, bytearray)):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"Documento não é UTF-8 válido (byte {exc.start})") from None
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise FormatError(f"JSON inválido: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    if not isinstance(obj, dict):
        raise FormatError("O documento deve ser um objeto JSON")
    unknown = sorted(set(obj) - set(fields))
    if unknown:
        raise FormatError(f"Campos desconhecidos: {unknown}")
    missing = [name for name in fields if name not in obj]
    if missing:
        raise FormatError(f"Campos ausentes: {missing}")
    if obj["format"] != expected_format:
        raise FormatError(f"Formato {obj['format']!r} não suportado (esperado {expected_format!r})")
    return obj


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def parse(document):
    """
    Lê uma triangulação no formato yamabe3h-tri/1. Não verifica a condição de variedade.

    Args:
        document (bytes | str): Conteúdo do arquivo.

    Returns:
        Complex: Complexo com incidência construída.

    Raises:
        FormatError: Sintaxe ou esquema inválidos (com linha e coluna quando houver).
        ComplexError: Índice fora do intervalo, tetraedro duplicado ou vértice repetido.
    """
    obj = _load_object(document, TRI_FORMAT, TRI_FIELDS)
    n = obj["vertex_count"]
    if not _is_int(n) or n <= 0:
        raise FormatError(f"vertex_count deve ser inteiro positivo, recebeu {n!r}")
    tets = obj["tetrahedra"]
    if not isinstance(tets, list):
        raise FormatError("tetrahedra deve ser uma lista")
    for idx, tet in enumerate(tets):
        if not isinstance(tet, list) or len(tet) != 4 or not all(_is_int(v) for v in tet):
            raise FormatError(f"Tetraedro {idx} deve ser uma lista de 4 inteiros: {tet!r}")
    c = Complex(n, tuple(tuple(tet) for tet in tets))
    logger.debug(f"parse: N={c.vertex_count}, {c.tetra_count} tetraedros")
    return c


def serialize(c):
    """Complex -> bytes UTF-8 no formato yamabe3h-tri/1 (uma quádrupla por linha)."""
    rows = ",\n".join("    " + json.dumps(list(tet)) for tet in c.tetrahedra)
    text = (f'{{\n  "format": "{TRI_FORMAT}",\n  "vertex_count": {c.vertex_count},\n'
            f'  "tetrahedra": [\n{rows}\n  ]\n}}\n')
    return text.encode("utf-8")


def parse_packing(document, vertex_count=None):
    """
    Lê um empacotamento no formato yamabe3h-packing/1.

    Raises:
        FormatError: Sintaxe, esquema ou comprimento diferente de vertex_count.
        DomainError: Raio não positivo.
    """
    obj = _load_object(document, PACKING_FORMAT, PACKING_FIELDS)
    radii = obj["radii"]
    if not isinstance(radii, list) or not radii:
        raise FormatError("radii deve ser uma lista não vazia")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in radii):
        raise FormatError("radii deve conter apenas números")
    if vertex_count is not None and len(radii) != vertex_count:
        raise FormatError(f"radii tem {len(radii)} entradas, esperado {vertex_count}")
    return Packing(tuple(radii))


def serialize_packing(packing):
    """Packing -> bytes UTF-8 no formato yamabe3h-packing/1 (repr exato de cada raio)."""
    values = ", ".join(repr(float(x)) for x in packing.radii)
    return f'{{\n  "format": "{PACKING_FORMAT}",\n  "radii": [{values}]\n}}\n'.encode("utf-8")


def read_complex(path):
    """Lê e interpreta um arquivo de triangulação; devolve (Complex, bytes brutos)."""
    with open(path, "rb") as fh:
        data = fh.read()
    return parse(data), data


def read_packing(path, vertex_count=None):
    """
    Lê e interpreta um arquivo yamabe3h-packing/1.

    Args:
        path (str): Caminho do arquivo.
        vertex_count (int, opcional): N esperado; se dado, o número de raios é conferido.

    Returns:
        tuple: (Packing, bytes brutos), os bytes para o resumo SHA-256 do manifesto.

    Raises:
        FormatError: Documento mal formado ou com N diferente do esperado.
        OSError: Arquivo inacessível.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_packing(data, vertex_count), data
