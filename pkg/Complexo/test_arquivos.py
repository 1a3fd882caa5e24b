from pathlib import Path

import pytest

from Complexo.arquivos import (parse, parse_packing, read_complex, read_packing, serialize,
                               serialize_packing)
from Complexo.triangulacao import Packing, generate
from Utilidades.erros import ComplexError, DomainError, FormatError

DADOS = Path(__file__).resolve().parent.parent / "dados"


@pytest.mark.parametrize("kind", ["pentachoron", "sixteen_cell"])
def test_shipped_files_match_generator(kind):
    data = (DADOS / f"{kind}.json").read_bytes()
    assert serialize(generate(kind)) == data
    assert parse(data) == generate(kind)


def test_parse_serialize_round_trip(rng, subdivide):
    c = subdivide(generate("pentachoron"), rng, 5)
    assert parse(serialize(c)) == c
    assert parse(serialize(c).decode("utf-8")) == c


def test_invalid_json_reports_position():
    with pytest.raises(FormatError) as exc:
        parse(b'{\n  "format": "yamabe3h-tri/1",\n  "vertex_count": ,\n}')
    assert exc.value.line == 3
    assert exc.value.column is not None
    assert "linha 3" in str(exc.value)


@pytest.mark.parametrize("document", [
    b'[1, 2, 3]',
    b'{"format": "yamabe3h-tri/1", "vertex_count": 4}',
    b'{"format": "yamabe3h-tri/2", "vertex_count": 4, "tetrahedra": [[0, 1, 2, 3]]}',
    b'{"format": "yamabe3h-tri/1", "vertex_count": 4, "tetrahedra": [[0, 1, 2, 3]], "extra": 1}',
    b'{"format": "yamabe3h-tri/1", "vertex_count": true, "tetrahedra": [[0, 1, 2, 3]]}',
    b'{"format": "yamabe3h-tri/1", "vertex_count": 4, "tetrahedra": [[0, 1, 2]]}',
    b'{"format": "yamabe3h-tri/1", "vertex_count": 4, "tetrahedra": [[0, 1, 2, 3.5]]}',
    b'{"format": "yamabe3h-tri/1", "vertex_count": 4, "tetrahedra": {}}',
    b'\xff\xfe',
])
def test_schema_errors(document):
    with pytest.raises(FormatError):
        parse(document)


def test_index_out_of_range_is_complex_error():
    with pytest.raises(ComplexError):
        parse(b'{"format": "yamabe3h-tri/1", "vertex_count": 4, "tetrahedra": [[0, 1, 2, 7]]}')


def test_packing_round_trip():
    p = Packing((0.1, 1.0 / 3.0, 2.5, 1e-7))
    assert parse_packing(serialize_packing(p)) == p
    assert parse_packing(serialize_packing(p), vertex_count=4) == p


def test_packing_errors():
    with pytest.raises(FormatError):
        parse_packing(b'{"format": "yamabe3h-packing/1", "radii": [1.0, 2.0]}', vertex_count=3)
    with pytest.raises(FormatError):
        parse_packing(b'{"format": "yamabe3h-packing/1", "radii": ["a"]}')
    with pytest.raises(FormatError):
        parse_packing(b'{"format": "yamabe3h-packing/1", "radii": []}')
    with pytest.raises(DomainError):
        parse_packing(b'{"format": "yamabe3h-packing/1", "radii": [1.0, -2.0]}')


def test_read_files(tmp_path):
    tri = tmp_path / "c.json"
    tri.write_bytes(serialize(generate("sixteen_cell")))
    c, data = read_complex(tri)
    assert c == generate("sixteen_cell")
    assert data == tri.read_bytes()
    rad = tmp_path / "r.json"
    rad.write_bytes(serialize_packing(Packing.uniform(8, 0.5)))
    packing, _ = read_packing(rad, c.vertex_count)
    assert packing.radii == (0.5,) * 8
