import json
import math

import numpy as np
import pytest

from Utilidades import utils


def test_env_float(monkeypatch):
    monkeypatch.delenv("YAMABE3H_TESTE", raising=False)
    assert utils.env_float("YAMABE3H_TESTE", 2.5) == 2.5
    monkeypatch.setenv("YAMABE3H_TESTE", "1e-6")
    assert utils.env_float("YAMABE3H_TESTE", 2.5) == 1e-6
    for raw in ("abc", "-1", "inf"):
        monkeypatch.setenv("YAMABE3H_TESTE", raw)
        with pytest.raises(ValueError):
            utils.env_float("YAMABE3H_TESTE", 2.5)


@pytest.mark.parametrize("raw, expected", [("3", 3), ("0", 1), ("-2", 1)])
def test_worker_count(monkeypatch, raw, expected):
    monkeypatch.setenv(utils.ENV_THREADS, raw)
    assert utils.worker_count() == expected


def test_worker_count_ignores_garbage(monkeypatch):
    monkeypatch.setenv(utils.ENV_THREADS, "muitos")
    assert utils.worker_count() >= 1


def test_format_log_truncates():
    text = utils.format_log(np.arange(100.0))
    assert len(text) <= 64
    assert "..." in text
    assert utils.format_log("curto") == "curto"


@pytest.mark.parametrize("value", [0.1, 1.0 / 3.0, 1e-300, 123456789.125])
def test_format_number_is_exact(value):
    assert float(utils.format_number(value)) == value


def test_dump_json_converts_numpy():
    text = utils.dump_json({"b": np.float64(0.5), "a": np.array([1, 2]), "c": np.bool_(True), "d": math.nan})
    assert text.index('"a"') < text.index('"b"')
    data = json.loads(text)
    assert data["a"] == [1, 2] and data["b"] == 0.5 and data["c"] is True
    assert data["d"] is None


def reject_constant(name):
    raise ValueError(f"constante não JSON: {name}")


def test_dump_json_is_strict_json():
    text = utils.dump_json({"nan": math.nan, "inf": [np.float64(math.inf), -math.inf], "x": np.float32(1.5)})
    data = json.loads(text, parse_constant=reject_constant)
    assert data == {"inf": [None, None], "nan": None, "x": 1.5}
    assert "NaN" not in text and "Infinity" not in text


def test_write_text_returns_digest(tmp_path):
    path = tmp_path / "saida.txt"
    digest = utils.write_text(path, "olá\n")
    assert path.read_bytes() == "olá\n".encode("utf-8")
    assert digest == utils.sha256_digest("olá\n") == utils.sha256_digest("olá\n".encode("utf-8"))
