import json
from fractions import Fraction

import pytest

import core_data
from core_data import (format_rational, format_matrix, load_json, parse_matrix, parse_rational,
                       run_tasks, save_json, SpecFormatError)


def test_parse_rational_accepts_exact_forms():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(" -2 ") == Fraction(-2)
    assert parse_rational(5) == Fraction(5)
    assert parse_rational(Fraction(1, 3)) == Fraction(1, 3)


@pytest.mark.parametrize("bad", [0.5, "abc", "1/0", None, True])
def test_parse_rational_rejects(bad):
    with pytest.raises(SpecFormatError):
        parse_rational(bad)


def test_format_rational():
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    assert format_matrix([[Fraction(1, 2), 0]]) == [["1/2", "0"]]


def test_parse_matrix_needs_rows():
    with pytest.raises(SpecFormatError):
        parse_matrix(["1", "2"])
    assert parse_matrix([["1", "1/2"]]) == [[Fraction(1), Fraction(1, 2)]]


def test_save_and_load_json(tmp_path, capsys):
    path = tmp_path / "sub" / "report.json"
    save_json({"ok": True, "s": "∂"}, str(path))
    assert "✓ Saved" in capsys.readouterr().out
    assert load_json(str(path)) == {"ok": True, "s": "∂"}
    assert "∂" in path.read_text()


def _square(context, task):
    return context * task * task


def test_run_tasks_serial_and_pool(monkeypatch):
    assert run_tasks(_square, 2, [1, 2, 3]) == [2, 8, 18]
    monkeypatch.setattr(core_data, "THREADS", 2)
    assert run_tasks(_square, 3, [1, 2, 3, 4]) == [3, 12, 27, 48]
