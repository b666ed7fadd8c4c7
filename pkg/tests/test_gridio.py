import json
import os

import numpy as np
import pytest
from gmpy2 import mpq

from pudq.gridio import Table, atomic_write, cell, float_repr, render
from pudq.scalars import I, sqrt_exact


def test_cells():
    assert cell(mpq(-3, 4)) == "-3/4"
    assert cell(mpq(6, 3)) == "2"
    assert cell(np.int64(5)) == 5
    assert cell(I * mpq(1, 2)) .endswith("i)") or "i" in cell(I * mpq(1, 2))
    assert "sqrt(2)" in cell(sqrt_exact(2))
    assert float_repr(0.1) == "0.1"


def test_grid_table_layout():
    t = Table.from_grid(["q", "x"], [np.array([0.0, 1.0]), np.array([2.0, 3.0])], np.array([1 + 2j, -0.5j]))
    csv = t.to_csv().splitlines()
    assert csv[0] == "q,x,value_re,value_im"
    assert csv[1] == "0.0,2.0,1.0,2.0" and len(csv) == 3
    doc = json.loads(t.to_json())
    assert doc["columns"][-2:] == ["value_re", "value_im"]


def test_render_rejects_unknown_format():
    with pytest.raises(ValueError):
        render(Table(["a"], [[1]]), "xml")
    assert json.loads(render({"b": mpq(1, 3)}, "json")) == {"b": "1/3"}


def test_atomic_write_leaves_no_partial_file(tmp_path):
    path = tmp_path / "out.csv"
    atomic_write(str(path), "a,b\n")
    assert path.read_text() == "a,b\n"

    class Boom(str):
        def __len__(self):
            raise RuntimeError

    with pytest.raises(Exception):
        atomic_write(str(tmp_path / "bad.csv"), object())
    assert sorted(os.listdir(tmp_path)) == ["out.csv"]
