import json

import numpy as np
import pytest

from freeradial import hypergroup as hg
from freeradial import io as fio
from freeradial.errors import FormatError
from freeradial.radial import RadialFunction, TreeFunction
from freeradial.spherical import SphericalParameter, gauss_rule


def test_radial_csv_round_trip(tmp_path):
    x = RadialFunction(2, [1.0, -0.5 + 0.25j, 1e-300, 3.0])
    path = tmp_path / "x.csv"
    fio.atomic_write_text(path, fio.radial_to_csv(x))
    assert path.read_text().splitlines()[0] == "n,re,im"
    back = fio.read_radial_csv(path, 2)
    assert np.array_equal(back.values, x.values)


def test_radial_csv_fills_missing_levels(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("n,re,im\n3,1,0\n0,2,0\n")
    assert np.array_equal(fio.read_radial_csv(path, 2).values, [2, 0, 0, 1])


@pytest.mark.parametrize("body,line", [
    ("n,re,im\n0,1,0\nx,2,0\n", 3),
    ("n,re,im\n0,1\n", 2),
    ("n,re,im\n0,1,0\n0,1,0\n", 3),
    ("n,re,im\n-1,1,0\n", 2),
    ("n,re,im\n0,abc,0\n", 2),
    ("level,re,im\n0,1,0\n", 1),
])
def test_malformed_radial_csv_reports_the_line(tmp_path, body, line):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(FormatError) as exc:
        fio.read_radial_csv(path, 2)
    assert exc.value.line == line
    assert f"bad.csv:{line}:" in str(exc.value)


def test_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(FormatError):
        fio.read_radial_csv(path, 2)


def test_tree_csv_round_trip(tmp_path):
    f = TreeFunction(2, {(): 1.0, (1, -2): 0.5j, (-1,): -2.0})
    path = tmp_path / "t.csv"
    path.write_text(fio.tree_to_csv(f))
    lines = path.read_text().splitlines()
    assert lines[0] == "word,re,im" and lines[1].startswith("e,")
    assert fio.read_tree_csv(path, 2).values == f.values
    assert isinstance(fio.read_function_csv(path, 2), TreeFunction)


def test_tree_csv_bad_word(tmp_path):
    path = tmp_path / "t.csv"
    path.write_text("word,re,im\na+,1,0\nc+,1,0\n")
    with pytest.raises(FormatError) as exc:
        fio.read_tree_csv(path, 2)
    assert exc.value.line == 3


def test_read_function_csv_dispatch(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("n,re,im\n1,1,0\n")
    assert isinstance(fio.read_function_csv(path, 2), RadialFunction)
    path.write_text("foo,bar\n")
    with pytest.raises(FormatError):
        fio.read_function_csv(path, 2)


def test_transform_and_quadrature_csv(tmp_path):
    rule = gauss_rule(2, 6)
    path = tmp_path / "q.csv"
    path.write_text(fio.quadrature_to_csv(rule))
    nodes, weights = fio.read_quadrature_csv(path)
    assert np.array_equal(nodes, rule.nodes) and np.array_equal(weights, rule.weights)
    path = tmp_path / "t.csv"
    path.write_text(fio.transform_to_csv([0.1, 0.2], [1 + 2j, 3.0]))
    thetas, vals = fio.read_transform_csv(path)
    assert np.array_equal(thetas, [0.1, 0.2]) and np.array_equal(vals, [1 + 2j, 3])


def test_measure_json_round_trip(tmp_path):
    m = hg.convolve_points(SphericalParameter.lower(0.45), SphericalParameter.lower(0.4))
    path = tmp_path / "m.json"
    path.write_text(fio.measure_to_json(m, 64))
    data = json.loads(path.read_text())
    assert len(data["atoms"]) == 1 and len(data["density_samples"]) >= 64
    back = fio.read_measure_json(path)
    assert np.allclose(back.moments(15, 64), m.moments(15, 64), atol=1e-8)


def test_point_measure_json(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(fio.measure_to_json(hg.RadialMeasure.point(SphericalParameter.real(0.7)), 32))
    back = fio.read_measure_json(path)
    assert back.density is None and back.atoms == [(SphericalParameter.real(0.7), 1)]


@pytest.mark.parametrize("text", ["{", "[]", '{"atoms": [{"kind": "real"}]}', '{"atoms": [{"kind": "x", "value": 0, "mass_re": 1, "mass_im": 0}]}'])
def test_malformed_measure_json(tmp_path, text):
    path = tmp_path / "m.json"
    path.write_text(text)
    with pytest.raises(FormatError):
        fio.read_measure_json(path)


def test_atomic_write_leaves_no_temp_files(tmp_path):
    path = tmp_path / "sub" / "out.txt"
    fio.atomic_write_text(path, "a")
    fio.atomic_write_text(path, "b")
    assert path.read_text() == "b"
    assert [p.name for p in path.parent.iterdir()] == ["out.txt"]
