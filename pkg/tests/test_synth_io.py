import json
import math

import numpy as np
import pytest

from hs2sd import GeometryError, InputError, PointSet, pairwise_distance_matrix
from hs2sd.io import dump_point_sets, fmt, matrix_csv, parse_point_sets, read_matrix_csv, rounded
from hs2sd.setdist import DistanceConfig
from hs2sd.synth import split_supports, synthesize


def test_synth_shapes_labels_and_determinism():
    a = synthesize(3, 4, 5, 6, 0.05, 0.01, seed=1)
    b = synthesize(3, 4, 5, 6, 0.05, 0.01, seed=1)
    assert len(a) == 12 and all(len(s) == 5 and s.dim == 6 for s in a)
    assert [s.id for s in a[:5]] == ["c0-s0", "c0-s1", "c0-s2", "c0-s3", "c1-s0"]
    assert all(np.array_equal(x.points, y.points) for x, y in zip(a, b))
    assert {s.label for s in synthesize(1, 3, 2, 2, 0.2, 0.01)} == {"class0"}


def test_anchor_separation():
    c = 0.05
    sets = synthesize(4, 1, 1, 8, c, 1e-6, seed=3, min_separation=0.5)
    anchors = np.array([s.points[0] for s in sets])
    r = 1 / math.sqrt(c)
    gaps = [np.linalg.norm(anchors[i] - anchors[j]) for i in range(4) for j in range(i)]
    assert min(gaps) >= 0.5 * r * (1 - 1e-4)
    assert np.all(np.linalg.norm(anchors, axis=1) <= 0.6 * r * (1 + 1e-4))


def test_intra_class_distances_much_smaller_than_inter_class():
    sets = synthesize(3, 10, 25, 8, 0.05, 0.01, seed=42)
    m = pairwise_distance_matrix(sets, DistanceConfig(lam=0.5), threads=1)
    labels = np.array([s.label for s in sets])
    same = labels[:, None] == labels[None, :]
    off = ~np.eye(len(sets), dtype=bool)
    ratio = m[same & off].mean() / m[~same].mean()
    assert ratio < 0.1


@pytest.mark.parametrize("kwargs", [
    dict(classes=0), dict(sets_per_class=0), dict(points_per_set=0), dict(dimension=0), dict(spread=0.0),
])
def test_synth_rejects_bad_parameters(kwargs):
    args = dict(classes=2, sets_per_class=2, points_per_set=2, dimension=2, curvature=0.1, spread=0.01)
    args.update(kwargs)
    with pytest.raises(InputError):
        synthesize(**args)


def test_synth_bad_curvature_and_crowded_anchors():
    with pytest.raises(GeometryError):
        synthesize(2, 1, 1, 2, -1.0, 0.01)
    with pytest.raises(InputError, match="separation"):
        synthesize(50, 1, 1, 1, 0.1, 0.01, min_separation=0.5)


def test_split_supports():
    sets = synthesize(2, 3, 2, 2, 0.1, 0.01)
    sup, qry = split_supports(sets, 1)
    assert [s.id for s in sup] == ["c0-s0", "c1-s0"]
    assert len(qry) == 4 and all(s.id.endswith(("s1", "s2")) for s in qry)


def test_fmt_and_rounded():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(0.0) == "0"
    assert rounded(None) is None
    assert rounded(2 / 3) == 0.666666666667


def test_point_set_round_trip():
    sets = [PointSet([[0.1, 0.2], [0.3, -0.1]], 0.5, "a", "x"), PointSet([[0.0, 0.1]], 0.5, "b")]
    doc = json.loads(dump_point_sets(sets, 0.5))
    assert doc["format_version"] == 1 and doc["dimension"] == 2
    assert "label" not in doc["sets"][1]
    back = parse_point_sets(doc)
    assert [(s.id, s.label) for s in back] == [("a", "x"), ("b", None)]
    assert np.array_equal(back[0].points, sets[0].points)
    assert parse_point_sets(doc, curvature=0.1)[0].curvature == 0.1


@pytest.mark.parametrize("doc, match", [
    ([], "object"),
    ({"format_version": 2, "curvature": 1, "dimension": 1, "sets": []}, "format_version"),
    ({"curvature": 1, "sets": []}, "missing"),
    ({"curvature": 1, "dimension": 1, "sets": [{"id": "a", "points": []}]}, "no points"),
    ({"curvature": 1, "dimension": 2, "sets": [{"id": "a", "points": [[0.1]]}]}, "coordinates"),
    ({"curvature": 1, "dimension": 1, "sets": [{"id": "a", "points": [[0.1]]}, {"id": "a", "points": [[0.2]]}]},
     "duplicate"),
    ({"curvature": 1, "dimension": 1, "sets": [{"id": "a", "points": [["x"]]}]}, "non-numeric"),
])
def test_parse_errors(doc, match):
    with pytest.raises(InputError, match=match):
        parse_point_sets(doc)


def test_parse_geometry_error_names_set():
    with pytest.raises(GeometryError, match="'a'"):
        parse_point_sets({"curvature": 1, "dimension": 1, "sets": [{"id": "a", "points": [[float("nan")]]}]})


def test_matrix_csv_round_trip(tmp_path):
    m = np.array([[0.0, 1 / 3], [1 / 3, 0.0]])
    text = matrix_csv(["p", "q"], m)
    assert text == "id,p,q\np,0,0.333333333333\nq,0.333333333333,0\n"
    path = tmp_path / "m.csv"
    path.write_text(text)
    assert np.allclose(read_matrix_csv(path), m, rtol=1e-12)


def test_read_matrix_csv_errors(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("0,1\n1,0,2\n")
    with pytest.raises(InputError):
        read_matrix_csv(path)
    path.write_text("0,1\n1,zz\n")
    with pytest.raises(InputError):
        read_matrix_csv(path)
    with pytest.raises(InputError):
        read_matrix_csv(tmp_path / "missing.csv")
