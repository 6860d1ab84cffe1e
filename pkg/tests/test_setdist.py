import numpy as np
import pytest

from hs2sd import (
    DistanceConfig,
    GeometryError,
    InputError,
    PointSet,
    ShapeMismatchError,
    geodesic_set_distance,
    hs2sd_distance,
    nearest_prototype_classify,
    pairwise_distance_matrix,
    topological_distance,
)
from hs2sd.adapter import AdapterWeights
from hs2sd.setdist import class_prototypes

from conftest import random_set

SET_A = [[0.1, 0.2], [0.5, -0.3], [-0.4, 0.6]]
SET_B = [[0.3, 0.1], [-0.2, -0.5], [0.7, 0.4]]


def test_reference_pair_components():
    sx, sy = PointSet(SET_A, 0.1), PointSet(SET_B, 0.1)
    r = hs2sd_distance(sx, sy, DistanceConfig(lam=0.3))
    assert r.d_g == pytest.approx(0.5190854838947037, rel=1e-12)
    assert r.d_t == pytest.approx(16802923.877308037, rel=1e-8)
    assert r.total == pytest.approx(0.3 * r.d_g + 0.7 * r.d_t, rel=1e-12)
    assert r.as_dict() == {"d_g": r.d_g, "d_t": r.d_t, "lambda": 0.3, "total": r.total}


def test_decomposition_and_collapse(rng):
    sx, sy = random_set(rng, 5, 3, 0.2), random_set(rng, 5, 3, 0.2)
    lam = 0.37
    r = hs2sd_distance(sx, sy, DistanceConfig(lam=lam))
    assert r.total == pytest.approx(lam * r.d_g + (1 - lam) * r.d_t, rel=1e-12)
    assert r.d_g == geodesic_set_distance(sx, sy)
    assert r.d_t == pytest.approx(topological_distance(sx, sy), rel=1e-14)
    assert hs2sd_distance(sx, sy, DistanceConfig(lam=1.0)).total == r.d_g
    assert hs2sd_distance(sx, sy, DistanceConfig(lam=0.0)).total == r.d_t


def test_affine_in_lambda(rng):
    sx, sy = random_set(rng, 4, 2, 0.5), random_set(rng, 4, 2, 0.5)
    a, b = 0.2, 0.8
    ta = hs2sd_distance(sx, sy, DistanceConfig(lam=a)).total
    tb = hs2sd_distance(sx, sy, DistanceConfig(lam=b)).total
    tm = hs2sd_distance(sx, sy, DistanceConfig(lam=(a + b) / 2)).total
    assert tm == pytest.approx((ta + tb) / 2, rel=1e-12)


def test_identity_and_symmetry(rng):
    sx, sy = random_set(rng, 6, 2, 0.05), random_set(rng, 6, 2, 0.05)
    assert hs2sd_distance(sx, sx).total == 0.0
    assert hs2sd_distance(sx, sy).total == pytest.approx(hs2sd_distance(sy, sx).total, rel=1e-10)


def test_unequal_sizes(rng):
    sx, sy = random_set(rng, 3, 2, 0.2), random_set(rng, 5, 2, 0.2)
    r = hs2sd_distance(sx, sy, DistanceConfig(lam=1.0))
    assert r.d_t is None and r.total == r.d_g
    assert r.as_dict()["d_t"] is None
    with pytest.raises(ShapeMismatchError, match="lambda=1"):
        hs2sd_distance(sx, sy, DistanceConfig(lam=0.5))


def test_incompatible_sets(rng):
    with pytest.raises(GeometryError):
        hs2sd_distance(random_set(rng, 3, 2, 0.2), random_set(rng, 3, 2, 0.3))
    with pytest.raises(ShapeMismatchError):
        hs2sd_distance(random_set(rng, 3, 2, 0.2), random_set(rng, 3, 3, 0.2), DistanceConfig(lam=1.0))


@pytest.mark.parametrize("lam", [-0.1, 1.5, float("nan")])
def test_invalid_lambda(lam):
    with pytest.raises(InputError):
        DistanceConfig(lam=lam)


def test_invalid_tm_terms():
    with pytest.raises(InputError):
        DistanceConfig(tm_terms=-1)


def test_tm_terms_changes_topological_term(rng):
    sx, sy = random_set(rng, 4, 2, 0.2), random_set(rng, 4, 2, 0.2)
    short = hs2sd_distance(sx, sy, DistanceConfig(lam=0.0, tm_terms=1)).d_t
    full = hs2sd_distance(sx, sy, DistanceConfig(lam=0.0)).d_t
    assert short != full


def test_pairwise_matrix(rng):
    sets = [random_set(rng, 4, 2, 0.2, sid=str(k)) for k in range(5)]
    cfg = DistanceConfig(lam=0.4)
    m = pairwise_distance_matrix(sets, cfg, threads=1)
    assert m.shape == (5, 5)
    assert np.array_equal(m, m.T) and np.all(np.diag(m) == 0)
    assert m[1, 3] == hs2sd_distance(sets[1], sets[3], cfg).total
    assert np.array_equal(pairwise_distance_matrix(sets, cfg, threads=4), m)
    assert pairwise_distance_matrix(sets[:1], cfg).tolist() == [[0.0]]


def test_pairwise_matrix_names_failing_pair(rng):
    sets = [random_set(rng, 4, 2, 0.2), random_set(rng, 4, 2, 0.2), random_set(rng, 5, 2, 0.2)]
    with pytest.raises(ShapeMismatchError, match=r"pair \(0, 2\)"):
        pairwise_distance_matrix(sets, threads=1)


def test_adapter_configuration(rng):
    sx, sy = random_set(rng, 4, 3, 0.2), random_set(rng, 4, 3, 0.2)
    cfg = DistanceConfig(adapter=AdapterWeights.zeros(3, 4))
    r = hs2sd_distance(sx, sy, cfg)
    assert r.lambda_used == 0.5
    assert r.total == pytest.approx(0.5 * (r.d_g + r.d_t), rel=1e-12)
    w = AdapterWeights.random(3, 4, seed=3)
    m = pairwise_distance_matrix([sx, sy], DistanceConfig(adapter=w, symmetrize_adapter=True), threads=1)
    assert m[0, 1] == pytest.approx(m[1, 0], rel=1e-12)


def labeled(rng, n, c, center, label, sid):
    pts = center + 0.01 * rng.standard_normal((n, len(center)))
    return PointSet(pts, c, sid, label)


def test_classify_query_equal_to_support(rng):
    c = 0.2
    supports = [labeled(rng, 4, c, np.array(ctr), f"L{k}", f"s{k}")
                for k, ctr in enumerate([[0.5, 0.0], [-0.5, 0.0], [0.0, 0.8]])]
    res = nearest_prototype_classify(supports, supports, DistanceConfig(lam=0.5), threads=1)
    assert res.predicted == ["L0", "L1", "L2"]
    assert res.classes == ["L0", "L1", "L2"]
    assert res.accuracy(["L0", "L1", "L2"]) == 1.0
    assert np.all(np.abs(np.diag(res.logits)) < 1e-12)


def test_classify_tie_goes_to_lowest_class():
    c = 1.0
    supports = [PointSet([[0.3, 0.0]], c, "a", "first"), PointSet([[-0.3, 0.0]], c, "b", "second")]
    query = PointSet([[0.0, 0.4]], c, "q")
    res = nearest_prototype_classify([query], supports, DistanceConfig(lam=1.0), threads=1)
    assert res.logits[0, 0] == res.logits[0, 1]
    assert res.predicted == ["first"]
    swapped = nearest_prototype_classify([query], supports[::-1], DistanceConfig(lam=1.0), threads=1)
    assert swapped.predicted == ["second"]


def test_classify_multi_shot_forces_geodesic(rng):
    c = 0.2
    supports = [labeled(rng, 3, c, np.array([0.5, 0.0]), "x", "s0"),
                labeled(rng, 3, c, np.array([0.5, 0.0]), "x", "s1"),
                labeled(rng, 3, c, np.array([-0.5, 0.0]), "y", "s2"),
                labeled(rng, 3, c, np.array([-0.5, 0.0]), "y", "s3")]
    classes, protos = class_prototypes(supports)
    assert classes == ["x", "y"] and [len(p) for p in protos] == [6, 6]
    query = labeled(rng, 3, c, np.array([-0.45, 0.02]), "y", "q")
    res = nearest_prototype_classify([query], supports, DistanceConfig(lam=0.5), threads=1)
    assert res.predicted == ["y"]
    want = -geodesic_set_distance(query, protos[1])
    assert res.logits[0, 1] == pytest.approx(want, rel=1e-14)


def test_classify_argmin_scale_invariant(rng):
    c = 0.2
    centers = [np.array(v) for v in ([0.4, 0.1], [-0.3, 0.5], [0.0, -0.6])]
    supports = [labeled(rng, 3, c, ctr, f"k{i}", f"s{i}") for i, ctr in enumerate(centers)]
    queries = [labeled(rng, 3, c, centers[i % 3], f"k{i % 3}", f"q{i}") for i in range(6)]
    res = nearest_prototype_classify(queries, supports, DistanceConfig(lam=0.5), threads=1)
    scaled = np.argmax(3.7 * res.logits, axis=1)
    assert [res.classes[k] for k in scaled] == res.predicted


def test_classify_requires_labels(rng):
    with pytest.raises(InputError, match="label"):
        nearest_prototype_classify([random_set(rng, 3, 2, 0.2)], [random_set(rng, 3, 2, 0.2, sid="s")])
    with pytest.raises(InputError):
        nearest_prototype_classify([], [])
