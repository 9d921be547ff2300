import json
import math

import numpy as np
import pytest

import elastica


def circle_points(n, r=1.0):
    x = np.arange(n) / n
    return np.column_stack([r * np.cos(2 * np.pi * x), r * np.sin(2 * np.pi * x)])


def test_shapes_are_listed_and_built():
    names = elastica.shape_names()
    assert "circle" in names and "theta" in names
    for name in names:
        net = elastica.make_shape(name)
        assert len(net) == len(net.curves) >= 1
        for pts in net.curves:
            assert pts.ndim == 2 and pts.shape[1] == 2


def test_circle_energy_and_curvature():
    pts = circle_points(256, 2.0)
    e = elastica.energy(pts, closed=True, mu=1.0)
    # int k^2 ds = pi for radius 2, plus mu * 4 pi.
    assert e["bending"] == pytest.approx(math.pi, rel=1e-3)
    assert e["total"] == pytest.approx(5 * math.pi, rel=1e-3)
    assert np.allclose(elastica.curvature(pts), 0.5, atol=1e-3)
    # V = -k^3 + mu k for a circle.
    assert np.allclose(elastica.normal_velocity(pts, mu=1.0), 0.375, atol=1e-3)


def test_errors_map_to_python_exceptions():
    with pytest.raises(elastica.UnknownShape):
        elastica.make_shape("square")
    with pytest.raises(elastica.BadParams):
        elastica.make_shape("circle", {"r": -1.0})
    with pytest.raises(elastica.ElasticaError):
        elastica.energy(np.zeros((64, 2)))
    with pytest.raises(elastica.NotStationary):
        elastica.classify_limit(elastica.make_shape("ellipse").curves[0])


def test_run_dissipates_energy():
    cfg = elastica.SolverConfig()
    cfg.t_end = 0.2
    cfg.snapshot_every = 10
    tr = elastica.run(elastica.make_shape("perturbed_circle"), cfg)
    assert tr.status == "ReachedTEnd"
    assert tr.final_time == pytest.approx(0.2)
    cols = tr.reports()
    assert len(cols["t"]) == tr.steps > 0
    assert np.all(np.diff(cols["energy"]) <= 1e-8 * cols["energy"][0])
    assert np.all(np.diff(tr.snapshot_times) > 0)
    assert tr.monitor_violations == 0
    assert tr.summary().startswith("status=")


def test_unit_circle_is_stationary():
    cfg = elastica.SolverConfig()
    cfg.stop_velocity_tol = 1e-2
    tr = elastica.run(elastica.Network.closed_curve(circle_points(256)), cfg)
    assert tr.status == "Converged"
    c = elastica.classify_limit(tr.final.curves[0], threshold=1e-2)
    assert c["kind"] == "circle"
    assert c["radius"] == pytest.approx(1.0, rel=1e-3)


def test_network_json_round_trip(tmp_path):
    net = elastica.make_shape("triod")
    assert net.junction_count == 1
    doc = json.loads(net.to_json())
    assert len(doc["curves"]) == 3
    again = elastica.Network.from_json(net.to_json())
    for a, b in zip(net.curves, again.curves):
        assert np.array_equal(a, b)
    path = tmp_path / "triod.json"
    net.save(path)
    assert len(elastica.Network.load(path)) == 3
    entries = elastica.validate_admissible(net)
    assert entries and all(e["passed"] for e in entries if not e["experimental"])
