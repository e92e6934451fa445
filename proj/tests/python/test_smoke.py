import math

import numpy as np
import pytest

import quatsurf


def test_catalogs():
    assert "cylinder" in quatsurf.generator_names()
    assert "solve-ivp" in quatsurf.command_names()
    assert "ivp" in quatsurf.verify_groups()


def test_generator_positions_shape_and_values():
    p = quatsurf.generator_positions("cylinder", n=9, bounds=(-1.0, 1.0, -1.0, 1.0))
    assert p.shape == (9, 9, 3)
    x = np.linspace(-1.0, 1.0, 9)
    assert np.allclose(p[0, :, 0], np.cos(x))
    assert np.allclose(p[:, 0, 2], -x)


def test_curvature_of_the_sphere():
    bounds = quatsurf.default_bounds("sphere", 65)
    p = quatsurf.generator_positions("sphere", n=65)
    c = quatsurf.curvature(p, bounds)
    assert c["H"].shape == (65, 65)
    assert np.nanmax(np.abs(c["H"] - 1.0)) < 1e-3
    assert np.allclose(c["normal"], -p, atol=1e-5)
    assert len(c["umbilics"]) == 65 * 65


def test_non_conformal_input_raises():
    p = quatsurf.generator_positions("cylinder", n=17, bounds=(-1.0, 1.0, -1.0, 1.0))
    p[..., 2] *= 2.0
    with pytest.raises(quatsurf.ValidationError):
        quatsurf.curvature(p, (-1.0, 1.0, -1.0, 1.0))
    assert issubclass(quatsurf.ValidationError, ValueError)


def test_run_analyze():
    r = quatsurf.run("analyze", generator="cylinder", grid={"n": 65})
    assert r.ok
    assert r.report["status"] == "ok"
    assert abs(r.report["results"]["H"]["mean"] - 0.5) < 1e-6
    assert b"o cylinder" in r.artifacts["surface.obj"]


def test_run_solve_ivp_and_errors():
    r = quatsurf.run("solve-ivp", params={"theta": math.pi / 4})
    assert r.ok
    assert r.report["results"]["lambda_deviation_from_one"] < 1e-6
    bad = quatsurf.run("solve-ivp", phi="one")
    assert bad.exit_code == 1
    assert bad.report["error"]["kind"] == "validation"
    with pytest.raises(quatsurf.ValidationError):
        quatsurf.run("analyze", colour="red")


def test_run_is_deterministic():
    a = quatsurf.run("verify", checks=["christoffel"])
    b = quatsurf.run("verify", checks=["christoffel"])
    assert a.report_text == b.report_text
    assert a.report["results"]["failed"] == 0
