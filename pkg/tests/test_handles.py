import numpy as np
import pytest

from qint import handles as H
from qint.errors import ConfigError
from qint.fixtures import complex_plane, example7_B, example7_sigma, real_line


def test_builders_evaluate():
    x = np.array([[0.0, 1.0], [0.5, 0.25]])
    assert H.coordinate(1)(x)[:, 0].tolist() == [1.0, 0.25]
    assert H.polynomial_1d([1, 0, 2])(x)[:, 0].tolist() == [1.0, 1.5]
    assert np.allclose(H.exp(2.0)(x)[:, 0], np.exp([0.0, 1.0]))
    assert np.allclose(H.sin(1.0)(x)[:, 0], [0.0, 0.0], atol=1e-15)
    assert np.allclose(H.cos(1.0)(x)[:, 0], [1.0, -1.0])
    C = complex_plane()
    aff = H.affine([1.0, 0.0], [[0.0, 1.0], [2.0, 0.0]], C)
    assert aff(x).tolist() == [[3.0, 0.0], [1.5, 0.5]]


def test_degrees_and_exactness():
    assert H.constant(2.0).exact_level("corner") == 0
    assert H.coordinate(0).exact_level("midpoint") == 0
    assert H.coordinate(0).exact_level("corner") is None
    assert H.polynomial_1d([0, 0, 1]).exact_level("midpoint") is None
    assert H.exp().exact_level("midpoint") is None
    assert (H.coordinate(0) + H.constant(1.0)).degree == 1


def test_sigma_restriction_reads_point_as_element():
    s = example7_sigma()
    h = H.sigma_restriction(s)
    pt = np.arange(11, dtype=float)[None, :]
    got = h(pt)[0]
    A = s.domain
    assert got.tolist() == [float(A.index(l)) for l in s.codomain.labels]


def test_build_from_spec():
    B = example7_B()
    assert H.build({"kind": "constant", "value": {"a": 2.0}}, B)(np.zeros((1, 1)))[0].tolist() == [0, 0, 0, 2, 0, 0]
    assert H.build({"kind": "constant", "value": 1.0}, B)(np.zeros((1, 1)))[0].tolist() == [1, 1, 1, 0, 0, 0]
    p = H.build({"kind": "polynomial-1d", "coeffs": [0, 1]}, real_line())
    assert p(np.array([[0.3]]))[0, 0] == 0.3
    with pytest.raises(ConfigError):
        H.build({"kind": "sigma-restriction"}, B)
    with pytest.raises(ConfigError):
        H.build({"kind": "bessel"}, B)
    with pytest.raises(ConfigError):
        H.build({"kind": "exp"}, B)
    with pytest.raises(ConfigError):
        H.build({"kind": "affine"}, B)


def test_combinators():
    x = np.array([[0.25]])
    f, g = H.coordinate(0), H.constant(1.0)
    assert (f - g)(x)[0, 0] == -0.75
    assert (f - g).abs()(x)[0, 0] == 0.75
    assert f.scaled(4.0)(x)[0, 0] == 1.0
    assert f.times_scalar(H.constant(3.0))(x)[0, 0] == 0.75
    with pytest.raises(ConfigError):
        H.constant(complex_plane().one()) + f
    with pytest.raises(ConfigError):
        H.stack([f], complex_plane())
