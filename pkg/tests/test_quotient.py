import json
import math

import numpy as np
import pytest

from cubicfeyn.errors import DomainError, ParseError, ValidationError
from cubicfeyn.quotient import (RadialIntegrand, disc, gaussian, load_integrand, orbit_jacobian,
                                plane_integral, quotient_integral)


def test_gaussian_is_pi():
    assert abs(quotient_integral(gaussian()) - math.pi) < 1e-10


def test_unit_disc():
    assert quotient_integral(RadialIntegrand(lambda r: 1.0), r_max=1.0) == pytest.approx(math.pi, abs=1e-12)
    assert quotient_integral(disc()) == pytest.approx(math.pi, abs=1e-12)
    assert quotient_integral(disc(), r_max=3.0) == pytest.approx(math.pi, abs=1e-10)


def test_wide_gaussian():
    assert quotient_integral(gaussian(2.0)) == pytest.approx(2 * math.pi, abs=1e-10)


def test_jacobian_is_radius(rng):
    for _ in range(10):
        p = rng.normal(size=2)
        assert orbit_jacobian(p) == pytest.approx(np.hypot(*p), rel=1e-14)


@pytest.mark.parametrize("f", [
    lambda r: math.exp(-r * r),
    lambda r: math.exp(-r * r / 2),
    lambda r: r * r * math.exp(-r * r),
    lambda r: math.exp(-r),
    lambda r: 1.0 / (1.0 + r * r) ** 3,
])
def test_matches_plane_quadrature(f):
    quotient = quotient_integral(f)
    plane = plane_integral(f, math.inf)
    assert abs(quotient - plane) < 1e-9


def test_sampled_integrand(tmp_path):
    r = np.linspace(0, 6, 601)
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"r": r.tolist(), "f": np.exp(-r ** 2).tolist()}))
    f = load_integrand(f"file:{path}")
    assert quotient_integral(f) == pytest.approx(math.pi, rel=1e-4)


def test_non_finite_samples():
    with pytest.raises(DomainError):
        RadialIntegrand.from_samples([0, 1, 2], [1.0, float("nan"), 0.0])


def test_non_finite_closed_form():
    with pytest.raises(DomainError):
        quotient_integral(RadialIntegrand(lambda r: 1.0 / (r - 0.5) if r != 0.5 else math.inf), r_max=1.0)


def test_non_decaying_needs_cutoff():
    with pytest.raises(DomainError):
        quotient_integral(RadialIntegrand(lambda r: 1.0))


def test_bad_specs(tmp_path):
    with pytest.raises(ValidationError):
        load_integrand("cosine")
    with pytest.raises(ParseError):
        load_integrand(f"file:{tmp_path / 'missing.json'}")
    with pytest.raises(ValidationError):
        quotient_integral(gaussian(), r_max=-1.0)
