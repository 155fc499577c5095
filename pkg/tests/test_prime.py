import numpy as np
import pytest

from conftest import interior_points
from schottky.domain import Circle, CircularDomain
from schottky.errors import SingularEvaluationError
from schottky.group import WordEnumeration, enumerate_words
from schottky.prime import PrimeEvaluator


def annulus_omega_oracle(z, y, r=0.25, terms=8):
    """Independent scalar route for the one-generator product."""
    val = z - y
    for k in range(1, terms + 1):
        q = r ** (2 * k)
        val *= (z - q * y) * (y - q * z) / ((z - q * z) * (y - q * y))
    return val


def test_disk_omega_is_difference(disk_tools):
    assert disk_tools.ev.omega(0.3, 0.1) == pytest.approx(0.2)


def test_omega_vanishes_at_diagonal(annulus_tools):
    assert annulus_tools.ev.omega(0.4, 0.4) == 0


def test_omega_derivative_normalization(annulus_tools):
    # omega(z, y)/(z - y) -> 1 as z -> y
    y = 0.45 + 0.2j
    h = 1e-6
    val = annulus_tools.ev.omega(y + h, y) / h
    assert abs(val - 1) < 1e-4


def test_omega_matches_annulus_oracle(annulus_tools):
    rng = np.random.default_rng(2)
    pts = interior_points(annulus_tools.domain, 40, seed=2)
    for z, y in zip(pts[:20], pts[20:]):
        lhs = annulus_tools.ev.omega(complex(z), complex(y))
        rhs = annulus_omega_oracle(complex(z), complex(y))
        assert abs(lhs - rhs) < 1e-10


def test_omega_zero_free_off_orbit(annulus_tools):
    ev = annulus_tools.ev
    y = 0.5
    orbit = [y * 0.25 ** (2 * k) for k in range(-3, 4)]
    pts = interior_points(ev.domain, 60, seed=9)
    clear = [z for z in pts if all(abs(z - w) > 0.05 for w in orbit)]
    vals = np.abs(ev.omega(np.array(clear), y))
    assert vals.min() > 1e-4


def test_omega_vectorized_matches_scalar(annulus_tools):
    pts = interior_points(annulus_tools.domain, 10, seed=4)
    vec = annulus_tools.ev.omega(pts, 0.5)
    for z, v in zip(pts, vec):
        assert annulus_tools.ev.omega(complex(z), 0.5) == pytest.approx(v)


def test_symmetry_residuals_disk(disk_tools):
    r1, r2 = disk_tools.ev.symmetry_residuals(0.5, 0.3j)
    assert r1 < 1e-15
    assert r2 == 0


def test_symmetry_residuals_annulus(annulus_tools):
    r1, r2 = annulus_tools.ev.symmetry_residuals(0.7, 0.4)
    assert r1 < 1e-9
    assert r2 < 1e-12


def test_symmetry_residuals_triply(triply_tools):
    pts = interior_points(triply_tools.domain, 10, seed=12)
    for z, y in zip(pts[:5], pts[5:]):
        r1, r2 = triply_tools.ev.symmetry_residuals(complex(z), complex(y))
        assert r1 < 1e-8
        assert r2 < 1e-12


def test_functional_equation_annulus(annulus_tools):
    res = annulus_tools.ev.functional_equation_residual(0.6, 0.4j, 1, annulus_tools.v)
    assert res < 1e-6


def test_functional_equation_monotone_in_length(annulus_tools):
    residuals = []
    for L in (2, 4, 6):
        ev = PrimeEvaluator(annulus_tools.domain, max_word_length=L)
        residuals.append(ev.functional_equation_residual(0.6, 0.4j, 1, annulus_tools.v))
    assert residuals[0] > residuals[1] > residuals[2]


def test_functional_equation_monotone_triply(triply_tools):
    residuals = []
    for L in (2, 4, 6):
        ev = PrimeEvaluator(triply_tools.domain, max_word_length=L)
        residuals.append(ev.functional_equation_residual(0.25 + 0.3j, -0.3j, 1, triply_tools.v))
    assert residuals[0] > residuals[1] > residuals[2]


def test_functional_equation_disk_vacuous(disk_tools):
    assert disk_tools.ev.functional_equation_residual(0.3, 0.2, 1, None) == 0.0


def test_half_set_choice_does_not_matter(triply_tools):
    enum = enumerate_words(2, 4)
    mirrored = ~enum.half_set_mask
    mirrored[0] = False
    ev_m = PrimeEvaluator(triply_tools.domain,
                          enumeration=WordEnumeration(2, 4, enum.words, mirrored))
    ev_o = PrimeEvaluator(triply_tools.domain, max_word_length=4)
    z, y = 0.3 + 0.2j, -0.4j
    a, b = ev_o.omega(z, y), ev_m.omega(z, y)
    assert abs(a - b) / abs(a) < 1e-10


def test_singular_guard():
    # the fixed points of the annulus group are 0 and infinity; asking for
    # omega at a y whose orbit degenerates trips the guard
    ev = PrimeEvaluator(CircularDomain((Circle(0j, 0.25),)), max_word_length=4)
    with pytest.raises(SingularEvaluationError):
        ev.omega(0.5, 1e-12)


def test_log_space_product_path():
    # force the log-space accumulation branch and compare against the
    # direct product on a short truncation of the same factors
    ev = PrimeEvaluator(CircularDomain((Circle(0j, 0.25),)), max_word_length=8)
    z, y = 0.7, 0.4
    direct = ev.omega(z, y)
    import schottky.prime as prime_mod

    old = prime_mod._LOG_SPACE_THRESHOLD
    prime_mod._LOG_SPACE_THRESHOLD = 1
    try:
        logged = ev.omega(z, y)
    finally:
        prime_mod._LOG_SPACE_THRESHOLD = old
    assert logged == pytest.approx(direct, rel=1e-12)
