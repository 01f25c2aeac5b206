import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from noma_crs.channel import (
    RngStream, pdf_w, pdf_w_continuous_mass, pdf_y, pdf_z, sample_draw, sample_draws,
)
from noma_crs.errors import DomainError, UnsupportedProtocolError
from noma_crs.model import EhProtocol, PowerBudget, SystemParams, power_budget
from noma_crs.quadrature import integrate

from conftest import FIG4, make_params

UNIT = (1.0, 1.0, 1.0)


def unit_params(alpha=0.2, protocol=None):
    return make_params(UNIT, alpha=alpha, snr_db=10.0, protocol=protocol)


def test_sample_draw_deterministic():
    p = make_params()
    a = sample_draw(p, RngStream(seed=5, stream_index=17))
    b = sample_draw(p, RngStream(seed=5, stream_index=17))
    assert a == b
    assert a != sample_draw(p, RngStream(seed=5, stream_index=18))
    assert a != sample_draw(p, RngStream(seed=6, stream_index=17))


def test_single_draw_matches_batch_and_chunking():
    p = make_params()
    batch = sample_draws(p, 11, 1000)
    d = sample_draw(p, RngStream(11, 537))
    assert d.gamma_rd == batch.gamma_rd[537]
    tail = sample_draws(p, 11, 200, start=800)
    np.testing.assert_array_equal(tail.gamma_sr, batch.gamma_sr[800:])


def test_exponential_mean():
    p = make_params((2.0, 1.0, 1.0))
    g = sample_draws(p, 3, 10**6).gamma_sr
    assert abs(g.mean() - 2.0) < 0.01


def test_exponential_tail():
    p = make_params((1.0, 3.0, 1.0))
    g = sample_draws(p, 4, 10**6).gamma_sd
    assert abs(np.mean(g > 3.0) - np.exp(-1)) < 0.005


def test_sample_moments_within_three_standard_errors():
    p = make_params(FIG4)
    d = sample_draws(p, 99, 400_000)
    n = d.gamma_sr.size
    for g, s2 in ((d.gamma_sr, p.sigma2_sr), (d.gamma_sd, p.sigma2_sd), (d.gamma_rd, p.sigma2_rd)):
        assert g.min() >= 0
        assert abs(g.mean() - s2) < 3 * s2 / np.sqrt(n)
        # Var of exponential is s2^2; the sample variance has sd ~ sqrt(8) s2^2 / sqrt(n)
        assert abs(g.var() - s2**2) < 3 * np.sqrt(8) * s2**2 / np.sqrt(n)


def test_links_independent():
    d = sample_draws(make_params(UNIT), 1, 200_000)
    c = np.corrcoef([d.gamma_sr, d.gamma_sd, d.gamma_rd])
    assert np.all(np.abs(c[np.triu_indices(3, 1)]) < 0.01)


def test_pdf_y_values():
    p = unit_params()
    assert pdf_y(0.0, p) == pytest.approx(2.0)
    assert pdf_y(1.0, p) == pytest.approx(2 * np.exp(-2), rel=1e-12)
    with pytest.raises(DomainError):
        pdf_y(-0.1, p)


def test_pdf_y_normalised():
    p = make_params(FIG4)
    total = integrate(lambda y: pdf_y(y, p), 0.0, 1e3, rel_tol=1e-12,
                      breakpoints=[1, 10, 100]).value
    assert abs(total - 1.0) < 1e-8


def w_params(cap=0.1, scale=0.1):
    """Params and budget with alpha*p = cap and upsilon*sigma2_rd = scale."""
    p = SystemParams(1.0, 1.0, 1.0, alpha=cap, snr_total=10.0, protocol=EhProtocol.ideal())
    return p, PowerBudget(p_source=20.0, p_factor=1.0, zeta=0.5, upsilon=scale)


def test_pdf_w_atom():
    p, b = w_params(0.1, 0.1)
    atom, _ = pdf_w(0.05, p, b)
    assert atom == pytest.approx(np.exp(-1), rel=1e-12)
    _, above = pdf_w(0.2, p, b)
    assert above == 0.0


def test_pdf_w_total_probability():
    for cap, scale in [(0.1, 0.1), (0.2, 0.95), (0.07, 0.02375), (0.45, 9.5)]:
        p, b = w_params(cap, scale)
        atom, _ = pdf_w(0.0, p, b)
        cont = pdf_w_continuous_mass(p, b)
        assert 0 < atom < 1
        assert atom + cont == pytest.approx(1.0, abs=2e-16)
        numeric = integrate(lambda w: pdf_w(w, p, b)[1], 0.0, cap, rel_tol=1e-12).value
        assert numeric == pytest.approx(cont, rel=1e-10)


def test_pdf_w_rejects_benchmark():
    p = unit_params(protocol=EhProtocol.benchmark())
    with pytest.raises(UnsupportedProtocolError):
        pdf_w(0.1, p, power_budget(p))
    with pytest.raises(UnsupportedProtocolError):
        pdf_z(0.1, p, power_budget(p))


def test_pdf_z_domain():
    p = unit_params()
    with pytest.raises(DomainError):
        pdf_z(0.0, p, power_budget(p))
    with pytest.raises(DomainError):
        pdf_z(-1.0, p, power_budget(p))


@pytest.mark.parametrize("protocol", [EhProtocol.ideal(), EhProtocol.power_sharing(0.3),
                                      EhProtocol.time_sharing(0.1)])
@pytest.mark.parametrize("variances", [UNIT, FIG4])
def test_pdf_z_normalised(protocol, variances):
    p = make_params(variances, alpha=0.2, protocol=protocol)
    b = power_budget(p)
    total = integrate(lambda z: pdf_z(z, p, b), 0.0, 1e3, rel_tol=1e-8,
                      breakpoints=[1e-8, 1e-6, 1e-4, 1e-2, 1, 10, 100]).value
    assert abs(total - 1.0) < 1e-4


def test_pdf_z_matches_change_of_variables():
    # f_Z(z) = E_W[f_gamma_sr(z / W) / W], evaluated with the atom split out
    p = make_params(FIG4, alpha=0.2, protocol=EhProtocol.power_sharing(0.3))
    b = power_budget(p)
    cap, scale, s = p.alpha * b.p_factor, b.upsilon * p.sigma2_rd, p.sigma2_sr
    for z in (1e-3, 0.05, 0.7, 4.0):
        def integrand(w):
            return pdf_w(w, p, b)[1] * np.exp(-z / (s * w)) / (s * w)
        cont = integrate(integrand, 0.0, cap, rel_tol=1e-11,
                         breakpoints=np.geomspace(cap * 1e-9, cap, 12)[:-1]).value
        atom = pdf_w(0.0, p, b)[0] * np.exp(-z / (s * cap)) / (s * cap)
        assert pdf_z(z, p, b) == pytest.approx(atom + cont, rel=1e-7)


@pytest.mark.parametrize("protocol,alpha", [
    (EhProtocol.ideal(), 0.2), (EhProtocol.power_sharing(0.3), 0.1),
    (EhProtocol.time_sharing(0.1), 0.2),
])
def test_pdf_z_matches_histogram(protocol, alpha):
    p = make_params(FIG4, alpha=alpha, protocol=protocol)
    b = power_budget(p)
    d = sample_draws(p, 2024, 10**6)
    z = d.gamma_sr * np.minimum(alpha * b.p_factor, b.upsilon * d.gamma_rd)
    for z0 in (0.01, 0.1, 1.0):
        h = 0.1
        est = np.mean((z > z0 * (1 - h)) & (z < z0 * (1 + h))) / (2 * h * z0)
        assert est == pytest.approx(pdf_z(z0, p, b), rel=0.05)


def test_pdf_z_large_harvest_limit():
    p = unit_params()
    b = PowerBudget(p_source=20.0, p_factor=1.0, zeta=0.5, upsilon=1e12)
    cap = p.alpha
    for z in (0.01, 0.3, 2.0):
        expected = np.exp(-z / (cap * p.sigma2_sr)) / (cap * p.sigma2_sr)
        assert pdf_z(z, p, b) == pytest.approx(expected, rel=1e-6)


def test_pdf_z_near_zero_is_finite():
    p = unit_params()
    b = power_budget(p)
    vals = pdf_z(np.array([1e-12, 1e-9, 1e-6]), p, b)
    assert np.all(np.isfinite(vals)) and np.all(np.diff(vals) < 0)
    first_term_limit = np.exp(-p.alpha / (b.upsilon * p.sigma2_rd)) / (p.alpha * p.sigma2_sr)
    assert np.all(vals > first_term_limit)


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-4, 50.0), st.floats(0.01, 0.49), st.floats(0.05, 1.0))
def test_densities_nonnegative(z, alpha, eta):
    p = make_params(FIG4, alpha=alpha, eta=eta, protocol=EhProtocol.power_sharing(0.2))
    b = power_budget(p)
    assert pdf_z(z, p, b) >= 0
    assert pdf_y(z, p) >= 0
    atom, dens = pdf_w(z * alpha / 50, p, b)
    assert 0 < atom < 1 and dens >= 0
