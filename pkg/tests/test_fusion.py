import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conservafuse.admissible import rank_one_cross_cov, sample_cross_cov
from conservafuse.errors import (
    DegenerateSplit,
    DimensionMismatch,
    GainConstraintViolated,
    NotPositiveSemiDefinite,
    OmegaOutOfRange,
    ParameterOutOfRange,
    SingularR,
)
from conservafuse.fusion import (
    FusionGains,
    SplitEstimate,
    bar_shalom_campo,
    ci_bound,
    fused_covariance,
    information_fusion,
    optimal_covariance_forms,
    rho_bound,
    rho_bound_gamma,
    sci_bound,
)
from conservafuse.instances import REF_B_F, REF_C_A, REF_C_B, REF_PAB0, figure_directions
from conservafuse.spd import loewner_leq

from conftest import min_eig, split_pairs

OMEGAS = np.linspace(0, 1, 11)


def block_oracle(K_A, K_B, C_A, C_B, P_AB):
    """Fused covariance through the joint covariance of the stacked errors."""
    K = np.hstack([K_A, K_B])
    joint = np.block([[C_A, P_AB], [P_AB.T, C_B]])
    return K @ joint @ K.T


def scalar(c):
    return SplitEstimate.from_covariance([[c]])


# ---- SplitEstimate / FusionGains --------------------------------------------


def test_split_estimate_rejects_bad_parts():
    with pytest.raises(NotPositiveSemiDefinite):
        SplitEstimate(np.eye(2), -np.eye(2))
    with pytest.raises(DimensionMismatch):
        SplitEstimate(np.eye(2), np.eye(3))
    with pytest.raises(DimensionMismatch):
        SplitEstimate(np.eye(2), np.eye(2), mean=[1.0, 2.0, 3.0])


def test_gain_constraint():
    with pytest.raises(GainConstraintViolated):
        FusionGains(np.eye(2), np.eye(2))
    g = FusionGains.from_K_A(0.3 * np.eye(2))
    np.testing.assert_allclose(g.K_B, 0.7 * np.eye(2))


# ---- fused_covariance --------------------------------------------------------


def test_selector_gain_returns_first_covariance(ref_pair):
    a, b = ref_pair
    C = fused_covariance(FusionGains(np.eye(2), np.zeros((2, 2))), a, b, REF_PAB0)
    np.testing.assert_allclose(C, REF_C_A)


def test_halves_uncorrelated(ref_pair):
    a, b = ref_pair
    C = fused_covariance(FusionGains(np.eye(2) / 2, np.eye(2) / 2), a, b, np.zeros((2, 2)))
    np.testing.assert_allclose(C, [[3.75, 0.25], [0.25, 2.75]], atol=1e-15)


@pytest.mark.parametrize("x", list(figure_directions()))
def test_rank_one_fused_covariances_below_six(ref_pair, x):
    a, b = ref_pair
    pab = rank_one_cross_cov(a.P, b.P, x)
    C = fused_covariance(FusionGains(np.eye(2) / 2, np.eye(2) / 2), a, b, pab)
    assert min_eig(REF_B_F - C) >= -1e-9


@given(split_pairs(), st.integers(0, 10_000), st.floats(-2, 2))
def test_fused_covariance_matches_block_form(pair, seed, k):
    a, b = pair
    n = a.dim
    K_A = k * np.eye(n) + 0.1 * np.random.default_rng(seed).standard_normal((n, n))
    gains = FusionGains.from_K_A(K_A)
    pab = sample_cross_cov(a.P, b.P, seed).matrix
    got = fused_covariance(gains, a, b, pab)
    want = block_oracle(gains.K_A, gains.K_B, a.C, b.C, pab)
    np.testing.assert_allclose(got, want, atol=1e-9 * max(1, np.abs(want).max()))


# ---- Bar-Shalom-Campo --------------------------------------------------------


def test_bsc_scalar_uncorrelated():
    r = bar_shalom_campo(scalar(2.0), scalar(2.0), [[0.0]])
    np.testing.assert_allclose(r.bound, [[1.0]])
    np.testing.assert_allclose(r.gains.K_A, [[0.5]])


def test_bsc_fully_correlated_selects_better():
    a = SplitEstimate.from_covariance(np.eye(2))
    b = SplitEstimate.from_covariance(2 * np.eye(2))
    r = bar_shalom_campo(a, b, np.eye(2))
    np.testing.assert_allclose(r.gains.K_A, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(r.gains.K_B, 0, atol=1e-15)
    np.testing.assert_allclose(r.bound, np.eye(2), atol=1e-15)


def test_bsc_uncorrelated_is_information_form(ref_pair):
    a, b = ref_pair
    want = np.linalg.inv(np.linalg.inv(REF_C_A) + np.linalg.inv(REF_C_B))
    np.testing.assert_allclose(bar_shalom_campo(a, b, np.zeros((2, 2))).bound, want, rtol=1e-13)


def test_bsc_reference_cross_covariance(ref_pair):
    # exact rational value from a symbolic evaluation
    a, b = ref_pair
    want = np.array([[858, -132], [-132, 793]]) / 451
    np.testing.assert_allclose(bar_shalom_campo(a, b, REF_PAB0).bound, want, rtol=1e-14)


def test_bsc_singular_R():
    e = SplitEstimate.from_covariance(np.eye(2))
    with pytest.raises(SingularR):
        bar_shalom_campo(e, e, np.eye(2))


@given(split_pairs(), st.integers(0, 10_000))
def test_bsc_is_loewner_minimal(pair, seed):
    a, b = pair
    n = a.dim
    pab = sample_cross_cov(a.P, b.P, seed).matrix
    best = bar_shalom_campo(a, b, pab).bound
    K_A = np.random.default_rng(seed).standard_normal((n, n))
    other = fused_covariance(FusionGains.from_K_A(K_A), a, b, pab)
    assert min_eig(other - best) >= -1e-9 * max(1, np.abs(other).max())


def test_forms_uncorrelated(ref_pair):
    a, b = ref_pair
    want = np.array([[265, -5], [-5, 325]]) / 164
    for F in optimal_covariance_forms(a, b, np.zeros((2, 2))):
        np.testing.assert_allclose(F, want, rtol=1e-14)


def test_forms_identity_rank_one(identity_pair):
    a, b = identity_pair
    for F in optimal_covariance_forms(a, b, np.diag([1.0, 0.0])):
        np.testing.assert_allclose(F, np.diag([1.5, 1.0]), atol=1e-15)


@given(split_pairs(), st.integers(0, 10_000))
def test_forms_agree(pair, seed):
    a, b = pair
    pab = sample_cross_cov(a.P, b.P, seed).matrix
    fa, fb, fab = optimal_covariance_forms(a, b, pab)
    s = max(1, np.abs(fa).max())
    assert np.abs(fa - fb).max() <= 1e-9 * s
    assert np.abs(fa - fab).max() <= 1e-9 * s


# ---- information fusion / CI -------------------------------------------------


def test_if_scalar():
    np.testing.assert_allclose(information_fusion(scalar(2.0), scalar(2.0)).bound, [[1.0]])


def test_if_mean_average():
    a = SplitEstimate.from_covariance(np.eye(2), mean=[1.0, 0.0])
    b = SplitEstimate.from_covariance(np.eye(2), mean=[0.0, 1.0])
    r = information_fusion(a, b)
    np.testing.assert_allclose(r.bound, np.eye(2) / 2)
    np.testing.assert_allclose(r.mean, [0.5, 0.5])


def test_if_strictly_below_inputs(ref_pair):
    a, b = ref_pair
    B = information_fusion(a, b).bound
    assert min_eig(REF_C_A - B) > 0 and min_eig(REF_C_B - B) > 0


@pytest.mark.parametrize("w, want", [(0.0, REF_C_B), (1.0, REF_C_A)])
def test_ci_endpoints(w, want):
    np.testing.assert_allclose(ci_bound(REF_C_A, REF_C_B, w).bound, want, rtol=1e-14)


@pytest.mark.parametrize("w", OMEGAS)
def test_ci_equal_scalars(w):
    np.testing.assert_allclose(ci_bound([[3.0]], [[3.0]], w).bound, [[3.0]], rtol=1e-15)


def test_ci_omega_range():
    with pytest.raises(OmegaOutOfRange):
        ci_bound(REF_C_A, REF_C_B, 1.5)


# ---- SCI ---------------------------------------------------------------------


def test_sci_endpoints_exact(ref_pair):
    a, b = ref_pair
    np.testing.assert_array_equal(sci_bound(a, b, 0.0).bound, [[13, 2], [2, 3]])
    np.testing.assert_array_equal(sci_bound(a, b, 1.0).bound, [[2, -1], [-1, 8]])


def test_sci_scalar_half():
    e = SplitEstimate([[1.0]], [[1.0]])
    np.testing.assert_allclose(sci_bound(e, e, 0.5).bound, [[1.5]], rtol=1e-15)


@pytest.mark.parametrize("w", OMEGAS)
def test_sci_without_uncorrelated_part_is_ci(w):
    P_A, P_B = np.array([[2.0, 0.3], [0.3, 1.0]]), np.array([[1.0, -0.2], [-0.2, 3.0]])
    a, b = SplitEstimate.from_covariance(P_A), SplitEstimate.from_covariance(P_B)
    np.testing.assert_allclose(sci_bound(a, b, w).bound, ci_bound(P_A, P_B, w).bound, atol=1e-12)


def test_sci_degenerate_endpoint():
    a = SplitEstimate(np.zeros((2, 2)), np.eye(2))
    b = SplitEstimate(np.eye(2), np.eye(2))
    with pytest.raises(DegenerateSplit):
        sci_bound(a, b, 0.0)
    sci_bound(a, b, 0.5)


@given(split_pairs(), st.floats(0.01, 0.99), st.integers(0, 10_000))
def test_sci_bound_is_conservative(pair, w, seed):
    a, b = pair
    r = sci_bound(a, b, w)
    pab = sample_cross_cov(a.P, b.P, seed).matrix
    C = fused_covariance(r.gains, a, b, pab)
    assert min_eig(r.bound - C) >= -1e-9 * max(1, np.abs(r.bound).max())


@given(split_pairs(), st.floats(0.01, 0.99))
def test_sci_bound_equals_analytic_majorant(pair, w):
    # (1/w) K_A P_A K_A' + (1/(1-w)) K_B P_B K_B' + K_A Q_A K_A' + K_B Q_B K_B'
    a, b = pair
    r = sci_bound(a, b, w)
    K_A, K_B = r.gains.K_A, r.gains.K_B
    M = K_A @ (a.P / w + a.Q) @ K_A.T + K_B @ (b.P / (1 - w) + b.Q) @ K_B.T
    np.testing.assert_allclose(M, r.bound, atol=1e-9 * max(1, np.abs(M).max()))


def test_sci_swap_symmetry(ref_pair):
    a, b = ref_pair
    np.testing.assert_allclose(sci_bound(a, b, 0.3).bound, sci_bound(b, a, 0.7).bound, rtol=1e-12)


# ---- rho family --------------------------------------------------------------


def test_rho_zero_is_if():
    want = np.array([[265, -5], [-5, 325]]) / 164
    np.testing.assert_allclose(rho_bound(REF_C_A, REF_C_B, 0.0, 0.5).bound, want, rtol=1e-13)


@pytest.mark.parametrize("w", OMEGAS)
def test_rho_one_is_ci(w):
    np.testing.assert_allclose(
        rho_bound(REF_C_A, REF_C_B, 1.0, w).bound, ci_bound(REF_C_A, REF_C_B, w).bound, rtol=1e-13
    )


@given(st.floats(0.0, 1.0), st.floats(0.01, 0.99))
def test_rho_parameterizations_agree(rho, w):
    b1 = rho_bound(REF_C_A, REF_C_B, rho, w).bound
    b2 = rho_bound_gamma(REF_C_A, REF_C_B, rho, (1 - w) / w).bound
    np.testing.assert_allclose(b1, b2, atol=1e-10 * np.abs(b1).max())


@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_rho_bound_matches_sci_of_rho_split(rho, w):
    a = SplitEstimate.from_rho(REF_C_A, rho)
    b = SplitEstimate.from_rho(REF_C_B, rho)
    try:
        s = sci_bound(a, b, w).bound
    except DegenerateSplit:
        return
    np.testing.assert_allclose(rho_bound(REF_C_A, REF_C_B, rho, w).bound, s, atol=1e-9 * np.abs(s).max())


def test_rho_range():
    with pytest.raises(ParameterOutOfRange):
        rho_bound(REF_C_A, REF_C_B, 1.2, 0.5)


def test_fig3_cross_covariance_improves_on_halves(ref_pair):
    a, b = ref_pair
    best = bar_shalom_campo(a, b, REF_PAB0).bound
    halves = fused_covariance(FusionGains(np.eye(2) / 2, np.eye(2) / 2), a, b, REF_PAB0)
    np.testing.assert_allclose(halves, [[19 / 4, -7 / 8], [-7 / 8, 9 / 4]], rtol=1e-14)
    assert loewner_leq(best, halves)
