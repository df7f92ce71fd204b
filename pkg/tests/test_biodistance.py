import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mmdboot.biodistance import (
    DistanceMatrix,
    MatrixKind,
    chi2_pair,
    chi2_upper_tail,
    distance_matrix,
    format_matrix,
    mmd_pair,
    mmd_sigma_pair,
    parse_matrix,
    st_mmd_pair,
    st_mmd_unclamped,
)
from mmdboot.trait_data import DataError, TraitCounts
from mmdboot.transform import SigmaKind, ThetaRow, transform_counts


def row(theta, n, kind=SigmaKind.ANALYTIC, sigma=None):
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    n = np.broadcast_to(np.asarray(n), theta.shape)
    if sigma is None:
        sigma = 1 / np.sqrt(n + 0.5)
    return ThetaRow(theta, np.broadcast_to(np.asarray(sigma, dtype=float), theta.shape), n, kind)


def test_self_distance_is_negative_then_clamped(good_counts):
    t = transform_counts(good_counts)
    a = t.row(0)
    assert mmd_pair(a, a) == pytest.approx(-2 / 13 * np.sum(a.sigma**2))
    assert st_mmd_pair(a, a) == 0.0


def test_large_n_limit():
    assert mmd_pair(row(0.5, 10**9), row(0.0, 10**9)) == pytest.approx(0.25, abs=1e-8)


def test_sigma_pair_closed_form_at_zero():
    assert mmd_sigma_pair(row(0.0, 0), row(0.0, 0)) == pytest.approx(4 * math.sqrt(2), rel=1e-15)


def test_sigma_pair_equal_sigmas():
    M, s = 7, 0.3
    a = row(np.zeros(M), 10, sigma=s)
    assert mmd_sigma_pair(a, a) == pytest.approx(math.sqrt(2 / M) * 2 * s**2, rel=1e-14)


def test_mismatches_raise():
    with pytest.raises(ValueError, match="trait count"):
        mmd_pair(row([0, 0], 5), row([0], 5))
    with pytest.raises(ValueError, match="sigma kind"):
        mmd_pair(row(0, 5), row(0, 5, SigmaKind.BOOTSTRAPPED))


def test_published_pairs(basin_counts, poor_counts):
    t = transform_counts(basin_counts)
    assert st_mmd_pair(t.row(0), t.row(1)) == pytest.approx(28.84, abs=0.005)
    assert st_mmd_pair(t.row(2), t.row(6)) == 0.0
    assert st_mmd_unclamped(t.row(2), t.row(6)) < 0
    p = transform_counts(poor_counts)
    assert st_mmd_pair(p.row(3), p.row(4)) == pytest.approx(31.05, abs=0.005)


def _chi2_oracle(x, dof):
    # closed forms of the chi-square survival function
    if dof == 1:
        return math.erfc(math.sqrt(x / 2))
    assert dof % 2 == 0
    h = x / 2
    return math.exp(-h) * sum(h**j / math.factorial(j) for j in range(dof // 2))


@pytest.mark.parametrize("dof", [1, 2, 4, 10, 26])
@pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 20.0, 60.0])
def test_chi2_tail_against_closed_form(x, dof):
    assert chi2_upper_tail(x, dof) == pytest.approx(_chi2_oracle(x, dof), rel=1e-12)


def test_chi2_unit_case():
    # theta difference equal to the combined sd, one trait
    n = 10
    a, b = row(math.sqrt(2 / (n + 0.5)), n), row(0.0, n)
    test = chi2_pair(a, b)
    assert test.chi2 == pytest.approx(1.0, rel=1e-14)
    assert test.dof == 1
    assert test.p_value == pytest.approx(0.317310507862914103, rel=1e-12)


def test_chi2_identical_rows(good_counts):
    t = transform_counts(good_counts)
    test = chi2_pair(t.row(0), t.row(0))
    assert (test.chi2, test.dof, test.p_value) == (0.0, 13, 1.0)


def test_chi2_refuses_bootstrapped():
    with pytest.raises(ValueError, match="analytic"):
        chi2_pair(row(0, 5, SigmaKind.BOOTSTRAPPED, 0.1), row(0, 5, SigmaKind.BOOTSTRAPPED, 0.1))


def test_pair_test_report_format():
    from mmdboot.biodistance import PairTest

    assert str(PairTest(101.1234, 13, 1e-15)) == "chi2=101.1234 dof=13 p=1e-15"
    assert str(PairTest(5000.0, 13, 0.0)) == "chi2=5000.0000 dof=13 p<1e-300"


@pytest.mark.parametrize("name", ["artificial_good", "artificial_poor", "basin_of_mexico"])
def test_published_matrices(name, published, request):
    counts = request.getfixturevalue({"artificial_good": "good_counts", "artificial_poor": "poor_counts",
                                      "basin_of_mexico": "basin_counts"}[name])
    d = distance_matrix(transform_counts(counts))
    assert d.kind is MatrixKind.ST_MMD
    np.testing.assert_allclose(d.values, published[name][0].values, atol=0.01)


def test_raw_matrix_keeps_negatives(basin_counts):
    d = distance_matrix(transform_counts(basin_counts), MatrixKind.RAW_MMD)
    assert d.values[2, 6] < 0
    assert np.all(np.diag(d.values) == 0)


def test_kind_must_match_sigmas(good_counts):
    with pytest.raises(ValueError):
        distance_matrix(transform_counts(good_counts), MatrixKind.ST_MMD_BOOT)


def test_zero_measured_trait_is_included():
    c = TraitCounts(("A", "B"), ("t1", "t2"), [[0, 20], [10, 20]], [[0, 5], [5, 15]], [20, 20])
    d = distance_matrix(transform_counts(c), MatrixKind.RAW_MMD)
    t = transform_counts(c)
    manual = ((t.theta[0] - t.theta[1]) ** 2 - 1 / (t.n[0] + 0.5) - 1 / (t.n[1] + 0.5)).mean()
    assert d.values[0, 1] == pytest.approx(manual)


def test_matrix_roundtrip(published):
    m = published["basin_of_mexico"][1]
    again = parse_matrix(format_matrix(m), MatrixKind.ST_MMD_BOOT)
    assert again.labels == m.labels
    np.testing.assert_array_equal(again.values, m.values)


def test_matrix_csv_layout(basin_counts):
    text = format_matrix(distance_matrix(transform_counts(basin_counts)), precision=3)
    lines = text.splitlines()
    assert lines[0] == ",Tlatilco,Teotihuacan,Epiclassic Xico,Toluca,Xaltocan,Mogotes,Postclassic Xico"
    assert lines[1].startswith("Tlatilco,0.000,28.8")


def test_parse_matrix_rejects_asymmetric():
    with pytest.raises(DataError, match="symmetric"):
        parse_matrix(",a,b\na,0,1\nb,2,0\n")


def test_matrix_permutation(published):
    m = published["artificial_good"][0]
    p = m.permuted([3, 1, 0, 2, 4, 5, 6, 7, 8, 9])
    assert p["P4", "P1"] == m["P4", "P1"]


counts_strategy = st.integers(2, 6).flatmap(
    lambda P: st.integers(1, 8).flatmap(
        lambda M: arrays(np.int64, (P, M), elements=st.integers(0, 60)).flatmap(
            lambda n: arrays(np.float64, (P, M), elements=st.floats(0, 1)).map(
                lambda f: TraitCounts(
                    tuple(f"p{j}" for j in range(P)),
                    tuple(f"t{i}" for i in range(M)),
                    n,
                    np.floor(f * n).astype(int),
                    n.max(axis=1),
                )
            )
        )
    )
)


@settings(max_examples=60, deadline=None)
@given(counts_strategy)
def test_matrix_invariants(counts):
    t = transform_counts(counts)
    for kind in (MatrixKind.ST_MMD, MatrixKind.RAW_MMD):
        d = distance_matrix(t, kind)
        assert np.array_equal(d.values, d.values.T)
        assert np.all(np.diag(d.values) == 0)
    assert np.all(distance_matrix(t).values >= 0)


def test_distance_matrix_type_validation():
    with pytest.raises(ValueError):
        DistanceMatrix(("a", "b"), [[0, -1], [-1, 0]], MatrixKind.ST_MMD)
    DistanceMatrix(("a", "b"), [[0, -1], [-1, 0]], MatrixKind.RAW_MMD)
