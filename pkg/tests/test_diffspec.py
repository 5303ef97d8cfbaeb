from math import gcd

import numpy as np
import pytest

from maxbent.models import FamilyParams
from maxbent.services import constructions, diffspec
from maxbent.services.diffspec import DeltaError, delta_row
from maxbent.services.field import ctx_build
from maxbent.utils.enums import Verdict


@pytest.mark.parametrize("a", [1, 5, 15])
def test_delta_row_of_identity(identity16, a):
    row = delta_row(identity16, a)
    assert row.histogram == {0: 15, 16: 1}
    assert row.support == [a]
    assert row.witnesses == {16: a}
    assert row.max_delta == 16


def test_delta_row_of_gold_is_apn(gold16):
    for a in range(1, 16):
        row = delta_row(gold16, a)
        assert row.histogram == {0: 8, 2: 8}
        assert row.row_sum == 16


def test_delta_row_of_binomial(binomial16):
    inside = delta_row(binomial16, 1)
    assert inside.histogram == {0: 12, 4: 4}
    assert inside.support == [0, 1, 6, 7]
    outside = delta_row(binomial16, 2)
    assert outside.histogram == {0: 8, 2: 8}


def test_delta_row_rejects_bad_shift(gold16):
    with pytest.raises(DeltaError, match="a must be nonzero"):
        delta_row(gold16, 0)
    with pytest.raises(DeltaError, match="4-bit"):
        delta_row(gold16, 16)


def test_row_sums_are_full(binomial64):
    for a, counts in diffspec.iter_rows(binomial64):
        assert counts.sum() == 64
        assert np.all(counts % 2 == 0)


def test_row_counts_agree_with_definition(f64, rng):
    F = constructions.build_G(FamilyParams(k=3, i=1, terms=[(1, 2)]), f64)
    shifts = rng.integers(1, 64, size=5)
    counts = diffspec.row_counts(F, shifts)
    for a, row in zip(shifts, counts):
        expected = np.zeros(64, dtype=np.int64)
        for x in range(64):
            expected[F.table[x ^ a] ^ F.table[x]] += 1
        assert np.array_equal(row, expected)


def test_row_frame(gold16):
    row = delta_row(gold16, 3)
    frame = diffspec.row_frame(row, gold16)
    assert list(frame.columns) == ["b_hex", "delta"]
    assert len(frame) == 8
    assert set(frame["delta"]) == {2}
    assert all(b.startswith("0x") and len(b) == 3 for b in frame["b_hex"])


@pytest.mark.parametrize(
    "fixture, delta, is_apn",
    [("gold16", 2, True), ("gold64", 2, True), ("identity16", 16, False), ("binomial16", 4, False)],
)
def test_uniformity(request, fixture, delta, is_apn):
    assert diffspec.uniformity(request.getfixturevalue(fixture)) == (delta, is_apn)


def test_ddt_histogram(gold16, monkeypatch):
    spectrum = diffspec.ddt_histogram(gold16)
    assert spectrum.counts == {0: 120, 2: 120}
    assert spectrum.is_apn
    monkeypatch.setattr(diffspec.settings, "BATCH_SIZE", 4)
    assert diffspec.ddt_histogram(gold16, workers=2) == spectrum


@pytest.mark.parametrize("k, i", [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2)])
def test_binomial_spectrum(k, i):
    report = diffspec.verify_binomial_spectrum(i, k)
    assert report.verdict == Verdict.PASS
    assert report.violations == []
    assert report.rows_checked == (1 << (2 * k)) - 1
    # for i = 0 the generic value equals 2^k, so the peak shows up off the subfield too
    assert report.peak_only_on_subfield == (i != 0)


def test_binomial_spectrum_rejects_i():
    with pytest.raises(ValueError, match="0 <= i < k"):
        diffspec.verify_binomial_spectrum(2, 2)


@pytest.mark.slow
@pytest.mark.parametrize("i", [0, 1, 2, 3])
def test_binomial_spectrum_k4(i):
    assert diffspec.verify_binomial_spectrum(i, 4).verdict == Verdict.PASS


def test_binomial_spectrum_campaign():
    report = diffspec.run_binomial_spectrum_campaign(3)
    assert report.instances == 5
    assert report.passed == 5
    assert report.verdict == Verdict.PASS


def test_delta2_anomaly_arguments():
    with pytest.raises(ValueError, match="t1 = 1"):
        diffspec.verify_delta2_anomaly(4, 2, 2)
    with pytest.raises(ValueError, match="gcd"):
        diffspec.verify_delta2_anomaly(4, 1, 3)


def test_delta2_anomaly_vacuous_for_k2():
    for t2 in (0, 2):
        report = diffspec.verify_delta2_anomaly(2, 1, t2)
        assert not report.preconditions_hold
        assert report.verdict == Verdict.VACUOUS


def test_delta2_anomaly_witness():
    ctx = ctx_build(8)
    report = diffspec.verify_delta2_anomaly(4, 1, 2, ctx)
    assert report.preconditions_hold
    assert report.verdict == Verdict.PASS
    assert report.excluded_values == [4, 16]
    a = report.witness_a
    assert ctx.relative_trace(a, 8, 4) == 1
    G = constructions.build_G(FamilyParams(k=4, i=2, terms=[(1, 1), (1, 2)]), ctx)
    assert set(delta_row(G, a).histogram) <= {0, 2}
    assert set(report.witness_b) == {2}


@pytest.mark.parametrize(
    "k, i, ts, roots",
    [(2, 1, [1], 1), (2, 1, [], 2), (2, 0, [], 4), (4, 2, [1, 2], 2), (3, 1, [2], 4)],
)
def test_root_count(k, i, ts, roots):
    assert diffspec.root_count(ctx_build(2 * k), k, i, ts) == roots


def test_general_anomaly_witness():
    report = diffspec.verify_general_anomaly(4, 2, [1, 2])
    assert report.root_count == 2
    assert report.excluded_values == [4]
    assert report.verdict == Verdict.PASS
    assert 4 not in report.witness_b


def test_general_anomaly_vacuous_when_roots_match():
    # no-root preconditions hold trivially without terms; R = 2^gcd(i, k) makes no claim
    report = diffspec.verify_general_anomaly(3, 1, [])
    assert report.preconditions_hold
    assert report.root_count == 2
    assert report.verdict == Verdict.VACUOUS


def test_anomaly_campaigns_have_no_failures():
    delta2 = diffspec.run_delta2_campaign(4)
    assert delta2.failed == 0
    assert delta2.verdict == Verdict.PASS
    general = diffspec.run_general_anomaly_campaign(3, rho_max=2)
    assert general.failed == 0
    assert general.instances > 0


@pytest.mark.slow
def test_delta2_campaign_through_k6():
    report = diffspec.run_delta2_campaign(6, workers=4)
    assert report.failed == 0
    assert report.passed > 0


@pytest.mark.slow
@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_delta2_witnesses_are_reported(k):
    for t2 in range(k + 1):
        if gcd(t2, k) == 1:
            continue
        report = diffspec.verify_delta2_anomaly(k, 1, t2)
        assert report.verdict != Verdict.FAIL
        if report.verdict == Verdict.PASS:
            assert report.witness_a is not None
            assert set(report.witness_b) <= {2}


@pytest.mark.slow
def test_general_anomaly_campaign_through_k5():
    report = diffspec.run_general_anomaly_campaign(5, rho_max=2, workers=4)
    assert report.failed == 0
    assert report.passed > 0


@pytest.mark.slow
def test_binomial_spectrum_campaign_through_k4():
    report = diffspec.run_binomial_spectrum_campaign(4)
    assert report.instances == 9
    assert report.verdict == Verdict.PASS
