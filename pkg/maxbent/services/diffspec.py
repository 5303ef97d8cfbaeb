"""
Differential spectra delta_F(a, b) = #{x : F(x + a) + F(x) = b}, computed row by row.

Full 2^n x 2^n tables are never held; rows are counted in batches with a single bincount.
"""

from itertools import combinations_with_replacement
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from maxbent import models
from maxbent.config import settings
from maxbent.services import constructions, vectorial
from maxbent.services.field import FieldCtx, ctx_build
from maxbent.services.vectorial import VecFun
from maxbent.utils.enums import Theorem, Verdict
from maxbent.utils.logging_utils import logger
from maxbent.utils.parallel_utils import chunked, parallel_map


class DeltaError(ValueError):
    pass


def row_counts(F: VecFun, shifts: Sequence[int]) -> np.ndarray:
    """counts[r, b] = delta_F(shifts[r], b)."""
    shifts = np.asarray(shifts, dtype=np.int64)
    xs = np.arange(1 << F.n, dtype=np.int64)
    derivatives = F.table[xs[None, :] ^ shifts[:, None]] ^ F.table[None, :]
    width = 1 << F.m
    offsets = np.arange(shifts.size, dtype=np.int64)[:, None] * width
    flat = np.bincount((derivatives + offsets).ravel(), minlength=shifts.size * width)
    return flat.reshape(shifts.size, width)


def iter_rows(F: VecFun, shifts: Optional[Sequence[int]] = None) -> Iterator[Tuple[int, np.ndarray]]:
    """(a, counts) for every requested a, all nonzero a by default."""
    shifts = np.arange(1, 1 << F.n, dtype=np.int64) if shifts is None else np.asarray(shifts, dtype=np.int64)
    for batch in chunked(shifts, settings.BATCH_SIZE):
        for a, counts in zip(batch, row_counts(F, batch)):
            yield int(a), counts


def _histogram(counts: np.ndarray) -> Dict[int, int]:
    values, freq = np.unique(counts, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, freq)}


def delta_row(F: VecFun, a: int) -> models.DeltaRow:
    a = int(a)
    if a == 0:
        raise DeltaError("a must be nonzero")
    if not 0 < a < 1 << F.n:
        raise DeltaError(f"a={a:#x} is not an {F.n}-bit input")
    counts = row_counts(F, [a])[0]
    histogram = _histogram(counts)
    support = np.nonzero(counts)[0]
    witnesses = {value: int(np.argmax(counts == value)) for value in histogram if value}
    return models.DeltaRow(a=a, histogram=histogram, support=support.tolist(), witnesses=witnesses)


def row_frame(row: models.DeltaRow, F: VecFun) -> pd.DataFrame:
    """The support of a row as a (b_hex, delta) table."""
    counts = row_counts(F, [row.a])[0]
    width = max(1, (F.m + 3) // 4)
    return pd.DataFrame(
        {
            "b_hex": [f"0x{int(b):0{width}x}" for b in row.support],
            "delta": [int(counts[b]) for b in row.support],
        }
    )


def _batch_summary(job: Tuple[VecFun, np.ndarray]) -> Tuple[int, Dict[int, int]]:
    F, shifts = job
    counts = row_counts(F, shifts)
    return int(counts.max()), _histogram(counts)


def _summaries(F: VecFun, workers: Optional[int]) -> List[Tuple[int, Dict[int, int]]]:
    shifts = np.arange(1, 1 << F.n, dtype=np.int64)
    jobs = [(F, batch) for batch in chunked(shifts, settings.BATCH_SIZE)]
    return parallel_map(_batch_summary, jobs, workers)


def uniformity(F: VecFun, workers: Optional[int] = None) -> Tuple[int, bool]:
    if F.n != F.m:
        raise ValueError(f"uniformity needs n = m, got ({F.n}, {F.m})")
    delta = max(peak for peak, _ in _summaries(F, workers))
    return delta, delta == 2


def ddt_histogram(F: VecFun, workers: Optional[int] = None) -> models.DifferentialSpectrum:
    """How often each delta value occurs over all a != 0 and all b."""
    totals: Dict[int, int] = {}
    delta = 0
    for peak, histogram in _summaries(F, workers):
        delta = max(delta, peak)
        for value, count in histogram.items():
            totals[value] = totals.get(value, 0) + count
    return models.DifferentialSpectrum(n=F.n, delta=delta, is_apn=delta == 2, counts=dict(sorted(totals.items())))


# === Binomial spectrum ===


def verify_binomial_spectrum(
    i: int, k: int, ctx: Optional[FieldCtx] = None, guard: Optional[int] = None, override: bool = False
) -> models.BinomialSpectrumReport:
    """
    Rows of x^(2^i)(x + x^(2^k)): a in F_{2^k}* gives values in {0, 2^k} with the peak only at
    b in F_{2^k}; any other a gives values in {0, 2^gcd(i, k)}.

    For i = 0 the generic value is 2^k as well, so the peak is not confined to the subfield.
    """
    if not 0 <= i < k:
        raise ValueError(f"binomial spectrum needs 0 <= i < k, got i={i}, k={k}")
    ctx = ctx or ctx_build(2 * k)
    vectorial.check_guard(ctx.n, guard, override)
    G = constructions.binomial(ctx, i)
    subfield = ctx.subfield_elements(k)
    in_subfield = np.zeros(ctx.order, dtype=bool)
    in_subfield[subfield] = True
    peak, generic = 1 << k, 1 << gcd(i, k)

    violations: List[str] = []
    peak_only_on_subfield = True
    rows = 0
    for a, counts in iter_rows(G):
        rows += 1
        values = set(int(v) for v in np.unique(counts))
        peak_bs = np.nonzero(counts == peak)[0]
        if in_subfield[a]:
            if not values <= {0, peak}:
                violations.append(f"a={a:#x}: values {sorted(values)} not in {{0, {peak}}}")
            if peak_bs.size and not np.all(in_subfield[peak_bs]):
                violations.append(f"a={a:#x}: delta {peak} outside the subfield")
        else:
            if not values <= {0, generic}:
                violations.append(f"a={a:#x}: values {sorted(values)} not in {{0, {generic}}}")
        if peak_bs.size and not (in_subfield[a] and np.all(in_subfield[peak_bs])):
            peak_only_on_subfield = False

    verdict = Verdict.FAIL if violations else Verdict.PASS
    if violations:
        logger.warning(f"Binomial spectrum i={i}, k={k}: {len(violations)} violating rows")
    return models.BinomialSpectrumReport(
        k=k,
        i=i,
        gcd_value=generic,
        rows_checked=rows,
        peak_only_on_subfield=peak_only_on_subfield,
        violations=violations[:20],
        verdict=verdict,
    )


# === Anomaly theorems ===


def _unit_trace_rows(G: VecFun, ctx: FieldCtx, k: int) -> Iterator[Tuple[int, np.ndarray]]:
    """Rows for a with Tr^{2k}_k(a) = 1, in increasing a."""
    traces = ctx.relative_trace_array(ctx.elements, ctx.n, k)
    return iter_rows(G, np.nonzero(traces == 1)[0])


def _witness_bs(counts: np.ndarray) -> Dict[int, int]:
    return {int(v): int(np.argmax(counts == v)) for v in np.unique(counts) if v}


def verify_delta2_anomaly(k: int, t1: int, t2: int, ctx: Optional[FieldCtx] = None) -> models.AnomalyReport:
    """
    The trinomial family with i = t2 has a row a outside F_{2^k} whose values are all 0 or 2,
    although 2 is neither 2^gcd(i, k) nor 2^k.
    """
    if t1 != 1:
        raise ValueError("the delta-2 anomaly is stated for t1 = 1 only")
    if gcd(t2, k) == 1:
        raise ValueError(f"gcd(t2, k) must exceed 1, got t2={t2}, k={k}")
    ctx = ctx or ctx_build(2 * k)
    params = models.FamilyParams(k=k, i=t2, e=k, terms=[(1, t1), (1, t2)])
    excluded = sorted({1 << gcd(t2, k), 1 << k})
    base = dict(theorem=Theorem.DELTA2_ANOMALY, k=k, i=t2, ts=[t1, t2], excluded_values=excluded)

    if not all(constructions.preconditions_hold(ctx, params)):
        logger.debug(f"delta-2 anomaly k={k}, t2={t2}: preconditions fail")
        return models.AnomalyReport(preconditions_hold=False, verdict=Verdict.VACUOUS, **base)

    G = constructions.build_G(params, ctx)
    for a, counts in _unit_trace_rows(G, ctx, k):
        if set(int(v) for v in np.unique(counts)) <= {0, 2}:
            return models.AnomalyReport(
                preconditions_hold=True, witness_a=a, witness_b=_witness_bs(counts), verdict=Verdict.PASS, **base
            )
    logger.warning(f"delta-2 anomaly k={k}, t2={t2}: no witnessing row")
    return models.AnomalyReport(preconditions_hold=True, verdict=Verdict.FAIL, **base)


def root_count(ctx: FieldCtx, k: int, i: int, ts: Sequence[int]) -> int:
    """Roots in F_{2^k} of sum_j z^(2^t_j) + z + z^(2^i); the kernel of a linear map, so a power of 2."""
    zs = ctx.subfield_elements(k)
    values = zs ^ ctx.frob_array(zs, i)
    for t in ts:
        values ^= ctx.frob_array(zs, t)
    return int(np.count_nonzero(values == 0))


def verify_general_anomaly(k: int, i: int, ts: Sequence[int], ctx: Optional[FieldCtx] = None) -> models.AnomalyReport:
    """
    When the root count R differs from 2^gcd(i, k), some a with Tr^{2k}_k(a) = 1 has a row that
    never takes the value 2^gcd(i, k). R == 2^gcd(i, k) makes no claim and is VACUOUS.
    """
    ts = [int(t) for t in ts]
    ctx = ctx or ctx_build(2 * k)
    params = models.FamilyParams(k=k, i=i, e=k, terms=[(1, t) for t in ts])
    generic = 1 << gcd(i, k)
    base = dict(theorem=Theorem.GENERAL_ANOMALY, k=k, i=i, ts=ts, excluded_values=[generic])

    if not all(constructions.preconditions_hold(ctx, params)):
        return models.AnomalyReport(preconditions_hold=False, verdict=Verdict.VACUOUS, **base)
    roots = root_count(ctx, k, i, ts)
    if roots == generic:
        return models.AnomalyReport(preconditions_hold=True, root_count=roots, verdict=Verdict.VACUOUS, **base)

    G = constructions.build_G(params, ctx)
    for a, counts in _unit_trace_rows(G, ctx, k):
        if not np.any(counts == generic):
            return models.AnomalyReport(
                preconditions_hold=True,
                root_count=roots,
                witness_a=a,
                witness_b=_witness_bs(counts),
                verdict=Verdict.PASS,
                **base,
            )
    logger.warning(f"general anomaly k={k}, i={i}, ts={ts}: no witnessing row")
    return models.AnomalyReport(preconditions_hold=True, root_count=roots, verdict=Verdict.FAIL, **base)


# === Campaigns ===


def _delta2_instance(job: Tuple[int, int]) -> Tuple[str, str]:
    k, t2 = job
    return f"k={k},t1=1,t2={t2}", verify_delta2_anomaly(k, 1, t2).verdict


def run_delta2_campaign(kmax: int, kmin: int = 2, workers: Optional[int] = None) -> models.CampaignReport:
    jobs = [(k, t2) for k in range(kmin, kmax + 1) for t2 in range(k + 1) if gcd(t2, k) != 1]
    report = models.CampaignReport(campaign=Theorem.DELTA2_ANOMALY.value)
    for label, verdict in parallel_map(_delta2_instance, jobs, workers):
        report.record(label, verdict, rho=2)
    logger.info(f"delta-2 anomaly campaign: {report.passed} PASS, {report.failed} FAIL, {report.vacuous} VACUOUS")
    return report.close()


def _general_instance(job: Tuple[int, int, Tuple[int, ...]]) -> Tuple[str, str, int]:
    k, i, ts = job
    label = f"k={k},i={i},ts={list(ts)}"
    return label, verify_general_anomaly(k, i, ts).verdict, len(ts)


def run_general_anomaly_campaign(
    kmax: int, kmin: int = 2, rho_max: int = 2, workers: Optional[int] = None
) -> models.CampaignReport:
    jobs = [
        (k, i, ts)
        for k in range(kmin, kmax + 1)
        for i in range(k)
        for rho in range(1, min(rho_max, k) + 1)
        for ts in combinations_with_replacement(range(k + 1), rho)
    ]
    report = models.CampaignReport(campaign=Theorem.GENERAL_ANOMALY.value)
    for label, verdict, rho in parallel_map(_general_instance, jobs, workers):
        report.record(label, verdict, rho=rho)
    logger.info(f"general anomaly campaign: {report.passed} PASS, {report.failed} FAIL, {report.vacuous} VACUOUS")
    return report.close()


def run_binomial_spectrum_campaign(kmax: int, kmin: int = 2) -> models.CampaignReport:
    report = models.CampaignReport(campaign=Theorem.BINOMIAL_DIFF.value)
    for k in range(kmin, kmax + 1):
        for i in range(k):
            report.record(f"k={k},i={i}", verify_binomial_spectrum(i, k).verdict)
    return report.close()
