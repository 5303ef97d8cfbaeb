"""
(n, m)-functions as value tables: components, bent-component census, amplitude histograms,
fourth moments and the APN-plateaued exclusion check.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from maxbent import models
from maxbent.config import settings
from maxbent.services.boolfun import BoolFun, amplitude_from_magnitudes, fwht
from maxbent.services.field import FieldCtx, parity
from maxbent.utils import gf2_utils
from maxbent.utils.enums import Verdict
from maxbent.utils.logging_utils import logger
from maxbent.utils.parallel_utils import chunked, parallel_map


class CensusTooLarge(RuntimeError):
    """Raised when an exhaustive census would exceed the configured guard."""

    pass


class NotPlateauedError(ValueError):
    def __init__(self, offending: Sequence[int]):
        self.offending = [int(v) for v in offending]
        preview = ", ".join(f"{v:#x}" for v in self.offending[:8])
        more = "" if len(self.offending) <= 8 else f" (+{len(self.offending) - 8} more)"
        super().__init__(f"not plateaued: components v = {preview}{more}")


@dataclass(frozen=True, eq=False)
class VecFun:
    """
    F: F_2^n -> F_2^m as the table of F(x) for every encoded x.

    With m == n and a field context, components are x -> Tr(v F(x)); otherwise outputs are
    plain m-bit vectors and components use the dot product v.F(x).
    """

    n: int
    m: int
    table: np.ndarray
    ctx: Optional[FieldCtx] = None

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64)
        if table.shape != (1 << self.n,):
            raise ValueError(f"table length {table.size} does not match n={self.n}")
        if table.size and (table.min() < 0 or table.max() >= 1 << self.m):
            raise ValueError(f"outputs must be {self.m}-bit values")
        object.__setattr__(self, "table", table)
        if self.ctx is not None and self.ctx.n != self.n:
            raise ValueError(f"field degree {self.ctx.n} does not match n={self.n}")

    def __eq__(self, other):
        return (
            isinstance(other, VecFun)
            and (self.n, self.m) == (other.n, other.m)
            and np.array_equal(self.table, other.table)
        )

    @property
    def uses_trace_form(self) -> bool:
        return self.ctx is not None and self.m == self.n

    def component_masks(self, vs: np.ndarray) -> np.ndarray:
        vs = np.asarray(vs, dtype=np.int64)
        if self.uses_trace_form:
            return self.ctx.trace_masks[vs]
        return vs

    def is_permutation(self) -> bool:
        return self.n == self.m and np.unique(self.table).size == self.table.size

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "VecFun":
        return cls(ctx.n, ctx.n, ctx.elements.copy(), ctx)


def from_univariate(ctx: FieldCtx, terms: Iterable[Tuple[int, int]]) -> VecFun:
    """
    Evaluate sum_j c_j x^(d_j) over the whole field.

    Exponents 2^i are pure Frobenius; 2^i + 2^j are a product of two Frobenius images; other
    exponents go through the power table.
    """
    xs = ctx.elements
    total = np.zeros(ctx.order, dtype=np.int64)
    for coeff, exponent in terms:
        coeff, exponent = ctx.check(coeff), int(exponent)
        if not 0 <= exponent < ctx.order:
            raise ValueError(f"exponent {exponent} outside [0, 2^{ctx.n} - 1]")
        if coeff == 0:
            continue
        weight = bin(exponent).count("1")
        if weight == 1:
            values = ctx.frob_array(xs, exponent.bit_length() - 1)
        elif weight == 2:
            low = (exponent & -exponent).bit_length() - 1
            high = exponent.bit_length() - 1
            values = ctx.mul_array(ctx.frob_array(xs, low), ctx.frob_array(xs, high))
        else:
            values = ctx.power_array(xs, exponent)
        total ^= ctx.mul_array(coeff, values)
    return VecFun(ctx.n, ctx.n, total, ctx)


def gold(ctx: FieldCtx, i: int = 1) -> VecFun:
    """x^(2^i + 1)."""
    return from_univariate(ctx, [(1, (1 << i) + 1)])


def coordinate_functions(F: VecFun) -> List[BoolFun]:
    """Output bit j of F as a Boolean function, j = 0 .. m-1."""
    return [BoolFun(F.n, ((F.table >> j) & 1).astype(np.uint8), F.ctx) for j in range(F.m)]


def from_coordinates(functions: Sequence[BoolFun], ctx: Optional[FieldCtx] = None) -> VecFun:
    """The (n, m)-function whose output bit j is functions[j]."""
    if not functions:
        raise ValueError("no coordinate functions given")
    n = functions[0].n
    if any(f.n != n for f in functions):
        raise ValueError("coordinate functions must share n")
    table = np.zeros(1 << n, dtype=np.int64)
    for j, f in enumerate(functions):
        table |= f.tt.astype(np.int64) << j
    return VecFun(n, len(functions), table, ctx)


def component(F: VecFun, v: int) -> BoolFun:
    if not 0 <= int(v) < 1 << F.m:
        raise ValueError(f"v={v:#x} is not an {F.m}-bit output mask")
    mask = F.component_masks(np.array([v]))[0]
    return BoolFun(F.n, parity(F.table & mask), F.ctx)


# === Component profiles ===


@dataclass
class ComponentProfile:
    """|W| histogram of one component v.F and everything derived from it."""

    v: int
    magnitudes: Dict[int, int] = field(default_factory=dict)

    def is_bent(self, n: int) -> bool:
        return n % 2 == 0 and set(self.magnitudes) == {1 << (n // 2)}

    def amplitude(self, n: int) -> Optional[int]:
        return amplitude_from_magnitudes(n, self.magnitudes)

    @property
    def max_abs(self) -> int:
        return max(self.magnitudes)

    @property
    def fourth_moment(self) -> int:
        return sum(count * magnitude**4 for magnitude, count in self.magnitudes.items())


def _profile_batch(job: Tuple[VecFun, np.ndarray]) -> List[ComponentProfile]:
    F, vs = job
    masks = F.component_masks(vs)
    signs = 1 - 2 * parity(F.table[None, :] & masks[:, None]).astype(np.int64)
    spectra = np.abs(fwht(signs))
    profiles = []
    for v, row in zip(vs, spectra):
        mags, counts = np.unique(row, return_counts=True)
        profiles.append(ComponentProfile(int(v), {int(a): int(c) for a, c in zip(mags, counts)}))
    return profiles


def component_profiles(
    F: VecFun, vs: Optional[Sequence[int]] = None, workers: Optional[int] = None
) -> List[ComponentProfile]:
    """Profiles for the requested v (all 2^m by default), in input order whatever the worker count."""
    vs = np.arange(1 << F.m, dtype=np.int64) if vs is None else np.asarray(vs, dtype=np.int64)
    jobs = [(F, batch) for batch in chunked(vs, settings.BATCH_SIZE)]
    profiles: List[ComponentProfile] = []
    for batch in parallel_map(_profile_batch, jobs, workers):
        profiles.extend(batch)
    return profiles


def check_guard(n: int, guard: Optional[int] = None, override: bool = False):
    guard = settings.CENSUS_GUARD if guard is None else guard
    if n > guard and not override:
        raise CensusTooLarge(f"census too large: n={n} exceeds guard {guard} (use override)")


# === Census and histograms ===


def max_bent_count(n: int) -> int:
    return (1 << n) - (1 << (n // 2))


def bent_census(
    F: VecFun, guard: Optional[int] = None, override: bool = False, workers: Optional[int] = None
) -> models.CensusReport:
    if F.n != F.m or F.n % 2:
        raise ValueError(f"census needs n = m even, got ({F.n}, {F.m})")
    check_guard(F.n, guard, override)
    profiles = component_profiles(F, workers=workers)
    nonbent = sorted(p.v for p in profiles if not p.is_bent(F.n))
    bent_count = len(profiles) - len(nonbent)
    report = models.CensusReport(
        n=F.n,
        bent_count=bent_count,
        nonbent_set=nonbent,
        is_subspace=gf2_utils.is_subspace(nonbent),
        is_max=bent_count == max_bent_count(F.n),
    )
    logger.info(f"Census n={F.n}: {bent_count} bent components, max={report.is_max}")
    return report


def sampled_census(F: VecFun, size: Optional[int] = None, seed: Optional[int] = None) -> models.SampledCensusReport:
    """Estimate the bent fraction from a random subset of v; never used for verdicts."""
    size = settings.SAMPLED_CENSUS_SIZE if size is None else size
    seed = settings.DEFAULT_SEED if seed is None else seed
    rng = np.random.Generator(np.random.Philox(seed))
    total = 1 << F.m
    vs = np.sort(rng.choice(total, size=min(size, total), replace=False)).astype(np.int64)
    profiles = component_profiles(F, vs)
    bent = sum(p.is_bent(F.n) for p in profiles)
    logger.warning(f"Sampled census on n={F.n}: {bent}/{len(vs)} sampled components bent (estimate only)")
    return models.SampledCensusReport(
        n=F.n,
        sample_size=len(vs),
        seed=seed,
        bent_in_sample=bent,
        estimated_bent_count=round(bent * total / len(vs)),
    )


def is_vectorial_bent(F: VecFun, guard: Optional[int] = None, override: bool = False) -> bool:
    """Every nonzero component bent (the (n, m)-bent notion, m <= n/2)."""
    check_guard(F.n, guard, override)
    profiles = component_profiles(F, np.arange(1, 1 << F.m))
    return all(p.is_bent(F.n) for p in profiles)


def nonlinearity(F: VecFun) -> int:
    """min over nonzero v of nl(v.F)."""
    profiles = component_profiles(F, np.arange(1, 1 << F.m))
    return (1 << (F.n - 1)) - max(p.max_abs for p in profiles) // 2


def amplitude_histogram(F: VecFun, workers: Optional[int] = None) -> models.AmplitudeHistogram:
    """N_t = number of v (v = 0 included) whose component is t-plateaued."""
    profiles = component_profiles(F, workers=workers)
    amplitudes = [(p.v, p.amplitude(F.n)) for p in profiles]
    offending = [v for v, t in amplitudes if t is None]
    if offending:
        raise NotPlateauedError(offending)
    counts: Dict[int, int] = {}
    for _, t in amplitudes:
        counts[t] = counts.get(t, 0) + 1
    return models.AmplitudeHistogram(n=F.n, counts=dict(sorted(counts.items())))


def fourth_moment(F: VecFun, workers: Optional[int] = None) -> int:
    """sum over all u, v (v = 0 included) of W_F(u, v)^4, as an exact integer."""
    if F.n != F.m:
        raise ValueError("fourth moment needs n = m")
    return sum(p.fourth_moment for p in component_profiles(F, workers=workers))


def apn_fourth_moment(n: int) -> int:
    return (1 << (3 * n)) * (3 * (1 << n) - 2)


def verify_apn_plateaued_exclusion(F: VecFun, workers: Optional[int] = None) -> models.ApnExclusionReport:
    """
    APN functions whose components are all plateaued never have 2^n - 2^(n/2) bent components.

    Hypotheses are evaluated on F; when both hold, N_0 = 2 (mod 4) and is_max = False are
    checked, otherwise the report is VACUOUS and carries what could be computed.
    """
    from maxbent.services.diffspec import uniformity

    if F.n != F.m or F.n < 4 or F.n % 2:
        raise ValueError(f"APN-plateaued check needs n = m even and >= 4, got ({F.n}, {F.m})")
    delta, is_apn = uniformity(F, workers=workers)
    profiles = component_profiles(F, workers=workers)
    amplitudes = {p.v: p.amplitude(F.n) for p in profiles}
    plateaued = all(t is not None for t in amplitudes.values())
    histogram: Dict[int, int] = {}
    for t in amplitudes.values():
        if t is not None:
            histogram[t] = histogram.get(t, 0) + 1
    n0 = histogram.get(0, 0)
    moment = sum(p.fourth_moment for p in profiles)
    weighted = sum(count << t for t, count in histogram.items()) if plateaued else None
    is_max = n0 == max_bent_count(F.n)

    if is_apn and plateaued:
        holds = n0 % 4 == 2 and not is_max and weighted == 3 * (1 << F.n) - 2 and moment == apn_fourth_moment(F.n)
        verdict = Verdict.PASS if holds else Verdict.FAIL
    else:
        verdict = Verdict.VACUOUS
    if verdict == Verdict.FAIL:
        logger.warning(f"APN-plateaued exclusion FAILED on n={F.n}: N_0={n0}")

    return models.ApnExclusionReport(
        n=F.n,
        delta=delta,
        is_apn=is_apn,
        is_vectorial_plateaued=plateaued,
        histogram=dict(sorted(histogram.items())),
        n0=n0,
        n0_mod4=n0 % 4,
        weighted_sum=weighted,
        fourth_moment=moment,
        is_max=is_max,
        verdict=verdict,
    )
