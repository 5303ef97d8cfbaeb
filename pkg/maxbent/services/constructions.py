"""
The G(x) = x^(2^i) * (Tr^{2k}_e(x) + sum_j g_j Tr^{2k}_e(x)^(2^t_j)) families on F_{2^{2k}}:
builders, no-root preconditions, predicted non-bent sets and their verification.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import Iterator, List, Optional, Tuple

import numpy as np

from maxbent import models
from maxbent.services import linmaps, vectorial
from maxbent.services.field import FieldCtx, ctx_build
from maxbent.services.vectorial import VecFun
from maxbent.utils import gf2_utils
from maxbent.utils.enums import PreconditionForm, PredictedKind, Verdict
from maxbent.utils.logging_utils import logger
from maxbent.utils.parallel_utils import parallel_map

GAMMA_MODES = ("one", "subfield")


class InvalidFamily(ValueError):
    pass


class PreconditionsUnmet(ValueError):
    pass


class UnsupportedSubfield(ValueError):
    pass


class AlphaNotAdmissible(ValueError):
    pass


@dataclass(frozen=True)
class PredictedSet:
    kind: PredictedKind
    members: np.ndarray

    def __contains__(self, a: int) -> bool:
        return bool(np.isin(int(a), self.members))

    def __len__(self) -> int:
        return int(self.members.size)

    def as_set(self) -> set:
        return set(int(m) for m in self.members)


def validate_params(params: models.FamilyParams, ctx: FieldCtx) -> models.FamilyParams:
    if ctx.n != params.n:
        raise InvalidFamily(f"family with k={params.k} needs F_2^{params.n}, got {ctx.spec}")
    for gamma, t in params.terms:
        if not 0 <= gamma < ctx.order or not ctx.in_subfield(gamma, params.k):
            raise InvalidFamily(f"coefficient {gamma:#x} (t={t}) is not in F_2^{params.k}")
    return params


def build_G(params: models.FamilyParams, ctx: FieldCtx) -> VecFun:
    validate_params(params, ctx)
    xs = ctx.elements
    trace = ctx.relative_trace_array(xs, ctx.n, params.e)
    inner = trace.copy()
    for gamma, t in params.merged_terms():
        inner ^= ctx.mul_array(gamma, ctx.frob_array(trace, t))
    return VecFun(ctx.n, ctx.n, ctx.mul_array(ctx.frob_array(xs, params.i), inner), ctx)


def binomial(ctx: FieldCtx, i: int) -> VecFun:
    """x^(2^i) (x + x^(2^k))."""
    return build_G(models.FamilyParams(k=ctx.n // 2, i=i), ctx)


def corollary_params(k: int, i: int, t1: int) -> models.FamilyParams:
    """Trinomial terms with t_2 = k - t_1; both no-root forms reduce to z^(2^t1 - 1) + z^(2^t2 - 1) + 1."""
    return models.FamilyParams(k=k, i=i, e=k, terms=[(1, t1), (1, k - t1)])


# === Preconditions ===


def _precondition_values(ctx: FieldCtx, form: PreconditionForm, params: models.FamilyParams) -> np.ndarray:
    k = params.k
    zs = ctx.subfield_elements(k)
    values = np.ones(zs.shape, dtype=np.int64)
    for gamma, t in params.merged_terms():
        if form == PreconditionForm.A:
            coeff = ctx.frob_pow(gamma, k - t)
            exponent = (1 << (k - t)) - 1
        else:
            coeff = ctx.frob_pow(gamma, k - params.i)
            exponent = (1 << t) - 1
        values ^= ctx.mul_array(coeff, ctx.power_array(zs, exponent))
    return values


def no_root_check(ctx: FieldCtx, form: PreconditionForm, params: models.FamilyParams) -> bool:
    """
    True iff the form's polynomial has no root z in F_{2^k}.

    `ctx` is the F_{2^{2k}} context; z runs over its subfield F_{2^k} where the coefficients live.
    z^0 is 1 at z = 0 as well.
    """
    validate_params(params, ctx)
    return bool(np.all(_precondition_values(ctx, PreconditionForm(form), params) != 0))


def preconditions_hold(ctx: FieldCtx, params: models.FamilyParams) -> Tuple[bool, bool]:
    return no_root_check(ctx, PreconditionForm.A, params), no_root_check(ctx, PreconditionForm.B, params)


# === Predicted sets ===


def trace_image_set(ctx: FieldCtx, k: int, allowed: np.ndarray) -> np.ndarray:
    """{x in F_{2^{2k}} : Tr^{2k}_k(x) in allowed}, sorted."""
    xs = ctx.elements
    return xs[np.isin(ctx.relative_trace_array(xs, ctx.n, k), allowed)]


def predicted_nonbent_set(params: models.FamilyParams, ctx: FieldCtx) -> PredictedSet:
    validate_params(params, ctx)
    k, e = params.k, params.e
    if k % e:
        raise UnsupportedSubfield(f"unsupported e: e={e} does not divide k={k}")
    if not all(preconditions_hold(ctx, params)):
        raise PreconditionsUnmet(f"preconditions unmet for {params.to_spec()}")
    if e == k:
        return PredictedSet(PredictedKind.SUBFIELD_K, ctx.subfield_elements(k))
    if (k // e) % 2 == 0:
        return PredictedSet(PredictedKind.E_SET, trace_image_set(ctx, k, ctx.subfield_elements(e)))
    ys = ctx.subfield_elements(k)
    image = np.unique(ys ^ ctx.relative_trace_array(ys, k, e))
    return PredictedSet(PredictedKind.O_SET, trace_image_set(ctx, k, image))


# === Verification ===


def verify_bent_alpha_theorem(
    params: models.FamilyParams,
    ctx: FieldCtx,
    guard: Optional[int] = None,
    override: bool = False,
    workers: Optional[int] = None,
) -> models.AlphaTheoremReport:
    """
    Census of x -> Tr(alpha G(x)) over every alpha, compared with the predicted non-bent set.

    VACUOUS when a no-root precondition fails or the subfield is unsupported; the observed
    set is reported either way.
    """
    validate_params(params, ctx)
    vectorial.check_guard(ctx.n, guard, override)
    pre_a, pre_b = preconditions_hold(ctx, params)
    G = build_G(params, ctx)
    profiles = vectorial.component_profiles(G, workers=workers)
    observed = sorted(p.v for p in profiles if not p.is_bent(ctx.n))

    predicted: Optional[PredictedSet] = None
    if pre_a and pre_b:
        try:
            predicted = predicted_nonbent_set(params, ctx)
        except UnsupportedSubfield as exc:
            logger.warning(f"{params.to_spec()}: {exc}")

    if predicted is None:
        verdict = Verdict.VACUOUS
    else:
        verdict = Verdict.PASS if predicted.as_set() == set(observed) else Verdict.FAIL
    if verdict == Verdict.FAIL:
        logger.warning(f"{params.to_spec()}: observed {len(observed)} non-bent alphas, predicted {len(predicted)}")

    return models.AlphaTheoremReport(
        params=params.to_spec(),
        n=ctx.n,
        precondition_a=pre_a,
        precondition_b=pre_b,
        predicted_kind=predicted.kind if predicted else None,
        predicted=[int(m) for m in predicted.members] if predicted else [],
        observed_nonbent=observed,
        bent_count=len(profiles) - len(observed),
        duplicate_t=params.has_duplicate_t,
        verdict=verdict,
    )


def quadratic_linpoly(params: models.FamilyParams, alpha: int, ctx: FieldCtx) -> linmaps.LinPoly:
    """The L with Tr(alpha G(x)) = Tr(x L(x))."""
    validate_params(params, ctx)
    alpha = ctx.check(alpha)
    shifts = [ell * params.e for ell in range(ctx.n // params.e)]
    monomials = [(alpha, params.i, s) for s in shifts]
    for gamma, t in params.merged_terms():
        coeff = ctx.mul(alpha, gamma)
        monomials += [(coeff, params.i, s + t) for s in shifts]
    return linmaps.LinPoly.from_quadratic(ctx, monomials)


def subfield_coordinates(ctx: FieldCtx, k: int) -> Tuple[List[int], np.ndarray]:
    """
    A basis of F_{2^k} inside ctx and the lookup table element -> k-bit coordinate vector.

    Entries outside the subfield are -1.
    """
    basis = gf2_utils.xor_basis(ctx.subfield_elements(k))[::-1]
    lookup = np.full(ctx.order, -1, dtype=np.int64)
    for coord in range(1 << k):
        element = 0
        for j, b in enumerate(basis):
            if (coord >> j) & 1:
                element ^= b
        lookup[element] = coord
    return basis, lookup


def to_vectorial_bent(alpha: int, G: VecFun, params: models.FamilyParams) -> VecFun:
    """
    x -> Tr^{2k}_k(alpha G(x)) as a (2k, k)-function in coordinates of a fixed basis of F_{2^k}.

    Components are then v.F(x), each equal to some Tr(w alpha G(x)) with w in F_{2^k}*.
    """
    ctx, k = G.ctx, params.k
    if params.e != k:
        raise UnsupportedSubfield(f"unsupported e: vectorial lift needs e = k, got e={params.e}")
    if alpha in predicted_nonbent_set(params, ctx):
        raise AlphaNotAdmissible(f"alpha not admissible: {alpha:#x} lies in the predicted non-bent set")
    values = ctx.relative_trace_array(ctx.mul_array(alpha, G.table), ctx.n, k)
    _, lookup = subfield_coordinates(ctx, k)
    return VecFun(ctx.n, k, lookup[values], ctx)


# === Campaigns ===


def enumerate_params(kmax: int, rho_max: int = 2, gamma_mode: str = "subfield", kmin: int = 2) -> Iterator[models.FamilyParams]:
    """
    Every (k, e | k, i < k, t multiset, gamma tuple) with rho <= rho_max.

    gamma_mode "one" fixes every coefficient to 1; "subfield" runs them over F_{2^k}*.

    i stops at k: for e | k the inner factor is fixed by x -> x^(2^k), so G with exponent i + k
    composed with that map is G with exponent i, and both have the same non-bent alphas.
    `binomial_params` still walks every i < 2k.
    """
    if gamma_mode not in GAMMA_MODES:
        raise ValueError(f"unknown gamma mode '{gamma_mode}', expected one of {GAMMA_MODES}")
    for k in range(kmin, kmax + 1):
        ctx = ctx_build(2 * k)
        gammas = [1] if gamma_mode == "one" else [int(g) for g in ctx.subfield_elements(k)[1:]]
        for e in (d for d in range(1, k + 1) if k % d == 0):
            for i in range(k):
                for rho in range(min(rho_max, k) + 1):
                    for ts in combinations_with_replacement(range(k + 1), rho):
                        for gs in product(gammas, repeat=rho):
                            yield models.FamilyParams(k=k, i=i, e=e, terms=list(zip(gs, ts)))


def binomial_params(kmax: int, kmin: int = 2) -> Iterator[models.FamilyParams]:
    for k in range(kmin, kmax + 1):
        for i in range(2 * k):
            yield models.FamilyParams(k=k, i=i)


def _campaign_instance(spec: str) -> Tuple[str, str, int, bool]:
    params = models.FamilyParams.parse(spec)
    report = verify_bent_alpha_theorem(params, ctx_build(params.n), override=True, workers=1)
    return spec, report.verdict, params.effective_rho, params.has_duplicate_t


def run_family_campaign(
    params_iter, name: str = "general", workers: Optional[int] = None
) -> models.CampaignReport:
    """Verify every instance; FAIL instances are listed as findings rather than raised."""
    specs = [params.to_spec() for params in params_iter]
    report = models.CampaignReport(campaign=name)
    for label, verdict, rho, duplicate in parallel_map(_campaign_instance, specs, workers):
        report.record(label, verdict, rho=rho, duplicate=duplicate)
    report.close()
    logger.info(
        f"Campaign {name}: {report.instances} instances, {report.passed} PASS, {report.failed} FAIL, "
        f"{report.vacuous} VACUOUS, {report.non_vacuous_with_terms} non-vacuous with terms"
    )
    return report
