"""
execute(plan): run a validated RunPlan, write its report and map the outcome to an exit code.

Exit codes: 0 success or PASS, 1 a theorem FAILed, 2 usage error, 3 census guard exceeded.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import pandas as pd
import typer

from bentcli.utils import display
from bentcli.utils.file_utils import load_plan, write_report
from bentcli.utils.inputs import ResolvedInput, resolve_function
from maxbent import models
from maxbent.config import settings
from maxbent.services import constructions, diffspec, equivalence, linmaps, vectorial
from maxbent.services.field import FieldCtx, ctx_build, parse_field_spec
from maxbent.services.vectorial import CensusTooLarge, NotPlateauedError
from maxbent.utils.enums import CampaignFamily, OutputFormat, Subcommand, Theorem, Verdict
from maxbent.utils.logging_utils import logger

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


@dataclass
class Outcome:
    title: str
    payload: Any
    verdict: Optional[str] = None
    frame: Optional[pd.DataFrame] = None
    resolved: Optional[ResolvedInput] = None


def _field_args(plan: models.RunPlan) -> Tuple[Optional[int], Optional[int]]:
    """(n, poly) from the plan's field spec, or from bare n/poly options (YAML plans)."""
    n, poly = plan.options.get("n"), plan.options.get("poly")
    if plan.field is None:
        return n, poly
    ctx = parse_field_spec(plan.field)
    if (n is not None and n != ctx.n) or (poly is not None and poly != ctx.poly):
        raise ValueError(f"conflicting inputs: field {plan.field!r} disagrees with n={n}, poly={poly}")
    return ctx.n, ctx.poly


def _family_ctx(plan: models.RunPlan, params: models.FamilyParams) -> FieldCtx:
    n, poly = _field_args(plan)
    if n is not None and n != params.n:
        raise ValueError(f"field n={n} conflicts with {params.to_spec()}, which lives on n={params.n}")
    return ctx_build(params.n, poly)


def _resolve(plan: models.RunPlan) -> ResolvedInput:
    n, poly = _field_args(plan)
    return resolve_function(plan.fn, plan.family, n, poly, plan.options.get("m"))


def _workers(plan: models.RunPlan) -> Optional[int]:
    return plan.options.get("workers")


# === Subcommand handlers ===


def run_analyze(plan: models.RunPlan) -> Outcome:
    resolved = _resolve(plan)
    F = resolved.F
    if F.n != F.m:
        raise ValueError(f"analyze needs an (n, n)-function, got ({F.n}, {F.m})")
    vectorial.check_guard(F.n, override=plan.override_guard)
    delta, is_apn = diffspec.uniformity(F, workers=_workers(plan))
    report = models.AnalyzeReport(
        n=F.n,
        m=F.m,
        delta=delta,
        is_apn=is_apn,
        is_permutation=F.is_permutation(),
        nonlinearity=vectorial.nonlinearity(F),
        fourth_moment=vectorial.fourth_moment(F, workers=_workers(plan)),
    )
    if F.n % 2 == 0:
        report.census = vectorial.bent_census(F, override=plan.override_guard, workers=_workers(plan))
    try:
        report.histogram = vectorial.amplitude_histogram(F, workers=_workers(plan)).counts
    except NotPlateauedError as e:
        logger.info(f"Skipping amplitude histogram: {e}")
    return Outcome(f"Analysis of {resolved.label}", report, resolved=resolved)


def run_census(plan: models.RunPlan) -> Outcome:
    resolved = _resolve(plan)
    sample = plan.options.get("sample")
    if sample:
        report = vectorial.sampled_census(resolved.F, size=sample, seed=plan.seed)
    else:
        report = vectorial.bent_census(resolved.F, override=plan.override_guard, workers=_workers(plan))
    return Outcome(f"Bent components of {resolved.label}", report, resolved=resolved)


def run_diffspec(plan: models.RunPlan) -> Outcome:
    resolved = _resolve(plan)
    row = plan.options.get("row")
    if row is None:
        vectorial.check_guard(resolved.F.n, override=plan.override_guard)
        report = diffspec.ddt_histogram(resolved.F, workers=_workers(plan))
        return Outcome(f"Differential spectrum of {resolved.label}", report, resolved=resolved)
    report = diffspec.delta_row(resolved.F, row)
    frame = diffspec.row_frame(report, resolved.F)
    return Outcome(f"Row a={report.a:#x} of {resolved.label}", report, frame=frame, resolved=resolved)


def run_construct(plan: models.RunPlan) -> Outcome:
    params = plan.family_params()
    ctx = _family_ctx(plan, params)
    G = constructions.build_G(params, ctx)
    pre_a, pre_b = constructions.preconditions_hold(ctx, params)
    report = models.ConstructReport(
        params=params.to_spec(),
        n=ctx.n,
        precondition_a=pre_a,
        precondition_b=pre_b,
        census=vectorial.bent_census(G, override=plan.override_guard, workers=_workers(plan)),
    )
    if pre_a and pre_b and params.k % params.e == 0:
        predicted = constructions.predicted_nonbent_set(params, ctx)
        report.predicted_kind, report.predicted_size = predicted.kind.value, len(predicted)
    alpha = plan.options.get("alpha")
    if alpha is not None:
        lifted = constructions.to_vectorial_bent(alpha, G, params)
        profiles = vectorial.component_profiles(lifted, range(1, 1 << lifted.m))
        report.alpha = alpha
        report.lift_m = lifted.m
        report.lift_bent_components = sum(p.is_bent(lifted.n) for p in profiles)
        report.lift_is_vectorial_bent = report.lift_bent_components == (1 << lifted.m) - 1
    resolved = ResolvedInput(G, ctx, f"family:{params.to_spec()}", params)
    return Outcome(f"Construction {params.to_spec()}", report, resolved=resolved)


def run_equiv(plan: models.RunPlan) -> Outcome:
    resolved = _resolve(plan)
    opts = plan.options
    report = equivalence.invariance_experiment(
        resolved.F,
        trials=opts.get("trials", 20),
        seed=plan.seed,
        mode=opts.get("mode", "ea"),
        sampler=opts.get("sampler", "shear"),
        override=plan.override_guard,
        workers=_workers(plan),
    )
    return Outcome(f"Invariance of {resolved.label}", report, report.verdict, resolved=resolved)


# === verify ===


def _require(opts: Dict[str, Any], *names: str):
    missing = [name for name in names if opts.get(name) is None]
    if missing:
        raise ValueError(f"missing option(s): {', '.join('--' + name for name in missing)}")


def _verify_one(plan: models.RunPlan, opts: Dict[str, Any]) -> Outcome:
    theorem = Theorem(opts["theorem"]) if opts.get("theorem") else None
    family = plan.family
    seed = settings.DEFAULT_SEED if plan.seed is None else plan.seed
    workers = _workers(plan)

    if theorem is None:
        if not family or family.strip().lower() not in {f.value for f in CampaignFamily}:
            raise ValueError("verify needs --theorem, a campaign --family (binomial|general) or --plan")
        _require(opts, "kmax")
        if CampaignFamily(family) == CampaignFamily.BINOMIAL:
            params_iter = constructions.binomial_params(opts["kmax"])
        else:
            params_iter = constructions.enumerate_params(
                opts["kmax"], opts.get("rho_max", 2), opts.get("gamma_mode", "subfield")
            )
        report = constructions.run_family_campaign(params_iter, name=CampaignFamily(family).value, workers=workers)
        return Outcome(f"{family} family campaign", report, report.verdict)

    if theorem == Theorem.APN_PLATEAUED:
        resolved = _resolve(plan)
        report = vectorial.verify_apn_plateaued_exclusion(resolved.F, workers=workers)
        return Outcome(f"APN-plateaued exclusion on {resolved.label}", report, report.verdict, resolved=resolved)

    if theorem == Theorem.BINOMIAL_DIFF:
        if opts.get("kmax") is not None:
            report = diffspec.run_binomial_spectrum_campaign(opts["kmax"])
        else:
            _require(opts, "k", "i")
            report = diffspec.verify_binomial_spectrum(opts["i"], opts["k"], override=plan.override_guard)
        return Outcome("Binomial differential spectrum", report, report.verdict)

    if theorem == Theorem.DELTA2_ANOMALY:
        if opts.get("kmax") is not None:
            report = diffspec.run_delta2_campaign(opts["kmax"], workers=workers)
        else:
            _require(opts, "k", "t2")
            report = diffspec.verify_delta2_anomaly(opts["k"], opts.get("t1") or 1, opts["t2"])
        return Outcome("Delta-2 anomaly", report, report.verdict)

    if theorem == Theorem.GENERAL_ANOMALY:
        if opts.get("kmax") is not None:
            report = diffspec.run_general_anomaly_campaign(opts["kmax"], workers=workers)
        else:
            _require(opts, "k", "i", "ts")
            report = diffspec.verify_general_anomaly(opts["k"], opts["i"], opts["ts"])
        return Outcome("General anomaly", report, report.verdict)

    if theorem == Theorem.BENT_ALPHA:
        if not family:
            raise ValueError("bent-alpha needs --family k=..,i=..,e=..")
        params = models.FamilyParams.parse(family)
        ctx = _family_ctx(plan, params)
        report = constructions.verify_bent_alpha_theorem(params, ctx, override=plan.override_guard, workers=workers)
        return Outcome(f"Bent components of Tr(alpha G), {params.to_spec()}", report, report.verdict)

    if theorem == Theorem.LEMMA1:
        n, poly = _field_args(plan)
        if n is None:
            raise ValueError("lemma1 needs --n or --field")
        ctx = ctx_build(n, poly)
        report = linmaps.run_lemma1_campaign(ctx, opts.get("trials", 200), seed)
        return Outcome(f"Quadratic forms Tr(x L(x)) on {ctx.spec}", report, report.verdict)

    if theorem == Theorem.INVARIANCE:
        return run_equiv(plan)

    raise ValueError(f"unsupported theorem '{theorem}'")


def run_verify(plan: models.RunPlan) -> Outcome:
    plan_file = plan.options.get("plan")
    if not plan_file:
        return _verify_one(plan, plan.options)

    spec = load_plan(plan_file)
    seed = spec.get("seed", plan.seed)
    outcomes: List[Outcome] = []
    for entry in spec["runs"]:
        entry = {key.replace("-", "_"): value for key, value in entry.items()}
        sub = models.RunPlan(
            subcommand=Subcommand.verify,
            fn=entry.pop("fn", None),
            field=entry.pop("field", None),
            family=entry.pop("family", None),
            override_guard=entry.pop("override_guard", plan.override_guard),
            seed=seed,
            options={"workers": _workers(plan), **entry},
        )
        outcomes.append(_verify_one(sub, sub.options))
    verdicts = [o.verdict for o in outcomes if o.verdict]
    verdict = Verdict.FAIL if Verdict.FAIL in verdicts else (Verdict.PASS if Verdict.PASS in verdicts else Verdict.VACUOUS)
    payload = [{"title": o.title, "verdict": o.verdict, "report": o.payload} for o in outcomes]
    return Outcome(f"Plan {plan_file}", payload, verdict)


HANDLERS: Dict[Subcommand, Callable[[models.RunPlan], Outcome]] = {
    Subcommand.analyze: run_analyze,
    Subcommand.census: run_census,
    Subcommand.diffspec: run_diffspec,
    Subcommand.construct: run_construct,
    Subcommand.equiv: run_equiv,
    Subcommand.verify: run_verify,
}


def _header(plan: models.RunPlan, outcome: Outcome) -> models.ReportHeader:
    resolved = outcome.resolved
    ctx = resolved.ctx if resolved else None
    return models.ReportHeader(
        command=Subcommand(plan.subcommand).value,
        field=ctx.spec if ctx else plan.field,
        poly=ctx.poly if ctx else None,
        seed=plan.seed,
        function=resolved.label if resolved else plan.fn or plan.family,
    )


def execute(plan: models.RunPlan) -> int:
    try:
        outcome = HANDLERS[Subcommand(plan.subcommand)](plan)
    except CensusTooLarge as e:
        typer.secho(f"Error: {e}", fg=typer.colors.RED, err=True)
        return EXIT_GUARD
    except (ValueError, ZeroDivisionError) as e:
        typer.secho(f"Error: {e}", fg=typer.colors.RED, err=True)
        return EXIT_USAGE

    output_format = OutputFormat(plan.format)
    write_report(_header(plan, outcome), outcome.payload, output_format, plan.out, outcome.frame)
    if output_format == OutputFormat.table:
        if outcome.frame is not None:
            display.display_frame(outcome.title, outcome.frame, max_rows=64)
        elif isinstance(outcome.payload, list):
            for item in outcome.payload:
                display.display_report(item["title"], item["report"].model_dump(mode="json", by_alias=True))
        else:
            display.display_report(outcome.title, outcome.payload.model_dump(mode="json", by_alias=True))

    if outcome.verdict == Verdict.FAIL:
        typer.secho(f"Verdict: FAIL ({outcome.title})", fg=typer.colors.RED, err=True)
        return EXIT_FAIL
    return EXIT_OK
