from typing import Optional

import typer

from bentcli.cli.shared import (
    FieldOption,
    FnOption,
    FormatOption,
    NOption,
    OutOption,
    OverrideOption,
    PolyOption,
    SeedOption,
    WorkersOption,
    field_spec,
    parse_int,
    parse_int_list,
    run_plan,
)
from maxbent.utils.enums import OutputFormat, Subcommand, Theorem

THEOREM_HELP = ", ".join(t.value for t in Theorem)


def verify(
    theorem: Optional[str] = typer.Option(None, "--theorem", "-t", help=f"One of: {THEOREM_HELP}"),
    family: Optional[str] = typer.Option(
        None, "--family", help="Campaign family (binomial|general) or instance parameters 'k=..,i=..,e=..'"
    ),
    fn: Optional[str] = FnOption,
    field: Optional[str] = FieldOption,
    n: Optional[int] = NOption,
    poly: Optional[str] = PolyOption,
    k: Optional[int] = typer.Option(None, "--k"),
    i: Optional[int] = typer.Option(None, "--i"),
    t1: Optional[int] = typer.Option(None, "--t1"),
    t2: Optional[int] = typer.Option(None, "--t2"),
    ts: Optional[str] = typer.Option(None, "--ts", help="Comma-separated t_j, e.g. '1,2'"),
    kmax: Optional[int] = typer.Option(None, "--kmax", help="Run the campaign for every k up to kmax"),
    rho_max: int = typer.Option(2, "--rho-max", help="Largest number of terms in family campaigns"),
    gamma_mode: str = typer.Option("subfield", "--gamma-mode", help="Campaign coefficients: one or subfield"),
    trials: Optional[int] = typer.Option(None, "--trials"),
    mode: str = typer.Option("ea", "--mode", help="Invariance transform kind: ea or ccz"),
    plan: Optional[str] = typer.Option(None, "--plan", help="YAML file listing verification runs"),
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
    output_format: OutputFormat = FormatOption,
    override_guard: bool = OverrideOption,
    workers: Optional[int] = WorkersOption,
):
    """
    Check a theorem exhaustively; exits 1 when any instance FAILs.

    Example usage:
        mbcli.py verify --theorem apn-plateaued --fn gold3 --n 4
        mbcli.py verify --theorem binomial-diff --i 1 --k 2
        mbcli.py verify --family general --kmax 3 --out report.json
        mbcli.py verify --theorem lemma1 --n 6 --trials 200 --seed 42
        mbcli.py verify --plan campaigns.yaml
    """
    if theorem is not None:
        try:
            Theorem(theorem)
        except ValueError:
            raise typer.BadParameter(f"unknown theorem '{theorem}', expected one of: {THEOREM_HELP}")
    options = {
        "theorem": theorem,
        "n": n,
        "poly": parse_int(poly),
        "k": k,
        "i": i,
        "t1": t1,
        "t2": t2,
        "ts": parse_int_list(ts),
        "kmax": kmax,
        "rho_max": rho_max,
        "gamma_mode": gamma_mode,
        "mode": mode,
        "plan": plan,
        "workers": workers,
    }
    if trials is not None:
        options["trials"] = trials
    run_plan(
        Subcommand.verify,
        options,
        field=field_spec(field, n, options["poly"]),
        fn=fn,
        family=family,
        out=out,
        format=output_format,
        override_guard=override_guard,
        seed=seed,
    )
