from typing import Optional

import typer

from bentcli.cli.shared import (
    FamilyOption,
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
    run_plan,
)
from maxbent.utils.enums import CczSampler, EquivMode, OutputFormat, Subcommand


def equiv(
    fn: Optional[str] = FnOption,
    family: Optional[str] = FamilyOption,
    field: Optional[str] = FieldOption,
    n: Optional[int] = NOption,
    poly: Optional[str] = PolyOption,
    mode: EquivMode = typer.Option(EquivMode.ea, "--mode", help="Transform kind: ea or ccz"),
    sampler: CczSampler = typer.Option(CczSampler.shear, "--sampler", help="CCZ sampler: shear or uniform"),
    trials: int = typer.Option(20, "--trials", help="Number of random transforms"),
    seed: Optional[int] = SeedOption,
    out: Optional[str] = OutOption,
    output_format: OutputFormat = FormatOption,
    override_guard: bool = OverrideOption,
    workers: Optional[int] = WorkersOption,
):
    """
    Census after random EA or CCZ transforms; reports any change in maximality.

    Example usage:
        mbcli.py equiv --family "k=3,i=1" --mode ea --trials 20 --seed 42
        mbcli.py equiv --fn gold3 --n 4 --mode ccz --trials 5 --out report.json
    """
    poly_value = parse_int(poly)
    run_plan(
        Subcommand.equiv,
        {
            "n": n,
            "poly": poly_value,
            "workers": workers,
            "trials": trials,
            "mode": mode.value,
            "sampler": sampler.value,
        },
        field=field_spec(field, n, poly_value),
        fn=fn,
        family=family,
        out=out,
        format=output_format,
        override_guard=override_guard,
        seed=seed,
    )
