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
from maxbent.utils.enums import OutputFormat, Subcommand


def analyze(
    fn: Optional[str] = FnOption,
    family: Optional[str] = FamilyOption,
    field: Optional[str] = FieldOption,
    n: Optional[int] = NOption,
    poly: Optional[str] = PolyOption,
    out: Optional[str] = OutOption,
    output_format: OutputFormat = typer.Option(OutputFormat.table, "--format", "-f", help="Output format"),
    override_guard: bool = OverrideOption,
    workers: Optional[int] = WorkersOption,
):
    """
    One-shot summary: uniformity, nonlinearity, bent census and amplitude histogram.

    Example usage:
        mbcli.py analyze --fn gold3 --n 4
        mbcli.py analyze --family "k=2,i=1" --format json
    """
    poly_value = parse_int(poly)
    run_plan(
        Subcommand.analyze,
        {"n": n, "poly": poly_value, "workers": workers},
        field=field_spec(field, n, poly_value),
        fn=fn,
        family=family,
        out=out,
        format=output_format,
        override_guard=override_guard,
    )


def census(
    fn: Optional[str] = FnOption,
    family: Optional[str] = FamilyOption,
    field: Optional[str] = FieldOption,
    n: Optional[int] = NOption,
    poly: Optional[str] = PolyOption,
    out: Optional[str] = OutOption,
    output_format: OutputFormat = FormatOption,
    override_guard: bool = OverrideOption,
    sample: Optional[int] = typer.Option(None, "--sample", help="Estimate from this many random components"),
    seed: Optional[int] = SeedOption,
    workers: Optional[int] = WorkersOption,
):
    """
    Count the bent components of an (n, n)-function.

    Example usage:
        mbcli.py census --family "k=2,i=1,e=2"
        mbcli.py census --fn gold3 --n 6 --out census.json
    """
    poly_value = parse_int(poly)
    run_plan(
        Subcommand.census,
        {"n": n, "poly": poly_value, "workers": workers, "sample": sample},
        field=field_spec(field, n, poly_value),
        fn=fn,
        family=family,
        out=out,
        format=output_format,
        override_guard=override_guard,
        seed=seed,
    )


def diffspec(
    fn: Optional[str] = FnOption,
    family: Optional[str] = FamilyOption,
    field: Optional[str] = FieldOption,
    n: Optional[int] = NOption,
    poly: Optional[str] = PolyOption,
    row: Optional[str] = typer.Option(None, "--row", help="Single row a (hex); omit for the whole spectrum"),
    out: Optional[str] = OutOption,
    output_format: OutputFormat = FormatOption,
    override_guard: bool = OverrideOption,
    workers: Optional[int] = WorkersOption,
):
    """
    Differential spectrum, or one row delta(a, .) written as (b_hex, delta) CSV.

    Example usage:
        mbcli.py diffspec --fn gold3 --n 4
        mbcli.py diffspec --family "k=2,i=1" --row 0x1 --format csv --out row.csv
    """
    poly_value = parse_int(poly)
    run_plan(
        Subcommand.diffspec,
        {"n": n, "poly": poly_value, "workers": workers, "row": parse_int(row)},
        field=field_spec(field, n, poly_value),
        fn=fn,
        family=family,
        out=out,
        format=output_format,
        override_guard=override_guard,
    )
