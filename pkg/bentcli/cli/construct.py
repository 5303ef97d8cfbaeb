from typing import Optional

import typer

from bentcli.cli.shared import (
    FieldOption,
    FormatOption,
    OutOption,
    OverrideOption,
    PolyOption,
    WorkersOption,
    field_spec,
    parse_int,
    run_plan,
)
from maxbent.utils.enums import OutputFormat, Subcommand


def terms_to_family(terms: Optional[str]) -> str:
    """'g1:t1,g2:t2' -> 'g1:t1;g2:t2' as the family parser expects."""
    if not terms:
        return ""
    return ",terms=" + ";".join(part.strip() for part in terms.split(",") if part.strip())


def construct(
    k: int = typer.Option(..., "--k", help="Half degree k (field F_2^(2k))"),
    i: int = typer.Option(0, "--i", help="Exponent i of the x^(2^i) factor"),
    e: Optional[int] = typer.Option(None, "--e", help="Trace target degree e (default k)"),
    terms: Optional[str] = typer.Option(None, "--terms", help="Coefficient terms 'g1:t1,g2:t2'"),
    alpha: Optional[str] = typer.Option(None, "--alpha", help="Build the vectorial bent lift for this alpha"),
    field: Optional[str] = FieldOption,
    poly: Optional[str] = PolyOption,
    out: Optional[str] = OutOption,
    output_format: OutputFormat = FormatOption,
    override_guard: bool = OverrideOption,
    workers: Optional[int] = WorkersOption,
):
    """
    Build G for the family parameters, check its preconditions and census it.

    Example usage:
        mbcli.py construct --k 2 --i 1
        mbcli.py construct --k 3 --i 1 --terms "0x1:1,0x1:2" --alpha 0x2
        mbcli.py construct --k 4 --i 1 --field "n=8,poly=0x11d"
    """
    poly_value = parse_int(poly)
    family = f"k={k},i={i},e={k if e is None else e}" + terms_to_family(terms)
    run_plan(
        Subcommand.construct,
        {"poly": poly_value, "alpha": parse_int(alpha), "workers": workers},
        field=field_spec(field, None, poly_value),
        family=family,
        out=out,
        format=output_format,
        override_guard=override_guard,
    )
