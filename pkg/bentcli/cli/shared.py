from typing import Any, Dict, List, Optional

import typer
from pydantic import ValidationError

from bentcli.runner import EXIT_USAGE, execute
from bentcli.utils.inputs import FN_SPEC_HELP
from maxbent import models
from maxbent.utils.enums import OutputFormat, Subcommand


def parse_int(value: Optional[str]) -> Optional[int]:
    """Accept 0x.., 0b.. or decimal."""
    if value is None:
        return None
    try:
        return int(value.strip(), 0)
    except ValueError:
        raise typer.BadParameter(f"'{value}' is not an integer (use 0x.. for hex)")


def parse_int_list(value: Optional[str]) -> Optional[List[int]]:
    if value is None:
        return None
    return [parse_int(part) for part in value.split(",") if part.strip()]


def field_spec(field: Optional[str], n: Optional[int], poly: Optional[int]) -> Optional[str]:
    """The plan's field: --field as given, or "n=..[,poly=..]" built from --n/--poly."""
    if field is not None:
        if n is not None or poly is not None:
            raise typer.BadParameter("conflicting inputs: give either --field or --n/--poly, not both")
        return field
    if n is None:
        return None
    return f"n={n}" if poly is None else f"n={n},poly={poly:#x}"


def run_plan(subcommand: Subcommand, options: Dict[str, Any], **fields) -> None:
    """Validate the plan (usage errors exit 2), execute it and exit with its code."""
    try:
        plan = models.RunPlan(subcommand=subcommand, options=options, **fields)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        typer.secho(f"Usage error: {messages}", fg=typer.colors.RED, err=True)
        raise typer.Exit(EXIT_USAGE)
    raise typer.Exit(execute(plan))


# Shared option declarations
FnOption = typer.Option(None, "--fn", help=f"Function spec: {FN_SPEC_HELP}")
FamilyOption = typer.Option(None, "--family", help="Family parameters 'k=..,i=..,e=..[,terms=g:t;g:t]'")
FieldOption = typer.Option(None, "--field", help="Field spec 'n=<int>,poly=0x<hex>' (poly optional)")
NOption = typer.Option(None, "--n", help="Field degree n")
PolyOption = typer.Option(None, "--poly", help="Irreducible polynomial, e.g. 0x13 (registry default)")
OutOption = typer.Option(None, "--out", "-o", help="Path to output file")
FormatOption = typer.Option(OutputFormat.json, "--format", "-f", help="Output format: json, csv or table")
OverrideOption = typer.Option(False, "--override-guard", help="Allow exhaustive work beyond the census guard")
WorkersOption = typer.Option(None, "--workers", "-w", help="Process-pool width (settings default)")
SeedOption = typer.Option(None, "--seed", help="Random seed (settings default)")
