from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import orjson
import pandas as pd
import typer
import yaml
from pydantic import BaseModel

from maxbent.models import ReportHeader
from maxbent.utils.enums import OutputFormat

Payload = Union[BaseModel, List[BaseModel], Dict[str, Any]]


def _dump(payload: Payload) -> Any:
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json", by_alias=True)
    if isinstance(payload, list):
        return [_dump(item) for item in payload]
    if isinstance(payload, dict):
        return {key: _dump(value) for key, value in payload.items()}
    return payload


def render_json(header: ReportHeader, payload: Payload) -> bytes:
    """Header block first, then the report; no timestamps, so identical runs give identical bytes."""
    document = {"header": _dump(header), "report": _dump(payload)}
    return orjson.dumps(document, option=orjson.OPT_INDENT_2) + b"\n"


def report_frame(payload: Payload) -> pd.DataFrame:
    data = _dump(payload)
    if isinstance(data, list):
        return pd.json_normalize(data)
    return pd.json_normalize(data, max_level=1)


def write_report(
    header: ReportHeader,
    payload: Payload,
    output_format: OutputFormat,
    output_file: Optional[str],
    frame: Optional[pd.DataFrame] = None,
):
    """Write to `output_file`, or to stdout when none is given; `frame` overrides the CSV layout."""
    if output_format == OutputFormat.csv:
        frame = report_frame(payload) if frame is None else frame
        text = frame.to_csv(index=False, lineterminator="\n")
        if output_file:
            Path(output_file).write_text(text)
        else:
            typer.echo(text, nl=False)
        return

    content = render_json(header, payload)
    if output_file:
        Path(output_file).write_bytes(content)
        typer.echo(f"Report written to {output_file}", err=True)
    elif output_format == OutputFormat.json:
        typer.echo(content.decode("utf-8"), nl=False)


def load_plan(file_path: str) -> Dict[str, Any]:
    """Load a campaign plan: a mapping with optional `seed` and a list of `runs`."""
    path = Path(file_path)
    if not path.is_file():
        raise ValueError(f"plan file '{file_path}' does not exist")
    try:
        plan = yaml.safe_load(path.read_text())
    except yaml.YAMLError as e:
        raise ValueError(f"invalid YAML in plan file '{file_path}': {e}")
    if not isinstance(plan, dict) or not isinstance(plan.get("runs"), list):
        raise ValueError("plan must be a mapping with a 'runs' list")
    return plan
