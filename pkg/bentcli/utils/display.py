from typing import Any, Dict

import pandas as pd
from rich.console import Console
from rich.table import Table

from maxbent.utils.enums import Verdict

VERDICT_STYLES = {Verdict.PASS.value: "green", Verdict.FAIL.value: "red", Verdict.VACUOUS.value: "yellow"}

# long member lists are cut in the table view; the JSON report keeps them whole
MAX_LIST_ITEMS = 16


def create_rich_table(title: str, columns: list[tuple[str, str, dict]]) -> Table:
    """
    Create a rich table with the specified columns.

    Args:
        title: Table title
        columns: List of (header, style, kwargs) tuples for each column
    """
    table = Table(title=title)
    for header, style, kwargs in columns:
        table.add_column(header, style=style, **kwargs)
    return table


def _format_value(value: Any) -> str:
    if isinstance(value, list):
        shown = ", ".join(str(v) for v in value[:MAX_LIST_ITEMS])
        if len(value) > MAX_LIST_ITEMS:
            shown += f", ... ({len(value)} total)"
        return f"[{shown}]"
    if isinstance(value, dict):
        return ", ".join(f"{k}: {_format_value(v)}" for k, v in value.items())
    if value in VERDICT_STYLES:
        return f"[{VERDICT_STYLES[value]}]{value}[/{VERDICT_STYLES[value]}]"
    return str(value)


def display_report(title: str, data: Dict[str, Any], console: Console | None = None):
    """One row per report field."""
    console = console or Console()
    table = create_rich_table(title, [("Field", "cyan", {"no_wrap": True}), ("Value", "white", {})])
    for key, value in data.items():
        table.add_row(key, _format_value(value))
    console.print(table)


def display_frame(title: str, frame: pd.DataFrame, max_rows: int | None = None, console: Console | None = None):
    console = console or Console()
    table = create_rich_table(title, [(str(col), "cyan" if i == 0 else "white", {}) for i, col in enumerate(frame.columns)])
    rows = frame if max_rows is None else frame.head(max_rows)
    for row in rows.itertuples(index=False):
        table.add_row(*(_format_value(v) for v in row))
    console.print(table)
    if max_rows is not None and len(frame) > max_rows:
        console.print(f"Rows: {max_rows} shown (total available: {len(frame)})")
