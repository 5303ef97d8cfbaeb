import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from maxbent import models
from maxbent.services import boolfun, constructions
from maxbent.services.field import FieldCtx, ctx_build
from maxbent.services.vectorial import VecFun, from_coordinates, from_univariate

FN_SPEC_HELP = (
    "gold<d> | identity | binomial:k=..,i=.. | family:k=..,i=..,e=..[,terms=g:t;g:t] | table:<path> | tt:<path>"
)

_POWER_RE = re.compile(r"^gold(\d+)$")
_TOKEN_RE = re.compile(r"[,\s]+")


class FunctionSpecError(ValueError):
    pass


@dataclass
class ResolvedInput:
    F: VecFun
    ctx: Optional[FieldCtx]
    label: str
    params: Optional[models.FamilyParams] = None


def load_table(path: str) -> np.ndarray:
    """Values F(0), F(1), ... as hex tokens separated by commas or whitespace."""
    file_path = Path(path)
    if not file_path.is_file():
        raise FunctionSpecError(f"table file '{path}' does not exist")
    tokens = [tok for tok in _TOKEN_RE.split(file_path.read_text()) if tok]
    try:
        values = [int(tok, 16) for tok in tokens]
    except ValueError as e:
        raise FunctionSpecError(f"table file '{path}' holds a non-hex token: {e}")
    if not values or len(values) & (len(values) - 1):
        raise FunctionSpecError(f"table length {len(values)} is not a power of two")
    return np.array(values, dtype=np.int64)


def load_coordinates(path: str) -> list:
    """Coordinate functions f_0, f_1, ... from a truth-table file (header "n=<int>", one hex row each)."""
    file_path = Path(path)
    if not file_path.is_file():
        raise FunctionSpecError(f"truth-table file '{path}' does not exist")
    try:
        functions = boolfun.load_truth_tables(file_path.read_text())
    except ValueError as e:
        raise FunctionSpecError(f"truth-table file '{path}': {e}")
    if not functions:
        raise FunctionSpecError(f"truth-table file '{path}' holds no functions")
    return functions


def _field(n: Optional[int], poly: Optional[int], fixed_n: Optional[int] = None) -> FieldCtx:
    if fixed_n is not None and n is not None and n != fixed_n:
        raise FunctionSpecError(f"--n {n} conflicts with the input, which lives on n={fixed_n}")
    n = fixed_n if fixed_n is not None else n
    if n is None:
        raise FunctionSpecError("this input needs --n")
    return ctx_build(n, poly)


def resolve_family(family: str, n: Optional[int] = None, poly: Optional[int] = None) -> ResolvedInput:
    params = models.FamilyParams.parse(family)
    ctx = _field(n, poly, params.n)
    return ResolvedInput(constructions.build_G(params, ctx), ctx, f"family:{params.to_spec()}", params)


def resolve_function(
    fn: Optional[str] = None,
    family: Optional[str] = None,
    n: Optional[int] = None,
    poly: Optional[int] = None,
    m: Optional[int] = None,
) -> ResolvedInput:
    """Turn an --fn / --family pair into a function on its field."""
    if fn and family:
        raise FunctionSpecError("conflicting inputs: give either --fn or --family, not both")
    if family:
        return resolve_family(family, n, poly)
    if not fn:
        raise FunctionSpecError("no input given: use --fn or --family")

    spec = fn.strip()
    kind, _, rest = spec.partition(":")
    if kind == "family":
        return resolve_family(rest, n, poly)
    if kind == "binomial":
        params = models.FamilyParams.parse(rest)
        if params.terms or params.e != params.k:
            raise FunctionSpecError("binomial takes only k and i")
        return resolve_family(rest, n, poly)
    if kind == "table":
        table = load_table(rest)
        size_n = int(table.size).bit_length() - 1
        ctx = _field(n, poly, size_n)
        return ResolvedInput(VecFun(size_n, size_n if m is None else m, table, ctx), ctx, spec)
    if kind == "tt":
        functions = load_coordinates(rest)
        ctx = _field(n, poly, functions[0].n)
        return ResolvedInput(from_coordinates(functions, ctx), ctx, spec)
    if spec == "identity":
        ctx = _field(n, poly)
        return ResolvedInput(VecFun.identity(ctx), ctx, spec)
    match = _POWER_RE.match(spec)
    if match:
        ctx = _field(n, poly)
        return ResolvedInput(from_univariate(ctx, [(1, int(match.group(1)))]), ctx, spec)
    raise FunctionSpecError(f"unknown function spec '{fn}', expected {FN_SPEC_HELP}")
