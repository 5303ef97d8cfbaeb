"""
Boolean functions on F_{2^n} as truth tables, with Walsh spectra and the bent/plateaued tests.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Optional

import numpy as np

from maxbent.services.field import FieldCtx, parity


def fwht(values: np.ndarray) -> np.ndarray:
    """
    Fast Walsh-Hadamard transform along the last axis (natural order, no normalization).

    out[..., u] = sum_x values[..., x] * (-1)^(u.x), computed by the O(N log N) butterfly.
    Accepts a batch of rows, which is how the census transforms many components at once.
    """
    a = np.array(values, dtype=np.int64, copy=True)
    size = a.shape[-1]
    if size & (size - 1):
        raise ValueError(f"transform length {size} is not a power of two")
    lead = a.shape[:-1]
    h = 1
    while h < size:
        a = a.reshape(*lead, size // (2 * h), 2, h)
        x = a[..., 0, :]
        y = a[..., 1, :]
        a = np.stack((x + y, x - y), axis=-2)
        h *= 2
    return a.reshape(*lead, size)


def mobius(values: np.ndarray) -> np.ndarray:
    """Binary Moebius transform (truth table <-> ANF) along the last axis."""
    a = np.array(values, dtype=np.uint8, copy=True)
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        a = a.reshape(*lead, size // (2 * h), 2, h)
        a[..., 1, :] ^= a[..., 0, :]
        h *= 2
    return a.reshape(*lead, size)


@dataclass(frozen=True, eq=False)
class BoolFun:
    """
    f: F_2^n -> F_2 stored as a 0/1 uint8 vector; entry x is f(x) under the field encoding.

    When `ctx` is set the Walsh transform uses the trace form Tr(lam x); otherwise the
    dot product lam.x.
    """

    n: int
    tt: np.ndarray
    ctx: Optional[FieldCtx] = None

    def __post_init__(self):
        tt = np.asarray(self.tt, dtype=np.uint8)
        if tt.shape != (1 << self.n,):
            raise ValueError(f"truth table length {tt.size} does not match n={self.n}")
        if np.any(tt > 1):
            raise ValueError("truth table entries must be 0 or 1")
        object.__setattr__(self, "tt", tt)
        if self.ctx is not None and self.ctx.n != self.n:
            raise ValueError(f"field degree {self.ctx.n} does not match n={self.n}")

    def __eq__(self, other):
        return isinstance(other, BoolFun) and self.n == other.n and np.array_equal(self.tt, other.tt)

    @property
    def weight(self) -> int:
        return int(self.tt.sum())

    @cached_property
    def signs(self) -> np.ndarray:
        return 1 - 2 * self.tt.astype(np.int64)

    def to_int(self) -> int:
        """Integer whose bit x is f(x)."""
        packed = np.packbits(self.tt, bitorder="little").tobytes()
        return int.from_bytes(packed, "little")

    def to_hex(self) -> str:
        width = max(1, (1 << self.n) // 4)
        return f"{self.to_int():0{width}x}"

    @classmethod
    def from_int(cls, n: int, value: int, ctx: Optional[FieldCtx] = None) -> "BoolFun":
        size = 1 << n
        if value < 0 or value >> size:
            raise ValueError(f"value does not fit a truth table of length {size}")
        raw = value.to_bytes(max(1, size // 8), "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]
        return cls(n, bits, ctx)

    @classmethod
    def from_hex(cls, n: int, text: str, ctx: Optional[FieldCtx] = None) -> "BoolFun":
        return cls.from_int(n, int(text.strip(), 16), ctx)

    @classmethod
    def from_function(cls, ctx: FieldCtx, fn: Callable[[int], int]) -> "BoolFun":
        return cls(ctx.n, np.array([fn(x) & 1 for x in range(ctx.order)], dtype=np.uint8), ctx)

    @classmethod
    def linear(cls, ctx: FieldCtx, c: int) -> "BoolFun":
        """x -> Tr(c x)."""
        return cls(ctx.n, ctx.absolute_trace_array(ctx.mul_array(ctx.elements, c)), ctx)

    @classmethod
    def constant(cls, n: int, value: int = 0, ctx: Optional[FieldCtx] = None) -> "BoolFun":
        return cls(n, np.full(1 << n, value & 1, dtype=np.uint8), ctx)


def dump_truth_tables(functions) -> str:
    """Truth-table file: header "n=<int>", then one LSB-first hex string per function."""
    functions = list(functions)
    if not functions:
        raise ValueError("nothing to write")
    n = functions[0].n
    if any(f.n != n for f in functions):
        raise ValueError("all functions in a file must share n")
    return "\n".join([f"n={n}"] + [f.to_hex() for f in functions]) + "\n"


def load_truth_tables(text: str, ctx: Optional[FieldCtx] = None) -> list:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("truth-table file must start with a header line 'n=<int>'")
    n = int(lines[0][2:])
    width = max(1, (1 << n) // 4)
    functions = []
    for number, line in enumerate(lines[1:], start=2):
        if len(line) != width:
            raise ValueError(f"line {number}: expected {width} hex digits for n={n}, got {len(line)}")
        functions.append(BoolFun.from_hex(n, line, ctx))
    return functions


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    """values[lam] = W_f(lam); exact 64-bit integers."""

    n: int
    values: np.ndarray

    @property
    def max_abs(self) -> int:
        return int(np.abs(self.values).max())

    def magnitudes(self) -> Dict[int, int]:
        """Histogram |W| -> number of lam."""
        mags, counts = np.unique(np.abs(self.values), return_counts=True)
        return {int(m): int(c) for m, c in zip(mags, counts)}

    def parseval_holds(self) -> bool:
        return int(np.sum(self.values * self.values)) == 1 << (2 * self.n)

    def __getitem__(self, lam: int) -> int:
        return int(self.values[lam])


def walsh_spectrum(f: BoolFun) -> WalshSpectrum:
    raw = fwht(f.signs)
    if f.ctx is not None:
        # W_f(lam) = sum (-1)^(f(x) + mask[lam].x)
        raw = raw[f.ctx.trace_masks]
    return WalshSpectrum(f.n, raw)


def naive_walsh(f: BoolFun) -> WalshSpectrum:
    """O(4^n) reference transform evaluated straight from the definition."""
    xs = np.arange(1 << f.n, dtype=np.int64)
    if f.ctx is not None:
        ctx = f.ctx
        products = ctx.mul_array(xs[:, None], xs[None, :])
        linear = ctx.absolute_trace_array(products)
    else:
        linear = parity(xs[:, None] & xs[None, :])
    exponents = (linear ^ f.tt[None, :]).astype(np.int64)
    return WalshSpectrum(f.n, np.sum(1 - 2 * exponents, axis=1))


def nonlinearity(f: BoolFun) -> int:
    return (1 << (f.n - 1)) - walsh_spectrum(f).max_abs // 2


def amplitude_from_magnitudes(n: int, magnitudes: Dict[int, int]) -> Optional[int]:
    """
    The t with every nonzero |W| equal to 2^((n+t)/2), or None when the spectrum is not
    plateaued.
    """
    nonzero = [m for m in magnitudes if m]
    if len(nonzero) != 1:
        return None
    peak = nonzero[0]
    if peak & (peak - 1):
        return None
    t = 2 * (peak.bit_length() - 1) - n
    if t < 0 or t > n:
        return None
    return t


def plateaued_amplitude(f: BoolFun) -> Optional[int]:
    return amplitude_from_magnitudes(f.n, walsh_spectrum(f).magnitudes())


def is_bent(f: BoolFun) -> bool:
    if f.n % 2:
        return False
    return bool(np.all(np.abs(fwht(f.signs)) == 1 << (f.n // 2)))


def algebraic_degree(f: BoolFun) -> int:
    anf = mobius(f.tt)
    monomials = np.nonzero(anf)[0]
    if monomials.size == 0:
        return 0
    return int(np.bitwise_count(monomials.astype(np.int64)).max())


def autocorrelation(f: BoolFun) -> np.ndarray:
    """Delta_f(a) = sum_x (-1)^(f(x) + f(x+a)), from the squared spectrum (dot-product indexing)."""
    squared = fwht(f.signs) ** 2
    return fwht(squared) >> f.n


def is_bent_by_autocorrelation(f: BoolFun) -> bool:
    """Independent check: f is bent iff every nonzero shift has zero autocorrelation."""
    if f.n % 2:
        return False
    return bool(np.all(autocorrelation(f)[1:] == 0))
