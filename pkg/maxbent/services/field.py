"""
Arithmetic in F_{2^n} over a polynomial basis.

An element is the integer 0..2^n-1 whose bit j is its coordinate on alpha^j, alpha being a
root of the defining polynomial. Scalar operations work on Python ints; the `*_array`
variants take numpy int64 arrays and are what the spectral code uses.
"""

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, List, Optional, Union

import numpy as np

from maxbent.utils.logging_utils import logger

MIN_DEGREE = 2
MAX_DEGREE = 24
# log/antilog tables up to this degree, shift-and-reduce above
TABLE_DEGREE_LIMIT = 16

_FIELD_SPEC_RE = re.compile(r"^\s*n\s*=\s*(\d+)\s*(?:,\s*poly\s*=\s*(0x[0-9a-fA-F]+|0b[01]+|\d+)\s*)?$")

ArrayLike = Union[np.ndarray, int, Iterable[int]]


class FieldError(ValueError):
    """Raised for invalid field parameters or subfield requests."""

    pass


# === Polynomials over F_2 as integers ===


def degree(poly: int) -> int:
    return poly.bit_length() - 1


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-polynomials."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_mod(a: int, mod: int) -> int:
    mod_degree = degree(mod)
    while a and degree(a) >= mod_degree:
        a ^= mod << (degree(a) - mod_degree)
    return a


def poly_mulmod(a: int, b: int, mod: int) -> int:
    return poly_mod(clmul(a, b), mod)


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def is_irreducible(poly: int) -> bool:
    """Ben-Or test: f of degree n is irreducible iff gcd(f, x^(2^d) - x) = 1 for 1 <= d <= n/2."""
    n = degree(poly)
    if n < 1:
        return False
    if n == 1:
        return True
    x_power = 0b10
    for _ in range(n // 2):
        x_power = poly_mulmod(x_power, x_power, poly)
        if poly_gcd(poly, x_power ^ 0b10) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(n: int) -> int:
    """The registry polynomial: the numerically smallest irreducible of degree n."""
    if not MIN_DEGREE <= n <= MAX_DEGREE:
        raise FieldError(f"unsupported degree: {n}")
    for poly in range((1 << n) | 1, 1 << (n + 1), 2):
        if is_irreducible(poly):
            return poly
    raise FieldError(f"no irreducible polynomial of degree {n}")  # pragma: no cover


def _prime_factors(value: int) -> List[int]:
    factors = []
    p = 2
    while p * p <= value:
        if value % p == 0:
            factors.append(p)
            while value % p == 0:
                value //= p
        p += 1
    if value > 1:
        factors.append(value)
    return factors


def _poly_powmod(base: int, exponent: int, mod: int) -> int:
    result = 1
    while exponent:
        if exponent & 1:
            result = poly_mulmod(result, base, mod)
        base = poly_mulmod(base, base, mod)
        exponent >>= 1
    return result


def find_generator(n: int, poly: int) -> int:
    """Smallest element of multiplicative order 2^n - 1."""
    group_order = (1 << n) - 1
    cofactors = [group_order // p for p in _prime_factors(group_order)]
    for candidate in range(2, 1 << n):
        if all(_poly_powmod(candidate, c, poly) != 1 for c in cofactors):
            return candidate
    # F_2^* style degenerate groups never occur for n >= 2
    raise FieldError("no generator found")  # pragma: no cover


def parity(values: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(values) & 1).astype(np.uint8)


# === Field context ===


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """
    F_{2^n} defined by an irreducible `poly` (bit j = coefficient of x^j).

    Immutable; the lookup tables are built lazily on first use and shared afterwards.
    """

    n: int
    poly: int

    def __post_init__(self):
        if not MIN_DEGREE <= self.n <= MAX_DEGREE:
            raise FieldError(f"unsupported degree: {self.n}")
        if degree(self.poly) != self.n:
            raise FieldError(f"polynomial {self.poly:#x} does not have degree {self.n}")
        if not is_irreducible(self.poly):
            raise FieldError(f"reducible polynomial {self.poly:#x}")

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.n, self.poly) == (other.n, other.poly)

    def __hash__(self):
        return hash((self.n, self.poly))

    def __repr__(self):
        return f"FieldCtx({self.spec})"

    @property
    def order(self) -> int:
        return 1 << self.n

    @property
    def spec(self) -> str:
        return format_field_spec(self)

    @property
    def uses_tables(self) -> bool:
        return self.n <= TABLE_DEGREE_LIMIT

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @cached_property
    def generator(self) -> int:
        return find_generator(self.n, self.poly)

    @cached_property
    def _tables(self):
        q1 = self.order - 1
        exp = np.zeros(2 * q1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        value = 1
        for power in range(q1):
            exp[power] = value
            log[value] = power
            value = poly_mulmod(value, self.generator, self.poly)
        exp[q1:] = exp[:q1]
        logger.debug(f"Built log/antilog tables for {self.spec} (generator {self.generator:#x})")
        return exp, log

    # --- scalar operations ---

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.order:
            raise FieldError(f"{a:#x} is not an element of F_2^{self.n}")
        return a

    def mul(self, a: int, b: int) -> int:
        a, b = int(a), int(b)
        if a == 0 or b == 0:
            return 0
        if self.uses_tables:
            exp, log = self._tables
            return int(exp[log[a] + log[b]])
        return poly_mulmod(a, b, self.poly)

    def power(self, a: int, e: int) -> int:
        a, e = int(a), int(e)
        if e < 0:
            a, e = self.inverse(a), -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.uses_tables:
            exp, log = self._tables
            return int(exp[(int(log[a]) * e) % (self.order - 1)])
        return _poly_powmod(a, e % (self.order - 1) or (self.order - 1), self.poly)

    def inverse(self, a: int) -> int:
        if int(a) == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.power(a, self.order - 2)

    def frob_pow(self, a: int, i: int) -> int:
        """a^(2^i), exponent taken modulo n."""
        a = int(a)
        for _ in range(int(i) % self.n):
            a = self.mul(a, a)
        return a

    def check_subfield(self, r: int) -> int:
        r = int(r)
        if r < 1 or self.n % r:
            raise FieldError(f"invalid subfield: {r} does not divide {self.n}")
        return r

    def in_subfield(self, a: int, r: int) -> bool:
        r = self.check_subfield(r)
        return self.frob_pow(a, r) == int(a)

    def relative_trace(self, a: int, top: int, r: int) -> int:
        """Tr^top_r(a) = a + a^(2^r) + ... + a^(2^(top-r)) for a in F_(2^top)."""
        self.check_subfield(top)
        if r < 1 or top % r:
            raise FieldError(f"invalid subfield: {r} does not divide {top}")
        result, term = 0, int(a)
        for _ in range(top // r):
            result ^= term
            term = self.frob_pow(term, r)
        return result

    def trace_to(self, a: int, r: int) -> int:
        return self.relative_trace(a, self.n, self.check_subfield(r))

    def subfield_elements(self, r: int) -> np.ndarray:
        """Sorted encodings of F_(2^r) inside this field."""
        r = self.check_subfield(r)
        if r == self.n:
            return self.elements.copy()
        xs = self.elements
        return xs[self.frob_array(xs, r) == xs]

    # --- vectorized operations ---

    def mul_array(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        if self.uses_tables:
            exp, log = self._tables
            product = exp[log[a] + log[b]]
            return np.where((a == 0) | (b == 0), np.int64(0), product)
        result = np.zeros(a.shape, dtype=np.int64)
        shifted = a.copy()
        top = np.int64(self.order)
        for j in range(self.n):
            result ^= np.where((b >> j) & 1, shifted, np.int64(0))
            shifted = shifted << 1
            shifted = np.where(shifted & top, shifted ^ np.int64(self.poly), shifted)
        return result

    def power_array(self, xs: ArrayLike, e: int) -> np.ndarray:
        """xs^e elementwise with 0^0 = 1 (polynomial convention)."""
        xs = np.asarray(xs, dtype=np.int64)
        e = int(e)
        if e == 0:
            return np.ones(xs.shape, dtype=np.int64)
        if self.uses_tables:
            exp, log = self._tables
            reduced = e % (self.order - 1)
            values = exp[(log[xs] * reduced) % (self.order - 1)]
            return np.where(xs == 0, np.int64(0), values)
        result = np.ones(xs.shape, dtype=np.int64)
        base = xs.copy()
        while e:
            if e & 1:
                result = self.mul_array(result, base)
            base = self.mul_array(base, base)
            e >>= 1
        return result

    def frob_array(self, xs: ArrayLike, i: int) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        i = int(i) % self.n
        if i == 0:
            return xs.copy()
        if self.uses_tables:
            return self.power_array(xs, 1 << i)
        for _ in range(i):
            xs = self.mul_array(xs, xs)
        return xs

    def relative_trace_array(self, xs: ArrayLike, top: int, r: int) -> np.ndarray:
        self.check_subfield(top)
        if r < 1 or top % r:
            raise FieldError(f"invalid subfield: {r} does not divide {top}")
        term = np.asarray(xs, dtype=np.int64)
        result = np.zeros(term.shape, dtype=np.int64)
        for _ in range(top // r):
            result ^= term
            term = self.frob_array(term, r)
        return result

    def trace_to_array(self, xs: ArrayLike, r: int) -> np.ndarray:
        return self.relative_trace_array(xs, self.n, self.check_subfield(r))

    @cached_property
    def trace_mask(self) -> int:
        """Bit j = Tr(alpha^j); the absolute trace is then parity(x & trace_mask)."""
        return sum(self.trace_to(1 << j, 1) << j for j in range(self.n))

    def absolute_trace_array(self, xs: ArrayLike) -> np.ndarray:
        return parity(np.asarray(xs, dtype=np.int64) & np.int64(self.trace_mask))

    @cached_property
    def trace_masks(self) -> np.ndarray:
        """
        mask[lam] has bit j = Tr(lam * alpha^j), so that Tr(lam * y) = parity(mask[lam] & y).

        This is the change of coordinates between the trace form and the dot product.
        """
        masks = np.zeros(self.order, dtype=np.int64)
        for j in range(self.n):
            bits = self.absolute_trace_array(self.mul_array(self.elements, 1 << j)).astype(np.int64)
            masks |= bits << j
        return masks


# === Module-level operations ===


def ctx_build(n: int, poly: Optional[int] = None) -> FieldCtx:
    """Validated field context; the registry polynomial is used when `poly` is omitted."""
    if not MIN_DEGREE <= int(n) <= MAX_DEGREE:
        raise FieldError(f"unsupported degree: {n}")
    if poly is None:
        poly = smallest_irreducible(int(n))
    return FieldCtx(int(n), int(poly))


def mul(ctx: FieldCtx, a: int, b: int) -> int:
    return ctx.mul(a, b)


def frob_pow(ctx: FieldCtx, a: int, i: int) -> int:
    if i < 0:
        raise FieldError("Frobenius exponent must be non-negative")
    return ctx.frob_pow(a, i)


def trace_to(ctx: FieldCtx, a: int, r: int) -> int:
    return ctx.trace_to(a, r)


def in_subfield(ctx: FieldCtx, a: int, r: int) -> bool:
    return ctx.in_subfield(a, r)


def parse_field_spec(spec: str) -> FieldCtx:
    """Parse "n=<int>[,poly=0x<hex>]"."""
    match = _FIELD_SPEC_RE.match(spec or "")
    if not match:
        raise FieldError(f"malformed field spec: {spec!r}")
    n = int(match.group(1))
    poly = int(match.group(2), 0) if match.group(2) else None
    return ctx_build(n, poly)


def format_field_spec(ctx: FieldCtx) -> str:
    return f"n={ctx.n},poly={ctx.poly:#x}"
