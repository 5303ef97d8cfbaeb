"""
Linearized polynomials L(x) = sum_i c_i x^(2^i) over F_{2^n}, their adjoints with respect to
<x, y> = Tr(xy), and the bentness criterion for quadratic forms x -> Tr(x L(x)).
"""

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from maxbent import models
from maxbent.config import settings
from maxbent.services.boolfun import BoolFun, is_bent
from maxbent.services.field import FieldCtx
from maxbent.utils import gf2_utils
from maxbent.utils.enums import Verdict
from maxbent.utils.logging_utils import logger

# above this degree kernels come from the matrix nullspace instead of a scan
KERNEL_SCAN_LIMIT = 12


@dataclass(frozen=True)
class LinPoly:
    """coeffs[i] is the coefficient of x^(2^i); exactly n of them."""

    ctx: FieldCtx
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(self.ctx.check(c) for c in self.coeffs)
        if len(coeffs) != self.ctx.n:
            raise ValueError(f"expected {self.ctx.n} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "LinPoly":
        return cls(ctx, (0,) * ctx.n)

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms: Iterable[Tuple[int, int]]) -> "LinPoly":
        """Build from (coefficient, i) pairs; exponents are taken mod n and repeated ones XOR together."""
        coeffs = [0] * ctx.n
        for coeff, i in terms:
            coeffs[int(i) % ctx.n] ^= ctx.check(coeff)
        return cls(ctx, tuple(coeffs))

    @classmethod
    def monomial(cls, ctx: FieldCtx, coeff: int, i: int) -> "LinPoly":
        return cls.from_terms(ctx, [(coeff, i)])

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "LinPoly":
        return cls.monomial(ctx, 1, 0)

    @classmethod
    def random(cls, ctx: FieldCtx, rng: np.random.Generator) -> "LinPoly":
        return cls(ctx, tuple(int(c) for c in rng.integers(0, ctx.order, size=ctx.n)))

    @classmethod
    def from_quadratic(cls, ctx: FieldCtx, monomials: Iterable[Tuple[int, int, int]]) -> "LinPoly":
        """
        L with Tr(x L(x)) = sum Tr(c x^(2^a + 2^b)) over the (c, a, b) monomials.

        Raising to 2^(n-b) inside the trace moves x^(2^b) to x, leaving c^(2^(n-b)) x^(2^(a-b)).
        """
        terms = []
        for c, a, b in monomials:
            b %= ctx.n
            terms.append((ctx.frob_pow(c, ctx.n - b), (a - b) % ctx.n))
        return cls.from_terms(ctx, terms)

    @property
    def n(self) -> int:
        return self.ctx.n

    def terms(self):
        return [(c, i) for i, c in enumerate(self.coeffs) if c]

    def __add__(self, other: "LinPoly") -> "LinPoly":
        if self.ctx != other.ctx:
            raise ValueError("linearized polynomials over different fields")
        return LinPoly(self.ctx, tuple(a ^ b for a, b in zip(self.coeffs, other.coeffs)))

    def __call__(self, x: int) -> int:
        return self.evaluate(x)

    def evaluate(self, x: int) -> int:
        result = 0
        for c, i in self.terms():
            result ^= self.ctx.mul(c, self.ctx.frob_pow(x, i))
        return result

    def evaluate_array(self, xs: Optional[np.ndarray] = None) -> np.ndarray:
        xs = self.ctx.elements if xs is None else np.asarray(xs, dtype=np.int64)
        result = np.zeros(xs.shape, dtype=np.int64)
        for c, i in self.terms():
            result ^= self.ctx.mul_array(c, self.ctx.frob_array(xs, i))
        return result

    def compose(self, inner: "LinPoly") -> "LinPoly":
        """(self o inner)(x) = sum_i c_i (sum_j d_j x^(2^j))^(2^i)."""
        terms = []
        for c, i in self.terms():
            for d, j in inner.terms():
                terms.append((self.ctx.mul(c, self.ctx.frob_pow(d, i)), i + j))
        return LinPoly.from_terms(self.ctx, terms)

    def to_matrix(self) -> np.ndarray:
        """n x n bit matrix whose column j is L(alpha^j) in the polynomial basis."""
        cols = self.evaluate_array(1 << np.arange(self.n, dtype=np.int64))
        return gf2_utils.from_columns(cols, self.n)


def adjoint(L: LinPoly) -> LinPoly:
    """c_i x^(2^i) -> c_i^(2^(n-i)) x^(2^(n-i)), the unique L* with Tr(x L(y)) = Tr(L*(x) y)."""
    n = L.n
    return LinPoly.from_terms(L.ctx, [(L.ctx.frob_pow(c, (n - i) % n), (n - i) % n) for c, i in L.terms()])


def is_invertible(L: LinPoly) -> bool:
    return gf2_utils.is_invertible(L.to_matrix())


def kernel(L: LinPoly) -> np.ndarray:
    """Sorted kernel members."""
    if L.n <= KERNEL_SCAN_LIMIT:
        xs = L.ctx.elements
        return xs[L.evaluate_array(xs) == 0]
    return np.array(gf2_utils.span(gf2_utils.nullspace(L.to_matrix())), dtype=np.int64)


def quadratic_form(L: LinPoly) -> BoolFun:
    """x -> Tr(x L(x))."""
    ctx = L.ctx
    return BoolFun(ctx.n, ctx.absolute_trace_array(ctx.mul_array(ctx.elements, L.evaluate_array())), ctx)


class QuadformCheck(NamedTuple):
    bent_by_spectrum: bool
    invertible_sum: bool

    @property
    def agrees(self) -> bool:
        return self.bent_by_spectrum == self.invertible_sum


def quadform_bent_check(L: LinPoly) -> QuadformCheck:
    """Bentness of Tr(x L(x)) by FWHT, next to the invertibility of L + L*."""
    if L.n % 2:
        raise ValueError(f"bentness needs even n, got {L.n}")
    return QuadformCheck(is_bent(quadratic_form(L)), is_invertible(L + adjoint(L)))


def run_lemma1_campaign(ctx: FieldCtx, trials: int, seed: Optional[int] = None) -> models.Lemma1Report:
    """Random L: the spectral and the operator-side verdicts must never disagree."""
    seed = settings.DEFAULT_SEED if seed is None else seed
    rng = np.random.Generator(np.random.Philox(seed))
    bent, disagreements = 0, 0
    for trial in range(trials):
        L = LinPoly.random(ctx, rng)
        check = quadform_bent_check(L)
        bent += check.bent_by_spectrum
        if not check.agrees:
            disagreements += 1
            logger.warning(f"Quadratic-form criterion disagrees on trial {trial}: {L.coeffs}")
    verdict = Verdict.VACUOUS if trials == 0 else (Verdict.FAIL if disagreements else Verdict.PASS)
    logger.info(f"Quadratic-form campaign on {ctx.spec}: {trials} trials, {bent} bent, {disagreements} disagreements")
    return models.Lemma1Report(
        n=ctx.n, trials=trials, seed=seed, bent_count=bent, disagreements=disagreements, verdict=verdict
    )


def adjoint_holds(L: LinPoly, pairs: Sequence[Tuple[int, int]]) -> bool:
    """Tr(x L(y)) == Tr(L*(x) y) on every (x, y) pair."""
    ctx, Lstar = L.ctx, adjoint(L)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    xs, ys = pairs[:, 0], pairs[:, 1]
    left = ctx.absolute_trace_array(ctx.mul_array(xs, L.evaluate_array(ys)))
    right = ctx.absolute_trace_array(ctx.mul_array(Lstar.evaluate_array(xs), ys))
    return bool(np.array_equal(left, right))
