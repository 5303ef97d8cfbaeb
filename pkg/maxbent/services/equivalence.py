"""
EA and CCZ transforms of (n, n)-functions acting on value tables and graphs.

Graph points (x, y) are encoded as z = x | (y << n).
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from maxbent import models
from maxbent.config import settings
from maxbent.services import vectorial
from maxbent.services.vectorial import VecFun
from maxbent.utils import gf2_utils
from maxbent.utils.enums import CczSampler, EquivMode, Verdict
from maxbent.utils.logging_utils import logger
from maxbent.utils.parallel_utils import parallel_map


class NotAFunctionGraph(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> matrix x + constant on integer-encoded bit vectors."""

    matrix: np.ndarray
    constant: int = 0

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=np.uint8) & 1)
        object.__setattr__(self, "constant", int(self.constant))
        if self.constant >> self.dim_out:
            raise ValueError(f"constant {self.constant:#x} wider than {self.dim_out} bits")

    def __eq__(self, other):
        return (
            isinstance(other, AffineMap)
            and np.array_equal(self.matrix, other.matrix)
            and self.constant == other.constant
        )

    @property
    def dim_out(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim_in(self) -> int:
        return self.matrix.shape[1]

    @property
    def is_invertible(self) -> bool:
        return gf2_utils.is_invertible(self.matrix)

    def __call__(self, points) -> np.ndarray:
        return gf2_utils.apply_to_points(self.matrix, points) ^ np.int64(self.constant)

    def linear(self) -> "AffineMap":
        return AffineMap(self.matrix, 0)

    def inverse(self) -> "AffineMap":
        inv = gf2_utils.inverse(self.matrix)
        return AffineMap(inv, gf2_utils.matvec(inv, self.constant))

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self o inner."""
        return AffineMap(
            gf2_utils.matmul(self.matrix, inner.matrix),
            gf2_utils.matvec(self.matrix, inner.constant) ^ self.constant,
        )

    @classmethod
    def identity(cls, size: int) -> "AffineMap":
        return cls(gf2_utils.identity(size), 0)

    @classmethod
    def zero(cls, dim_out: int, dim_in: int) -> "AffineMap":
        return cls(np.zeros((dim_out, dim_in), dtype=np.uint8), 0)

    @classmethod
    def random(cls, dim_out: int, dim_in: int, rng: np.random.Generator) -> "AffineMap":
        return cls(gf2_utils.random_matrix(dim_out, dim_in, rng), int(rng.integers(0, 1 << dim_out)))

    @classmethod
    def random_permutation(cls, size: int, rng: np.random.Generator) -> "AffineMap":
        matrix, _ = gf2_utils.random_invertible(size, rng)
        return cls(matrix, int(rng.integers(0, 1 << size)))


# acting on graph points of an (n, n)-function
AffineMap2n = AffineMap


def swap_map(n: int) -> AffineMap2n:
    """(x, y) -> (y, x)."""
    matrix = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    matrix[:n, n:] = gf2_utils.identity(n)
    matrix[n:, :n] = gf2_utils.identity(n)
    return AffineMap(matrix, 0)


def shear_map(n: int, d: int, w: int) -> AffineMap2n:
    """(x, y) -> (x + d (w.y), y); unipotent, hence invertible."""
    matrix = gf2_utils.identity(2 * n)
    for r in range(n):
        for c in range(n):
            if (d >> r) & 1 and (w >> c) & 1:
                matrix[r, n + c] = 1
    return AffineMap(matrix, 0)


@dataclass(frozen=True)
class EATriple:
    """F' = L o F o Lin + A."""

    L: AffineMap
    Lin: AffineMap
    A: AffineMap

    def __post_init__(self):
        if not self.L.is_invertible:
            raise ValueError("output map L is not a permutation")
        if not self.Lin.is_invertible:
            raise ValueError("input map Lin is not a permutation")
        if self.A.dim_in != self.Lin.dim_out or self.A.dim_out != self.L.dim_out:
            raise ValueError("dimensions of A do not match L and Lin")

    @classmethod
    def identity(cls, n: int, m: Optional[int] = None) -> "EATriple":
        m = n if m is None else m
        return cls(AffineMap.identity(m), AffineMap.identity(n), AffineMap.zero(m, n))


def apply_ea(F: VecFun, t: EATriple) -> VecFun:
    if t.Lin.dim_in != F.n or t.L.dim_in != F.m:
        raise ValueError(f"triple dimensions do not match ({F.n}, {F.m})")
    xs = np.arange(1 << F.n, dtype=np.int64)
    table = t.L(F.table[t.Lin(xs)]) ^ t.A(xs)
    return VecFun(F.n, F.m, table, F.ctx)


def invert_ea(t: EATriple) -> EATriple:
    """The triple undoing `t`: F = L^-1 o F' o Lin^-1 + (M_L^-1 o A o Lin^-1)."""
    L_inv, Lin_inv = t.L.inverse(), t.Lin.inverse()
    return EATriple(L_inv, Lin_inv, L_inv.linear().compose(t.A).compose(Lin_inv))


def ea_as_ccz(t: EATriple) -> AffineMap2n:
    """
    The graph map of an EA transform: (x, y) -> (Lin^-1(x), L(y) + A(Lin^-1(x))).

    Block form [[Linv, 0], [A Linv, L]] acting on x | (y << n).
    """
    n, m = t.Lin.dim_in, t.L.dim_in
    Lin_inv = t.Lin.inverse()
    matrix = np.zeros((n + m, n + m), dtype=np.uint8)
    matrix[:n, :n] = Lin_inv.matrix
    matrix[n:, :n] = gf2_utils.matmul(t.A.matrix, Lin_inv.matrix)
    matrix[n:, n:] = t.L.matrix
    low = Lin_inv.constant
    high = t.L.constant ^ gf2_utils.matvec(t.A.matrix, Lin_inv.constant) ^ t.A.constant
    return AffineMap(matrix, low | (high << n))


def graph_points(F: VecFun) -> np.ndarray:
    xs = np.arange(1 << F.n, dtype=np.int64)
    return xs | (F.table << F.n)


def apply_ccz(F: VecFun, m: AffineMap2n) -> VecFun:
    n = F.n
    if F.m != n:
        raise ValueError("graph maps need n = m")
    if m.dim_in != 2 * n or not m.is_invertible:
        raise ValueError(f"graph map must be an invertible {2 * n}x{2 * n} affine map")
    image = m(graph_points(F))
    xs, ys = image & ((1 << n) - 1), image >> n
    if np.unique(xs).size != xs.size:
        raise NotAFunctionGraph("not a function graph: first coordinates collide")
    table = np.empty(1 << n, dtype=np.int64)
    table[xs] = ys
    return VecFun(n, n, table, F.ctx)


# === Sampling ===


def _rng(seed: Optional[int], rng: Optional[np.random.Generator]) -> np.random.Generator:
    if rng is not None:
        return rng
    seed = settings.DEFAULT_SEED if seed is None else seed
    return np.random.Generator(np.random.Philox(seed))


def random_ea(n: int, seed: Optional[int] = None, rng: Optional[np.random.Generator] = None) -> EATriple:
    rng = _rng(seed, rng)
    return EATriple(AffineMap.random_permutation(n, rng), AffineMap.random_permutation(n, rng), AffineMap.random(n, n, rng))


def random_ccz(
    n: int,
    seed: Optional[int] = None,
    sampler: CczSampler = CczSampler.shear,
    rng: Optional[np.random.Generator] = None,
) -> AffineMap2n:
    """
    One invertible affine map of F_2^(2n).

    `uniform` draws by rejection on rank. `shear` draws E2 o S o E1 with EA graph maps E1, E2 and a
    shear S(x, y) = (x + d (w.y), y); far more of these send a graph to a graph.
    """
    rng = _rng(seed, rng)
    if CczSampler(sampler) == CczSampler.uniform:
        return AffineMap.random_permutation(2 * n, rng)
    first = ea_as_ccz(random_ea(n, rng=rng))
    second = ea_as_ccz(random_ea(n, rng=rng))
    d = int(rng.integers(1, 1 << n))
    w = int(rng.integers(1, 1 << n))
    return second.compose(shear_map(n, d, w)).compose(first)


# === Invariance experiment ===


def _trial(job) -> models.InvarianceTrial:
    F, index, mode, sampler, seq, baseline, retry_cap = job
    rng = np.random.Generator(np.random.Philox(seq))
    if mode == EquivMode.ea:
        transformed, attempts = apply_ea(F, random_ea(F.n, rng=rng)), 1
    else:
        transformed, attempts = None, 0
        while attempts < retry_cap:
            attempts += 1
            try:
                transformed = apply_ccz(F, random_ccz(F.n, sampler=sampler, rng=rng))
                break
            except NotAFunctionGraph:
                continue
        if transformed is None:
            return models.InvarianceTrial(index=index, accepted=False, attempts=attempts)

    census = vectorial.bent_census(transformed, override=True, workers=1)
    violation = census.is_max != baseline.is_max
    if mode == EquivMode.ea:
        violation = violation or census.bent_count != baseline.bent_count
    return models.InvarianceTrial(
        index=index,
        accepted=True,
        attempts=attempts,
        bent_count=census.bent_count,
        is_max=census.is_max,
        violation=violation,
    )


def invariance_experiment(
    F: VecFun,
    trials: int,
    seed: Optional[int] = None,
    mode: EquivMode = EquivMode.ea,
    sampler: CczSampler = CczSampler.shear,
    guard: Optional[int] = None,
    override: bool = False,
    retry_cap: Optional[int] = None,
    workers: Optional[int] = None,
) -> models.InvarianceReport:
    """
    Re-run the census after random transforms. EA must keep the bent count; CCZ must keep
    whether the count is maximal.
    """
    mode, sampler = EquivMode(mode), CczSampler(sampler)
    seed = settings.DEFAULT_SEED if seed is None else seed
    retry_cap = settings.CCZ_RETRY_CAP if retry_cap is None else retry_cap
    baseline = vectorial.bent_census(F, guard=guard, override=override, workers=workers)

    children = np.random.SeedSequence(seed).spawn(trials) if trials else []
    jobs = [(F, index, mode, sampler, seq, baseline, retry_cap) for index, seq in enumerate(children)]
    results: List[models.InvarianceTrial] = parallel_map(_trial, jobs, workers)

    accepted = sum(r.accepted for r in results)
    violations = sum(r.violation for r in results)
    if violations:
        verdict = Verdict.FAIL
        logger.warning(f"Invariance experiment ({mode.value}): {violations} violations in {trials} trials")
    elif accepted == 0:
        verdict = Verdict.VACUOUS
    else:
        verdict = Verdict.PASS
    if mode == EquivMode.ccz and accepted < trials:
        logger.warning(f"{trials - accepted} CCZ trials found no function graph within {retry_cap} samples")

    return models.InvarianceReport(
        mode=mode,
        trials=trials,
        seed=seed,
        baseline_bent_count=baseline.bent_count,
        baseline_is_max=baseline.is_max,
        accepted=accepted,
        violations=violations,
        results=results,
        verdict=verdict,
    )


def acceptance_ratio(size: int, samples: int, seed: Optional[int] = None) -> Tuple[float, int]:
    """Fraction of uniform bit matrices that are invertible, and the number of draws it took."""
    rng = _rng(seed, None)
    draws = 0
    for _ in range(samples):
        _, attempts = gf2_utils.random_invertible(size, rng)
        draws += attempts
    return samples / draws, draws
