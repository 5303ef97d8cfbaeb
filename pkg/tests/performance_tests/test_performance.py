import json
import logging
import time
from functools import wraps
from typing import Any, Dict, Optional

import pytest

from maxbent.models import FamilyParams
from maxbent.services import constructions, diffspec, vectorial
from maxbent.services.field import ctx_build

logger = logging.getLogger(__name__)
logging.basicConfig(level=logging.INFO)

# seconds allowed for one exhaustive census on a desktop machine
CENSUS_BUDGETS = {8: 5.0, 10: 20.0, 12: 120.0}


def time_it(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        start = time.time()
        result = func(*args, **kwargs)
        elapsed = time.time() - start
        return result, elapsed

    return wrapper


def format_time(seconds):
    minutes = seconds // 60
    seconds = seconds % 60
    return f"{int(minutes)}:{seconds:05.2f}"


class PerformanceTester:
    def __init__(self, ks=(4, 5, 6), workers: Optional[int] = None):
        self.ks = ks
        self.workers = workers
        self.times: Dict[str, float] = {}

    @time_it
    def census(self, k: int):
        ctx = ctx_build(2 * k)
        return vectorial.bent_census(constructions.binomial(ctx, 1), override=True, workers=self.workers)

    @time_it
    def binomial_spectrum(self, k: int):
        return diffspec.verify_binomial_spectrum(1, k, override=True)

    @time_it
    def bent_alpha(self, k: int):
        params = FamilyParams(k=k, i=1)
        return constructions.verify_bent_alpha_theorem(params, ctx_build(2 * k), override=True, workers=self.workers)

    def run_test_suite(self) -> Dict[str, Any]:
        logger.info("Starting performance test suite...")
        results = {}
        for k in self.ks:
            report, elapsed = self.census(k)
            self.times[f"census n={2 * k}"] = elapsed
            results[f"census n={2 * k}"] = f"{report.bent_count} bent components in {format_time(elapsed)}"
            _, elapsed = self.binomial_spectrum(k)
            self.times[f"binomial-diff k={k}"] = elapsed
            _, elapsed = self.bent_alpha(k)
            self.times[f"bent-alpha k={k}"] = elapsed
        results["total"] = f"Total time for all operations: {format_time(sum(self.times.values()))}"
        return results


@pytest.mark.slow
@pytest.mark.parametrize("n", sorted(CENSUS_BUDGETS))
def test_census_within_budget(n):
    tester = PerformanceTester()
    report, elapsed = tester.census(n // 2)
    logger.info(f"Census n={n}: {format_time(elapsed)}")
    assert report.bent_count == (1 << n) - (1 << (n // 2))
    assert elapsed < CENSUS_BUDGETS[n]


@pytest.mark.slow
def test_suite_runs():
    results = PerformanceTester(ks=(2, 3, 4)).run_test_suite()
    assert "total" in results


if __name__ == "__main__":
    with_workers = PerformanceTester(workers=4)
    logger.info(json.dumps(with_workers.run_test_suite(), indent=4))
