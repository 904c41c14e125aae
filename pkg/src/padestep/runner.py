"""Runs independent jobs (sweeps, convergence levels, compare legs) concurrently."""

import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any

from padestep.errors import ParameterError
from padestep.models import RunResult

logger = logging.getLogger(__name__)


class Runner:
    """Executes named jobs on a thread pool and collects their results by name."""

    def __init__(self, max_concurrent: int = 4):
        if max_concurrent < 1:
            raise ParameterError(f"max_concurrent must be at least 1, got {max_concurrent}")
        self._max_concurrent = max_concurrent

    def run(self, jobs: dict[str, Callable[[], Any]]) -> RunResult:
        """Run every job; results and failures come back ordered by job name."""
        if not jobs:
            return RunResult()

        results: dict[str, Any] = {}
        failed: dict[str, BaseException] = {}

        with ThreadPoolExecutor(max_workers=self._max_concurrent) as executor:
            futures = {executor.submit(job): name for name, job in jobs.items()}
            for future in as_completed(futures):
                name = futures[future]
                try:
                    results[name] = future.result()
                except Exception as exc:
                    logger.exception("Job %s failed", name)
                    failed[name] = exc

        logger.debug("ran %d jobs, %d failed", len(jobs), len(failed))
        return RunResult(
            results={name: results[name] for name in sorted(results)},
            failed={name: failed[name] for name in sorted(failed)},
        )
