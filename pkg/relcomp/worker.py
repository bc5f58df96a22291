import asyncio
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Optional

from relcomp.algebra.compose import (
    ComposeParams,
    bivariate_compose,
    brent_kung_compose,
    ceil_root,
    horner_compose,
    multipoint_eval_bivariate,
    nz_bivariate_compose,
    univariate_compose,
)
from relcomp.algebra.duality import compose_via_charpoly
from relcomp.algebra.errors import BadParameters, BlockTooSmall, MinimalPolynomialDefect, NonGeneric
from relcomp.algebra.bipoly import eval_y
from relcomp.algebra.relations import powers_AB
from relcomp.algebra.upoly import interpolate, multipoint_eval, subproduct_tree
from relcomp.instances import Instance
from relcomp.reports import RunReport, digest
from relcomp.utils import PhaseTimer

logger = logging.getLogger("worker")

COMPOSE_ALGOS = ("horner", "brent-kung", "relmat", "charpoly")
BIVARIATE_ALGOS = ("nz", "kronecker")


def _warn_small_field(p, n):
    if p < 4 * n * n:
        logger.warning(f"p={p} is below 4n^2={4 * n * n}; genericity is less likely")


# === JOBS ===


def compose_job(inst: Instance, algo: str, verify: bool = True) -> RunReport:
    """g(a) rem f with the chosen algorithm, re-checked against Horner."""
    if algo not in COMPOSE_ALGOS:
        raise BadParameters(f"unknown algorithm {algo!r}")
    f, a, g = inst.polys()
    n = int(f.degree)
    _warn_small_field(inst.p, n)
    report = RunReport(algo=algo, n=n)
    timer = PhaseTimer()

    if algo == "horner":
        with timer.phase("composition"):
            h = horner_compose(g, a, f)
    elif algo == "brent-kung":
        with timer.phase("composition"):
            h = brent_kung_compose(g, a, f)
    elif algo == "relmat":
        params = ComposeParams.for_degree(n)
        report.m, report.d, report.mu, report.delta = params.m, params.d, params.mu, params.delta
        try:
            h = univariate_compose(g, a, f, timer)
        except NonGeneric as e:
            logger.warning(f"NonGeneric input ({e.reason}); falling back to brent-kung")
            report.generic, report.fallback = False, "brent-kung"
            with timer.phase("fallback"):
                h = brent_kung_compose(g, a, f)
    else:
        try:
            with timer.phase("composition"):
                h = compose_via_charpoly(g, a, f)
        except MinimalPolynomialDefect as e:
            logger.warning(f"Characteristic polynomial route unavailable ({e}); falling back to brent-kung")
            report.generic, report.fallback = False, "brent-kung"
            with timer.phase("fallback"):
                h = brent_kung_compose(g, a, f)

    report.phases = dict(timer.phases)
    report.digest = digest(h.coeffs)
    if verify:
        report.verified = h == horner_compose(g, a, f)
    return report


def bivcompose_job(inst: Instance, algo: str, mu: Optional[int] = None, verify: bool = True) -> RunReport:
    """G(x, a) rem f, re-checked against Horner in y."""
    if algo not in BIVARIATE_ALGOS:
        raise BadParameters(f"unknown algorithm {algo!r}")
    f, a, _ = inst.polys()
    G = inst.bivariate()
    n = int(f.degree)
    report = RunReport(algo=algo, n=n, m=G.xbound, d=G.ybound)
    timer = PhaseTimer()

    if algo == "nz":
        with timer.phase("composition"):
            h = nz_bivariate_compose(G, a, f)
    else:
        if mu is None:
            mu = min(ceil_root(max(G.y_degree() + 1, 1), 3), n)
        elif mu > n:
            raise BadParameters(f"mu={mu} exceeds n={n}")
        report.mu = mu
        with timer.phase("basis"):
            A, B, basis = powers_AB(f, a, mu)
        report.delta = basis.delta
        try:
            with timer.phase("composition"):
                h = bivariate_compose(G, f, a, A, B, mu)
        except (NonGeneric, BlockTooSmall) as e:
            logger.warning(f"Fast path refused ({e}); falling back to nz")
            report.generic, report.fallback = False, "nz"
            with timer.phase("fallback"):
                h = nz_bivariate_compose(G, a, f)

    report.phases = dict(timer.phases)
    report.digest = digest(h.coeffs)
    if verify:
        report.verified = h == eval_y(G, a, f)
    return report


def mpe_job(inst: Instance, verify: bool = True) -> RunReport:
    """G at every point, re-checked point by point."""
    G = inst.bivariate()
    points = inst.points or []
    K = inst.spec
    report = RunReport(algo="mpe", n=len(points), m=G.xbound, d=G.ybound)
    report.mu = ceil_root(max(G.y_degree() + 1, 1), 3)
    timer = PhaseTimer()
    try:
        with timer.phase("composition"):
            values = multipoint_eval_bivariate(G, points)
    except NonGeneric as e:
        logger.warning(f"NonGeneric point set ({e.reason}); falling back to nz")
        report.generic, report.fallback = False, "nz"
        with timer.phase("fallback"):
            xs = [x for x, _ in points]
            f = subproduct_tree(xs, K)[-1][0]
            a = interpolate(K, xs, [y for _, y in points])
            values = multipoint_eval(nz_bivariate_compose(G, a, f), xs)

    report.phases = dict(timer.phases)
    report.digest = digest(values)
    if verify:
        report.verified = values == [G(x, y) for x, y in points]
    return report


# === WORKER ===


@dataclass
class Job:
    key: tuple
    func: Callable
    args: tuple = ()
    kwargs: dict = field(default_factory=dict)


@dataclass
class JobResult:
    key: tuple
    value: Any = None
    error: Optional[str] = None

    @property
    def failed(self):
        return self.error is not None


class BenchWorker:
    """Runs independent jobs in a thread pool; results come back sorted by key."""

    def __init__(self, threads=None, stop_when: Optional[Callable[[Any], bool]] = None):
        self.threads = threads or int(os.getenv("RELCOMP_THREADS", os.cpu_count() or 1))
        if self.threads < 1:
            raise ValueError("thread count must be positive")
        self.stop_when = stop_when
        self.stopped = False

    async def run(self, jobs):
        logger.info(f"Background worker started with {self.threads} threads, {len(jobs)} jobs.")
        queue = asyncio.Queue()
        for job in jobs:
            queue.put_nowait(job)
        results = []
        loop = asyncio.get_running_loop()

        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            async def consume():
                while not self.stopped:
                    try:
                        job = queue.get_nowait()
                    except asyncio.QueueEmpty:
                        return
                    results.append(await self.process_job(loop, executor, job))

            await asyncio.gather(*(consume() for _ in range(self.threads)))

        results.sort(key=lambda r: r.key)
        return results

    async def process_job(self, loop, executor, job):
        logger.info(f"Processing job {job.key}")
        try:
            value = await loop.run_in_executor(executor, partial(job.func, *job.args, **job.kwargs))
        except Exception as e:
            logger.error(f"Job {job.key} failed: {e}", exc_info=True)
            return JobResult(job.key, error=str(e))
        if self.stop_when is not None and self.stop_when(value):
            logger.error(f"Job {job.key} tripped the stop condition; aborting the sweep")
            self.stopped = True
        return JobResult(job.key, value=value)
