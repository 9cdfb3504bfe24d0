import asyncio
import logging
import os

from .errors import EXIT_RUNTIME, ClosedLoopError

log = logging.getLogger(__name__)


async def run_seed(job, cfg, seed_dir, semaphore):
    """
    Runs one seed of an experiment in a worker thread.

    This coroutine:
    - Uses a semaphore to limit the number of seeds in flight.
    - Points the config at the seed's own output directory.
    - Turns any error into an outcome instead of cancelling the rest; library
      errors keep their exit code, anything else gets the runtime one.

    Parameters:
    - job (Callable[[ExperimentConfig], dict]): The subcommand body; returns
      an outcome dict with at least "status" and "exit_code".
    - cfg (ExperimentConfig): Config already carrying the seed.
    - seed_dir (str): Output directory for this seed.
    - semaphore (asyncio.Semaphore): Semaphore used to control concurrency.
    """
    async with semaphore:
        try:
            return await asyncio.to_thread(job, cfg.with_output_dir(seed_dir))
        except ClosedLoopError as e:
            log.error("seed %d: %s", cfg.seed, e)
            return {"status": "error", "exit_code": e.exit_code, "error": str(e)}
        except Exception as e:
            log.exception("seed %d failed", cfg.seed)
            return {"status": "error", "exit_code": EXIT_RUNTIME, "error": str(e)}


async def run_seeds(job, seeded, max_concurrent=1):
    """
    Runs `job` for several seeds with a concurrency limit.

    This coroutine:
    - Accepts a list of (config, output directory) pairs.
    - Ensures every output directory exists.
    - Returns the outcomes in input order.

    Parameters:
    - job (Callable[[ExperimentConfig], dict]): The subcommand body.
    - seeded (List[Tuple[ExperimentConfig, str]]): Config per seed and its
      output directory.
    - max_concurrent (int): Maximum number of seeds run at once (default is 1).
    """
    semaphore = asyncio.Semaphore(max(1, max_concurrent))
    tasks = []
    for cfg, seed_dir in seeded:
        os.makedirs(seed_dir, exist_ok=True)

        # coroutine for each seed
        tasks.append(run_seed(job, cfg, seed_dir, semaphore))

    # make it happen
    return await asyncio.gather(*tasks)
