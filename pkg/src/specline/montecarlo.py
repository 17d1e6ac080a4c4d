"""Seeded Monte-Carlo studies of rank recovery and frequency error.

Each trial draws fresh frequencies, amplitudes and noise from its own
generator, runs the estimation pipeline, and reports whether the rank of
the optimal block-Toeplitz matrix equals the source count. A cell keeps
running trials until a target number of successes is reached (or a cap is
hit, which marks the cell as censored); the success probability is the
number of successes over the number of trials. Trials are counted in index
order, so results do not depend on the worker count.
"""

import csv
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .atomic_norm import (
    DenoiseProblem,
    NoiselessProblem,
    solve_denoise,
    solve_noiseless,
)
from .block_toeplitz import assemble, circular_distance, wrap_angle
from .config import SolverConfig
from .errors import DivergedError, NotConvergedError, SpeclineError
from .linalg import numerical_rank
from .signals import (
    NoiseSpec,
    SinusoidModel,
    add_noise,
    compute_tau,
    estimate_noise_variance,
    random_amplitudes,
    snr_to_sigma,
    synthesize,
)
from .vandermonde import decompose

CSV_COLUMNS = (
    "trial",
    "seed",
    "L",
    "snr_db",
    "rank_recovered",
    "freq_error",
    "solve_iterations",
    "wall_time_s",
)


@dataclass
class MonteCarloRecord:
    """One trial of a study cell."""

    trial: int
    seed: int
    L: int
    snr_db: float
    rank_recovered: bool
    freq_error: float
    solve_iterations: int
    wall_time_s: float


def matched_frequency_error(estimated, truth):
    """Norm of the frequency errors under the optimal circular matching.

    Pairs up estimated and true frequencies by minimizing total circular
    distance; with unequal counts the smaller set is matched completely.
    """
    estimated = np.atleast_1d(np.asarray(estimated, dtype=float))
    truth = np.atleast_1d(np.asarray(truth, dtype=float))
    if estimated.size == 0 or truth.size == 0:
        return float("nan") if estimated.size != truth.size else 0.0
    cost = circular_distance(truth[:, None], estimated[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.linalg.norm(cost[rows, cols]))


def trial_seed(master_seed, cell_index, trial_index):
    """Independent, recordable per-trial seed."""
    ss = np.random.SeedSequence([master_seed, cell_index, trial_index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _draw_frequencies(rng, L, min_separation, attempts=1000):
    for _ in range(attempts):
        thetas = wrap_angle(rng.uniform(-np.pi, np.pi, L))
        if L < 2 or min_separation is None:
            return thetas
        dist = circular_distance(thetas[:, None], thetas[None, :])
        if dist[~np.eye(L, dtype=bool)].min() >= min_separation:
            return thetas
    raise ValueError(
        f"could not draw {L} frequencies separated by {min_separation} "
        f"in {attempts} attempts"
    )


def run_trial(n, L, snr_db, seed, cfg=None, min_separation=None):
    """One trial: draw an instance, estimate, and score rank recovery."""
    cfg = cfg or SolverConfig.denoise()
    rng = np.random.default_rng(seed)
    thetas = _draw_frequencies(rng, L, min_separation)
    model = SinusoidModel(thetas, random_amplitudes(L, rng), n)
    sigma_w = snr_to_sigma(snr_db)
    y = add_noise(synthesize(model), NoiseSpec(sigma_w, rng))
    t0 = time.perf_counter()
    solution = None
    iterations = 0
    try:
        if sigma_w == 0:
            solution = solve_noiseless(NoiselessProblem(y), cfg)
        else:
            tau = compute_tau(np.sqrt(estimate_noise_variance(y)), n)
            if tau > 0:
                solution = solve_denoise(DenoiseProblem(y, tau=tau), cfg)
            else:
                solution = solve_noiseless(NoiselessProblem(y), cfg)
        iterations = solution.iterations
        w = np.linalg.eigvalsh(assemble(solution.sigma))
        recovered = numerical_rank(w, cfg.epsilon_rank) == L
    except (NotConvergedError, DivergedError) as err:
        recovered = False
        iterations = getattr(err, "iterations", cfg.max_iter)
    freq_error = None
    if recovered:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                spectrum = decompose(
                    solution.sigma, cfg.epsilon_rank, cfg.delta_theta
                )
            freq_error = matched_frequency_error(spectrum.thetas, model.frequencies)
        except SpeclineError:
            # a matrix of the right rank that does not decompose cleanly
            # does not count as a recovery
            recovered = False
            freq_error = None
    return MonteCarloRecord(
        trial=-1,
        seed=seed,
        L=L,
        snr_db=float(snr_db),
        rank_recovered=recovered,
        freq_error=freq_error,
        solve_iterations=iterations,
        wall_time_s=time.perf_counter() - t0,
    )


def _worker(args):
    return run_trial(*args)


def _limit_worker_threads():
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(var, "1")


def run_cell(
    n,
    L,
    snr_db,
    target_successes,
    max_trials,
    master_seed,
    cell_index=0,
    cfg=None,
    jobs=1,
    min_separation=None,
    executor=None,
):
    """Run trials of one (L, snr) cell until the success target or the cap.

    Returns the counted records in trial order; trials past the point where
    the target was reached are discarded, so the output is independent of
    the batch and worker layout.
    """
    cfg = cfg or SolverConfig.denoise()
    records = []
    successes = 0
    next_trial = 0
    batch_size = max(1, jobs)
    while successes < target_successes and next_trial < max_trials:
        batch = range(next_trial, min(next_trial + batch_size, max_trials))
        arglist = [
            (n, L, snr_db, trial_seed(master_seed, cell_index, i), cfg, min_separation)
            for i in batch
        ]
        if executor is not None:
            results = list(executor.map(_worker, arglist))
        else:
            results = [_worker(a) for a in arglist]
        for i, record in zip(batch, results):
            if successes >= target_successes:
                break
            records.append(replace(record, trial=i))
            successes += bool(record.rank_recovered)
        next_trial = records[-1].trial + 1
    return records


def summarize_cell(records, L, snr_db, target_successes):
    """Success probability and error quantiles of a finished cell."""
    successes = sum(r.rank_recovered for r in records)
    errors = sorted(r.freq_error for r in records if r.rank_recovered)
    quantiles = None
    if errors:
        q = np.quantile(errors, [0.0, 0.25, 0.5, 0.75, 1.0])
        quantiles = {
            "min": float(q[0]),
            "q25": float(q[1]),
            "median": float(q[2]),
            "q75": float(q[3]),
            "max": float(q[4]),
        }
    return {
        "L": int(L),
        "snr_db": float(snr_db),
        "target_successes": int(target_successes),
        "total_trials": len(records),
        "successes": int(successes),
        "success_probability": successes / len(records) if records else 0.0,
        "censored": successes < target_successes,
        "freq_error_quantiles": quantiles,
    }


def run_study(
    n,
    cells,
    target_successes,
    max_trials,
    master_seed,
    cfg=None,
    jobs=1,
    min_separation=None,
):
    """Run every (L, snr_db) cell of a study.

    Returns
    -------
    records : list of MonteCarloRecord
        All counted trials, cells concatenated in order.
    summaries : list of dict
        One summary per cell.
    """
    cfg = cfg or SolverConfig.denoise()
    executor = None
    if jobs > 1:
        executor = ProcessPoolExecutor(
            max_workers=jobs, initializer=_limit_worker_threads
        )
    try:
        records = []
        summaries = []
        for cell_index, (L, snr_db) in enumerate(cells):
            cell_records = run_cell(
                n,
                L,
                snr_db,
                target_successes,
                max_trials,
                master_seed,
                cell_index=cell_index,
                cfg=cfg,
                jobs=jobs,
                min_separation=min_separation,
                executor=executor,
            )
            records.extend(cell_records)
            summaries.append(summarize_cell(cell_records, L, snr_db, target_successes))
    finally:
        if executor is not None:
            executor.shutdown()
    return records, summaries


def write_csv(records, path):
    """Write trial records with the stable column set."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.trial,
                    r.seed,
                    r.L,
                    repr(r.snr_db),
                    "true" if r.rank_recovered else "false",
                    "" if r.freq_error is None else repr(r.freq_error),
                    r.solve_iterations,
                    f"{r.wall_time_s:.3f}",
                ]
            )
