"""Sweep orchestration: configs, deterministic seeding, CSV persistence.

Every sweep expands to an ordered list of cells; cell i derives its seed
from (master_seed, i) and its trials from (cell seed, trial index). Cells
may run on a thread pool, but rows are always written in cell order, so the
emitted CSV is byte-identical for a given config regardless of parallelism.

CSV schema (one flat header for every sweep):
    sweep,n,d,m,s,eps,trials,failures,fail_rate,ci_low,ci_high,aux_name,aux_value,seed
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .bins import alias_virtual_bins, bins_with_load_at_least, expected_bins_with_load_at_least, throw_balls, virtual_group_extraction
from .collisions import inner_product_lemma_check
from .embedding import _sparse_gram, failure_probability, wilson_interval
from .instances import projection_norm_study, sample_basis_coordinates
from .linalg import interlacing_check
from .regression import (
    RegressionInstance,
    SketchFailureError,
    certificate_bound,
    error_ratio,
    exact_least_squares,
    sketch_and_solve,
)
from .seeding import derive_seed, generator
from .sketches import SketchSpec, identity_sketch, sample_sketch, sketch_columns

CSV_HEADER = "sweep,n,d,m,s,eps,trials,failures,fail_rate,ci_low,ci_high,aux_name,aux_value,seed"

SWEEP_KINDS = ("dim-frontier", "sparsity-phase", "sparsity-eps", "lemma-suite", "regress-demo")
_RATE_SWEEPS = ("dim-frontier", "sparsity-phase", "sparsity-eps")

DEFAULT_FRONTIER_M = (25, 50, 100, 200, 400, 800, 1600, 3200, 6400, 12800)
DEFAULT_PHASE_M = (40, 100, 400, 1600, 6400, 40000)


@dataclass(frozen=True)
class ExperimentConfig:
    sweep: str
    n: int | None = None
    d_grid: tuple[int, ...] = (10,)
    m_grid: tuple[int, ...] = ()
    s_grid: tuple[int, ...] = (1,)
    eps_grid: tuple[float, ...] = (0.3,)
    trials: int = 1000
    master_seed: int = 42
    out: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.sweep not in SWEEP_KINDS:
            raise ValueError(f"unknown sweep kind {self.sweep!r}")
        for name, grid in (("d", self.d_grid), ("m", self.m_grid), ("s", self.s_grid)):
            if any(v < 1 for v in grid):
                raise ValueError(f"{name} grid must be positive, got {grid}")
        if any(not (0.0 < e < 1.0) for e in self.eps_grid):
            raise ValueError(f"eps grid must lie in (0, 1), got {self.eps_grid}")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.sweep in _RATE_SWEEPS and self.trials < 100:
            raise ValueError(f"{self.sweep} estimates failure rates and needs trials >= 100")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")


@dataclass(frozen=True)
class TrialRecord:
    sweep: str
    n: int
    d: int
    m: int
    s: int               # 0 for dense sketches
    eps: float
    trials: int
    failures: int
    fail_rate: float
    ci_low: float
    ci_high: float
    aux_name: str
    aux_value: float | None
    seed: int

    def validate(self):
        if not (0 <= self.failures <= self.trials):
            raise ValueError(f"failures {self.failures} outside [0, {self.trials}]")
        if not (0.0 <= self.ci_low <= self.fail_rate <= self.ci_high <= 1.0):
            raise ValueError(
                f"rate {self.fail_rate} not inside CI [{self.ci_low}, {self.ci_high}]"
            )

    def to_csv_row(self) -> str:
        aux = "" if self.aux_value is None else repr(float(self.aux_value))
        return ",".join(
            [
                self.sweep,
                str(self.n),
                str(self.d),
                str(self.m),
                str(self.s),
                repr(float(self.eps)),
                str(self.trials),
                str(self.failures),
                repr(float(self.fail_rate)),
                repr(float(self.ci_low)),
                repr(float(self.ci_high)),
                self.aux_name,
                aux,
                str(self.seed),
            ]
        )


def write_csv(path, records) -> None:
    """Validate and write records in order; UTF-8, LF line endings."""
    path = Path(path)
    lines = [CSV_HEADER]
    for rec in records:
        rec.validate()
        lines.append(rec.to_csv_row())
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _run_cells(cells, cell_fn, jobs):
    """Evaluate cell_fn over enumerate(cells); results keep cell order."""
    if jobs <= 1:
        return [cell_fn(i, cell) for i, cell in enumerate(cells)]
    results = [None] * len(cells)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = {pool.submit(cell_fn, i, cell): i for i, cell in enumerate(cells)}
        for fut, i in futures.items():
            results[i] = fut.result()
    return results


# ---------------------------------------------------------------- dim-frontier


def run_dim_frontier(config: ExperimentConfig) -> list[TrialRecord]:
    """Failure rate of Gaussian sketches on random subspaces over an m grid."""
    m_grid = config.m_grid or DEFAULT_FRONTIER_M
    n = config.n or max(m_grid)
    if n < max(m_grid):
        raise ValueError(f"n={n} smaller than the largest sketch size {max(m_grid)}")
    cells = [
        (d, eps, m)
        for d in sorted(config.d_grid)
        for eps in sorted(config.eps_grid)
        for m in sorted(m_grid)
    ]

    def cell_fn(index, cell):
        d, eps, m = cell
        seed = derive_seed(config.master_seed, index)
        est = failure_probability(
            SketchSpec(n, m, "gaussian"), "random-rotation", d, eps, config.trials, seed
        )
        return [
            TrialRecord(
                "dim-frontier", n, d, m, 0, eps, est.trials, est.failures,
                est.rate, est.ci_low, est.ci_high, "", None, seed,
            )
        ]

    return [rec for batch in _run_cells(cells, cell_fn, config.jobs) for rec in batch]


def smallest_m_below(records, d, eps, threshold=1 / 3):
    """Smallest m in the emitted rows with fail_rate under the threshold."""
    hits = [r.m for r in records if r.d == d and r.eps == eps and r.fail_rate < threshold]
    return min(hits) if hits else None


# -------------------------------------------------------------- sparsity-phase


def _phase_cell_stats(n, d, m, s, eps, trials, cell_seed):
    """One (s, m) cell: failure count plus collision and stress summaries.

    Works directly on the sparse payload: the instance's d selected sketch
    columns are generated lazily (bit-identical to the full sketch) and the
    spectrum comes from their exact Gram matrix.
    """
    failures = 0
    c_sum = 0.0
    dev_sum = 0.0
    dev_trials = 0
    cols = np.arange(d)
    for i in range(trials):
        trial_seed = derive_seed(cell_seed, i)
        spec = SketchSpec(n, m, "sparse", s, derive_seed(trial_seed, 0))
        coords = sample_basis_coordinates(n, d, derive_seed(trial_seed, 1))
        rows, vals = sketch_columns(spec, coords)
        gram = _sparse_gram(rows, vals)
        eig = np.linalg.eigvalsh(gram)
        sig_min = math.sqrt(max(eig[0], 0.0))
        sig_max = math.sqrt(max(eig[-1], 0.0))
        if sig_min < 1.0 - eps or sig_max > 1.0 + eps:
            failures += 1
        # Signed-row classes of the selected columns (profiles of Pi U).
        lead = np.argmin(rows, axis=0)
        r = rows[lead, cols]
        z = vals[lead, cols]
        classes = 2 * r + (z < 0)
        sizes = np.bincount(classes)
        c_sum += float((sizes * (sizes - 1) // 2).sum())
        # Greedy within-class disjoint pairs; deviation of the pair stress norm from 1.
        order = np.argsort(classes, kind="stable")
        best = None
        j = 0
        while j + 1 < d:
            if classes[order[j]] == classes[order[j + 1]]:
                a, b = order[j], order[j + 1]
                stress = 0.5 * (gram[a, a] + gram[b, b]) + gram[a, b]
                dev = abs(stress - 1.0)
                best = dev if best is None else min(best, dev)
                j += 2
            else:
                j += 1
        if best is not None:
            dev_sum += best
            dev_trials += 1
    mean_c = c_sum / trials
    mean_dev = dev_sum / dev_trials if dev_trials else 0.0
    return failures, mean_c, mean_dev


def run_sparsity_phase(config: ExperimentConfig) -> list[TrialRecord]:
    """Failure rate of s-sparse sketches on basis-column subspaces over (s, m).

    Each cell emits two rows sharing the failure statistics: one carrying the
    mean collision count, one carrying the mean min-over-pairs stress
    deviation.
    """
    d = sorted(config.d_grid)[0]
    n = config.n or 100 * d * d
    m_grid = config.m_grid or DEFAULT_PHASE_M
    cells = [
        (eps, s, m)
        for eps in sorted(config.eps_grid)
        for s in sorted(config.s_grid)
        for m in sorted(m_grid)
        if s <= m
    ]

    def cell_fn(index, cell):
        eps, s, m = cell
        seed = derive_seed(config.master_seed, index)
        failures, mean_c, mean_dev = _phase_cell_stats(n, d, m, s, eps, config.trials, seed)
        low, high = wilson_interval(failures, config.trials)
        rate = failures / config.trials
        base = TrialRecord(
            config.sweep, n, d, m, s, eps, config.trials, failures,
            rate, low, high, "mean_collisions", mean_c, seed,
        )
        return [base, replace(base, aux_name="mean_min_stress_dev", aux_value=mean_dev)]

    return [rec for batch in _run_cells(cells, cell_fn, config.jobs) for rec in batch]


# ---------------------------------------------------------------- regress-demo


def _regress_trial_gaussian(n, d, m, eps, trial_seed):
    """Sketched regression through the rotational-invariance shortcut.

    For a Gaussian sketch, [Pi A, Pi b] equals in distribution G @ T where
    U T = [A b] is a thin factorization and G is i.i.d. N(0, 1/m); G is also
    exactly the sketched basis Pi U of span(A, b), so the embedding verdict
    and the solve stay coupled sample by sample.
    """
    rng = generator(trial_seed, 2)
    a = rng.standard_normal((n, d))
    x0 = rng.standard_normal(d)
    b = a @ x0 + rng.standard_normal(n)
    inst = RegressionInstance(a, b, trial_seed)
    exact = exact_least_squares(inst)

    mm = np.column_stack([a, b])
    q, t = np.linalg.qr(mm)
    g = generator(trial_seed, 0).standard_normal((m, q.shape[1])) / math.sqrt(m)
    spectrum = np.linalg.svd(g, compute_uv=False)
    passed = spectrum[-1] >= 1.0 - eps and spectrum[0] <= 1.0 + eps
    st = g @ t
    sa, sb = st[:, :d], st[:, d]
    sx = np.linalg.lstsq(sa, sb, rcond=None)[0]
    ratio = float(np.linalg.norm(a @ sx - b)) / exact.residual_norm if exact.residual_norm > 1e-12 else 1.0
    return passed, ratio


def _regress_trial_literal(n, d, m, s, kind, eps, trial_seed):
    from .embedding import embedding_check
    from .linalg import gram_schmidt

    rng = generator(trial_seed, 2)
    a = rng.standard_normal((n, d))
    x0 = rng.standard_normal(d)
    b = a @ x0 + rng.standard_normal(n)
    inst = RegressionInstance(a, b, trial_seed)
    exact = exact_least_squares(inst)
    if kind == "identity":
        sketch = identity_sketch(n)
    else:
        sketch = sample_sketch(SketchSpec(n, m, kind, s if kind == "sparse" else None, derive_seed(trial_seed, 0)))
    span = gram_schmidt(np.column_stack([a, b]))
    report = embedding_check(sketch, span, eps)
    try:
        sketched = sketch_and_solve(inst, sketch)
    except SketchFailureError:
        # Rank loss counts as a failed trial; there is no ratio to report.
        return False, None
    return report.passed, error_ratio(exact, sketched)


def run_regress_demo(config: ExperimentConfig, kind: str = "gaussian") -> list[TrialRecord]:
    """Exact vs sketched least squares; emits the certificate bound per cell
    and the measured error ratio per trial."""
    n = config.n or 2000
    d = sorted(config.d_grid)[0]
    if kind == "identity":
        m_grid = (n,)
    else:
        m_grid = config.m_grid or (min(n, 8 * (d + 1)),)
    cells = [(eps, m) for eps in sorted(config.eps_grid) for m in sorted(m_grid)]
    s = sorted(config.s_grid)[0] if kind == "sparse" else 0

    def cell_fn(index, cell):
        eps, m = cell
        seed = derive_seed(config.master_seed, index)
        records = []
        fail_total = 0
        trial_rows = []
        for i in range(config.trials):
            trial_seed = derive_seed(seed, i)
            if kind == "gaussian":
                passed, ratio = _regress_trial_gaussian(n, d, m, eps, trial_seed)
            else:
                passed, ratio = _regress_trial_literal(n, d, m, s, kind, eps, trial_seed)
            fail = 0 if passed else 1
            fail_total += fail
            low, high = wilson_interval(fail, 1)
            trial_rows.append(
                TrialRecord(
                    "regress-demo", n, d, m, s, eps, 1, fail, float(fail),
                    low, high, "error_ratio", ratio, trial_seed,
                )
            )
        low, high = wilson_interval(fail_total, config.trials)
        records.append(
            TrialRecord(
                "regress-demo", n, d, m, s, eps, config.trials, fail_total,
                fail_total / config.trials, low, high,
                "certificate_bound", certificate_bound(eps), seed,
            )
        )
        records.extend(trial_rows)
        return records

    return [rec for batch in _run_cells(cells, cell_fn, config.jobs) for rec in batch]


# ----------------------------------------------------------------- lemma-suite


@dataclass(frozen=True)
class LemmaOutcome:
    name: str
    statistic: float
    bound: float
    comparison: str      # "<=" or ">="
    checks: int
    violations: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _lemma_projection(trials, seed) -> LemmaOutcome:
    n, m = 400, 100
    violations = 0
    worst = 0.0
    for scale in (1.0, 2.0):
        study = projection_norm_study(n, m, np.full(n, scale), trials, derive_seed(seed, int(scale)))
        stderr = study.sample_std / math.sqrt(trials)
        z = abs(study.empirical_mean - study.predicted_center) / stderr
        worst = max(worst, z)
        if z > 4.0:
            violations += 1
    return LemmaOutcome("projection-norm", worst, 4.0, "<=", 2, violations,
                        "z-score of the Monte Carlo mean against the trace center")


def _lemma_interlacing(trials, seed) -> LemmaOutcome:
    rng = generator(seed)
    violations = 0
    for _ in range(trials):
        n = int(rng.integers(1, 12))
        m = int(rng.integers(n + 1, n + 12))
        a = rng.standard_normal((n, m))
        res = interlacing_check(a, rng.standard_normal(m))
        violations += not res.interlaces
    return LemmaOutcome("interlacing", float(violations), 0.0, "<=", trials, violations,
                        "count of random append-a-row instances whose spectra fail to nest")


def _lemma_dot_product(trials, seed) -> LemmaOutcome:
    rng = generator(seed)
    dim = 6
    raw = rng.standard_normal((trials, 2, dim))
    raw /= np.linalg.norm(raw, axis=2, keepdims=True)
    report = inner_product_lemma_check([(row[0], row[1]) for row in raw])
    z = report.mean / report.stderr if report.stderr else 0.0
    return LemmaOutcome("nonnegative-dot-product", z, -4.0, ">=", 1, int(report.mean_flag),
                        "mean inner product of i.i.d. unit-vector pairs, in standard errors")


def _lemma_tail_bound(trials, seed) -> LemmaOutcome:
    delta = 0.25
    rng = generator(seed)
    hit = rng.random(trials) < 1.0 / (1.0 + delta)
    e1 = np.zeros(3)
    e1[0] = 1.0
    pairs = [(e1, -delta * e1 if h else e1) for h in hit]
    report = inner_product_lemma_check(pairs, delta_grid=(delta,))
    frac, bound = report.tail_fractions[0], report.tail_bounds[0]
    slack = 4 * math.sqrt(max(frac * (1 - frac), 1.0 / trials) / trials)
    return LemmaOutcome("not-negative-often", frac, bound + slack,
                        "<=", 1, int(report.flagged),
                        f"tail Pr(X <= -{delta}) of the boundary fixture vs 1/(1+delta) plus 4 stderr")


def _lemma_uniform_bins(trials, seed) -> LemmaOutcome:
    d, m, t = 1000, 100, 3
    runs = max(100, trials // 10)
    counts = np.array([
        bins_with_load_at_least(throw_balls(d, m, seed=derive_seed(seed, i)), t)
        for i in range(runs)
    ])
    expected = expected_bins_with_load_at_least(d, m, t)
    stderr = counts.std(ddof=1) / math.sqrt(runs)
    z = abs(float(counts.mean()) - expected) / stderr
    return LemmaOutcome("uniform-balls-bins", z, 4.0, "<=", runs, int(z > 4.0),
                        f"z-score of mean #bins with load >= {t} vs the exact binomial tail")


def _lemma_nonuniform_bins(trials, seed) -> LemmaOutcome:
    d = m = 10_000
    alpha, t = 0.5, 4
    rng = generator(seed, 99)
    weights = np.exp(rng.standard_normal(m))
    p = weights / weights.sum()
    table = alias_virtual_bins(p)
    mass_err = float(np.abs(table.attributed_mass() - p).max())
    groups = virtual_group_extraction(d, p, t, derive_seed(seed, 1))
    bound = d ** (1 - alpha) / 2
    violations = int(mass_err > 1e-12) + int(len(groups) < bound)
    return LemmaOutcome("nonuniform-balls-bins", float(len(groups)), bound, ">=",
                        2, violations,
                        f"virtual-bin collision groups (alias mass error {mass_err:.2e})")


def run_lemma_suite(config: ExperimentConfig):
    """Run every lemma check; returns (records, outcomes). A violation in any
    outcome is the caller's signal to exit nonzero."""
    checks = [
        _lemma_projection,
        _lemma_interlacing,
        _lemma_dot_product,
        _lemma_tail_bound,
        _lemma_uniform_bins,
        _lemma_nonuniform_bins,
    ]
    outcomes = _run_cells(
        list(range(len(checks))),
        lambda i, _: checks[i](config.trials, derive_seed(config.master_seed, i)),
        config.jobs,
    )
    records = []
    for i, out in enumerate(outcomes):
        low, high = wilson_interval(out.violations, out.checks)
        records.append(
            TrialRecord(
                "lemma-suite", 0, 0, 0, 0, 0.0, out.checks, out.violations,
                out.violations / out.checks, low, high, out.name, out.statistic,
                derive_seed(config.master_seed, i),
            )
        )
    return records, list(outcomes)


def run_sweep(config: ExperimentConfig) -> list[TrialRecord]:
    if config.sweep == "dim-frontier":
        return run_dim_frontier(config)
    if config.sweep in ("sparsity-phase", "sparsity-eps"):
        return run_sparsity_phase(config)
    if config.sweep == "regress-demo":
        return run_regress_demo(config)
    records, _ = run_lemma_suite(config)
    return records
