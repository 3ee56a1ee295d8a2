"""Command-line harness: dataset generation, score comparison, deviation
Monte Carlo, and query-count benchmarking.

Every command is deterministic given --seed; rerunning writes byte-identical
files, with the single exception of the wall_ms column of bench output.
Trial-level work may run concurrently (LEVSKETCH_THREADS caps the workers)
without affecting results, because trial t always draws from the stream
seeded with seed XOR t. Row and trial indices on the command line and in
files are 1-based; the Python API is 0-based.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .diagnostics import concentration_ratios, deviation_bound
from .estimator import LeverageReport, qisls_all, write_report_csv
from .oracle import (exact_leverage, gen_example1, gen_example2,
                     numerical_rank, spectral_norm_and_kappa)
from .rng import trial_stream
from .sample_store import MatrixSampleStore, read_matrix_csv, write_matrix_csv
from .sketch import compute_params, qisvd

# sampled-dot floor: theoretical xi at desk scale implies sample counts
# beyond any budget, so the CLI never estimates below this precision
XI_FLOOR = 0.1


@dataclass(frozen=True)
class RunConfig:
    """Parsed flag set; `parse_argv(cfg.to_argv()) == cfg` for every
    command, which is the config round-trip the tests pin."""
    command: str
    output: str
    input: str | None = None
    family: str = "example1"
    m: tuple[int, ...] = (1000,)
    n: int = 100
    zero: int = 0
    r: int = 10
    kappa: float = 1.0
    a: int = 1
    b: int = 10
    seed: int = 0
    trials: int = 1
    epsilon: float = 0.5
    delta: float = 0.1
    k: int = 10
    p: int | None = None
    mode: str = "exact-dot"
    rows: tuple[int, ...] | None = None
    theta: float = 0.5

    def to_argv(self) -> list[str]:
        av = [self.command]
        if self.input is not None:
            av.append(self.input)
        if self.command == "gen":
            av += ["--family", self.family, "--m", str(self.m[0]),
                   "--n", str(self.n), "--zero", str(self.zero),
                   "--r", str(self.r), "--kappa", repr(self.kappa),
                   "--a", str(self.a), "--b", str(self.b),
                   "--seed", str(self.seed)]
        elif self.command == "compare":
            av += ["--seed", str(self.seed), "--trials", str(self.trials),
                   "--epsilon", repr(self.epsilon), "--delta", repr(self.delta),
                   "--k", str(self.k), "--mode", self.mode]
            if self.p is not None:
                av += ["--p", str(self.p)]
            if self.rows is not None:
                av += ["--rows", ",".join(str(i) for i in self.rows)]
        elif self.command == "concentration":
            av += ["--theta", repr(self.theta), "--p", str(self.p),
                   "--trials", str(self.trials), "--seed", str(self.seed)]
        elif self.command == "bench":
            av += ["--m", ",".join(str(v) for v in self.m),
                   "--n", str(self.n), "--zero", str(self.zero),
                   "--p", str(self.p), "--k", str(self.k),
                   "--trials", str(self.trials), "--seed", str(self.seed),
                   "--epsilon", repr(self.epsilon), "--delta", repr(self.delta)]
        av += ["-o", self.output]
        return av


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="levsketch",
                                  description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a benchmark matrix")
    gen.add_argument("--family", choices=("example1", "example2"),
                     default="example1")
    gen.add_argument("--m", type=_int_list, default=(1000,))
    gen.add_argument("--n", type=int, default=100)
    gen.add_argument("--zero", type=int, default=0,
                     help="columns to zero out (example1)")
    gen.add_argument("--r", type=int, default=10, help="rank (example2)")
    gen.add_argument("--kappa", type=float, default=1.0,
                     help="condition number (example2)")
    gen.add_argument("--a", type=int, default=1)
    gen.add_argument("--b", type=int, default=10,
                     help="largest singular value drawn from [a, b]")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", dest="output", required=True)

    cmp_ = sub.add_parser("compare",
                          help="approximate scores vs the exact oracle")
    cmp_.add_argument("input", help="matrix CSV")
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.add_argument("--trials", type=int, default=1)
    cmp_.add_argument("--epsilon", type=float, default=0.5)
    cmp_.add_argument("--delta", type=float, default=0.1)
    cmp_.add_argument("--k", type=int, default=10)
    cmp_.add_argument("--p", type=int, default=None,
                      help="practical sample count (omit for theoretical p)")
    cmp_.add_argument("--mode", choices=("exact-dot", "sampled-dot"),
                      default="exact-dot")
    cmp_.add_argument("--rows", type=_int_list, default=None,
                      help="1-based row subset, e.g. 5,17,99")
    cmp_.add_argument("-o", dest="output", required=True)

    conc = sub.add_parser("concentration",
                          help="Monte Carlo check of the deviation bound")
    conc.add_argument("input", help="matrix CSV")
    conc.add_argument("--theta", type=float, required=True)
    conc.add_argument("--p", type=int, required=True)
    conc.add_argument("--trials", type=int, required=True)
    conc.add_argument("--seed", type=int, default=0)
    conc.add_argument("-o", dest="output", required=True)

    bench = sub.add_parser("bench", help="per-score query counts and wall "
                           "time across matrix sizes (runs serially)")
    bench.add_argument("--m", type=_int_list, default=(1000, 4000, 16000))
    bench.add_argument("--n", type=int, default=100)
    bench.add_argument("--zero", type=int, default=70)
    bench.add_argument("--p", type=int, default=60)
    bench.add_argument("--k", type=int, default=20)
    bench.add_argument("--trials", type=int, default=1)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--epsilon", type=float, default=0.5)
    bench.add_argument("--delta", type=float, default=0.1)
    bench.add_argument("-o", dest="output", required=True)
    return top


def parse_argv(argv) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    fields = {f: getattr(ns, f) for f in RunConfig.__dataclass_fields__
              if hasattr(ns, f)}
    return RunConfig(**fields)


def _worker_count() -> int:
    return max(1, int(os.environ.get("LEVSKETCH_THREADS", "1")))


def _map_trials(fn, trials: int) -> list:
    workers = _worker_count()
    if workers <= 1 or trials <= 1:
        return [fn(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=min(workers, trials)) as pool:
        return list(pool.map(fn, range(trials)))


def _check_paths(cfg: RunConfig) -> None:
    if cfg.input is not None and os.path.abspath(cfg.input) == os.path.abspath(cfg.output):
        raise ValueError("input and output paths must be distinct")
    if cfg.trials < 1:
        raise ValueError("trials must be >= 1")


def cmd_gen(cfg: RunConfig) -> int:
    if len(cfg.m) != 1:
        raise ValueError("gen takes a single --m value")
    m = cfg.m[0]
    if cfg.family == "example1":
        a = gen_example1(m, cfg.n, cfg.zero, cfg.seed)
        meta = {"family": cfg.family, "seed": cfg.seed, "zero": cfg.zero}
    else:
        a = gen_example2(m, cfg.n, cfg.r, cfg.kappa, cfg.a, cfg.b, cfg.seed)
        meta = {"family": cfg.family, "seed": cfg.seed, "r": cfg.r,
                "kappa_target": cfg.kappa, "a": cfg.a, "b": cfg.b}
    rank = numerical_rank(a)
    spectral, kappa = spectral_norm_and_kappa(a)
    frob = float(np.sqrt((a * a).sum()))
    meta.update(rank=rank, frob_norm=frob, spectral_norm=spectral,
                kappa=kappa)
    write_matrix_csv(cfg.output, a, metadata=meta)
    print(f"wrote {cfg.output}: rank={rank} frob_norm={frob!r} kappa={kappa!r}")
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    _check_paths(cfg)
    a, _ = read_matrix_csv(cfg.input)
    store = MatrixSampleStore(a)
    exact = exact_leverage(a)
    spectral, kappa = spectral_norm_and_kappa(a)
    frob = float(np.sqrt(store.sq_frobenius))
    params = compute_params(cfg.epsilon, cfg.delta, cfg.k, kappa, spectral,
                            frob, p_override=cfg.p)
    if cfg.mode == "sampled-dot" and params.xi < XI_FLOOR:
        params = compute_params(cfg.epsilon, cfg.delta, cfg.k, kappa,
                                spectral, frob, p_override=cfg.p,
                                xi_override=XI_FLOOR)
    rows = None
    if cfg.rows is not None:
        rows = np.asarray(cfg.rows, dtype=np.int64) - 1
    print(f"oracle-assisted: kappa={kappa!r} spectral_norm={spectral!r}")

    def run_trial(t: int) -> LeverageReport:
        rng = trial_stream(cfg.seed, t)
        sketch = qisvd(store, params, rng)
        return qisls_all(store, sketch, params, rows=rows, mode=cfg.mode,
                         rng=rng, seed=cfg.seed ^ t, exact=exact)

    reports = _map_trials(run_trial, cfg.trials)
    mean_approx = np.mean([r.approx for r in reports], axis=0)
    row_idx = reports[0].rows
    exact_vals = exact[row_idx]
    abs_err = np.abs(mean_approx - exact_vals)
    top = int(np.argmax(mean_approx))
    agg = LeverageReport(rows=row_idx, approx=mean_approx, exact=exact_vals,
                         abs_err=abs_err, coherence_row=int(row_idx[top]),
                         coherence=float(mean_approx[top]), mode=cfg.mode,
                         seed=cfg.seed, params=params)
    write_report_csv(cfg.output, agg)
    oracle_top = row_idx[int(np.argmax(exact_vals))]
    agreement = float(np.mean([r.coherence_row == oracle_top for r in reports]))
    print(f"rows={row_idx.size} trials={cfg.trials} "
          f"max_abs_err={float(abs_err.max())!r} "
          f"mean_abs_err={float(abs_err.mean())!r} "
          f"median_abs_err={float(np.median(abs_err))!r} "
          f"coherence_agreement={agreement!r} "
          f"coherence_row={agg.coherence_row + 1}")
    return 0


def cmd_concentration(cfg: RunConfig) -> int:
    _check_paths(cfg)
    a, _ = read_matrix_csv(cfg.input)
    store = MatrixSampleStore(a)
    if cfg.theta <= 0.0:
        raise ValueError("theta must be positive")

    ratios = _map_trials(
        lambda t: concentration_ratios(store, cfg.p, trial_stream(cfg.seed, t)),
        cfg.trials)
    aat = np.array([r[0] for r in ratios])
    wtw = np.array([r[1] for r in ratios])
    bound = deviation_bound(cfg.theta, cfg.p)
    exceed_aat = float(np.mean(aat >= cfg.theta))
    exceed_wtw = float(np.mean(wtw >= cfg.theta))
    lines = [f"# theta={cfg.theta!r}", f"# p={cfg.p}",
             f"# trials={cfg.trials}", f"# seed={cfg.seed}",
             f"# bound={bound!r}", f"# exceed_aat={exceed_aat!r}",
             f"# exceed_wtw={exceed_wtw!r}", "trial,aat_ratio,wtw_ratio"]
    for t in range(cfg.trials):
        lines.append(f"{t + 1},{aat[t]!r},{wtw[t]!r}")
    with open(cfg.output, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"bound={bound!r} exceed_aat={exceed_aat!r} exceed_wtw={exceed_wtw!r}")
    return 0


def cmd_bench(cfg: RunConfig) -> int:
    _check_paths(cfg)
    # query counters are plain attributes, so bench always runs serially;
    # params here are practical-only (p and k drive everything measured)
    rows_out = []
    for m in cfg.m:
        a = gen_example1(m, cfg.n, cfg.zero, cfg.seed ^ m)
        store = MatrixSampleStore(a)
        frob = float(np.sqrt(store.sq_frobenius))
        params = compute_params(cfg.epsilon, cfg.delta, cfg.k, 1.0, frob,
                                frob, p_override=cfg.p)
        per_score = np.empty(cfg.trials)
        wall = np.empty(cfg.trials)
        for t in range(cfg.trials):
            rng = trial_stream(cfg.seed ^ m, t)
            sketch = qisvd(store, params, rng)
            before = store.queries
            start = time.perf_counter()
            qisls_all(store, sketch, params, mode="exact-dot",
                      rng=rng, seed=cfg.seed ^ m ^ t)
            wall[t] = (time.perf_counter() - start) * 1e3
            per_score[t] = (store.queries - before) / store.m
        rows_out.append((m, cfg.n, float(per_score.mean()), float(wall.mean())))
    lines = [f"# p={cfg.p}", f"# k={cfg.k}", f"# zero={cfg.zero}",
             f"# trials={cfg.trials}", f"# seed={cfg.seed}",
             "m,n,queries,wall_ms"]
    for m, n, q, w in rows_out:
        lines.append(f"{m},{n},{q!r},{w!r}")
    with open(cfg.output, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    for m, n, q, w in rows_out:
        print(f"m={m} n={n} queries_per_score={q!r} wall_ms={w!r}")
    return 0


_DISPATCH = {"gen": cmd_gen, "compare": cmd_compare,
             "concentration": cmd_concentration, "bench": cmd_bench}


def main(argv=None) -> int:
    cfg = parse_argv(argv if argv is not None else sys.argv[1:])
    try:
        return _DISPATCH[cfg.command](cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
