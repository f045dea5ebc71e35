"""Compare the compiled and pure-Python kernels on identical workloads.

    python benchmarks/bench_backends.py [--runs 200] [--out bench.tsv]

Both backends consume the same random words, so the hop counts must agree;
the script checks that before reporting timings.
"""

import argparse
import time

from kleinroute import _backend
from kleinroute.lattice import GridParams
from kleinroute.output import OutputTable, emit_tsv
from kleinroute.router import EstimateConfig, estimate_edt
from kleinroute.sampler import ShortcutStream, build_radius_weights, draw_shortcuts

CASES = [
    GridParams(256, 1.0),
    GridParams(256, 2.0),
    GridParams(1024, 2.0),
    GridParams(2 ** 14, 2.0),
    GridParams(256, 3.5),
    GridParams(850, 2.0, 1, 60),
]


def bench_routing(params, runs, backend):
    cfg = EstimateConfig(runs=runs, seed=1, workers=1)
    est = estimate_edt(params, cfg, backend=backend)
    return est, est.wall_time_seconds


def bench_sampling(n, r, count, backend):
    stream = ShortcutStream(build_radius_weights(n, r), seed=1, backend=backend)
    start = time.perf_counter()
    draw_shortcuts((0, 0), n, stream, count)
    return time.perf_counter() - start, stream.proposed


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=200)
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()
    if "cython" not in _backend.BACKENDS:
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")

    table = OutputTable(["task", "n", "r", "p", "q", "python_s", "cython_s", "speedup", "ns_per_proposal_cython"],
                        metadata={"runs": args.runs, "samples": args.samples})
    for params in CASES:
        py, t_py = bench_routing(params, args.runs, "python")
        cy, t_cy = bench_routing(params, args.runs, "cython")
        if (py.mean_hops, py.proposed) != (cy.mean_hops, cy.proposed):
            raise SystemExit(f"backends disagree on {params}")
        table.add("route", params.n, params.r, params.p, params.q, t_py, t_cy, t_py / t_cy,
                  1e9 * t_cy / max(cy.proposed, 1))
    for n, r in [(16, 0.0), (1024, 1.0), (1024, 3.0)]:
        t_py, _ = bench_sampling(n, r, args.samples, "python")
        t_cy, proposed = bench_sampling(n, r, args.samples, "cython")
        table.add("sample", n, r, 0, 0, t_py, t_cy, t_py / t_cy, 1e9 * t_cy / proposed)
    emit_tsv(table, args.out)


if __name__ == "__main__":
    main()
