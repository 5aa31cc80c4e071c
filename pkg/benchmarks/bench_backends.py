"""Compare the bulk-evaluation backends on a generated population.

Three ways to answer the same selection:

  compiled   index + C kernels (the default when the extension built)
  pure       index + the plain-Python kernels
  interp     bind once, then walk individuals with the tree evaluator

Usage:
    python benchmarks/bench_backends.py [--n 20000] [--repeat 5] [--seed 0]
"""

import argparse
import time

from owlseg import _kernels_py
from owlseg.engine import OntologyIndex, _run, backend_name
from owlseg.filters import _eval_bound, bind, parse_filter
from owlseg.fixtures import (
    PopulationParams,
    build_citizen_schema,
    generate_population,
)

try:
    from owlseg import _speedups
except ImportError:
    _speedups = None

FILTERS = (
    "livesIn = :City0",
    "type = :Person",
    "type = :Man and dateOfBirth < '1970-01-01'",
    "livesIn/isLocatedIn = :Country0",
    "not (lastName = 'Smith' or lastName = 'Khan') "
    "and dateOfBirth >= '1955-01-01'",
)


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000, help="persons to generate")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"active backend: {backend_name()}"
          + ("" if _speedups else "  (extension not built; compiled column skipped)"))
    t0 = time.perf_counter()
    o = generate_population(build_citizen_schema(),
                            PopulationParams(args.n, seed=args.seed))
    print(f"generated {len(o.individuals)} individuals "
          f"in {time.perf_counter() - t0:.2f}s")
    t0 = time.perf_counter()
    idx = OntologyIndex(o)
    print(f"built index in {time.perf_counter() - t0 :.3f}s "
          f"(shared by compiled and pure)\n")

    width = max(len(t) for t in FILTERS)
    header = (f"{'filter':<{width}} {'compiled':>11} {'pure':>11} "
              f"{'interp':>11}  speedup")
    print(header)
    print("-" * len(header))
    for text in FILTERS:
        bound = bind(parse_filter(text, o.namespaces), o)

        def run_pure():
            return _run(bound, idx, kernels=_kernels_py)

        def run_interp():
            return bytearray(
                1 if _eval_bound(bound, ind, o) else 0
                for _, ind in sorted(o.individuals.items()))

        pure_s = best_of(run_pure, args.repeat)
        interp_s = best_of(run_interp, args.repeat)
        if _speedups is not None:
            def run_compiled():
                return _run(bound, idx, kernels=_speedups)
            compiled_s = best_of(run_compiled, args.repeat)
            assert bytes(run_compiled()) == bytes(run_pure())
            compiled_col = f"{compiled_s * 1e3:9.2f}ms"
            speedup = f"{interp_s / compiled_s:6.1f}x vs interp"
        else:
            compiled_col = f"{'-':>11}"
            speedup = f"{interp_s / pure_s:6.1f}x pure vs interp"
        assert bytes(run_interp()) == bytes(run_pure())
        print(f"{text:<{width}} {compiled_col} {pure_s * 1e3:9.2f}ms "
              f"{interp_s * 1e3:9.2f}ms  {speedup}")


if __name__ == "__main__":
    main()
