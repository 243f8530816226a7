"""Compare the compiled and pure-numpy conditional kernels on a real sweep.

Packs one enumerated structure population and times eval_block over a band
of formulas with both backends, checking that the outputs agree bit for bit.
The compiled kernel pays a one-time compilation cost on its first call, so
that call is reported separately from the steady-state timings.

Usage: python benchmarks/bench_kernels.py [--population M_f] [--repeat 3]
"""

import argparse
import time

import numpy as np

from cfworlds import batch, enumeration
from cfworlds.formula import parse


FORMULAS = (
    "[X1<-1]X2=1",
    "[X1<-1](X2=1 & X1=1) | [X2<-0]X1=0",
    "[X1<-1;X2<-0]X1=1 -> [X2<-0]X2=0",
    "(X1=1 ~> (X2=1 ~> X1=0)) -> !(X1=1 & X2=1)",
    "!([X1<-1]X2=1 & [X2<-1]X1=0) | []X1=0",
)


def run(population: str, repeat: int) -> int:
    atoms = tuple(
        (x, v)
        for x, r in enumeration.population_vocab(population).items()
        for v in r
    )
    t0 = time.time()
    pack = batch.pack_population(population, atoms)
    n_structs, n_worlds = pack.val.shape[:2]
    print(f"packed {population}: {n_structs} structures x {n_worlds} worlds "
          f"in {time.time() - t0:.2f}s")

    formulas = [parse(t) for t in FORMULAS]
    backends = ["numpy"]
    if batch.HAS_NUMBA:
        f = formulas[0]
        t0 = time.time()
        batch.eval_block(pack, f, force_backend="numba")
        print(f"numba first call (compilation included): {time.time() - t0:.2f}s")
        backends.append("numba")
    else:
        print("numba not importable; timing numpy only")

    agree = True
    for text, f in zip(FORMULAS, formulas):
        row = {}
        grids = {}
        for backend in backends:
            best = float("inf")
            for _ in range(repeat):
                t0 = time.time()
                grids[backend] = batch.eval_block(pack, f, force_backend=backend)
                best = min(best, time.time() - t0)
            row[backend] = best
        line = "  ".join(f"{b}: {row[b] * 1000:8.1f} ms" for b in backends)
        if len(backends) == 2:
            same = bool(np.array_equal(grids["numpy"], grids["numba"]))
            agree &= same
            line += f"  speedup x{row['numpy'] / row['numba']:.1f}"
            line += "" if same else "  MISMATCH"
        print(f"{line}  {text}")

    if len(backends) == 2:
        print("backends agree" if agree else "BACKENDS DISAGREE")
        return 0 if agree else 1
    return 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--population", default="M_f",
                    help="enumerated class to pack (default M_f)")
    ap.add_argument("--repeat", type=int, default=3,
                    help="timing repetitions, best-of reported")
    args = ap.parse_args()
    return run(args.population, args.repeat)


if __name__ == "__main__":
    raise SystemExit(main())
