"""Time the compiled alignment DP against the pure-Python one.

    python3 benchmarks/bench_kernel.py --sizes 100 300 1000 --repeat 3
"""

import argparse
import statistics
import sys
import time

from tdcorpus.aligner import AlignParams, kernel
from tdcorpus.aligner.dictionary import similarity_rows
from tdcorpus.aligner.align import align_corpus
from tdcorpus.synth import BitextGenerator


def bitext(n, seed):
    """About ``n`` sentences per side from the synthetic generator."""
    gen = BitextGenerator(seed=seed)
    src, tgt = [], []
    while len(src) < n:
        d = gen.document(20)
        src += d.src
        tgt += d.tgt
    return src[:n], tgt[:n]


def time_call(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times), out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--sizes", type=int, nargs="+", default=[100, 300, 1000])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--python-max", type=int, default=1000, help="skip the Python kernel above this size")
    p.add_argument("--dictionary", action="store_true", help="include pass-2 similarity arrays")
    args = p.parse_args(argv)

    if kernel.compiled_dp_align is None:
        print("compiled kernel not built; only the Python kernel is available", file=sys.stderr)
    params = AlignParams()
    prior = params.prior_costs()
    print(f"{'n':>7} {'compiled s':>11} {'python s':>10} {'speedup':>8}  identical")
    for n in args.sizes:
        src, tgt = bitext(n, args.seed)
        ls = [s.char_len for s in src]
        lt = [t.char_len for t in tgt]
        sim = None
        if args.dictionary:
            d = align_corpus([(src, tgt)], params).dictionary
            sim = similarity_rows(src, tgt, d)

        def run(fn):
            return lambda: fn(ls, lt, prior, params.c, params.s2, sim, params.dict_weight)

        fast = slow = None
        if kernel.compiled_dp_align is not None:
            fast = time_call(run(kernel.compiled_dp_align), args.repeat)
        if n <= args.python_max:
            slow = time_call(run(kernel.python_dp_align), args.repeat)
        cols = [f"{n:>7}", f"{fast[0]:>11.4f}" if fast else f"{'-':>11}",
                f"{slow[0]:>10.4f}" if slow else f"{'-':>10}"]
        if fast and slow:
            cols += [f"{slow[0] / fast[0]:>7.0f}x", f"  {fast[2] == slow[2]}"]
        else:
            cols += [f"{'-':>8}", "  -"]
        print(" ".join(cols))
    return 0


if __name__ == "__main__":
    sys.exit(main())
