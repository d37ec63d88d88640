"""Compare the compiled word kernel against the pure-Python reference.

Two workloads: raw reduction throughput over the confluent system of the
order-27 exponent-3 group, and a full Knuth-Bendix completion (which
calls the reducer in its inner loop). Run:

    python3 benchmarks/bench_kernels.py
"""

import random
import time

from burnside import _purekernels as pure
from burnside import rewrite
from burnside.presentation import parse_presentation

try:
    from burnside import _speedups as fast
except ImportError:
    fast = None


def random_words(rank, count, max_len, seed=12345):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        w = []
        prev = None
        while len(w) < max_len:
            x = rng.randrange(2 * rank)
            if prev is not None and x == (prev ^ 1):
                continue
            w.append(x)
            prev = x
        out.append(tuple(w))
    return out


def bench_reduce(module, rules, num_symbols, words, repeats=5):
    index = module.build_index(rules, num_symbols)
    best = float("inf")
    checksum = 0
    for _ in range(repeats):
        t0 = time.perf_counter()
        total = 0
        for w in words:
            total += len(module.reduce_word(index, w))
        best = min(best, time.perf_counter() - t0)
        checksum = total
    return best, checksum


def bench_completion(env_pure):
    import importlib
    import os

    import burnside.kernels as kernels
    import burnside.rewrite as rw

    if env_pure:
        os.environ["BURNSIDE_PURE_PYTHON"] = "1"
    else:
        os.environ.pop("BURNSIDE_PURE_PYTHON", None)
    importlib.reload(kernels)
    importlib.reload(rw)
    p = parse_presentation("gens 2\nrel aaa\nrel bbb\nrel ababab\nrel aBaBaB\n")
    t0 = time.perf_counter()
    system = rw.complete_presentation(p)
    elapsed = time.perf_counter() - t0
    assert system.confluent
    return elapsed, len(system.rules)


def main():
    p = parse_presentation("gens 2\nrel aaa\nrel bbb\nrel ababab\nrel aBaBaB\n")
    system = rewrite.complete_presentation(p)
    words = random_words(2, 4000, 60)

    print(f"workload: {len(words)} random words, length 60, "
          f"{len(system.rules)}-rule confluent system")
    t_pure, c_pure = bench_reduce(pure, system.rules, 4, words)
    print(f"  pure-python reduce: {t_pure * 1000:8.1f} ms")
    if fast is not None:
        t_fast, c_fast = bench_reduce(fast, system.rules, 4, words)
        assert c_pure == c_fast, "kernels disagree"
        print(f"  compiled reduce:    {t_fast * 1000:8.1f} ms")
        print(f"  speedup:            {t_pure / t_fast:8.1f}x")
    else:
        print("  compiled kernel unavailable (built without the extension)")

    print("knuth-bendix completion of the order-27 presentation:")
    try:
        e_fast, nrules = bench_completion(env_pure=False)
        e_pure, _ = bench_completion(env_pure=True)
    finally:
        bench_completion(env_pure=False)  # leave modules on the default backend
    print(f"  pure-python: {e_pure * 1000:8.1f} ms  ({nrules} rules)")
    print(f"  compiled:    {e_fast * 1000:8.1f} ms")
    if e_fast > 0:
        print(f"  speedup:     {e_pure / e_fast:8.1f}x")


if __name__ == "__main__":
    main()
