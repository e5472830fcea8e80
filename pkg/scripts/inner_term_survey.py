"""Round-trip random compositions and record how many terms the recovered inner polynomial has.

No bound on the inner term count is enforced anywhere; this reports observed maxima per term count of f.
"""
import argparse
import random
import time
from collections import defaultdict
from fractions import Fraction

from lacunary.decompose import sparse_decompose
from lacunary.sparse_poly import DensePoly, SparsePoly, compose_outer


def random_pair(rng, max_exp, max_terms):
    r = rng.randint(2, 6)
    g = DensePoly([Fraction(rng.randint(-3, 3)) for _ in range(r)] + [Fraction(1)])
    k = rng.randint(1, max_terms)
    exps = rng.sample(range(1, max_exp + 1), k)
    h = SparsePoly((e, Fraction(rng.choice([1, -1, 2, -3]))) for e in exps)
    return g, h


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--max-exp", type=int, default=10**4)
    ap.add_argument("--max-terms", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    worst = defaultdict(int)
    misses = 0
    start = time.perf_counter()
    for _ in range(args.pairs):
        g, h = random_pair(rng, args.max_exp, args.max_terms)
        f = compose_outer(g, h)
        results = sparse_decompose(f)
        if not results:
            misses += 1
            continue
        l = f.term_count
        worst[l] = max(worst[l], max(res.inner.term_count for res in results))
    print(f"{args.pairs} pairs in {time.perf_counter() - start:.1f}s, {misses} without any decomposition")
    for l in sorted(worst):
        print(f"  terms(f)={l:4d}  max terms(h)={worst[l]}")


if __name__ == "__main__":
    main()
