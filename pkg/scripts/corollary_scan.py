"""Scan exponent boxes for decomposable members of a fixed-coefficient family.

For a = (1, 2, 1) the members are expected to be the gcd family plus (2u, u+v, 2v).
"""
import argparse
import itertools
import math

from lacunary.param_enum import corollary_box_scan


def square_family(m):
    return len(m) == 3 and m[0] % 2 == 0 and m[2] % 2 == 0 and 2 * m[1] == m[0] + m[2]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", default="1,2,1")
    ap.add_argument("--box", type=int, nargs="+", default=[8, 12, 16])
    args = ap.parse_args()
    a = tuple(int(x) for x in args.a.split(","))
    for box in args.box:
        scan = corollary_box_scan(a, box)
        members = set(scan.members)
        unexplained = sorted(m for m in members if math.gcd(*m) < 2 and not square_family(m))
        total = math.comb(box, len(a))
        print(f"box={box}: {len(members)}/{total} decomposable, closure checks={scan.closure_checks}, "
              f"violations={len(scan.closure_violations)}, outside gcd/square families={unexplained}")
        if a == (1, 2, 1):
            predicted = {m for m in itertools.combinations(range(box, 0, -1), 3)
                         if math.gcd(*m) >= 2 or square_family(m)}
            print(f"  matches predicted set: {members == predicted}")


if __name__ == "__main__":
    main()
