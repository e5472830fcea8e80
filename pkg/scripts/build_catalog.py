"""Build decomposition catalogs for small shapes and print their sizes and timings.

    python3 scripts/build_catalog.py --shapes 1,2,1 2,2,1 3,2,1 --out catalogs/
"""
import argparse
import json
import time
from pathlib import Path

from lacunary.config import CatalogCaps
from lacunary.param_enum import build_catalog


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shapes", nargs="+", default=["1,2,1", "2,2,1", "1,3,1", "2,3,1", "3,2,1"],
                    help="l,ell,B triples")
    ap.add_argument("--out", type=Path, help="directory for catalog JSON files")
    args = ap.parse_args()
    caps = CatalogCaps(l=8, ell=8, B=4)
    for spec in args.shapes:
        l, ell, B = map(int, spec.split(","))
        start = time.perf_counter()
        cat = build_catalog(l, ell, B, caps)
        elapsed = time.perf_counter() - start
        ranks = sorted(e.lattice.rank for e in cat.entries)
        print(f"l={l} ell={ell} B={B}: terms={len(cat.terms)} entries={len(cat.entries)} "
              f"pruned={cat.stats.pruned} max_rank={max(ranks)} {elapsed:.2f}s")
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            path = args.out / f"catalog_{l}_{ell}_{B}.json"
            path.write_text(json.dumps(cat.to_json(), sort_keys=True, indent=2) + "\n")


if __name__ == "__main__":
    main()
