"""Print embedding capacity for a grid of integration parameters.

    python3 scripts/reproduce_capacity_table.py --size 512
"""

import argparse
import itertools
import timeit

from rdhei.codec import capacity

REFERENCE = {(1, 1): 193548, (1, 2): 161290, (2, 2): 96774, (2, 3): 86021, (2, 4): 80645, (3, 5): 55913}


def main():
    ap = argparse.ArgumentParser(description="embedding capacity table")
    ap.add_argument("--size", type=int, default=512, help="square image side")
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    print("n_white,n_black,ec_bits,bpp,expected")
    for nw, nb in itertools.product(range(1, args.max_n + 1), repeat=2):
        ec = capacity(args.size, args.size, nw, nb)
        ref = REFERENCE.get((nw, nb), "") if args.size == 512 else ""
        print(f"{nw},{nb},{ec},{ec / args.size**2:.4f},{ref}")
    t = min(timeit.repeat(lambda: capacity(args.size, args.size, 3, 5), number=1000, repeat=3)) / 1000
    print(f"# capacity() takes {t * 1e6:.1f} us per call")


if __name__ == "__main__":
    main()
