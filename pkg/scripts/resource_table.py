#!/usr/bin/env python3
"""Resource counts of every built-in strategy against their closed forms."""

import math
import sys

sys.path.insert(0, "src")

from nlbox.analysis import resource_count
from nlbox.strategies import get_strategy


def bmaj_gates(n):
    c = math.comb(n, n // 2 + 1)
    return (n // 2) * c + c - 1


ROWS = [
    ("chsh-nlb", 1, 0),
    ("ms-comm", 0, 1), ("ms-comm-sim", 0, 1),
    ("ms-nlb", 1, 0), ("ms-nlb-sim", 1, 0),
    ("mermin-comm", 0, 1), ("mermin-comm-sim", 0, 1),
    ("mermin-nlb", 1, 0), ("mermin-nlb-sim", 1, 0),
    ("nlb-via-comm", 0, 1),
] + [(f"multi-mermin-nlb:{n}", math.comb(n, 2), 0) for n in range(3, 7)] \
  + [(f"dj-nlb:{n}", 2 ** (n + 1) - 2 ** n.bit_length(), 0) for n in range(1, 5)] \
  + [(f"bmaj-nlb:{n}", n * (n - 1) * bmaj_gates(n), 0) for n in range(2, 6)]


def main():
    print(f"{'strategy':24} {'nlb':>6} {'comm':>5}  closed form")
    bad = 0
    for sid, want_nlb, want_comm in ROWS:
        nlb, comm = resource_count(get_strategy(sid))
        ok = (nlb, comm) == (want_nlb, want_comm)
        bad += not ok
        mark = "" if ok else "  MISMATCH"
        print(f"{sid:24} {nlb:>6} {comm:>5}  ({want_nlb}, {want_comm}){mark}")
    if bad:
        raise SystemExit(f"{bad} mismatches")
    print("all counts match")


if __name__ == "__main__":
    main()
