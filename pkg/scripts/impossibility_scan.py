#!/usr/bin/env python3
"""Single-NLB impossibility scan for the n-party parity game.

Exhausts every deterministic strategy in which one designated pair shares a
single box (all pairings), reports the best success fraction over the
(promised input x free bit) grid, and runs the 3-party positive control,
where a perfect strategy exists and is re-verified by execution.
"""

import argparse
import json
import sys
import time

sys.path.insert(0, "src")

from nlbox.analysis import impossibility_search
from nlbox.games import get_game


def scan(n):
    start = time.monotonic()
    report = impossibility_search(get_game(f"multi-mermin:{n}"))
    blob = report.to_json()
    blob["runtime_ms"] = int((time.monotonic() - start) * 1000)
    return blob


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("-n", type=int, default=4)
    args = parser.parse_args()
    print(json.dumps({
        "scan": scan(args.n),
        "positive_control_n3": scan(3),
    }, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
