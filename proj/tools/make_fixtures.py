#!/usr/bin/env python3
"""Regenerate the bundled hourly EUR/USD-like fixtures under data/.

Deterministic: a fixed seed per file, prices rounded to 5 decimals.
"""

import argparse
import datetime as dt
import math
import random
from pathlib import Path

START = dt.datetime(2022, 1, 3, tzinfo=dt.timezone.utc)


def write(path, rows):
    with open(path, "w", newline="\n") as f:
        f.write("timestamp,open,high,low,close,volume\n")
        for i, (o, h, l, c, v) in enumerate(rows):
            ts = (START + dt.timedelta(hours=i)).strftime("%Y-%m-%dT%H:%M:%SZ")
            f.write(f"{ts},{o:.5f},{h:.5f},{l:.5f},{c:.5f},{v}\n")


def bars(closes, rng, wick):
    rows = []
    prev = closes[0]
    for c in closes:
        o = prev
        h = max(o, c) + rng.uniform(0, wick)
        l = min(o, c) - rng.uniform(0, wick)
        rows.append((round(o, 5), round(h, 5), round(l, 5), round(c, 5), rng.randint(500, 5000)))
        prev = round(c, 5)
    return rows


def synthetic(n=1500):
    rng = random.Random(2022)
    price, closes = 1.1370, []
    for _ in range(n):
        price *= math.exp(rng.gauss(0, 0.0018))
        closes.append(price)
    return bars(closes, rng, 0.0008)


def trending(n=1200):
    # Drift that reverses every few hundred bars, so the oscillators visit
    # both extremes.
    rng = random.Random(7)
    price, closes = 1.1300, []
    for i in range(n):
        drift = 0.0003 * math.sin(2 * math.pi * i / 240)
        price *= math.exp(drift + rng.gauss(0, 0.0012))
        closes.append(price)
    return bars(closes, rng, 0.0006)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default=Path(__file__).resolve().parent.parent / "data", type=Path)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    write(args.out_dir / "synthetic_eurusd_h1.csv", synthetic())
    write(args.out_dir / "trending_eurusd_h1.csv", trending())


if __name__ == "__main__":
    main()
