#!/usr/bin/env python3
# Copyright (c) 2026 The burnscope developers
# Distributed under the MIT software license, see the accompanying
# file COPYING or http://www.opensource.org/licenses/mit-license.php.
"""USD conversions and payment statistics with Decimal and numpy."""

from decimal import ROUND_HALF_UP, Decimal

import numpy as np

CENT = Decimal("0.01")


def usd(sat: int, price: str) -> Decimal:
    return (Decimal(sat) * Decimal(price) / Decimal(100_000_000)).quantize(CENT, ROUND_HALF_UP)


def main() -> None:
    for sat, price in [(1_248_500, "37371.65"), (330_200, "69367.05"), (547, "39500"), (1094, "39500"),
                       (640, "39500"), (547, "39700"), (1094, "39700"), (640, "39700"),
                       (227_487, "39000"), (590, "39000"), (154_359, "39000"), (481_360, "39700"),
                       (1, "39500"), (2_000_000, "39700")]:
        print(f"{sat} sat @ {price} = {usd(sat, price)}")

    # payment schedule of the baseline FSB row, in cents
    cents = [43] * 292 + [22] * 12 + [25] * 4
    v = np.array(cents, dtype=float)
    q1, q3 = np.quantile(v, 0.25), np.quantile(v, 0.75)
    lo, hi = q1 - 1.5 * (q3 - q1), q3 + 1.5 * (q3 - q1)
    out = v[(v < lo) | (v > hi)]
    print(f"fsb n={len(v)} total={int(v.sum())} mean={v.mean():.4f} median={np.median(v)}"
          f" q1={q1} q3={q3} outliers={len(out)} outlier_mean={out.mean():.4f}")

    # donation outputs
    don = [usd(227_487, "39000")] * 11 + [usd(590, "39000")] * 600 + [usd(154_359, "39000")] * 15
    total = sum(don[:11])
    print(f"donation total={total} per_output_mean={(sum(don) / len(don)).quantize(CENT, ROUND_HALF_UP)}"
          f" min={min(don)} n={len(don)}")

    # co-spend cluster sizes and tx counts: population std
    for name, xs in [("svr_tx", [2, 2, 1]), ("fsb_size", [1, 2, 3, 7]), ("uniform", [1, 1, 1])]:
        a = np.array(xs, dtype=float)
        print(f"{name} mean={a.mean():.6f} std={a.std():.6f}")
    a = np.array([1, 2, 3, 4, 10, 11], dtype=float)
    print(f"quantiles {np.quantile(a, [0.0, 0.25, 0.5, 0.75, 1.0])}")


if __name__ == "__main__":
    main()
