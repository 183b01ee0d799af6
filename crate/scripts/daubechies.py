#!/usr/bin/env python3
"""Generate Daubechies orthonormal lowpass filter taps by spectral factorization.

Usage: python3 scripts/daubechies.py 45 > crates/core/data/db45.txt

Writes 2N whitespace-separated decimal coefficients, one per line.
Requires mpmath. The minimum-phase root selection matches the usual dbN
convention; the taps are emitted in ascending z^-n order.
"""
import sys

import mpmath as mp


def daubechies(order, digits=120):
    mp.mp.dps = digits
    n = order
    # P(y) = sum_k C(N-1+k, k) y^k, with y = sin^2(w/2)
    coeffs = [mp.binomial(n - 1 + k, k) for k in range(n)]
    # polyroots wants highest degree first
    y_roots = mp.polyroots(list(reversed(coeffs)), maxsteps=2000, extraprec=4 * digits) if n > 1 else []
    z_roots = []
    for y in y_roots:
        # y = (2 - z - 1/z)/4  ->  z^2 - (2 - 4y) z + 1 = 0
        b = 2 - 4 * y
        disc = mp.sqrt(b * b - 4)
        z1 = (b + disc) / 2
        z2 = (b - disc) / 2
        z_roots.append(z1 if abs(z1) < 1 else z2)
    poly = [mp.mpc(1)]
    for root in [mp.mpc(-1)] * n + z_roots:
        nxt = [mp.mpc(0)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i] += c
            nxt[i + 1] -= c * root
        poly = nxt
    taps = [mp.re(c) for c in poly]
    scale = mp.sqrt(2) / mp.fsum(taps)
    return [t * scale for t in taps]


def check(taps):
    energy = mp.fsum(t * t for t in taps)
    total = mp.fsum(taps)
    worst = max(
        abs(mp.fsum(taps[i] * taps[i + 2 * s] for i in range(len(taps) - 2 * s)))
        for s in range(1, len(taps) // 2)
    )
    return energy, total, worst


if __name__ == "__main__":
    order = int(sys.argv[1]) if len(sys.argv) > 1 else 45
    taps = daubechies(order)
    energy, total, worst = check(taps)
    print(f"sum h^2 = {mp.nstr(energy, 25)}, sum h = {mp.nstr(total, 25)}, "
          f"max even-shift correlation = {mp.nstr(worst, 5)}", file=sys.stderr)
    for t in taps:
        print(mp.nstr(t, 25))
