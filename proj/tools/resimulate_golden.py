#!/usr/bin/env python3
"""Straight-line re-simulation of the golden trajectory.

Reimplements, without using the C++ library, everything the golden run
touches: the SplitMix64 stream and trial-seed derivation, Box-Muller uniform
disk sampling, the inner-product rule with lowest-index ties, compensated bin
sums, and the records CSV format. Prints the CSV to stdout.

    python3 tools/resimulate_golden.py tests/golden/golden_config.json
"""

import json
import math
import sys

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def trial_seed(master, index):
    return mix64(master ^ ((GOLDEN * (index + 1)) & MASK))


class Stream:
    def __init__(self, seed):
        self.seed = seed
        self.counter = 0

    def next(self):
        self.counter += 1
        return mix64((self.seed + self.counter * GOLDEN) & MASK)

    def uniform(self):
        return (self.next() >> 11) * 2.0 ** -53


def sample_disk(rng):
    u1 = 1.0 - rng.uniform()
    u2 = rng.uniform()
    r = math.sqrt(-2.0 * math.log(u1))
    theta = 2.0 * math.pi * u2
    z0, z1 = r * math.cos(theta), r * math.sin(theta)
    norm = math.sqrt(z0 * z0 + z1 * z1)
    radius = math.pow(rng.uniform(), 1.0 / 2)
    scale = radius / norm
    return [z0 * scale, z1 * scale]


def schedule(t_min, t_max, ratio):
    times = []
    j = 0
    while True:
        raw = t_min * math.pow(ratio, j)
        if raw > t_max + 0.5:
            break
        t = int(math.floor(raw + 0.5))
        if t > t_max:
            break
        if t >= t_min and (not times or t > times[-1]):
            times.append(t)
        j += 1
    if not times or times[-1] != t_max:
        times.append(t_max)
    return times


def g17(x):
    return "%.17g" % x


def main(path):
    cfg = json.load(open(path))
    assert cfg["d"] == 2 and cfg["strategy"] == "inner-product"
    assert cfg["distribution"]["variant"] == "uniform-ball"
    k, T = cfg["k"], cfg["T"]
    cp = cfg["checkpoints"]
    times = set(schedule(min(cp["tMin"], cp.get("tMax", T)), cp.get("tMax", T), cp["ratio"]))

    out = ["trial_index,seed,n,D,S,max_pair,merged_imb"]
    for trial in range(cfg.get("trials", 1)):
        seed = trial_seed(cfg.get("masterSeed", 1), trial)
        rng = Stream(seed)
        raw = [[0.0, 0.0] for _ in range(k)]
        comp = [[0.0, 0.0] for _ in range(k)]
        val = [[0.0, 0.0] for _ in range(k)]
        max_sq = 0.0
        for n in range(1, T + 1):
            v = sample_disk(rng)
            best, best_dot = 0, val[0][0] * v[0] + val[0][1] * v[1]
            for i in range(1, k):
                p = val[i][0] * v[0] + val[i][1] * v[1]
                if p < best_dot:
                    best, best_dot = i, p
            for r in range(2):
                s, x = raw[best][r], v[r]
                t = s + x
                if abs(s) >= abs(x):
                    comp[best][r] += (s - t) + x
                else:
                    comp[best][r] += (x - t) + s
                raw[best][r] = t
                val[best][r] = t + comp[best][r]

            def sq(i, j):
                a = val[i][0] - val[j][0]
                b = val[i][1] - val[j][1]
                return a * a + b * b

            cur = 0.0
            S = 0.0
            for i in range(k):
                for j in range(i + 1, k):
                    cur = max(cur, sq(i, j))
                    S += sq(i, j)
            max_sq = max(max_sq, cur)
            if n in times:
                half = k // 2
                a1 = [sum(val[i][r] for i in range(half)) for r in range(2)]
                a2 = [sum(val[i][r] for i in range(half, k)) for r in range(2)]
                scale = 1.0 if k % 2 == 0 else 1.0 + 1.0 / half
                dx = scale * a1[0] - a2[0]
                dy = scale * a1[1] - a2[1]
                merged = math.sqrt(dx * dx + dy * dy)
                out.append(",".join([str(trial), str(seed), str(n), g17(math.sqrt(max_sq)),
                                     g17(S), g17(math.sqrt(cur)), g17(merged)]))
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
