"""Independent reference implementations used as test oracles.

Everything here is deliberately naive (dict-based states, explicit loops)
and shares no code with the package under test.
"""

from __future__ import annotations

import cmath
import itertools
import math

import numpy as np


def naive_matmul(a, b):
    """Triple-loop matrix product."""
    n, k = len(a), len(a[0])
    m = len(b[0])
    out = [[0j] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            acc = 0j
            for t in range(k):
                acc += a[i][t] * b[t][j]
            out[i][j] = acc
    return np.array(out)


def statevector_walk(theta, initial_coin, steps):
    """Pure-state walk on an unbounded line, state as {(coin, x): amp}.

    Returns the amplitude dict after ``steps`` applications of coin and
    conditional shift (coin 0 moves left, coin 1 moves right).
    """
    c, s = math.cos(theta), math.sin(theta)
    state = {(0, 0): complex(initial_coin[0]), (1, 0): complex(initial_coin[1])}
    for _ in range(steps):
        tossed = {}
        for (coin, x), amp in state.items():
            if coin == 0:
                tossed[(0, x)] = tossed.get((0, x), 0j) + c * amp
                tossed[(1, x)] = tossed.get((1, x), 0j) + s * amp
            else:
                tossed[(0, x)] = tossed.get((0, x), 0j) + s * amp
                tossed[(1, x)] = tossed.get((1, x), 0j) - c * amp
        state = {}
        for (coin, x), amp in tossed.items():
            state[(coin, x + (1 if coin else -1))] = amp
    return state


def statevector_distribution(theta, initial_coin, steps):
    """Position distribution {x: p} from the dict-based walker."""
    state = statevector_walk(theta, initial_coin, steps)
    dist = {}
    for (_, x), amp in state.items():
        dist[x] = dist.get(x, 0.0) + abs(amp) ** 2
    return dist


def path_sum_distribution(theta, initial_coin, steps):
    """Position distribution by explicit enumeration of all coin paths.

    Each path is a sequence of post-coin outcomes; its amplitude is the
    product of coin matrix elements along the path and it displaces the
    walker by +/-1 per outcome.  Amplitudes of paths ending at the same
    (coin, position) interfere.
    """
    c, s = math.cos(theta), math.sin(theta)
    coin = [[c, s], [s, -c]]
    amp_at = {}
    for start in (0, 1):
        base = complex(initial_coin[start])
        if base == 0:
            continue
        for outcomes in itertools.product((0, 1), repeat=steps):
            amp = base
            prev = start
            pos = 0
            for out in outcomes:
                amp *= coin[out][prev]
                pos += 1 if out else -1
                prev = out
            key = (prev, pos)
            amp_at[key] = amp_at.get(key, 0j) + amp
    dist = {}
    for (_, x), amp in amp_at.items():
        dist[x] = dist.get(x, 0.0) + abs(amp) ** 2
    return dist


def direct_dft_power(x):
    """O(N^2) power spectrum straight from the defining sum."""
    n = len(x)
    power = []
    for k in range(n):
        acc = 0j
        for m in range(n):
            acc += x[m] * cmath.exp(-2j * math.pi * k * m / n)
        power.append(abs(acc) ** 2)
    return np.array(power)


def antitonic_brute_force(y):
    """Exact non-increasing least-squares fit by partition enumeration.

    The projection onto the non-increasing cone is piecewise constant on
    consecutive blocks at their means, so enumerating every consecutive
    partition whose block means are non-increasing and keeping the lowest
    SSE is exhaustive and exact.
    """
    y = list(map(float, y))
    n = len(y)
    best_sse = math.inf
    best_fit = None
    for cuts in itertools.product((0, 1), repeat=n - 1):
        blocks = []
        start = 0
        for i, cut in enumerate(cuts):
            if cut:
                blocks.append((start, i + 1))
                start = i + 1
        blocks.append((start, n))
        means = [sum(y[a:b]) / (b - a) for a, b in blocks]
        if any(means[i + 1] > means[i] + 1e-15 for i in range(len(means) - 1)):
            continue
        sse = sum((y[j] - means[i]) ** 2 for i, (a, b) in enumerate(blocks) for j in range(a, b))
        if sse < best_sse - 1e-15:
            best_sse = sse
            best_fit = [means[i] for i, (a, b) in enumerate(blocks) for _ in range(a, b)]
    return np.array(best_fit), best_sse


def classical_walk_mc_variance(steps, samples, seed):
    """Monte-Carlo variance of an unbiased +/-1 classical walk."""
    rng = np.random.default_rng(seed)
    flips = rng.integers(0, 2, size=(samples, steps)) * 2 - 1
    finals = flips.sum(axis=1)
    return float(np.var(finals))
