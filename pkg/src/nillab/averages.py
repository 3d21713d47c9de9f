"""Birkhoff averages on a geometric time grid, plus two experiment harnesses:
an empirical unique-ergodicity probe and tail-oscillation statistics.

Averages are single-pass streaming sums over orbit blocks; observables are
vectorized callables on point blocks. Oscillation is the max gap between
partial averages over the tail of the N-grid (default: N >= N_max / 10),
which exposes non-Cauchy behavior without storing whole traces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .systems import SystemHandle


@dataclass
class AverageTrace:
    observable_id: str
    start: tuple
    n_grid: tuple
    averages: tuple
    oscillation: float
    tail_from: int

    def final(self):
        return self.averages[-1]


def geometric_grid(n_max):
    """Powers of two up to n_max, always ending exactly at n_max."""
    grid = []
    n = 1
    while n < n_max:
        grid.append(n)
        n *= 2
    grid.append(int(n_max))
    return grid


def birkhoff(sys: SystemHandle, f, x, n_grid=None, n_max=None, chunk=65536,
             observable_id="f") -> AverageTrace:
    """Partial averages (1/N) sum_{i<N} f(T^i x) at each N in the grid.

    One orbit pass in blocks; the telescoping identity
    (N+1) A_{N+1} - N A_N = f(T^N x) holds by construction.
    """
    if n_grid is None:
        if n_max is None:
            raise ValueError("pass n_grid or n_max")
        n_grid = geometric_grid(n_max)
    n_grid = [int(n) for n in n_grid]
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])) or n_grid[0] < 1:
        raise ValueError("n_grid must be strictly increasing and positive")
    top = n_grid[-1]
    averages = []
    total = 0.0
    done = 0
    grid_iter = iter(n_grid)
    next_mark = next(grid_iter)
    current = np.asarray(x)
    while done < top:
        count = min(chunk, top - done)
        block = sys.orbit_block(current, count + 1)
        vals = np.asarray(f(block[:count]), dtype=float)
        csum = np.cumsum(vals)
        while next_mark is not None and next_mark <= done + count:
            averages.append((total + csum[next_mark - done - 1]) / next_mark)
            next_mark = next(grid_iter, None)
        total += csum[-1]
        current = block[count]
        done += count
    tail_from = max(1, top // 10)
    tail = [a for n, a in zip(n_grid, averages) if n >= tail_from]
    osc = float(max(tail) - min(tail)) if len(tail) >= 2 else 0.0
    return AverageTrace(observable_id=observable_id,
                        start=tuple(np.ravel(np.asarray(x, dtype=float)).tolist()),
                        n_grid=tuple(n_grid), averages=tuple(averages),
                        oscillation=osc, tail_from=tail_from)


def coordinate_cos(index, label=None):
    """Observable cos(2 pi x_index), the basic character along one coordinate."""
    f = lambda P: np.cos(2.0 * np.pi * np.asarray(P, dtype=float)[..., index])
    f.observable_id = label or ("cos2pi[%d]" % index)
    return f


def coordinate(index, label=None):
    f = lambda P: np.asarray(P, dtype=float)[..., index]
    f.observable_id = label or ("coord[%d]" % index)
    return f


def unique_ergodicity_probe(sys: SystemHandle, observables, starts, n_max,
                            eta=0.01):
    """Spread of tail averages across starting points, per observable.

    A uniquely ergodic system drives all starts to the same average; the
    probe reports the worst spread and a verdict at resolution eta. This is
    finite evidence, not a certificate.
    """
    if len(observables) < 3 or len(starts) < 3:
        raise ValueError("need at least 3 observables and 3 starts")
    traces = {}
    spreads = {}
    for f in observables:
        fid = getattr(f, "observable_id", repr(f))
        finals = []
        for x in starts:
            tr = birkhoff(sys, f, x, n_max=n_max, observable_id=fid)
            traces[(fid, tr.start)] = tr
            finals.append(tr.final())
        spreads[fid] = float(max(finals) - min(finals))
    worst = max(spreads.values())
    verdict = ("consistent with unique ergodicity at resolution %g" % eta
               if worst <= eta else "start-dependent averages detected")
    return {"spreads": spreads, "max_spread": worst, "eta": eta,
            "verdict": verdict, "n_max": int(n_max),
            "traces": traces,
            "note": "empirical probe: finite-orbit evidence only"}


def oscillation_contrast(trace_a: AverageTrace, trace_b: AverageTrace):
    """Ratio of tail oscillations of two traces (experiment statistic)."""
    if trace_b.oscillation == 0.0:
        return float("inf") if trace_a.oscillation > 0 else 1.0
    return trace_a.oscillation / trace_b.oscillation
