"""Dynamical systems as block-vectorized handles, plus the concrete zoo:
torus rotations, skew products, nilsystems on G/Gamma, Sturmian subshifts,
full shifts on finite windows, and inverse-limit towers.

A point is a 1-D numpy array; a block of points is a 2-D array (rows =
points). All handle callables act on blocks so search and covering kernels
can stay vectorized. Scalar helpers wrap single rows.

Symbolic systems use finite center-anchored windows - window half-length L is
part of the system, and every symbolic operation is exact only on the stored
range. The symbolic metric is 2**(-min{|j|: x_j != y_j}) computed over the
window; windows equal on the whole stored range count as distance 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arcs import ArcUnion, cut_midpoints
from .nilgroup import NilGroup, element, inv, power_sequence
from .nilmetric import MetricParams, dist_quotient_block


def wrap_dist_block(P, Q):
    """Max over coordinates of wrap-around distance on the torus."""
    diff = np.abs(np.asarray(P, dtype=float) - np.asarray(Q, dtype=float))
    return np.max(np.minimum(diff, 1.0 - diff), axis=-1)


class GridError(ValueError):
    """Grid too coarse (or too large) for the requested resolution."""


def product_grid(dim, eps, budget):
    """Dense product grid on [0,1)^dim with per-dimension spacing eps/divisor."""
    divisors = budget.divisor_for(dim)
    counts = []
    for d in divisors:
        spacing = eps / d
        if spacing > eps / 4.0 + 1e-15:
            raise GridError(
                "grid spacing %.4g exceeds eps/4 = %.4g; raise the grid divisor "
                "(>= 4) so the net resolves the target scale" % (spacing, eps / 4.0))
        counts.append(int(math.ceil(1.0 / spacing)) + 1)
    total = int(np.prod(counts))
    if total > budget.max_cells:
        raise GridError("grid has %d points (> budget %d); lower the divisor "
                        "or raise max_cells" % (total, budget.max_cells))
    axes = [(np.arange(c) + 0.5) / c for c in counts]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def approx_rational(x, max_den=10 ** 4, tol=1e-12):
    """Small-denominator rational hiding in a float, or None.

    Denominators are capped low enough that strongly approximable irrationals
    (the golden ratio's convergents reach 1e-12 accuracy around q ~ 1e6) do
    not get misflagged.
    """
    frac = Fraction(float(x)).limit_denominator(max_den)
    if abs(float(frac) - float(x)) <= tol:
        return frac
    return None


@dataclass
class SystemHandle:
    """A point space with a metric, an invertible transformation and a sampler."""

    name: str
    kind: str                      # torus | quotient | symbolic | product
    step_block: callable
    inverse_step_block: callable
    metric_block: callable         # rowwise distance of two blocks
    sample_block: callable         # (rng, count) -> block
    diameter: float
    meta: dict = field(default_factory=dict)
    flags: tuple = ()
    torus_dims: int | None = None  # dense product grids make sense along these
    orbit_span_fn: callable = None           # (x, lo, hi) -> ((hi-lo+1), dim)
    cylinder_grid: callable = None           # (n, eps, max_points) -> block
    cylinder_grid_exact: bool = False        # grid rows are pairwise non-shadowing
    grid_fn: callable = None                 # (n, eps, budget) -> block
    to_window: callable = None               # point -> SymbolicWindow
    construct_point: callable = None         # [(offset, symbols)] -> point | None
    coding: "CircleCoding" = None            # exact rotation-coded structure
    levels: tuple = ()                       # inverse-limit structure

    # -- scalar conveniences --

    def step(self, x):
        return self.step_block(np.asarray(x)[None, :])[0]

    def inverse_step(self, x):
        return self.inverse_step_block(np.asarray(x)[None, :])[0]

    def metric(self, x, y):
        return float(self.metric_block(np.asarray(x)[None, :], np.asarray(y)[None, :])[0])

    def sample(self, rng, count=1):
        return self.sample_block(rng, count)

    def orbit_span(self, x, lo, hi):
        """Points T^lo x .. T^hi x as a block (inclusive range)."""
        if self.orbit_span_fn is not None:
            return self.orbit_span_fn(np.asarray(x), lo, hi)
        x = np.asarray(x)
        out = np.empty((hi - lo + 1,) + x.shape, dtype=x.dtype)
        p = x
        for _ in range(-lo if lo < 0 else 0):
            p = self.inverse_step(p)
        out[0] = p
        for i in range(1, hi - lo + 1):
            p = self.step(p)
            out[i] = p
        return out

    def orbit_block(self, x, count):
        return self.orbit_span(x, 0, count - 1)


def sample_points(sys: SystemHandle, count, seed):
    return sys.sample_block(np.random.default_rng(seed), count)


@dataclass(frozen=True)
class SymbolicWindow:
    """Center-anchored word over {0..k-1} of odd length 2L+1."""

    word: tuple
    alphabet: int
    provenance: dict | None = None

    def __post_init__(self):
        if len(self.word) % 2 != 1:
            raise ValueError("window length must be odd (center-anchored)")
        if any(s < 0 or s >= self.alphabet for s in self.word):
            raise ValueError("symbol out of alphabet range")

    @property
    def half_length(self):
        return (len(self.word) - 1) // 2


@dataclass(frozen=True)
class CircleCoding:
    """A rotation by alpha read through a finite partition of the circle.

    `partition` lists one ArcUnion per symbol; the arcs must tile [0, 1).
    Systems carrying a coding admit exact set combinatorics downstream.
    """

    alpha: float
    partition: tuple

    def symbols_block(self, z, offsets):
        """Symbols of the codings of base points z at the given time offsets.

        z: (rows,) circle points; offsets: (cols,) integers.
        Returns an int8 array (rows, cols).
        """
        z = np.asarray(z, dtype=float).reshape(-1)
        offsets = np.asarray(offsets, dtype=float)
        pos = (z[:, None] + offsets[None, :] * self.alpha) % 1.0
        out = np.zeros(pos.shape, dtype=np.int8)
        for sym, arcs in enumerate(self.partition):
            if sym == 0:
                continue
            out[arcs.contains(pos)] = sym
        return out


# -- rotations and affine torus maps ------------------------------------------


def make_rotation(alpha) -> SystemHandle:
    """Rotation of the m-torus by the vector alpha (units of full turns)."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float)) % 1.0
    m = alpha.size
    flags = ()
    rats = [approx_rational(a) for a in alpha]
    if all(r is not None for r in rats):
        flags = ("rational-rotation: not minimal",)

    def step_block(P):
        return (P + alpha) % 1.0

    def inverse_step_block(P):
        return (P - alpha) % 1.0

    def sample_block(rng, count):
        return rng.uniform(0.0, 1.0, size=(count, m))

    def orbit_span_fn(x, lo, hi):
        n = np.arange(lo, hi + 1, dtype=float)
        return (x[None, :] + n[:, None] * alpha[None, :]) % 1.0

    coding = None
    if m == 1:
        coding = CircleCoding(float(alpha[0]), (ArcUnion.full(),))
    return SystemHandle(
        name="rotation", kind="torus",
        step_block=step_block, inverse_step_block=inverse_step_block,
        metric_block=wrap_dist_block, sample_block=sample_block,
        diameter=0.5, torus_dims=m, orbit_span_fn=orbit_span_fn,
        meta={"alpha": [float(a) for a in alpha]}, flags=flags, coding=coding,
    )


def make_skew_product(alpha) -> SystemHandle:
    """T(x, y) = (x + alpha, y + x) on the 2-torus; the basic polynomial-orbit map."""
    alpha = float(alpha) % 1.0

    def step_block(P):
        out = np.empty_like(P)
        out[..., 0] = (P[..., 0] + alpha) % 1.0
        out[..., 1] = (P[..., 1] + P[..., 0]) % 1.0
        return out

    def inverse_step_block(P):
        out = np.empty_like(P)
        out[..., 0] = (P[..., 0] - alpha) % 1.0
        out[..., 1] = (P[..., 1] - out[..., 0]) % 1.0
        return out

    def sample_block(rng, count):
        return rng.uniform(0.0, 1.0, size=(count, 2))

    def orbit_span_fn(x, lo, hi):
        n = np.arange(lo, hi + 1, dtype=float)
        out = np.empty((n.size, 2))
        out[:, 0] = (x[0] + n * alpha) % 1.0
        out[:, 1] = (x[1] + n * x[0] + n * (n - 1) / 2.0 * alpha) % 1.0
        return out

    return SystemHandle(
        name="skew", kind="torus",
        step_block=step_block, inverse_step_block=inverse_step_block,
        metric_block=wrap_dist_block, sample_block=sample_block,
        diameter=0.5, torus_dims=2, orbit_span_fn=orbit_span_fn,
        meta={"alpha": alpha},
    )


# -- nilsystems ----------------------------------------------------------------


def make_nilsystem(group: NilGroup, tau, metric_params: MetricParams = MetricParams(),
                   orbit_chunk=4096) -> SystemHandle:
    """Left translation x -> tau x on G/Gamma in reduced coordinates.

    Points are fundamental-domain coordinate rows (all entries in [0, 1));
    the step reduces tau * x back to the fundamental domain and the metric is
    the lattice-minimized one-hop distance.
    """
    tau = element(group, np.asarray(tau, dtype=float)) if not hasattr(tau, "coords") else tau
    tau_inv = inv(tau)
    m = group.dim

    def _reduce(P):
        return group.reduce_block(P)[0]

    def step_block(P):
        return _reduce(group.mul_block(tau.coords, P))

    def inverse_step_block(P):
        return _reduce(group.mul_block(tau_inv.coords, P))

    def metric_block(P, Q):
        return dist_quotient_block(group, P, Q, metric_params)

    def sample_block(rng, count):
        return rng.uniform(0.0, 1.0, size=(count, m))

    def orbit_span_fn(x, lo, hi):
        count = hi - lo + 1
        out = np.empty((count, m))
        base = np.asarray(x, dtype=float)
        if lo != 0:
            # jump to T^lo x, then advance forward
            jump = power_sequence(tau if lo > 0 else tau_inv, abs(lo) + 1)
            base = _reduce(group.mul_block(jump[-1], base))
        filled = 0
        while filled < count:
            chunk = min(orbit_chunk, count - filled)
            powers = power_sequence(tau, chunk + 1)
            out[filled:filled + chunk] = _reduce(
                group.mul_block(powers[:chunk], base))
            base = _reduce(group.mul_block(powers[chunk], base))
            filled += chunk
        return out

    sys = SystemHandle(
        name="nilsystem", kind="quotient",
        step_block=step_block, inverse_step_block=inverse_step_block,
        metric_block=metric_block, sample_block=sample_block,
        diameter=1.0, torus_dims=m, orbit_span_fn=orbit_span_fn,
        meta={"group": group.name, "tau": [float(c) for c in tau.coords]},
    )
    probe = sample_points(sys, 48, seed=0)
    sys.diameter = float(np.max(metric_block(probe[:, None, :], probe[None, :, :])))
    return sys


# -- Sturmian subshift ---------------------------------------------------------


def sturmian_coding(alpha) -> CircleCoding:
    """Binary coding partition {[0, 1-alpha) -> 0, [1-alpha, 1) -> 1}."""
    alpha = float(alpha) % 1.0
    return CircleCoding(alpha, (ArcUnion.interval(0.0, 1.0 - alpha),
                                ArcUnion.interval(1.0 - alpha, 1.0)))


def sturmian_code(alpha, z, L) -> SymbolicWindow:
    """Window of the rotation coding of z at offsets -L..L.

    Symbol at offset n is 0 iff frac(z + n*alpha) lies in [0, 1-alpha);
    the boundary point 1-alpha itself codes to 1 (half-open convention).
    """
    coding = sturmian_coding(alpha)
    word = coding.symbols_block(np.array([float(z) % 1.0]), np.arange(-L, L + 1))[0]
    return SymbolicWindow(tuple(int(s) for s in word), 2,
                          provenance={"alpha": float(alpha), "z": float(z) % 1.0, "L": int(L)})


def make_sturmian(alpha, L=16) -> SystemHandle:
    """Shift on the Sturmian subshift generated by the rotation coding.

    Points carry the circle position z as provenance (shape (1,) rows); the
    window of radius L around the anchor is recomputed from z on demand, so
    the shift is exact. The metric reads the coding window only out to |j|<=L.
    """
    alpha = float(alpha) % 1.0
    flags = ()
    if approx_rational(alpha) is not None:
        flags = ("rational-alpha: coding degenerates, not minimal",)
    coding = sturmian_coding(alpha)
    offsets = np.arange(-L, L + 1)

    def step_block(P):
        return (P + alpha) % 1.0

    def inverse_step_block(P):
        return (P - alpha) % 1.0

    def metric_block(P, Q):
        wp = coding.symbols_block(P[..., 0], offsets)
        wq = coding.symbols_block(Q[..., 0], offsets)
        return _window_distance(wp, wq, L)

    def sample_block(rng, count):
        return rng.uniform(0.0, 1.0, size=(count, 1))

    def orbit_span_fn(x, lo, hi):
        n = np.arange(lo, hi + 1, dtype=float)
        return ((x[0] + n * alpha) % 1.0)[:, None]

    def to_window(point):
        return sturmian_code(alpha, point[0], L)

    def cylinder_grid(n, eps, max_points):
        w = symbol_resolution(eps)
        lo, hi = -(w - 1), n + (w - 1)
        cuts = (-np.arange(lo, hi + 2) * alpha) % 1.0
        mids = cut_midpoints(cuts)
        if mids.size > max_points:
            raise ValueError("sturmian cylinder grid exceeds max_points")
        return mids[:, None]

    return SystemHandle(
        name="sturmian", kind="symbolic",
        step_block=step_block, inverse_step_block=inverse_step_block,
        metric_block=metric_block, sample_block=sample_block,
        diameter=1.0, orbit_span_fn=orbit_span_fn,
        cylinder_grid=cylinder_grid, cylinder_grid_exact=True,
        to_window=to_window, coding=coding,
        meta={"alpha": alpha, "L": int(L)}, flags=flags,
    )


def symbol_resolution(eps):
    """Smallest w with 2^-w <= eps: agreement out to |j| <= w-1 decides eps-closeness."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return max(1, int(math.ceil(-math.log2(eps))))


def _window_distance(WP, WQ, L):
    """2^-(min |offset| of disagreement) for stacked windows at offsets -L..L."""
    diff = WP != WQ
    absoff = np.abs(np.arange(-L, L + 1))
    big = 2 * L + 2
    first = np.min(np.where(diff, absoff[None, :], big), axis=-1)
    return np.where(first == big, 0.0, 2.0 ** (-first.astype(float)))


# -- full shift on finite windows ------------------------------------------------


def make_fullshift(k, L=8, reserve=128) -> SystemHandle:
    """Shift on finitely supported {0..k-1} sequences, stored on [-L-r, L+r].

    Sampled points are random on the window [-L, L] and 0 outside; the stored
    range gives an exact shift for up to `reserve` steps in each direction.
    """
    if k < 2:
        raise ValueError("alphabet size must be >= 2")
    half = L + reserve
    width = 2 * half + 1
    center = half

    def step_block(P):
        out = np.empty_like(P)
        out[..., :-1] = P[..., 1:]
        out[..., -1] = 0
        return out

    def inverse_step_block(P):
        out = np.empty_like(P)
        out[..., 1:] = P[..., :-1]
        out[..., 0] = 0
        return out

    def metric_block(P, Q):
        lo, hi = center - half, center + half + 1
        return _window_distance(P[..., lo:hi], Q[..., lo:hi], half)

    def sample_block(rng, count):
        out = np.zeros((count, width), dtype=np.int8)
        out[:, center - L:center + L + 1] = rng.integers(0, k, size=(count, 2 * L + 1),
                                                         dtype=np.int8)
        return out

    def to_window(point):
        word = point[center - L:center + L + 1]
        return SymbolicWindow(tuple(int(s) for s in word), k)

    def construct_point(constraints):
        """Point holding the given symbol runs; None on conflict or overflow."""
        out = np.zeros(width, dtype=np.int8)
        fixed = np.zeros(width, dtype=bool)
        for offset, symbols in constraints:
            symbols = np.asarray(symbols, dtype=np.int8)
            start = center + int(offset)
            stop = start + symbols.size
            if start < 0 or stop > width:
                return None
            seen = fixed[start:stop]
            if np.any(seen & (out[start:stop] != symbols)):
                return None
            out[start:stop] = symbols
            fixed[start:stop] = True
        return out

    def cylinder_grid(n, eps, max_points):
        w = symbol_resolution(eps)
        span = n + 2 * w - 1
        if k ** span > max_points:
            raise ValueError(
                "full-shift cylinder grid needs %d^%d windows (> %d)" % (k, span, max_points))
        if w - 1 > half or n + w - 1 > half:
            raise ValueError("horizon exceeds the stored window range")
        grid = np.zeros((k ** span, width), dtype=np.int8)
        codes = np.arange(k ** span)
        for j in range(span):
            grid[:, center - (w - 1) + j] = (codes // (k ** j)) % k
        return grid

    return SystemHandle(
        name="fullshift", kind="symbolic",
        step_block=step_block, inverse_step_block=inverse_step_block,
        metric_block=metric_block, sample_block=sample_block,
        diameter=1.0, cylinder_grid=cylinder_grid, cylinder_grid_exact=True,
        to_window=to_window, construct_point=construct_point,
        meta={"k": int(k), "L": int(L), "reserve": int(reserve)},
    )


# -- inverse limits --------------------------------------------------------------


def make_inverse_limit(levels, factor_maps, validation_samples=64, seed=0,
                       tol=1e-9) -> SystemHandle:
    """Finite tower of systems glued along factor maps, with metric sum 2^-i rho_i.

    factor_maps[i] sends level-(i+2) point blocks onto level-(i+1) blocks and
    must intertwine the steps within `tol` on sampled points.
    """
    levels = list(levels)
    if len(factor_maps) != len(levels) - 1:
        raise ValueError("need one factor map between each consecutive pair of levels")
    rng = np.random.default_rng(seed)
    for i, pi in enumerate(factor_maps):
        upper, lower = levels[i + 1], levels[i]
        X = upper.sample_block(rng, validation_samples)
        resid = np.max(lower.metric_block(pi(upper.step_block(X)),
                                          lower.step_block(pi(X))))
        if resid > tol:
            raise ValueError(
                "factor map %d is not a semiconjugacy on samples (residual %.3g)"
                % (i, resid))

    probe = [lvl.sample_block(np.random.default_rng(0), 1) for lvl in levels]
    widths = [p.shape[1] for p in probe]
    splits = np.cumsum(widths)[:-1]
    weights = np.array([0.5 ** (i + 1) for i in range(len(levels))])

    def _parts(P):
        return np.split(P, splits, axis=-1)

    def step_block(P):
        return np.concatenate(
            [lvl.step_block(part) for lvl, part in zip(levels, _parts(P))], axis=-1)

    def inverse_step_block(P):
        return np.concatenate(
            [lvl.inverse_step_block(part) for lvl, part in zip(levels, _parts(P))], axis=-1)

    def metric_block(P, Q):
        parts_p, parts_q = _parts(P), _parts(Q)
        return sum(w * lvl.metric_block(pp, qq)
                   for w, lvl, pp, qq in zip(weights, levels, parts_p, parts_q))

    def _thread_from_top(top):
        thread = [top]
        for pi in reversed(factor_maps):
            thread.append(pi(thread[-1]))
        return np.concatenate(list(reversed(thread)), axis=-1)

    def sample_block(rng, count):
        return _thread_from_top(levels[-1].sample_block(rng, count))

    def grid_fn(n, eps, budget):
        # threads are parameterized by the top level: grid it and push down
        top = levels[-1]
        if top.cylinder_grid is not None:
            top_grid = top.cylinder_grid(n, eps, budget.max_cells)
        elif top.torus_dims is not None:
            top_grid = product_grid(top.torus_dims, eps, budget)
        else:
            raise GridError("top level offers no grid to thread")
        return _thread_from_top(top_grid)

    def orbit_span_fn(x, lo, hi):
        parts = np.split(np.asarray(x), splits)
        return np.concatenate(
            [lvl.orbit_span(part, lo, hi) for lvl, part in zip(levels, parts)], axis=-1)

    def thread_compatible(P, tol=1e-9):
        parts = _parts(P)
        return all(
            np.max(levels[i].metric_block(factor_maps[i](parts[i + 1]), parts[i])) <= tol
            for i in range(len(factor_maps))) if factor_maps else True

    diam = float(np.dot(weights, [lvl.diameter for lvl in levels]))
    sys = SystemHandle(
        name="inverse_limit", kind="product",
        step_block=step_block, inverse_step_block=inverse_step_block,
        metric_block=metric_block, sample_block=sample_block,
        diameter=diam, orbit_span_fn=orbit_span_fn, grid_fn=grid_fn,
        meta={"levels": [lvl.name for lvl in levels]},
        levels=tuple(levels),
    )
    sys.thread_compatible = thread_compatible
    sys.level_splits = splits
    return sys
