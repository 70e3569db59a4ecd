"""Exact Choquet integration of non-negative step functions.

For a step function the Riemann integrand t -> mu([f > t]) is itself a step
function, so the sorted-threshold sum

    sum_k (v_k - v_{k+1}) * mu([f >= v_k]),   v_1 > v_2 > ... > v_m, v_{m+1} = 0

is exact.  The evaluation below never materializes superlevel sets: for a
distorted measure only the superlevel *length* matters, and a sectioned
measure is additive over cells, so cumulative sums over value-sorted cells
suffice.  :func:`riemann_choquet` is the deliberately independent brute-force
companion built on explicit interval-set unions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructuralError
from .intervals import IntervalSet, uniform_partition
from .measures import FuzzyMeasure

EXACT_TOL = 1e-9  # identities that hold exactly up to float rounding


@dataclass(frozen=True)
class StepFunction:
    """Piecewise-constant f >= 0 on cells partitioning [0,1).

    ``values`` has shape (ncells,) for scalar functions or (ncells, n) for
    vector ones; integration is componentwise in the vector case.
    """

    cells: tuple[IntervalSet, ...]
    values: np.ndarray

    def __init__(self, cells, values, validate: bool = True):
        cells = tuple(cells)
        values = np.asarray(values, dtype=float)
        if values.shape[0] != len(cells):
            raise StructuralError("one value (row) per cell required")
        if values.size and values.min() < 0:
            raise StructuralError("step function values must be non-negative")
        if validate:
            pieces = sorted(iv for c in cells for iv in c.intervals)
            cursor = 0.0
            for a, b in pieces:
                if abs(a - cursor) > 1e-12:
                    raise StructuralError("cells must partition [0,1) without gaps/overlaps")
                cursor = b
            if abs(cursor - 1.0) > 1e-12:
                raise StructuralError("cells must cover [0,1)")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "values", values)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def constant(value) -> "StepFunction":
        return StepFunction((IntervalSet.full(),), np.array([value], dtype=float).reshape(
            (1,) if np.isscalar(value) else (1, -1)
        ), validate=False)

    @staticmethod
    def indicator(A: IntervalSet, height: float = 1.0) -> "StepFunction":
        if A.is_empty:
            return StepFunction.constant(0.0)
        comp = A.complement()
        if comp.is_empty:
            return StepFunction.constant(height)
        return StepFunction((A, comp), np.array([height, 0.0]), validate=False)

    @staticmethod
    def on_grid(values) -> "StepFunction":
        values = np.asarray(values, dtype=float)
        return StepFunction(uniform_partition(values.shape[0]), values, validate=False)

    @staticmethod
    def from_samples(fn, ncells: int) -> "StepFunction":
        mids = (np.arange(ncells) + 0.5) / ncells
        return StepFunction.on_grid([fn(x) for x in mids])

    # -- queries ----------------------------------------------------------

    @property
    def is_vector(self) -> bool:
        return self.values.ndim == 2

    @property
    def max_value(self) -> float:
        return float(self.values.max()) if self.values.size else 0.0

    def component(self, i: int) -> "StepFunction":
        return StepFunction(self.cells, self.values[:, i], validate=False)

    def value_at(self, x: float):
        for cell, v in zip(self.cells, self.values):
            if cell.contains_point(x):
                return v
        raise StructuralError(f"point {x} not covered")

    # -- pointwise algebra (non-negative results only) ---------------------

    def scaled(self, c: float) -> "StepFunction":
        if c < 0:
            raise StructuralError("scalar must be non-negative")
        return StepFunction(self.cells, c * self.values, validate=False)

    def shifted(self, c: float) -> "StepFunction":
        return StepFunction(self.cells, self.values + c, validate=False)

    def clipped(self, c: float) -> "StepFunction":
        """Pointwise min(f, c)."""
        return StepFunction(self.cells, np.minimum(self.values, c), validate=False)

    def excess_over(self, c: float) -> "StepFunction":
        """Pointwise f - min(f, c) = max(f - c, 0)."""
        return StepFunction(self.cells, np.maximum(self.values - c, 0.0), validate=False)

    def restrict(self, A: IntervalSet) -> "StepFunction":
        """f * 1_A as a step function."""
        comp = A.complement()
        cells: list[IntervalSet] = []
        rows = []
        for cell, v in zip(self.cells, self.values):
            part = cell.intersection(A)
            if not part.is_empty:
                cells.append(part)
                rows.append(v)
        if not comp.is_empty:
            cells.append(comp)
            rows.append(np.zeros_like(self.values[0]))
        return StepFunction(tuple(cells), np.array(rows), validate=False)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        if self.cells is other.cells or self.cells == other.cells:
            return StepFunction(self.cells, self.values + other.values, validate=False)
        cells: list[IntervalSet] = []
        rows = []
        for c, v in zip(self.cells, self.values):
            for d, w in zip(other.cells, other.values):
                part = c.intersection(d)
                if not part.is_empty:
                    cells.append(part)
                    rows.append(v + w)
        return StepFunction(tuple(cells), np.array(rows), validate=False)


def superlevel_set(f: StepFunction, t: float) -> IntervalSet:
    """[f > t] as an explicit IntervalSet (scalar f)."""
    out = IntervalSet.empty()
    for cell, v in zip(f.cells, f.values):
        if v > t:
            out = out.union(cell)
    return out


def _cell_keys(f: StepFunction, mu: FuzzyMeasure) -> tuple[np.ndarray, bool]:
    """Per-cell accumulation keys: lengths (distorted) or measures (sectioned)."""
    if mu.mode == "distorted":
        return np.array([c.lebesgue for c in f.cells]), True
    return np.array([mu(c) for c in f.cells]), False


def threshold_table(f: StepFunction, mu: FuzzyMeasure) -> tuple[np.ndarray, np.ndarray]:
    """Distinct values u (ascending) and S[k] = mu([f >= u_k]).

    mu([f > t]) = S[searchsorted(u, t, 'right')] with S[m] = 0 appended.
    """
    keys, needs_g = _cell_keys(f, mu)
    vals = f.values
    order = np.argsort(-vals, kind="stable")
    sv = vals[order]
    ck = np.cumsum(keys[order])
    ends = np.nonzero(np.diff(sv, append=sv[-1] - 1.0))[0]
    v_desc = sv[ends]
    lvl = ck[ends]
    if needs_g:
        meas_desc = np.array([mu.distortion(x) for x in lvl])
    else:
        meas_desc = lvl
    u = v_desc[::-1].copy()
    S = np.append(meas_desc[::-1], 0.0)
    return u, S


def choquet(f: StepFunction, mu: FuzzyMeasure):
    """Choquet integral of f against mu; exact for step functions.

    Returns a float for scalar f, an ndarray (componentwise) for vector f.
    """
    if f.is_vector:
        return np.array([choquet(f.component(i), mu) for i in range(f.values.shape[1])])
    if f.values.size == 0:
        return 0.0
    keys, needs_g = _cell_keys(f, mu)
    vals = f.values
    order = np.argsort(-vals, kind="stable")
    sv = vals[order]
    ck = np.cumsum(keys[order])
    ends = np.nonzero(np.diff(sv, append=sv[-1] - 1.0))[0]
    v = sv[ends]
    lvl = ck[ends]
    if needs_g:
        meas = np.array([mu.distortion(x) for x in lvl])
    else:
        meas = lvl
    vnext = np.append(v[1:], 0.0)
    return float(np.sum((v - vnext) * meas))


def choquet_restricted(f: StepFunction, mu: FuzzyMeasure, A: IntervalSet):
    """Integral of f over A, i.e. the integral of f * 1_A (f >= 0 only)."""
    return choquet(f.restrict(A), mu)


def riemann_choquet(f: StepFunction, mu: FuzzyMeasure, tnodes: int = 100_000) -> float:
    """Brute-force midpoint Riemann sum of t -> mu([f > t]) on [0, max f].

    Independent oracle for :func:`choquet`: superlevel sets are built as
    explicit interval-set unions and measured one by one.  The integrand is
    constant between consecutive distinct values of f, so each node's set is
    computed once per run of equal nodes.
    """
    if f.is_vector:
        raise StructuralError("riemann oracle is scalar-only")
    M = f.max_value
    if M <= 0:
        return 0.0
    dt = M / tnodes
    ts = (np.arange(tnodes) + 0.5) * dt
    u = np.unique(f.values)
    # nodes in [u_j, u_{j+1}) share the same superlevel set
    bucket = np.searchsorted(u, ts, side="right")
    total = 0.0
    for j in range(int(bucket.min()), int(bucket.max()) + 1):
        count = int(np.sum(bucket == j))
        if count == 0:
            continue
        rep = ts[np.argmax(bucket == j)]
        total += count * mu(superlevel_set(f, rep))
    return total * dt


# -- randomized property checks -----------------------------------------------


def random_step_function(
    rng: np.random.Generator,
    max_cells: int = 10,
    max_value: float = 2.0,
    union_cells: bool = True,
) -> StepFunction:
    """Random partition (occasionally with a union cell) and random values."""
    ncells = int(rng.integers(1, max_cells + 1))
    if ncells == 1:
        return StepFunction.constant(float(rng.uniform(0, max_value)))
    cuts = np.sort(rng.choice(np.arange(1, 1 << 10), size=ncells - 1, replace=False))
    edges = np.concatenate(([0.0], cuts / float(1 << 10), [1.0]))
    cells = [IntervalSet.interval(a, b) for a, b in zip(edges, edges[1:])]
    if union_cells and ncells >= 4 and rng.random() < 0.3:
        i, j = sorted(rng.choice(ncells, size=2, replace=False))
        if j > i + 1:  # merge two non-adjacent cells into one union cell
            cells[i] = cells[i].union(cells[j])
            del cells[j]
    values = rng.uniform(0.0, max_value, size=len(cells))
    return StepFunction(tuple(cells), values, validate=False)


def comonotone_pair(
    rng: np.random.Generator, max_cells: int = 10, max_value: float = 2.0
) -> tuple[StepFunction, StepFunction]:
    """Two step functions sharing a monotone ordering of their cells.

    Both value sequences increase along one shared cell permutation, so no
    pair of points has one function increasing while the other decreases.
    """
    ncells = int(rng.integers(2, max_cells + 1))
    cuts = np.sort(rng.choice(np.arange(1, 1 << 10), size=ncells - 1, replace=False))
    edges = np.concatenate(([0.0], cuts / float(1 << 10), [1.0]))
    cells = tuple(IntervalSet.interval(a, b) for a, b in zip(edges, edges[1:]))
    perm = rng.permutation(ncells)
    fv = np.empty(ncells)
    hv = np.empty(ncells)
    fv[perm] = np.sort(rng.uniform(0, max_value, size=ncells))
    hv[perm] = np.sort(rng.uniform(0, max_value, size=ncells))
    return (
        StepFunction(cells, fv, validate=False),
        StepFunction(cells, hv, validate=False),
    )


@dataclass(frozen=True)
class ChoquetPropertyReport:
    """Per-property outcome of the randomized integral checks."""

    trials: int
    seed: int
    results: dict  # name -> {"checked", "passed", "max_deviation", "counterexample"}

    @property
    def all_pass(self) -> bool:
        return all(r["passed"] for r in self.results.values() if r["checked"])

    def to_dict(self) -> dict:
        return {"trials": self.trials, "seed": self.seed, "results": self.results}


def check_choquet_properties(
    mu: FuzzyMeasure, trials: int = 500, seed: int = 42
) -> ChoquetPropertyReport:
    """Randomized checks of homogeneity, monotonicity, translation,
    subadditivity (subadditive mu only), comonotone and horizontal additivity."""
    if trials < 1:
        raise StructuralError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    names = [
        "homogeneity",
        "monotonicity",
        "translation",
        "subadditivity",
        "comonotone_additivity",
        "horizontal_additivity",
    ]
    res = {
        n: {
            "checked": n != "subadditivity" or mu.is_subadditive,
            "passed": True,
            "max_deviation": 0.0,
            "counterexample": None,
        }
        for n in names
    }

    def record(name, dev, payload):
        r = res[name]
        r["max_deviation"] = max(r["max_deviation"], dev)
        if dev > EXACT_TOL and r["passed"]:
            r["passed"] = False
            r["counterexample"] = payload

    for _ in range(trials):
        f = random_step_function(rng)
        intf = choquet(f, mu)

        c = float(rng.uniform(0, 3))
        record(
            "homogeneity",
            abs(choquet(f.scaled(c), mu) - c * intf),
            {"c": c, "values": f.values.tolist()},
        )

        bump = StepFunction(f.cells, rng.uniform(0, 1, size=len(f.cells)), validate=False)
        record(
            "monotonicity",
            max(0.0, intf - choquet(f + bump, mu)),
            {"values": f.values.tolist()},
        )

        record(
            "translation",
            abs(choquet(f.shifted(c), mu) - intf - c * mu.total),
            {"c": c, "values": f.values.tolist()},
        )

        if res["subadditivity"]["checked"]:
            g = random_step_function(rng)
            record(
                "subadditivity",
                max(0.0, choquet(f + g, mu) - intf - choquet(g, mu)),
                {"f": f.values.tolist(), "g": g.values.tolist()},
            )

        cf, ch = comonotone_pair(rng)
        record(
            "comonotone_additivity",
            abs(choquet(cf + ch, mu) - choquet(cf, mu) - choquet(ch, mu)),
            {"f": cf.values.tolist(), "h": ch.values.tolist()},
        )

        cut = float(rng.uniform(0, f.max_value + 0.5))
        record(
            "horizontal_additivity",
            abs(intf - choquet(f.clipped(cut), mu) - choquet(f.excess_over(cut), mu)),
            {"c": cut, "values": f.values.tolist()},
        )

    return ChoquetPropertyReport(trials, seed, res)
