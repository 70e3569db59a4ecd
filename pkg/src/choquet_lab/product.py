"""Decomposable measures on [0,1] x [0,1] and their Fubini decomposition.

The y-axis carries K uniform midpoint nodes y_k = (k - 1/2) / K; a
decomposable measure is the y-average of per-node fuzzy measures:

    m(H) = (1/K) * sum_k mu_k(H_k)

Three family modes are supported.  ``homothetic`` (one distortion shared by
every node, possibly rescaled per node) and ``sectioned`` (shared block
partition of X, per-node block weights) admit a single chain X_t with
mu_k(X_t) = t * mu_k(X) for every node simultaneously, which is what makes
level-set construction and range convexity work; ``heterogeneous`` families
integrate fine but refuse those constructions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import linprog

from .choquet import StepFunction, choquet, threshold_table
from .errors import StructuralError, UnsupportedFamilyError
from .intervals import IntervalSet
from .measures import Distortion, FuzzyMeasure

DEFAULT_K = 100
LEVEL_TOL = 1e-9  # |mu_k(H_k) - tau_k mu_k(X)| for constructed sets
REALIZE_TOL = 1e-6  # end-to-end tolerance for range realization


@dataclass(frozen=True)
class SectionFamily:
    """A y-grid of fuzzy measures mu_{y_k} defining the product measure."""

    mode: str  # "homothetic" | "sectioned" | "heterogeneous"
    measures: tuple[FuzzyMeasure, ...]
    normalized: bool = False
    blocks: tuple[IntervalSet, ...] | None = None  # sectioned mode only

    def __post_init__(self):
        if self.mode not in ("homothetic", "sectioned", "heterogeneous"):
            raise StructuralError(f"unknown family mode {self.mode!r}")
        if not self.measures:
            raise StructuralError("need at least one y-node")
        if self.normalized:
            for mu in self.measures:
                if abs(mu.total - 1.0) > 1e-12:
                    raise StructuralError("normalized family needs mu_y(X) = 1 at every node")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def homothetic(
        distortion: Distortion,
        K: int = DEFAULT_K,
        scales=None,
        normalized: bool = True,
    ) -> "SectionFamily":
        if normalized and scales is not None:
            raise StructuralError("normalized homothetic families cannot carry free scales")
        if normalized:
            shared = FuzzyMeasure.distorted(
                replace(distortion, scale=distortion.scale / distortion(1.0))
            )
            measures = (shared,) * K
        elif scales is None:
            measures = (FuzzyMeasure.distorted(distortion),) * K
        else:
            scales = np.asarray(scales, dtype=float)
            if scales.shape != (K,) or scales.min() <= 0:
                raise StructuralError("scales must be K positive reals")
            measures = tuple(
                FuzzyMeasure.distorted(replace(distortion, scale=distortion.scale * s))
                for s in scales
            )
        return SectionFamily("homothetic", measures, normalized)

    @staticmethod
    def sectioned(blocks, node_weights, normalized: bool = True) -> "SectionFamily":
        blocks = tuple(blocks)
        W = np.asarray(node_weights, dtype=float)
        if W.ndim != 2 or W.shape[1] != len(blocks):
            raise StructuralError("node_weights must be (K, #blocks)")
        if W.min() < 0 or not np.all(W.sum(axis=1) > 0):
            raise StructuralError("weights must be >= 0 with positive row sums")
        if normalized:
            W = W / W.sum(axis=1, keepdims=True)
        measures = tuple(FuzzyMeasure.sectioned(blocks, row) for row in W)
        return SectionFamily("sectioned", measures, normalized, blocks)

    @staticmethod
    def from_y_intervals(
        blocks, yintervals, K: int = DEFAULT_K, normalized: bool = True
    ) -> "SectionFamily":
        """Finite-sections construction: node y_k in J_i carries the measure
        supported on block E_i alone."""
        ys = (np.arange(K) + 0.5) / K
        W = np.zeros((K, len(blocks)))
        for i, (a, b) in enumerate(yintervals):
            W[(ys >= a) & (ys < b), i] = 1.0
        if not np.all(W.sum(axis=1) > 0):
            raise StructuralError("yintervals must cover every y-node exactly once")
        return SectionFamily.sectioned(blocks, W, normalized)

    @staticmethod
    def heterogeneous(measures) -> "SectionFamily":
        measures = tuple(measures)
        normalized = all(abs(mu.total - 1.0) <= 1e-12 for mu in measures)
        return SectionFamily("heterogeneous", measures, normalized)

    # -- queries ----------------------------------------------------------

    @property
    def K(self) -> int:
        return len(self.measures)

    @property
    def ygrid(self) -> np.ndarray:
        return (np.arange(self.K) + 0.5) / self.K

    @property
    def convex_type(self) -> bool:
        return self.mode in ("homothetic", "sectioned")

    @property
    def totals(self) -> np.ndarray:
        return np.array([mu.total for mu in self.measures])

    def uniform_chain(self, t: float) -> IntervalSet:
        """X_t with mu_k(X_t) = t * mu_k(X) for all nodes simultaneously."""
        if not self.convex_type:
            raise UnsupportedFamilyError("heterogeneous families are not uniformly filtering")
        if t <= 0.0:
            return IntervalSet.empty()
        if t >= 1.0:
            return IntervalSet.full()
        if self.mode == "homothetic":
            g = self.measures[0].distortion
            return IntervalSet.full().prefix(g.inverse(t * g(1.0)))
        out = IntervalSet.empty()
        for blk in self.blocks:
            out = out.union(blk.prefix(t * blk.lebesgue))
        return out


@dataclass(frozen=True)
class ProductSet:
    """Measurable subset of X x [0,1]: one x-section per y-node."""

    sections: tuple[IntervalSet, ...]

    @staticmethod
    def empty(K: int) -> "ProductSet":
        return ProductSet((IntervalSet.empty(),) * K)

    @staticmethod
    def full(K: int) -> "ProductSet":
        return ProductSet((IntervalSet.full(),) * K)

    @property
    def K(self) -> int:
        return len(self.sections)

    def is_subset_of(self, other: "ProductSet") -> bool:
        return all(a.is_subset_of(b) for a, b in zip(self.sections, other.sections))


@dataclass(frozen=True)
class ProductStepFunction:
    """f(., y_k) as a step function per node; scalar or vector-valued."""

    sections: tuple[StepFunction, ...]

    def __post_init__(self):
        dims = {s.values.ndim for s in self.sections}
        if len(dims) > 1:
            raise StructuralError("mixed scalar/vector sections")

    @staticmethod
    def sectional(values) -> "ProductStepFunction":
        """f(x,y) = phi(y): one constant section per node."""
        phi = np.asarray(values, dtype=float)
        if phi.min() < 0:
            raise StructuralError("sectional values must be non-negative")
        return ProductStepFunction(tuple(StepFunction.constant(v) for v in phi))

    @staticmethod
    def uniform(f: StepFunction, K: int) -> "ProductStepFunction":
        """Same x-profile at every node."""
        return ProductStepFunction((f,) * K)

    @staticmethod
    def sectional_on(values, H: ProductSet) -> "ProductStepFunction":
        """phi(y) * 1_H as a product step function."""
        phi = np.asarray(values, dtype=float)
        if phi.shape[0] != H.K:
            raise StructuralError("section-count mismatch between phi and H")
        sections = []
        for v, sec in zip(phi, H.sections):
            if np.isscalar(v) or np.ndim(v) == 0:
                sections.append(StepFunction.indicator(sec, float(v)))
            else:
                comp = sec.complement()
                if sec.is_empty:
                    sections.append(StepFunction.constant(np.zeros_like(v)))
                elif comp.is_empty:
                    sections.append(StepFunction.constant(v))
                else:
                    sections.append(
                        StepFunction((sec, comp), np.array([v, np.zeros_like(v)]), validate=False)
                    )
        return ProductStepFunction(tuple(sections))

    @staticmethod
    def separable(gx: StepFunction, hy) -> "ProductStepFunction":
        """f(x,y) = g(x) * h(y) with h per node (scalar or vector)."""
        h = np.asarray(hy, dtype=float)
        if h.ndim == 1:
            return ProductStepFunction(tuple(gx.scaled(float(c)) for c in h))
        sections = []
        for row in h:
            vals = gx.values[:, None] * row[None, :]
            sections.append(StepFunction(gx.cells, vals, validate=False))
        return ProductStepFunction(tuple(sections))

    @property
    def K(self) -> int:
        return len(self.sections)

    @property
    def is_vector(self) -> bool:
        return self.sections[0].is_vector

    @property
    def max_value(self) -> float:
        return max(s.max_value for s in self.sections)


def _check_sections(fam: SectionFamily, K: int):
    if K != fam.K:
        raise StructuralError(f"section-count mismatch: family has {fam.K}, got {K}")


def as_sectional(values, fam: SectionFamily) -> np.ndarray:
    """Validate a sectional function given as per-node values."""
    phi = np.asarray(values, dtype=float)
    _check_sections(fam, phi.shape[0])
    if phi.size and phi.min() < 0:
        raise StructuralError("sectional values must be non-negative")
    return phi


def product_measure(fam: SectionFamily, H: ProductSet) -> float:
    """m(H): midpoint-rule average of the per-node section measures."""
    _check_sections(fam, H.K)
    return float(np.mean([mu(s) for mu, s in zip(fam.measures, H.sections)]))


def integrate_product(fam: SectionFamily, f: ProductStepFunction):
    """Iterated integral (1/K) sum_k choquet(f(., y_k), mu_k)."""
    _check_sections(fam, f.K)
    vals = [choquet(s, mu) for mu, s in zip(fam.measures, f.sections)]
    return np.mean(np.asarray(vals), axis=0) if f.is_vector else float(np.mean(vals))


def integrate_sectional_over(fam: SectionFamily, phi, H: ProductSet):
    """Integral of the sectional function phi over H:
    (1/K) sum_k phi(y_k) * mu_k(H_k), componentwise."""
    phi = as_sectional(phi, fam)
    _check_sections(fam, H.K)
    w = np.array([mu(s) for mu, s in zip(fam.measures, H.sections)])
    if phi.ndim == 1:
        return float(np.mean(phi * w))
    return np.mean(phi * w[:, None], axis=0)


@dataclass(frozen=True)
class FubiniReport:
    lhs: float  # direct t-quadrature of t -> avg_k mu_k([f_k > t])
    rhs: float  # iterated per-section integral
    tnodes: int

    @property
    def deviation(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "tnodes": self.tnodes,
            "deviation": self.deviation,
        }


def fubini_check(fam: SectionFamily, f: ProductStepFunction, tnodes: int = 10_000) -> FubiniReport:
    """Compare both integration orders for f on the product space.

    The left side integrates t -> (1/K) sum_k mu_k([f_k > t]) by midpoint
    quadrature on [0, max f]; the right side is :func:`integrate_product`.
    """
    _check_sections(fam, f.K)
    if tnodes < 100:
        raise StructuralError("tnodes must be >= 100")
    if f.is_vector:
        reports = [
            fubini_check(
                fam,
                ProductStepFunction(tuple(s.component(i) for s in f.sections)),
                tnodes,
            )
            for i in range(f.sections[0].values.shape[1])
        ]
        worst = max(reports, key=lambda r: r.deviation)
        return worst
    M = f.max_value
    rhs = integrate_product(fam, f)
    if M <= 0:
        return FubiniReport(0.0, rhs, tnodes)
    dt = M / tnodes
    ts = (np.arange(tnodes) + 0.5) * dt
    acc = np.zeros(tnodes)
    for mu, section in zip(fam.measures, f.sections):
        u, S = threshold_table(section, mu)
        acc += S[np.searchsorted(u, ts, side="right")]
    lhs = float(np.sum(acc) / fam.K * dt)
    return FubiniReport(lhs, rhs, tnodes)


@dataclass(frozen=True)
class CommutationReport:
    """Deviations of p . integral(f) from integral(p . f)."""

    deviations: dict
    max_deviation: float

    def to_dict(self) -> dict:
        return {"deviations": self.deviations, "max_deviation": self.max_deviation}


def check_price_commutation(
    fam: SectionFamily, p, phi, gx: StepFunction | None = None
) -> CommutationReport:
    """Exact commutation of a price vector with the product integral.

    Checks the sectional case phi and, when ``gx`` is given, the separable
    case f(x,y) = g(x) * phi(y).
    """
    p = np.asarray(p, dtype=float)
    phi = as_sectional(phi, fam)
    if phi.ndim != 2 or phi.shape[1] != p.shape[0]:
        raise StructuralError("phi must be (K, n) matching p")
    devs = {}

    vec = integrate_sectional_over(fam, phi, ProductSet.full(fam.K))
    scalar = integrate_sectional_over(fam, phi @ p, ProductSet.full(fam.K))
    devs["sectional"] = abs(float(p @ vec) - scalar)

    if gx is not None:
        fvec = ProductStepFunction.separable(gx, phi)
        fscal = ProductStepFunction.separable(gx, phi @ p)
        devs["separable"] = abs(float(p @ integrate_product(fam, fvec)) - integrate_product(fam, fscal))

    return CommutationReport(devs, max(devs.values()))


def product_set_from_levels(fam: SectionFamily, levels) -> ProductSet:
    """H with mu_k(H_k) = levels[k] * mu_k(X), built on the uniform chain."""
    levels = np.asarray(levels, dtype=float)
    _check_sections(fam, levels.shape[0])
    if levels.min() < -1e-12 or levels.max() > 1 + 1e-12:
        raise StructuralError("levels must lie in [0,1]")
    return ProductSet(tuple(fam.uniform_chain(float(t)) for t in levels))


@dataclass(frozen=True)
class RangeResult:
    """Outcome of realizing a target vector as an integral over some set."""

    feasible: bool
    levels: np.ndarray | None
    product_set: ProductSet | None
    achieved: np.ndarray | None
    deviation: float | None
    separating_direction: np.ndarray | None

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "levels": None if self.levels is None else self.levels.tolist(),
            "achieved": None if self.achieved is None else np.atleast_1d(self.achieved).tolist(),
            "deviation": self.deviation,
            "separating_direction": None
            if self.separating_direction is None
            else self.separating_direction.tolist(),
        }


def range_realize(fam: SectionFamily, phi, target) -> RangeResult:
    """Realize ``target`` as integral of the sectional phi over some H, or
    produce a separating direction showing it is out of range.

    Feasibility is a small box-constrained LP in the per-node levels tau_k:
    the candidate integrals are (1/K) sum_k tau_k * mu_k(X) * phi(y_k) with
    tau_k in [0,1], and any feasible tau is turned into an actual set via the
    uniform chain.
    """
    if not fam.convex_type:
        raise UnsupportedFamilyError("range realization needs a convex-type family")
    if not fam.normalized:
        raise UnsupportedFamilyError("range realization needs a normalized family")
    phi = as_sectional(phi, fam)
    target = np.atleast_1d(np.asarray(target, dtype=float))
    U = (phi if phi.ndim == 2 else phi[:, None]) * fam.totals[:, None]  # (K, n)
    K, n = U.shape
    if target.shape != (n,):
        raise StructuralError("target dimension mismatch")

    # min s  s.t.  |U^T tau / K - target| <= s componentwise, tau in [0,1]
    c = np.zeros(K + 1)
    c[-1] = 1.0
    A = U.T / K  # (n, K)
    A_ub = np.block([[A, -np.ones((n, 1))], [-A, -np.ones((n, 1))]])
    b_ub = np.concatenate([target, -target])
    bounds = [(0.0, 1.0)] * K + [(0.0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status == 0 and res.fun <= 1e-8:
        levels = np.clip(res.x[:K], 0.0, 1.0)
        H = product_set_from_levels(fam, levels)
        achieved = np.atleast_1d(integrate_sectional_over(fam, phi, H))
        deviation = float(np.max(np.abs(achieved - target)))
        if deviation <= REALIZE_TOL:
            return RangeResult(True, levels, H, achieved, deviation, None)

    # infeasible: find d with d.target > sup_{H} d.integral = (1/K) sum max(0, d.u_k)
    #   max d.target - (1/K) sum_k m_k   s.t. m_k >= 0, m_k >= d.u_k, |d| <= 1
    c2 = np.concatenate([-target, np.full(K, 1.0 / K)])
    A2 = np.hstack([U, -np.eye(K)])  # d.u_k - m_k <= 0
    b2 = np.zeros(K)
    bounds2 = [(-1.0, 1.0)] * n + [(0.0, None)] * K
    res2 = linprog(c2, A_ub=A2, b_ub=b2, bounds=bounds2, method="highs")
    direction = res2.x[:n] if res2.status == 0 else None
    return RangeResult(False, None, None, None, None, direction)
