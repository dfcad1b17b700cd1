"""Problem definition for the system x_i'' + a_i(t) x_i = lam (g_i(t) f_i(x) + e_i(t)).

The nonlinearity family is radial power sums, f_i(x) = sum_j c_ij * ||x||_2^{p_ij}
with every c_ij > 0.  Radii and annuli always refer to the summation norm
|x|_1 = sum x_i on the positive orthant; the euclidean norm appears only as
the argument of the radial profiles.  On the orthant the two norms bracket
each other (u <= |x|_1 <= sqrt(n) u), which is what lets every annulus
quantity reduce to a one-dimensional search over u = ||x||_2.

All 1-D extrema are computed from the exact critical points of the power sums
(sign changes of u * phi'(u), refined by bisection), so quantities like
fhat are monotone by construction rather than up to sampling error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .coefficients import PeriodicCoefficient, coefficient_extrema, coefficient_values
from .errors import DomainError, HypothesisError, SingularityError

__all__ = [
    "PowerLawRadial",
    "Problem",
    "AnnulusBounds",
    "eval_f",
    "annulus_extrema",
    "eta_lower",
    "fhat",
    "thresholds_delta",
    "annulus_bounds",
]

SINGULARITY_GUARD = 1e-10
AUDIT_GRID = 4096
ETA_SAMPLES = 1024
# search window for radial critical points and threshold bisections
U_LO, U_HI = 1e-20, 1e20


@dataclass(frozen=True)
class PowerLawRadial:
    """Per-component radial power sums: terms[i] = ((c, p), ...)."""

    terms: tuple

    def __post_init__(self):
        clean = []
        for comp in self.terms:
            comp_terms = tuple((float(c), float(p)) for c, p in comp)
            if not comp_terms:
                raise DomainError("each component needs at least one term")
            for c, _ in comp_terms:
                if c <= 0.0:
                    raise DomainError(f"coefficients must be positive, got {c}")
            clean.append(comp_terms)
        if not clean:
            raise DomainError("nonlinearity needs at least one component")
        object.__setattr__(self, "terms", tuple(clean))

    @property
    def n_components(self) -> int:
        return len(self.terms)

    def powers(self, i: int) -> np.ndarray:
        return np.array([p for _, p in self.terms[i]])

    def phi(self, i: int, u):
        """Radial profile phi_i(u) = sum_j c_ij u^p_ij, vectorized over u."""
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for c, p in self.terms[i]:
            out = out + c * np.power(u, p)
        return out

    def singular_at_zero(self, i: int) -> bool:
        return bool(self.powers(i).min() < 0.0)

    def unbounded_at_infinity(self, i: int) -> bool:
        return bool(self.powers(i).max() > 0.0)

    def critical_points(self, i: int) -> tuple:
        return _critical_points(self.terms[i])


@lru_cache(maxsize=256)
def _critical_points(comp_terms: tuple) -> tuple:
    """Roots of u*phi'(u) = sum c p u^p in (0, inf), by log-grid sign scan."""
    cs = np.array([c * p for c, p in comp_terms])
    ps = np.array([p for _, p in comp_terms])
    if np.all(cs >= 0.0) or np.all(cs <= 0.0):
        return ()

    def psi(w):
        # w = ln u; exponential sum, evaluated overflow-tolerantly
        with np.errstate(over="ignore"):
            return np.sum(cs * np.exp(ps * w))

    w_grid = np.linspace(math.log(U_LO), math.log(U_HI), 2048)
    vals = np.array([psi(w) for w in w_grid])
    roots = []
    for j in range(len(w_grid) - 1):
        v0, v1 = vals[j], vals[j + 1]
        if v0 == 0.0:
            roots.append(w_grid[j])
            continue
        if v0 * v1 < 0.0:
            lo, hi = w_grid[j], w_grid[j + 1]
            flo = v0
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                fm = psi(mid)
                if fm == 0.0:
                    lo = mid
                    break
                if flo * fm < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(0.5 * (lo + hi))
    return tuple(math.exp(w) for w in roots)


def _interval_extrema(f: PowerLawRadial, i: int, lo: float, hi: float):
    """(min, max) of phi_i over [lo, hi] from endpoints and interior critical points."""
    pts = [lo, hi]
    pts.extend(u for u in f.critical_points(i) if lo < u < hi)
    vals = f.phi(i, np.array(pts))
    return float(vals.min()), float(vals.max())


def _tail_inf(f: PowerLawRadial, i: int, lo: float) -> float:
    """inf of phi_i over [lo, inf); requires the profile to blow up at infinity."""
    pts = [lo]
    pts.extend(u for u in f.critical_points(i) if u > lo)
    return float(f.phi(i, np.array(pts)).min())


def _head_inf(f: PowerLawRadial, i: int, hi: float) -> float:
    """inf of phi_i over (0, hi]; requires the profile to blow up at zero."""
    pts = [hi]
    pts.extend(u for u in f.critical_points(i) if u < hi)
    return float(f.phi(i, np.array(pts)).min())


def eval_f(f: PowerLawRadial, x) -> np.ndarray:
    """f(x) componentwise at one orthant point; guards the singularity at 0."""
    x = np.asarray(x, dtype=float)
    u = float(np.sqrt(np.sum(x * x)))
    if u < SINGULARITY_GUARD:
        raise SingularityError(f"||x||_2 = {u:.3e} below guard {SINGULARITY_GUARD}")
    return np.array([f.phi(i, u) for i in range(f.n_components)])


def annulus_extrema(f: PowerLawRadial, r: float, sigma: float, n: int):
    """(m_hat, M_hat): extrema of all component profiles on the orthant annulus
    sigma*r <= |x|_1 <= r, i.e. u in [sigma*r/sqrt(n), r]."""
    if r <= 0.0:
        raise DomainError("r must be positive")
    if not (0.0 < sigma <= 1.0):
        raise DomainError("sigma must lie in (0, 1]")
    lo = sigma * r / math.sqrt(n)
    mins, maxs = [], []
    for i in range(f.n_components):
        a, b = _interval_extrema(f, i, lo, r)
        mins.append(a)
        maxs.append(b)
    return min(mins), max(maxs)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(fn, a: float, b: float, iters: int = 90):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(d)
    return min(fc, fd)


def eta_lower(f: PowerLawRadial, r: float, sigma: float, n: int) -> float:
    """eta_r with f_j(x) >= eta_r * |x|_1 guaranteed on the orthant annulus
    sigma*r <= |x|_1 <= r, maximized over the component j.

    For ||x||_2 = u the summation norm is at most min(sqrt(n)*u, r) on the
    annulus, so the worst ratio at fixed u is phi_j(u)/min(sqrt(n)*u, r).
    Dense sampling plus golden-section refinement around the sampled minimum.
    """
    if r <= 0.0:
        raise DomainError("r must be positive")
    lo = sigma * r / math.sqrt(n)
    best = 0.0
    for j in range(f.n_components):

        def ratio(u, jj=j):
            return float(f.phi(jj, u) / min(math.sqrt(n) * u, r))

        if lo >= r:
            comp_min = ratio(r)
        else:
            us = np.geomspace(lo, r, ETA_SAMPLES)
            vals = f.phi(j, us) / np.minimum(math.sqrt(n) * us, r)
            idx = int(np.argmin(vals))
            comp_min = float(vals[idx])
            a = us[max(idx - 1, 0)]
            b = us[min(idx + 1, ETA_SAMPLES - 1)]
            if a < b:
                comp_min = min(comp_min, _golden_min(ratio, float(a), float(b)))
        best = max(best, comp_min)
    return best


def fhat(f: PowerLawRadial, theta: float, n: int) -> np.ndarray:
    """Per-component max of f_i over the orthant shell 1 <= |x|_1 <= theta."""
    if theta < 1.0:
        raise DomainError("theta must be at least 1")
    lo = 1.0 / math.sqrt(n)
    out = []
    for i in range(f.n_components):
        _, hi = _interval_extrema(f, i, lo, max(theta, lo))
        out.append(hi)
    return np.array(out)


@dataclass
class AnnulusBounds:
    r: float
    m_hat: float
    M_hat: float
    eta: float


def annulus_bounds(f: PowerLawRadial, r: float, sigma: float, n: int) -> AnnulusBounds:
    m_hat, big_hat = annulus_extrema(f, r, sigma, n)
    return AnnulusBounds(r=r, m_hat=m_hat, M_hat=big_hat, eta=eta_lower(f, r, sigma, n))


@dataclass
class Problem:
    """The full parametrized system on one period.

    a, g, e are per-component periodic coefficients sharing the problem
    period; f is the radial nonlinearity; lam >= 0 (lam = 0 degenerates to
    the zero forcing, kept valid for linearity checks).  sign_profile is
    derived from e: "MixedE" as soon as some e_i dips negative, which then
    requires min g_i > 0 everywhere.
    """

    n: int
    period: float
    a: tuple
    g: tuple
    e: tuple
    f: PowerLawRadial
    lam: float
    sign_profile: str = field(init=False)
    split_factor: float = 0.5

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be at least 1")
        if self.period <= 0.0:
            raise DomainError("period must be positive")
        if self.lam < 0.0:
            raise DomainError("lam must be nonnegative")
        self.a = tuple(self.a)
        self.g = tuple(self.g)
        self.e = tuple(self.e)
        if not (len(self.a) == len(self.g) == len(self.e) == self.n):
            raise DomainError("a, g, e must each have n entries")
        if self.f.n_components != self.n:
            raise DomainError("nonlinearity component count must equal n")
        for coef in (*self.a, *self.g, *self.e):
            if abs(coef.period - self.period) > 1e-12 * self.period:
                raise DomainError("coefficient period differs from problem period")

        t = np.arange(AUDIT_GRID) * (self.period / AUDIT_GRID)
        mixed = False
        for i in range(self.n):
            g_lo, _ = coefficient_extrema(self.g[i], AUDIT_GRID)
            g_vals = coefficient_values(self.g[i], t)
            if g_lo < -1e-12:
                raise HypothesisError(f"g[{i}] takes negative values")
            if g_vals.mean() * self.period <= 0.0:
                raise HypothesisError(f"g[{i}] must have positive integral")
            e_lo, _ = coefficient_extrema(self.e[i], AUDIT_GRID)
            if e_lo < 0.0:
                mixed = True
        self.sign_profile = "MixedE" if mixed else "NonnegativeE"
        if self.sign_profile == "MixedE":
            for i in range(self.n):
                g_lo, _ = coefficient_extrema(self.g[i], AUDIT_GRID)
                if g_lo <= 0.0:
                    raise HypothesisError(
                        f"sign-changing e requires strictly positive g, g[{i}] is not"
                    )

    def grid(self, n_grid: int) -> np.ndarray:
        return np.arange(n_grid) * (self.period / n_grid)

    def g_on_grid(self, n_grid: int) -> np.ndarray:
        t = self.grid(n_grid)
        return np.vstack([coefficient_values(self.g[i], t) for i in range(self.n)])

    def e_on_grid(self, n_grid: int) -> np.ndarray:
        t = self.grid(n_grid)
        return np.vstack([coefficient_values(self.e[i], t) for i in range(self.n)])

    def a_on_grid(self, n_grid: int) -> np.ndarray:
        t = self.grid(n_grid)
        return np.vstack([coefficient_values(self.a[i], t) for i in range(self.n)])


def _forcing_bounds(problem: Problem):
    """Per-component B_i = 2 (max|e_i| + 1) / min g_i from the audit grid."""
    bounds = []
    for i in range(problem.n):
        g_lo, _ = coefficient_extrema(problem.g[i], AUDIT_GRID)
        e_lo, e_hi = coefficient_extrema(problem.e[i], AUDIT_GRID)
        e_abs = max(abs(e_lo), abs(e_hi))
        if g_lo <= 0.0:
            raise HypothesisError(f"threshold bound needs min g[{i}] > 0")
        bounds.append(2.0 * (e_abs + 1.0) / g_lo)
    return bounds


def _largest_radius(pred) -> float | None:
    """Largest d in [U_LO, U_HI] with pred true on it; pred is nonincreasing."""
    if not pred(U_LO):
        return None
    if pred(U_HI):
        return math.inf
    lo, hi = U_LO, U_HI
    for _ in range(160):
        mid = math.sqrt(lo * hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _smallest_radius(pred) -> float | None:
    """Smallest d in [U_LO, U_HI] with pred true on it; pred is nondecreasing."""
    if not pred(U_HI):
        return None
    if pred(U_LO):
        return U_LO
    lo, hi = U_LO, U_HI
    for _ in range(160):
        mid = math.sqrt(lo * hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def thresholds_delta(problem: Problem, sigma: float):
    """(delta, Delta): radii inside/outside of which f_i dominates the forcing.

    delta is the largest d with phi_i(u) >= B_i for all u in (0, d] and all i
    (None unless every component is singular at zero, may be inf).  Delta is
    R''/sigma where R'' is the smallest radius with phi_i(u) >= B_i for all
    u >= R''/sqrt(n) (None unless every component blows up at infinity).
    Both by bisection on the monotone envelopes; sigma comes from the cone
    constants of the Green tables.
    """
    if not (0.0 < sigma <= 1.0):
        raise DomainError("sigma must lie in (0, 1]")
    bounds = _forcing_bounds(problem)
    f = problem.f
    n = problem.n

    if all(f.singular_at_zero(i) for i in range(n)):

        def small_ok(d):
            return all(_head_inf(f, i, d) >= bounds[i] for i in range(n))

        delta = _largest_radius(small_ok)
    else:
        delta = None

    if all(f.unbounded_at_infinity(i) for i in range(n)):

        def large_ok(rr):
            return all(_tail_inf(f, i, rr / math.sqrt(n)) >= bounds[i] for i in range(n))

        r_dd = _smallest_radius(large_ok)
        delta_big = None if r_dd is None else r_dd / sigma
    else:
        delta_big = None

    return delta, delta_big
