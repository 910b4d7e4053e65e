"""Weighted prime-factor histograms and the bounds they are tested against.

The histogram of sum f(n) over a survivor set, binned by omega(n, E) or
bigomega(n, E), is exact; every bound here (factorial-decay shape, moment
generating sums, exponential tails, Gaussian reference) is evaluated in log
space and reported as a mass / bound ratio.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import bulk
from .arith import PrimeTable
from .multfunc import MultiplicativeFunction, hr_constant, mertens_sum, values_upto
from .primesets import ALL_PRIMES, AllPrimes, PrimeSubset
from .sift import SiftedSet, nu_sum


@dataclass
class WeightedHistogram:
    """bins[k] = sum of f(n) over set members with g(n, E) = k."""

    x: int
    g_kind: str
    E: PrimeSubset
    f: MultiplicativeFunction
    set_label: str
    bins: dict[int, float]
    total: float
    count: int

    def mass_low(self, cutoff: float) -> float:
        """Total mass at k <= cutoff."""
        return float(sum(m for k, m in self.bins.items() if k <= cutoff))

    def mass_high(self, cutoff: float) -> float:
        """Total mass at k >= cutoff."""
        return float(sum(m for k, m in self.bins.items() if k >= cutoff))


def weighted_histogram(
    sset: SiftedSet,
    f: MultiplicativeFunction,
    g_kind: str = "omega",
    E: PrimeSubset = ALL_PRIMES,
    table: PrimeTable | None = None,
    threads: int = 1,
) -> WeightedHistogram:
    """Exact histogram of g(n, E) over the set, weighted by f."""
    x = sset.x
    if g_kind not in ("omega", "bigomega"):
        raise ValueError(f"unknown statistic {g_kind!r}")
    table = table if table is not None and table.limit >= max(x, 2) else PrimeTable(max(x, 2))
    selector = None if isinstance(E, AllPrimes) else E
    g = bulk.counts_range(x, table.primes, g_kind, selector, threads=threads)
    sel = sset.bitmap
    if f.is_one():
        raw = np.bincount(g[sel])
    else:
        fv = values_upto(f, x, table, threads)
        raw = np.bincount(g[sel], weights=fv[sel])
    bins = {int(k): float(m) for k, m in enumerate(raw) if m > 0}
    return WeightedHistogram(
        x=x, g_kind=g_kind, E=E, f=f, set_label=sset.label,
        bins=bins, total=float(raw.sum()), count=int(np.count_nonzero(sel)),
    )


@dataclass
class HrRatioReport:
    """Per-bin ratios mass / (factorial-decay bound)."""

    x: int
    M: float                      # prime sum over E
    C: float                      # additive constant in (M + C)**k
    beta: float
    k_max: int                    # largest k reported, floor(beta * M)
    general: dict[int, float]     # all-E bound with k! and exp(M on E-complement)
    prime_variant: dict[int, float] | None  # full-prime-set variant, (k-1)!


def hr_ratio(
    hist: WeightedHistogram,
    cond=None,
    C: float | None = None,
    beta: float = 2.0,
    table: PrimeTable | None = None,
) -> HrRatioReport:
    """Compare histogram bins against the factorial-decay bound.

    The bound for bin k is x * (M + C)**k / (k! * log x) times
    exp(M_complement - nu_sum); when E is all primes the sharper variant
    with exponent k - 1 and (k - 1)! is reported as well.
    """
    x = hist.x
    if x < 3:
        raise ValueError("need x >= 3 so log log x > 0")
    table = table if table is not None and table.limit >= x else PrimeTable(x)
    M = mertens_sum(hist.f, x, hist.E, table)
    m_out = mertens_sum(hist.f, x, hist.E.complement(), table)
    nu = nu_sum(cond, x) if cond is not None else 0.0
    if C is None:
        C = hr_constant(x, table)
    if M + C <= 0:
        raise ValueError("M + C must be positive")
    k_max = int(beta * M)
    logx = math.log(x)
    base = math.log(x) - math.log(logx) + (m_out - nu)
    general = {}
    prime_variant = {} if isinstance(hist.E, AllPrimes) else None
    for k in range(0, k_max + 1):
        mass = hist.bins.get(k, 0.0)
        lb = base + k * math.log(M + C) - math.lgamma(k + 1)
        general[k] = mass / math.exp(lb)
        if prime_variant is not None and k >= 1:
            lbp = math.log(x) - math.log(logx) - nu + (k - 1) * math.log(M + C) - math.lgamma(k)
            prime_variant[k] = mass / math.exp(lbp)
    return HrRatioReport(
        x=x, M=M, C=C, beta=beta, k_max=k_max,
        general=general, prime_variant=prime_variant,
    )


def q_rate(y: float) -> float:
    """Large-deviation rate y*log(y) - y + 1, with q_rate(0) = 1."""
    if y < 0:
        raise ValueError("rate argument must be nonnegative")
    if y == 0:
        return 1.0
    return y * math.log(y) - y + 1.0


@dataclass
class MgfReport:
    x: int
    z: float
    value: float     # exact sum of f(n) * z**g(n, E) over the set
    bound: float     # (x / log x) * exp((z-1) M_E + M_all - nu)
    ratio: float


def mgf_sum(
    sset: SiftedSet,
    f: MultiplicativeFunction,
    z: float,
    g_kind: str = "omega",
    E: PrimeSubset = ALL_PRIMES,
    table: PrimeTable | None = None,
    threads: int = 1,
) -> MgfReport:
    """Exact moment-generating sum with its reference bound."""
    x = sset.x
    if x < 3:
        raise ValueError("need x >= 3")
    if z <= 0:
        raise ValueError("z must be positive")
    table = table if table is not None and table.limit >= x else PrimeTable(x)
    if g_kind == "bigomega":
        ps = table.primes[table.primes <= x]
        p0 = E.smallest(ps)
        if p0 is not None and z >= p0:
            raise ValueError(
                f"z = {z} leaves the valid range: need z < {p0}, the smallest prime in E"
            )
    selector = None if isinstance(E, AllPrimes) else E
    g = bulk.counts_range(x, table.primes, g_kind, selector, threads=threads)
    sel = sset.bitmap
    zg = np.power(float(z), g[sel].astype(np.float64))
    if f.is_one():
        value = float(zg.sum())
    else:
        fv = values_upto(f, x, table, threads)
        value = float(np.dot(zg, fv[sel]))
    m_in = mertens_sum(f, x, E, table)
    m_all = mertens_sum(f, x, ALL_PRIMES, table)
    nu = nu_sum(sset.cond, x) if sset.cond is not None else 0.0
    bound = x / math.log(x) * math.exp((z - 1.0) * m_in + m_all - nu)
    return MgfReport(x=x, z=z, value=value, bound=bound, ratio=value / bound)


@dataclass
class TailReport:
    x: int
    delta: float
    M: float
    mass_low: float
    mass_high: float
    bound_low: float
    bound_high: float
    ratio_low: float
    ratio_high: float


def tail_masses(
    hist: WeightedHistogram,
    delta: float,
    cond=None,
    table: PrimeTable | None = None,
) -> TailReport:
    """Exact masses below (1-delta)M and above (1+delta)M with tail bounds."""
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    x = hist.x
    if x < 3:
        raise ValueError("need x >= 3")
    table = table if table is not None and table.limit >= x else PrimeTable(x)
    M = mertens_sum(hist.f, x, hist.E, table)
    if M <= 0:
        raise ValueError("prime sum M vanishes; tails are degenerate")
    m_all = mertens_sum(hist.f, x, ALL_PRIMES, table)
    nu = nu_sum(cond, x) if cond is not None else 0.0
    mass_low = hist.mass_low((1.0 - delta) * M)
    mass_high = hist.mass_high((1.0 + delta) * M)
    pref = x / math.log(x) * math.exp(m_all - nu)
    bound_low = pref * math.exp(-q_rate(1.0 - delta) * M) / (delta * math.sqrt((1.0 - delta) * M))
    bound_high = pref * math.exp(-q_rate(1.0 + delta) * M) / (delta * math.sqrt(M))
    return TailReport(
        x=x, delta=delta, M=M,
        mass_low=mass_low, mass_high=mass_high,
        bound_low=bound_low, bound_high=bound_high,
        ratio_low=mass_low / bound_low, ratio_high=mass_high / bound_high,
    )


@dataclass
class DeviationReport:
    """Mass at |g - M| >= lam * sqrt(M), normalized, with Gaussian reference."""

    x: int
    lam: float
    M: float
    mass_low: float
    mass_high: float
    total: float
    normalized: float
    gauss_ref: float
    degenerate: bool = False


def deviation(
    hist: WeightedHistogram,
    lam: float,
    M: float | None = None,
    table: PrimeTable | None = None,
) -> DeviationReport:
    """Two-sided deviation masses at threshold lam standard units."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if hist.total <= 0:
        raise ValueError("empty set: total mass is zero")
    x = hist.x
    if M is None:
        table = table if table is not None and table.limit >= max(x, 2) else PrimeTable(max(x, 2))
        M = mertens_sum(hist.f, x, hist.E, table)
    if M <= 0:
        # every bin deviates; flag rather than divide by zero in the reference
        mass = hist.total
        return DeviationReport(
            x=x, lam=lam, M=M, mass_low=mass, mass_high=0.0, total=hist.total,
            normalized=1.0, gauss_ref=math.inf, degenerate=True,
        )
    if lam > math.sqrt(M) / 2.0:
        warnings.warn(
            f"lam = {lam:g} above sqrt(M)/2 = {math.sqrt(M) / 2:g}; "
            "the Gaussian reference is unreliable here",
            stacklevel=2,
        )
    t = lam * math.sqrt(M)
    mass_low = hist.mass_low(M - t)
    mass_high = hist.mass_high(M + t)
    return DeviationReport(
        x=x, lam=lam, M=M,
        mass_low=mass_low, mass_high=mass_high, total=hist.total,
        normalized=(mass_low + mass_high) / hist.total,
        gauss_ref=math.exp(-lam * lam / 2.0) / lam,
    )


def poisson_partial(M: float, k_lo: int, k_hi) -> float:
    """Sum of exp(-M) M**k / k! for k_lo <= k <= k_hi (k_hi may be inf)."""
    if M <= 0:
        raise ValueError("mean must be positive")
    if k_lo < 0:
        k_lo = 0
    if k_hi is math.inf or k_hi == math.inf:
        if k_lo == 0:
            return 1.0
        return 1.0 - poisson_partial(M, 0, k_lo - 1)
    k_hi = int(k_hi)
    if k_hi < k_lo:
        return 0.0
    logm = math.log(M)
    total = 0.0
    for k in range(k_lo, k_hi + 1):
        total += math.exp(k * logm - math.lgamma(k + 1) - M)
    return total


__all__ = [
    "WeightedHistogram",
    "weighted_histogram",
    "HrRatioReport",
    "hr_ratio",
    "q_rate",
    "MgfReport",
    "mgf_sum",
    "TailReport",
    "tail_masses",
    "DeviationReport",
    "deviation",
    "poisson_partial",
]
