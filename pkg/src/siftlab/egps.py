"""Prime-factor statistics of aliquot sums s(n) = sigma(n) - n.

The workhorse is a divisor-sum sieve: sigma over a range, then a distinct
prime-factor table reaching max s(n), so omega(s(n)) is a single gather.
Everything is exact; nothing is sampled or estimated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bulk
from .arith import PrimeTable
from .multfunc import MultiplicativeFunction, mertens_sum, values_upto
from .primesets import ALL_PRIMES


@dataclass
class AliquotWindow:
    """Aliquot sums for [lo, hi): s_values[i] = s(lo + i)."""

    lo: int
    hi: int
    s_values: np.ndarray


def aliquot_window(lo: int, hi: int, threads: int = 1) -> AliquotWindow:
    if lo < 1 or lo >= hi:
        raise ValueError("need 1 <= lo < hi")
    ranges = bulk.window_ranges(lo, hi)
    parts = bulk.run_windows(lambda a, b: bulk.sigma_window(a, b), ranges, threads)
    sig = parts[0] if len(parts) == 1 else np.concatenate(parts)
    ns = np.arange(lo, hi, dtype=np.int64)
    s = sig - ns
    # crude growth cap: sigma(n) <= n * (1 + log n)
    top = float(np.max(s / np.maximum(ns, 2)))
    if top > 1.0 + math.log(hi):
        raise AssertionError("aliquot sums exceed the crude growth cap")
    return AliquotWindow(lo=lo, hi=hi, s_values=s)


def _omega_of_values(values: np.ndarray, threads: int = 1) -> np.ndarray:
    """omega at each (nonnegative) entry via one table reaching the maximum."""
    vmax = int(values.max(initial=0))
    if vmax < 1:
        return np.zeros(len(values), dtype=np.uint8)
    primes = bulk.primes_upto(max(math.isqrt(vmax), 2))
    om = bulk.counts_range(vmax, primes, "omega", threads=threads)
    return om[values]


@dataclass
class EgpsReport:
    """Mass of n <= x whose omega(s(n)) strays from log log x."""

    x: int
    lam: float
    loglog: float
    mass: float
    total: float
    normalized: float
    excluded: int               # n = 1, where s(n) = 0
    unfactored: int             # always 0: the sigma table path is exact
    grid: list[tuple[float, float]] = field(default_factory=list)


def egps_deviation(
    x: int,
    f: MultiplicativeFunction,
    lam: float | None = None,
    c0: float | None = None,
    grid: tuple[float, ...] = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0),
    table: PrimeTable | None = None,
    threads: int = 1,
) -> EgpsReport:
    """Weighted mass of {n <= x : |omega(s(n)) - log log x| >= lam * sqrt(log log x)}.

    Pass lam directly, or c0 to use lam = c0 * sqrt(log log log log x) (which
    needs x large enough for the fourth log to be positive).
    """
    if x < 16:
        raise ValueError("need x >= 16 so log log x > 1")
    if (lam is None) == (c0 is None):
        raise ValueError("give exactly one of lam and c0")
    llx = math.log(math.log(x))
    if c0 is not None:
        l4 = math.log(math.log(llx)) if llx > 1 else float("-inf")
        if not l4 > 0:
            raise ValueError(
                "fourth logarithm not positive at this x; pass lam directly"
            )
        lam = c0 * math.sqrt(l4)
    if lam <= 0:
        raise ValueError("lam must be positive")

    table = table if table is not None and table.limit >= x else PrimeTable(x)
    sig = bulk.sigma_range(x, threads=threads)
    ns = np.arange(x + 1, dtype=np.int64)
    s = sig - ns
    del sig
    s[:2] = 0
    oms = _omega_of_values(s, threads)
    dev = np.abs(oms.astype(np.float64) - llx)
    del oms

    if f.is_one():
        fv = None
        total = float(x)  # n = 1 stays in the normalization
    else:
        fv = values_upto(f, x, table, threads)
        total = float(fv[1:].sum())

    def mass_at(lam_: float) -> float:
        thr = lam_ * math.sqrt(llx)
        mask = dev >= thr
        mask[:2] = False  # n = 1 excluded; index 0 is padding
        if fv is None:
            return float(np.count_nonzero(mask))
        return float(fv[mask].sum())

    mass = mass_at(lam)
    return EgpsReport(
        x=x, lam=lam, loglog=llx,
        mass=mass, total=total, normalized=mass / total,
        excluded=1, unfactored=0,
        grid=[(g, mass_at(g) / total) for g in grid],
    )


@dataclass
class CountReport:
    value: float
    bound: float | None
    ratio: float | None


def count_p_divides_sigma(
    x: int, p: int,
    f: MultiplicativeFunction,
    eps: float = 0.5,
    table: PrimeTable | None = None,
    threads: int = 1,
) -> CountReport:
    """Weighted count of n <= x with p | sigma(n), with its reference bound."""
    if x < 3:
        raise ValueError("need x >= 3")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    table = table if table is not None and table.limit >= x else PrimeTable(x)
    if p not in table:
        raise ValueError(f"{p} is not prime")
    sig = bulk.sigma_range(x, threads=threads)
    mask = sig % p == 0
    mask[0] = False
    if f.is_one():
        value = float(np.count_nonzero(mask))
    else:
        fv = values_upto(f, x, table, threads)
        value = float(fv[mask].sum())
    m_all = mertens_sum(f, x, ALL_PRIMES, table)
    bound = (
        (p ** (-(1.0 - eps) / 2.0) + math.log(math.log(x)) / p)
        * x / math.log(x) * math.exp(m_all)
    )
    return CountReport(value=value, bound=bound, ratio=value / bound)


def count_d_divides_s(
    x: int, y: int, z: int, d: int,
    f: MultiplicativeFunction,
    table: PrimeTable | None = None,
    threads: int = 1,
) -> float:
    """Weighted count of n <= x with d | s(n), largest prime factor above y,
    and that factor unsquared; requires d <= z <= y."""
    if x < 3:
        raise ValueError("need x >= 3")
    if not 1 <= d <= z <= y <= x:
        raise ValueError("need 1 <= d <= z <= y <= x")
    table = table if table is not None and table.limit >= x else PrimeTable(x)
    sig = bulk.sigma_range(x, threads=threads)
    ns = np.arange(x + 1, dtype=np.int64)
    s = sig - ns
    lpf = bulk.lpf_range(x, table.primes, threads=threads)
    mask = (lpf > y) & (ns % np.maximum(lpf * lpf, 1) != 0) & (s % d == 0)
    mask[0] = False
    if f.is_one():
        return float(np.count_nonzero(mask))
    fv = values_upto(f, x, table, threads)
    return float(fv[mask].sum())


def mean_omega_gcd_sigma(
    x: int,
    f: MultiplicativeFunction,
    table: PrimeTable | None = None,
    threads: int = 1,
) -> CountReport:
    """Weighted sum of omega(gcd(sigma(n), n)) with its slow-growth bound."""
    if x < 3:
        raise ValueError("need x >= 3")
    table = table if table is not None and table.limit >= x else PrimeTable(x)
    sig = bulk.sigma_range(x, threads=threads)
    ns = np.arange(x + 1, dtype=np.int64)
    g = np.gcd(sig, ns)
    om = bulk.counts_range(x, table.primes, "omega", threads=threads)
    omg = om[g].astype(np.float64)
    omg[0] = 0.0
    if f.is_one():
        value = float(omg[1:].sum())
    else:
        fv = values_upto(f, x, table, threads)
        value = float(np.dot(omg[1:], fv[1:]))
    m_all = mertens_sum(f, x, ALL_PRIMES, table)
    lll = math.log(math.log(math.log(x))) if math.log(math.log(x)) > 1 else None
    l4 = math.log(lll) if lll is not None and lll > 1 else None
    bound = x / math.log(x) * math.exp(m_all) * l4 if l4 is not None and l4 > 0 else None
    return CountReport(
        value=value, bound=bound, ratio=value / bound if bound else None
    )


__all__ = [
    "AliquotWindow",
    "aliquot_window",
    "EgpsReport",
    "egps_deviation",
    "CountReport",
    "count_p_divides_sigma",
    "count_d_divides_s",
    "mean_omega_gcd_sigma",
]
