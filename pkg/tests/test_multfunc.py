"""Multiplicative weights, prime sums, and growth-class checks."""

import math

import numpy as np
import pytest

from siftlab import arith, bulk, multfunc
from siftlab.primesets import ALL_PRIMES, Complement, ResidueClasses

from oracles import ofactor


def _eval_at(f, n, table):
    return multfunc.eval_mf(f, arith.factorize(n, table))


def test_builtin_values_pointwise(t1e5):
    cases = {
        multfunc.one(): lambda n: 1.0,
        multfunc.mu_sq(): lambda n: 1.0 if all(e == 1 for _, e in ofactor(n)) else 0.0,
        multfunc.z_omega(2): lambda n: 2.0 ** len(ofactor(n)),
        multfunc.tau_k(2): lambda n: float(math.prod(e + 1 for _, e in ofactor(n))),
        multfunc.phi_over_n(): lambda n: math.prod(1 - 1 / p for p, _ in ofactor(n)),
        multfunc.n_over_phi(): lambda n: math.prod(p / (p - 1) for p, _ in ofactor(n)),
    }
    for f, expect in cases.items():
        for n in range(1, 200):
            assert _eval_at(f, n, t1e5) == pytest.approx(expect(n), rel=1e-12)


def test_sum_of_two_squares_weights(t1e5):
    r4 = multfunc.r_over_4()
    ind = multfunc.sum2sq_indicator()
    from oracles import or_lattice

    for n in range(1, 400):
        assert _eval_at(r4, n, t1e5) == pytest.approx(or_lattice(n) / 4.0)
        assert _eval_at(ind, n, t1e5) == (1.0 if or_lattice(n) > 0 else 0.0)


def test_bigomega_weight_and_range_warning(t1e5):
    with pytest.warns(UserWarning):
        f = multfunc.z_bigomega(2)
    assert _eval_at(f, 12, t1e5) == 8.0
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        multfunc.z_bigomega(1.5)


def test_weight_constructor_errors():
    with pytest.raises(ValueError):
        multfunc.z_omega(-1)
    with pytest.raises(ValueError):
        multfunc.z_bigomega(-0.5)
    with pytest.raises(ValueError):
        multfunc.tau_k(0)


def test_eval_rejects_negative_rule(t1e5):
    bad = multfunc.MultiplicativeFunction(
        "bad", lambda p, e: -1.0, 1.0, "bad"
    )
    with pytest.raises(ValueError):
        multfunc.eval_mf(bad, arith.factorize(2, t1e5))


def test_builtin_lookup():
    assert multfunc.builtin("one").name == "one"
    assert multfunc.builtin("musq").name == "mu_sq"
    assert multfunc.builtin("zomega", 3).params == (3,)
    assert multfunc.builtin("tauk", 4).A1 == 4.0
    assert multfunc.builtin("Noverphi").name == "n_over_phi"
    with pytest.raises(ValueError):
        multfunc.builtin("nope")


def test_values_upto_matches_pointwise(t1e5):
    for f in (multfunc.one(), multfunc.z_omega(2), multfunc.tau_k(3), multfunc.mu_sq()):
        v = multfunc.values_upto(f, 2000, t1e5)
        assert v[0] == 0.0
        for n in range(1, 2001):
            assert v[n] == pytest.approx(_eval_at(f, n, t1e5), rel=1e-12)


def test_mertens_sum_small(t1e5):
    got = multfunc.mertens_sum(multfunc.one(), 10, table=t1e5)
    assert got == pytest.approx(247 / 210, rel=1e-15)
    assert multfunc.mertens_sum(multfunc.one(), 1, table=t1e5) == 0.0
    E = ResidueClasses(4, (1,))
    got_E = multfunc.mertens_sum(multfunc.one(), 20, E, table=t1e5)
    assert got_E == pytest.approx(371 / 1105, rel=1e-14)


def test_mertens_sum_splits_over_complement(t1e5):
    f = multfunc.z_omega(2)
    E = ResidueClasses(3, (1,))
    whole = multfunc.mertens_sum(f, 10**4, ALL_PRIMES, t1e5)
    part = multfunc.mertens_sum(f, 10**4, E, t1e5)
    rest = multfunc.mertens_sum(f, 10**4, E.complement(), t1e5)
    assert part + rest == pytest.approx(whole, rel=1e-14)
    assert 0.0 < part < whole


def test_mertens_empty_selection(t1e5):
    E = Complement(ALL_PRIMES)
    assert multfunc.mertens_sum(multfunc.one(), 100, E, t1e5) == 0.0


def test_sup_distance_constant(t1e5):
    # the sup sits at t = 2 and never moves, so the closed form is exact
    closed = 0.5 - math.log(math.log(2.0))
    assert multfunc.hr_constant(2) == pytest.approx(closed, rel=1e-15)
    assert multfunc.hr_constant(1000) == pytest.approx(closed, rel=1e-15)
    assert multfunc.hr_constant(10**4, t1e5) == pytest.approx(closed, rel=1e-15)
    with pytest.raises(ValueError):
        multfunc.hr_constant(1)


def test_sup_distance_nondecreasing(t1e5):
    vals = [multfunc.hr_constant(x, t1e5) for x in (2, 10, 100, 10**4)]
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


def test_harmonic_mean_ratio_closed_form_at_two(t1e5):
    # only n = 1, 2 contribute, so the ratio is (1 + f(2)/2) / exp(f(2)/2)
    for f in (multfunc.one(), multfunc.z_omega(3), multfunc.tau_k(2)):
        half = _eval_at(f, 2, t1e5) / 2.0
        expect = (1.0 + half) / math.exp(half)
        assert multfunc.harmonic_mean_ratio(f, 2, table=t1e5) == pytest.approx(expect, rel=1e-14)


def test_harmonic_mean_ratio_frozen(t1e5):
    got = multfunc.harmonic_mean_ratio(multfunc.tau_k(2), 10**4, table=t1e5)
    assert got == pytest.approx(0.37310257861887025, rel=1e-12)
    with pytest.raises(ValueError):
        multfunc.harmonic_mean_ratio(multfunc.one(), 0)


def test_class_check_passes_for_honest_declarations(t1e5):
    for f in (multfunc.one(), multfunc.mu_sq(), multfunc.tau_k(2), multfunc.n_over_phi()):
        rep = multfunc.class_check(f, 2000, table=t1e5)
        assert rep.passed
        assert rep.worst_ratio <= 1.0 + 1e-12
        assert rep.witness >= 1
        assert set(rep.eps_growth) == {0.1, 0.01}


def test_class_check_exposes_understated_cap(t1e5):
    rep = multfunc.class_check(multfunc.z_omega(3), 100, 2, table=t1e5)
    assert not rep.passed
    assert rep.A1 == 2
    assert rep.worst_ratio == pytest.approx(3.375)
    assert rep.witness == 30
    # the declared value would have passed
    ok = multfunc.class_check(multfunc.z_omega(3), 100, table=t1e5)
    assert ok.passed and ok.worst_ratio == pytest.approx(1.0)


def test_class_check_rejects_tiny_x(t1e5):
    with pytest.raises(ValueError):
        multfunc.class_check(multfunc.one(), 1, table=t1e5)


def test_coprimality_factor(t1e5):
    assert multfunc.coprimality_factor(multfunc.mu_sq(), 2, table=t1e5) == pytest.approx(2 / 3)
    assert multfunc.coprimality_factor(multfunc.one(), 1, table=t1e5) == 1.0
    # geometric series at p: one() gives product of (1 - 1/p)
    got = multfunc.coprimality_factor(multfunc.one(), 6, table=t1e5)
    assert got == pytest.approx((1 - 1 / 2) * (1 - 1 / 3), rel=1e-12)
    with pytest.raises(ValueError):
        multfunc.coprimality_factor(multfunc.n_over_phi(), 2, table=t1e5)


def test_coprimality_factor_accepts_factorization(t1e5):
    fac = arith.factorize(10, t1e5)
    a = multfunc.coprimality_factor(multfunc.mu_sq(), fac)
    b = multfunc.coprimality_factor(multfunc.mu_sq(), 10, table=t1e5)
    assert a == b


def test_at_primes_vector_agrees_with_rule(t1e5):
    ps = t1e5.primes[:100]
    for f in (multfunc.z_omega(2.5), multfunc.r_over_4(), multfunc.phi_over_n()):
        vec = f.at_primes(ps)
        scalar = [f.rule(int(p), 1) for p in ps]
        assert np.allclose(vec, scalar, rtol=1e-15)


def test_isqrt_ceil():
    assert multfunc.isqrt_ceil(16) == 4
    assert multfunc.isqrt_ceil(17) == 5
    assert multfunc.isqrt_ceil(1) == 1
    assert multfunc.isqrt_ceil(2) == 2
