"""Verification suites: exact identities, censuses, bounds, and moment
calibrations, each returning deterministic machine-readable check records.

The scans batch per modulus with numpy dot products and tie themselves to
the compensated production functions on fixed subsamples, so a regression
in either path fails the suite.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .character import all_characters, order_k_characters, order_witness, psi_q
from .charsum import bridge_bounds, half_sum_check, max_partial_sum
from .families import (
    OrderKFamilySpec,
    count_fundamental_discriminants,
    generate_family,
    psi_tilde,
)
from .lfunction import (
    PrimeSumSpec,
    digamma_weights,
    gauss_sum,
    l1_exact,
    l1_series_oracle,
    l1_truncated_euler,
    prime_sum,
)
from .moments import (
    MomentSpec,
    QuadFamilySpec,
    b_coefficient,
    b_identity_check,
    b_product_inequality_check,
    diagonal_terms,
    empirical_moment,
)
from .ntheory import factor, sieve_primes

SUITE_NAMES = ("identities", "census", "bounds", "moments")

_SEED = 20260815


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: dict


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def _primitive_characters(q: int):
    return [chi for chi in all_characters(q) if chi.is_primitive]


# ---------------------------------------------------------------------------
# identities suite


def _check_gauss_modulus(q_max: int = 1000) -> CheckResult:
    """|tau(chi)| = sqrt(q) within 1e-9 relative for all primitive chi."""
    worst, worst_id, n = 0.0, None, 0
    spot = []
    for q in range(1, q_max + 1):
        if q > 1 and q % 4 == 2:
            continue  # no primitive characters for q = 2 mod 4
        e = np.exp((2j * math.pi / q) * np.arange(q))
        rq = math.sqrt(q)
        for chi in _primitive_characters(q):
            tau = np.dot(chi.value_table(), e)
            rel = abs(abs(tau) - rq) / rq
            n += 1
            if rel > worst:
                worst, worst_id = rel, chi.char_id
            if n % 997 == 0:
                spot.append(chi)
    spot_worst = max(
        abs(abs(gauss_sum(chi)) - math.sqrt(chi.modulus)) / math.sqrt(chi.modulus)
        for chi in spot
    )
    return CheckResult(
        "gauss_modulus",
        worst <= 1e-9 and spot_worst <= 1e-9,
        {
            "q_max": q_max,
            "n_characters": n,
            "worst_rel": worst,
            "worst_char": worst_id,
            "spot_sample": len(spot),
            "spot_worst_rel": spot_worst,
        },
    )


def _check_half_sum(q_max: int = 400) -> CheckResult:
    """Half-sum identity abs_diff < 1e-8 for odd primitive chi, odd q."""
    worst, worst_id, n = 0.0, None, 0
    for q in range(3, q_max + 1, 2):
        for chi in _primitive_characters(q):
            if chi.parity() != -1:
                continue
            rec = half_sum_check(chi)
            n += 1
            if rec.abs_diff > worst:
                worst, worst_id = rec.abs_diff, chi.char_id
    return CheckResult(
        "half_sum_identity",
        worst < 1e-8,
        {"q_max": q_max, "n_characters": n, "worst_abs_diff": worst, "worst_char": worst_id},
    )


def _check_exact_vs_series(q_max: int = 500) -> CheckResult:
    """l1_exact vs the digamma-tailed series oracle, <= 1e-8 relative."""
    worst, worst_id, n = 0.0, None, 0
    spot_worst = 0.0
    for q in range(3, q_max + 1):
        if q % 4 == 2:
            continue
        w = digamma_weights(q)
        e = np.exp((2j * math.pi / q) * np.arange(q))
        a = np.arange(1, q, dtype=np.float64)
        logsin = np.log(np.sin((math.pi / q) * a))
        for chi in _primitive_characters(q):
            if chi.is_principal:
                continue
            vals = chi.value_table()
            tau = np.dot(vals, e)
            body = np.conj(vals[1:])
            if chi.parity() == -1:
                lex = 1j * math.pi * tau / (q * q) * np.dot(body, a)
            else:
                lex = -(tau / q) * np.dot(body, logsin)
            oracle = np.dot(vals, w)
            rel = abs(lex - oracle) / abs(oracle)
            n += 1
            if rel > worst:
                worst, worst_id = rel, chi.char_id
            if n % 499 == 0:  # tie the batch to the production path
                d1 = abs(l1_exact(chi).value - lex)
                d2 = abs(l1_series_oracle(chi, q * q, tail="digamma").value - oracle)
                spot_worst = max(spot_worst, d1, d2)
    return CheckResult(
        "exact_vs_series",
        worst <= 1e-8 and spot_worst <= 1e-10,
        {
            "q_max": q_max,
            "n_characters": n,
            "worst_rel": worst,
            "worst_char": worst_id,
            "spot_worst_abs": spot_worst,
        },
    )


def _check_b_combinatorics() -> CheckResult:
    """b_r multinomial equality, exact power identities, product inequality
    sweep, and the diagonal bound (all exact arithmetic)."""
    w = PrimeSumSpec(2, 14)  # primes 3, 5, 7, 11, 13
    details: dict = {}
    ok = True
    # b_r is the multinomial on its support, bounded by r!
    for n in range(1, 2001):
        f = factor(n)
        for r in (1, 2, 3, 4):
            b = b_coefficient(r, n, w)
            if f.big_omega() == r and all(2 < p < 14 for p, _ in f.factors):
                expected = math.factorial(r)
                for _, a in f.factors:
                    expected //= math.factorial(a)
            else:
                expected = 0
            ok &= b == expected and 0 <= b <= math.factorial(r)
    details["multinomial_n_max"] = 2000
    # exact identities sum b_t(n)/n^alpha = (sum 1/p^alpha)^t
    ident = []
    for t in range(1, 6):
        for alpha in (1, 2, 3):
            rec = b_identity_check(t, alpha, w)
            ident.append(rec.equal)
    hand = b_identity_check(2, 1, PrimeSumSpec(2, 7))
    ok &= all(ident) and hand.lhs == Fraction(64, 225) and hand.equal
    details["identity_cases"] = len(ident)
    # product inequality r1 + r2 <= 6, primes {3,5,7}
    sweep = PrimeSumSpec(2, 8)
    n_cases = 0
    for r1 in range(1, 6):
        for r2 in range(1, 7 - r1):
            v = b_product_inequality_check(r1, r2, sweep, 10**9)
            ok &= v == []
            n_cases += 1
    details["product_inequality_cases"] = n_cases
    # diagonal bound (diagonal_terms itself asserts the 2^r r! bound)
    diag: dict = {}
    for r in (1, 2, 3):
        for k in (2, 3, 4):
            val = diagonal_terms(r, k, w)
            diag[f"r{r}_k{k}"] = float(val)
    ok &= diagonal_terms(1, 2, PrimeSumSpec(2, 7)) == Fraction(34, 225)
    details["diagonal_values"] = diag
    return CheckResult("b_combinatorics", bool(ok), details)


def suite_identities() -> SuiteResult:
    return SuiteResult(
        "identities",
        [
            _check_gauss_modulus(),
            _check_half_sum(),
            _check_exact_vs_series(),
            _check_b_combinatorics(),
        ],
    )


# ---------------------------------------------------------------------------
# census suite


def _check_order_counts(q_max: int = 2000) -> CheckResult:
    """Exactly phi(k) order-k characters mod a prime q = 1 mod k, checked
    against a brute-force order scan over all q-1 characters."""
    cells, ok = 0, True
    primes = [int(p) for p in sieve_primes(q_max).primes if p < q_max]
    for k in range(2, 9):
        phi_k = sum(1 for a in range(1, k + 1) if math.gcd(a, k) == 1)
        for q in primes:
            if q % k != 1:
                continue
            chars = order_k_characters(q, k)
            brute = sum(1 for t in range(q - 1) if (q - 1) // math.gcd(t, q - 1) == k)
            ok &= len(chars) == phi_k == brute
            ok &= all(chi.order == k for chi in chars)
            cells += 1
    return CheckResult(
        "order_k_census", bool(ok), {"q_max": q_max, "cells": cells}
    )


def _check_pair_witness(n_pairs: int = 100) -> CheckResult:
    """Random prime pairs: psi_tilde primitive of order exactly k and
    conductor q1 q2, witness value = zeta_k in exact arithmetic."""
    rng = np.random.default_rng(_SEED)
    ps = sieve_primes(10**4).primes
    ok, done = True, 0
    per_k = n_pairs // 4
    for k in (2, 3, 4, 6):
        pool = [int(q) for q in ps if q % k == 1]
        for _ in range(per_k):
            q1, q2 = (int(x) for x in rng.choice(len(pool), size=2, replace=False))
            q1, q2 = sorted((pool[q1], pool[q2]))
            chi = psi_tilde(q1, q2, k)
            ok &= chi.is_primitive and chi.order == k and chi.conductor == q1 * q2
            n = order_witness(q1, q2, k)
            rou = chi.eval(n)
            ok &= (not rou.is_zero) and rou.order == k and rou.exponent == 1
            done += 1
    return CheckResult("pair_witness", bool(ok), {"n_pairs": done, "k_values": [2, 3, 4, 6]})


def _check_fundamental_census() -> CheckResult:
    """|count - main term| <= 5 d(m) sqrt(Q) for the discriminant census."""
    worst, ok, cells = 0.0, True, []
    for Q in (1e4, 1e5, 1e6):
        for m in (1, 3, 15, 105):
            for delta in (1, -1):
                rec = count_fundamental_discriminants(Q, m, delta)
                worst = max(worst, rec.deviation)
                ok &= rec.deviation <= 5.0
                cells.append(
                    {"Q": Q, "m": m, "delta": delta, "count": rec.count,
                     "deviation": rec.deviation}
                )
    return CheckResult(
        "fundamental_census", bool(ok), {"worst_deviation": worst, "cells": cells}
    )


def suite_census() -> SuiteResult:
    return SuiteResult(
        "census",
        [_check_order_counts(), _check_pair_witness(), _check_fundamental_census()],
    )


# ---------------------------------------------------------------------------
# bounds suite


def _check_bridges(q_max: int = 400) -> CheckResult:
    """M(chi) >= (sqrt(q)/pi)|L(1,chi)| (odd) and
    M(chi) >= (sqrt(3q)/(2pi))|L(1, chi*(./3))| (even, 3 coprime to q),
    for every primitive even-order chi with q <= q_max."""
    n_odd = n_even = violations = 0
    min_margin = float("inf")
    for q in range(3, q_max + 1):
        if q % 4 == 2:
            continue
        for chi in _primitive_characters(q):
            if chi.is_principal or chi.order % 2 != 0:
                continue
            if chi.parity() == 1 and q % 3 == 0:
                continue
            rec = bridge_bounds(chi)
            if rec.violated:
                violations += 1
            min_margin = min(min_margin, rec.margin)
            if rec.bound_kind == "odd":
                n_odd += 1
            else:
                n_even += 1
    return CheckResult(
        "bridge_bounds",
        violations == 0,
        {
            "q_max": q_max,
            "n_odd_branch": n_odd,
            "n_even_branch": n_even,
            "violations": violations,
            "min_margin": min_margin,
        },
    )


def _check_euler_calibration(
    q_lo: int = 1000, q_hi: int = 2000, z: float = 1e4, rel_tol: float = 0.05
) -> CheckResult:
    """Fraction of primitive chi mod primes in [q_lo, q_hi] whose truncated
    Euler product misses l1_exact by more than 5% must be below 1%."""
    plist = sieve_primes(int(z)).primes.astype(np.int64)
    plist = plist[plist <= z]
    pf = plist.astype(np.float64)
    n_chars = n_bad = 0
    worst = 0.0
    spot_worst = 0.0
    moduli = [int(q) for q in sieve_primes(q_hi).primes if q_lo <= q <= q_hi]
    for q in moduli:
        e = np.exp((2j * math.pi / q) * np.arange(q))
        a = np.arange(1, q, dtype=np.float64)
        logsin = np.log(np.sin((math.pi / q) * a))
        idx = np.mod(plist, q)
        for chi in all_characters(q):
            if chi.is_principal:
                continue
            vals = chi.value_table()
            tau = np.dot(vals, e)
            body = np.conj(vals[1:])
            if chi.parity() == -1:
                lex = 1j * math.pi * tau / (q * q) * np.dot(body, a)
            else:
                lex = -(tau / q) * np.dot(body, logsin)
            # chi(q) = 0 makes the p = q factor equal 1 automatically
            euler = np.prod(1.0 / (1.0 - vals[idx] / pf))
            rel = abs(euler - lex) / abs(lex)
            n_chars += 1
            worst = max(worst, rel)
            if rel > rel_tol:
                n_bad += 1
            if n_chars % 9973 == 0:
                d1 = abs(l1_truncated_euler(chi, z).value - euler)
                d2 = abs(l1_exact(chi).value - lex)
                spot_worst = max(spot_worst, d1, d2)
    frac = n_bad / n_chars
    return CheckResult(
        "euler_calibration",
        frac < 0.01 and spot_worst <= 1e-10,
        {
            "q_range": [q_lo, q_hi],
            "z": z,
            "n_characters": n_chars,
            "n_over_5pct": n_bad,
            "fraction": frac,
            "worst_rel": worst,
            "spot_worst_abs": spot_worst,
        },
    )


def _check_polya_vinogradov(q_max: int = 1000) -> CheckResult:
    """Empirical sanity M(chi) <= sqrt(q) log q for all non-principal chi."""
    worst_ratio, n = 0.0, 0
    for q in range(3, q_max + 1):
        bound = math.sqrt(q) * math.log(q)
        for chi in all_characters(q):
            if chi.is_principal:
                continue
            rec = max_partial_sum(chi)
            worst_ratio = max(worst_ratio, rec.M / bound)
            n += 1
    return CheckResult(
        "polya_vinogradov_sanity",
        worst_ratio <= 1.0,
        {"q_max": q_max, "n_characters": n, "worst_ratio": worst_ratio},
    )


def suite_bounds() -> SuiteResult:
    return SuiteResult(
        "bounds",
        [_check_bridges(), _check_euler_calibration(), _check_polya_vinogradov()],
    )


# ---------------------------------------------------------------------------
# moments suite


def _quad_moment_oracle_r1(fam: QuadFamilySpec, window: PrimeSumSpec) -> float:
    """sum_d |sum_p chi_d(p)/p|^2 by the swapped double loop over prime
    pairs, with exact inner character sums."""
    from .families import _kronecker_column

    ds = fam.d_values()
    ps = [int(p) for p in window.primes()]
    cols = {p: _kronecker_column(ds, p).astype(np.float64) for p in ps}
    total = 0.0
    for p1 in ps:
        for p2 in ps:
            total += float(np.dot(cols[p1], cols[p2])) / (p1 * p2)
    return total / len(ds)


def _check_quad_moments() -> CheckResult:
    fam = QuadFamilySpec(1e5)
    window = PrimeSumSpec(10, 1000)
    implied = {}
    ok = True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for r in (1, 2, 3):
            rec = empirical_moment(MomentSpec(fam, r, window))
            implied[f"r{r}"] = rec.implied_constant
            ok &= rec.implied_constant <= 10.0
        oracle = _quad_moment_oracle_r1(fam, window)
        rec1 = empirical_moment(MomentSpec(fam, 1, window))
    rel = abs(rec1.lhs_avg - oracle) / abs(oracle)
    ok &= rel <= 1e-12
    return CheckResult(
        "quadratic_moments",
        bool(ok),
        {
            "Q": 1e5,
            "window": [10, 1000],
            "family_size": rec1.family_size,
            "implied_constants": implied,
            "oracle_rel_diff_r1": rel,
        },
    )


def _check_orderk_moments() -> CheckResult:
    spec = OrderKFamilySpec(1e4, 2)
    window = PrimeSumSpec(10, 1000)
    implied = {}
    ok = True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for r in (1, 2):
            rec = empirical_moment(MomentSpec(spec, r, window))
            implied[f"r{r}"] = rec.implied_constant
            ok &= rec.implied_constant <= 10.0
        rec1 = empirical_moment(MomentSpec(spec, 1, window))
    # independent member-by-member oracle via prime_sum
    total = 0.0
    n = 0
    for _, chi in generate_family(spec):
        total += abs(prime_sum(chi, window)) ** 2
        n += 1
    rel = abs(rec1.lhs_avg - total / n) / (total / n)
    ok &= rel <= 1e-12
    return CheckResult(
        "orderk_moments",
        bool(ok),
        {
            "Q": 1e4,
            "k": 2,
            "window": [10, 1000],
            "family_size": n,
            "implied_constants": implied,
            "oracle_rel_diff_r1": rel,
        },
    )


def suite_moments() -> SuiteResult:
    return SuiteResult("moments", [_check_quad_moments(), _check_orderk_moments()])


# ---------------------------------------------------------------------------


_SUITE_RUNNERS = {
    "identities": suite_identities,
    "census": suite_census,
    "bounds": suite_bounds,
    "moments": suite_moments,
}


def run_suites(name: str) -> list:
    """Run one named suite, or all of them."""
    if name == "all":
        return [_SUITE_RUNNERS[s]() for s in SUITE_NAMES]
    if name not in _SUITE_RUNNERS:
        raise ValueError(
            f"unknown suite {name!r}; choose from {SUITE_NAMES + ('all',)}"
        )
    return [_SUITE_RUNNERS[name]()]
