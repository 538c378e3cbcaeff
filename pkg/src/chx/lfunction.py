"""Evaluation of L(1, chi) and windowed prime sums.

Three routes to L(1, chi) are provided: closed finite formulas (the
production path, O(q) per character), a tail-bounded partial sum of the
defining series (the oracle everything else is checked against), and the
truncated Euler product used by the extremal-search heuristics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy.special import digamma

from .character import DirichletCharacter
from .errors import ConstraintError
from .ntheory import sieve_primes

_EPS = float(np.finfo(np.float64).eps)

# method tags used in serialized reports
EXACT_FINITE = "exact_finite"
DIRICHLET_SERIES = "dirichlet_series"
EULER_TRUNCATED = "euler_truncated"


@dataclass(frozen=True)
class LValue:
    """A computed value of L(1, chi) with provenance.

    error_bound is a rigorous tail bound for the dirichlet_series method;
    for euler_truncated it is an empirically calibrated band and for
    exact_finite a roundoff allowance -- both flagged via `rigorous`.
    """

    value: complex
    method: str
    param: Optional[float]  # N for the series, z for the Euler product
    error_bound: float
    rigorous: bool

    @property
    def abs(self) -> float:
        return abs(self.value)

    def as_dict(self) -> dict:
        return {
            "re": self.value.real,
            "im": self.value.imag,
            "abs": abs(self.value),
            "method": self.method,
            "param": self.param,
            "err": self.error_bound,
        }


@dataclass(frozen=True)
class PrimeSumSpec:
    """A prime window y < p < z, strict at both ends."""

    y: float
    z: float

    def __post_init__(self):
        if not self.y >= 2:
            raise ValueError(f"prime window needs y >= 2, got y={self.y}")
        if not self.z > self.y:
            raise ValueError(f"prime window needs z > y, got ({self.y}, {self.z})")

    def primes(self) -> np.ndarray:
        limit = max(3, int(math.ceil(self.z)))
        ps = sieve_primes(limit).primes
        return ps[(ps > self.y) & (ps < self.z)]


def _fsum_complex(terms: np.ndarray) -> complex:
    """Compensated sum of a complex array (exact up to one final rounding)."""
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_a chi(a) e(a/q), compensated; requires chi primitive."""
    if not chi.is_primitive:
        raise ConstraintError(
            f"gauss sum requires a primitive character; {chi.char_id} has "
            f"conductor {chi.conductor} < modulus {chi.modulus}"
        )
    q = chi.modulus
    if q == 1:
        return 1.0 + 0.0j
    vals = chi.value_table()
    a = np.arange(q, dtype=np.float64)
    return _fsum_complex(vals * np.exp((2j * math.pi / q) * a))


def _require_primitive_nonprincipal(chi: DirichletCharacter) -> None:
    if chi.is_principal:
        raise ConstraintError("L(1, chi) diverges for principal characters")
    if not chi.is_primitive:
        raise ConstraintError(
            f"imprimitive character {chi.char_id}: evaluate the primitive "
            f"character mod {chi.conductor} instead"
        )


def l1_exact(chi: DirichletCharacter) -> LValue:
    """L(1, chi) by the closed finite formulas (odd/even split).

    odd chi:  L(1,chi) = (i*pi*tau(chi)/q^2) * sum_a conj(chi(a)) * a
    even chi: L(1,chi) = -(tau(chi)/q) * sum_a conj(chi(a)) * log sin(pi a/q)
    """
    _require_primitive_nonprincipal(chi)
    q = chi.modulus
    tau = gauss_sum(chi)
    vals = np.conj(chi.value_table()[1:])
    a = np.arange(1, q, dtype=np.float64)
    if chi.parity() == -1:
        s = _fsum_complex(vals * a)
        value = 1j * math.pi * tau / (q * q) * s
    else:
        x = (math.pi / q) * a
        # a runs over 1..q-1 so the argument stays inside (0, pi)
        assert 0.0 < x[0] and x[-1] < math.pi
        s = _fsum_complex(vals * np.log(np.sin(x)))
        value = -(tau / q) * s
    err = 32.0 * _EPS * (1.0 + math.sqrt(q))  # roundoff allowance
    return LValue(value, EXACT_FINITE, None, err, rigorous=False)


def digamma_weights(q: int) -> np.ndarray:
    """Weights w[a] = -digamma(a/q)/q, so that sum_a chi(a) w[a] = L(1,chi)
    for any non-principal chi mod q.

    This is what the partial sum to K*q plus its exact tail
    -(1/q) sum_a chi(a) digamma(K + a/q) telescopes to (the K-dependence
    cancels via digamma(K + x) - digamma(x) = sum_{m<K} 1/(m+x)).
    """
    w = np.zeros(q)
    a = np.arange(1, q, dtype=np.float64)
    w[1:] = -digamma(a / q) / q
    return w


def l1_series_oracle(chi: DirichletCharacter, N: int, tail: str = "bound") -> LValue:
    """Partial sum sum_{n<=N} chi(n)/n, with one of two tail treatments.

    tail="bound":   plain partial sum; rigorous error bound 2*M(chi)/N by
                    partial summation, M(chi) taken from the charsum module.
    tail="digamma": the exact tail -(1/q) sum_a chi(a) digamma(K + a/q)
                    (K = N//q) is added to the partial sum over n <= K*q;
                    the two telescope to sum_a chi(a) * (-digamma(a/q)/q),
                    so the result is exact up to roundoff for every N.
    """
    if chi.is_principal:
        raise ConstraintError("series oracle needs a non-principal character")
    q = chi.modulus
    N = int(N)
    if N < q * q:
        raise ConstraintError(f"oracle cutoff N={N} below q^2={q * q}")
    vals = chi.value_table()
    if tail == "digamma":
        value = _fsum_complex(vals * digamma_weights(q))
        err = 64.0 * _EPS * (2.0 + math.log(q))
        return LValue(value, DIRICHLET_SERIES, float(N), err, rigorous=False)
    if tail != "bound":
        raise ValueError(f"unknown tail mode {tail!r}")
    block = 1 << 22
    re_parts, im_parts = [], []
    for lo in range(1, N + 1, block):
        n = np.arange(lo, min(lo + block, N + 1))
        terms = vals[np.mod(n, q)] / n
        re_parts.append(terms.real)
        im_parts.append(terms.imag)
    value = complex(
        math.fsum(math.fsum(p) for p in re_parts),
        math.fsum(math.fsum(p) for p in im_parts),
    )
    from .charsum import max_partial_sum  # deferred: charsum imports us

    M = max_partial_sum(chi).M
    return LValue(value, DIRICHLET_SERIES, float(N), 2.0 * M / N, rigorous=True)


def l1_truncated_euler(chi: DirichletCharacter, z: float) -> LValue:
    """prod_{p<=z, p not dividing q} (1 - chi(p)/p)^{-1} by direct product.

    The error band is an empirical ~3 sigma estimate of the omitted factor,
    sized like the standard deviation of sum_{p>z} chi(p)/p; non-rigorous.
    """
    q = chi.modulus
    value = 1.0 + 0.0j
    if z >= 2:
        ps = sieve_primes(max(3, int(math.floor(z)))).primes
        ps = ps[ps <= z]
        for p in ps:
            if q % int(p) == 0:
                continue
            value /= 1.0 - chi.eval(int(p)).to_complex() / int(p)
    if z >= 3:
        band = 3.0 * abs(value) / math.sqrt(z * math.log(z))
    else:
        band = float("inf")
    return LValue(value, EULER_TRUNCATED, float(z), band, rigorous=False)


def prime_sum(
    chi: DirichletCharacter,
    spec: PrimeSumSpec,
    weights: Optional[Mapping[int, complex]] = None,
) -> complex:
    """sum over primes y < p < z of a(p) * chi(p) / p, |a(p)| <= 1.

    Primes missing from `weights` get a(p) = 1.
    """
    terms_re, terms_im = [], []
    for p in spec.primes():
        p = int(p)
        a_p = 1.0 + 0.0j
        if weights is not None and p in weights:
            a_p = complex(weights[p])
            if abs(a_p) > 1.0 + 1e-12:
                raise ValueError(f"weight at p={p} has |a(p)| = {abs(a_p)} > 1")
        t = a_p * chi.eval(p).to_complex() / p
        terms_re.append(t.real)
        terms_im.append(t.imag)
    return complex(math.fsum(terms_re), math.fsum(terms_im))


# ---------------------------------------------------------------------------
# batched evaluation (numpy dot products instead of fsum; ~1e-12 relative
# accuracy, used by family pipelines and the verification scans)


def _exact_weights(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-modulus weight vectors for the two finite formulas."""
    a = np.arange(1, q, dtype=np.float64)
    logsin = np.log(np.sin((math.pi / q) * a))
    return a, logsin


def l1_exact_batch(chars: Sequence[DirichletCharacter]) -> np.ndarray:
    """Vectorized l1_exact over many characters, grouped by modulus."""
    out = np.empty(len(chars), dtype=np.complex128)
    by_q: dict[int, list[int]] = {}
    for i, chi in enumerate(chars):
        _require_primitive_nonprincipal(chi)
        by_q.setdefault(chi.modulus, []).append(i)
    for q, idx in by_q.items():
        a, logsin = _exact_weights(q)
        e = np.exp((2j * math.pi / q) * np.arange(q))
        for i in idx:
            chi = chars[i]
            vals = chi.value_table()
            tau = np.dot(vals, e)
            body = np.conj(vals[1:])
            if chi.parity() == -1:
                out[i] = 1j * math.pi * tau / (q * q) * np.dot(body, a)
            else:
                out[i] = -(tau / q) * np.dot(body, logsin)
    return out
