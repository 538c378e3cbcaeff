"""Character families over prime windows and quadratic-twist families.

The order-k family pairs primes q1 < q2 from (sqrt(Q), 2 sqrt(Q)) with
q_i = 1 mod k and forms psi_tilde = psi_{q1} * conj(psi_{q2}); the
pigeonhole filter keeps the largest class of primes whose canonical
characters share all values on small primes, so every surviving pair has
psi_tilde(p) = 1 there.  The quadratic-twist family multiplies one such
base character by Kronecker characters chi_d with controlled signature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from .character import (
    DirichletCharacter,
    kronecker_character,
    principal_character,
    product_character,
    psi_q,
)
from .errors import ConstraintError
from .ntheory import sieve_primes, squarefree_mask, factor

Signature = tuple  # per-prime value exponents in Z/k, one entry per p <= y


@dataclass(frozen=True)
class OrderKFamilySpec:
    """Family of psi_tilde_m, m = q1 q2, over the prime window
    (sqrt(Q), 2 sqrt(Q)) with q_i = 1 mod k; y is the signature cutoff."""

    Q: float
    k: int
    y: Optional[float] = None

    def __post_init__(self):
        if not self.Q >= 16:
            raise ValueError(f"family scale must satisfy Q >= 16, got {self.Q}")
        if not (isinstance(self.k, int) and self.k >= 2):
            raise ValueError(f"character order must be an integer >= 2, got {self.k}")
        if self.y is None:
            object.__setattr__(self, "y", math.log(self.Q))

    @property
    def window(self) -> tuple[float, float]:
        r = math.sqrt(self.Q)
        return (r, 2.0 * r)

    def window_primes(self) -> np.ndarray:
        lo, hi = self.window
        ps = sieve_primes(max(3, int(math.ceil(hi)))).primes
        ps = ps[(ps > lo) & (ps < hi)]
        return ps[ps % self.k == 1]


def psi_tilde(q1: int, q2: int, k: int) -> DirichletCharacter:
    """psi_{q1} * conj(psi_{q2}): primitive of order k and conductor q1*q2."""
    if q1 == q2:
        raise ValueError("pair primes must be distinct")
    chi = product_character(psi_q(q1, k), psi_q(q2, k).conjugate())
    assert chi.order == k and chi.conductor == q1 * q2 and chi.is_primitive
    return chi


def generate_family(spec: OrderKFamilySpec) -> Iterator[tuple[int, DirichletCharacter]]:
    """All (m, psi_tilde_m), streamed in ascending (q1, q2) order."""
    ps = [int(p) for p in spec.window_primes()]
    for q1, q2 in combinations(ps, 2):
        yield q1 * q2, psi_tilde(q1, q2, spec.k)


def family_size(spec: OrderKFamilySpec) -> int:
    n = len(spec.window_primes())
    return n * (n - 1) // 2


def signature_of(
    psi: DirichletCharacter, k: int, sig_primes: Sequence[int]
) -> Signature:
    """Exponent vector of psi on the signature primes, entries in Z/k."""
    sig = []
    for p in sig_primes:
        rou = psi.eval(int(p))
        assert not rou.is_zero and k % rou.order == 0
        sig.append(rou.exponent * (k // rou.order) % k)
    return tuple(sig)


@dataclass(frozen=True)
class PigeonholeResult:
    spec: OrderKFamilySpec
    y_used: float
    sig_primes: tuple
    best_signature: Signature
    bucket: tuple  # primes sharing the best signature, ascending
    pairs: list  # [(m, psi_tilde_m)] ordered by (q1, q2)
    n_window_primes: int
    n_buckets: int
    guarantee: int  # pigeonhole floor ceil(n / k^{pi(y)}) on the bucket size
    substituted: bool = False  # True when y was lowered to get a pair


def _bucket_primes(
    spec: OrderKFamilySpec, sig_primes: Sequence[int]
) -> tuple[dict, list]:
    ps = [int(p) for p in spec.window_primes()]
    buckets: dict = {}
    for q in ps:
        sig = signature_of(psi_q(q, spec.k), spec.k, sig_primes)
        buckets.setdefault(sig, []).append(q)
    return buckets, ps


def _result_from_buckets(
    spec: OrderKFamilySpec,
    sig_primes: Sequence[int],
    y_used: float,
    substituted: bool,
) -> PigeonholeResult:
    buckets, ps = _bucket_primes(spec, sig_primes)
    if buckets:
        maxlen = max(len(v) for v in buckets.values())
        best = min(s for s, v in buckets.items() if len(v) == maxlen)
        bucket = tuple(buckets[best])
    else:
        best, bucket = (), ()
    guarantee = (
        -(-len(ps) // spec.k ** len(sig_primes)) if ps else 0
    )  # ceil division
    assert len(bucket) >= guarantee
    pairs = [
        (q1 * q2, psi_tilde(q1, q2, spec.k)) for q1, q2 in combinations(bucket, 2)
    ]
    return PigeonholeResult(
        spec=spec,
        y_used=y_used,
        sig_primes=tuple(int(p) for p in sig_primes),
        best_signature=best,
        bucket=bucket,
        pairs=pairs,
        n_window_primes=len(ps),
        n_buckets=len(buckets),
        guarantee=guarantee,
        substituted=substituted,
    )


def pigeonhole_search(spec: OrderKFamilySpec) -> PigeonholeResult:
    """Bucket window primes by the signature of psi_q on primes <= y and
    return the largest bucket (ties: lexicographically least signature)
    with all its pairs.  Every pair satisfies psi_tilde(p) = 1 for p <= y."""
    sig_primes = sieve_primes(max(2, int(math.floor(spec.y)))).primes
    sig_primes = [int(p) for p in sig_primes if p <= spec.y]
    return _result_from_buckets(spec, sig_primes, spec.y, substituted=False)


def pigeonhole_with_retry(spec: OrderKFamilySpec) -> PigeonholeResult:
    """pigeonhole_search, retried with the largest signature cutoff that
    yields at least one pair (trimming the largest signature prime each
    time).  The substitution is recorded on the result."""
    res = pigeonhole_search(spec)
    if res.pairs:
        return res
    sig_primes = list(res.sig_primes)
    while sig_primes:
        sig_primes.pop()
        y_used = float(sig_primes[-1]) if sig_primes else 2.0
        res = _result_from_buckets(spec, sig_primes, y_used, substituted=True)
        if res.pairs:
            return res
    return res  # fewer than two window primes: empty, caller decides


# ---------------------------------------------------------------------------
# fundamental-discriminant censuses


@dataclass(frozen=True)
class CensusRecord:
    Q: float
    m: int
    delta: int
    count: int
    main_term: float
    deviation: float  # |count - main_term| / (d(m) sqrt(Q))


def _discriminant_mask(limit: int, delta: int) -> np.ndarray:
    """Mask over n = |d| <= limit of fundamental d = delta*n with d = 1 mod 4
    (i.e. n squarefree with n = delta mod 4), d = 1 itself excluded."""
    n = np.arange(limit + 1)
    mask = squarefree_mask(limit) & (n % 4 == (1 if delta == 1 else 3))
    if delta == 1 and limit >= 1:
        mask[1] = False
    return mask


def count_fundamental_discriminants(Q: float, m: int, delta: int) -> CensusRecord:
    """Exact census of fundamental d = 1 mod 4 with 0 < delta*d <= Q and
    gcd(d, m) = 1, against the main term (3/pi^2) Q prod_{p|2m}(1+1/p)^{-1}."""
    if not Q >= 100:
        raise ValueError(f"census needs Q >= 100, got {Q}")
    if delta not in (1, -1):
        raise ValueError("delta must be +1 or -1")
    limit = int(math.floor(Q))
    mask = _discriminant_mask(limit, delta)
    fm = factor(m)
    m_primes = [p for p, _ in fm.factors]
    n = np.arange(limit + 1)
    for p in m_primes:
        if p > 2:  # d is odd, so powers of 2 in m never obstruct
            mask &= n % p != 0
    count = int(np.count_nonzero(mask))
    main = 3.0 / math.pi**2 * Q
    for p in sorted(set([2] + m_primes)):
        main /= 1.0 + 1.0 / p
    deviation = abs(count - main) / (fm.divisor_count() * math.sqrt(Q))
    return CensusRecord(Q, m, delta, count, main, deviation)


@dataclass(frozen=True)
class SignatureDiscriminants:
    d_values: np.ndarray  # signed, ascending |d|
    reference_count: float  # Q / (2^{pi(y)} log y)
    y: float
    sig_primes: tuple


def _kronecker_column(d_values: np.ndarray, p: int) -> np.ndarray:
    """chi_d(p) = kronecker(d, p) for an array of d, vectorized per prime."""
    if p == 2:
        r = np.mod(d_values, 8)
        out = np.zeros(len(d_values), dtype=np.int64)
        out[(r == 1) | (r == 7)] = 1
        out[(r == 3) | (r == 5)] = -1
        out[np.mod(d_values, 2) == 0] = 0
        return out
    table = -np.ones(p, dtype=np.int64)
    table[np.mod(np.arange(p) ** 2, p)] = 1
    table[0] = 0
    return table[np.mod(d_values, p)]


def signature_discriminants(
    Q: float, delta: int, y: float, eps: Mapping[int, int]
) -> SignatureDiscriminants:
    """Fundamental d = 1 mod 4, 0 < delta*d <= Q, gcd(d, P(y)) = 1, with
    chi_d(p) = eps[p] for every signature prime p <= y present in eps.

    Primes p <= y missing from eps contribute only the coprimality
    condition.  The count is reported against Q / (2^{pi(y)} log y).
    """
    if delta not in (1, -1):
        raise ValueError("delta must be +1 or -1")
    if not y >= 2:
        raise ValueError(f"signature cutoff needs y >= 2, got {y}")
    if y > math.log(Q) * (1.0 + 1e-12):
        warnings.warn(
            f"signature cutoff y={y:.3g} exceeds log Q = {math.log(Q):.3g}; "
            "the family may be empty",
            stacklevel=2,
        )
    limit = int(math.floor(Q))
    mask = _discriminant_mask(limit, delta)
    sig_primes = [int(p) for p in sieve_primes(max(2, int(y))).primes if p <= y]
    n = np.arange(limit + 1)
    d = delta * n
    for p in sig_primes:
        mask &= n % p != 0
        if p in eps:
            target = int(eps[p])
            if target not in (1, -1):
                raise ValueError(f"eps[{p}] must be +1 or -1, got {eps[p]}")
            mask &= _kronecker_column(d, p) == target
    ds = d[mask]
    reference = Q / (2 ** len(sig_primes) * math.log(y))
    return SignatureDiscriminants(ds, reference, y, tuple(sig_primes))


# ---------------------------------------------------------------------------
# quadratic-twist family


@dataclass(frozen=True)
class QuadTwistSpec:
    """Twists chi = psi * chi_d of a pigeonholed order-k base character psi
    (conductor q1 q2 from the window (Q^{1/3}, 2 Q^{1/3})) by fundamental
    d = 1 mod 4 with 0 < eps*delta*d <= Q^{1/3} and chi_d(p) = xi(p) for
    p <= y, p coprime to the conductor of xi."""

    Q: float
    k: int
    delta: int
    xi: DirichletCharacter = None
    y: Optional[float] = None
    psi: Optional[DirichletCharacter] = None

    def __post_init__(self):
        if not self.Q >= 16**3:
            raise ValueError(f"twist family needs Q >= {16 ** 3}, got {self.Q}")
        if self.k % 2 != 0 or self.k < 2:
            raise ConstraintError(
                "quadratic twists preserve order k only for even k; "
                f"got k={self.k}"
            )
        if self.delta not in (1, -1):
            raise ValueError("delta must be +1 or -1")
        if self.xi is None:
            object.__setattr__(self, "xi", principal_character(1))
        if self.xi.modulus not in (1, 3):
            raise ValueError("xi must be principal or the quadratic character mod 3")
        if self.y is None:
            object.__setattr__(self, "y", math.log(self.Q) / 3.0)

    @property
    def D(self) -> float:
        return self.Q ** (1.0 / 3.0)


@dataclass(frozen=True)
class TwistedMember:
    d: int
    chi: DirichletCharacter
    conductor: int
    char_id: str


@dataclass(frozen=True)
class TwistedFamily:
    spec: QuadTwistSpec
    psi: DirichletCharacter
    q1: int
    q2: int
    base_y_requested: float
    base_y_used: float
    base_substituted: bool
    members: list


def twisted_family(spec: QuadTwistSpec) -> TwistedFamily:
    """Build the twist family; every member is primitive of order k,
    conductor |d| q1 q2, and parity delta."""
    if spec.psi is not None:
        psi = spec.psi
        prs = [p for p, _ in factor(psi.conductor).factors]
        if len(prs) != 2 or not psi.is_primitive:
            raise ValueError("base character must be primitive with conductor q1*q2")
        q1, q2 = prs
        y_req = y_used = float("nan")
        substituted = False
    else:
        base_scale = spec.Q ** (2.0 / 3.0)
        base_spec = OrderKFamilySpec(base_scale, spec.k)  # y = log Q^{2/3}
        res = pigeonhole_with_retry(base_spec)
        if not res.pairs:
            raise ConstraintError(
                "no valid base character: window "
                f"({base_spec.window[0]:.1f}, {base_spec.window[1]:.1f}) has "
                f"{res.n_window_primes} primes = 1 mod {spec.k}; a pair needs >= 2"
            )
        m, psi = res.pairs[0]
        q1, q2 = res.bucket[0], res.bucket[1]
        y_req, y_used, substituted = base_spec.y, res.y_used, res.substituted
    epsilon = psi.parity()
    ell = spec.xi.modulus
    eps_map = {}
    for p in sieve_primes(max(2, int(spec.y))).primes:
        p = int(p)
        if p <= spec.y and ell % p != 0:
            v = spec.xi.eval(p)
            eps_map[p] = v.as_int()  # xi is real: +-1 away from ell
    sig = signature_discriminants(spec.D, epsilon * spec.delta, spec.y, eps_map)
    members = []
    for d in sig.d_values:
        d = int(d)
        if math.gcd(d, ell * q1 * q2) != 1:
            continue
        chi = product_character(psi, kronecker_character(d))
        cond = abs(d) * q1 * q2
        assert chi.order == spec.k and chi.is_primitive
        assert chi.conductor == cond and chi.parity() == spec.delta
        members.append(TwistedMember(d, chi, cond, chi.char_id))
    return TwistedFamily(
        spec, psi, q1, q2, y_req, y_used, substituted, members
    )


# ---------------------------------------------------------------------------
# extremal pipeline and random baselines


@dataclass(frozen=True)
class PipelineResult:
    mode: str
    Q: float
    k: int
    y_used: float
    substituted: bool
    family_size: int
    records: list  # ranked EvalRecord list
    references: dict

    @property
    def top(self):
        return self.records[0] if self.records else None


def extremal_pipeline(
    Q: float,
    k: int,
    mode: str,
    y_mult: float = 1.0,
    z: Optional[float] = None,
    delta: Optional[int] = None,
    xi_conductor: Optional[int] = None,
    jobs: int = 1,
) -> PipelineResult:
    """Run one search: orderk ranks pigeonholed psi_tilde by |L(1, .)|;
    odd_sum / even_sum rank twisted characters by M(chi)."""
    from .report import REFERENCE_CONSTANTS  # deferred: report imports charsum

    if mode not in ("orderk", "odd_sum", "even_sum"):
        raise ValueError(f"unknown search mode {mode!r}")
    if not Q >= 1e4:
        raise ValueError(f"search needs Q >= 1e4, got {Q}")
    if z is None:
        z = math.log(Q) ** 2  # truncation (log Q)^A at the default A = 2
    xi = None
    if mode == "orderk":
        spec = OrderKFamilySpec(Q, k, y=y_mult * math.log(Q))
        res = pigeonhole_with_retry(spec)
        chars = [chi for _, chi in res.pairs]
        y_used, substituted = res.y_used, res.substituted
    else:
        if delta is None:
            delta = -1 if mode == "odd_sum" else 1
        if xi_conductor is None:
            xi_conductor = 1 if mode == "odd_sum" else 3
        xi = principal_character(1) if xi_conductor == 1 else kronecker_character(-3)
        tspec = QuadTwistSpec(Q, k, delta, xi=xi, y=(math.log(Q) / 3.0) * y_mult)
        fam = twisted_family(tspec)
        chars = [mem.chi for mem in fam.members]
        y_used, substituted = fam.base_y_used, fam.base_substituted
    records = _evaluate_many(chars, z, xi, jobs)
    if mode == "orderk":
        records.sort(key=lambda r: (-abs(r.L1.value), r.char_id))
    else:
        records.sort(key=lambda r: (-r.M, r.char_id))
    refs = dict(REFERENCE_CONSTANTS)
    refs["e_gamma_loglog_Q"] = refs["e_gamma"] * math.log(math.log(Q))
    return PipelineResult(
        mode=mode,
        Q=Q,
        k=k,
        y_used=y_used,
        substituted=substituted,
        family_size=len(records),
        records=records,
        references=refs,
    )


def _eval_worker(task: tuple):
    from .character import character_from_id
    from .report import evaluate_character

    char_id, z, xi_id = task
    chi = character_from_id(char_id)
    xi = character_from_id(xi_id) if xi_id else None
    return evaluate_character(chi, z=z, xi=xi, fast=True)


def _evaluate_many(chars, z, xi, jobs):
    xi_id = xi.char_id if xi is not None and not xi.is_principal else None
    tasks = [(chi.char_id, z, xi_id) for chi in chars]
    if jobs > 1 and len(tasks) > 1:
        import multiprocessing as mp

        with mp.Pool(jobs) as pool:
            records = pool.map(_eval_worker, tasks)
    else:
        records = [_eval_worker(t) for t in tasks]
    # canonical merge order, independent of pool size
    records.sort(key=lambda r: r.char_id)
    return records


def random_l1_baseline(
    Q: float,
    count: int = 500,
    order: Optional[int] = None,
    seed: int = 20260815,
    n_moduli: int = 25,
) -> np.ndarray:
    """|L(1, chi)| for `count` random primitive characters of prime modulus
    in (Q, 4Q) (conductors comparable to the family's q1*q2 in (Q, 4Q)).
    order=None samples all non-principal characters; order=k restricts to
    order exactly k.  Deterministic for a fixed seed."""
    from .lfunction import l1_exact_batch

    rng = np.random.default_rng(seed)
    ps = sieve_primes(int(4 * Q) + 1).primes
    ps = ps[(ps > Q) & (ps < 4 * Q)]
    if order is not None:
        ps = ps[ps % order == 1]
    if len(ps) == 0:
        raise ConstraintError(f"no usable prime moduli in ({Q}, {4 * Q})")
    moduli = rng.choice(ps, size=min(n_moduli, len(ps)), replace=False)
    units = (
        [a for a in range(1, order + 1) if math.gcd(a, order) == 1]
        if order is not None
        else None
    )
    chars = []
    from .character import character_from_index

    for i in range(count):
        q = int(moduli[i % len(moduli)])
        if order is None:
            t = int(rng.integers(1, q - 1))
        else:
            t = (q - 1) // order * units[int(rng.integers(0, len(units)))]
        chars.append(character_from_index(q, t))
    return np.abs(l1_exact_batch(chars))
