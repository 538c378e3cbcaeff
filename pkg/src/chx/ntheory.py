"""Integer kernel: sieving, factorization, primitive roots, Kronecker symbol.

Everything here is exact integer arithmetic.  Python integers are unbounded,
so modular products never overflow; the numpy paths below stay within int64
by construction (moduli are capped at 2**32).
"""

from __future__ import annotations

import math
import random
import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

_SIMPLE_SIEVE_CAP = 1 << 24
_SEGMENT = 1 << 22
_SIEVE_LIMIT_MAX = 1 << 32
_TRIAL_BOUND = 10**6

_CACHE_MAGIC = b"CHXPRIMES1"


def _simple_sieve(limit: int) -> np.ndarray:
    """Eratosthenes on a byte table, returns the primes <= limit."""
    table = bytearray([1]) * (limit + 1)
    table[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if table[p]:
            start = p * p
            table[start :: p] = bytes(len(range(start, limit + 1, p)))
    return np.flatnonzero(np.frombuffer(bytes(table), dtype=np.uint8)).astype(np.int64)


def _segmented_sieve(limit: int) -> np.ndarray:
    base = _simple_sieve(math.isqrt(limit))
    chunks = [_simple_sieve(min(_SIMPLE_SIEVE_CAP, limit))]
    lo = _SIMPLE_SIEVE_CAP + 1
    base_list = base.tolist()
    while lo <= limit:
        hi = min(lo + _SEGMENT - 1, limit)
        seg = bytearray([1]) * (hi - lo + 1)
        for p in base_list:
            if p * p > hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            seg[start - lo :: p] = bytes(len(range(start, hi + 1, p)))
        chunks.append(np.flatnonzero(np.frombuffer(bytes(seg), dtype=np.uint8)).astype(np.int64) + lo)
        lo = hi + 1
    return np.concatenate(chunks)


@dataclass
class PrimeTable:
    """Sorted primes up to ``limit`` with a small binary cache format.

    The cache layout is the 10-byte magic ``CHXPRIMES1``, the limit as a
    little-endian uint64, then the prime gaps as unsigned LEB128 varints
    (first gap taken from 0).
    """

    limit: int
    primes: np.ndarray

    def count(self) -> int:
        return int(self.primes.size)

    def in_range(self, lo: float, hi: float) -> np.ndarray:
        """Primes p with lo < p < hi (both ends strict)."""
        i = int(np.searchsorted(self.primes, lo, side="right"))
        j = int(np.searchsorted(self.primes, hi, side="left"))
        # searchsorted with float bounds: equality at either end must be excluded
        while i < self.primes.size and self.primes[i] <= lo:
            i += 1
        while j > i and self.primes[j - 1] >= hi:
            j -= 1
        return self.primes[i:j]

    def save(self, path: str | Path) -> None:
        out = bytearray(_CACHE_MAGIC)
        out += struct.pack("<Q", self.limit)
        prev = 0
        for p in self.primes.tolist():
            gap = p - prev
            prev = p
            while True:
                byte = gap & 0x7F
                gap >>= 7
                out.append(byte | (0x80 if gap else 0))
                if not gap:
                    break
        Path(path).write_bytes(bytes(out))

    @classmethod
    def load(cls, path: str | Path) -> "PrimeTable":
        raw = Path(path).read_bytes()
        if raw[: len(_CACHE_MAGIC)] != _CACHE_MAGIC:
            raise ValueError(f"{path}: not a prime-table cache (bad magic)")
        (limit,) = struct.unpack_from("<Q", raw, len(_CACHE_MAGIC))
        pos = len(_CACHE_MAGIC) + 8
        primes = []
        cur = 0
        gap = 0
        shift = 0
        for byte in raw[pos:]:
            gap |= (byte & 0x7F) << shift
            shift += 7
            if not byte & 0x80:
                cur += gap
                primes.append(cur)
                gap = 0
                shift = 0
        if shift:
            raise ValueError(f"{path}: truncated varint in prime cache")
        return cls(limit=int(limit), primes=np.asarray(primes, dtype=np.int64))


def sieve_primes(limit: int, cache_dir: str | Path | None = None) -> PrimeTable:
    """All primes up to ``limit`` (2 <= limit <= 2**32), optionally cached.

    With ``cache_dir`` set, a table on disk covering at least ``limit`` is
    reused (sliced down); otherwise the sieve runs and the result is saved.
    """
    if not isinstance(limit, int):
        raise ValueError(f"sieve limit must be an integer, got {limit!r}")
    if limit < 2 or limit > _SIEVE_LIMIT_MAX:
        raise ValueError(f"sieve limit {limit} outside [2, 2**32]")
    cache_file = None
    if cache_dir is not None:
        cache_file = Path(cache_dir) / "primes.bin"
        if cache_file.exists():
            table = PrimeTable.load(cache_file)
            if table.limit >= limit:
                cut = int(np.searchsorted(table.primes, limit, side="right"))
                return PrimeTable(limit=limit, primes=table.primes[:cut])
    if limit <= _SIMPLE_SIEVE_CAP:
        primes = _simple_sieve(limit)
    else:
        primes = _segmented_sieve(limit)
    table = PrimeTable(limit=limit, primes=primes)
    if cache_file is not None:
        cache_file.parent.mkdir(parents=True, exist_ok=True)
        table.save(cache_file)
    return table


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 2**64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Prime factorization n = prod p**a with p ascending."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def big_omega(self) -> int:
        return sum(a for _, a in self.factors)

    def mobius(self) -> int:
        if any(a > 1 for _, a in self.factors):
            return 0
        return -1 if len(self.factors) % 2 else 1

    def euler_phi(self) -> int:
        out = 1
        for p, a in self.factors:
            out *= p ** (a - 1) * (p - 1)
        return out

    def divisor_count(self) -> int:
        out = 1
        for _, a in self.factors:
            out *= a + 1
        return out

    def is_squarefree(self) -> bool:
        return all(a == 1 for _, a in self.factors)

    def divisors(self) -> list[int]:
        """All divisors of n, ascending."""
        divs = [1]
        for p, a in self.factors:
            divs = [d * p**e for d in divs for e in range(a + 1)]
        return sorted(divs)


_small_primes_for_trial: list[int] | None = None


def _trial_primes() -> list[int]:
    global _small_primes_for_trial
    if _small_primes_for_trial is None:
        _small_primes_for_trial = _simple_sieve(_TRIAL_BOUND).tolist()
    return _small_primes_for_trial


def _brent_rho(n: int) -> int:
    """One nontrivial factor of composite odd n (no prime factor < 10**6)."""
    rng = random.Random(n * 0x9E3779B97F4A7C15 & (2**64 - 1))
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * (x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(x - ys, n)
        if g != n:
            return g


def factor(n: int) -> Factorization:
    """Factor 1 <= n < 2**63 by trial division, Miller-Rabin, and Brent rho."""
    if not isinstance(n, int):
        raise ValueError(f"factor expects an integer, got {n!r}")
    if n < 1 or n >= 2**63:
        raise ValueError(f"factor argument {n} outside [1, 2**63)")
    out: dict[int, int] = {}
    rem = n
    for p in _trial_primes():
        if p * p > rem:
            break
        while rem % p == 0:
            out[p] = out.get(p, 0) + 1
            rem //= p
    if rem > 1:
        if rem < _TRIAL_BOUND * _TRIAL_BOUND or is_prime(rem):
            # trial division already reached sqrt(rem), or rem is prime
            out[rem] = out.get(rem, 0) + 1
        else:
            stack = [rem]
            while stack:
                m = stack.pop()
                if is_prime(m):
                    out[m] = out.get(m, 0) + 1
                    continue
                d = _brent_rho(m)
                stack.append(d)
                stack.append(m // d)
    return Factorization(n=n, factors=tuple(sorted(out.items())))


def smallest_primitive_root(q: int) -> int:
    """Least primitive root modulo an odd prime q."""
    if q < 3 or not is_prime(q):
        raise ValueError(f"{q} is not an odd prime")
    prime_divs = [p for p, _ in factor(q - 1).factors]
    for g in range(2, q):
        if all(pow(g, (q - 1) // p, q) != 1 for p in prime_divs):
            return g
    raise AssertionError(f"no primitive root found mod {q}")  # unreachable


@lru_cache(maxsize=None)
def smallest_primitive_root_mod_pp(p: int, a: int) -> int:
    """Least generator of the (cyclic) unit group mod p**a, p an odd prime."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if a == 1:
        return smallest_primitive_root(p)
    pa = p**a
    m = pa // p * (p - 1)
    prime_divs = [r for r, _ in factor(m).factors]
    for g in range(2, pa):
        if g % p == 0:
            continue
        if all(pow(g, m // r, pa) != 1 for r in prime_divs):
            return g
    raise AssertionError(f"no generator found mod {p}**{a}")  # unreachable


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d|n), extended to all integers n.

    (d|0) is 1 for d = +-1 and 0 otherwise; (d|-1) is -1 exactly when d < 0.
    """
    if n == 0:
        return 1 if d in (1, -1) else 0
    if d % 2 == 0 and n % 2 == 0:
        return 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    # factor of 2 in n: supplement (d|2) depends on d mod 8
    twos = (n & -n).bit_length() - 1
    n >>= twos
    if twos % 2 == 1 and d % 8 in (3, 5):
        result = -result
    # Jacobi symbol (d|n) for odd n > 0 by reciprocity
    d %= n
    while d != 0:
        while d % 2 == 0:
            d //= 2
            if n % 8 in (3, 5):
                result = -result
        d, n = n, d
        if d % 4 == 3 and n % 4 == 3:
            result = -result
        d %= n
    return result if n == 1 else 0


def is_fundamental_discriminant(d: int) -> bool:
    """d = 1 mod 4 squarefree, or d = 4m with m squarefree, m = 2,3 mod 4."""
    if d == 0:
        raise ValueError("0 is not a discriminant")
    if d % 4 == 1:
        return factor(abs(d)).is_squarefree()
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and factor(abs(m)).is_squarefree()
    return False


def is_kth_power(n: int, k: int) -> bool:
    """Whether every exponent in the factorization of n is divisible by k."""
    if n < 1:
        raise ValueError(f"is_kth_power expects n >= 1, got {n}")
    if k < 1:
        raise ValueError(f"is_kth_power expects k >= 1, got {k}")
    if k == 1 or n == 1:
        return True
    return all(a % k == 0 for _, a in factor(n).factors)


def squarefree_mask(limit: int) -> np.ndarray:
    """Boolean array s of length limit+1 with s[n] true iff n is squarefree.

    s[0] is false.  Used for bulk discriminant scans.
    """
    mask = np.ones(limit + 1, dtype=bool)
    mask[0] = False
    if limit >= 4:
        for p in _simple_sieve(math.isqrt(limit)).tolist():
            mask[p * p :: p * p] = False
    return mask
