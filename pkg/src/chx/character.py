"""Dirichlet characters as exact objects.

A character mod q is stored componentwise over the prime powers p^a || q.
For odd p the unit group mod p^a is cyclic with canonical generator g (the
least one); the component is the index t with chi(g) = zeta_m^t, m = phi(p^a).
For p = 2 the group is trivial (a = 1), {±1} (a = 2), or <-1> x <5> (a >= 3),
indexed by (t0, t1).

Values are roots of unity carried as exact (order, exponent) pairs; nothing
is embedded into floating point until a caller asks for a complex value or a
bulk value table.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConstraintError, ResourceError
from .ntheory import factor, is_prime, smallest_primitive_root_mod_pp

_DLOG_TABLE_CAP = 1 << 26  # full tables up to here, baby-step/giant-step above
_NUMPY_MODULUS_CAP = 1 << 31  # int64 products stay exact below this


@dataclass(frozen=True)
class RootOfUnity:
    """Exact zeta_order^exponent, or the absorbing zero.

    Instances are kept in lowest terms (gcd(exponent, order) = 1, or the
    pair (1, 0) for the value 1), so structural equality is value equality.
    """

    order: int
    exponent: int
    is_zero: bool = False

    def __post_init__(self):
        if self.is_zero:
            object.__setattr__(self, "order", 1)
            object.__setattr__(self, "exponent", 0)
            return
        if self.order < 1:
            raise ValueError(f"root of unity needs order >= 1, got {self.order}")
        e = self.exponent % self.order
        g = math.gcd(e, self.order)
        if g > 1 or e == 0:
            object.__setattr__(self, "order", self.order // g if e else 1)
            object.__setattr__(self, "exponent", e // g if e else 0)
        else:
            object.__setattr__(self, "exponent", e)

    @classmethod
    def zero(cls) -> "RootOfUnity":
        return cls(1, 0, True)

    @classmethod
    def one(cls) -> "RootOfUnity":
        return cls(1, 0)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if self.is_zero or other.is_zero:
            return RootOfUnity.zero()
        n = math.lcm(self.order, other.order)
        e = self.exponent * (n // self.order) + other.exponent * (n // other.order)
        return RootOfUnity(n, e)

    def __pow__(self, k: int) -> "RootOfUnity":
        if self.is_zero:
            if k <= 0:
                raise ZeroDivisionError("0 ** nonpositive power")
            return self
        return RootOfUnity(self.order, self.exponent * k)

    def conjugate(self) -> "RootOfUnity":
        if self.is_zero:
            return self
        return RootOfUnity(self.order, -self.exponent)

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        if self.order == 1:
            return 1 + 0j
        if self.order == 2:
            return -1 + 0j
        if self.order == 4:
            return 1j if self.exponent == 1 else -1j
        return cmath.exp(2j * cmath.pi * self.exponent / self.order)

    def as_int(self) -> int:
        """The value as an integer, defined only for 0 and ±1."""
        if self.is_zero:
            return 0
        if self.order == 1:
            return 1
        if self.order == 2:
            return -1
        raise ConstraintError(f"zeta_{self.order}^{self.exponent} is not 0 or ±1")


# ---------------------------------------------------------------------------
# per prime-power tables


def _check_table_size(size: int) -> None:
    if size > _DLOG_TABLE_CAP:
        raise ResourceError(f"value table of size {size} exceeds cap 2**26")


@lru_cache(maxsize=8)
def _power_table(p: int, a: int) -> np.ndarray:
    """powers[j] = g^j mod p^a for the canonical generator g, j < phi(p^a)."""
    pa = p**a
    _check_table_size(pa)
    assert pa < _NUMPY_MODULUS_CAP  # int64 block products below stay exact
    g = smallest_primitive_root_mod_pp(p, a)
    m = pa // p * (p - 1)
    block = min(1024, m)
    head = np.empty(block, dtype=np.int64)
    x = 1
    for j in range(block):
        head[j] = x
        x = x * g % pa
    out = np.empty(m, dtype=np.int64)
    out[:block] = head
    step = pow(g, block, pa)
    filled = block
    cur = head
    while filled < m:
        n = min(block, m - filled)
        cur = cur * step % pa
        out[filled : filled + n] = cur[:n]
        filled += n
    return out


@lru_cache(maxsize=8)
def _dlog_table(p: int, a: int) -> np.ndarray:
    """dlog[n] = j with g^j = n mod p^a (units only; -1 elsewhere)."""
    pa = p**a
    powers = _power_table(p, a)
    table = np.full(pa, -1, dtype=np.int64)
    table[powers] = np.arange(powers.size, dtype=np.int64)
    return table


@lru_cache(maxsize=8)
def _two_adic_tables(a: int) -> tuple[np.ndarray, np.ndarray]:
    """(sign[n], five_log[n]) with n = (-1)^sign * 5^five_log mod 2^a, a >= 3."""
    pa = 1 << a
    m5 = 1 << (a - 2)
    sign = np.full(pa, -1, dtype=np.int64)
    fivelog = np.full(pa, -1, dtype=np.int64)
    x = 1
    for j in range(m5):
        sign[x] = 0
        fivelog[x] = j
        y = pa - x
        sign[y] = 1
        fivelog[y] = j
        x = x * 5 % pa
    return sign, fivelog


def _dlog_bsgs(n: int, g: int, m: int, pa: int) -> int:
    """x < m with g^x = n mod p^a, by baby-step/giant-step."""
    s = math.isqrt(m - 1) + 1
    baby = {}
    x = 1
    for j in range(s):
        baby.setdefault(x, j)
        x = x * g % pa
    step = pow(g, -s, pa)
    cur = n % pa
    for i in range(s + 1):
        j = baby.get(cur)
        if j is not None:
            return (i * s + j) % m
        cur = cur * step % pa
    raise ArithmeticError(f"no discrete log of {n} mod {pa}")


# ---------------------------------------------------------------------------
# components


@dataclass(frozen=True)
class _OddComponent:
    """Character on the cyclic unit group mod p^a, p odd."""

    p: int
    a: int
    t: int

    @property
    def pa(self) -> int:
        return self.p**self.a

    @property
    def group_order(self) -> int:
        return self.pa // self.p * (self.p - 1)

    @property
    def generator(self) -> int:
        return smallest_primitive_root_mod_pp(self.p, self.a)

    def value_order(self) -> int:
        m = self.group_order
        return m // math.gcd(self.t, m)

    def conductor(self) -> int:
        if self.t == 0:
            return 1
        d = self.value_order()
        c = 1
        while d % self.p == 0:
            d //= self.p
            c += 1
        assert (self.p - 1) % d == 0
        return self.p**c

    def index_label(self) -> int:
        return self.t

    def dlog(self, n: int) -> int:
        pa = self.pa
        n %= pa
        if pa <= _DLOG_TABLE_CAP:
            j = int(_dlog_table(self.p, self.a)[n])
            assert j >= 0
            return j
        return _dlog_bsgs(n, self.generator, self.group_order, pa)

    def eval_rou(self, n: int) -> RootOfUnity:
        m = self.group_order
        return RootOfUnity(m, self.t * self.dlog(n))

    def value_array(self) -> np.ndarray:
        pa = self.pa
        _check_table_size(pa)
        m = self.group_order
        vals = np.zeros(pa, dtype=np.complex128)
        roots = np.exp(2j * np.pi * np.arange(m) / m)
        vals[_power_table(self.p, self.a)] = roots[self.t * np.arange(m) % m]
        return vals

    def scaled(self, e: int) -> "_OddComponent":
        return _OddComponent(self.p, self.a, self.t * e % self.group_order)


@dataclass(frozen=True)
class _TwoComponent:
    """Character on the unit group mod 2^a: trivial (a=1), {±1} (a=2),
    or <-1> x <5> (a>=3) with index pair (t0, t1)."""

    a: int
    t0: int
    t1: int

    @property
    def p(self) -> int:
        return 2

    @property
    def pa(self) -> int:
        return 1 << self.a

    @property
    def m5(self) -> int:
        return 1 << (self.a - 2) if self.a >= 3 else 1

    def value_order(self) -> int:
        if self.a == 1:
            return 1
        if self.a == 2:
            return 2 if self.t0 else 1
        five = self.m5 // math.gcd(self.t1, self.m5)
        return math.lcm(2 if self.t0 else 1, five)

    def conductor(self) -> int:
        if self.a == 1:
            return 1
        if self.a == 2:
            return 4 if self.t0 else 1
        five = self.m5 // math.gcd(self.t1, self.m5)
        if five > 1:
            return 4 * five
        return 4 if self.t0 else 1

    def index_label(self) -> int:
        if self.a <= 2:
            return self.t0
        return self.t0 * self.m5 + self.t1

    def eval_rou(self, n: int) -> RootOfUnity:
        pa = self.pa
        n %= pa
        if self.a == 1:
            return RootOfUnity.one()
        if self.a == 2:
            return RootOfUnity(2, self.t0 * (n // 2))  # n in {1, 3}
        sign, fivelog = _two_adic_tables(self.a)
        s = int(sign[n])
        j = int(fivelog[n])
        return RootOfUnity(2, self.t0 * s) * RootOfUnity(self.m5, self.t1 * j)

    def value_array(self) -> np.ndarray:
        pa = self.pa
        _check_table_size(pa)
        vals = np.zeros(pa, dtype=np.complex128)
        if self.a == 1:
            vals[1] = 1.0
            return vals
        if self.a == 2:
            vals[1] = 1.0
            vals[3] = -1.0 if self.t0 else 1.0
            return vals
        m5 = self.m5
        roots = np.exp(2j * np.pi * np.arange(m5) / m5)
        sign, fivelog = _two_adic_tables(self.a)
        units = np.flatnonzero(sign >= 0)
        vals[units] = roots[self.t1 * fivelog[units] % m5] * np.where(
            (self.t0 * sign[units]) % 2, -1.0, 1.0
        )
        return vals

    def scaled(self, e: int) -> "_TwoComponent":
        return _TwoComponent(self.a, self.t0 * e % 2, self.t1 * e % self.m5)


def _make_component(p: int, a: int, label: int):
    if p == 2:
        if a == 1:
            if label != 0:
                raise ValueError("the unit group mod 2 is trivial")
            return _TwoComponent(1, 0, 0)
        if a == 2:
            if label not in (0, 1):
                raise ValueError(f"index {label} out of range for modulus 4")
            return _TwoComponent(2, label, 0)
        m5 = 1 << (a - 2)
        if not 0 <= label < 2 * m5:
            raise ValueError(f"index {label} out of range for modulus 2^{a}")
        return _TwoComponent(a, label // m5, label % m5)
    comp = _OddComponent(p, a, label)
    if not 0 <= label < comp.group_order:
        raise ValueError(f"index {label} out of range for modulus {p}^{a}")
    return comp


# ---------------------------------------------------------------------------
# the character class


class DirichletCharacter:
    """Exact Dirichlet character; construct via the module-level helpers."""

    __slots__ = ("modulus", "components", "_order", "_conductor")

    def __init__(self, modulus: int, components: tuple):
        self.modulus = modulus
        self.components = components
        self._order = None
        self._conductor = None

    # -- structure ---------------------------------------------------------

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = math.lcm(1, *(c.value_order() for c in self.components))
        return self._order

    @property
    def conductor(self) -> int:
        if self._conductor is None:
            self._conductor = math.prod(c.conductor() for c in self.components)
        return self._conductor

    @property
    def is_principal(self) -> bool:
        return self.order == 1

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def parity(self) -> int:
        """chi(-1) as ±1."""
        return self.eval(-1).as_int()

    def is_odd(self) -> bool:
        return self.parity() == -1

    @property
    def char_id(self) -> str:
        comps = ",".join(
            (f"{c.p}:{c.index_label()}" if c.a == 1 else f"{c.p}^{c.a}:{c.index_label()}")
            for c in self.components
        )
        return f"q={self.modulus};comps={comps}"

    def __repr__(self):
        return f"DirichletCharacter({self.char_id!r})"

    def __eq__(self, other):
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.modulus, self.components))

    # -- evaluation --------------------------------------------------------

    def eval(self, n: int) -> RootOfUnity:
        if math.gcd(n, self.modulus) != 1:
            return RootOfUnity.zero()
        out = RootOfUnity.one()
        for c in self.components:
            out = out * c.eval_rou(n)
        return out

    __call__ = eval

    def value_table(self) -> np.ndarray:
        """chi(n) for n = 0..q-1 as complex128 (0 on non-units)."""
        q = self.modulus
        if q == 1:
            return np.ones(1, dtype=np.complex128)
        _check_table_size(q)
        if len(self.components) == 1:
            return self.components[0].value_array().copy()
        out = np.ones(q, dtype=np.complex128)
        idx = np.arange(q, dtype=np.int64)
        for c in self.components:
            out *= c.value_array()[idx % c.pa]
        return out

    # -- algebra -----------------------------------------------------------

    def conjugate(self) -> "DirichletCharacter":
        return self ** (-1)

    def __pow__(self, e: int) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(c.scaled(e) for c in self.components))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        return product_character(self, other)

    # -- conductor machinery -------------------------------------------------

    def primitive_character(self) -> "DirichletCharacter":
        """The primitive character that induces this one."""
        comps = []
        for c in self.components:
            f = c.conductor()
            if f == 1:
                continue
            if c.p == 2:
                a0 = f.bit_length() - 1
                if a0 == 2:
                    comps.append(_TwoComponent(2, c.t0, 0))
                else:
                    m5_0 = 1 << (a0 - 2)
                    comps.append(_TwoComponent(a0, c.t0, c.t1 // (c.m5 // m5_0)))
            else:
                a0 = 0
                ff = f
                while ff > 1:
                    ff //= c.p
                    a0 += 1
                v = c.eval_rou(smallest_primitive_root_mod_pp(c.p, a0))
                m0 = f // c.p * (c.p - 1)
                assert m0 % v.order == 0
                comps.append(_OddComponent(c.p, a0, v.exponent * (m0 // v.order)))
        return DirichletCharacter(self.conductor, tuple(comps))

    def induced_to(self, modulus: int) -> "DirichletCharacter":
        """The character mod ``modulus`` induced by this one's primitive part."""
        if modulus % self.conductor != 0:
            raise ConstraintError(
                f"conductor {self.conductor} does not divide target modulus {modulus}"
            )
        prim = self.primitive_character() if self.conductor != self.modulus else self
        by_p = {c.p: c for c in prim.components}
        comps = []
        for p, a in factor(modulus).factors:
            src = by_p.get(p)
            if src is None:
                comps.append(_make_component(p, a, 0))
            elif p == 2:
                if src.a == a:
                    comps.append(src)
                else:
                    t1 = src.t1 * ((1 << (a - 2)) // src.m5) if a >= 3 and src.a >= 3 else 0
                    comps.append(_TwoComponent(a, src.t0, t1))
            else:
                if src.a == a:
                    comps.append(src)
                else:
                    m = p ** (a - 1) * (p - 1)
                    v = src.eval_rou(smallest_primitive_root_mod_pp(p, a))
                    assert m % v.order == 0
                    comps.append(_OddComponent(p, a, v.exponent * (m // v.order)))
        return DirichletCharacter(modulus, tuple(comps))

    def is_induced_from(self, f: int) -> bool:
        """Direct test: chi(n) = 1 for every n = 1 mod f coprime to q."""
        if self.modulus % f != 0:
            return False
        one = RootOfUnity.one()
        for n in range(1 + f, self.modulus, f):
            if math.gcd(n, self.modulus) == 1 and self.eval(n) != one:
                return False
        return True

    def conductor_by_induction(self) -> int:
        """Smallest f | q the character is induced from (scan oracle)."""
        for f in factor(self.modulus).divisors():
            if self.is_induced_from(f):
                return f
        raise AssertionError("induction scan found no conductor")  # unreachable


# ---------------------------------------------------------------------------
# constructors


def principal_character(q: int) -> DirichletCharacter:
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    comps = tuple(_make_component(p, a, 0) for p, a in factor(q).factors)
    return DirichletCharacter(q, comps)


def character_from_index(q: int, t: int) -> DirichletCharacter:
    """chi mod an odd prime q with chi(g) = zeta_{q-1}^t, g the least
    primitive root."""
    if q < 3 or not is_prime(q):
        raise ValueError(f"modulus {q} is not an odd prime")
    if not 0 <= t < q - 1:
        raise ValueError(f"index {t} out of range [0, {q - 1})")
    return DirichletCharacter(q, (_OddComponent(q, 1, t),))


def character_from_components(q: int, labels: dict[int, int]) -> DirichletCharacter:
    """General constructor from {p^a: index-label} over the factorization of q."""
    comps = []
    seen = {}
    for p, a in factor(q).factors:
        pa = p**a
        if pa not in labels:
            raise ValueError(f"missing component for {p}^{a} in modulus {q}")
        comps.append(_make_component(p, a, labels[pa]))
        seen[pa] = True
    if len(seen) != len(labels):
        extra = set(labels) - set(seen)
        raise ValueError(f"components {sorted(extra)} do not divide modulus {q}")
    return DirichletCharacter(q, tuple(comps))


def character_from_id(char_id: str) -> DirichletCharacter:
    """Inverse of ``DirichletCharacter.char_id``."""
    try:
        qpart, cpart = char_id.split(";", 1)
        assert qpart.startswith("q=") and cpart.startswith("comps=")
        q = int(qpart[2:])
        labels = {}
        body = cpart[len("comps=") :]
        if body:
            for item in body.split(","):
                ppart, tpart = item.split(":")
                if "^" in ppart:
                    p, a = ppart.split("^")
                    labels[int(p) ** int(a)] = int(tpart)
                else:
                    labels[int(ppart)] = int(tpart)
    except (ValueError, AssertionError) as exc:
        raise ValueError(f"malformed character id {char_id!r}") from exc
    return character_from_components(q, labels)


def all_characters(q: int):
    """All phi(q) characters mod q, in lexicographic component-index order."""
    base = principal_character(q)
    ranges = []
    for c in base.components:
        if c.p == 2:
            ranges.append(range(2 * c.m5 if c.a >= 3 else (2 if c.a == 2 else 1)))
        else:
            ranges.append(range(c.group_order))
    for labels in itertools.product(*ranges):
        comps = tuple(_make_component(c.p, c.a, lab) for c, lab in zip(base.components, labels))
        yield DirichletCharacter(q, comps)


def order_k_characters(q: int, k: int) -> list[DirichletCharacter]:
    """The phi(k) characters of order exactly k mod a prime q = 1 mod k."""
    if k < 2:
        raise ValueError(f"order k must be >= 2, got {k}")
    if q < 3 or not is_prime(q):
        raise ValueError(f"modulus {q} is not an odd prime")
    if (q - 1) % k != 0:
        raise ConstraintError(f"q = {q} is not 1 mod k = {k}")
    step = (q - 1) // k
    return [
        character_from_index(q, alpha * step)
        for alpha in range(1, k + 1)
        if math.gcd(alpha, k) == 1
    ]


def psi_q(q: int, k: int) -> DirichletCharacter:
    """The canonical order-k character mod q: psi(g) = zeta_k for the least
    primitive root g."""
    if k < 2:
        raise ValueError(f"order k must be >= 2, got {k}")
    if q < 3 or not is_prime(q):
        raise ValueError(f"modulus {q} is not an odd prime")
    if (q - 1) % k != 0:
        raise ConstraintError(f"q = {q} is not 1 mod k = {k}")
    return character_from_index(q, (q - 1) // k)


def product_character(chi1: DirichletCharacter, chi2: DirichletCharacter) -> DirichletCharacter:
    """Pointwise product; moduli must be coprime (or equal)."""
    q1, q2 = chi1.modulus, chi2.modulus
    if math.gcd(q1, q2) == 1:
        comps = sorted(chi1.components + chi2.components, key=lambda c: c.p)
        return DirichletCharacter(q1 * q2, tuple(comps))
    if q1 == q2:
        comps = []
        for c1, c2 in zip(chi1.components, chi2.components):
            if c1.p == 2:
                comps.append(
                    _TwoComponent(c1.a, (c1.t0 + c2.t0) % 2, (c1.t1 + c2.t1) % c1.m5)
                )
            else:
                comps.append(_OddComponent(c1.p, c1.a, (c1.t + c2.t) % c1.group_order))
        return DirichletCharacter(q1, tuple(comps))
    raise ConstraintError(
        f"moduli {q1} and {q2} are neither coprime nor equal; induce to a common modulus first"
    )


def kronecker_character(d: int) -> DirichletCharacter:
    """The real character n -> (d|n) mod |d| for a fundamental discriminant d.

    d = 1 yields the modulus-1 constant character.
    """
    from .ntheory import is_fundamental_discriminant, kronecker

    if not is_fundamental_discriminant(d):
        raise ConstraintError(f"{d} is not a fundamental discriminant")
    q = abs(d)
    if q == 1:
        return DirichletCharacter(1, ())
    comps = []
    for p, a in factor(q).factors:
        pa = p**a
        cof = q // pa
        # evaluate (d|.) on each generator of the p^a component via CRT lifts
        def crt_lift(r):
            # n = r mod p^a, n = 1 mod cof
            return (r * cof * pow(cof, -1, pa) + pa * pow(pa, -1, cof) * 1) % q if cof > 1 else r

        if p == 2:
            if a == 2:
                comps.append(_TwoComponent(2, (1 - kronecker(d, crt_lift(3))) // 2, 0))
            else:  # a == 3 for fundamental d
                t0 = (1 - kronecker(d, crt_lift(7))) // 2  # 7 = -1 mod 8
                t1 = (1 - kronecker(d, crt_lift(5))) // 2
                comps.append(_TwoComponent(3, t0, t1))
        else:
            g = smallest_primitive_root_mod_pp(p, a)
            m = pa // p * (p - 1)
            v = kronecker(d, crt_lift(g))
            comps.append(_OddComponent(p, a, 0 if v == 1 else m // 2))
    chi = DirichletCharacter(q, tuple(comps))
    assert chi.conductor == q, f"kronecker character mod {q} came out imprimitive"
    return chi


def order_witness(q1: int, q2: int, k: int) -> int:
    """n = a*q2 + 1 < q1*q2 with (psi_q1 * conj(psi_q2))(n) = zeta_k exactly."""
    if q1 == q2:
        raise ConstraintError("witness needs distinct prime moduli")
    g = smallest_primitive_root_mod_pp(q1, 1)
    a = (g - 1) * pow(q2, -1, q1) % q1
    n = a * q2 + 1
    psi = product_character(psi_q(q1, k), psi_q(q2, k).conjugate())
    val = psi.eval(n)
    assert val == RootOfUnity(k, 1), f"witness {n} evaluated to {val}"
    return n


@dataclass(frozen=True)
class CharProps:
    order: int
    parity: int
    conductor: int
    is_primitive: bool


def character_props(chi: DirichletCharacter) -> CharProps:
    return CharProps(
        order=chi.order,
        parity=chi.parity(),
        conductor=chi.conductor,
        is_primitive=chi.is_primitive,
    )
