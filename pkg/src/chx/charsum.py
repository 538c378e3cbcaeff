"""Character-sum maxima M(chi), the half-sum identity, and the bridges
from M(chi) to L-values."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .character import DirichletCharacter, kronecker_character, product_character
from .errors import ConstraintError
from .lfunction import gauss_sum, l1_exact

_EPS = float(np.finfo(np.float64).eps)

# log log q ratios are meaningless for tiny moduli; suppressed below this
_RATIO_MIN_MODULUS = 16

CSV_COLUMNS = (
    "char_id",
    "q",
    "order",
    "parity",
    "M",
    "argmax",
    "L1_abs",
    "ratio_odd",
    "ratio_even",
)


@dataclass(frozen=True)
class MsumRecord:
    """Scan result for one character: the maximum partial sum and friends.

    ratio_odd  = M*pi/(sqrt(q)*loglog q)        -- target e^gamma for odd chi
    ratio_even = M*pi*sqrt(3)/(sqrt(q)*loglog q) -- target e^gamma for even chi
    Both are None for q < 16. prefix_error_bound is the cumulative roundoff
    budget q*eps of the prefix scan.
    """

    char_id: str
    q: int
    order: int
    parity: int
    M: float
    argmax: int
    half_sum: complex
    prefix_error_bound: float
    ratio_odd: Optional[float]
    ratio_even: Optional[float]


def max_partial_sum(chi: DirichletCharacter) -> MsumRecord:
    """Exact scan of one period: M = max_{1<=x<=q} |sum_{n<=x} chi(n)|.

    Ties broken by the smallest maximizer. The period-sum check
    |prefix(q)| ~ 0 guards against table corruption.
    """
    if chi.is_principal:
        raise ConstraintError(
            "M(chi) is undefined for principal characters (linear growth)"
        )
    q = chi.modulus
    vals = chi.value_table()
    prefix = np.cumsum(vals)  # prefix[x] = sum_{n<=x} chi(n), since chi(0) = 0
    mags = np.abs(prefix)
    i = int(np.argmax(mags))  # mags[0] = 0, so i >= 1 is the smallest argmax
    assert abs(prefix[-1]) <= 1e-6 * max(1.0, math.sqrt(q)), "period sum not ~0"
    half = complex(
        math.fsum(vals[1 : q // 2 + 1].real), math.fsum(vals[1 : q // 2 + 1].imag)
    )
    ratio_odd = ratio_even = None
    if q >= _RATIO_MIN_MODULUS:
        norm = math.sqrt(q) * math.log(math.log(q))
        ratio_odd = float(mags[i]) * math.pi / norm
        ratio_even = float(mags[i]) * math.pi * math.sqrt(3.0) / norm
    return MsumRecord(
        char_id=chi.char_id,
        q=q,
        order=chi.order,
        parity=chi.parity(),
        M=float(mags[i]),
        argmax=i,
        half_sum=half,
        prefix_error_bound=q * _EPS,
        ratio_odd=ratio_odd,
        ratio_even=ratio_even,
    )


@dataclass(frozen=True)
class HalfSumCheck:
    char_id: str
    lhs: complex
    rhs: complex
    abs_diff: float


def half_sum_check(chi: DirichletCharacter) -> HalfSumCheck:
    """sum_{n<=q/2} chi(n) = (2 - conj(chi)(2)) tau(chi)/(i pi) * conj(L(1,chi))
    for odd primitive chi of odd modulus; both sides computed independently.
    """
    if chi.parity() != -1:
        raise ConstraintError("half-sum identity requires an odd character")
    if not chi.is_primitive:
        raise ConstraintError("half-sum identity requires a primitive character")
    if chi.modulus % 2 == 0:
        raise ConstraintError("half-sum identity tested on odd moduli only")
    lhs = max_partial_sum(chi).half_sum
    tau = gauss_sum(chi)
    l1 = l1_exact(chi).value
    chi2 = chi.eval(2).to_complex().conjugate()
    rhs = (2.0 - chi2) * tau / (1j * math.pi) * l1.conjugate()
    return HalfSumCheck(chi.char_id, lhs, rhs, abs(lhs - rhs))


@dataclass(frozen=True)
class BridgeRecord:
    char_id: str
    bound_kind: str  # "odd" or "even"
    lhs: float  # M(chi)
    rhs: float  # the proven lower bound on M(chi)
    violated: bool

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


_BRIDGE_SLACK = 1e-9


def bridge_bounds(chi: DirichletCharacter) -> BridgeRecord:
    """Lower bounds for M(chi) in terms of L-values, for even-order chi.

    odd chi:  M(chi) >= (sqrt(q)/pi) |L(1, chi)|
    even chi: M(chi) >= (sqrt(3q)/(2 pi)) |L(1, chi * (./3))|, needs 3 ∤ q
    """
    if chi.order % 2 != 0:
        raise ConstraintError("bridge bounds require a character of even order")
    if not chi.is_primitive:
        raise ConstraintError("bridge bounds require a primitive character")
    q = chi.modulus
    M = max_partial_sum(chi).M
    if chi.parity() == -1:
        rhs = math.sqrt(q) / math.pi * abs(l1_exact(chi).value)
        kind = "odd"
    else:
        if q % 3 == 0:
            raise ConstraintError(
                "even-parity bridge needs 3 coprime to the modulus"
            )
        twisted = product_character(chi, kronecker_character(-3))
        assert twisted.is_primitive and twisted.parity() == -1
        rhs = math.sqrt(3 * q) / (2 * math.pi) * abs(l1_exact(twisted).value)
        kind = "even"
    return BridgeRecord(chi.char_id, kind, M, rhs, violated=M < rhs - _BRIDGE_SLACK)
