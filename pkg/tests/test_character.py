"""Exact character arithmetic: tables, orders, conductors, ids."""

from __future__ import annotations

import math

import numpy as np
import pytest

from chx.character import (
    RootOfUnity,
    all_characters,
    character_from_components,
    character_from_id,
    character_from_index,
    character_props,
    kronecker_character,
    order_k_characters,
    order_witness,
    principal_character,
    product_character,
    psi_q,
)
from chx.errors import ConstraintError
from chx.ntheory import factor, kronecker, sieve_primes


def test_root_of_unity_lowest_terms():
    assert RootOfUnity(6, 2) == RootOfUnity(3, 1)
    assert RootOfUnity(8, 6) == RootOfUnity(4, 3)
    assert (RootOfUnity(3, 1) * RootOfUnity(3, 2)) == RootOfUnity.one()
    assert RootOfUnity(4, 1) ** 2 == RootOfUnity(2, 1)
    assert RootOfUnity(5, 2).conjugate() == RootOfUnity(5, 3)
    z = RootOfUnity.zero()
    assert z.is_zero and (z * RootOfUnity(3, 1)).is_zero


def test_root_of_unity_as_int():
    assert RootOfUnity.one().as_int() == 1
    assert RootOfUnity(2, 1).as_int() == -1
    assert RootOfUnity.zero().as_int() == 0
    with pytest.raises(ConstraintError):
        RootOfUnity(3, 1).as_int()


def test_root_of_unity_to_complex():
    z = RootOfUnity(8, 3).to_complex()
    assert abs(z - complex(math.cos(3 * math.pi / 4), math.sin(3 * math.pi / 4))) < 1e-15


def _table_props(chi):
    q = chi.modulus
    vals = chi.value_table()
    assert vals.shape == (q,)
    for n in range(q):
        if math.gcd(n, q) != 1:
            assert vals[n] == 0
    # complete multiplicativity on units
    for a in range(1, min(q, 30)):
        for b in range(1, min(q, 30)):
            if math.gcd(a, q) == 1 and math.gcd(b, q) == 1:
                assert abs(vals[a * b % q] - vals[a] * vals[b]) < 1e-12


def test_value_table_multiplicative():
    for q in (3, 4, 5, 8, 9, 12, 16, 21, 40, 45):
        for chi in all_characters(q):
            _table_props(chi)


def test_order_matches_brute_force():
    for q in (5, 8, 9, 13, 16, 21, 36, 40):
        for chi in all_characters(q):
            e = 1
            psi = chi
            while not psi.is_principal:
                psi = psi * chi
                e += 1
            assert chi.order == e


def test_conductor_matches_induction_scan():
    # oracle: the conductor is the least f | q such that chi is trivial on
    # units n = 1 mod f
    for q in (5, 8, 9, 12, 16, 24, 45, 60, 72):
        for chi in all_characters(q):
            vals = chi.value_table()
            f_oracle = None
            for f in sorted(factor(q).divisors()):
                # chi induced from modulus f iff trivial on units = 1 mod f
                if all(
                    abs(vals[n % q] - 1) < 1e-12
                    for n in range(1, q + 1)
                    if math.gcd(n, q) == 1 and n % f == 1 % f
                ):
                    f_oracle = f
                    break
            assert chi.conductor == f_oracle
            assert chi.is_primitive == (f_oracle == q)


def test_all_characters_complete():
    for q in (3, 4, 8, 9, 15, 16, 24, 35):
        chars = list(all_characters(q))
        phi = factor(q).euler_phi()
        assert len(chars) == phi
        assert len({c.char_id for c in chars}) == phi
        assert sum(1 for c in chars if c.is_principal) == 1


def test_char_id_roundtrip():
    for q in (4, 9, 13, 40, 56, 105):
        for chi in all_characters(q):
            again = character_from_id(chi.char_id)
            assert again == chi
            assert again.char_id == chi.char_id


def test_char_id_rejects_garbage():
    for bad in ("", "q=;comps=", "q=10;comps=2:1", "nonsense"):
        with pytest.raises(ValueError):
            character_from_id(bad)


def test_character_from_index_and_order():
    chi = character_from_index(13, 4)
    assert chi.order == 3 and chi.modulus == 13
    assert character_from_index(13, 0).is_principal
    with pytest.raises(ValueError):
        character_from_index(13, 13)
    with pytest.raises(ValueError):
        character_from_index(10, 1)


def test_character_from_components():
    chi = character_from_components(45, {9: 1, 5: 2})  # keyed by prime power
    assert chi.modulus == 45
    assert chi == character_from_id(chi.char_id)
    with pytest.raises(ValueError):
        character_from_components(45, {9: 1})  # missing the 5-part


def test_kronecker_character_agrees_with_symbol():
    for d in (-84, -43, -20, -8, -7, -4, -3, 5, 8, 12, 13, 21, 40, 73):
        chi = kronecker_character(d)
        assert chi.modulus == abs(d)
        assert chi.order == (2 if d != 1 else 1)
        assert chi.is_primitive
        assert chi.parity() == (1 if d > 0 else -1)
        vals = chi.value_table()
        for n in range(1, abs(d) + 1):
            assert abs(vals[n % abs(d)] - kronecker(d, n)) < 1e-12
    with pytest.raises(ValueError):
        kronecker_character(15)  # not a fundamental discriminant


def test_principal_character():
    chi = principal_character(12)
    assert chi.is_principal and chi.order == 1 and chi.conductor == 1
    assert principal_character(1).modulus == 1
    assert principal_character(1).eval(0) == RootOfUnity.one()


def test_order_k_characters_counts():
    def phi(k):
        return sum(1 for a in range(1, k + 1) if math.gcd(a, k) == 1)

    for q, k in ((13, 3), (13, 4), (29, 7), (31, 5), (41, 8)):
        chars = order_k_characters(q, k)
        assert len(chars) == phi(k)
        assert all(c.order == k for c in chars)
        assert len({c.char_id for c in chars}) == len(chars)


def test_psi_q_is_order_k():
    for q, k in ((13, 3), (29, 4), (31, 6)):
        chi = psi_q(q, k)
        assert chi.order == k and chi.is_primitive and chi.modulus == q


def test_product_and_conjugate():
    a = character_from_index(13, 4)
    b = kronecker_character(-3)
    prod = product_character(a, b)
    assert prod.modulus == 39
    va, vb, vp = a.value_table(), b.value_table(), prod.value_table()
    for n in range(39):
        assert abs(vp[n] - va[n % 13] * vb[n % 3]) < 1e-12
    conj = a.conjugate()
    assert np.allclose(conj.value_table(), np.conj(va))
    assert (a * conj).is_principal
    assert (a**3).is_principal and not (a**2).is_principal


def test_parity_is_sign_at_minus_one():
    for q in (5, 8, 13, 21, 40):
        for chi in all_characters(q):
            assert chi.parity() == chi.eval(q - 1).as_int()


def test_eval_exact_vs_table():
    chi = character_from_index(17, 3)
    vals = chi.value_table()
    for n in range(40):
        r = chi.eval(n)
        want = vals[n % 17]
        assert abs((0 if r.is_zero else r.to_complex()) - want) < 1e-12


def test_order_witness_exact():
    rng = np.random.default_rng(7)
    ps = [int(p) for p in sieve_primes(2000).primes]
    for k in (2, 3, 4, 6):
        pool = [p for p in ps if p % k == 1]
        for _ in range(10):
            i, j = rng.choice(len(pool), size=2, replace=False)
            q1, q2 = sorted((pool[i], pool[j]))
            psi1, psi2 = psi_q(q1, k), psi_q(q2, k)
            tilde = product_character(psi1, psi2.conjugate())
            n = order_witness(q1, q2, k)
            assert n % q1 != 0 and n % q2 != 0
            assert tilde.eval(n) == RootOfUnity(k, 1)


def test_character_props_record():
    props = character_props(character_from_index(13, 4))
    assert props.order == 3 and props.conductor == 13
    assert props.is_primitive and props.parity == 1
