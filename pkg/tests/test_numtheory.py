"""Exact-arithmetic checks against brute-force oracles."""

import pytest

from ramnet.numtheory import (
    PslElement,
    is_prime,
    jacobi_solutions,
    legendre_symbol,
    lft_apply,
    mat_mul_mod,
    psl_canonicalize,
    psl_group_elements,
    sqrt_minus_one,
)


def sieve(limit):
    flags = [True] * limit
    flags[0] = flags[1] = False
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            for j in range(i * i, limit, i):
                flags[j] = False
    return [i for i in range(limit) if flags[i]]


PRIMES_UNDER_100 = sieve(100)


def test_is_prime_matches_sieve():
    primes = set(sieve(10_000))
    for n in range(10_000):
        assert is_prime(n) == (n in primes), n


def test_is_prime_large_witnesses():
    # Around the 3x10^3 .. 10^6 range used by the LPS parameter checks.
    assert is_prime(6037)
    assert not is_prime(6035)
    assert is_prime(104729)
    assert not is_prime(104730)


def test_legendre_symbol_matches_qr_tables():
    # Exhaustive quadratic-residue tables for every odd prime below 100.
    for p in PRIMES_UNDER_100:
        if p == 2:
            continue
        residues = {(x * x) % p for x in range(1, p)}
        for a in range(2 * p):
            expected = 0 if a % p == 0 else (1 if a % p in residues else -1)
            assert legendre_symbol(a, p) == expected, (a, p)


def test_legendre_symbol_rejects_bad_modulus():
    with pytest.raises(ValueError):
        legendre_symbol(3, 4)
    with pytest.raises(ValueError):
        legendre_symbol(3, 2)


@pytest.mark.parametrize("q,root", [(5, 2), (13, 5), (17, 4), (29, 12), (41, 9)])
def test_sqrt_minus_one_frozen_values(q, root):
    assert sqrt_minus_one(q) == root
    assert (root * root + 1) % q == 0


def test_sqrt_minus_one_property():
    for q in PRIMES_UNDER_100:
        if q % 4 == 1:
            r = sqrt_minus_one(q)
            assert 0 < r < q
            assert (r * r + 1) % q == 0


def test_sqrt_minus_one_rejects_3_mod_4():
    with pytest.raises(ValueError):
        sqrt_minus_one(7)


@pytest.mark.parametrize("p", [5, 13, 17, 29])
def test_jacobi_solutions_count_and_shape(p):
    sols = jacobi_solutions(p)
    assert len(sols) == p + 1
    assert sols == sorted(sols)
    for s in sols:
        assert s.a0 > 0 and s.a0 % 2 == 1
        assert s.a1 % 2 == s.a2 % 2 == s.a3 % 2 == 0
        assert s.a0**2 + s.a1**2 + s.a2**2 + s.a3**2 == p


def test_jacobi_solutions_p5_frozen():
    sols = jacobi_solutions(5)
    assert [(s.a0, s.a1, s.a2, s.a3) for s in sols] == [
        (1, -2, 0, 0),
        (1, 0, -2, 0),
        (1, 0, 0, -2),
        (1, 0, 0, 2),
        (1, 0, 2, 0),
        (1, 2, 0, 0),
    ]


@pytest.mark.parametrize("p", [5, 13, 17])
def test_jacobi_four_square_count(p):
    # Jacobi's theorem: an odd prime has 8(p+1) representations as an
    # ordered four-square sum over all signs and positions.
    bound = int(p**0.5) + 1
    span = range(-bound, bound + 1)
    total = sum(
        1
        for a in span
        for b in span
        for c in span
        for d in span
        if a * a + b * b + c * c + d * d == p
    )
    assert total == 8 * (p + 1)


def test_jacobi_solutions_closed_under_negation():
    # (a0, a) and (a0, -a) describe a generator and its inverse.
    for p in (5, 13, 17):
        sols = set(jacobi_solutions(p))
        for s in sols:
            assert (s.a0, -s.a1, -s.a2, -s.a3) in {(t.a0, t.a1, t.a2, t.a3) for t in sols}


def test_psl_canonicalize_hand_value():
    assert psl_canonicalize(1, 2, 3, 4, 13) == PslElement(9, 5, 1, 10)


def test_psl_canonicalize_scale_invariance():
    q = 13
    for mat in [(1, 2, 3, 4), (2, 0, 5, 7), (0, 1, 12, 3)]:
        base = psl_canonicalize(*mat, q)
        for s in range(1, q):
            scaled = tuple((s * x) % q for x in mat)
            assert psl_canonicalize(*scaled, q) == base, (mat, s)


def test_psl_canonicalize_rejects_singular():
    with pytest.raises(ValueError):
        psl_canonicalize(1, 2, 2, 4, 13)
    with pytest.raises(ValueError):
        psl_canonicalize(0, 0, 0, 0, 5)


@pytest.mark.parametrize("q,order", [(5, 60), (13, 1092)])
def test_psl_group_order(q, order):
    els = psl_group_elements(q)
    assert len(els) == order
    assert len(set(els)) == order
    assert els == sorted(els)


def test_psl_group_closed_under_multiplication():
    q = 5
    els = set(psl_group_elements(q))
    assert PslElement(1, 0, 0, 1) in els
    for m1 in els:
        for m2 in els:
            prod = mat_mul_mod(m1, m2, q)
            assert psl_canonicalize(*prod, q) in els


def test_lft_composition():
    q = 13
    m1, m2 = (1, 2, 3, 4), (2, 1, 0, 2)
    for x in range(q + 1):
        composed = lft_apply(mat_mul_mod(m1, m2, q), x, q)
        assert composed == lft_apply(m1, lft_apply(m2, x, q), q)


def test_lft_bijective_all_primes_to_97():
    # The acceptance-level sweep: every invertible matrix permutes P^1(F_q).
    for q in PRIMES_UNDER_100:
        if q == 2:
            continue
        mats = [(1, 0, 0, 1), (1, 1, 0, 1), (0, 1, q - 1, 0)]
        # a deterministic spread of invertible matrices
        for t in range(20):
            a, b, c = (t * 7 + 1) % q, (t * 3) % q, (t * 5 + 2) % q
            for d in range(q):
                if (a * d - b * c) % q != 0:
                    mats.append((a, b, c, d))
                    break
        for m in mats:
            image = {lft_apply(m, x, q) for x in range(q + 1)}
            assert image == set(range(q + 1)), (q, m)


def test_lft_infinity_conventions():
    q = 13
    # z -> z + 1 fixes infinity; z -> 1/z swaps 0 and infinity.
    assert lft_apply((1, 1, 0, 1), q, q) == q
    assert lft_apply((0, 1, 1, 0), 0, q) == q
    assert lft_apply((0, 1, 1, 0), q, q) == 0
