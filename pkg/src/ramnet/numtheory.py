"""Exact integer arithmetic for the LPS graph constructions.

Everything in this module works over plain Python integers: primality
testing, Legendre symbols, square roots of -1 modulo a prime, the
four-square decompositions that seed the LPS generator sets, canonical
representatives of PSL(2, Z/qZ), and the linear fractional action on the
projective line P^1(F_q).

Points of P^1(F_q) are encoded as integers 0..q, with ``q`` standing for
the point at infinity.
"""

from __future__ import annotations

from math import isqrt
from typing import NamedTuple

__all__ = [
    "is_prime",
    "legendre_symbol",
    "sqrt_minus_one",
    "QuaternionSolution",
    "jacobi_solutions",
    "PslElement",
    "mat_mul_mod",
    "psl_canonicalize",
    "psl_group_elements",
    "lft_apply",
]

# Witnesses making Miller-Rabin deterministic for all n < 3.3e24, which
# covers every 64-bit input.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# sqrt_minus_one is exhaustive; refuse moduli where that stops being sane.
_SQRT_SEARCH_LIMIT = 10**6


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for n < 2**64)."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p.

    Returns 1 if ``a`` is a nonzero quadratic residue mod p, -1 if it is a
    non-residue, and 0 if p divides a.  Uses Euler's criterion.
    """
    if p < 3 or not is_prime(p):
        raise ValueError(f"legendre_symbol requires an odd prime modulus, got p={p}")
    a %= p
    if a == 0:
        return 0
    e = pow(a, (p - 1) // 2, p)
    return 1 if e == 1 else -1


def sqrt_minus_one(q: int) -> int:
    """Smallest positive i with i*i = -1 (mod q), for a prime q = 1 (mod 4).

    The search is exhaustive, which is fine for the moduli this package
    supports (q < 10**6); larger inputs are rejected rather than silently
    taking minutes.
    """
    if not is_prime(q):
        raise ValueError(f"sqrt_minus_one requires a prime modulus, got q={q}")
    if q % 4 != 1:
        raise ValueError(f"-1 is not a quadratic residue mod q={q} (need q = 1 mod 4)")
    if q >= _SQRT_SEARCH_LIMIT:
        raise ValueError(f"q={q} exceeds the exhaustive-search limit {_SQRT_SEARCH_LIMIT}")
    for i in range(2, q):
        if i * i % q == q - 1:
            return i
    raise AssertionError("unreachable: a root of -1 exists for q = 1 mod 4")


class QuaternionSolution(NamedTuple):
    """Integer solution of a0^2 + a1^2 + a2^2 + a3^2 = p in canonical form."""

    a0: int
    a1: int
    a2: int
    a3: int


def _even_values(limit: int) -> range:
    """All even integers v with |v| <= limit, ascending."""
    top = limit - (limit % 2)
    return range(-top, top + 1, 2)


def jacobi_solutions(p: int) -> list[QuaternionSolution]:
    """The p + 1 four-square decompositions that generate an LPS graph.

    For a prime p = 1 (mod 4), enumerates all integer solutions of
    a0^2 + a1^2 + a2^2 + a3^2 = p with a0 odd and positive and a1, a2, a3
    even.  Jacobi's four-square count implies there are exactly p + 1 of
    them.  Returned sorted lexicographically.
    """
    if not is_prime(p):
        raise ValueError(f"jacobi_solutions requires a prime, got p={p}")
    if p % 4 != 1:
        raise ValueError(f"jacobi_solutions requires p = 1 (mod 4), got p={p}")
    out = []
    for a0 in range(1, isqrt(p) + 1, 2):
        r0 = p - a0 * a0
        for a1 in _even_values(isqrt(r0)):
            r1 = r0 - a1 * a1
            for a2 in _even_values(isqrt(r1)):
                r2 = r1 - a2 * a2
                a3 = isqrt(r2)
                if a3 * a3 != r2 or a3 % 2 != 0:
                    continue
                out.append(QuaternionSolution(a0, a1, a2, a3))
                if a3 != 0:
                    out.append(QuaternionSolution(a0, a1, a2, -a3))
    out.sort()
    return out


class PslElement(NamedTuple):
    """Canonical representative of an element of PSL(2, Z/qZ).

    Stored row-major as [[a, b], [c, d]] with entries reduced mod q and the
    projective scaling fixed so the second row is (0, 1) or (1, d).
    """

    a: int
    b: int
    c: int
    d: int


def mat_mul_mod(m1: tuple[int, int, int, int], m2: tuple[int, int, int, int], q: int) -> tuple[int, int, int, int]:
    """2x2 matrix product mod q, row-major (a, b, c, d) tuples."""
    a1, b1, c1, d1 = m1
    a2, b2, c2, d2 = m2
    return (
        (a1 * a2 + b1 * c2) % q,
        (a1 * b2 + b1 * d2) % q,
        (c1 * a2 + d1 * c2) % q,
        (c1 * b2 + d1 * d2) % q,
    )


def psl_canonicalize(a: int, b: int, c: int, d: int, q: int) -> PslElement:
    """Scale a nonsingular matrix mod q to its canonical projective form.

    Two matrices that differ by a nonzero scalar map to the same canonical
    form: divide by c when c != 0 (second row becomes (1, d/c)), else by d
    (second row becomes (0, 1)).
    """
    a, b, c, d = a % q, b % q, c % q, d % q
    if (a * d - b * c) % q == 0:
        raise ValueError("matrix is singular mod q, not a projective group element")
    s = pow(c if c else d, -1, q)
    return PslElement(a * s % q, b * s % q, c * s % q, d * s % q)


def psl_group_elements(q: int) -> list[PslElement]:
    """All elements of PSL(2, Z/qZ) in canonical form, lexicographically sorted.

    Here PSL(2, Z/qZ) means the classes, modulo nonzero scalars, of 2x2
    matrices over Z/qZ whose determinant is a nonzero quadratic residue.
    There are q * (q*q - 1) / 2 of them: the canonical forms with second
    row (0, 1) contribute q * (q-1) / 2 and those with second row (1, d)
    contribute q^2 * (q-1) / 2.
    """
    if not is_prime(q) or q == 2:
        raise ValueError(f"psl_group_elements requires an odd prime, got q={q}")
    residues = sorted({x * x % q for x in range(1, q)})
    out = []
    for a in residues:  # det = a, second row (0, 1)
        for b in range(q):
            out.append(PslElement(a, b, 0, 1))
    for a in range(q):  # det = a*d - b, second row (1, d)
        for d in range(q):
            ad = a * d
            for det in residues:
                out.append(PslElement(a, (ad - det) % q, 1, d))
    out.sort()
    return out


def lft_apply(m: tuple[int, int, int, int], x: int, q: int) -> int:
    """Apply the linear fractional map x -> (a*x + b) / (c*x + d) over P^1(F_q).

    ``x`` is a point of the projective line encoded as 0..q, where q means
    the point at infinity.  Conventions: z/0 = infinity for z != 0, and the
    image of infinity is a/c (or infinity when c = 0).  For a nonsingular
    matrix this map is a bijection of P^1(F_q).
    """
    a, b, c, d = m
    if (a * d - b * c) % q == 0:
        raise ValueError("matrix is singular mod q, map is not a bijection")
    if not 0 <= x <= q:
        raise ValueError(f"x={x} is not a point of P^1(F_{q}) (expected 0..{q})")
    if x == q:
        if c % q == 0:
            return q
        return a * pow(c, -1, q) % q
    num = (a * x + b) % q
    den = (c * x + d) % q
    if den == 0:
        return q
    return num * pow(den, -1, q) % q
