"""Exact arithmetic in Q(zeta_n) on the power basis 1, zeta, ..., zeta^(phi(n)-1).

This is the coefficient-level substrate: vectors are plain tuples of Fraction,
with no subfield constraint attached.  Ambient-field elements proper (vectors
fixed by the chosen Galois subgroup, with a designated prime above ell) are
built on top of this in exactfield.

All functions are pure; CycloRing instances only hold precomputed tables.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def euler_phi(n: int) -> int:
    result, k, m = 1, 2, n
    while k * k <= m:
        if m % k == 0:
            pk = 1
            while m % k == 0:
                m //= k
                pk *= k
            result *= pk - pk // k
        k += 1
    if m > 1:
        result *= m - 1
    return result


def divisors(n: int) -> list[int]:
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k != n // k:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def _int_poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    # den is monic up to sign of its leading coefficient; division must be exact.
    num = list(num)
    dlead = den[-1]
    assert dlead in (1, -1)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // dlead
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    assert all(c == 0 for c in num[: len(den) - 1]), "inexact polynomial division"
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (-1, 1)
    p = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in divisors(n):
        if d < n:
            p = _int_poly_div_exact(p, list(cyclotomic_poly(d)))
    return tuple(p)


# ---------------------------------------------------------------------------
# rational polynomial helpers (ascending coefficient lists)

def _q_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _q_divmod(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    inv_lead = 1 / b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] * inv_lead
        q[i] = c
        if c:
            for j, d in enumerate(b):
                a[i + j] -= c * d
    return _q_trim(q), _q_trim(a[: len(b) - 1])


def _q_ext_inverse(a: list[Fraction], modulus: list[Fraction]) -> list[Fraction]:
    """Inverse of a modulo `modulus` in Q[x], by the extended Euclid algorithm."""
    r0, r1 = list(modulus), _q_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _q_divmod(r0, r1)
        # s_next = s0 - q*s1
        prod = [Fraction(0)] * (len(q) + len(s1) - 1) if q and s1 else []
        for i, qa in enumerate(q):
            if qa:
                for j, sb in enumerate(s1):
                    prod[i + j] += qa * sb
        s_next = [Fraction(0)] * max(len(s0), len(prod))
        for i, v in enumerate(s0):
            s_next[i] += v
        for i, v in enumerate(prod):
            s_next[i] -= v
        r0, r1 = r1, r
        s0, s1 = s1, _q_trim(s_next)
    if len(r0) != 1:
        raise ZeroDivisionError("element is a zero divisor modulo the given polynomial")
    c = 1 / r0[0]
    return [v * c for v in s0]


class CycloRing:
    """Tables and coefficient arithmetic for Q(zeta_n)."""

    def __init__(self, n: int):
        self.n = n
        self.phi = euler_phi(n)
        self.modulus = cyclotomic_poly(n)
        self.zeta_pow = self._power_table()
        self.zero = (Fraction(0),) * self.phi
        one = [Fraction(0)] * self.phi
        one[0] = Fraction(1)
        self.one = tuple(one)

    def _power_table(self) -> list[tuple[int, ...]]:
        # zeta^j on the power basis for 0 <= j < n, integer coordinates.
        phi, mod = self.phi, self.modulus
        table = []
        cur = [0] * phi
        cur[0] = 1
        for _ in range(self.n):
            table.append(tuple(cur))
            nxt = [0] + cur[: phi - 1]
            lead = cur[phi - 1]
            if lead:
                for i in range(phi):
                    nxt[i] -= lead * mod[i]
            cur = nxt
        return table

    # -- vector helpers ---------------------------------------------------
    def vector(self, coeffs) -> tuple[Fraction, ...]:
        v = [Fraction(c) for c in coeffs]
        if len(v) > self.phi:
            raise ValueError("coefficient vector longer than the power basis")
        v += [Fraction(0)] * (self.phi - len(v))
        return tuple(v)

    def from_rational(self, q) -> tuple[Fraction, ...]:
        v = [Fraction(0)] * self.phi
        v[0] = Fraction(q)
        return tuple(v)

    def zeta_power(self, j: int) -> tuple[Fraction, ...]:
        return self.vector(self.zeta_pow[j % self.n])

    def add(self, u, v):
        return tuple(a + b for a, b in zip(u, v))

    def sub(self, u, v):
        return tuple(a - b for a, b in zip(u, v))

    def neg(self, u):
        return tuple(-a for a in u)

    def scale(self, u, c):
        c = Fraction(c)
        return tuple(a * c for a in u)

    def mul(self, u, v):
        phi = self.phi
        if phi == 1:
            return (u[0] * v[0],)
        conv = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        conv[i + j] += a * b
        out = list(conv[:phi])
        for k in range(phi, 2 * phi - 1):
            c = conv[k]
            if c:
                for i, z in enumerate(self.zeta_pow[k % self.n]):
                    if z:
                        out[i] += c * z
        return tuple(out)

    def inv(self, u):
        if self.is_zero(u):
            raise ZeroDivisionError("inverse of zero")
        co = _q_ext_inverse(list(u), [Fraction(c) for c in self.modulus])
        return self.vector(co)

    def galois(self, u, t: int):
        """Apply zeta -> zeta^t (t must be prime to n)."""
        if math.gcd(t, self.n) != 1:
            raise ValueError("galois exponent not prime to n")
        out = [Fraction(0)] * self.phi
        for j, c in enumerate(u):
            if c:
                for i, z in enumerate(self.zeta_pow[(j * t) % self.n]):
                    if z:
                        out[i] += c * z
        return tuple(out)

    def is_zero(self, u) -> bool:
        return all(c == 0 for c in u)

    def is_rational(self, u) -> bool:
        return all(c == 0 for c in u[1:])

    def integerize(self, u) -> tuple[tuple[int, ...], int]:
        """Write u = (1/d) * w with w an integer vector, d a positive integer."""
        d = 1
        for c in u:
            d = d * c.denominator // math.gcd(d, c.denominator)
        return tuple(int(c * d) for c in u), d
