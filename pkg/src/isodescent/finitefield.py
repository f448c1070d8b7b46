"""Finite fields F_{p^f} presented as F_p[y]/(h), with deterministic constructions.

Everything here is deterministic: irreducible moduli come from a lexicographic
search, and the factorization of a cyclotomic residue is computed from root
orbits over an explicitly constructed extension, so repeated runs agree bit
for bit.
"""

from __future__ import annotations

import math


# ---------------------------------------------------------------------------
# polynomials over F_p: tuples of ints in [0, p), ascending degree, no
# trailing zeros (the zero polynomial is the empty tuple)

def fp_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def fp_add(a, b, p):
    n = max(len(a), len(b))
    return fp_trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)])


def fp_sub(a, b, p):
    n = max(len(a), len(b))
    return fp_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def fp_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return fp_trim(out)


def fp_divmod(a, b, p):
    a = list(a)
    if not b:
        raise ZeroDivisionError
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    for i in range(len(q) - 1, -1, -1):
        c = (a[i + len(b) - 1] * inv_lead) % p
        q[i] = c
        if c:
            for j, d in enumerate(b):
                a[i + j] = (a[i + j] - c * d) % p
    return fp_trim(q), fp_trim(a[: len(b) - 1])


def fp_mod(a, b, p):
    return fp_divmod(a, b, p)[1]


def fp_gcd(a, b, p):
    while b:
        a, b = b, fp_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = tuple((c * inv) % p for c in a)
    return a


def fp_powmod(base, e, modulus, p):
    result = (1,)
    base = fp_mod(base, modulus, p)
    while e:
        if e & 1:
            result = fp_mod(fp_mul(result, base, p), modulus, p)
        base = fp_mod(fp_mul(base, base, p), modulus, p)
        e >>= 1
    return result


def fp_eval(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def _prime_factors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def fp_is_irreducible(h, p) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    d = len(h) - 1
    if d < 1:
        return False
    x = (0, 1)
    if fp_powmod(x, p ** d, h, p) != fp_mod(x, h, p):
        return False
    for r in _prime_factors(d):
        g = fp_sub(fp_powmod(x, p ** (d // r), h, p), x, p)
        if len(fp_gcd(g, h, p)) != 1:
            return False
    return True


def find_irreducible(p: int, d: int) -> tuple[int, ...]:
    """First monic irreducible of degree d over F_p in lexicographic coefficient order."""
    if d == 1:
        return (0, 1)
    counter = 0
    while True:
        coeffs, c = [], counter
        for _ in range(d):
            coeffs.append(c % p)
            c //= p
        h = tuple(coeffs) + (1,)
        if fp_is_irreducible(h, p):
            return h
        counter += 1
        if counter >= p ** d:
            raise AssertionError("irreducible search exhausted")


class ResidueField:
    """F_{p^f} = F_p[y]/(h) with h monic irreducible of degree f."""

    def __init__(self, p: int, modulus):
        self.p = p
        self.modulus = tuple(int(c) % p for c in modulus)
        assert self.modulus[-1] == 1, "modulus must be monic"
        self.degree = len(self.modulus) - 1
        self.order = p ** self.degree

    def element(self, coeffs) -> "ResidueElement":
        if isinstance(coeffs, ResidueElement):
            assert coeffs.field == self
            return coeffs
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        v = [int(c) % self.p for c in coeffs]
        if len(v) > self.degree:
            v = list(fp_mod(tuple(v), self.modulus, self.p))
        v += [0] * (self.degree - len(v))
        return ResidueElement(self, tuple(v))

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    @property
    def gen(self):
        return self.element((0, 1))

    def elements(self):
        """All field elements in lexicographic coefficient order."""
        for idx in range(self.order):
            coeffs, c = [], idx
            for _ in range(self.degree):
                coeffs.append(c % self.p)
                c //= self.p
            yield ResidueElement(self, tuple(coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, ResidueField)
            and self.p == other.p
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"ResidueField(p={self.p}, f={self.degree})"


class ResidueElement:
    """Element of a ResidueField; immutable and hashable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: ResidueField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _like(self, other):
        if isinstance(other, int):
            return self.field.element(other)
        if isinstance(other, ResidueElement) and other.field == self.field:
            return other
        return None

    def __add__(self, other):
        o = self._like(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return ResidueElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._like(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        return ResidueElement(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._like(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        p = self.field.p
        return ResidueElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        o = self._like(other)
        if o is None:
            return NotImplemented
        F = self.field
        prod = fp_mod(fp_mul(fp_trim(self.coeffs), fp_trim(o.coeffs), F.p), F.modulus, F.p)
        return F.element(prod)

    __rmul__ = __mul__

    def inverse(self):
        F = self.field
        a = fp_trim(self.coeffs)
        if not a:
            raise ZeroDivisionError("inverse of zero residue")
        # extended Euclid in F_p[y]
        r0, r1 = F.modulus, a
        s0, s1 = (), (1,)
        while r1:
            q, r = fp_divmod(r0, r1, F.p)
            s_next = fp_sub(s0, fp_mul(q, s1, F.p), F.p)
            r0, r1 = r1, r
            s0, s1 = s1, s_next
        assert len(r0) == 1
        c = pow(r0[0], -1, F.p)
        return F.element(fp_mul(s0, (c,), F.p))

    def __truediv__(self, other):
        o = self._like(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._like(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self, k: int = 1):
        """x -> x^(p^k)."""
        return self ** (self.field.p ** k)

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def multiplicative_order(self):
        if self.is_zero():
            raise ZeroDivisionError("order of zero")
        n = self.field.order - 1
        order = n
        for q in _prime_factors(n):
            while order % q == 0 and (self ** (order // q)) == self.field.one:
                order //= q
        return order

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        return (
            isinstance(other, ResidueElement)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def __repr__(self):
        return f"FF{self.coeffs}@{self.field.p}^{self.field.degree}"


def multiplicative_order_mod(t: int, m: int) -> int:
    if m == 1:
        return 1
    assert math.gcd(t, m) == 1
    k, cur = 1, t % m
    while cur != 1 % m:
        cur = (cur * t) % m
        k += 1
    return k


def cyclotomic_factors_mod(ell: int, m: int):
    """Irreducible factors of the residue mod ell of the m-th cyclotomic polynomial
    (requires gcd(m, ell) = 1).

    Returns a list of (poly, orbit) pairs sorted by ascending coefficient tuple,
    where poly is a monic irreducible tuple over F_ell and orbit is the frozenset
    of exponents j in (Z/m)^* whose roots zeta_m^j the factor kills.  All factors
    share the same degree, the multiplicative order of ell mod m.
    """
    assert math.gcd(m, ell) == 1
    if m == 1:
        return [(((ell - 1) % ell, 1), frozenset({0}))]
    d = multiplicative_order_mod(ell, m)
    Fq = ResidueField(ell, find_irreducible(ell, d))
    # deterministic primitive m-th root of unity in Fq
    cofactor = (Fq.order - 1) // m
    xi = None
    for c in Fq.elements():
        if c.is_zero():
            continue
        eta = c ** cofactor
        if not eta.is_zero() and eta.multiplicative_order() == m:
            xi = eta
            break
    assert xi is not None, "no primitive root found"
    units = [j for j in range(1, m) if math.gcd(j, m) == 1]
    seen, factors = set(), []
    for j in units:
        if j in seen:
            continue
        orbit = []
        cur = j
        while cur not in orbit:
            orbit.append(cur)
            cur = (cur * ell) % m
        seen.update(orbit)
        # minimal polynomial of xi^j: prod over the orbit of (x - xi^i)
        poly = [Fq.one]
        for i in orbit:
            root = xi ** i
            nxt = [Fq.zero] * (len(poly) + 1)
            for k, c in enumerate(poly):
                nxt[k + 1] = nxt[k + 1] + c
                nxt[k] = nxt[k] - c * root
            poly = nxt
        coeffs = []
        for c in poly:
            assert all(v == 0 for v in c.coeffs[1:]), "factor coefficient not in the prime field"
            coeffs.append(c.coeffs[0])
        factors.append((tuple(coeffs), frozenset(orbit)))
    factors.sort(key=lambda fo: fo[0])
    return factors


# ---------------------------------------------------------------------------
# small dense linear algebra over F_p with plain ints (used for residue-field
# bookkeeping inside descriptors; generic object-level linear algebra for
# matrices over ResidueField lives in linalg)

def fp_kernel(rows: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the right kernel of the matrix over F_p."""
    nr, nc = len(rows), len(rows[0]) if rows else 0
    a = [[v % p for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(v * inv) % p for v in a[r]]
        for i in range(nr):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(v - f * w) % p for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * nc
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = (-a[i][fc]) % p
        basis.append(vec)
    return basis


def fp_solve(rows: list[list[int]], rhs: list[int], p: int):
    """One solution of rows*x = rhs over F_p, or None if inconsistent."""
    nr, nc = len(rows), len(rows[0]) if rows else 0
    aug = [list(r) + [b % p] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if aug[i][c] % p), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [(v * inv) % p for v in aug[r]]
        for i in range(nr):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(v - f * w) % p for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    for i in range(r, nr):
        if aug[i][nc] % p:
            return None
    x = [0] * nc
    for i, c in enumerate(pivots):
        x[c] = aug[i][nc]
    return x
