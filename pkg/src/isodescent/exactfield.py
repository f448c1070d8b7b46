"""Exact subfields of cyclotomic fields with one certified prime over ell.

The ambient field K = Q(zeta_n)^H is cut out of the n-th cyclotomic field by
a subgroup H of the units mod n.  A descriptor fixes one prime above an odd
prime ell (chosen among the Galois-orbit classes of irreducible factors of
the prime-to-ell cyclotomic part), certifies a uniformizer for it, and
carries the residue-field data needed to reduce integral elements.  Elements
are exact (Fraction coefficients on the power basis of zeta_n); valuations
and residues are certified through a finite-precision completion model that
retries at doubled precision until a digit certificate appears, so no answer
depends on floating point or on unproven precision heuristics.

An optional involution is the restriction of zeta -> zeta^s for a unit s
with s^2 in H and s not in H; its fixed field L has index 2 in K.  The
chosen prime must not split over L: descriptors with a splitting involution
are rejected, since then the completion carries no involution at all.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .cyclotomic import CycloRing, euler_phi
from .errors import (
    InternalInconsistency,
    InvalidDescriptor,
    NegativeValuation,
    NoInvolution,
)
from .finitefield import (
    ResidueField,
    cyclotomic_factors_mod,
    fp_is_irreducible,
    fp_kernel,
    fp_solve,
)
from .localring import LambdaEngine

MAX_PRECISION_EXP = 4096


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _product_set(xs, ys, n):
    return {(x * y) % n for x in xs for y in ys}


def _cyclic_closure(seed, extra, n):
    """Subgroup generated by the subgroup `seed` and one extra unit."""
    out = set(seed)
    power = extra % n
    while power not in out:
        out |= {(power * x) % n for x in seed}
        power = (power * extra) % n
    return out


class FieldElement:
    """One element of K, exact, with memoized certification results.

    Construct through FieldDescriptor.element (which checks membership in the
    H-fixed subfield); direct construction skips that check and is reserved
    for arithmetic, where closure under the field operations guarantees it.
    """

    __slots__ = ("field", "coeffs", "_val", "_res", "_img")

    def __init__(self, field: "FieldDescriptor", coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)
        self._val = None
        self._res = None
        self._img = None

    # -- coercion ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InvalidDescriptor("cannot mix elements of different field descriptors")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, self.field.ring.from_rational(Fraction(other)))
        return None

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.ring.add(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.ring.sub(self.coeffs, o.coeffs))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.ring.sub(o.coeffs, self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.field.ring.mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return FieldElement(self.field, self.field.ring.neg(self.coeffs))

    def __pow__(self, exp: int):
        if not isinstance(exp, int):
            return NotImplemented
        base = self.inverse() if exp < 0 else self
        exp = abs(exp)
        out = self.field.one
        cur = base
        while exp:
            if exp & 1:
                out = out * cur
            cur = cur * cur
            exp >>= 1
        return out

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.ring.inv(self.coeffs))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.key, self.coeffs))

    def __repr__(self):
        return f"FieldElement({list(self.coeffs)!r})"

    # -- certified queries ----------------------------------------------

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def valuation(self):
        """Certified valuation at the chosen prime (math.inf for zero)."""
        if self._val is not None:
            return self._val
        if self.is_zero:
            self._val = math.inf
            return self._val
        field = self.field
        ints, den = field.ring.integerize(self.coeffs)
        t = 0
        d = den
        while d % field.ell == 0:
            d //= field.ell
            t += 1
        prec = field.precision_start
        while True:
            out = field.engine.analyze(ints, prec)
            if out is not None:
                break
            prec *= 2
            if prec > MAX_PRECISION_EXP:
                raise InternalInconsistency(
                    "valuation did not certify below the precision ceiling")
        self._img = (prec, field.engine.image_of(ints, prec))
        vlam, _res = out
        if vlam % field.e_rel:
            raise InternalInconsistency(
                "completion valuation of a field element is not a multiple "
                "of the relative ramification index")
        self._val = vlam // field.e_rel - field.e * t
        return self._val

    def reduce(self):
        """Image in the residue field; requires valuation >= 0."""
        if self._res is not None:
            return self._res
        field = self.field
        v = self.valuation()
        if v == math.inf:
            self._res = field.residue_field.zero
            return self._res
        if v < 0:
            raise NegativeValuation(
                f"element has valuation {v}; only integral elements reduce")
        ints, den = field.ring.integerize(self.coeffs)
        t = 0
        d2 = den
        while d2 % field.ell == 0:
            d2 //= field.ell
            t += 1
        prec = max(field.precision_start, t + 2)
        rc = field.engine.residue_after_ell_divisions(ints, t, prec)
        x = field._residue_from_big(rc)
        if d2 % field.ell != 1:
            x = x * pow(d2 % field.ell, -1, field.ell)
        self._res = x
        return self._res

    def conjugate(self) -> "FieldElement":
        """Image under the involution of the descriptor."""
        field = self.field
        if field.involution is None:
            raise NoInvolution("field descriptor carries no involution")
        return FieldElement(field, field.ring.galois(self.coeffs, field.involution))

    def serialize(self) -> list[str]:
        return [str(c) for c in self.coeffs]


class FieldDescriptor:
    """K = Q(zeta_n)^H together with one certified prime above ell.

    Do not instantiate directly; use make_descriptor, which performs all the
    arithmetic validation and certifies the uniformizer.
    """

    def __init__(self):
        # attributes are filled in by make_descriptor
        self.pi = None
        self._pi_powers = {}
        self._one = None
        self._zero = None

    # -- identity ------------------------------------------------------

    @property
    def key(self):
        return (self.n, self.ell, self.subgroup, self.prime_choice, self.involution)

    def __eq__(self, other):
        if not isinstance(other, FieldDescriptor):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        inv = f", involution={self.involution}" if self.involution is not None else ""
        return (f"FieldDescriptor(n={self.n}, ell={self.ell}, "
                f"subgroup={list(self.subgroup)}, prime_choice={self.prime_choice}{inv})")

    # -- element constructors -------------------------------------------

    def _is_fixed(self, coeffs) -> bool:
        for h in self.subgroup:
            if h % self.n == 1 % self.n:
                continue
            if self.ring.galois(coeffs, h) != tuple(coeffs):
                return False
        return True

    def element(self, coeffs) -> FieldElement:
        """Validating constructor: coefficients on the power basis of zeta_n.

        Accepts ints, Fractions, or strings like "2/3"; shorter vectors are
        zero-padded.  Raises InvalidDescriptor when the element is not fixed
        by the subgroup (i.e. does not lie in K).
        """
        if isinstance(coeffs, FieldElement):
            if coeffs.field != self:
                raise InvalidDescriptor("element belongs to a different field descriptor")
            return coeffs
        vals = [Fraction(c) for c in coeffs]
        if len(vals) > self.degree_full:
            raise InvalidDescriptor(
                f"expected at most {self.degree_full} coefficients, got {len(vals)}")
        vals += [Fraction(0)] * (self.degree_full - len(vals))
        vec = self.ring.vector(vals)
        if not self._is_fixed(vec):
            raise InvalidDescriptor(
                "coefficient vector is not fixed by the subgroup; not an element of K")
        return FieldElement(self, vec)

    def rational(self, q) -> FieldElement:
        return FieldElement(self, self.ring.from_rational(Fraction(q)))

    def zeta_power(self, j: int) -> FieldElement:
        """zeta_n^j when it lies in K (validated)."""
        return self.element(list(self.ring.zeta_power(j % self.n)))

    def orbit_sum(self, j: int) -> FieldElement:
        """Sum of zeta_n^(j*h) over the subgroup; always lies in K."""
        acc = self.ring.zero
        for h in self.subgroup:
            acc = self.ring.add(acc, self.ring.zeta_power((j * h) % self.n))
        return FieldElement(self, acc)

    @property
    def one(self) -> FieldElement:
        if self._one is None:
            self._one = self.rational(1)
        return self._one

    @property
    def zero(self) -> FieldElement:
        if self._zero is None:
            self._zero = self.rational(0)
        return self._zero

    def pi_power(self, j: int) -> FieldElement:
        """pi^j with a cache (negative powers allowed)."""
        if j in self._pi_powers:
            return self._pi_powers[j]
        val = self.pi ** j
        self._pi_powers[j] = val
        return val

    # -- residue data ----------------------------------------------------

    def _residue_from_big(self, rcoords):
        """Convert completion-residue coordinates into the abstract residue field."""
        if self._embed_identity:
            return self.residue_field.element(list(rcoords))
        sol = fp_solve([list(r) for r in self._embed_rows], list(rcoords), self.ell)
        if sol is None:
            raise InternalInconsistency(
                "residue of a field element fell outside the residue field")
        return self.residue_field.element(sol)

    def embed_residue(self, x):
        """Embedding of the abstract residue field into the completion residue field."""
        acc = self.residue_field_big.zero
        p = self.residue_field_big.one
        for c in x.coeffs:
            acc = acc + p * int(c)
            p = p * self.theta
        return acc

    def residue_involution(self, x):
        """Involution induced on the residue field (identity in the ramified case)."""
        if self.involution is None:
            raise NoInvolution("field descriptor carries no involution")
        if self.involution_type == "ramified":
            return x
        return x.frobenius(self.f_half)

    # -- reporting -------------------------------------------------------

    def describe(self) -> dict:
        return {
            "n": self.n,
            "ell": self.ell,
            "subgroup": list(self.subgroup),
            "prime_choice": self.prime_choice,
            "n_primes": self.n_primes,
            "degree": self.degree,
            "ramification_index": self.e,
            "residue_degree": self.f,
            "residue_order": self.ell**self.f,
            "involution": self.involution,
            "involution_type": self.involution_type,
            "uniformizer": self.pi.serialize(),
            "hypothesis_2e_lt_ell_minus_1": self.two_e_ok,
        }


# ----------------------------------------------------------------------
# descriptor construction


def make_descriptor(n: int, ell: int, subgroup=(1,), prime_choice: int = 0,
                    involution=None, precision_start: int = 32) -> FieldDescriptor:
    """Build and fully certify a field descriptor.

    subgroup lists units mod n generating K as their fixed field (it must
    already be multiplicatively closed); prime_choice indexes the primes
    above ell in K, ordered by the smallest index of an irreducible factor
    in their orbit class (factors sorted by coefficient tuple); involution
    is a unit s mod n with s not in the subgroup and s^2 in it, or None.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidDescriptor("conductor must be a positive integer")
    if not isinstance(ell, int) or ell < 3 or ell % 2 == 0 or not _is_prime(ell):
        raise InvalidDescriptor("residue characteristic must be an odd prime")
    if not isinstance(precision_start, int) or precision_start < 2:
        raise InvalidDescriptor("starting precision must be an integer >= 2")

    if n == 1:
        units = {1}
        sub = {1}
        hs = set(int(h) for h in subgroup) if subgroup else {1}
        if hs - {0, 1}:
            raise InvalidDescriptor("subgroup entries must be units mod n")
    else:
        units = {t for t in range(1, n) if math.gcd(t, n) == 1}
        sub = {int(h) % n for h in subgroup} | {1}
        if not sub <= units:
            raise InvalidDescriptor("subgroup entries must be units mod n")
        for h1 in sub:
            for h2 in sub:
                if (h1 * h2) % n not in sub:
                    raise InvalidDescriptor("subgroup is not multiplicatively closed")
    H = tuple(sorted(sub))

    s_norm = None
    if involution is not None:
        if n == 1:
            raise InvalidDescriptor("the rational field admits no involution")
        s = int(involution) % n
        if s not in units:
            raise InvalidDescriptor("involution must be a unit mod n")
        if s in sub:
            raise InvalidDescriptor("involution acts trivially on K")
        if (s * s) % n not in sub:
            raise InvalidDescriptor("involution must square into the subgroup")
        # normalize to the smallest representative of the coset s*H
        s_norm = min((s * h) % n for h in sub)

    a = 0
    m = n
    while m % ell == 0:
        m //= ell
        a += 1
    e_full = euler_phi(ell**a)
    phi_n = euler_phi(n)

    factors = cyclotomic_factors_mod(ell, m)
    f_full = len(factors[0][0]) - 1
    if any(len(p) - 1 != f_full for p, _ in factors):
        raise InternalInconsistency("cyclotomic factors of unequal degree")

    # decomposition data from the subgroup lattice
    one_mod_m = 1 % m if m > 1 else 0
    inertia = {t for t in units if t % m == one_mod_m} if n > 1 else {1}
    if a >= 1 and n > 1:
        la = ell**a
        if m == 1:
            frob_lift = 1 % n if n > 1 else 1
        else:
            g_, x_, y_ = LambdaEngine._ext_gcd(m, la)
            assert g_ == 1
            # t = ell mod m, 1 mod ell^a
            frob_lift = (ell * (y_ % m) * la + 1 * (x_ % la) * m) % n
            assert frob_lift % m == ell % m and frob_lift % la == 1
    else:
        frob_lift = ell % n if n > 1 else 1
    decomp = _cyclic_closure(inertia, frob_lift, n) if n > 1 else {1}

    HI = _product_set(sub, inertia, n) if n > 1 else {1}
    HD = _product_set(sub, decomp, n) if n > 1 else {1}
    e = len(HI) // len(sub)
    f = len(HD) // len(HI)
    g_count = len(units) // len(HD)
    e_rel = len(sub & inertia)
    if e * e_rel != e_full:
        raise InternalInconsistency("ramification indices do not multiply up")
    f_rel = len(sub & decomp) // max(len(sub & inertia), 1)
    if f * f_rel != f_full:
        raise InternalInconsistency("residue degrees do not multiply up")

    # orbit classes of factors under the subgroup = primes of K above ell
    exp_to_idx = {}
    for idx, (_poly, orbit) in enumerate(factors):
        for ex in orbit:
            exp_to_idx[ex] = idx

    def factor_image(idx: int, t: int) -> int:
        ex = next(iter(factors[idx][1]))
        return exp_to_idx[(ex * t) % m] if m > 1 else 0

    reps = {}
    for idx in range(len(factors)):
        reps[idx] = min(factor_image(idx, h) for h in H)
    classes = sorted(set(reps.values()))
    n_primes = len(classes)
    if n_primes != g_count:
        raise InternalInconsistency("factor orbit count disagrees with the group count")
    if not isinstance(prime_choice, int) or not (0 <= prime_choice < n_primes):
        raise InvalidDescriptor(
            f"prime_choice must lie in [0, {n_primes}) for this field and ell")
    chosen_idx = classes[prime_choice]
    chosen_factor = factors[chosen_idx][0]

    # involution type at the chosen prime
    involution_type = None
    f_half = None
    HL = None
    if s_norm is not None:
        HL = tuple(sorted(sub | {(s_norm * h) % n for h in sub}))
        HLset = set(HL)
        HLI = _product_set(HLset, inertia, n)
        HLD = _product_set(HLset, decomp, n)
        e_L = len(HLI) // len(HLset)
        f_L = len(HLD) // len(HLI)
        fixes_prime = reps.get(factor_image(chosen_idx, s_norm)) == reps[chosen_idx] \
            if m > 1 else True
        if e == 2 * e_L and f == f_L:
            involution_type = "ramified"
            f_half = f
        elif e == e_L and f == 2 * f_L:
            involution_type = "unramified"
            f_half = f_L
        elif e == e_L and f == f_L:
            if fixes_prime:
                raise InternalInconsistency("split prime with a fixed factor orbit")
            raise InvalidDescriptor(
                "the involution splits the chosen prime; the completion carries "
                "no involution there (pick another prime or drop the involution)")
        else:
            raise InternalInconsistency("impossible involution ramification pattern")
        if involution_type is not None and m > 1 and not fixes_prime:
            raise InternalInconsistency("non-split involution moved the factor orbit")

    desc = FieldDescriptor()
    desc.n = n
    desc.ell = ell
    desc.subgroup = H
    desc.prime_choice = prime_choice
    desc.involution = s_norm
    desc.precision_start = precision_start
    desc.a = a
    desc.m = m
    desc.e_full = e_full
    desc.f_full = f_full
    desc.e = e
    desc.f = f
    desc.e_rel = e_rel
    desc.f_rel = f_rel
    desc.n_primes = n_primes
    desc.degree_full = phi_n
    desc.degree = phi_n // len(H)
    desc.factor = chosen_factor
    desc.involution_type = involution_type
    desc.f_half = f_half
    desc.subgroup_L = HL
    desc.two_e_ok = 2 * e < ell - 1
    desc.ring = CycloRing(n)
    desc.engine = LambdaEngine(n, ell, chosen_factor)
    assert desc.engine.e_full == e_full and desc.engine.f_full == f_full

    # residue fields: big = completion residue field, small = residue field of K
    desc.residue_field_big = ResidueField(ell, chosen_factor)
    if f == f_full:
        desc.residue_field = desc.residue_field_big
        desc.theta = desc.residue_field_big.gen
        desc._embed_identity = True
        desc._embed_rows = None
    else:
        desc._embed_identity = False
        _build_residue_subfield(desc)

    _certify_uniformizer(desc)
    return desc


def _build_residue_subfield(desc: FieldDescriptor):
    """Find the fixed field of Frobenius^f inside the completion residue field."""
    ell, f, f_full = desc.ell, desc.f, desc.f_full
    big = desc.residue_field_big
    q_power = ell**f
    rows = [[0] * f_full for _ in range(f_full)]
    for c in range(f_full):
        basis_vec = [0] * f_full
        basis_vec[c] = 1
        img = big.element(basis_vec) ** q_power
        for r in range(f_full):
            rows[r][c] = int(img.coeffs[r]) if r < len(img.coeffs) else 0
        rows[c][c] = (rows[c][c] - 1) % ell
    kern = fp_kernel(rows, ell)
    if len(kern) != f:
        raise InternalInconsistency(
            "fixed space of the residue Frobenius has the wrong dimension")
    kern_elts = [big.element(v) for v in kern]

    found = None
    for counter in range(1, ell**f):
        digits = []
        cc = counter
        for _ in range(f):
            digits.append(cc % ell)
            cc //= ell
        theta = big.zero
        for d, w in zip(digits, kern_elts):
            if d:
                theta = theta + w * d
        powers = []
        p = big.one
        for _ in range(f + 1):
            powers.append([int(p.coeffs[i]) if i < len(p.coeffs) else 0
                           for i in range(f_full)])
            p = p * theta
        rank_rows = powers[:f]
        rank = f_full - len(fp_kernel(rank_rows, ell))
        if rank == f:
            found = (theta, powers)
            break
    if found is None:
        raise InternalInconsistency("no generator found for the residue subfield")
    theta, powers = found
    emb_rows = [[powers[i][r] for i in range(f)] for r in range(f_full)]
    sol = fp_solve([row[:] for row in emb_rows], powers[f], ell)
    if sol is None:
        raise InternalInconsistency("residue subfield minimal polynomial solve failed")
    h_min = tuple((-sol[i]) % ell for i in range(f)) + (1,)
    if not fp_is_irreducible(h_min, ell):
        raise InternalInconsistency("residue subfield minimal polynomial is reducible")
    desc.residue_field = ResidueField(ell, h_min)
    desc.theta = theta
    desc._embed_rows = emb_rows


# ----------------------------------------------------------------------
# uniformizer certification


def _uniformizer_candidates(desc: FieldDescriptor, trace_group):
    """Yield H-fixed candidate elements, cheapest first."""
    ring = desc.ring
    n, m = desc.n, desc.m
    if desc.e == 1:
        yield desc.rational(desc.ell)
        return
    # all remaining candidates need actual ramification
    base = ring.sub(ring.from_rational(Fraction(1)), ring.zeta_power(m % n))
    if all((h * m) % n == m % n for h in trace_group):
        yield FieldElement(desc, base)
    power = base
    for s_exp in (1, 2, 3):
        if s_exp > 1:
            power = ring.mul(power, base)
        for shift in range(min(n, 24)):
            y = ring.mul(ring.zeta_power(shift), power)
            acc = ring.zero
            for h in trace_group:
                acc = ring.add(acc, ring.galois(y, h))
            yield FieldElement(desc, acc)


def _first_valuation_one(desc: FieldDescriptor, candidates):
    """Certify candidates, adjusting by powers of ell when the valuation allows."""
    for x in candidates:
        if x.is_zero:
            continue
        if not desc._is_fixed(x.coeffs):
            raise InternalInconsistency("uniformizer candidate left the field")
        v = x.valuation()
        if v == 1:
            yield x
        elif v != math.inf and v > 1 and (v - 1) % desc.e == 0:
            adj = x / desc.rational(desc.ell ** ((v - 1) // desc.e))
            if adj.valuation() == 1:
                yield adj


def _certify_uniformizer(desc: FieldDescriptor):
    if desc.involution is None:
        for x in _first_valuation_one(desc, _uniformizer_candidates(desc, desc.subgroup)):
            desc.pi = x
            break
    elif desc.involution_type == "unramified":
        # search inside L so the uniformizer is conjugation-fixed
        for x in _first_valuation_one(
                desc, _uniformizer_candidates(desc, desc.subgroup_L)):
            if x.conjugate() != x:
                raise InternalInconsistency("trace over the L-group is not conjugation-fixed")
            desc.pi = x
            break
    else:
        # ramified: want an anti-fixed uniformizer (conjugate = -pi)
        for w in _first_valuation_one(desc, _uniformizer_candidates(desc, desc.subgroup)):
            sw = w.conjugate()
            if sw == -w:
                desc.pi = w
                break
            cand = (w - sw) / desc.rational(2)
            if not cand.is_zero and cand.valuation() == 1:
                desc.pi = cand
                break
    if desc.pi is None:
        raise InvalidDescriptor(
            "could not certify a uniformizer from the built-in candidate family")
    if desc.involution is not None:
        sp = desc.pi.conjugate()
        if desc.involution_type == "ramified" and sp != -desc.pi:
            raise InternalInconsistency("ramified uniformizer is not anti-fixed")
        if desc.involution_type == "unramified" and sp != desc.pi:
            raise InternalInconsistency("unramified uniformizer is not fixed")
    desc._pi_powers = {0: desc.one, 1: desc.pi}


def with_uniformizer(desc: FieldDescriptor, pi_new: FieldElement) -> FieldDescriptor:
    """Copy of the descriptor using the supplied uniformizer.

    The element must have valuation 1 and satisfy the same symmetry contract
    as the built-in one (anti-fixed for ramified involutions, fixed for
    unramified ones).  The copy compares equal to the original, so elements
    built against either interoperate.
    """
    if not isinstance(pi_new, FieldElement) or pi_new.field != desc:
        raise InvalidDescriptor("uniformizer must be an element of the same field")
    if pi_new.valuation() != 1:
        raise InvalidDescriptor(
            f"proposed uniformizer has valuation {pi_new.valuation()}, expected 1")
    if desc.involution is not None:
        sp = pi_new.conjugate()
        if desc.involution_type == "ramified" and sp != -pi_new:
            raise InvalidDescriptor(
                "ramified descriptors need an anti-fixed uniformizer (conjugate = -pi)")
        if desc.involution_type == "unramified" and sp != pi_new:
            raise InvalidDescriptor(
                "unramified descriptors need a conjugation-fixed uniformizer")
    clone = FieldDescriptor()
    clone.__dict__.update(desc.__dict__)
    clone.pi = FieldElement(clone, pi_new.coeffs)
    clone._pi_powers = {0: clone.one, 1: clone.pi}
    clone._one = None
    clone._zero = None
    return clone


# ----------------------------------------------------------------------
# module-level operation names


def valuation(x: FieldElement):
    """Certified valuation of x at the descriptor's prime; math.inf for zero."""
    return x.valuation()


def reduce(x: FieldElement):
    """Residue-field image of an integral element."""
    return x.reduce()


def apply_involution(x: FieldElement) -> FieldElement:
    """The descriptor's involution applied to x."""
    return x.conjugate()
