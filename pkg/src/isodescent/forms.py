"""Nondegenerate sesquilinear forms over K and over residue fields.

Convention used throughout: f(x, y) = conj(x)^T A y, with the involution (if
any) applied to the first argument; bilinear kinds use no involution at all.
A matrix M is an isometry when conj(M)^T A M = A.

Scaling bookkeeping: for a hermitian form over a ramified involution the
uniformizer is anti-fixed, so multiplying the Gram matrix by pi flips the
hermitian axiom's sign.  The `twist` field counts those flips mod 2; the
reduced-form kinds are read off it (even twist reduces the first residue
form to a symmetric one and the second to an alternating one, odd twist
swaps them, because the residue involution is trivial in the ramified case).
Unramified involutions use a conjugation-fixed uniformizer, so both reduced
forms stay hermitian, and bilinear kinds are preserved verbatim.
"""

from __future__ import annotations

import math

from . import linalg as la
from .errors import (
    CharTwo,
    DegenerateForm,
    InternalInconsistency,
    KindMismatch,
    NegativeValuation,
    NoInvolution,
    PreconditionViolated,
)
from .lattice import Lattice, dual_lattice, quotient_length, scale_lattice

KINDS = ("symmetric", "alternating", "hermitian")


def _check_shape(gram):
    n = len(gram)
    if any(len(row) != n for row in gram):
        raise KindMismatch("gram matrix must be square")
    return n


class GramForm:
    """A nondegenerate form over K with an explicit kind tag."""

    def __init__(self, field, gram, kind: str, twist: int = 0):
        if kind not in KINDS:
            raise KindMismatch(f"unknown form kind {kind!r}")
        self.field = field
        self.gram = la.mat_copy(gram)
        self.kind = kind
        self.dim = _check_shape(gram)
        if kind == "hermitian":
            if field.involution is None:
                raise NoInvolution("hermitian forms need a field involution")
            self.twist = twist % 2 if field.involution_type == "ramified" else 0
        else:
            self.twist = 0
        self._validate()
        if la.det(self.gram, field) == field.zero:
            raise DegenerateForm("gram matrix is singular")

    # -- structure -------------------------------------------------------

    @property
    def conj(self):
        """Entrywise involution for the first slot; None for bilinear kinds."""
        if self.kind == "hermitian":
            return lambda x: x.conjugate()
        return None

    def _conj_t(self, m):
        c = self.conj
        if c is None:
            return la.transpose(m)
        return la.conj_transpose(m, c)

    def _validate(self):
        a = self.gram
        at = self._conj_t(a)
        if self.kind == "symmetric":
            if not la.mat_eq(at, a):
                raise KindMismatch("gram matrix is not symmetric")
        elif self.kind == "alternating":
            neg = la.scalar_mul(-self.field.one, a)
            if not la.mat_eq(at, neg):
                raise KindMismatch("gram matrix is not skew-symmetric")
            if any(a[i][i] != self.field.zero for i in range(self.dim)):
                raise KindMismatch("alternating gram matrix must have zero diagonal")
        else:
            expect = a if self.twist == 0 else la.scalar_mul(-self.field.one, a)
            if not la.mat_eq(at, expect):
                raise KindMismatch(
                    "gram matrix does not satisfy the (possibly twisted) hermitian axiom")

    # -- evaluation -------------------------------------------------------

    def evaluate(self, x, y):
        c = self.conj
        xs = [c(v) for v in x] if c else list(x)
        acc = self.field.zero
        for i, xi in enumerate(xs):
            row = self.gram[i]
            for j, yj in enumerate(y):
                acc = acc + xi * row[j] * yj
        return acc

    def gram_in_basis(self, b):
        """Gram matrix of the form restricted to the columns of b."""
        return la.mat_mul(self._conj_t(b), la.mat_mul(self.gram, b))

    def is_isometry(self, m) -> bool:
        return la.mat_eq(self.gram_in_basis(m), self.gram)

    def dual(self, lat: Lattice) -> Lattice:
        return dual_lattice(lat, self.gram, self.conj)

    # -- scaling ----------------------------------------------------------

    def scale_by_pi_power(self, j: int) -> "GramForm":
        scaled = la.scalar_mul(self.field.pi_power(j), self.gram)
        return GramForm(self.field, scaled, self.kind, self.twist + j)

    def reduced_kind_pair(self):
        """Kinds of (first, second) residue forms after reduction mod lambda.

        The second residue form carries one extra uniformizer factor, hence
        one extra twist in the ramified hermitian case.
        """
        if self.kind != "hermitian":
            return (self.kind, self.kind)
        if self.field.involution_type == "unramified":
            return ("hermitian", "hermitian")
        first = "symmetric" if self.twist == 0 else "alternating"
        second = "alternating" if self.twist == 0 else "symmetric"
        return (first, second)


def classify_gram(field, gram):
    """Best kind tag for a gram matrix, or None if no kind equation holds.

    Prefers alternating over symmetric over hermitian when several hold.
    """
    n = _check_shape(gram)
    t = la.transpose(gram)
    if la.mat_eq(t, la.scalar_mul(-field.one, gram)) and \
            all(gram[i][i] == field.zero for i in range(n)):
        return "alternating"
    if la.mat_eq(t, gram):
        return "symmetric"
    if field.involution is not None:
        ct = la.conj_transpose(gram, lambda x: x.conjugate())
        if la.mat_eq(ct, gram):
            return "hermitian"
    return None


def normalize_scale(form: GramForm, lat: Lattice):
    """Rescale the form so its value ideal on the lattice is exactly O.

    Returns (m, scaled form) where the scaled form is pi^m times the input:
    m is minus the minimum valuation among gram entries in the lattice basis,
    so the scaled gram has minimum valuation zero.
    """
    g = form.gram_in_basis(lat.basis)
    vals = [x.valuation() for row in g for x in row]
    low = min(vals)
    if low == math.inf:
        raise DegenerateForm("form vanishes on the lattice")
    if low == 0:
        return 0, form
    return -low, form.scale_by_pi_power(-low)


def reduce_gram(field, gram):
    """Entrywise residue of a K-matrix with nonnegative valuations."""
    out = []
    for row in gram:
        try:
            out.append([x.reduce() for x in row])
        except NegativeValuation:
            raise NegativeValuation(
                "gram matrix has a negative-valuation entry; scale first")
    return out


class ResidueForm:
    """A form over a residue field, with the same conventions as GramForm."""

    def __init__(self, rfield, gram, kind: str, conj=None):
        if kind not in KINDS:
            raise KindMismatch(f"unknown form kind {kind!r}")
        if rfield.p == 2:
            raise CharTwo("residue forms need odd characteristic")
        self.rfield = rfield
        self.gram = la.mat_copy(gram)
        self.kind = kind
        self.conj = conj if kind == "hermitian" else None
        if kind == "hermitian" and conj is None:
            raise NoInvolution("hermitian residue forms need a conjugation map")
        self.dim = _check_shape(gram)
        self._validate()

    def _conj_t(self, m):
        if self.conj is None:
            return la.transpose(m)
        return la.conj_transpose(m, self.conj)

    def _validate(self):
        a = self.gram
        at = self._conj_t(a)
        if self.kind == "symmetric":
            if not la.mat_eq(at, a):
                raise KindMismatch("residue gram matrix is not symmetric")
        elif self.kind == "alternating":
            neg = la.scalar_mul(-self.rfield.one, a)
            if not la.mat_eq(at, neg):
                raise KindMismatch("residue gram matrix is not skew-symmetric")
            if any(a[i][i] != self.rfield.zero for i in range(self.dim)):
                raise KindMismatch("alternating residue gram matrix needs zero diagonal")
        else:
            if not la.mat_eq(at, a):
                raise KindMismatch("residue gram matrix is not hermitian")

    def is_nondegenerate(self) -> bool:
        return la.det(self.gram, self.rfield) != self.rfield.zero

    def evaluate(self, x, y):
        xs = [self.conj(v) for v in x] if self.conj else list(x)
        acc = self.rfield.zero
        for i, xi in enumerate(xs):
            row = self.gram[i]
            for j, yj in enumerate(y):
                acc = acc + xi * row[j] * yj
        return acc

    def gram_in_basis(self, b):
        return la.mat_mul(self._conj_t(b), la.mat_mul(self.gram, b))

    def is_isometry(self, m) -> bool:
        return la.mat_eq(self.gram_in_basis(m), self.gram)


def _balanced_pair(lat: Lattice, form: GramForm, dual):
    """Shared precondition checks for the two residue reductions.

    Returns (dual, gram of the form on lat's basis).  Raises unless the
    lattice is balanced and the form takes integral values on it with
    minimum valuation exactly zero.
    """
    field = form.field
    computed = form.dual(lat)
    if dual is None:
        dual = computed
    else:
        if not (dual.contains_lattice(computed) and computed.contains_lattice(dual)):
            raise PreconditionViolated(
                "supplied dual basis does not span the dual lattice")
    pdual = scale_lattice(field.pi_power(1), dual)
    if not dual.contains_lattice(lat) or not lat.contains_lattice(pdual):
        raise PreconditionViolated(
            "lattice is not balanced against the form; run the balance chain")
    g = form.gram_in_basis(lat.basis)
    low = min(x.valuation() for row in g for x in row)
    if low < 0:
        raise PreconditionViolated(
            "form is not integral on the lattice; normalize the scale first")
    if low > 0:
        raise PreconditionViolated(
            "form is not scale-normalized on the lattice (all values divisible by pi)")
    return dual, g


def reduce_bar(lat: Lattice, form: GramForm, dual=None):
    """First residue form: the form itself reduced on lat mod pi.

    The form must take integral values on lat with minimum valuation zero,
    and lat must be balanced (pi*dual inside lat inside dual).  Returns
    (ResidueForm, kernel basis); the kernel dimension equals the length of
    dual/lat, and the form is nondegenerate modulo that kernel.  An optional
    precomputed dual fixes the basis used for the balance check.
    """
    field = form.field
    dual, g = _balanced_pair(lat, form, dual)
    kfield = field.residue_field
    rg = reduce_gram(field, g)
    kind = form.reduced_kind_pair()[0]
    conj = field.residue_involution if kind == "hermitian" else None
    rform = ResidueForm(kfield, rg, kind, conj=conj)
    kernel = la.kernel_basis(rg, kfield)
    if len(kernel) != quotient_length(lat, dual):
        raise InternalInconsistency(
            "kernel dimension disagrees with the index of the lattice in its dual")
    return rform, kernel


def reduce_tilde(lat: Lattice, form: GramForm, dual=None):
    """Second residue form: pi times the form, reduced on the dual mod pi.

    Preconditions as in reduce_bar.  Returns (ResidueForm, kernel basis) on
    the dual lattice's coordinates; the kernel dimension is complementary to
    reduce_bar's, and the form is nondegenerate modulo the kernel.
    """
    field = form.field
    dual, _ = _balanced_pair(lat, form, dual)
    scaled = form.scale_by_pi_power(1)
    g = scaled.gram_in_basis(dual.basis)
    vals = [x.valuation() for row in g for x in row]
    if min(vals) < 0:
        raise InternalInconsistency(
            "pi times the form is not integral on the dual of a balanced lattice")
    kfield = field.residue_field
    rg = reduce_gram(field, g)
    kind = form.reduced_kind_pair()[1]
    conj = field.residue_involution if kind == "hermitian" else None
    rform = ResidueForm(kfield, rg, kind, conj=conj)
    kernel = la.kernel_basis(rg, kfield)
    if len(kernel) != form.dim - quotient_length(lat, dual):
        raise InternalInconsistency(
            "kernel dimensions of the two residue forms are not complementary")
    return rform, kernel


class AssembledForm:
    """Block-diagonal residue form built from the two nondegenerate parts.

    The kind is the common kind when the blocks agree, and the tag
    "product" for the mixed symmetric/alternating pair arising from a
    ramified hermitian input.
    """

    def __init__(self, blocks):
        parts = [b for b in blocks]
        if not parts:
            raise KindMismatch("assembly needs at least one block")
        rfield = parts[0].rfield
        for b in parts:
            if b.rfield != rfield:
                raise KindMismatch("blocks live over different residue fields")
            if not b.is_nondegenerate():
                raise DegenerateForm("assembly blocks must be nondegenerate")
        kinds = tuple(b.kind for b in parts if b.dim > 0)
        uniform = len(set(kinds)) <= 1
        if not uniform and set(kinds) != {"symmetric", "alternating"}:
            raise KindMismatch(
                f"cannot assemble blocks of kinds {kinds}; only the "
                "symmetric/alternating mix is meaningful")
        self.rfield = rfield
        self.blocks = tuple(parts)
        self.dims = tuple(b.dim for b in parts)
        self.kinds = tuple(b.kind for b in parts)
        self.kind = (kinds[0] if kinds and uniform else
                     "product" if kinds else "symmetric")
        self.dim = sum(self.dims)
        self.conj = next((b.conj for b in parts if b.conj is not None), None)
        self.gram = la.block_diag(rfield, [b.gram for b in parts])

    def _conj_t(self, m):
        if self.conj is None:
            return la.transpose(m)
        return la.conj_transpose(m, self.conj)

    def is_nondegenerate(self) -> bool:
        return all(b.is_nondegenerate() for b in self.blocks)

    def gram_in_basis(self, b):
        return la.mat_mul(self._conj_t(b), la.mat_mul(self.gram, b))

    def is_isometry(self, m) -> bool:
        return la.mat_eq(self.gram_in_basis(m), self.gram)


def assemble_f0(bar_part: ResidueForm, tilde_part: ResidueForm) -> AssembledForm:
    """Join the two nondegenerate residue parts into one block form.

    The first block is the nondegenerate part of the first reduction, the
    second that of the pi-scaled one.  Kinds must agree, except for the
    symmetric/alternating pair of the ramified hermitian case.
    """
    return AssembledForm([bar_part, tilde_part])
