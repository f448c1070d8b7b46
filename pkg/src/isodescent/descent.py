"""Reduction of a finite isometry group to odd residue characteristic.

Pipeline: make the starting lattice group-stable, rescale the form so its
value ideal on the lattice is O, then grow the lattice by the self-correcting
chain S + (pi^-1 S intersect pi S^dual) until it is balanced, meaning
pi S^dual <= S <= S^dual.  A Smith normal form of the inclusion then yields
an adapted basis in which every group element is block lower triangular mod
lambda; the two diagonal blocks act on the two residue quotients, and their
direct sum is the reduced representation rho_bar.  Both quotients carry
induced nondegenerate forms whose kinds follow the scaling-twist bookkeeping
of the forms module; the direct sum of their Gram matrices is the reduced
form f0.

The reduction preserves characteristic polynomials mod lambda, and when
2e < ell - 1 it is also faithful: a finite-order lattice automorphism
congruent to the identity to square order must be the identity (the rigidity
check).  None of this is assumed: descend() recomputes every certificate from
its own output, and a kernel element is accepted only when the rigidity
hypothesis genuinely fails; under a valid hypothesis it is escalated as an
internal inconsistency.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

from . import linalg as la
from .errors import (
    DegenerateForm,
    DimensionMismatch,
    GroupTooLarge,
    HypothesisViolated,
    InternalInconsistency,
    KindMismatch,
    NoInvolution,
    NotFiniteOrder,
    NotStable,
    PreconditionViolated,
)
from .forms import (
    GramForm,
    ResidueForm,
    assemble_f0,
    normalize_scale,
    reduce_bar,
    reduce_tilde,
)
from .lattice import (
    Lattice,
    is_stable,
    lattice_intersect,
    lattice_sum,
    quotient_invariants,
    scale_lattice,
    snf,
    stabilize,
    standard_lattice,
)
from .linalg import charpoly  # re-exported: callers compute charpolys through here

DEFAULT_GROUP_CAP = 100000
DEFAULT_ORDER_CAP = 4096


def _mat_key(m):
    return tuple(tuple(row) for row in m)


class GroupRep:
    """Finite matrix group over K preserving a fixed form.

    The closure is enumerated breadth first over products with the
    generators (identity first, generator order fixed), so the element list
    is deterministic.  Every element is checked against the isometry
    equation; exceeding the cap raises GroupTooLarge.
    """

    def __init__(self, field, generators, form: GramForm, cap: int = DEFAULT_GROUP_CAP):
        self.field = field
        self.form = form
        self.generators = [la.mat_copy(g) for g in generators]
        self.dim = form.dim
        if form.field != field:
            raise DimensionMismatch("form and group live over different fields")
        for g in self.generators:
            if len(g) != self.dim or any(len(r) != self.dim for r in g):
                raise DimensionMismatch("generator does not match the form dimension")
            # checking generators first keeps a bad input from blowing up the
            # closure enumeration below (non-isometries need not have finite order)
            if not form.is_isometry(g):
                raise PreconditionViolated("a generator does not preserve the form")
        ident = la.identity(field, self.dim)
        out = [ident]
        seen = {_mat_key(ident)}
        queue = deque([ident])
        while queue:
            m = queue.popleft()
            for g in self.generators:
                p = la.mat_mul(m, g)
                k = _mat_key(p)
                if k not in seen:
                    if len(out) >= cap:
                        raise GroupTooLarge(
                            f"group closure exceeded the cap of {cap} elements")
                    seen.add(k)
                    out.append(p)
                    queue.append(p)
        self.elements = out
        for m in self.elements:
            if not form.is_isometry(m):
                raise PreconditionViolated("a group element does not preserve the form")

    @property
    def order(self) -> int:
        return len(self.elements)


@dataclass
class BalanceResult:
    """The balanced lattice T with its dual, the rescaled form, the scale
    exponent m applied to f (the stored form is pi^m times the input), the
    chain length j, and the elementary divisor exponents of T inside its
    dual (all 0 or 1 once balanced)."""
    lattice: Lattice
    dual: Lattice
    form: GramForm
    scale_power: int
    steps: int
    invariants: list


def balance(lat: Lattice, form: GramForm, generators=(), max_steps: int = 10000) -> BalanceResult:
    """Grow the lattice until pi * dual <= lattice <= dual.

    The input lattice must already be stable under the given matrices (use
    stabilize() first); stability of every chain lattice is re-checked, not
    assumed.  The returned form is the input rescaled so its value ideal on
    the final lattice is exactly O.
    """
    field = lat.field
    if generators and not is_stable(lat, generators):
        raise NotStable("starting lattice is not stable under the group")
    scale_power, form = normalize_scale(form, lat)
    steps = 0
    while True:
        dual = form.dual(lat)
        if not dual.contains_lattice(lat):
            raise InternalInconsistency("scaled form is not integral on the chain lattice")
        pdual = scale_lattice(field.pi_power(1), dual)
        if lat.contains_lattice(pdual):
            break
        grown = lattice_sum(
            lat,
            lattice_intersect(scale_lattice(field.pi_power(-1), lat), pdual))
        steps += 1
        if steps > max_steps:
            raise InternalInconsistency("balancing chain failed to terminate")
        if grown == lat:
            raise InternalInconsistency("balancing chain stalled before the fixpoint")
        if generators and not is_stable(grown, generators):
            raise NotStable("chain lattice lost stability; input data is inconsistent")
        lat = grown
    invariants = quotient_invariants(lat, dual)
    if any(a not in (0, 1) for a in invariants):
        raise InternalInconsistency("balanced lattice has a non-binary invariant")
    return BalanceResult(lat, dual, form, scale_power, steps, invariants)


def rigidity_check(mat, lat: Lattice, desc=None, max_order: int = DEFAULT_ORDER_CAP) -> dict:
    """Certify the forced-identity statement for one finite-order matrix.

    Requires: the matrix stabilizes the lattice (NotStable), has finite order
    (NotFiniteOrder), and the field satisfies 2e < ell - 1
    (HypothesisViolated).  If (M - 1)^2 lands in lambda times the lattice
    endomorphism ring the identity is forced and that is verified directly;
    disagreement would falsify the implementation, not the statement, and
    raises InternalInconsistency.  If the square condition fails the result
    simply reports that nothing is forced.
    """
    field = lat.field
    if desc is not None and desc != field:
        raise PreconditionViolated("descriptor does not match the lattice's field")
    n = len(mat)
    ident = la.identity(field, n)
    conj_to_lat = lambda m: la.mat_mul(lat._basis_inv, la.mat_mul(m, lat.basis))
    on_lat = conj_to_lat(mat)
    if any(x.valuation() < 0 for row in on_lat for x in row):
        raise NotStable("matrix does not stabilize the lattice")
    power = mat
    order = 1
    while not la.mat_eq(power, ident):
        power = la.mat_mul(power, mat)
        order += 1
        if order > max_order:
            raise NotFiniteOrder(f"no power up to {max_order} equals the identity")
    if not field.two_e_ok:
        raise HypothesisViolated(
            "2e >= ell - 1: the forced-identity statement does not apply")
    am1 = la.mat_sub(mat, ident)
    sq_on_lat = conj_to_lat(la.mat_mul(am1, am1))
    square_condition = all(x.valuation() >= 1 for row in sq_on_lat for x in row)
    is_id = la.mat_eq(mat, ident)
    if square_condition and not is_id:
        raise InternalInconsistency(
            "square condition and hypothesis hold for a non-identity matrix; "
            "the input data is inconsistent")
    return {
        "order": order,
        "square_condition": square_condition,
        "is_identity_forced": square_condition,
        "is_identity": is_id,
    }


@dataclass
class DescentResult:
    """Everything descend() produced, with enough data to recompute every
    certificate: the balanced lattice pair in adapted bases, the reduced
    representation on all group elements (aligned with rep.elements), the
    reduced form and its two diagonal blocks, and both charpoly tables."""
    descriptor: object
    rep: object
    group_order: int
    kernel_size: int
    image_order: int
    lattice_basis: list
    dual_basis: list
    scale_power: int
    chain_steps: int
    invariant_exps: list
    block_dims: tuple
    block_kinds: tuple
    rho_bar: list
    f0: object
    f0_gram: list
    f0_blocks: list
    charpoly_table_K: list
    charpoly_table_k: list
    certificates: dict
    charpoly_classes: list
    kernel_explanations: list


def _reduce_matrix(m):
    return [[x.reduce() for x in row] for row in m]


def descend(rep: GroupRep, start: Lattice | None = None) -> DescentResult:
    """Run the full reduction and recompute every certificate from scratch."""
    field = rep.field
    form = rep.form
    n = rep.dim

    if start is None:
        start = standard_lattice(field, n)
    start = stabilize(start, rep.generators)
    bal = balance(start, form, generators=rep.generators)
    lat, dual, f2 = bal.lattice, bal.dual, bal.form

    trans = dual.transition_from(lat)
    res = snf(trans, field)
    exps = res.exps
    if len(exps) != n or any(a not in (0, 1) for a in exps):
        raise InternalInconsistency("inclusion of the balanced lattice is not binary")
    w = sum(exps)
    s = n - w

    basis_star = la.mat_mul(dual.basis, res.u_inv)
    basis_lat = la.mat_mul(lat.basis, res.v)
    star_inv = la.mat_inv(basis_star, field)
    kfield = field.residue_field

    def reduced_action(m):
        p = la.mat_mul(star_inv, la.mat_mul(m, basis_star))
        pbar = _reduce_matrix(p)
        zero = kfield.zero
        for i in range(w):
            for j in range(w, n):
                if pbar[i][j] != zero:
                    raise InternalInconsistency(
                        "reduced action is not block lower triangular")
        lower = [[pbar[w + i][w + j] for j in range(s)] for i in range(s)]
        upper = [[pbar[i][j] for j in range(w)] for i in range(w)]
        return la.block_diag(kfield, [lower, upper])

    # reduced form: first block from the lattice quotient, second (carrying
    # one extra uniformizer factor) from the dual quotient
    adapted_lat = Lattice(field, basis_lat)
    adapted_dual = Lattice(field, basis_star)
    bar_full, bar_kernel = reduce_bar(adapted_lat, f2, dual=adapted_dual)
    tilde_full, tilde_kernel = reduce_tilde(adapted_lat, f2, dual=adapted_dual)
    if len(bar_kernel) != w or len(tilde_kernel) != s:
        raise InternalInconsistency(
            "residue kernels disagree with the elementary divisor count")
    gram_lat = bar_full.gram
    gram_dual = tilde_full.gram
    kz = kfield.zero
    for i in range(n):
        for j in range(n):
            if not ((i >= w and j >= w) or gram_lat[i][j] == kz):
                raise InternalInconsistency("first residue gram has mass off its block")
            if not ((i < w and j < w) or gram_dual[i][j] == kz):
                raise InternalInconsistency("second residue gram has mass off its block")
    bar_block = [[gram_lat[w + i][w + j] for j in range(s)] for i in range(s)]
    tilde_block = [[gram_dual[i][j] for j in range(w)] for i in range(w)]
    f0_gram = la.block_diag(kfield, [bar_block, tilde_block])
    kind_bar, kind_tilde = f2.reduced_kind_pair()

    conj_residue = None
    if (kind_bar, kind_tilde) == ("hermitian", "hermitian"):
        conj_residue = field.residue_involution

    kind_correct = True
    f0 = None
    f0_blocks = []
    try:
        bar_part = ResidueForm(kfield, bar_block, kind_bar, conj=conj_residue)
        tilde_part = ResidueForm(kfield, tilde_block, kind_tilde, conj=conj_residue)
        f0 = assemble_f0(bar_part, tilde_part)
        f0_blocks = [b for b in f0.blocks if b.dim > 0]
    except (KindMismatch, DegenerateForm, NoInvolution):
        kind_correct = False

    def conj_t(m):
        if conj_residue is None:
            return la.transpose(m)
        return la.conj_transpose(m, conj_residue)

    rho_bar = [reduced_action(m) for m in rep.elements]

    for p in rho_bar:
        if not la.mat_eq(la.mat_mul(conj_t(p), la.mat_mul(f0_gram, p)), f0_gram):
            kind_correct = False

    ident_k = la.identity(kfield, n)
    kernel = [i for i, p in enumerate(rho_bar) if la.mat_eq(p, ident_k)]
    faithful = len(kernel) == 1
    image_order = len({_mat_key(p) for p in rho_bar})

    charpoly_ok = True
    classes = Counter()
    charpoly_table_K = []
    charpoly_table_k = []
    for m, p in zip(rep.elements, rho_bar):
        cp_K = charpoly(m, field)
        cp_red = [c.reduce() for c in cp_K]
        cp_psi = charpoly(p, kfield)
        charpoly_table_K.append(cp_K)
        charpoly_table_k.append(cp_psi)
        if len(cp_red) != len(cp_psi) or any(a != b for a, b in zip(cp_red, cp_psi)):
            charpoly_ok = False
        classes[tuple(tuple(c.coeffs) for c in cp_psi)] += 1

    f0_nondeg = la.det(f0_gram, kfield) != kfield.zero

    # every kernel element must be explained by a failure of the rigidity
    # hypothesis; with the hypothesis intact the check itself escalates
    kernel_explanations = []
    for idx in kernel:
        if idx == 0:
            continue
        g = rep.elements[idx]
        try:
            out = rigidity_check(g, dual)
            raise InternalInconsistency(
                "kernel element passed the rigidity check without forcing: "
                f"{out}")
        except HypothesisViolated:
            kernel_explanations.append(
                {"element_index": idx, "explained_by": "hypothesis_failure"})

    certificates = {
        "faithful": faithful,
        "charpoly_preserved": charpoly_ok,
        "f0_nondegenerate": f0_nondeg,
        "kind_correct": kind_correct,
        "hypothesis_2e_lt_ell_minus_1": field.two_e_ok,
    }

    return DescentResult(
        descriptor=field,
        rep=rep,
        group_order=rep.order,
        kernel_size=len(kernel),
        image_order=image_order,
        lattice_basis=basis_lat,
        dual_basis=basis_star,
        scale_power=bal.scale_power,
        chain_steps=bal.steps,
        invariant_exps=exps,
        block_dims=(s, w),
        block_kinds=(kind_bar, kind_tilde),
        rho_bar=rho_bar,
        f0=f0,
        f0_gram=f0_gram,
        f0_blocks=f0_blocks,
        charpoly_table_K=charpoly_table_K,
        charpoly_table_k=charpoly_table_k,
        certificates=certificates,
        charpoly_classes=sorted(classes.items()),
        kernel_explanations=kernel_explanations,
    )
