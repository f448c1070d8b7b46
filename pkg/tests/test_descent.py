import random

import pytest

from isodescent import linalg as la
from isodescent.counterexamples import build_prop5_bundle
from isodescent.descent import GroupRep, balance, descend, rigidity_check
from isodescent.errors import (
    DimensionMismatch,
    GroupTooLarge,
    HypothesisViolated,
    NotFiniteOrder,
    NotStable,
    PreconditionViolated,
)
from isodescent.exactfield import make_descriptor, with_uniformizer
from isodescent.forms import GramForm
from isodescent.lattice import (
    Lattice,
    is_stable,
    quotient_length,
    scale_lattice,
    stabilize,
    standard_lattice,
)

from conftest import (
    assert_matrix_equal,
    quaternion_rep,
    ramified_pair_rep,
    random_invertible,
    rotation4_rep,
)


def mat_key(m):
    return tuple(tuple(row) for row in m)


def symplectic2(desc):
    one = desc.one
    return [[desc.zero, one], [-one, desc.zero]]


def int_matrix(desc, rows):
    return [[desc.rational(c) for c in row] for row in rows]


def random_signed_permutation(rng, desc, n):
    perm = list(range(n))
    rng.shuffle(perm)
    m = [[desc.zero] * n for _ in range(n)]
    for i, j in enumerate(perm):
        m[i][j] = desc.one if rng.random() < 0.5 else -desc.one
    return m


def random_unimodular(rng, desc, n):
    """Integer matrix of determinant +-1 built from shears and swaps."""
    m = la.identity(desc, n)
    for _ in range(rng.randint(2, 5)):
        i, j = rng.sample(range(n), 2)
        c = desc.rational(rng.randint(-3, 3))
        for r in range(n):
            m[r][i] = m[r][i] + c * m[r][j]
        if rng.random() < 0.3:
            for r in range(n):
                m[r][i], m[r][j] = m[r][j], m[r][i]
    return m


class TestGroupRep:
    def test_closure_orders(self, q8_rep5, z4_rep7, remark4_rep7):
        assert q8_rep5.order == 8
        assert z4_rep7.order == 4
        assert remark4_rep7.order == 16
        assert build_prop5_bundle(5).order == 5

    def test_closure_is_closed_and_faithful(self, q8_rep5):
        keys = {mat_key(m) for m in q8_rep5.elements}
        assert len(keys) == q8_rep5.order
        for a in q8_rep5.elements:
            for b in q8_rep5.elements:
                assert mat_key(la.mat_mul(a, b)) in keys

    def test_identity_comes_first(self, q8_rep5, gauss5):
        assert_matrix_equal(q8_rep5.elements[0], la.identity(gauss5, 2))

    def test_cap_exceeded(self, gauss5):
        f = GramForm(gauss5, symplectic2(gauss5), "alternating")
        gens = [int_matrix(gauss5, [[0, -1], [1, 0]])]
        with pytest.raises(GroupTooLarge):
            GroupRep(gauss5, gens, f, cap=3)

    def test_non_isometry_generator_rejected(self, gauss5):
        f = GramForm(gauss5, symplectic2(gauss5), "alternating")
        with pytest.raises(PreconditionViolated):
            GroupRep(gauss5, [int_matrix(gauss5, [[2, 0], [0, 1]])], f)

    def test_dimension_and_field_mismatch(self, gauss5, gauss13):
        f = GramForm(gauss5, symplectic2(gauss5), "alternating")
        with pytest.raises(DimensionMismatch):
            GroupRep(gauss5, [int_matrix(gauss5, [[1]])], f)
        with pytest.raises(DimensionMismatch):
            GroupRep(gauss13, [la.identity(gauss13, 2)], f)


class TestBalance:
    def test_self_dual_start_is_fixed(self, gauss5):
        f = GramForm(gauss5, symplectic2(gauss5), "alternating")
        lat = standard_lattice(gauss5, 2)
        bal = balance(lat, f)
        assert bal.lattice == lat
        assert bal.steps == 0
        assert bal.scale_power == 0
        assert bal.invariants == [0, 0]

    def test_symplectic_skew_start(self, rat5):
        # basis (1,0),(0,ell): normalizing makes this lattice self-dual
        f = GramForm(rat5, symplectic2(rat5), "alternating")
        five = rat5.rational(5)
        lat = Lattice(rat5, [[rat5.one, rat5.zero], [rat5.zero, five]])
        bal = balance(lat, f)
        assert bal.scale_power == -1
        assert bal.steps == 0
        assert bal.lattice == lat
        assert bal.invariants == [0, 0]
        assert bal.dual == lat

    def test_two_step_chain(self, rat5):
        f = GramForm(rat5, la.identity(rat5, 2), "symmetric")
        lat = Lattice(rat5, int_matrix(rat5, [[1, 0], [0, 25]]))
        dual0 = f.dual(lat)
        bound = quotient_length(lat, dual0)
        bal = balance(lat, f)
        assert bal.steps == 2
        assert bal.steps <= bound
        assert bal.scale_power == 0
        assert bal.lattice == standard_lattice(rat5, 2)
        assert bal.invariants == [0, 0]

    def test_unstable_start_rejected(self, gauss5, q8_rep5):
        lat = Lattice(gauss5, int_matrix(gauss5, [[1, 0], [0, 5]]))
        with pytest.raises(NotStable):
            balance(lat, q8_rep5.form, generators=q8_rep5.generators)

    def test_balanced_outputs_with_generators(self, gauss5, q8_rep5):
        rng = random.Random("balance-gens")
        for _ in range(15):
            start = Lattice(gauss5, random_invertible(rng, gauss5, 2))
            start = stabilize(start, q8_rep5.generators)
            bal = balance(start, q8_rep5.form, generators=q8_rep5.generators)
            t, tstar = bal.lattice, bal.dual
            assert t.contains_lattice(start)
            assert tstar.contains_lattice(t)
            assert t.contains_lattice(scale_lattice(gauss5.pi_power(1), tstar))
            assert all(a in (0, 1) for a in bal.invariants)
            g = bal.form.gram_in_basis(t.basis)
            vals = [x.valuation() for row in g for x in row]
            assert min(vals) == 0
            assert is_stable(t, q8_rep5.generators)


class TestRigidity:
    def test_identity_is_forced(self, rat5):
        lat = standard_lattice(rat5, 2)
        out = rigidity_check(la.identity(rat5, 2), lat)
        assert out["is_identity_forced"] and out["is_identity"]
        assert out["order"] == 1

    def test_minus_identity_not_forced(self, rat5):
        # (A-1)^2 = 4 id has valuation 0 at ell=5, so nothing is forced
        lat = standard_lattice(rat5, 2)
        a = la.scalar_mul(-rat5.one, la.identity(rat5, 2))
        out = rigidity_check(a, lat)
        assert out["order"] == 2
        assert not out["square_condition"]
        assert not out["is_identity_forced"]

    def test_infinite_order_rejected(self, rat5):
        lat = standard_lattice(rat5, 2)
        shear = int_matrix(rat5, [[1, 5], [0, 1]])
        with pytest.raises(NotFiniteOrder):
            rigidity_check(shear, lat, max_order=50)

    def test_unstable_matrix_rejected(self, rat5):
        lat = standard_lattice(rat5, 2)
        bad = [[rat5.one, rat5.rational("1/5")], [rat5.zero, rat5.one]]
        with pytest.raises(NotStable):
            rigidity_check(bad, lat)

    def test_hypothesis_violation_rejected(self, real5):
        lat = standard_lattice(real5, 2)
        with pytest.raises(HypothesisViolated):
            rigidity_check(la.identity(real5, 2), lat)

    def test_descriptor_mismatch_rejected(self, rat5, gauss5):
        lat = standard_lattice(rat5, 2)
        with pytest.raises(PreconditionViolated):
            rigidity_check(la.identity(rat5, 2), lat, desc=gauss5)

    def test_random_finite_order_suite(self, rat5):
        rng = random.Random("rigidity-mini")
        for trial in range(60):
            n = rng.choice([2, 3])
            if trial % 10 == 0:
                a = la.identity(rat5, n)
            else:
                p = random_signed_permutation(rng, rat5, n)
                u = random_unimodular(rng, rat5, n)
                a = la.mat_mul(u, la.mat_mul(p, la.mat_inv(u, rat5)))
            out = rigidity_check(a, standard_lattice(rat5, n))
            if out["is_identity_forced"]:
                assert out["is_identity"]


class TestCharpoly:
    def test_identity_four(self, gauss5):
        cp = la.charpoly(la.identity(gauss5, 4), gauss5)
        expected = [gauss5.rational(c) for c in (1, -4, 6, -4, 1)]
        assert cp == expected

    def test_companion_matrix(self, rat5):
        # companion of t^3 - 2t + 7 reproduces its own coefficients
        m = int_matrix(rat5, [[0, 0, -7], [1, 0, 2], [0, 1, 0]])
        cp = la.charpoly(m, rat5)
        assert cp == [rat5.rational(c) for c in (7, -2, 0, 1)]

    def test_matches_cofactor_expansion_over_residue_field(self):
        k = make_descriptor(1, 7).residue_field

        def polymul(a, b):
            out = [k.zero] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    out[i + j] = out[i + j] + x * y
            return out

        def polyadd(a, b):
            n = max(len(a), len(b))
            a = a + [k.zero] * (n - len(a))
            b = b + [k.zero] * (n - len(b))
            return [x + y for x, y in zip(a, b)]

        def polydet(m):
            if len(m) == 1:
                return m[0][0]
            acc = [k.zero]
            for j in range(len(m)):
                minor = [row[:j] + row[j + 1:] for row in m[1:]]
                term = polymul(m[0][j], polydet(minor))
                if j % 2 == 1:
                    term = [-c for c in term]
                acc = polyadd(acc, term)
            return acc

        rng = random.Random("charpoly-oracle")
        for _ in range(20):
            m = [[k.element(rng.randrange(7)) for _ in range(3)] for _ in range(3)]
            entries = [[[-m[i][j]] if i != j else [-m[i][j], k.one]
                        for j in range(3)] for i in range(3)]
            brute = polydet(entries)
            brute = brute + [k.zero] * (4 - len(brute))
            assert la.charpoly(m, k) == brute


def element_index_map(rep):
    return {mat_key(m): i for i, m in enumerate(rep.elements)}


@pytest.fixture(scope="module")
def q8_res5(q8_rep5):
    return descend(q8_rep5)


@pytest.fixture(scope="module")
def z4_res7(z4_rep7):
    return descend(z4_rep7)


@pytest.fixture(scope="module")
def remark4_res7(remark4_rep7):
    return descend(remark4_rep7)


class TestDescend:
    def test_quaternion_split_prime(self, q8_res5, gauss5):
        res = q8_res5
        assert res.certificates == {
            "faithful": True,
            "charpoly_preserved": True,
            "f0_nondegenerate": True,
            "kind_correct": True,
            "hypothesis_2e_lt_ell_minus_1": True,
        }
        assert res.block_dims == (2, 0)
        assert res.block_kinds == ("alternating", "alternating")
        assert res.image_order == 8
        assert res.kernel_size == 1
        assert res.scale_power == 0
        assert res.chain_steps == 0
        assert res.invariant_exps == [0, 0]
        k = gauss5.residue_field
        assert_matrix_equal(res.f0_gram, [[k.zero, k.one], [k.element(4), k.zero]])
        assert res.f0.kind == "alternating"

    def test_quaternion_charpoly_census(self, q8_res5, gauss5):
        res = q8_res5
        k = gauss5.residue_field

        def key(ints):
            return tuple(tuple(k.element(c).coeffs) for c in ints)

        counts = dict(res.charpoly_classes)
        assert counts[key([1, 0, 1])] == 6      # t^2 + 1
        assert counts[key([1, 2, 1])] == 1      # (t + 1)^2
        assert counts[key([1, -2, 1])] == 1     # (t - 1)^2
        assert sum(counts.values()) == 8

    def test_quaternion_other_split_prime(self, q8_rep13):
        res = descend(q8_rep13)
        assert all(res.certificates.values())
        assert res.block_dims == (2, 0)
        assert res.block_kinds == ("alternating", "alternating")

    def test_rotation_inert_prime_hermitian(self, z4_res7, gauss7):
        res = z4_res7
        assert all(res.certificates.values())
        assert res.block_dims == (1, 0)
        assert res.block_kinds == ("hermitian", "hermitian")
        assert res.image_order == 4
        k = gauss7.residue_field
        assert k.degree == 2
        assert_matrix_equal(res.f0_gram, [[k.one]])
        assert res.f0.kind == "hermitian"

    def test_ramified_parity_blocks(self, remark4_res7, quad7):
        res = remark4_res7
        assert all(res.certificates.values())
        assert res.invariant_exps == [1, 1, 0, 0]
        assert res.block_dims == (2, 2)
        assert res.block_kinds == ("symmetric", "alternating")
        assert res.f0.kind == "product"
        assert res.f0.dims == (2, 2)
        assert res.image_order == 16

    def test_hypothesis_failure_is_explained(self):
        rep = build_prop5_bundle(5)
        res = descend(rep)
        assert not res.certificates["faithful"]
        assert not res.certificates["hypothesis_2e_lt_ell_minus_1"]
        assert res.certificates["charpoly_preserved"]
        assert res.kernel_size == 5
        assert res.image_order == 1
        assert res.block_dims == (1, 1)
        assert len(res.kernel_explanations) == 4
        assert all(e["explained_by"] == "hypothesis_failure"
                   for e in res.kernel_explanations)

    def test_trivial_group(self, gauss5):
        f = GramForm(gauss5, symplectic2(gauss5), "alternating")
        rep = GroupRep(gauss5, [], f)
        assert rep.order == 1
        res = descend(rep)
        assert all(res.certificates.values())
        k = gauss5.residue_field
        assert_matrix_equal(res.f0_gram, [[k.zero, k.one], [k.element(4), k.zero]])
        assert len(res.charpoly_classes) == 1

    @pytest.mark.parametrize("repname,resname", [("q8_rep5", "q8_res5"),
                                                 ("z4_rep7", "z4_res7"),
                                                 ("remark4_rep7", "remark4_res7")])
    def test_reduced_action_is_multiplicative(self, repname, resname, request):
        rep = request.getfixturevalue(repname)
        res = request.getfixturevalue(resname)
        idx = element_index_map(rep)
        for i, a in enumerate(rep.elements):
            for j, b in enumerate(rep.elements):
                kk = idx[mat_key(la.mat_mul(a, b))]
                lhs = res.rho_bar[kk]
                rhs = la.mat_mul(res.rho_bar[i], res.rho_bar[j])
                assert la.mat_eq(lhs, rhs)

    def test_reduced_action_preserves_f0(self, remark4_res7):
        res = remark4_res7
        for p in res.rho_bar:
            assert res.f0.is_isometry(p)

    def test_start_lattice_choice_does_not_matter(self, q8_rep5, q8_res5, gauss5):
        base = q8_res5
        shifted = descend(q8_rep5,
                          start=scale_lattice(gauss5.pi_power(1),
                                              standard_lattice(gauss5, 2)))
        skew = descend(q8_rep5,
                       start=Lattice(gauss5, int_matrix(gauss5, [[1, 0], [0, 5]])))
        for other in (shifted, skew):
            assert other.certificates == base.certificates
            assert other.charpoly_classes == base.charpoly_classes
            assert other.block_dims == base.block_dims

    def test_unit_rescale_of_form(self, gauss5, q8_rep5, q8_res5):
        base = q8_res5
        for unit in (gauss5.rational(3), gauss5.zeta_power(1)):
            assert unit.valuation() == 0
            gram = la.scalar_mul(unit, q8_rep5.form.gram)
            rep2 = GroupRep(gauss5, q8_rep5.generators,
                            GramForm(gauss5, gram, "alternating"))
            res = descend(rep2)
            assert res.certificates == base.certificates
            assert res.charpoly_classes == base.charpoly_classes
            assert res.block_dims == base.block_dims
            assert res.block_kinds == base.block_kinds

    def test_uniformizer_choice_does_not_matter(self, gauss5, q8_res5):
        base = q8_res5
        desc2 = with_uniformizer(gauss5, gauss5.pi_power(1) * gauss5.rational(2))
        res = descend(quaternion_rep(desc2))
        assert res.certificates == base.certificates
        assert res.chain_steps == base.chain_steps
        assert res.block_dims == base.block_dims
        assert res.charpoly_classes == base.charpoly_classes
