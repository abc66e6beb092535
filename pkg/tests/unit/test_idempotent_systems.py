# -*- coding: utf-8 -*-
"""
幂等系统、对称性与特征数据单元测试
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

# 添加src到路径
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))
sys.path.insert(0, str(Path(__file__).parent))

import pytest

from api.exceptions import (
    DegenerateSystemError,
    InvalidSystemError,
    NotSolidError,
    NotSymmetricError,
    SizeMismatchError,
)
from corpus import NON_AO, PETERSEN_P, PETERSEN_Q, Q, d1_member, finite_field_aon, qm, rational_corpus
from services.exact_linalg import ExactMatrix, delta, diagonal, identity, mat_inverse
from services.idempotent_systems import (
    IdempotentSystem,
    apply_antiautomorphism,
    build_phi_r,
    canonicalize,
    compute_a_basis,
    dual_system,
    eigendata,
    eigendata_identities,
    first_eigenmatrix,
    intersection_numbers,
    intersection_numbers_by_multiplication,
    is_symmetric,
    isomorphism_witness,
    multiplicities,
    normalized_representative,
    symmetry_witness,
    verify_axioms,
)


def _conjugated(phi: IdempotentSystem, g: ExactMatrix) -> IdempotentSystem:
    g_inv = mat_inverse(g)
    return IdempotentSystem(
        tuple(g @ a @ g_inv for a in phi.e),
        tuple(g @ a @ g_inv for a in phi.estar),
    )


def _trivial_system(n: int) -> IdempotentSystem:
    """E_i = E*_i = Δ_{i,i}，公理 (iii)(iv) 不成立"""
    family = tuple(delta(Q, n, i, i) for i in range(n))
    return IdempotentSystem(family, family)


G = qm([[1, 1, 0], [0, 1, 2], [1, 0, 1]])


class TestConstruction:
    """Φ_R 的构造与公理"""

    def test_phi_r_hadamard(self):
        """R = [[1,1],[1,-1]] 的 E*_i"""
        phi = build_phi_r(qm([[1, 1], [1, -1]]))
        half = Fraction(1, 2)
        assert phi.estar[0] == qm([[half, half], [half, half]])
        assert phi.estar[1] == qm([[half, -half], [-half, half]])
        assert phi.e[0] == delta(Q, 2, 0, 0)

    def test_phi_r_requires_solid(self):
        with pytest.raises(NotSolidError):
            build_phi_r(identity(Q, 2))

    def test_axioms_hold_on_corpus(self):
        for r in rational_corpus() + [qm(NON_AO)]:
            assert verify_axioms(build_phi_r(r))

    def test_axioms_hold_over_prime_fields(self):
        for p in finite_field_aon():
            assert verify_axioms(build_phi_r(p))

    def test_trivial_system_fails_axioms(self):
        assert not verify_axioms(_trivial_system(2))

    def test_family_not_summing_to_identity(self):
        e = (delta(Q, 2, 0, 0), delta(Q, 2, 0, 0))
        assert not verify_axioms(IdempotentSystem(e, e))

    def test_shape_mismatch(self):
        with pytest.raises(SizeMismatchError):
            IdempotentSystem((delta(Q, 2, 0, 0),), (delta(Q, 2, 0, 0),))

    def test_dual_swaps_families(self):
        phi = build_phi_r(qm([[1, 2], [1, -1]]))
        dual = dual_system(phi)
        assert dual.e == phi.estar
        assert dual.estar == phi.e


class TestCanonicalForm:
    """规范形与同构"""

    def test_canonicalize_conjugated_system(self):
        phi = build_phi_r(qm(PETERSEN_P))
        moved = _conjugated(phi, G)
        canonical, t = canonicalize(moved)
        for i, e_i in enumerate(canonical.e):
            assert e_i == delta(Q, 3, i, i)
        t_inv = mat_inverse(t)
        for a, b in zip(moved.estar, canonical.estar):
            assert t_inv @ a @ t == b

    def test_canonicalize_rejects_bad_family(self):
        bad = IdempotentSystem((identity(Q, 2), identity(Q, 2)), (identity(Q, 2), identity(Q, 2)))
        with pytest.raises(InvalidSystemError):
            canonicalize(bad)

    def test_normalized_representative(self):
        phi = build_phi_r(qm([[1, 2], [3, -3]]))
        assert normalized_representative(phi) == qm([[1, 2], [1, -1]])

    def test_normalized_representative_of_conjugate(self):
        moved = _conjugated(build_phi_r(qm(NON_AO)), G)
        expected = qm([
            [1, Fraction(-1, 3), Fraction(-1, 3)],
            [1, Fraction(-2, 3), Fraction(-1, 3)],
            [1, Fraction(-1, 3), Fraction(-2, 3)],
        ])
        assert normalized_representative(moved) == expected

    def test_isomorphism_witness_maps_everything(self):
        phi = build_phi_r(qm(PETERSEN_P))
        moved = _conjugated(phi, G)
        g = isomorphism_witness(phi, moved)
        assert g is not None
        g_inv = mat_inverse(g)
        for a, b in zip(phi.matrices(), moved.matrices()):
            assert g @ a @ g_inv == b

    def test_diagonally_equivalent_matrices_give_isomorphic_systems(self):
        left = build_phi_r(qm([[1, 2], [1, -1]]))
        right = build_phi_r(qm([[3, 1], [3, Fraction(-1, 2)]]))
        assert isomorphism_witness(left, right) is not None

    def test_non_isomorphic_systems(self):
        left = build_phi_r(d1_member(2))
        right = build_phi_r(d1_member(3))
        assert isomorphism_witness(left, right) is None

    def test_dual_of_phi_r_is_phi_of_inverse(self):
        """Φ_R* ≅ Φ_{R⁻¹}"""
        for r in [qm(NON_AO), qm(PETERSEN_P), d1_member(Fraction(2, 3))]:
            assert isomorphism_witness(dual_system(build_phi_r(r)), build_phi_r(mat_inverse(r))) is not None

    def test_invalid_system_rejected(self):
        with pytest.raises(InvalidSystemError):
            isomorphism_witness(_trivial_system(2), _trivial_system(2))


class TestSymmetry:
    """对称性判定与反自同构"""

    def test_witness_fixes_all_idempotents(self):
        for r in rational_corpus():
            phi = build_phi_r(r)
            m = symmetry_witness(phi)
            assert m is not None
            for a in phi.matrices():
                assert apply_antiautomorphism(m, a) == a

    def test_witness_on_conjugated_system(self):
        moved = _conjugated(build_phi_r(qm([[1, 2], [1, -1]])), qm([[2, 1], [1, 1]]))
        m = symmetry_witness(moved)
        assert m is not None
        for a in moved.matrices():
            assert apply_antiautomorphism(m, a) == a

    def test_antiautomorphism_is_involution(self):
        m = symmetry_witness(build_phi_r(qm(PETERSEN_P)))
        rng = random.Random(7)
        for _ in range(100):
            a = qm([[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)])
            assert apply_antiautomorphism(m, apply_antiautomorphism(m, a)) == a

    def test_non_ao_is_not_symmetric(self):
        phi = build_phi_r(qm(NON_AO))
        assert symmetry_witness(phi) is None
        assert not is_symmetric(phi)


class TestEigendata:
    """特征数据"""

    def test_d1_worked_example(self):
        """R = [[1,2],[1,-1]]：m = (1/3, 2/3)，ν = 3，k = (1, 2)，p¹₁₁ = 1"""
        report = eigendata(build_phi_r(qm([[1, 2], [1, -1]])))
        assert report.m == (Fraction(1, 3), Fraction(2, 3))
        assert report.nu == 3
        assert report.k == (1, 2)
        assert report.kstar == (1, 2)
        assert report.pnum[1][1][1] == 1
        assert report.p == qm([[1, 2], [1, -1]])
        assert report.q == report.p

    def test_a_basis(self):
        assert compute_a_basis(build_phi_r(qm([[1, 1], [1, -1]])))[1] == diagonal(Q, [1, -1])
        assert compute_a_basis(build_phi_r(qm([[1, 2], [1, -1]])))[1] == diagonal(Q, [2, -1])

    def test_a_basis_requires_symmetry(self):
        with pytest.raises(NotSymmetricError):
            compute_a_basis(build_phi_r(qm(NON_AO)))
        with pytest.raises(NotSymmetricError):
            first_eigenmatrix(build_phi_r(qm(NON_AO)))

    def test_eigendata_requires_symmetry(self):
        with pytest.raises(NotSymmetricError):
            eigendata(build_phi_r(qm(NON_AO)))

    def test_petersen(self):
        """非自对偶：Q ≠ P"""
        report = eigendata(build_phi_r(qm(PETERSEN_P)))
        assert report.p == qm(PETERSEN_P)
        assert report.q == qm(PETERSEN_Q)
        assert report.nu == 10
        assert report.k == (1, 3, 6)
        assert report.kstar == (1, 5, 4)
        assert report.m == (Fraction(1, 10), Fraction(1, 2), Fraction(2, 5))
        assert report.mstar == (Fraction(1, 10), Fraction(3, 10), Fraction(3, 5))
        assert [report.pnum[h][1][1] for h in range(3)] == [3, 0, 1]

    def test_p_is_normalized_input_for_scaled_matrix(self):
        report = eigendata(build_phi_r(qm([[2, 2], [2, -2]])))
        assert report.p == qm([[1, 1], [1, -1]])

    def test_eigendata_of_conjugated_system(self):
        moved = _conjugated(build_phi_r(qm(PETERSEN_P)), G)
        assert eigendata(moved).p == qm(PETERSEN_P)

    def test_identities_on_rational_corpus(self):
        for r in rational_corpus():
            report = eigendata(build_phi_r(r))
            assert eigendata_identities(report) == []
            assert report.p == r

    def test_identities_over_prime_fields(self):
        for r in finite_field_aon():
            report = eigendata(build_phi_r(r))
            assert eigendata_identities(report) == []
            assert report.p == r

    def test_intersection_numbers_two_ways(self):
        for r in [qm(PETERSEN_P), d1_member(5)]:
            phi = build_phi_r(r)
            assert intersection_numbers_by_multiplication(compute_a_basis(phi)) == intersection_numbers(r)

    def test_multiplicities_degenerate(self):
        with pytest.raises(DegenerateSystemError):
            multiplicities(_trivial_system(2))
