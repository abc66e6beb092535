# -*- coding: utf-8 -*-
"""
AON / 对称幂等系统 / 特征系统之间的双射与对偶单元测试
"""

import sys
from pathlib import Path

# 添加src到路径
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))
sys.path.insert(0, str(Path(__file__).parent))

import pytest

from api.exceptions import NotAONError, NotSymmetricError
from corpus import NON_AO, PETERSEN_P, PETERSEN_Q, Q, d1_family, d1_member, finite_field_aon, qm, rational_corpus
from services.character_systems import build_d1_algebra, build_psi_p, eigenmatrix, semisimple_decompose
from services.correspondences import (
    ObjectKind,
    correspondence_report,
    dual_aon,
    dual_cs,
    dual_sis,
    is_dual_pair,
    phi_of_psi,
    psi_of_phi,
)
from services.exact_linalg import identity, mat_inverse, scale
from services.idempotent_systems import build_phi_r, eigendata


class TestBijections:
    """三类对象之间的往返"""

    def test_phi_r_roundtrip(self):
        for p in rational_corpus() + finite_field_aon():
            assert eigendata(build_phi_r(p)).p == p

    def test_sis_cs_sis(self):
        for p in rational_corpus():
            phi = build_phi_r(p)
            assert eigendata(phi_of_psi(psi_of_phi(phi))).p == p

    def test_cs_sis_cs(self):
        for p in rational_corpus():
            psi = build_psi_p(p)
            assert eigenmatrix(psi_of_phi(phi_of_psi(psi))) == p

    def test_psi_of_phi_keeps_structure_constants(self):
        phi = build_phi_r(qm(PETERSEN_P))
        psi = psi_of_phi(phi)
        assert psi.algebra.pnum == eigendata(phi).pnum
        assert psi.algebra.k == (1, 3, 6)

    def test_d1_algebra_maps_to_phi_r(self):
        """k = 2 的 d = 1 特征系统对应 Φ_{[[1,2],[1,-1]]}"""
        system = semisimple_decompose(build_d1_algebra(Q.scalar(2)))
        assert phi_of_psi(system) == build_phi_r(qm([[1, 2], [1, -1]]))

    def test_psi_of_phi_requires_symmetry(self):
        with pytest.raises(NotSymmetricError):
            psi_of_phi(build_phi_r(qm(NON_AO)))

    def test_reports_from_each_kind(self):
        p = qm(PETERSEN_P)
        inputs = {
            ObjectKind.AON: p,
            ObjectKind.SIS: build_phi_r(p),
            ObjectKind.CS: build_psi_p(p),
        }
        for kind, obj in inputs.items():
            reports = correspondence_report(kind, obj)
            assert len(reports) == 2
            assert {r.target_kind for r in reports} == set(ObjectKind) - {kind}
            assert all(r.roundtrip_equal for r in reports)


class TestDuality:
    """对偶"""

    def test_d1_family_self_dual(self):
        for p in d1_family():
            assert dual_aon(p) == p

    def test_petersen_dual(self):
        assert dual_aon(qm(PETERSEN_P)) == qm(PETERSEN_Q)
        assert dual_aon(qm(PETERSEN_Q)) == qm(PETERSEN_P)

    def test_involution_and_product(self):
        for p in rational_corpus() + finite_field_aon():
            pstar = dual_aon(p)
            assert dual_aon(pstar) == p
            nu = mat_inverse(p)[0, 0].inverse()
            assert p @ pstar == scale(identity(p.spec, p.size), nu)

    def test_dual_requires_aon(self):
        with pytest.raises(NotAONError):
            dual_aon(qm(NON_AO))

    def test_dual_cs(self):
        for p in [qm(PETERSEN_P), d1_member(3)]:
            psi = build_psi_p(p)
            dual = dual_cs(psi)
            assert eigenmatrix(dual) == dual_aon(p)
            assert is_dual_pair(psi, dual)

    def test_dual_sis(self):
        phi = build_phi_r(qm(PETERSEN_P))
        assert eigendata(dual_sis(phi)).p == qm(PETERSEN_Q)

    def test_dual_sis_requires_symmetry(self):
        with pytest.raises(NotSymmetricError):
            dual_sis(build_phi_r(qm(NON_AO)))

    def test_not_dual_pair(self):
        left = build_psi_p(d1_member(2))
        right = build_psi_p(d1_member(3))
        assert not is_dual_pair(left, right)
