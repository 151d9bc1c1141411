import numpy as np
import pytest

from ncgeom.linalg import adjoint
from ncgeom.su2rep import (algebra_basis, build_level_space, right_commutant_basis,
                           spin_matrices)


def casimir(js):
    return sum(j @ j for j in js)


def test_spin_half_is_pauli():
    jx, jy, jz = spin_matrices(0.5)
    assert np.allclose(jx @ jy - jy @ jx, 1j * jz)
    assert np.allclose(jz, np.diag([0.5, -0.5]))


def test_spin_one_casimir():
    js = spin_matrices(1)
    assert np.allclose(casimir(js), 2 * np.eye(3))


def test_spin_three_half_jz():
    _, _, jz = spin_matrices(1.5)
    assert np.allclose(sorted(np.diag(jz).real), [-1.5, -0.5, 0.5, 1.5])


def test_invalid_spin():
    with pytest.raises(ValueError):
        spin_matrices(0.3)


@pytest.mark.parametrize("k,dim", [(0, 1), (1, 5), (2, 14)])
def test_level_space_dimension(k, dim):
    assert build_level_space(k).dim == dim


def test_level_space_invariants():
    lv = build_level_space(2)
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1
    for action in (lv.left, lv.right):
        for a in range(3):
            assert np.linalg.norm(action[a] - adjoint(action[a])) <= 1e-12
            for b in range(3):
                comm = action[a] @ action[b] - action[b] @ action[a]
                want = 1j * sum(eps[a, b, c] * action[c] for c in range(3))
                assert np.linalg.norm(comm - want) <= 1e-12
    for a in range(3):
        for b in range(3):
            assert np.linalg.norm(lv.left[a] @ lv.right[b] - lv.right[b] @ lv.left[a]) <= 1e-12
    # blockwise Casimir j(j+1) for both actions
    for (two_j, off, size) in lv.block_layout:
        jj = two_j / 2
        for action in (lv.left, lv.right):
            cas = casimir(action)[off:off + size, off:off + size]
            assert np.linalg.norm(cas - jj * (jj + 1) * np.eye(size)) <= 1e-12


def test_level_zero():
    lv = build_level_space(0)
    assert lv.dim == 1
    assert np.allclose(lv.left, 0)


def test_algebra_basis():
    lv = build_level_space(1)
    basis = algebra_basis(lv)
    assert basis.shape[0] == 25
    # matrix units multiply: E_{12} E_{23} = E_{13} (up to the common scale)
    e12 = basis[0 * 5 + 1] / np.sqrt(5)
    e23 = basis[1 * 5 + 2] / np.sqrt(5)
    e13 = basis[0 * 5 + 2] / np.sqrt(5)
    assert np.allclose(e12 @ e23, e13)
    total = sum(basis[p * 5 + p] for p in range(5)) / np.sqrt(5)
    assert np.allclose(total, np.eye(5))


def test_right_commutant_basis():
    lv = build_level_space(1)
    comm = right_commutant_basis(lv)
    assert comm.shape[0] == 5  # 1 + 4
    for x in comm:
        for a in range(3):
            assert np.linalg.norm(lv.left[a] @ x - x @ lv.left[a]) <= 1e-12
