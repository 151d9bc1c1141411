"""su(2) representation theory: spin matrices and the level-k two-sided module.

The level space H0 = (+)_{j=0,1/2,...,k/2} V_j* (x) V_j carries commuting
left and right su(2) actions.  Each block is realized as C^d (x) C^d with the
left generators J_A = S_A (x) I and the right generators Jbar_A = I (x) (-S_A^T),
which makes [J, Jbar] = 0 exact and gives both actions the bracket
[X_A, X_B] = i eps_{ABC} X_C and blockwise Casimir j(j+1).
"""

from dataclasses import dataclass

import numpy as np

from .linalg import adjoint


def spin_matrices(j):
    """Standard spin-j generators (J1, J2, J3) in the |j, m> basis, m descending."""
    two_j = int(round(2 * j))
    if two_j < 0 or abs(2 * j - two_j) > 1e-12:
        raise ValueError(f"j must be a nonnegative half-integer, got {j}")
    d = two_j + 1
    m = np.array([j - k for k in range(d)])
    jz = np.diag(m).astype(complex)
    jp = np.zeros((d, d), dtype=complex)
    for k in range(1, d):
        jp[k - 1, k] = np.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    jm = adjoint(jp)
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    return jx, jy, jz


@dataclass(frozen=True)
class LevelSpace:
    """H0 at level k with its left/right su(2) actions.

    block_layout records (two_j, offset, size) per irreducible block, where
    size = (2j+1)^2; half-integer spins are stored as the integer 2j.
    """

    k: int
    dim: int
    left: np.ndarray       # (3, dim, dim)
    right: np.ndarray      # (3, dim, dim)
    block_layout: tuple


def _blockdiag(mats, dim):
    out = np.zeros((dim, dim), dtype=complex)
    o = 0
    for m in mats:
        d = m.shape[0]
        out[o:o + d, o:o + d] = m
        o += d
    return out


def build_level_space(k):
    """Level space with dim = sum_{j<=k/2} (2j+1)^2 = (k+1)(k+2)(2k+3)/6."""
    if k < 0 or int(k) != k:
        raise ValueError(f"level k must be a nonnegative integer, got {k}")
    k = int(k)
    two_js = list(range(0, k + 1))
    dims = [tj + 1 for tj in two_js]
    total = sum(d * d for d in dims)
    layout = []
    offset = 0
    for tj, d in zip(two_js, dims):
        layout.append((tj, offset, d * d))
        offset += d * d
    left = []
    right = []
    for a in range(3):
        lblocks = []
        rblocks = []
        for tj, d in zip(two_js, dims):
            s = spin_matrices(tj / 2)[a] if d > 1 else np.zeros((1, 1), dtype=complex)
            lblocks.append(np.kron(s, np.eye(d)))
            rblocks.append(np.kron(np.eye(d), -s.T))
        left.append(_blockdiag(lblocks, total))
        right.append(_blockdiag(rblocks, total))
    return LevelSpace(k=k, dim=total, left=np.stack(left), right=np.stack(right),
                      block_layout=tuple(layout))


def algebra_basis(space):
    """Matrix units of End(H0): the full algebra of the level space.

    The algebra generated by the projected Peter-Weyl functions is all of
    End(H0), so matrix units are a legitimate linear basis; they are returned
    scaled by sqrt(dim) to be HS-orthonormal.
    """
    n = space.dim
    scale = np.sqrt(n)
    basis = np.zeros((n * n, n, n), dtype=complex)
    for p in range(n):
        for q in range(n):
            basis[p * n + q, p, q] = scale
    return basis


def right_commutant_basis(space):
    """Orthonormal basis of (+)_j 1_{V_j*} (x) End(V_j) inside End(H0).

    This is the commutant of the left action; it realizes the harmonic
    (zero-differential) sector of the level space.
    """
    n = space.dim
    out = []
    for (tj, offset, size) in space.block_layout:
        d = tj + 1
        for p in range(d):
            for q in range(d):
                e = np.zeros((d, d), dtype=complex)
                e[p, q] = 1
                x = np.zeros((n, n), dtype=complex)
                x[offset:offset + size, offset:offset + size] = np.kron(np.eye(d), e)
                out.append(x / np.linalg.norm(x))
    return np.stack(out)
