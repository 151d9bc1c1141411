"""Independent oracles shared by the engine tests and the acceptance suite."""

import numpy as np

from ncgeom.linalg import adjoint, commutator, orthonormalize
from ncgeom.spectral_forms import SpectralData, abar_basis


def m2_data(rng, tol=1e-9):
    """Random N=1 data on M2, graded by doubling: H = C^2 (x) C^2."""
    h = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    dtilde = h + adjoint(h)
    tau1 = np.array([[0, 1], [1, 0]], dtype=complex)
    tau3 = np.diag([1.0, -1.0]).astype(complex)
    d_op = np.kron(dtilde, tau1)
    gamma = np.kron(np.eye(2), tau3)
    basis = []
    for p in range(2):
        for q in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[p, q] = np.sqrt(2)
            basis.append(np.kron(e, np.eye(2)))
    return SpectralData(flavor="n1", algebra=np.stack(basis), hilbert_dim=4,
                        ops={"D": d_op, "gamma": gamma}, tol=tol)


def enumeration_junk(data, k):
    """Independent oracle: junk via an explicit kernel basis enumeration.

    Builds the pi and pi-delta matrices of degree-(k-1) words with plain
    loops, extracts an explicit orthonormal kernel basis from the full SVD,
    and spans the delta-images of every kernel vector.
    """
    n = data.hilbert_dim
    dop = data.differential
    heads = list(data.algebra)
    abar = list(abar_basis(data))
    cols_p = []
    cols_q = []

    def words(depth):
        if depth == 0:
            yield []
            return
        for w in words(depth - 1):
            for j in range(len(abar)):
                yield w + [j]

    for i, a in enumerate(heads):
        da = commutator(dop, a)
        for w in words(k - 1):
            tail = np.eye(n, dtype=complex)
            for j in w:
                tail = tail @ commutator(dop, abar[j])
            cols_p.append((a @ tail).ravel())
            cols_q.append((da @ tail).ravel())
    p = np.stack(cols_p, axis=1)
    q = np.stack(cols_q, axis=1)
    u, s, vh = np.linalg.svd(p, full_matrices=True)
    rank = int(np.sum(s > 1e-9 * s[0])) if s.size and s[0] > 0 else 0
    kernel = vh[rank:].conj().T  # explicit kernel basis, column by column
    images = [(q @ kernel[:, i]).reshape(n, n) for i in range(kernel.shape[1])]
    return orthonormalize(images, ambient_dim=n)


