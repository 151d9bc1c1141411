"""CAR/Clifford operators on fermionic Fock space, gradings and Hodge volumes.

The Fock space of n modes is C^(2^n) in lexicographic occupation-number order
(bit k of the basis index = occupancy of mode k), which fixes every matrix
entry deterministically.  A symmetric positive-definite metric g enters
through the raised modes c^A = g^{AB} b_B, giving {c^A, c^B*} = g^{AB}.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import adjoint, anticommutator


@dataclass(frozen=True)
class FermionAlgebra:
    """CAR algebra of n modes with metric-raised generators.

    creators/annihilators are the unit-normalized Fock operators a*_i, a_i
    ({a_i, a*_j} = delta_ij); raised_crea/raised_anni are c^A* and c^A with
    {c^A, c^B*} = g^{AB}.
    """

    n_modes: int
    dim: int
    creators: np.ndarray     # (n, 2^n, 2^n)
    annihilators: np.ndarray
    metric: np.ndarray       # g_AB, real symmetric
    metric_inv: np.ndarray   # g^{AB}
    raised_crea: np.ndarray
    raised_anni: np.ndarray

    def number_operator(self):
        return sum(self.creators[i] @ self.annihilators[i] for i in range(self.n_modes))


def _fock_annihilators(n):
    dim = 2 ** n
    ops = np.zeros((n, dim, dim), dtype=complex)
    for i in range(n):
        for occ in range(dim):
            if (occ >> i) & 1:
                sign = (-1) ** bin(occ & ((1 << i) - 1)).count("1")
                ops[i, occ ^ (1 << i), occ] = sign
    return ops


def build_fermion_algebra(g):
    """CAR operators on the exterior algebra of an n-dimensional space.

    The raised modes satisfy {c^A, c^B*} = g^{AB} exactly (g^{AB} the inverse
    metric).  Non-positive-definite metrics are rejected.
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or not np.allclose(g, g.T):
        raise ValueError("metric must be a symmetric square matrix")
    evals = np.linalg.eigvalsh(g)
    if evals[0] <= 0:
        raise ValueError(f"metric must be positive definite (min eigenvalue {evals[0]:.3g})")
    n = g.shape[0]
    ann = _fock_annihilators(n)
    cre = np.stack([adjoint(a) for a in ann])
    ginv = np.linalg.inv(g)
    # c^A = g^{AB} b_B realized by scaling: with g = L L^T we use the symmetric
    # root so that {c^A, c^B*} = g^{AB}.
    w, v = np.linalg.eigh(ginv)
    root = v @ np.diag(np.sqrt(w)) @ v.T  # symmetric square root of g^{AB}
    raised_anni = np.einsum("ab,bij->aij", root, ann)
    raised_crea = np.stack([adjoint(a) for a in raised_anni])
    return FermionAlgebra(
        n_modes=n, dim=2 ** n, creators=cre, annihilators=ann,
        metric=g, metric_inv=ginv, raised_crea=raised_crea, raised_anni=raised_anni,
    )


def gamma_pair(alg):
    """Two anti-commuting Clifford copies from the raised CAR modes.

    gamma^A = c^A* - c^A and gammabar^A = i(c^A* + c^A) satisfy
    {gamma^A, gamma^B} = {gammabar^A, gammabar^B} = -2 g^{AB} and
    {gamma^A, gammabar^B} = 0.  The rescalings psi^A = -i gamma^A,
    psibar^A = i gammabar^A then obey {psi^A, psi^B} = 2 g^{AB}.
    """
    gam = alg.raised_crea - alg.raised_anni
    gbar = 1j * (alg.raised_crea + alg.raised_anni)
    return gam, gbar


def psi_pair(alg):
    """Self-adjoint fermions psi^A = -i gamma^A, psibar^A = i gammabar^A."""
    gam, gbar = gamma_pair(alg)
    return -1j * gam, 1j * gbar


def grading_volume(alg, which="both_copies"):
    """Normalized volume/grading operators built from the fermion products.

    which='both_copies' (n=3): the Z2-grading proportional to
    psi^1psi^2psi^3 psibar^1psibar^2psibar^3, normalized to be self-adjoint,
    unitary, square to +I and have vacuum eigenvalue +1; it anticommutes with
    every psi^A and psibar^A.

    which='single_copy' (n=3): the Hodge-type volume element
    (1/n!) sqrt(det g) eps_{A1..An} chi^{A1}...chi^{An} with chi = c + c*;
    it is unitary and squares to (-1)^(n(n-1)/2) I.

    which='two_dim' (n=2 Clifford input unsupported here; see
    ``two_dim_grading`` for the gamma-matrix form).
    """
    n = alg.n_modes
    psi, psibar = psi_pair(alg)
    if which == "both_copies":
        if n != 3:
            raise ValueError("both_copies grading is defined for n = 3 modes")
        p = psi[0] @ psi[1] @ psi[2]
        pb = psibar[0] @ psibar[1] @ psibar[2]
        g0 = 1j * (p @ pb)
        norm = np.sqrt(abs((g0 @ g0)[0, 0].real))
        g0 = g0 / norm
        if g0[0, 0].real < 0:  # vacuum eigenvalue +1
            g0 = -g0
        return g0
    if which == "single_copy":
        chi = alg.raised_crea + alg.raised_anni
        eps = levi_civita(n)
        acc = np.zeros((alg.dim, alg.dim), dtype=complex)
        for idx in np.ndindex(*([n] * n)):
            e = eps[idx]
            if e == 0:
                continue
            m = chi[idx[0]]
            for k in idx[1:]:
                m = m @ chi[k]
            acc = acc + e * m
        sqrtg = np.sqrt(np.linalg.det(alg.metric))
        return sqrtg / _fact(n) * acc
    raise ValueError(f"unknown grading request {which!r}")


def _fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def levi_civita(n):
    eps = np.zeros((n,) * n)
    from itertools import permutations

    for p in permutations(range(n)):
        sgn = 1
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] > p[j]:
                    sgn = -sgn
        eps[p] = sgn
    return eps


def two_dim_gammas(g=None):
    """2-d gamma matrices with {gamma^mu, gamma^nu} = -2 g^{mu nu}, gamma* = -gamma.

    For the default flat metric these are i sigma_1, i sigma_2; a general SPD
    metric is absorbed with its inverse symmetric root.
    """
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    base = np.stack([1j * s1, 1j * s2])
    if g is None:
        return base
    g = np.asarray(g, dtype=float)
    w, v = np.linalg.eigh(np.linalg.inv(g))
    if w[0] <= 0:
        raise ValueError("metric must be positive definite")
    root = v @ np.diag(np.sqrt(w)) @ v.T
    return np.einsum("mn,nij->mij", root, base)


def two_dim_grading(gammas, g=None):
    """sigma = (i/2) sqrt(det g) eps_{mu nu} gamma^mu gamma^nu; squares to I."""
    g = np.eye(2) if g is None else np.asarray(g, dtype=float)
    sqrtg = np.sqrt(np.linalg.det(g))
    sig = (1j / 2) * sqrtg * (gammas[0] @ gammas[1] - gammas[1] @ gammas[0])
    return sig


def charge_conjugation(gammas, tol=1e-10):
    """The 2-d charge conjugation C with C gamma^mu = -conj(gamma^mu) C.

    C is required to satisfy C = C* = C^{-1}; it is unique up to sign, fixed
    here by a nonnegative real part of the first nonzero entry.
    """
    g1, g2 = gammas
    for mu, gm in enumerate(gammas):
        if np.linalg.norm(gm + adjoint(gm)) > tol * np.linalg.norm(gm):
            raise ValueError(f"gamma^{mu + 1} must be anti-self-adjoint")
    # solve the linear intertwining system for a 2x2 matrix C
    rows = []
    for gm in gammas:
        # C gm + conj(gm) C = 0  -> (gm^T (x) I + I (x) conj(gm)) vec(C) = 0
        rows.append(np.kron(gm.T, np.eye(2)) + np.kron(np.eye(2), gm.conj()))
    m = np.vstack(rows)
    _, s, vh = np.linalg.svd(m)
    if s[-1] > tol * s[0]:
        raise ValueError("no charge conjugation solution within tolerance")
    c = vh[-1].conj().reshape(2, 2)
    # normalize: C = C* = C^{-1} means C is a self-adjoint unitary up to phase
    c = c / np.linalg.norm(c) * np.sqrt(2)
    # kill the residual phase: make C self-adjoint
    # c sa up to phase e^{i t}: pick t from the largest entry
    k = np.argmax(np.abs(c))
    phase = c.ravel()[k] / abs(c.ravel()[k])
    c = c / phase
    if np.linalg.norm(c - adjoint(c)) > tol or np.linalg.norm(c @ c - np.eye(2)) > tol:
        raise ValueError("charge conjugation normalization failed")
    flat = c.ravel()
    first = flat[np.flatnonzero(np.abs(flat) > tol)[0]]
    if first.real < 0:
        c = -c
    for gm in gammas:
        if np.linalg.norm(c @ gm + gm.conj() @ c) > tol:
            raise ValueError("charge conjugation does not intertwine the gammas")
    return c


def car_residual(alg):
    """Max HS-norm residual of the CAR relations of the raised modes."""
    n, dim = alg.n_modes, alg.dim
    eye = np.eye(dim)
    worst = 0.0
    for i in range(n):
        for j in range(n):
            worst = max(worst, np.linalg.norm(
                anticommutator(alg.raised_anni[i], alg.raised_crea[j]) - alg.metric_inv[i, j] * eye))
            worst = max(worst, np.linalg.norm(
                anticommutator(alg.raised_anni[i], alg.raised_anni[j])))
    return worst / np.sqrt(dim)
