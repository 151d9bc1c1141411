"""Connections on a free cotangent module: torsion, curvature, Ricci, scalar.

All operations work on canonical-representative operators attached to a
:class:`~ncgeom.spectral_forms.FormComplex`.  The free basis {E^A} is declared
by the caller; coefficients of connections are algebra elements in represented
form.  Adjoint contraction maps are computed numerically as matrix adjoints of
multiplication operators between the canonical form spaces, with the
normalized HS inner product throughout.  The scalar curvature carries the
sign convention in which the round 3-sphere comes out negative.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import adjoint, commutator, hs_norm, rank_of
from .spectral_forms import hermitian_structure, natural_involution


@dataclass
class CotangentBasis:
    """Declared free basis of the canonical degree-1 space.

    h[A][B] is the algebra-valued metric <E^A, E^B>_D; dual[A] the dual
    1-forms e_A with eps_A(w) = <w, e_A>_D.
    """

    complex_: object
    E: np.ndarray            # (nE, n, n)
    h: np.ndarray            # (nE, nE, n, n)
    dual: np.ndarray         # (nE, n, n)
    h_scalar: np.ndarray     # scalar part of h (nE, nE), exact when h is scalar
    flavor: str

    @property
    def n_basis(self):
        return self.E.shape[0]


def build_cotangent_basis(complex_, E):
    """Metric and dual forms for a declared free degree-1 basis."""
    data = complex_.data
    n = data.hilbert_dim
    E = np.asarray(E)
    nE = E.shape[0]
    canon1 = complex_.canon[1]
    for A in range(nE):
        if canon1.residual(E[A]) > 1e-7:
            raise ValueError(f"E^{A + 1} is not a canonical degree-1 representative")
    h = np.zeros((nE, nE, n, n), dtype=complex)
    h_scalar = np.zeros((nE, nE), dtype=complex)
    eye = np.eye(n)
    scalar_ok = True
    for A in range(nE):
        for B in range(nE):
            h[A, B] = hermitian_structure(data, E[A], E[B])
            c = np.trace(h[A, B]) / n
            h_scalar[A, B] = c
            if np.linalg.norm(h[A, B] - c * eye) > 1e-8 * max(1.0, abs(c)):
                scalar_ok = False
    if scalar_ok:
        ginv = h_scalar.real
        glow = np.linalg.inv(ginv)
        dual = np.einsum("ab,bjk->ajk", glow, E)
    else:
        # general case: solve sum_C h^{BC} x_C = delta_{AB} I for x_C = (m_AC)^*
        dual = np.zeros_like(E)
        big = np.zeros((nE * n * n, nE * n * n), dtype=complex)
        for B in range(nE):
            for C in range(nE):
                big[B * n * n:(B + 1) * n * n, C * n * n:(C + 1) * n * n] = \
                    np.kron(h[B, C], np.eye(n))
        for A in range(nE):
            rhs = np.zeros(nE * n * n, dtype=complex)
            rhs[A * n * n:(A + 1) * n * n] = eye.ravel()
            x, *_ = np.linalg.lstsq(big, rhs, rcond=None)
            if np.linalg.norm(big @ x - rhs) > 1e-6:
                raise ValueError("degenerate metric: dual forms do not exist")
            for C in range(nE):
                m_ac = adjoint(x[C * n * n:(C + 1) * n * n].reshape(n, n))
                dual[A] += m_ac @ E[C]
    return CotangentBasis(complex_=complex_, E=E, h=h, dual=dual,
                          h_scalar=h_scalar, flavor=data.flavor)


@dataclass
class Connection:
    """Coefficients Gamma^A_{BC} with nabla E^A = -Gamma^A_{BC} E^B (x) E^C."""

    coeffs: np.ndarray  # (nE, nE, nE, n, n) algebra elements in represented form

    @classmethod
    def zero(cls, basis):
        nE, n = basis.n_basis, basis.E.shape[1]
        return cls(np.zeros((nE, nE, nE, n, n), dtype=complex))

    @classmethod
    def from_scalars(cls, basis, gamma_scalars):
        nE, n = basis.n_basis, basis.E.shape[1]
        coeffs = np.einsum("abc,jk->abcjk", np.asarray(gamma_scalars),
                           np.eye(n, dtype=complex))
        return cls(coeffs)


def _qdelta_op(complex_, k, x):
    """Apply the quotient differential to a canonical degree-k representative."""
    ck, cn = complex_.canon[k], complex_.canon[k + 1]
    coeffs = ck.project_coeffs(x)
    img = complex_.qdelta[k] @ coeffs
    n = complex_.data.hilbert_dim
    return (img @ cn.flat()).reshape(n, n)


def _canon_project(complex_, k, x):
    return complex_.canon[k].project(x)


def torsion(basis, conn):
    """T^A = delta E^A + Gamma^A_{BC} E^B E^C as canonical degree-2 forms."""
    cx = basis.complex_
    nE = basis.n_basis
    out = []
    for A in range(nE):
        t = _qdelta_op(cx, 1, basis.E[A])
        for B in range(nE):
            for C in range(nE):
                t = t + _canon_project(cx, 2, conn.coeffs[A, B, C] @ basis.E[B] @ basis.E[C])
        out.append(t)
    return np.stack(out)


def torsion_direct(basis, conn, omega_coeffs):
    """Def-2.14 form (delta - m o nabla) on the 1-form with given coefficients.

    Used as an independent cross-check of the component formula: for
    omega = w_A E^A the direct torsion equals w_A T^A by A-linearity.
    """
    cx = basis.complex_
    nE = basis.n_basis
    dop = cx.data.differential
    omega = sum(omega_coeffs[A] @ basis.E[A] for A in range(nE))
    t = _qdelta_op(cx, 1, _canon_project(cx, 1, omega))
    for A in range(nE):
        # m(nabla(w_A E^A)) = [D, w_A] E^A - w_A Gamma^A_{BC} E^B E^C
        t = t - _canon_project(cx, 2, commutator(dop, omega_coeffs[A]) @ basis.E[A])
        for B in range(nE):
            for C in range(nE):
                t = t + _canon_project(
                    cx, 2, omega_coeffs[A] @ conn.coeffs[A, B, C] @ basis.E[B] @ basis.E[C])
    return t


def connection_one_forms(basis, conn):
    """Omega^A_B = Gamma^A_{CB} E^C (the matrix of connection 1-forms)."""
    nE = basis.n_basis
    return [[sum(conn.coeffs[A, C, B] @ basis.E[C] for C in range(nE))
             for B in range(nE)] for A in range(nE)]


def curvature(basis, conn):
    """R^A_B = delta Omega^A_B + Omega^A_C Omega^C_B, canonically projected."""
    cx = basis.complex_
    nE = basis.n_basis
    om = connection_one_forms(basis, conn)
    out = [[None] * nE for _ in range(nE)]
    for A in range(nE):
        for B in range(nE):
            r = _qdelta_op(cx, 1, _canon_project(cx, 1, om[A][B]))
            for C in range(nE):
                r = r + _canon_project(cx, 2, om[A][C] @ om[C][B])
            out[A][B] = r
    return out


def _mult_left_matrix(complex_, x):
    """Matrix of m_L(x): canonical degree-1 -> full pi(Omega^2), in onb bases."""
    c1 = complex_.canon[1]
    s2 = complex_.pi[2]
    cols = [s2.flat().conj() @ (x @ b).ravel() for b in c1.basis]
    return np.stack(cols, axis=1)


def _mult_right_matrix(complex_, x):
    """Matrix of m_R(x): degree-0 (algebra span) -> canonical degree-1.

    The domain basis is the flat-normalized algebra stack so that both bases
    are orthonormal in the same inner product and the numerical adjoint is
    the map adjoint.
    """
    c1 = complex_.canon[1]
    n = complex_.data.hilbert_dim
    alg = complex_.data.algebra / np.sqrt(n)
    cols = [c1.flat().conj() @ (a @ x).ravel() for a in alg]
    return np.stack(cols, axis=1)


def ricci(basis, conn):
    """Ricci components Ric_B = e_A^ad((R^A_B)^perp) as degree-1 operators."""
    cx = basis.complex_
    nE = basis.n_basis
    n = cx.data.hilbert_dim
    r = curvature(basis, conn)
    s2 = cx.pi[2]
    c1 = cx.canon[1]
    mats = [_mult_left_matrix(cx, basis.dual[A]) for A in range(nE)]
    out = []
    for B in range(nE):
        acc = np.zeros(c1.dim, dtype=complex)
        for A in range(nE):
            acc += adjoint(mats[A]) @ (s2.flat().conj() @ r[A][B].ravel())
        out.append((acc @ c1.flat()).reshape(n, n))
    return np.stack(out)


def scalar_curvature(basis, conn):
    """r = (E^{B*})_R^ad(Ric_B) (or the natural-involution variant for N=(1,1)).

    Returns the degree-0 operator; for the models here it is a multiple of the
    identity and the complex multiple is also returned.
    """
    cx = basis.complex_
    data = cx.data
    nE = basis.n_basis
    n = data.hilbert_dim
    ric = ricci(basis, conn)
    c1 = cx.canon[1]
    alg_n = data.algebra / np.sqrt(n)
    total = np.zeros((n, n), dtype=complex)
    for B in range(nE):
        if data.flavor == "n1":
            eb = adjoint(basis.E[B])
        else:
            eb = natural_involution(data, 1, basis.E[B])
        m = _mult_right_matrix(cx, eb)
        coeffs = adjoint(m) @ (c1.flat().conj() @ ric[B].ravel())
        total += np.einsum("i,ijk->jk", coeffs, alg_n)
    eye = np.eye(n)
    value = complex(np.trace(total) / n)
    off = float(np.linalg.norm(total - value * eye) / np.sqrt(n))
    return total, value, off


def unitarity_residual(basis, conn):
    """Max deviation in delta<E^A,E^B> = <nabla E^A, E^B> -/+ <E^A, nabla E^B>.

    The N=1 convention subtracts the second term, the N=(1,1) convention adds
    it with the natural involution in place of the adjoint.
    """
    cx = basis.complex_
    data = cx.data
    dop = data.differential
    nE = basis.n_basis
    worst = 0.0
    plus = data.flavor != "n1"
    for A in range(nE):
        for B in range(nE):
            lhs = _canon_project(cx, 1, commutator(dop, basis.h[A, B]))
            t1 = np.zeros_like(lhs)
            t2 = np.zeros_like(lhs)
            for C in range(nE):
                for D_ in range(nE):
                    t1 -= conn.coeffs[A, C, D_] @ basis.E[C] @ basis.h[D_, B]
                    x = conn.coeffs[B, C, D_] @ basis.E[C]
                    xs = adjoint(x) if data.flavor == "n1" else natural_involution(data, 1, x)
                    t2 -= basis.h[A, D_] @ xs
            rhs = t1 + t2 if plus else t1 - t2
            worst = max(worst, hs_norm(lhs - _canon_project(cx, 1, rhs)))
    return worst


@dataclass
class LeviCivitaSolution:
    connection: Connection
    homogeneous_dim: int     # real dimension of the solution space
    residual: float
    unique: bool


def solve_levi_civita(basis, reality=None, tol=1e-9):
    """Solve for unitary torsionless connections, optionally with a reality flag.

    reality: None (no constraint), 'anti' (anti-self-adjoint coefficients,
    the sphere convention) or 'self' (self-adjoint coefficients, the torus
    convention).  Returns a particular solution and the real dimension of the
    homogeneous solution space; unique iff that dimension is zero.
    """
    cx = basis.complex_
    data = cx.data
    n = data.hilbert_dim
    nE = basis.n_basis
    alg = data.algebra
    na = alg.shape[0]
    nunk = nE ** 3 * na  # complex unknowns

    c1, c2 = cx.canon[1], cx.canon[2]

    # precompute canonical coefficient columns of a_i E^B E^C (degree 2) and of
    # the unitarity blocks, all linear/antilinear in the Gamma coefficients.
    ee2 = {}
    for B in range(nE):
        for C in range(nE):
            prod = basis.E[B] @ basis.E[C]
            cols = np.stack([c2.flat().conj() @ (a @ prod).ravel() for a in alg], axis=1)
            ee2[(B, C)] = cols  # (dim c2, na)

    # torsion rows: for each A: qdelta(E^A) + sum_{BC} Gamma^A_{BC}-columns
    rows_lin = []   # complex-linear part, (neq, nunk)
    rows_anti = []  # antilinear part (acts on conjugated unknowns)
    rhs = []

    def unk_index(A, B, C, i):
        return ((A * nE + B) * nE + C) * na + i

    dE = [c2.project_coeffs(_qdelta_op(cx, 1, basis.E[A])) for A in range(nE)]
    for A in range(nE):
        neq = c2.dim
        lin = np.zeros((neq, nunk), dtype=complex)
        for B in range(nE):
            for C in range(nE):
                for i in range(na):
                    lin[:, unk_index(A, B, C, i)] = ee2[(B, C)][:, i]
        rows_lin.append(lin)
        rows_anti.append(np.zeros((neq, nunk), dtype=complex))
        rhs.append(-dE[A])

    # unitarity rows: delta h^{AB} - (t1 -/+ t2) = 0, t1 linear, t2 antilinear
    plus = data.flavor != "n1"
    star = data.ops.get("star")
    star_inv = np.linalg.inv(star) if star is not None else None
    for A in range(nE):
        for B in range(nE):
            lhs = c1.project_coeffs(_canon_project(cx, 1, commutator(data.differential, basis.h[A, B])))
            neq = c1.dim
            lin = np.zeros((neq, nunk), dtype=complex)
            anti = np.zeros((neq, nunk), dtype=complex)
            for C in range(nE):
                for D_ in range(nE):
                    for i in range(na):
                        v = -alg[i] @ basis.E[C] @ basis.h[D_, B]
                        lin[:, unk_index(A, C, D_, i)] += c1.project_coeffs(v)
                        if data.flavor == "n1":
                            w = -basis.h[A, D_] @ adjoint(alg[i] @ basis.E[C])
                        else:
                            w = -basis.h[A, D_] @ ((-data.zeta) * star
                                                   @ adjoint(alg[i] @ basis.E[C]) @ star_inv)
                        sgn = 1.0 if plus else -1.0
                        anti[:, unk_index(B, C, D_, i)] += sgn * c1.project_coeffs(w)
            rows_lin.append(lin)
            rows_anti.append(anti)
            rhs.append(lhs)

    # reality rows: Gamma -/+ Gamma^* = 0 coefficient-wise (antilinear in Gamma)
    if reality is not None:
        sgn = 1.0 if reality == "anti" else -1.0
        aflat = alg.reshape(na, -1)
        # a_i* = sum_j adjmat[i, j] a_j in the HS-orthonormal algebra basis
        adjmat = np.stack([aflat.conj() @ adjoint(a).ravel() for a in alg]) / n
        neq = na
        for A in range(nE):
            for B in range(nE):
                for C in range(nE):
                    lin = np.zeros((neq, nunk), dtype=complex)
                    anti = np.zeros((neq, nunk), dtype=complex)
                    for i in range(na):
                        lin[i, unk_index(A, B, C, i)] = 1.0
                        anti[:, unk_index(A, B, C, i)] += sgn * adjmat[i]
                    rows_lin.append(lin)
                    rows_anti.append(anti)
                    rhs.append(np.zeros(neq, dtype=complex))

    lin = np.vstack(rows_lin)
    anti = np.vstack(rows_anti)
    b = np.concatenate(rhs)
    # realify: unknown z = x + iy; equations lin z + anti conj(z) = b
    mreal = np.block([
        [lin.real + anti.real, -lin.imag + anti.imag],
        [lin.imag + anti.imag, lin.real - anti.real],
    ])
    breal = np.concatenate([b.real, b.imag])
    sol, *_ = np.linalg.lstsq(mreal, breal, rcond=None)
    resid = float(np.linalg.norm(mreal @ sol - breal))
    rank = rank_of(mreal, tol=1e-9)
    hom_dim = 2 * nunk - rank
    z = sol[:nunk] + 1j * sol[nunk:]
    coeffs = np.einsum("ui,ijk->ujk", z.reshape(nE ** 3, na), alg).reshape(nE, nE, nE, n, n)
    return LeviCivitaSolution(connection=Connection(coeffs), homogeneous_dim=hom_dim,
                              residual=resid, unique=hom_dim == 0)


def rotate_basis(basis, u):
    """Rebuild the cotangent basis under the invertible scalar rotation u^A_B."""
    e = np.einsum("ab,bjk->ajk", np.asarray(u, dtype=complex), basis.E)
    return build_cotangent_basis(basis.complex_, e)
