"""The level-k fuzzy 3-sphere and its BRST / broken-supersymmetry variants.

The N=1 model lives on H0 (x) W with dim W = 8 (two anti-commuting Clifford
copies); the algebra is all of End(H0).  Internally the Clifford frame is
unit-normalized ({psi^A, psi^B} = 2 delta^{AB}), which is the index
calibration that makes the whole identity table of the differential algebra
(basis products, delta e^A = -i f^A, the delta^{AB} Hermitian structure and
the scalar curvature -3/2) come out exactly; the declared geometric metric
g_AB = 2 delta_AB appears explicitly in the supersymmetric variant, whose
Laplacian identity Delta = g^{AB} J_A J_B + dim(G)/24 is frame-sensitive.
Calibration failures raise CalibrationError naming the failing identity.
"""

from dataclasses import dataclass

import numpy as np

from .clifford import build_fermion_algebra, grading_volume, levi_civita, psi_pair
from .linalg import adjoint, anticommutator, commutator, hs_norm, projector_distance
from .spectral_forms import SpectralData, build_form_complex, canonical_rep
from .su2rep import algebra_basis, build_level_space, right_commutant_basis


class CalibrationError(RuntimeError):
    """An index-convention identity failed during model construction."""


def h0_dimension(k):
    return (k + 1) * (k + 2) * (2 * k + 3) // 6


@dataclass(frozen=True)
class SphereModel:
    k: int
    level: object            # LevelSpace
    data: SpectralData
    e: np.ndarray             # (3, n, n) basis 1-forms
    f: np.ndarray             # (3, n, n) basis 2-forms
    g_top: np.ndarray         # (n, n) top form
    metric: np.ndarray        # declared g_AB = 2 delta_AB
    eps: np.ndarray


def build_sphere(k, tol=1e-9):
    """Assemble the N=1 data (End(H0), H0 (x) W, D, gamma) at level k."""
    if k < 1:
        raise ValueError("level k must be >= 1")
    eps = levi_civita(3)
    level = build_level_space(k)
    n0 = level.dim
    ferm = build_fermion_algebra(np.eye(3))
    psi, _ = psi_pair(ferm)
    p3 = psi[0] @ psi[1] @ psi[2]
    dim_w = ferm.dim
    n = n0 * dim_w

    d_op = sum(np.kron(level.left[a], psi[a]) for a in range(3)) \
        - 0.5j * np.kron(np.eye(n0), p3)
    gamma = np.kron(np.eye(n0), grading_volume(ferm, "both_copies"))

    checks = {
        "D self-adjoint": hs_norm(d_op - adjoint(d_op)),
        "{gamma, D} = 0": hs_norm(anticommutator(gamma, d_op)),
        "gamma involution": hs_norm(gamma @ gamma - np.eye(n)),
    }
    for name, r in checks.items():
        if r > 1e-10:
            raise CalibrationError(f"sphere build: identity '{name}' fails with residual {r:.2e}")

    # lifting a (x) I preserves HS-orthonormality (the trace gains a factor
    # dim_w and the normalization another)
    alg = np.stack([np.kron(a, np.eye(dim_w)) for a in algebra_basis(level)])
    data = SpectralData(flavor="n1", algebra=alg, hilbert_dim=n,
                        ops={"D": d_op, "gamma": gamma}, tol=tol)

    e = np.stack([np.kron(np.eye(n0), psi[a]) for a in range(3)])
    f = np.stack([np.kron(np.eye(n0), 0.5 * sum(eps[a, b, c] * psi[b] @ psi[c]
                                                for b in range(3) for c in range(3)))
                  for a in range(3)])
    g_top = np.kron(np.eye(n0), p3)
    return SphereModel(k=k, level=level, data=data, e=e, f=f, g_top=g_top,
                       metric=2 * np.eye(3), eps=eps)


def verify_structure(model, complex_):
    """Residuals of the identity table of the sphere differential algebra."""
    eps = model.eps
    e, f, g_top = model.e, model.f, model.g_top
    cx = complex_
    res = {}
    worst = 0.0
    for a in model.data.algebra[:: max(1, len(model.data.algebra) // 6)]:
        for x in (e[0], f[1], g_top):
            worst = max(worst, hs_norm(commutator(a, x)))
    res["forms commute with algebra"] = worst

    worst = 0.0
    for a in range(3):
        for b in range(3):
            want = sum(eps[a, b, c] * f[c] for c in range(3))
            diff = canonical_rep(cx, 2, cx.pi[2].project(e[a] @ e[b])) - cx.canon[2].project(want)
            worst = max(worst, hs_norm(diff))
    res["e^A e^B = eps^{ABC} f^C"] = worst

    worst = 0.0
    for a in range(3):
        for b in range(3):
            want = (1.0 if a == b else 0.0) * g_top
            prod = cx.pi[3].project(e[a] @ f[b])
            diff = canonical_rep(cx, 3, prod) - cx.canon[3].project(want)
            worst = max(worst, hs_norm(diff))
    res["e^A f^B = delta^{AB} g"] = worst

    from .geometry import _qdelta_op
    worst = 0.0
    for a in range(3):
        d_e = _qdelta_op(cx, 1, e[a])
        worst = max(worst, hs_norm(d_e - cx.canon[2].project(-1j * f[a])))
    res["delta e^A = -i f^A"] = worst

    worst = 0.0
    for a in range(3):
        fa = cx.canon[2].project(f[a])
        worst = max(worst, hs_norm(_qdelta_op(cx, 2, fa)))
    res["delta f^A = 0"] = worst
    return res


def sphere_report(model, kmax=4, full_depth=None, progress=None):
    """Full topology + geometry report of the level-k sphere model.

    Returns a dict with computed dimensions, betti numbers, the harmonic-sector
    projector comparison, the identity-table residuals and the connection
    suite; report["assertions"] lists (name, passed, observed, expected).
    """
    from .geometry import (Connection, build_cotangent_basis, curvature, ricci,
                           scalar_curvature, solve_levi_civita, torsion)

    k = model.k
    if full_depth is None:
        full_depth = 2 if k <= 1 else 1
    na = model.data.algebra.shape[0]
    cx = build_form_complex(model.data, kmax=kmax, full_depth=full_depth, progress=progress)

    d_k = h0_dimension(k)
    assertions = []

    def check(name, observed, expected, tol=0.0):
        if tol:
            ok = abs(observed - expected) <= tol
        else:
            ok = observed == expected
        assertions.append({"name": name, "passed": bool(ok),
                           "observed": _plain(observed), "expected": _plain(expected)})
        return ok

    pi_dims = cx.dims("pi")
    junk_dims = cx.dims("junk")
    canon_dims = cx.dims("canon")
    top = min(kmax, 4) + 1
    check("dim pi(Omega^1)", pi_dims[1], 3 * na)
    check("junk_2 = algebra", junk_dims[2], na)
    check("junk_3 = pi(Omega^1)", junk_dims[3], 3 * na)
    check("vector-space dims", tuple(canon_dims[:top]), (na, 3 * na, 3 * na, na, 0)[:top])
    check("module ranks", tuple(cx.module_ranks()[:top]), (1, 3, 3, 1, 0)[:top])
    check("betti", tuple(cx.betti[:4]), (d_k, 0, 0, d_k))

    # harmonic sector = right-action commutant
    from .linalg import orthonormalize
    h0 = _h0_span(cx)
    comm = right_commutant_basis(model.level)
    dim_w = model.data.hilbert_dim // model.level.dim
    comm_span = orthonormalize([np.kron(c, np.eye(dim_w)) for c in comm],
                               ambient_dim=model.data.hilbert_dim)
    h0_dist = projector_distance(h0, comm_span)
    check("H^0 projector matches commutant", h0_dist, 0.0, tol=1e-9)

    structure = verify_structure(model, cx)
    for name, r in structure.items():
        check(f"identity: {name}", r, 0.0, tol=1e-10)

    basis = build_cotangent_basis(cx, model.e)
    herm_dev = max(hs_norm(basis.h[a, b] - (1.0 if a == b else 0.0) * np.eye(model.data.hilbert_dim))
                   for a in range(3) for b in range(3))
    check("<e^A, e^B> = delta^{AB} I", herm_dev, 0.0, tol=1e-9)

    lc = solve_levi_civita(basis, reality="anti")
    check("real LC connection unique", lc.homogeneous_dim, 0)
    want = Connection.from_scalars(basis, 0.5j * model.eps)
    gamma_dev = float(np.linalg.norm(lc.connection.coeffs - want.coeffs) /
                      np.sqrt(model.data.hilbert_dim))
    check("Gamma^A_{BC} = (i/2) eps^{ABC}", gamma_dev, 0.0, tol=1e-9)

    t = torsion(basis, want)
    check("torsion(LC) = 0", float(max(hs_norm(x) for x in t)), 0.0, tol=1e-10)

    r = curvature(basis, want)
    worst = 0.0
    for a in range(3):
        for b in range(3):
            target = 0.25 * sum(model.eps[a, c, b] * model.f[c] for c in range(3))
            worst = max(worst, hs_norm(r[a][b] - cx.canon[2].project(target)))
    check("curvature = (1/4) eps^{ABC} f^B (x) e^C", worst, 0.0, tol=1e-9)

    ric = ricci(basis, want)
    worst = max(hs_norm(ric[b] + 0.5 * model.e[b]) for b in range(3))
    check("Ricci = -(1/2) e^A (x) e^A", worst, 0.0, tol=1e-9)

    _, scal, off = scalar_curvature(basis, want)
    check("scalar curvature", scal.real, -1.5, tol=1e-9)
    check("scalar curvature identity part", abs(scal.imag) + off, 0.0, tol=1e-9)

    report = {
        "model": {"level": k, "hilbert_dim": model.data.hilbert_dim, "algebra_dim": na},
        "dims": {"pi": list(pi_dims), "junk": list(junk_dims), "canon": list(canon_dims)},
        "module_ranks": [_plain(x) for x in cx.module_ranks()],
        "betti": list(map(int, cx.betti)),
        "h0_projector_distance": h0_dist,
        "identities": {k_: float(v) for k_, v in structure.items()},
        "scalar_curvature": scal.real,
        "diagnostics": {k_: _plain(v) for k_, v in cx.diagnostics.items()},
        "assertions": assertions,
        "pass": all(a["passed"] for a in assertions),
    }
    return report, cx


def _h0_span(cx):
    from .linalg import orthonormalize, rank_of
    m = cx.qdelta[0]
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    r = rank_of(m, tol=1e-8)
    kern = vh[r:].conj()
    ops = np.einsum("ki,ijl->kjl", kern, cx.canon[0].basis)
    return orthonormalize(list(ops), ambient_dim=cx.data.hilbert_dim)


def _plain(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, tuple):
        return tuple(_plain(v) for v in x)
    if isinstance(x, list):
        return [_plain(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# N=(1,1) variants
# ---------------------------------------------------------------------------

def build_brst(k, tol=1e-9):
    """N=(1,1) data from the BRST charge of the level-k left action.

    Ghosts carry the positive-definite CAR inner product with metric
    gfield = 2 delta ({c^A, c^B*} = (1/2) delta^{AB}); d = Q, T the ghost
    number, gamma its parity, and the Hodge volume satisfies *^2 = -I and
    *Q = Q* * (the adjoint intertwining relation, i.e. zeta = +1).
    """
    eps = levi_civita(3)
    level = build_level_space(k)
    n0 = level.dim
    ghost = build_fermion_algebra(2 * np.eye(3))
    c = ghost.raised_crea      # c^A, creation-like, {c^A, c^B*} = (1/2) delta
    cs = ghost.raised_anni
    dim_w = ghost.dim
    n = n0 * dim_w

    cub = sum(eps[a, b, cc] * c[a] @ c[b] @ cs[cc]
              for a in range(3) for b in range(3) for cc in range(3))
    q = sum(np.kron(level.left[a], c[a]) for a in range(3)) - 1j * np.kron(np.eye(n0), cub)
    t_w = 2 * sum(c[a] @ cs[a] for a in range(3))
    gamma_w = np.diag([(-1) ** bin(occ).count("1") for occ in range(dim_w)]).astype(complex)
    star_w = grading_volume(ghost, "single_copy")

    t_op = np.kron(np.eye(n0), t_w)
    gamma = np.kron(np.eye(n0), gamma_w)
    star = np.kron(np.eye(n0), star_w)

    checks = {
        "Q nilpotent": hs_norm(q @ q),
        "[T, Q] = Q": hs_norm(commutator(t_op, q) - q),
        "star^2 = -I": hs_norm(star @ star + np.eye(n)),
        "star Q = Q^adj star": hs_norm(star @ q - adjoint(q) @ star),
    }
    for name, r in checks.items():
        if r > 1e-10:
            raise CalibrationError(f"BRST build: identity '{name}' fails with residual {r:.2e}")

    alg = np.stack([np.kron(a, np.eye(dim_w)) for a in algebra_basis(level)])
    data = SpectralData(flavor="n11", algebra=alg, hilbert_dim=n,
                        ops={"d": q, "gamma": gamma, "star": star, "T": t_op},
                        zeta=1.0, tol=tol)
    forms = np.stack([np.kron(np.eye(n0), c[a]) for a in range(3)])
    return data, forms, checks


def build_broken_susy(k, tol=1e-9):
    """The two anti-commuting Dirac operators of the level-k sphere.

    Both carry the geometric metric g = 2 delta; dtil = (D + i Dbar)/2 is the
    deformed differential and the Laplacian {dtil, dtil*} equals
    g^{AB} J_A J_B + dim(G)/24 with strictly positive spectrum (minimum 1/8).
    """
    eps = levi_civita(3)
    level = build_level_space(k)
    n0 = level.dim
    ferm = build_fermion_algebra(2 * np.eye(3))
    psi, psibar = psi_pair(ferm)
    dim_w = ferm.dim
    n = n0 * dim_w
    f_low = 2 * eps  # f_ABC = f_AB^D g_DC

    def cubic(ops):
        return sum(f_low[a, b, cc] * ops[a] @ ops[b] @ ops[cc]
                   for a in range(3) for b in range(3) for cc in range(3))

    d_c = sum(np.kron(level.left[a], psi[a]) for a in range(3)) \
        - 1j / 12 * np.kron(np.eye(n0), cubic(psi))
    d_cb = sum(np.kron(level.right[a], psibar[a]) for a in range(3)) \
        - 1j / 12 * np.kron(np.eye(n0), cubic(psibar))

    dtil = 0.5 * (d_c + 1j * d_cb)
    ginv = 0.5 * np.eye(3)
    laplacian = dtil @ adjoint(dtil) + adjoint(dtil) @ dtil
    casimir = sum(ginv[a, b] * np.kron(level.left[a] @ level.left[b], np.eye(dim_w))
                  for a in range(3) for b in range(3))
    target = casimir + (3 / 24) * np.eye(n)

    checks = {
        "D^2 = Dbar^2": hs_norm(d_c @ d_c - d_cb @ d_cb),
        "{D, Dbar} = 0": hs_norm(anticommutator(d_c, d_cb)),
        "dtil nilpotent": hs_norm(dtil @ dtil),
        "Laplacian = g^{AB} J_A J_B + dimG/24": hs_norm(laplacian - target),
    }
    for name, r in checks.items():
        if r > 1e-10:
            raise CalibrationError(f"broken-SUSY build: identity '{name}' fails with residual {r:.2e}")
    evals = np.linalg.eigvalsh(laplacian)
    report = {
        "residuals": {k_: float(v) for k_, v in checks.items()},
        "min_laplacian_eigenvalue": float(evals[0]),
        "kernel_dimension": int(np.sum(evals < 1e-10)),
    }
    return d_c, d_cb, dtil, report
