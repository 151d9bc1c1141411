"""Dense complex linear algebra and operator-subspace arithmetic.

Operators are plain complex numpy arrays.  A subspace of operators is an
:class:`OperatorSpan`: a stack of matrices orthonormal under the normalized
Hilbert-Schmidt inner product ``hs_inner(X, Y) = Tr(X* Y) / n``.  All rank
decisions use a relative singular-value cutoff (default ``1e-9``); spectra in
the models handled here are well separated, so the cutoff is not delicate.

Everything in this module is a pure function of its inputs; spans are frozen
after construction and safe to share between threads.
"""

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9


def adjoint(m):
    """Conjugate transpose."""
    return m.conj().T


def hs_inner(x, y):
    """Normalized Hilbert-Schmidt inner product Tr(x* y)/n (so <I,I> = 1).

    This coincides with the sesquilinear form induced by the normalized-trace
    integral on a finite-dimensional Hilbert space.
    """
    if x.shape != y.shape or x.shape[0] != x.shape[1]:
        raise ValueError(f"hs_inner needs equal square shapes, got {x.shape} and {y.shape}")
    return complex(np.vdot(x, y) / x.shape[0])


def hs_norm(x):
    return float(np.linalg.norm(x) / np.sqrt(x.shape[0]))


@dataclass(frozen=True)
class OperatorSpan:
    """Subspace of n x n operators with an HS-orthonormal basis.

    ``basis`` is a (k, n, n) array; rows of ``basis.reshape(k, n*n)`` are
    orthonormal in the *unnormalized* flat inner product, which makes them
    orthonormal under ``hs_inner`` up to the fixed factor n handled internally.
    """

    ambient_dim: int
    basis: np.ndarray  # (k, n, n)
    tol: float = DEFAULT_TOL

    @property
    def dim(self):
        return self.basis.shape[0]

    def flat(self):
        return self.basis.reshape(self.dim, -1)

    def flat_conj(self):
        cached = getattr(self, "_flat_conj", None)
        if cached is None:
            cached = self.flat().conj()
            object.__setattr__(self, "_flat_conj", cached)
        return cached

    def project_coeffs(self, x):
        """Coefficients of the orthogonal projection of x onto the span."""
        return self.flat_conj() @ x.ravel()

    def project(self, x):
        if x.shape != (self.ambient_dim, self.ambient_dim):
            raise ValueError(f"ambient dimension mismatch: {x.shape} vs {self.ambient_dim}")
        c = self.project_coeffs(x)
        return (c @ self.flat()).reshape(x.shape)

    def contains(self, x, tol=None):
        tol = self.tol if tol is None else tol
        nx = np.linalg.norm(x)
        if nx == 0:
            return True
        return np.linalg.norm(x - self.project(x)) <= tol * nx

    def residual(self, x):
        """Relative distance of x from the span."""
        nx = np.linalg.norm(x)
        if nx == 0:
            return 0.0
        return float(np.linalg.norm(x - self.project(x)) / nx)


def orthonormalize(gens, tol=DEFAULT_TOL, ambient_dim=None):
    """SVD-orthonormalize a list/stack of same-shaped square matrices.

    Singular values <= tol * sigma_max are discarded, so the result dimension
    is the numerical rank of the generating family.  An empty family yields an
    empty span (not an error).
    """
    gens = list(gens)
    if not gens:
        if ambient_dim is None:
            raise ValueError("empty generator list needs an explicit ambient_dim")
        return OperatorSpan(ambient_dim, np.zeros((0, ambient_dim, ambient_dim), dtype=complex), tol)
    n = gens[0].shape[0]
    for g in gens:
        if g.shape != (n, n):
            raise ValueError(f"generators must share one square shape, got {g.shape} vs {(n, n)}")
    v = np.stack([g.ravel() for g in gens]).astype(complex)
    _, s, vh = np.linalg.svd(v, full_matrices=False)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return OperatorSpan(n, vh[:r].reshape(r, n, n), tol)


def span_from_flat(flat_rows, n, tol=DEFAULT_TOL):
    """Wrap already-orthonormal flat rows (k, n*n) as an OperatorSpan."""
    k = flat_rows.shape[0]
    return OperatorSpan(n, flat_rows.reshape(k, n, n), tol)


def span_sum(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch in span_sum")
    return orthonormalize(list(a.basis) + list(b.basis), tol=min(a.tol, b.tol), ambient_dim=a.ambient_dim)


def span_project(s, x):
    return s.project(x)


def span_contains(s, x, tol=None):
    return s.contains(x, tol=tol)


def span_complement_within(big, small):
    """Orthocomplement of `small` inside `big` (small must lie in big).

    The cutoff is absolute (relative to the unit-norm rows of `big`): when the
    remainder is pure numerical noise the complement is empty, which a
    relative-to-largest cutoff would miss.
    """
    sf = small.flat()
    rows = big.flat()
    rows = rows - (rows @ sf.conj().T) @ sf
    _, s, vh = np.linalg.svd(rows, full_matrices=False)
    atol = max(np.sqrt(big.tol) * 1e-2, 10 * big.tol)
    r = int(np.sum(s > atol))
    return span_from_flat(vh[:r], big.ambient_dim, tol=big.tol)


def projector_distance(a, b):
    """Frobenius distance of the orthogonal projectors onto two spans."""
    af, bf = a.flat(), b.flat()
    pa = af.conj().T @ af
    pb = bf.conj().T @ bf
    return float(np.linalg.norm(pa - pb))


class StreamingSpan:
    """Incremental orthonormal basis of a subspace of C^m, fed by column chunks.

    Used where the generating family is too large to hold at once (the level-2
    sphere junk computation streams ~4e4 columns of dimension ~1.3e4).  New
    chunks are orthogonalized against the accumulated basis twice (classical
    Gram-Schmidt repeated) and the residuals are SVD-compressed.

    Acceptance of new directions uses a sqrt(tol) relative cutoff rather than
    tol: repeated-projection cancellation noise sits a few orders above the
    one-shot SVD noise floor, while every genuine direction of the structured
    models handled here is separated from zero by far more than sqrt(tol).
    Rank decisions made downstream from the accumulated basis re-apply the
    strict tolerance.
    """

    def __init__(self, length, tol=DEFAULT_TOL, batch=512):
        self.length = length
        self.tol = tol
        self.accept_tol = tol ** 0.5
        self.batch = batch
        self.q = np.zeros((0, length), dtype=complex)
        self.qc = np.zeros((0, length), dtype=complex)  # conjugate kept in sync
        self.sigma_max = 0.0
        self._pending = []
        self._pending_cols = 0

    @property
    def dim(self):
        return self.q.shape[0]

    def add(self, cols, floor=0.0):
        """Queue new generating columns ((length, k) array); flushed in batches.

        `floor` sets a lower bound on the scale reference, so that a chunk
        that is pure numerical noise relative to its generating construction
        contributes nothing (e.g. operator products that cancel exactly).
        """
        if cols.size == 0:
            return
        self.sigma_max = max(self.sigma_max, float(np.linalg.norm(cols, axis=0).max(initial=0.0)),
                             float(floor))
        self._pending.append(cols)
        self._pending_cols += cols.shape[1]
        if self._pending_cols >= self.batch:
            self.flush()

    def flush(self):
        if not self._pending:
            return
        r = np.concatenate(self._pending, axis=1)
        self._pending = []
        self._pending_cols = 0
        for _ in range(2):
            if self.dim:
                r = r - self.q.T @ (self.qc @ r)
        # rank-revealing step through the Gram matrix: ~4x cheaper than a
        # direct SVD; squaring the singular values is harmless because the
        # acceptance threshold sqrt(tol) sits far above sqrt(machine eps)
        g = r.conj().T @ r
        evals, vecs = np.linalg.eigh(g)
        if not evals.size:
            return
        s = np.sqrt(np.maximum(evals[::-1], 0.0))
        vecs = vecs[:, ::-1]
        keep = s > self.accept_tol * max(self.sigma_max, s[0])
        if keep.any():
            newrows = ((r @ vecs[:, keep]) / s[keep]).T
            if self.dim:  # one more orthogonalization pass against the basis
                newrows = newrows - (newrows @ self.qc.T) @ self.q
            norms = np.linalg.norm(newrows, axis=1)
            newrows = newrows[norms > 0.5] / norms[norms > 0.5, None]
            self.q = np.vstack([self.q, newrows])
            self.qc = np.vstack([self.qc, newrows.conj()])

    def residuals(self, cols):
        self.flush()
        r = cols - self.q.T @ (self.qc @ cols)
        return np.linalg.norm(r, axis=0)

    def to_span(self, n):
        self.flush()
        return span_from_flat(self.q, n, tol=self.tol)


@dataclass(frozen=True)
class LinearMap:
    """Matrix of a linear map in declared coordinate bases (codomain x domain)."""

    domain_dim: int
    codomain_dim: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.codomain_dim, self.domain_dim):
            raise ValueError(f"matrix shape {self.matrix.shape} != ({self.codomain_dim}, {self.domain_dim})")


def rank_of(m, tol=DEFAULT_TOL):
    """Numerical rank: number of singular values > tol * sigma_max."""
    m = m.matrix if isinstance(m, LinearMap) else m
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol * s[0])) if s[0] > 0 else 0


def kernel_projector(m, tol=DEFAULT_TOL):
    """Orthogonal projector onto ker(m), as I - Vr Vr* from the thin SVD.

    No kernel basis is materialized; for wide matrices (the junk pipeline) the
    kernel has huge dimension while Vr stays thin.
    """
    m = m.matrix if isinstance(m, LinearMap) else m
    ncols = m.shape[1]
    if m.size == 0:
        return np.eye(ncols, dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=False)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    vr = vh[:r]
    return np.eye(ncols, dtype=complex) - vr.conj().T @ vr


def pinv_factors(m, tol=DEFAULT_TOL):
    """Thin-SVD factors for repeated least-squares solves against m."""
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    u, s, vh = u[:, :r], s[:r], vh[:r]

    def solve(rhs):
        return vh.conj().T @ ((u.conj().T @ rhs) / s)

    return solve


def eig_hermitian(h, tol=DEFAULT_TOL):
    """Ascending real eigenvalues; rejects visibly non-Hermitian input."""
    dev = np.linalg.norm(h - adjoint(h))
    if dev > tol * max(1.0, np.linalg.norm(h)):
        raise ValueError(f"eig_hermitian: input is not Hermitian (deviation {dev:.2e})")
    return np.linalg.eigvalsh(h)


def commutator(x, y):
    return x @ y - y @ x


def anticommutator(x, y):
    return x @ y + y @ x
