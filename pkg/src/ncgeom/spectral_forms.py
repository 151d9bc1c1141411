"""Represented differential forms, junk ideals, cohomology and Hermitian data.

The universal calculus is modelled exactly on the coefficient spaces
A (x) Abar^(x)k over a full linear basis of the (finite-dimensional) algebra,
where Abar is the HS-orthocomplement of the identity inside A; every word
a0.db(a1)...db(ak) of the universal algebra is a linear combination of such
basis words.  For each word degree m the engine streams the *stacked* columns

    ( pi(word), pi(delta word) )

through an incremental orthonormal basis.  From that single pass it reads off

  * pi(Omega^m)            -- the span of the first components,
  * pi(delta J^m)          -- second components of combinations whose first
                              component vanishes (the junk in degree m+1,
                              computed without materializing a kernel basis),
  * the quotient differential -- the graph map v -> second(first^+ v), which
                              is well defined modulo junk by construction.

Degrees past ``full_depth`` use the two-sided ideal property of junk
(junk_{m+1} contains junk_m * Om^1 + Om^1 * junk_m, with saturation checked by
random re-generation) and a Leibniz lift for the quotient differential.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_TOL, OperatorSpan, StreamingSpan, adjoint, anticommutator, commutator,
    hs_inner, hs_norm, orthonormalize, pinv_factors, rank_of,
    span_complement_within, span_from_flat, span_sum,
)

FLAVORS = ("n1", "n11", "hermitian", "kahler", "n44", "symplectic")


@dataclass(frozen=True)
class SpectralData:
    """Validated container for one set of spectral data.

    ``algebra`` is a stack of operators on H forming an HS-orthonormal basis
    of the represented algebra, with the identity inside its span.  ``ops``
    holds the flavor's named operators (all on H):

      n1:         D, gamma
      n11:        d, gamma, star
      hermitian:  del, delbar, T, Tbar, gamma, star  (d is derived)
      kahler:     same as hermitian
      n44:        G1p, G1m, G2p, G2m, G1pb, ..., T1, T2, T3, T1b, ..., box,
                  gamma, star
      symplectic: d, L3, Lp, Lm, gamma, star (+ optional J0)
    """

    flavor: str
    algebra: np.ndarray      # (na, n, n)
    hilbert_dim: int
    ops: dict
    zeta: complex = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")

    @property
    def differential(self):
        """The operator whose commutators represent the universal differential."""
        if self.flavor == "n1":
            return self.ops["D"]
        if self.flavor in ("n11", "symplectic"):
            return self.ops["d"]
        if self.flavor in ("hermitian", "kahler"):
            return self.ops["del"] + self.ops["delbar"]
        raise ValueError(f"flavor {self.flavor} has no single driving differential")

    def require(self, *names):
        missing = [n for n in names if n not in self.ops]
        if missing:
            raise ValueError(f"flavor {self.flavor} is missing operators {missing}")
        return [self.ops[n] for n in names]


def abar_basis(data):
    """Orthonormal basis of the identity's HS-orthocomplement within A."""
    n = data.hilbert_dim
    eye = np.eye(n, dtype=complex)
    flat = data.algebra.reshape(data.algebra.shape[0], -1)
    iv = eye.ravel() / np.linalg.norm(eye.ravel())
    red = flat - np.outer(flat @ iv.conj(), iv)
    _, s, vh = np.linalg.svd(red, full_matrices=False)
    r = int(np.sum(s > data.tol * s[0])) if s.size and s[0] > 0 else 0
    return vh[:r].reshape(r, n, n)


# ---------------------------------------------------------------------------
# degree passes
# ---------------------------------------------------------------------------

@dataclass
class DegreePass:
    """Output of one stacked word pass at word degree m."""

    m: int
    pi_span: OperatorSpan          # pi(Omega^m)
    junk_next: OperatorSpan        # pi(delta J^m), lives in degree m+1
    p_parts: np.ndarray            # (r, n^2) first components of the stacked basis
    q_parts: np.ndarray            # (r, n^2) second components
    solve_p: object = field(repr=False, default=None)

    def graph_image(self, vflat):
        """pi(delta(lift)) for any least-squares universal lift of vflat."""
        return self.solve_p(vflat) @ self.q_parts


def _word_chunks(data, m, dop):
    """Yield stacked column chunks for all degree-m words a_i0 (x) abar_(j1..jm).

    Chunks are grouped by the tail word (j1..jm); each chunk contains the
    2 n^2-long stacked columns for every choice of the head basis element.
    """
    n = data.hilbert_dim
    heads = data.algebra
    dheads = np.stack([commutator(dop, a) for a in heads])
    if m == 0:
        cols = np.empty((2 * n * n, heads.shape[0]), dtype=complex)
        for i in range(heads.shape[0]):
            cols[: n * n, i] = heads[i].ravel()
            cols[n * n:, i] = dheads[i].ravel()
        yield cols
        return
    abar = abar_basis(data)
    dbar = np.stack([commutator(dop, a) for a in abar])
    nb = dbar.shape[0]

    # tails multiply on the right of the head in word order a0 db1 db2 ...
    def rec_left(prefix, depth):
        if depth == m:
            cols = np.empty((2 * n * n, heads.shape[0]), dtype=complex)
            ht = heads @ prefix
            dht = dheads @ prefix
            cols[: n * n] = ht.reshape(heads.shape[0], -1).T
            cols[n * n:] = dht.reshape(heads.shape[0], -1).T
            yield cols
            return
        for j in range(nb):
            new = dbar[j] if prefix is None else prefix @ dbar[j]
            yield from rec_left(new, depth + 1)

    yield from rec_left(None, 0)


def degree_pass(data, m, progress=None):
    """Stream all degree-m words; return spans and the quotient graph map."""
    n = data.hilbert_dim
    dop = data.differential
    acc = StreamingSpan(2 * n * n, tol=data.tol)
    count = 0
    for cols in _word_chunks(data, m, dop):
        acc.add(cols)
        count += cols.shape[1]
        if progress is not None:
            progress(m, count, acc.dim)
    acc.flush()
    stacked = acc.q  # (r, 2 n^2)
    p_parts = stacked[:, : n * n]
    q_parts = stacked[:, n * n:]
    pi_span = orthonormalize([row.reshape(n, n) for row in p_parts],
                             tol=data.tol, ambient_dim=n)
    # junk: second components of stacked-basis combinations with vanishing
    # first component; the combinations come from the SVD kernel of p_parts.
    if p_parts.shape[0]:
        _, s, vh = np.linalg.svd(p_parts.T, full_matrices=True)
        rank = int(np.sum(s > data.tol * s[0])) if s.size and s[0] > 0 else 0
        kern = vh[rank:].conj()  # rows: coefficient combinations with zero p-part
        junk_rows = kern @ q_parts
        junk = orthonormalize([row.reshape(n, n) for row in junk_rows],
                              tol=data.tol, ambient_dim=n)
    else:
        junk = orthonormalize([], tol=data.tol, ambient_dim=n)
    solve_p = pinv_factors(p_parts.T, tol=data.tol)
    return DegreePass(m=m, pi_span=pi_span, junk_next=junk,
                      p_parts=p_parts, q_parts=q_parts, solve_p=solve_p)


def product_span(left, right, tol=DEFAULT_TOL, rng=None, batch=256, max_rounds=64):
    """Span of products x*y for x in left, y in right, by random saturation.

    Random unit combinations of the two spans are multiplied until the rank is
    stable for two consecutive batches (the dimension of a product span is
    independent of the generating sample; stability is the stopping rule).
    """
    rng = np.random.default_rng(0) if rng is None else rng
    n = left.ambient_dim
    if left.dim == 0 or right.dim == 0:
        return orthonormalize([], tol=tol, ambient_dim=n)
    acc = StreamingSpan(n * n, tol=tol)
    stable = 0
    for _ in range(max_rounds):
        before = acc.dim
        cl = rng.standard_normal((batch, left.dim)) + 1j * rng.standard_normal((batch, left.dim))
        cr = rng.standard_normal((batch, right.dim)) + 1j * rng.standard_normal((batch, right.dim))
        xs = np.einsum("bi,ijk->bjk", cl, left.basis)
        ys = np.einsum("bi,ijk->bjk", cr, right.basis)
        prods = np.einsum("bij,bjk->bik", xs, ys)
        # products of unit-coefficient combinations carry this scale even when
        # the operator products themselves cancel exactly
        floor = float(np.linalg.norm(cl, axis=1).mean() * np.linalg.norm(cr, axis=1).mean()) / n
        acc.add(prods.reshape(batch, -1).T, floor=floor)
        acc.flush()
        stable = stable + 1 if acc.dim == before else 0
        if stable >= 2:
            break
        if acc.dim >= left.dim * right.dim or acc.dim >= n * n:
            break
    return acc.to_span(n)


def pi_forms(data, kmax, full_depth=None, progress=None):
    """Spans of pi(Omega^k) for k = 0..kmax."""
    full_depth = kmax if full_depth is None else min(full_depth, kmax)
    spans = []
    passes = []
    for m in range(min(full_depth, kmax) + 1):
        dp = degree_pass(data, m, progress=progress)
        passes.append(dp)
        spans.append(dp.pi_span)
    one = spans[1] if len(spans) > 1 else None
    for m in range(len(spans), kmax + 1):
        spans.append(product_span(spans[-1], one, tol=data.tol))
    return spans


@dataclass
class FormComplex:
    """Per-degree data of the represented de Rham complex."""

    data: SpectralData
    kmax: int
    pi: list
    junk: list
    canon: list
    qdelta: list      # qdelta[k]: matrix canon_k -> canon_{k+1}
    betti: list
    diagnostics: dict

    def dims(self, which="canon"):
        spans = getattr(self, which)
        return tuple(s.dim for s in spans)

    def module_ranks(self):
        """Canonical dimensions divided by dim A where the division is exact."""
        na = self.data.algebra.shape[0]
        out = []
        for s in self.canon:
            out.append(s.dim // na if s.dim % na == 0 else s.dim / na)
        return tuple(out)


def build_form_complex(data, kmax, full_depth=2, progress=None, verify_samples=8):
    """Assemble spans, junk, canonical spaces, quotient differential and betti.

    Degrees <= full_depth+1 get exact junk from full word passes; higher
    degrees use ideal recursion (with sampled verification against fresh
    delta-images of random null words built from products).
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    full_depth = min(full_depth, kmax)
    n = data.hilbert_dim
    rng = np.random.default_rng(20240801)

    passes = [degree_pass(data, m, progress=progress) for m in range(full_depth + 1)]
    pi = [p.pi_span for p in passes]
    junk = [orthonormalize([], tol=data.tol, ambient_dim=n)]  # junk_0 = {0}
    junk += [passes[m].junk_next for m in range(full_depth + 1)]  # junk_{m+1}

    one = pi[1]
    while len(pi) <= kmax:
        pi.append(product_span(pi[-1], one, tol=data.tol, rng=rng))
    while len(junk) <= kmax:
        m = len(junk)  # junk_m from junk_{m-1}
        grown = span_sum(product_span(junk[m - 1], one, tol=data.tol, rng=rng),
                         product_span(one, junk[m - 1], tol=data.tol, rng=rng))
        junk.append(grown)

    canon = [span_complement_within(pi[k], junk[k]) if junk[k].dim else pi[k]
             for k in range(kmax + 1)]

    # quotient differential
    qdelta = []
    for k in range(kmax):
        target = canon[k + 1]
        if canon[k].dim == 0 or target.dim == 0:
            qdelta.append(np.zeros((target.dim, canon[k].dim), dtype=complex))
            continue
        if k <= full_depth:
            dp = passes[k]
            rows = [target.flat().conj() @ dp.graph_image(b.ravel()) for b in canon[k].basis]
        elif k - 1 <= full_depth:
            rows = _leibniz_qdelta(data, passes, pi, canon, k, target, rng)
        else:
            raise ValueError(
                f"quotient differential in degree {k} needs full_depth >= {k - 1} "
                "(or a vanishing canonical space above)")
        qdelta.append(np.stack(rows, axis=1))

    ranks = [rank_of(m, tol=1e-8) if m.size else 0 for m in qdelta]
    betti = []
    for p in range(kmax + 1):
        dk = canon[p].dim
        r_out = ranks[p] if p < kmax else 0
        r_in = ranks[p - 1] if p >= 1 else 0
        betti.append(dk - r_out - r_in)

    diag = {
        "junk_in_pi": [float(max((pi[k].residual(j) for j in junk[k].basis), default=0.0))
                       for k in range(kmax + 1)],
        "delta_squared": [float(np.linalg.norm(qdelta[k + 1] @ qdelta[k]))
                          for k in range(kmax - 1)],
        "junk_verification": _verify_junk_samples(data, pi, junk, full_depth, kmax, rng,
                                                  verify_samples),
    }
    return FormComplex(data=data, kmax=kmax, pi=pi, junk=junk, canon=canon,
                       qdelta=qdelta, betti=betti, diagnostics=diag)


def _leibniz_qdelta(data, passes, pi, canon, k, target, rng, sample=None):
    """Quotient differential above the full word depth.

    Canonical degree-k vectors are least-squares decomposed over sampled
    products x * [D, b] (x from pi^{k-1}); delta acts by Leibniz, with the
    delta-image of the product lift given through the degree-(k-1) graph map.
    The junk ambiguity of the chosen lifts dies in the canonical projection
    because junk is a two-sided ideal.
    """
    n = data.hilbert_dim
    dop = data.differential
    heads = data.algebra
    dheads = np.stack([commutator(dop, a) for a in heads])
    base = pi[k - 1]
    dp_prev = passes[k - 1]
    sample = sample if sample is not None else max(4 * pi[k].dim, 512)
    # sampled generating family x_c * dheads_j  with x_c random combos of base
    ncomb = max(1, sample // dheads.shape[0])
    coeffs = rng.standard_normal((ncomb, base.dim)) + 1j * rng.standard_normal((ncomb, base.dim))
    xs = np.einsum("ci,ijk->cjk", coeffs, base.basis)
    gen = np.einsum("cij,bjk->cbik", xs, dheads).reshape(ncomb * dheads.shape[0], n * n)
    solve = pinv_factors(gen.T, tol=data.tol)
    # delta-images of the sampled x's, as degree-k representatives
    dximgs = np.stack([dp_prev.graph_image(x.ravel()).reshape(n, n) for x in xs])
    rows = []
    for b in canon[k].basis:
        c = solve(b.ravel()).reshape(ncomb, dheads.shape[0])
        img = np.zeros((n, n), dtype=complex)
        # sum_c sum_j c_{cj} * d(x_c) * dheads_j
        y = np.einsum("cj,cik->jik", c, dximgs)
        img = np.einsum("jik,jkl->il", y, dheads)
        rows.append(target.flat().conj() @ img.ravel())
    return rows


def _verify_junk_samples(data, pi, junk, full_depth, kmax, rng, nsamples):
    """Sampled two-sided-ideal check on every junk space: a j b stays inside."""
    if nsamples <= 0:
        return []
    out = []
    na = data.algebra.shape[0]
    for m in range(1, kmax + 1):
        j = junk[m]
        if j.dim == 0:
            out.append((m, 0.0))
            continue
        worst = 0.0
        for _ in range(nsamples):
            a = data.algebra[rng.integers(na)]
            b = data.algebra[rng.integers(na)]
            c = rng.standard_normal(j.dim) + 1j * rng.standard_normal(j.dim)
            x = np.einsum("i,ijk->jk", c, j.basis)
            worst = max(worst, j.residual(a @ x @ b))
        out.append((m, float(worst)))
    return out


# ---------------------------------------------------------------------------
# canonical representatives, integration, Hermitian structure
# ---------------------------------------------------------------------------

def canonical_rep(complex_, k, omega):
    """HS-orthogonal projection of a represented k-form off the junk space."""
    if complex_.pi[k].residual(omega) > 1e-6:
        raise ValueError("omega is not in pi(Omega^k)")
    jk = complex_.junk[k]
    if jk.dim == 0:
        return omega
    return omega - jk.project(omega)


def integral(data, x):
    """Normalized trace Tr(x)/dim H: the finite-dimensional integral."""
    if x.shape != (data.hilbert_dim, data.hilbert_dim):
        raise ValueError("integral argument must be square of hilbert_dim")
    return complex(np.trace(x) / data.hilbert_dim)


def cyclicity_check(data, spans=None, nsamples=50, rng=None):
    """Max over sampled pairs of |∫ ω η* − ∫ η* ω|: zero for the trace state."""
    rng = np.random.default_rng(7) if rng is None else rng
    if spans is None:
        spans = pi_forms(data, 1)
    pool = [b for s in spans for b in s.basis]
    worst = 0.0
    for _ in range(nsamples):
        w = pool[rng.integers(len(pool))]
        e = pool[rng.integers(len(pool))]
        worst = max(worst, abs(integral(data, w @ adjoint(e)) - integral(data, adjoint(e) @ w)))
    return worst


def hermitian_structure(data, omega, eta):
    """The algebra element <omega, eta>_D with (a, <w,e>) = ∫ a e w* for all a.

    Equivalently the adjoint of the HS-orthogonal projection of eta omega*
    onto the algebra span (a conditional expectation, hence positive); the
    result acts on H (algebra elements stay in represented form throughout).
    """
    n = data.hilbert_dim
    y = eta @ adjoint(omega)
    flat = data.algebra.reshape(data.algebra.shape[0], -1)
    coeffs = (flat.conj() @ y.ravel()) / n
    return adjoint(np.einsum("i,ijk->jk", coeffs, data.algebra))


def natural_involution(data, k, omega):
    """omega^nat = (-zeta)^k * omega^adj *^{-1} on degree-k representatives."""
    star = data.ops.get("star")
    if star is None:
        raise ValueError("natural involution needs a Hodge operator")
    if data.zeta is None:
        raise ValueError("natural involution needs the Hodge phase zeta")
    return (-data.zeta) ** k * (star @ adjoint(omega) @ np.linalg.inv(star))


def reality_check(data, spans, nsamples=40, rng=None):
    """Max over sampled pairs of |(w^nat, e^nat) - conj((w, e))| (Prop-2.22 form)."""
    rng = np.random.default_rng(11) if rng is None else rng
    worst = 0.0
    for k, s in enumerate(spans):
        if s.dim == 0:
            continue
        for _ in range(max(1, nsamples // max(1, len(spans)))):
            cw = rng.standard_normal(s.dim) + 1j * rng.standard_normal(s.dim)
            ce = rng.standard_normal(s.dim) + 1j * rng.standard_normal(s.dim)
            w = np.einsum("i,ijk->jk", cw, s.basis)
            e = np.einsum("i,ijk->jk", ce, s.basis)
            wn = natural_involution(data, k, w)
            en = natural_involution(data, k, e)
            lhs = integral(data, wn @ adjoint(en))
            rhs = np.conj(integral(data, w @ adjoint(e)))
            worst = max(worst, abs(lhs - rhs))
    return worst


# ---------------------------------------------------------------------------
# axiom validators
# ---------------------------------------------------------------------------

def _nrm(x):
    return float(hs_norm(x))


def _algebra_closure_residuals(data, rng):
    flat = data.algebra.reshape(data.algebra.shape[0], -1)
    span = span_from_flat(flat / np.sqrt(data.hilbert_dim), data.hilbert_dim, tol=data.tol)
    worst_adj = 0.0
    worst_prod = 0.0
    na = data.algebra.shape[0]
    for _ in range(12):
        a = data.algebra[rng.integers(na)]
        b = data.algebra[rng.integers(na)]
        worst_adj = max(worst_adj, span.residual(adjoint(a)))
        worst_prod = max(worst_prod, span.residual(a @ b))
    return worst_adj, worst_prod


def check_axioms(data, rng=None):
    """Residuals of every defining relation of the flavor; see Defs 2.1-2.38.

    Returns a flat dict name -> residual.  For symplectic data carrying the
    extra U(1) generator, the induced Kahler data are rebuilt and re-validated
    under keys prefixed 'induced_kahler/'.
    """
    rng = np.random.default_rng(3) if rng is None else rng
    n = data.hilbert_dim
    eye = np.eye(n)
    out = {}
    adjres, prodres = _algebra_closure_residuals(data, rng)
    out["algebra_adjoint_closed"] = adjres
    out["algebra_product_closed"] = prodres

    def gamma_block(gamma):
        out["gamma_selfadjoint"] = _nrm(gamma - adjoint(gamma))
        out["gamma_squares_to_I"] = _nrm(gamma @ gamma - eye)
        out["gamma_commutes_algebra"] = max(_nrm(commutator(gamma, a)) for a in data.algebra)

    if data.flavor == "n1":
        (D, gamma) = data.require("D", "gamma")
        out["D_selfadjoint"] = _nrm(D - adjoint(D))
        gamma_block(gamma)
        out["gamma_D_anticommute"] = _nrm(anticommutator(gamma, D))
        return out

    if data.flavor in ("n11", "symplectic"):
        (d, gamma, star) = data.require("d", "gamma", "star")
        out["d_nilpotent"] = _nrm(d @ d)
        gamma_block(gamma)
        out["gamma_d_anticommute"] = _nrm(anticommutator(gamma, d))
        out["star_unitary"] = _nrm(star @ adjoint(star) - eye)
        if data.zeta is not None:
            out["star_intertwines_d"] = _nrm(star @ d - data.zeta * adjoint(d) @ star)
        out["star_commutes_algebra"] = max(_nrm(commutator(star, a)) for a in data.algebra)
        if data.flavor == "n11":
            return out
        (L3, Lp, Lm) = data.require("L3", "Lp", "Lm")
        out["L3_selfadjoint"] = _nrm(L3 - adjoint(L3))
        out["Lpm_adjoint_pair"] = _nrm(adjoint(Lp) - Lm)
        out["sl2_L3_Lp"] = _nrm(commutator(L3, Lp) - 2 * Lp)
        out["sl2_L3_Lm"] = _nrm(commutator(L3, Lm) + 2 * Lm)
        out["sl2_Lp_Lm"] = _nrm(commutator(Lp, Lm) - L3)
        out["L_commutes_algebra"] = max(
            _nrm(commutator(X, a)) for X in (L3, Lp, Lm) for a in data.algebra[:: max(1, len(data.algebra) // 8)])
        out["L_commutes_gamma"] = max(_nrm(commutator(X, gamma)) for X in (L3, Lp, Lm))
        dts = commutator(Lm, d)
        out["doublet_L3_d"] = _nrm(commutator(L3, d) - d)
        out["doublet_L3_dts"] = _nrm(commutator(L3, dts) + dts)
        out["doublet_Lp_d"] = _nrm(commutator(Lp, d))
        out["doublet_Lp_dts"] = _nrm(commutator(Lp, dts) - d)
        out["doublet_Lm_dts"] = _nrm(commutator(Lm, dts))
        if "J0" in data.ops:
            J0 = data.ops["J0"]
            dtil = adjoint(dts)
            out["J0_selfadjoint"] = _nrm(J0 - adjoint(J0))
            out["J0_commutes_L3"] = _nrm(commutator(J0, L3))
            out["J0_commutes_gamma"] = _nrm(commutator(J0, gamma))
            out["J0_d"] = _nrm(commutator(J0, d) + 1j * dtil)
            out["J0_dtil"] = _nrm(commutator(J0, dtil) - 1j * d)
            out["star_L3_anticommute"] = _nrm(star @ L3 + L3 @ star)
            if data.zeta is not None:
                out["star_Lp"] = _nrm(star @ Lp + data.zeta ** 2 * Lm @ star)
            induced = symplectic_to_kahler(data)
            for k, v in check_axioms(induced, rng=rng).items():
                out[f"induced_kahler/{k}"] = v
        return out

    if data.flavor in ("hermitian", "kahler"):
        (dl, db, T, Tb, gamma, star) = data.require("del", "delbar", "T", "Tbar", "gamma", "star")
        out["del_nilpotent"] = _nrm(dl @ dl)
        out["delbar_nilpotent"] = _nrm(db @ db)
        out["del_delbar_anticommute"] = _nrm(anticommutator(dl, db))
        out["T_selfadjoint"] = _nrm(T - adjoint(T))
        out["Tbar_selfadjoint"] = _nrm(Tb - adjoint(Tb))
        out["T_del"] = _nrm(commutator(T, dl) - dl)
        out["T_delbar"] = _nrm(commutator(T, db))
        out["Tbar_delbar"] = _nrm(commutator(Tb, db) - db)
        out["Tbar_del"] = _nrm(commutator(Tb, dl))
        out["T_Tbar_commute"] = _nrm(commutator(T, Tb))
        out["T_commutes_algebra"] = max(_nrm(commutator(T, a)) for a in data.algebra)
        out["Tbar_commutes_algebra"] = max(_nrm(commutator(Tb, a)) for a in data.algebra)
        gamma_block(gamma)
        out["gamma_del_anticommute"] = _nrm(anticommutator(gamma, dl))
        out["gamma_delbar_anticommute"] = _nrm(anticommutator(gamma, db))
        out["gamma_T_commute"] = _nrm(commutator(gamma, T))
        out["star_unitary"] = _nrm(star @ adjoint(star) - eye)
        if data.zeta is not None:
            out["star_del"] = _nrm(star @ dl - data.zeta * adjoint(db) @ star)
            out["star_delbar"] = _nrm(star @ db - data.zeta * adjoint(dl) @ star)
        if data.flavor == "kahler":
            out["del_delbar_adj_anticommute"] = _nrm(anticommutator(dl, adjoint(db)))
            out["delbar_del_adj_anticommute"] = _nrm(anticommutator(db, adjoint(dl)))
            lap = anticommutator(dl, adjoint(dl)) - anticommutator(db, adjoint(db))
            out["laplacian_equality"] = _nrm(lap)
        return out

    if data.flavor == "n44":
        names = ["G1p", "G1m", "G2p", "G2m"]
        (g1p, g1m, g2p, g2m) = data.require(*names)
        box = data.ops["box"]
        Ts = data.require("T1", "T2", "T3")
        pauli = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]
        gp = [g1p, g2p]
        gm = [g1m, g2m]
        for a in range(2):
            out[f"G{a+1}_adjoint_pair"] = _nrm(adjoint(gp[a]) - gm[a])
            for b in range(2):
                out[f"Gp{a+1}_Gp{b+1}_anticommute"] = _nrm(anticommutator(gp[a], gp[b]))
                out[f"Gm{a+1}_Gp{b+1}_box"] = _nrm(anticommutator(gm[a], gp[b]) - (a == b) * box)
            out[f"box_Gp{a+1}_commute"] = _nrm(commutator(box, gp[a]))
        eps3 = np.zeros((3, 3, 3))
        eps3[0, 1, 2] = eps3[1, 2, 0] = eps3[2, 0, 1] = 1
        eps3[0, 2, 1] = eps3[2, 1, 0] = eps3[1, 0, 2] = -1
        for i in range(3):
            out[f"T{i+1}_selfadjoint"] = _nrm(Ts[i] - adjoint(Ts[i]))
            out[f"box_T{i+1}_commute"] = _nrm(commutator(box, Ts[i]))
            for j in range(3):
                want = 1j * sum(eps3[i, j, kk] * Ts[kk] for kk in range(3))
                out[f"su2_T{i+1}_T{j+1}"] = _nrm(commutator(Ts[i], Ts[j]) - want)
            for a in range(2):
                want = 0.5 * sum(np.conj(pauli[i][a, b]) * gp[b] for b in range(2))
                out[f"T{i+1}_Gp{a+1}"] = _nrm(commutator(Ts[i], gp[a]) - want)
        barred = [data.ops.get(k) for k in ("G1pb", "G1mb", "G2pb", "G2mb", "T1b", "T2b", "T3b")]
        if all(b is not None for b in barred):
            gpb = [barred[0], barred[2]]
            tb = barred[4:]
            for a in range(2):
                for b in range(2):
                    out[f"Gp{a+1}_Gpb{b+1}_anticommute"] = _nrm(anticommutator(gp[a], gpb[b]))
                for i in range(3):
                    out[f"Gp{a+1}_Tb{i+1}_commute"] = _nrm(commutator(gp[a], tb[i]))
        return out

    raise ValueError(f"unhandled flavor {data.flavor}")


def symplectic_to_kahler(data):
    """Kahler data induced on symplectic data carrying the extra U(1) generator.

    del = (d - i dtil)/2, T = (L3 + J0)/2, Tbar = (L3 - J0)/2 with
    dtil = [Lm, d]^adj; T and Tbar are shifted by a common constant so their
    joint spectrum starts at 0 (the sl2 generator is centered, the degree
    operators of the Kahler data are not).
    """
    (d, L3, Lm, gamma, star) = data.require("d", "L3", "Lm", "gamma", "star")
    J0 = data.ops["J0"]
    dtil = adjoint(commutator(Lm, d))
    dl = 0.5 * (d - 1j * dtil)
    db = 0.5 * (d + 1j * dtil)
    T = 0.5 * (L3 + J0)
    Tb = 0.5 * (L3 - J0)
    shift = -min(np.linalg.eigvalsh(T).min(), np.linalg.eigvalsh(Tb).min())
    eye = np.eye(data.hilbert_dim)
    return SpectralData(
        flavor="kahler", algebra=data.algebra, hilbert_dim=data.hilbert_dim,
        ops={"del": dl, "delbar": db, "T": T + shift * eye, "Tbar": Tb + shift * eye,
             "gamma": gamma, "star": star},
        zeta=data.zeta, tol=data.tol)


# ---------------------------------------------------------------------------
# bigraded decomposition (Hermitian / Kahler)
# ---------------------------------------------------------------------------

def bigrade_decompose(data, kmax, tol_int=1e-8):
    """Spans of the represented complex forms by bidegree (r, s), r+s <= kmax.

    The bigraded spans are generated from the two differentials separately
    (pi(Omega^{r,s}) is built from words with r del-factors and s
    delbar-factors); on each span ad(T) and ad(Tbar) act as the integers r
    and s, which is verified and returned together with the maximal
    inner product between distinct bidegrees.

    Returns (spans_by_bidegree, orthogonality, grading_residual).
    """
    if data.flavor not in ("hermitian", "kahler"):
        raise ValueError("bigrading needs Hermitian or Kahler data")
    T, Tb = data.ops["T"], data.ops["Tbar"]
    dl, db = data.ops["del"], data.ops["delbar"]
    n = data.hilbert_dim
    rng = np.random.default_rng(17)
    gen_dl = orthonormalize([a @ commutator(dl, b) for a in data.algebra
                             for b in data.algebra], tol=data.tol, ambient_dim=n)
    gen_db = orthonormalize([a @ commutator(db, b) for a in data.algebra
                             for b in data.algebra], tol=data.tol, ambient_dim=n)
    alg_span = orthonormalize(list(data.algebra), tol=data.tol, ambient_dim=n)

    by_bidegree = {(0, 0): alg_span}
    for k in range(1, kmax + 1):
        for r in range(k + 1):
            s = k - r
            pieces = []
            if r >= 1 and (r - 1, s) in by_bidegree and by_bidegree[(r - 1, s)].dim:
                pieces.append(product_span(by_bidegree[(r - 1, s)], gen_dl,
                                           tol=data.tol, rng=rng))
            if s >= 1 and (r, s - 1) in by_bidegree and by_bidegree[(r, s - 1)].dim:
                pieces.append(product_span(by_bidegree[(r, s - 1)], gen_db,
                                           tol=data.tol, rng=rng))
            pieces = [p for p in pieces if p.dim]
            if not pieces:
                continue
            span = pieces[0]
            for p in pieces[1:]:
                span = span_sum(span, p)
            if span.dim:
                by_bidegree[(r, s)] = span

    grading_residual = 0.0
    for (r, s), span in by_bidegree.items():
        for b in span.basis[:: max(1, span.dim // 6)]:
            grading_residual = max(
                grading_residual,
                hs_norm(commutator(T, b) - r * b),
                hs_norm(commutator(Tb, b) - s * b))
    if grading_residual > tol_int * 10:
        raise ValueError(f"non-integer bigrading: residual {grading_residual:.2e}")

    worst = 0.0
    keys = sorted(by_bidegree)
    for i, k1 in enumerate(keys):
        for k2 in keys[i + 1:]:
            a, b = by_bidegree[k1], by_bidegree[k2]
            g = a.flat_conj() @ b.flat().T
            worst = max(worst, float(np.abs(g).max(initial=0.0)))
    return by_bidegree, worst, grading_residual
