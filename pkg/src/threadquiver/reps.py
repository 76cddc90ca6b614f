"""Exact quiver representations and the derived-category calculus on them.

Representations are contravariant (right modules): an arrow u -> v acts by
a matrix of shape dim(u) x dim(v) sending M(v) to M(u).  With this
convention an arrow x -> y induces a nonzero map between the projectives
P_x -> P_y.  All arithmetic is over exact rationals; every answer that
matters is a dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from . import exactmat as xm
from .errors import EngineError, NegativeExt, NotIndecomposable, QuiverMismatch, UnknownVertex
from .quivers import Arrow, Quiver, enumerate_paths, is_acyclic


@dataclass
class QRep:
    quiver: Quiver
    dim: Dict[str, int]
    mats: Dict[str, xm.Matrix]  # arrow id -> matrix M(dst) -> M(src)

    def total_dim(self) -> int:
        return sum(self.dim.values())

    def dim_vector(self) -> Tuple[int, ...]:
        return tuple(self.dim[v] for v in self.quiver.vertices)

    def validate(self):
        for a in self.quiver.arrows:
            m = self.mats[a.aid]
            rows = len(m)
            cols = len(m[0]) if m else 0
            if (rows, cols) != (self.dim[a.src], self.dim[a.dst]):
                if self.dim[a.src] == 0 or self.dim[a.dst] == 0:
                    continue
                raise EngineError(f"matrix shape mismatch on arrow {a.aid}")
        return self


def _mat(rows, cols):
    return xm.zeros(rows, cols)


def zero_rep(q: Quiver) -> QRep:
    return QRep(q, {v: 0 for v in q.vertices},
                {a.aid: [] for a in q.arrows})


@lru_cache(maxsize=None)
def _paths(q: Quiver, src: str, dst: str):
    return tuple(enumerate_paths(q, src, dst))


def _path_index(q, src, dst):
    return {p: i for i, p in enumerate(_paths(q, src, dst))}


def projective(q: Quiver, x: str) -> QRep:
    """P_x = kQ(-, x); basis at v is the set of paths v -> x."""
    if x not in q.vertices:
        raise UnknownVertex(x)
    dim = {v: len(_paths(q, v, x)) for v in q.vertices}
    mats = {}
    for a in q.arrows:
        rows = _path_index(q, a.src, x)
        cols = _paths(q, a.dst, x)
        m = _mat(dim[a.src], dim[a.dst])
        for j, p in enumerate(cols):
            m[rows[(a.aid,) + p]][j] = Fraction(1)
        mats[a.aid] = m
    return QRep(q, dim, mats)


def injective(q: Quiver, x: str) -> QRep:
    """I_x = dual of kQ(x, -); basis at v dual to the paths x -> v."""
    if x not in q.vertices:
        raise UnknownVertex(x)
    dim = {v: len(_paths(q, x, v)) for v in q.vertices}
    mats = {}
    for a in q.arrows:
        # postcomposition kQ(x, src) -> kQ(x, dst), dualized
        rows = _path_index(q, x, a.dst)
        cols = _paths(q, x, a.src)
        post = _mat(dim[a.dst], dim[a.src])
        for j, p in enumerate(cols):
            post[rows[p + (a.aid,)]][j] = Fraction(1)
        mats[a.aid] = xm.transpose(post)
    return QRep(q, dim, mats)


def simple(q: Quiver, x: str) -> QRep:
    if x not in q.vertices:
        raise UnknownVertex(x)
    dim = {v: 1 if v == x else 0 for v in q.vertices}
    mats = {a.aid: _mat(dim[a.src], dim[a.dst]) for a in q.arrows}
    return QRep(q, dim, mats)


def apply_path(M: QRep, path: Tuple[str, ...]) -> xm.Matrix:
    """Matrix of M along a path u -> v (arrow ids), mapping M(v) to M(u)."""
    q = M.quiver
    arrows = {a.aid: a for a in q.arrows}
    if not path:
        raise ValueError("apply_path needs the endpoints for the empty path")
    u = arrows[path[0]].src
    v = arrows[path[-1]].dst
    if any(M.dim[arrows[aid].src] == 0 or M.dim[arrows[aid].dst] == 0
           for aid in path):
        return _mat(M.dim[u], M.dim[v])
    out = M.mats[path[0]]
    for aid in path[1:]:
        out = xm.matmul(out, M.mats[aid])
    return out


def _act(M: QRep, path, v_if_trivial=None) -> xm.Matrix:
    if path:
        return apply_path(M, path)
    return xm.identity(M.dim[v_if_trivial])


# -- Hom / Ext / Euler -------------------------------------------------------


def _hom_system(M: QRep, N: QRep):
    """Rows of the intertwiner system; unknowns are the entries of f_v."""
    if M.quiver != N.quiver:
        raise QuiverMismatch("representations over different quivers")
    q = M.quiver
    offset = {}
    nvars = 0
    for v in q.vertices:
        offset[v] = nvars
        nvars += N.dim[v] * M.dim[v]
    rows = []
    for a in q.arrows:
        u, v = a.src, a.dst
        Ma, Na = M.mats[a.aid], N.mats[a.aid]
        # f_u M(a) - N(a) f_v = 0, an (N.dim[u] x M.dim[v]) block of equations
        for i in range(N.dim[u]):
            for j in range(M.dim[v]):
                row = [Fraction(0)] * nvars
                hit = False
                for k in range(M.dim[u]):
                    c = Ma[k][j]
                    if c:
                        row[offset[u] + i * M.dim[u] + k] += c
                        hit = True
                for l in range(N.dim[v]):
                    c = Na[i][l]
                    if c:
                        row[offset[v] + l * M.dim[v] + j] -= c
                        hit = True
                if hit:
                    rows.append(row)
    return rows, nvars, offset


def hom_dim(M: QRep, N: QRep) -> int:
    rows, nvars, _ = _hom_system(M, N)
    if nvars == 0:
        return 0
    if not rows:
        return nvars
    return nvars - xm.rank(rows)


def hom_basis(M: QRep, N: QRep) -> List[Dict[str, xm.Matrix]]:
    rows, nvars, offset = _hom_system(M, N)
    if nvars == 0:
        return []
    vecs = xm.nullspace(rows) if rows else \
        [[Fraction(i == j) for i in range(nvars)] for j in range(nvars)]
    q = M.quiver
    out = []
    for vec in vecs:
        f = {}
        for v in q.vertices:
            base = offset[v]
            f[v] = [[vec[base + i * M.dim[v] + j] for j in range(M.dim[v])]
                    for i in range(N.dim[v])]
        out.append(f)
    return out


def end_dim(M: QRep) -> int:
    return hom_dim(M, M)


def euler_form(q: Quiver, d1, d2) -> int:
    """Dimension-level Euler form; equals hom - ext for modules."""
    if isinstance(d1, dict):
        d1 = [d1[v] for v in q.vertices]
    if isinstance(d2, dict):
        d2 = [d2[v] for v in q.vertices]
    idx = {v: i for i, v in enumerate(q.vertices)}
    total = sum(a * b for a, b in zip(d1, d2))
    for a in q.arrows:
        total -= d1[idx[a.dst]] * d2[idx[a.src]]
    return total


def ext_dim(M: QRep, N: QRep) -> int:
    val = hom_dim(M, N) - euler_form(M.quiver, M.dim, N.dim)
    if val < 0:
        raise NegativeExt(f"ext came out {val}; convention bug")
    return val


def ext_dim_via_resolution(M: QRep, N: QRep) -> int:
    """Independent Ext oracle via the minimal projective presentation."""
    if M.total_dim() == 0:
        return 0
    mults0, _, _, _ = projective_cover(M)
    K, _ = kernel_of_cover(M)
    mults1 = top_multiplicities(K)
    h0 = sum(m * N.dim[x] for x, m in mults0)
    h1 = sum(m * N.dim[x] for x, m in mults1.items())
    return h1 - h0 + hom_dim(M, N)


# -- covers, kernels, cokernels ----------------------------------------------


def radical_columns(M: QRep, v: str) -> List[List[Fraction]]:
    """Spanning columns of rad M at v (images of arrows leaving v)."""
    cols = []
    for a in M.quiver.arrows_from(v):
        m = M.mats[a.aid]
        for j in range(M.dim[a.dst]):
            col = [m[i][j] for i in range(M.dim[v])]
            if any(col):
                cols.append(col)
    return cols


def top_multiplicities(M: QRep) -> Dict[str, int]:
    out = {}
    for v in M.quiver.vertices:
        rad = radical_columns(M, v)
        t = M.dim[v] - (xm.rank(xm.basis_matrix(rad)) if rad else 0)
        if t:
            out[v] = t
    return out


def _complete_basis(cols: List[List[Fraction]], dim: int) -> List[List[Fraction]]:
    """Standard basis vectors extending `cols` to a basis of k^dim."""
    chosen = list(cols)
    extra = []
    current = xm.rank(xm.basis_matrix(chosen)) if chosen else 0
    for i in range(dim):
        if current == dim:
            break
        e = [Fraction(k == i) for k in range(dim)]
        r = xm.rank(xm.basis_matrix(chosen + [e]))
        if r > current:
            chosen.append(e)
            extra.append(e)
            current = r
    return extra


def direct_sum(reps: List[QRep]):
    """Direct sum plus per-summand (vertex -> offset) bookkeeping."""
    if not reps:
        raise ValueError("empty direct sum; use zero_rep")
    q = reps[0].quiver
    for r in reps:
        if r.quiver != q:
            raise QuiverMismatch("direct sum across quivers")
    dim = {v: sum(r.dim[v] for r in reps) for v in q.vertices}
    offsets = []
    running = {v: 0 for v in q.vertices}
    for r in reps:
        offsets.append(dict(running))
        for v in q.vertices:
            running[v] += r.dim[v]
    mats = {}
    for a in q.arrows:
        m = _mat(dim[a.src], dim[a.dst])
        for r, off in zip(reps, offsets):
            block = r.mats[a.aid]
            for i in range(r.dim[a.src]):
                for j in range(r.dim[a.dst]):
                    if block[i][j]:
                        m[off[a.src] + i][off[a.dst] + j] = block[i][j]
        mats[a.aid] = m
    return QRep(q, dim, mats), offsets


def projective_cover(M: QRep):
    """(multiplicities, cover map, P0, block offsets) of the cover P0 -> M."""
    q = M.quiver
    gens = []  # (vertex, generating vector)
    for v in q.vertices:
        rad = radical_columns(M, v)
        for vec in _complete_basis(rad, M.dim[v]):
            gens.append((v, vec))
    if not gens:
        return [], {v: [] for v in q.vertices}, zero_rep(q), []
    summands = [projective(q, x) for x, _ in gens]
    P0, offsets = direct_sum(summands)
    f = {v: _mat(M.dim[v], P0.dim[v]) for v in q.vertices}
    for (x, vec), off in zip(gens, offsets):
        for u in q.vertices:
            for j, p in enumerate(_paths(q, u, x)):
                img = xm.matvec(_act(M, p, x), vec)
                for i in range(M.dim[u]):
                    f[u][i][off[u] + j] = img[i]
    mults: Dict[str, int] = {}
    for x, _ in gens:
        mults[x] = mults.get(x, 0) + 1
    return sorted(mults.items()), f, P0, list(zip([g[0] for g in gens], offsets))


def kernel_rep(f: Dict[str, xm.Matrix], M: QRep, N: QRep):
    """Kernel of a morphism f: M -> N, with its inclusion into M."""
    q = M.quiver
    kdim = {}
    incl = {}
    for v in q.vertices:
        if M.dim[v] == 0:
            kdim[v] = 0
            incl[v] = []
            continue
        fv = f[v] if f[v] else xm.zeros(max(N.dim[v], 1), M.dim[v])
        if N.dim[v] == 0:
            basis = [[Fraction(i == j) for i in range(M.dim[v])]
                     for j in range(M.dim[v])]
        else:
            basis = xm.nullspace(fv)
        kdim[v] = len(basis)
        incl[v] = xm.basis_matrix(basis) if basis else []
    mats = {}
    for a in q.arrows:
        u, v = a.src, a.dst
        if kdim[u] == 0 or kdim[v] == 0:
            mats[a.aid] = _mat(kdim[u], kdim[v])
            continue
        moved = xm.matmul(M.mats[a.aid], incl[v])
        coords = xm.solve_matrix(incl[u], moved)
        if coords is None:
            raise EngineError("kernel is not structure-closed; solver bug")
        mats[a.aid] = coords
    K = QRep(q, kdim, mats)
    return K, incl


def kernel_of_cover(M: QRep):
    _, f, P0, _ = projective_cover(M)
    return kernel_rep(f, P0, M)


def cokernel_rep(f: Dict[str, xm.Matrix], M: QRep, N: QRep):
    """Cokernel of f: M -> N, with the projection from N."""
    q = M.quiver
    cdim = {}
    reps_cols = {}  # representative columns in N(v)
    proj = {}
    for v in q.vertices:
        img = []
        if N.dim[v] and M.dim[v] and f[v]:
            img = xm.column_space(f[v])
        extra = _complete_basis(img, N.dim[v])
        cdim[v] = len(extra)
        reps_cols[v] = xm.basis_matrix(extra) if extra else []
        if N.dim[v] == 0:
            proj[v] = []
            continue
        full = xm.hstack([xm.basis_matrix(img) if img else [],
                          reps_cols[v]], N.dim[v])
        inv = xm.solve_matrix(full, xm.identity(N.dim[v]))
        if inv is None:
            raise EngineError("basis completion failed")
        proj[v] = inv[len(img):] if cdim[v] else []
    mats = {}
    for a in q.arrows:
        u, v = a.src, a.dst
        if cdim[u] == 0 or cdim[v] == 0:
            mats[a.aid] = _mat(cdim[u], cdim[v])
            continue
        mats[a.aid] = xm.matmul(proj[u], xm.matmul(N.mats[a.aid], reps_cols[v]))
    C = QRep(q, cdim, mats)
    return C, proj


# -- Auslander-Reiten translate ----------------------------------------------


def op_quiver(q: Quiver) -> Quiver:
    return Quiver(q.vertices, tuple(Arrow(a.dst, a.src, a.aid) for a in q.arrows))


def dual_rep(q: Quiver, M: QRep) -> QRep:
    """Vector-space dual, a representation of the opposite quiver."""
    qop = op_quiver(q)
    mats = {a.aid: xm.transpose(M.mats[a.aid]) for a in q.arrows}
    return QRep(qop, dict(M.dim), mats)


def is_projective_module(q: Quiver, M: QRep) -> Optional[str]:
    """The vertex x with M isomorphic to P_x, or None."""
    for x in q.vertices:
        P = projective(q, x)
        if P.dim == M.dim and _is_iso(M, P):
            return x
    return None


def is_injective_module(q: Quiver, M: QRep) -> Optional[str]:
    for x in q.vertices:
        I = injective(q, x)
        if I.dim == M.dim and _is_iso(M, I):
            return x
    return None


def _is_iso(M: QRep, N: QRep) -> bool:
    if M.dim != N.dim:
        return False
    if M.total_dim() == 0:
        return True
    for f in hom_basis(M, N):
        if all(M.dim[v] == 0 or xm.rank(f[v]) == M.dim[v]
               for v in M.quiver.vertices):
            return True
    return False


def is_iso(M: QRep, N: QRep) -> bool:
    return _is_iso(M, N)


def _nu_map(q, blocks1, blocks0, g):
    """Nakayama image of g: P1 -> P0, as a map between injective sums.

    blocks*: lists of (vertex, offsets dict); g: per-vertex matrices.
    Returns (nu_g, I1, I0) with I* the corresponding injective sums.
    """
    inj1 = [injective(q, x) for x, _ in blocks1]
    inj0 = [injective(q, y) for y, _ in blocks0]
    I1, off1 = direct_sum(inj1) if inj1 else (zero_rep(q), [])
    I0, off0 = direct_sum(inj0) if inj0 else (zero_rep(q), [])
    nug = {v: _mat(I0.dim[v], I1.dim[v]) for v in q.vertices}
    for bi, (x_i, offp1) in enumerate(blocks1):
        # path coordinates of the (j <- i) components via Yoneda at x_i
        triv_col = offp1[x_i] + _path_index(q, x_i, x_i)[()]
        for bj, (y_j, offp0) in enumerate(blocks0):
            coeffs = _component_coeffs(q, g, x_i, y_j, triv_col, offp0)
            if not coeffs:
                continue
            for v in q.vertices:
                rows = _path_index(q, y_j, v)
                cols = _paths(q, x_i, v)
                if not rows and not cols:
                    continue
                block = _mat(len(_paths(q, y_j, v)), len(cols))
                for p, c in coeffs.items():
                    # nu(p) at v: transpose of precomposition with p
                    for ci, r in enumerate(cols):
                        if r[:len(p)] == p:
                            rest = r[len(p):]
                            if rest in rows:
                                block[rows[rest]][ci] += c
                for i in range(len(block)):
                    for jj in range(len(cols)):
                        if block[i][jj]:
                            nug[v][off0[bj][v] + i][off1[bi][v] + jj] += block[i][jj]
    return nug, I1, I0


def _component_coeffs(q, g, x_i, y_j, triv_col, offp0):
    """Coefficients over the path basis x_i -> y_j of one block of g."""
    coeffs = {}
    idx = _path_index(q, x_i, y_j)
    for p, row_local in idx.items():
        c = g[x_i][offp0[x_i] + row_local][triv_col]
        if c:
            coeffs[p] = c
    return coeffs


def tau_module(q: Quiver, M: QRep) -> QRep:
    """AR translate of a module with no projective summands."""
    if M.total_dim() == 0:
        raise EngineError("tau of the zero module")
    _, f, P0, blocks0 = projective_cover(M)
    K, incl = kernel_rep(f, P0, M)
    if K.total_dim() == 0:
        raise EngineError("module is projective; use the shift rule")
    _, f1, P1, blocks1 = projective_cover(K)
    if P1.total_dim() != K.total_dim():
        raise EngineError("kernel of cover not projective; quiver not hereditary?")
    g = {v: xm.matmul(incl[v], f1[v]) if K.dim[v] and P1.dim[v] else
         _mat(P0.dim[v], P1.dim[v]) for v in q.vertices}
    nug, I1, I0 = _nu_map(q, blocks1, blocks0, g)
    T, _ = kernel_rep(nug, I1, I0)
    return T


def tau_inv_module(q: Quiver, M: QRep) -> QRep:
    """Inverse AR translate of a module with no injective summands."""
    qop = op_quiver(q)
    T = tau_module(qop, dual_rep(q, M))
    return dual_rep(qop, T)


# -- decomposition into indecomposables ---------------------------------------


def _charpoly(m: xm.Matrix) -> List[Fraction]:
    """Characteristic polynomial coefficients, highest power first."""
    n = len(m)
    coeffs = [Fraction(1)]
    Mk = xm.identity(n)
    for k in range(1, n + 1):
        Mk = xm.matmul(m, Mk)
        tr = sum(Mk[i][i] for i in range(n))
        c = -tr / k
        coeffs.append(c)
        for i in range(n):
            Mk[i][i] += c
    return coeffs


def _rational_roots(coeffs: List[Fraction]) -> List[Fraction]:
    from math import gcd
    denom = 1
    for c in coeffs:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [int(c * denom) for c in coeffs]
    while ints and ints[0] == 0:
        ints = ints[1:]
    if not ints:
        return []
    a_n = ints[0]
    a_0 = ints[-1]
    if a_0 == 0:
        roots = {Fraction(0)}
        while ints and ints[-1] == 0:
            ints = ints[:-1]
        if not ints:
            return sorted(roots)
        a_0 = ints[-1]
    else:
        roots = set()

    def divisors(n):
        n = abs(n)
        out = set()
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.add(d)
                out.add(n // d)
            d += 1
        return out or {1}

    cands = set()
    for p in divisors(a_0):
        for qd in divisors(a_n):
            cands.add(Fraction(p, qd))
            cands.add(Fraction(-p, qd))
    deg = len(ints) - 1
    for r in cands:
        val = Fraction(0)
        for c in ints:
            val = val * r + c
        if val == 0:
            roots.add(r)
    _ = deg
    return sorted(roots)


def _fitting_split(M: QRep, f: Dict[str, xm.Matrix]):
    """Split M along ker f^N + im f^N when both are nonzero."""
    q = M.quiver
    n = M.total_dim()
    power = {v: xm.identity(M.dim[v]) for v in q.vertices}
    for _ in range(n):
        power = {v: xm.matmul(f[v], power[v]) if M.dim[v] else []
                 for v in q.vertices}
    kdim = sum(M.dim[v] - (xm.rank(power[v]) if M.dim[v] else 0)
               for v in q.vertices)
    if kdim == 0 or kdim == n:
        return None
    K, _ = kernel_rep(power, M, M)
    img_cols = {v: xm.column_space(power[v]) if M.dim[v] else []
                for v in q.vertices}
    I = _sub_rep(M, img_cols)
    return K, I


def _sub_rep(M: QRep, cols: Dict[str, List[List[Fraction]]]) -> QRep:
    q = M.quiver
    dim = {v: len(cols[v]) for v in q.vertices}
    basis = {v: xm.basis_matrix(cols[v]) if cols[v] else [] for v in q.vertices}
    mats = {}
    for a in q.arrows:
        u, v = a.src, a.dst
        if dim[u] == 0 or dim[v] == 0:
            mats[a.aid] = _mat(dim[u], dim[v])
            continue
        moved = xm.matmul(M.mats[a.aid], basis[v])
        coords = xm.solve_matrix(basis[u], moved)
        if coords is None:
            raise EngineError("subspace not structure-closed")
        mats[a.aid] = coords
    return QRep(q, dim, mats)


def decompose(M: QRep) -> List[QRep]:
    """Indecomposable summands, by idempotent splitting of End(M)."""
    if M.total_dim() == 0:
        return []
    basis = hom_basis(M, M)
    if len(basis) == 1:
        return [M]
    candidates = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, min(len(basis), i + 4)):
            candidates.append({v: xm.add(basis[i][v], basis[j][v])
                               for v in M.quiver.vertices})
    for f in candidates:
        split = _fitting_split(M, f)
        if split:
            A, B = split
            return decompose(A) + decompose(B)
        # shift by each rational eigenvalue and retry
        lams = set()
        for v in M.quiver.vertices:
            if M.dim[v]:
                lams.update(_rational_roots(_charpoly(f[v])))
        for lam in lams:
            shifted = {v: xm.add(f[v], xm.scale(xm.identity(M.dim[v]), -lam))
                       if M.dim[v] else [] for v in M.quiver.vertices}
            split = _fitting_split(M, shifted)
            if split:
                A, B = split
                return decompose(A) + decompose(B)
    raise NotIndecomposable(
        "endomorphism algebra has no rational splitting; out of scope")


def cone_decompose(f: Dict[str, xm.Matrix], M: QRep, N: QRep):
    """Indecomposable pieces of the cone of a module map f: M -> N.

    Returns (module, shift) pairs: the cokernel in degree 0 and the kernel
    shifted by one, which is the cone in the hereditary world.
    """
    K, _ = kernel_rep(f, M, N)
    C, _ = cokernel_rep(f, M, N)
    out = []
    for piece in decompose(C):
        out.append((piece, 0))
    for piece in decompose(K):
        out.append((piece, 1))
    return out


def extension_middle(M: QRep, N: QRep) -> QRep:
    """Middle term of a nonsplit extension 0 -> N -> E -> M -> 0.

    Requires Ext^1(M, N) != 0; uses the pushout of the minimal projective
    presentation of M along a nonzero class.
    """
    q = M.quiver
    _, f, P0, _ = projective_cover(M)
    P1, incl = kernel_of_cover(M)
    # hom(P1, N) modulo restrictions of hom(P0, N)
    cands = hom_basis(P1, N)
    if not cands:
        raise EngineError("no extension: Hom(P1, N) = 0")
    restricted = []
    for g in hom_basis(P0, N):
        restricted.append({v: xm.matmul(g[v], incl[v]) if P1.dim[v] else []
                           for v in q.vertices})

    def flat(h):
        out = []
        for v in q.vertices:
            for row in (h[v] or []):
                out.extend(row)
        return out

    span = [flat(h) for h in restricted if any(flat(h))]
    chosen = None
    base_rank = xm.rank(span) if span else 0
    for h in cands:
        fh = flat(h)
        if not any(fh):
            continue
        if xm.rank(span + [fh]) > base_rank:
            chosen = h
            break
    if chosen is None:
        raise EngineError("no extension: Ext^1(M, N) = 0")
    ND, offs = direct_sum([P0, N])
    stacked = {}
    for v in q.vertices:
        m = _mat(ND.dim[v], P1.dim[v])
        for i in range(P0.dim[v]):
            for j in range(P1.dim[v]):
                m[offs[0][v] + i][j] = incl[v][i][j]
        for i in range(N.dim[v]):
            for j in range(P1.dim[v]):
                m[offs[1][v] + i][j] = -chosen[v][i][j]
        stacked[v] = m
    E, _ = cokernel_rep(stacked, P1, ND)
    if E.total_dim() != M.total_dim() + N.total_dim():
        raise EngineError("pushout dimension mismatch")
    return E
