"""Independent ground-truth search for corner rate points.

Used only in tests, as a second opinion on the main optimizers.  The
search machinery is deliberately different: dense multistart over
softmax-parametrized conditional-distribution blocks, refined with
derivative-free Powell descent, with a plain fixed-point projection onto
the exact-marginal manifold inside the objective.  Nothing here shares
code with the penalty/descent machinery in :mod:`corrcost.region`; only
the witness assembly and the information measures are common, so every
reported value is still reproducible from its witness.

Model semantics (one rate point per model):

* ``wyner2``         the bipartite common-information point (I(AB;W), 0)
* ``wyner3``         the tripartite common-information point (I(XYZ;W), 0)
* ``collaborative``  the minimal-public-rate corner: r_p = C(XY:Z) first,
                     then the splitting cost r_k = min I(XY;V|U)
* ``adversarial``    the key-cost corner: r_k = min I(XY;V|U) first, then
                     the smallest simulation rate r_p = I(Z;U) among ties
"""

from __future__ import annotations

import itertools
import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import xlogy

from .decomp import (
    MODEL_ADVERSARIAL,
    MODEL_COLLABORATIVE,
    MODEL_WYNER2,
    MODEL_WYNER3,
    RatePoint,
)
from .dist import JointDist
from .errors import BudgetExceededError, OptimizerDivergedError, ValidationError
from .region import (
    _assemble_adv,
    _assemble_collab,
    _assemble_wyner2,
    _assemble_wyner3,
    _ci_2x2_exact,
    _dense_cube,
    _dense_matrix,
    _mixes_from_pairs,
)

_FEAS_TOL = 1e-10


def _h(p, axis=None):
    return -xlogy(p, p).sum(axis=axis)


def _softmax(z):
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _refit2(w, R, S, Q, iters=600, tol=1e-12):
    """Fixed-point projection of a two-factor mixture onto recon = Q."""
    a, b = Q.shape
    err = np.inf
    stall = 0
    for _ in range(iters):
        M = np.einsum("k,ka,kb->ab", w, R, S)
        scale = np.where(M > 0, Q / np.where(M > 0, M, 1.0), 0.0)
        P = w[:, None, None] * R[:, :, None] * S[:, None, :] * scale[None, :, :]
        w_new = P.sum(axis=(1, 2))
        tot = w_new.sum()
        if tot <= 0:
            return w, R, S, np.inf
        wn = np.where(w_new > 0, w_new, 1.0)[:, None]
        R = np.where(w_new[:, None] > 0, P.sum(axis=2) / wn, 1.0 / a)
        S = np.where(w_new[:, None] > 0, P.sum(axis=1) / wn, 1.0 / b)
        w = w_new / tot
        new_err = float(np.abs(np.einsum("k,ka,kb->ab", w, R, S) - Q).sum())
        stall = stall + 1 if new_err > err * 0.999 else 0
        err = new_err
        if err < tol or stall > 25:
            break
    return w, R, S, err


def _refit3(w, F, G, H, Q, iters=600, tol=1e-12):
    """Fixed-point projection of a three-factor mixture onto recon = Q."""
    a, b, c = Q.shape
    err = np.inf
    stall = 0
    for _ in range(iters):
        M = np.einsum("k,ka,kb,kc->abc", w, F, G, H)
        scale = np.where(M > 0, Q / np.where(M > 0, M, 1.0), 0.0)
        P = (
            w[:, None, None, None]
            * F[:, :, None, None]
            * G[:, None, :, None]
            * H[:, None, None, :]
            * scale[None, :, :, :]
        )
        w_new = P.sum(axis=(1, 2, 3))
        tot = w_new.sum()
        if tot <= 0:
            return w, F, G, H, np.inf
        wn = np.where(w_new > 0, w_new, 1.0)[:, None]
        F = np.where(w_new[:, None] > 0, P.sum(axis=(2, 3)) / wn, 1.0 / a)
        G = np.where(w_new[:, None] > 0, P.sum(axis=(1, 3)) / wn, 1.0 / b)
        H = np.where(w_new[:, None] > 0, P.sum(axis=(1, 2)) / wn, 1.0 / c)
        w = w_new / tot
        new_err = float(np.abs(np.einsum("k,ka,kb,kc->abc", w, F, G, H) - Q).sum())
        stall = stall + 1 if new_err > err * 0.999 else 0
        err = new_err
        if err < tol or stall > 25:
            break
    return w, F, G, H, err


def _value2(w, R, S):
    M = np.einsum("k,ka,kb->ab", w, R, S)
    return float(_h(M) - w @ (_h(R, axis=1) + _h(S, axis=1)))


def _value3(w, F, G, H):
    M = np.einsum("k,ka,kb,kc->abc", w, F, G, H)
    return float(_h(M) - w @ (_h(F, axis=1) + _h(G, axis=1) + _h(H, axis=1)))


def _one_hot_logits(rows: Sequence[int], width: int, scale: float = 8.0):
    out = np.full((len(rows), width), -scale)
    for i, r in enumerate(rows):
        out[i, r % width] = scale
    return out


def _det_starts(k: int, shapes: list[tuple[int, ...]]):
    """Deterministic start points: shifted one-hot blocks and a collapsed one."""
    starts = []
    for shift in range(k):
        theta = [np.zeros(k)]
        for shape in shapes:
            rows = int(np.prod(shape[:-1]))
            theta.append(
                _one_hot_logits([shift + i for i in range(rows)], shape[-1]).ravel()
            )
        starts.append(np.concatenate(theta))
    # constant-W: all weight on one component, flat rows
    collapsed = [np.concatenate([[8.0], np.full(k - 1, -8.0)])]
    for shape in shapes:
        collapsed.append(np.zeros(int(np.prod(shape))))
    starts.append(np.concatenate(collapsed))
    return starts


def _search_mixture(Q, k, n_factors, grid_resolution, seed, maxfev=300):
    """Dense multistart + Powell over softmax blocks with projection."""
    shape = Q.shape
    if n_factors == 2:
        lower = float(_h(Q.sum(1)) + _h(Q.sum(0)) - _h(Q))
    else:
        lower = max(
            float(_h(Q.sum(axis=ax)) + _h(Q.sum(axis=tuple(o for o in range(3) if o != ax))) - _h(Q))
            for ax in range(3)
        )
    blocks_shapes = [(k, shape[i]) for i in range(n_factors)]
    sizes = [k] + [k * shape[i] for i in range(n_factors)]
    offsets = np.cumsum([0] + sizes)
    refit = _refit2 if n_factors == 2 else _refit3

    def decode(theta):
        w = _softmax(theta[offsets[0]:offsets[1]])
        blocks = []
        for i in range(n_factors):
            seg = theta[offsets[i + 1]:offsets[i + 2]].reshape(blocks_shapes[i])
            blocks.append(_softmax(seg))
        return w, blocks

    best = {"val": math.inf, "blocks": None}
    value_fn = _value2 if n_factors == 2 else _value3

    def objective(theta):
        w, blocks = decode(theta)
        out = refit(w, *blocks, Q, iters=150, tol=1e-10)
        err = out[-1]
        w2, blocks2 = out[0], list(out[1:-1])
        if err <= 1e-9:
            val = value_fn(w2, *blocks2)
            if val < best["val"]:
                best["val"] = val
                best["blocks"] = (w2, *blocks2)
            return val
        return 5.0 + min(err, 1.0)

    rng = np.random.default_rng(seed)
    starts = _det_starts(k, blocks_shapes)
    n_random = max(int(grid_resolution) * 2, 4)
    for _ in range(n_random):
        starts.append(rng.normal(0.0, 2.0, size=offsets[-1]))
    for theta in starts:
        objective(theta)
        if best["val"] <= lower + 1e-9:
            break
        res = minimize(
            objective,
            theta,
            method="Powell",
            options={"maxfev": maxfev, "xtol": 1e-8, "ftol": 1e-11},
        )
        objective(res.x)
        if best["val"] <= lower + 1e-9:
            break
    if best["blocks"] is None:
        raise OptimizerDivergedError("oracle found no feasible decomposition")
    out = refit(*best["blocks"], Q, iters=6000, tol=3e-13)
    if out[-1] <= _FEAS_TOL:
        best["blocks"] = out[:-1]
        best["val"] = value_fn(*out[:-1])
    return best["val"], best["blocks"]


def _split_cost_oracle(M, v_card, grid_resolution, seed):
    """Splitting cost of one conditional joint M(x, y), oracle route.

    Quick exact cases first: product conditionals cost 0; when the mutual
    information matches the smaller marginal entropy the deterministic
    reveal is optimal.  Otherwise dense search at cardinality ``v_card``.
    """
    a, b = M.shape
    ra, rb = M.sum(axis=1), M.sum(axis=0)
    rows = np.where(ra > 0)[0]
    cols = np.where(rb > 0)[0]
    Ms = M[np.ix_(rows, cols)]
    ras, rbs = ra[rows], rb[cols]
    mi = float(_h(ras) + _h(rbs) - _h(Ms))
    if mi <= 1e-11:
        return 0.0, (np.array([1.0]), ra[None, :], rb[None, :])
    upper = float(min(_h(ras), _h(rbs)))
    if Ms.shape == (2, 2) and v_card >= 2:
        val, w, Rs, Ss = _ci_2x2_exact(Ms)
        xr = np.zeros((len(w), a))
        yr = np.zeros((len(w), b))
        xr[:, rows] = Rs
        yr[:, cols] = Ss
        return max(val, 0.0), (w, xr, yr)
    if upper - mi <= 1e-9:
        if _h(ras) <= _h(rbs):
            vw = ras
            xr = np.zeros((len(rows), a))
            yr = np.zeros((len(rows), b))
            for m, i in enumerate(rows):
                xr[m, i] = 1.0
                yr[m] = M[i, :] / ra[i]
        else:
            vw = rbs
            xr = np.zeros((len(cols), a))
            yr = np.zeros((len(cols), b))
            for m, j in enumerate(cols):
                yr[m, j] = 1.0
                xr[m] = M[:, j] / rb[j]
        return upper, (vw, xr, yr)
    k = min(v_card, len(rows) * len(cols))
    val, blocks = _search_mixture(Ms, k, 2, grid_resolution, seed, maxfev=500)
    w, Rs, Ss = blocks
    xr = np.zeros((len(w), a))
    yr = np.zeros((len(w), b))
    xr[:, rows] = Rs
    yr[:, cols] = Ss
    return max(val, 0.0), (w, xr, yr)


def brute_force_oracle(
    J: JointDist,
    model: str,
    u_card: int,
    v_card: int = 1,
    grid_resolution: int = 6,
    seed: int = 0,
    groups=None,
) -> RatePoint:
    """Best corner rate point found by dense search, as ground truth.

    See the module docstring for what "corner" means per model.  Budget
    preconditions: the base alphabet product is at most 12 and
    ``u_card * v_card`` at most 8.
    """
    if J.support_size() > 12:
        raise BudgetExceededError(
            f"joint support size {J.support_size()} > 12"
        )
    if u_card * v_card > 8:
        raise BudgetExceededError(f"u_card*v_card = {u_card * v_card} > 8")

    if model == MODEL_WYNER2:
        if groups is None:
            if len(J.variables) != 2:
                raise ValidationError("wyner2 oracle needs groups for >2 variables")
            groups = ((J.variables[0],), (J.variables[1],))
        ga, gb = tuple(groups[0]), tuple(groups[1])
        Q, la, lb = _dense_matrix(J, ga, gb)
        val, (w, R, S) = _search_mixture(Q, u_card, 2, grid_resolution, seed)
        wit = _assemble_wyner2(J, ga, gb, la, lb, w, R, S, model=MODEL_WYNER2)
        return RatePoint.from_witness(wit.validate(1e-9))

    if len(J.variables) != 3:
        raise ValidationError("oracle tripartite models need three variables")
    x, y, z = J.variables

    if model == MODEL_WYNER3:
        Q, lx, ly, lz = _dense_cube(J, x, y, z)
        val, (w, F, G, H) = _search_mixture(Q, u_card, 3, grid_resolution, seed)
        wit = _assemble_wyner3(J, lx, ly, lz, w, F, G, H)
        return RatePoint.from_witness(wit.validate(1e-9))

    if model == MODEL_COLLABORATIVE:
        Q2, pair_labels, z_labels = _dense_matrix(J, (x, y), (z,))
        _, lx, ly, lz = _dense_cube(J, x, y, z)
        val, (w, R, S) = _search_mixture(Q2, u_card, 2, grid_resolution, seed)
        keep = w > 1e-12
        w = w[keep] / w[keep].sum()
        R, S = R[keep], S[keep]
        mixes = _mixes_from_pairs(R, pair_labels, lx, ly)
        parts = []
        r_k = 0.0
        for u, wu in enumerate(w):
            cost, part = _split_cost_oracle(
                mixes[u], v_card, grid_resolution, seed + 17 * (u + 1)
            )
            r_k += wu * cost
            parts.append(part)
        iz = {lab: i for i, lab in enumerate(lz)}
        Zrows = np.zeros((len(w), len(lz)))
        for u in range(len(w)):
            for j, (lab,) in enumerate(z_labels):
                Zrows[u, iz[lab]] = S[u, j]
        wit = _assemble_collab(J, lx, ly, lz, w, parts, Zrows).validate(1e-9)
        return RatePoint.from_witness(wit)

    if model == MODEL_ADVERSARIAL:
        Q, lx, ly, lz = _dense_cube(J, x, y, z)
        a, b, c = Q.shape
        qz = Q.sum((0, 1))
        evals: list[tuple[float, float, np.ndarray]] = []
        cache: dict[bytes, tuple[float, float]] = {}

        def score(phi):
            key = np.round(phi, 6).tobytes()
            if key in cache:
                return cache[key]
            pzu = qz[:, None] * phi
            pu = pzu.sum(0)
            r_p = float(_h(qz) + _h(pu) - _h(pzu))
            pxyu = np.einsum("abc,cu->abu", Q, phi)
            r_k = 0.0
            for u in range(phi.shape[1]):
                if pu[u] <= 1e-13:
                    continue
                cost, _ = _split_cost_oracle(
                    pxyu[:, :, u] / pu[u], v_card, grid_resolution, seed + 31 * u
                )
                r_k += pu[u] * cost
            cache[key] = (max(r_p, 0.0), max(r_k, 0.0))
            evals.append((cache[key][1], cache[key][0], phi.copy()))
            return cache[key]

        def objective(theta):
            phi = _softmax(theta.reshape(c, u_card))
            r_p, r_k = score(phi)
            return r_k + 1e-6 * r_p

        rng = np.random.default_rng(seed)
        starts = []
        for combo in itertools.product(range(u_card), repeat=c):
            starts.append(_one_hot_logits(list(combo), u_card).ravel())
        for _ in range(max(int(grid_resolution), 4)):
            starts.append(rng.normal(0.0, 2.0, size=c * u_card))
        for theta in starts:
            objective(theta)
            res = minimize(
                objective,
                theta,
                method="Powell",
                options={"maxfev": 120, "xtol": 1e-7, "ftol": 1e-10},
            )
            objective(res.x)
        best_rk = min(e[0] for e in evals)
        ties = [e for e in evals if e[0] <= best_rk + 1e-9]
        _, _, phi = min(ties, key=lambda e: e[1])
        pzu = qz[:, None] * phi
        pu = pzu.sum(0)
        pxyu = np.einsum("abc,cu->abu", Q, phi)
        parts = []
        for u in range(phi.shape[1]):
            if pu[u] <= 1e-13:
                parts.append(None)
                continue
            _, part = _split_cost_oracle(
                pxyu[:, :, u] / pu[u], v_card, grid_resolution, seed + 31 * u
            )
            parts.append(part)
        wit = _assemble_adv(J, lx, ly, lz, phi, pu, parts).validate(1e-9)
        return RatePoint.from_witness(wit)

    raise ValidationError(f"unknown model tag {model!r}")
