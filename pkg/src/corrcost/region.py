"""Rate-region computation over auxiliary decompositions.

Solves the nonconvex minimizations behind the public/private correlation
regions:

* bipartite common information  C(A:B)   = min I(AB;W),  A - W - B
* tripartite common information C(X:Y:Z) = min I(XYZ;W), X,Y,Z indep. | W
* collaborative region corners and frontier:
      minimize I(XYZ;U) + lambda * I(XY;V|U)
      s.t. X - VU - Y, XY - U - Z, XYZ marginal fixed
* adversarial region and secret-key cost:
      minimize I(Z;U) + lambda * I(XY;V|U)
      s.t. XY - Z - U, X - UV - Y, XYZ marginal fixed

Search strategy (shared by all models): multiplicative (exponentiated
gradient) descent on product-of-simplex parameter blocks with a ramped
quadratic feasibility penalty, multi-start over structured and random
initializations, followed by an exact feasibility polish.  For the mixture
models the polish is expectation-maximization on the factored joint, which
monotonically drives the reconstruction onto the target marginal; chains
hold exactly by construction of the factored form.  Structured restarts
include deterministic identifications (W = A, W = B, W = cells) and
product-cover splits of the support graph, where corner optima of L-shaped
distributions live.

The collaborative and adversarial private rates are always re-resolved
exactly after the public side is fixed: min_V I(XY;V|U) decouples into one
bipartite common-information problem per letter of U, each solved by the
same trusted machinery.  Every returned rate pair carries a validated
witness, and rates are recomputed from the witness joint.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.special import xlogy

from .decomp import (
    MODEL_ADVERSARIAL,
    MODEL_COLLABORATIVE,
    MODEL_WYNER2,
    MODEL_WYNER3,
    AuxDecomposition,
    Frontier,
    OptimizerConfig,
    RatePoint,
    lower_envelope,
)
from .dist import JointDist, make_joint, measures
from .errors import OptimizerDivergedError, ValidationError

DEFAULT_LAMBDAS = (0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0)

_CARD_CAP = 12  # practical cap on auxiliary cardinality during search
_VALID_ERR = 1e-10  # feasibility residual accepted after polish
_TINY = 1e-300


def _H(p, axis=None):
    return -xlogy(p, p).sum(axis=axis)


def _eg_step(x: np.ndarray, g: np.ndarray, eta: float) -> np.ndarray:
    """Multiplicative update along -g on simplices over the last axis."""
    z = -eta * (g - g.max(axis=-1, keepdims=True))
    np.clip(z, -60.0, 60.0, out=z)
    y = x * np.exp(z)
    s = y.sum(axis=-1, keepdims=True)
    uniform = 1.0 / x.shape[-1]
    return np.where(s > 0, y / np.where(s > 0, s, 1.0), uniform)


def _smooth(x: np.ndarray, eps: float = 1e-3) -> np.ndarray:
    """Mix a simplex block with the uniform one to clear exact zeros."""
    u = 1.0 / x.shape[-1]
    y = (1.0 - eps) * x + eps * u
    return y / y.sum(axis=-1, keepdims=True)


# ---------------------------------------------------------------------------
# dense views
# ---------------------------------------------------------------------------


def _group_labels(J: JointDist, group: Sequence[str]) -> list[tuple]:
    """Support labels of a variable group, in alphabet-product order."""
    idx = J.indices(group)
    present = {tuple(pt[i] for i in idx) for pt in J.mass}
    out = []
    for combo in itertools.product(*(J.alphabets[v] for v in group)):
        if combo in present:
            out.append(combo)
    return out


def _dense_matrix(J: JointDist, ga, gb):
    la = _group_labels(J, ga)
    lb = _group_labels(J, gb)
    ia = {lab: i for i, lab in enumerate(la)}
    ib = {lab: i for i, lab in enumerate(lb)}
    a_idx = J.indices(ga)
    b_idx = J.indices(gb)
    Q = np.zeros((len(la), len(lb)))
    for pt, p in J.mass.items():
        Q[ia[tuple(pt[i] for i in a_idx)], ib[tuple(pt[i] for i in b_idx)]] += p
    return Q, la, lb


def _dense_cube(J: JointDist, x: str, y: str, z: str):
    lx = [lab for (lab,) in _group_labels(J, (x,))]
    ly = [lab for (lab,) in _group_labels(J, (y,))]
    lz = [lab for (lab,) in _group_labels(J, (z,))]
    ix = {lab: i for i, lab in enumerate(lx)}
    iy = {lab: i for i, lab in enumerate(ly)}
    iz = {lab: i for i, lab in enumerate(lz)}
    xi, yi, zi = (J.indices((v,))[0] for v in (x, y, z))
    Q = np.zeros((len(lx), len(ly), len(lz)))
    for pt, p in J.mass.items():
        Q[ix[pt[xi]], iy[pt[yi]], iz[pt[zi]]] += p
    return Q, lx, ly, lz


# ---------------------------------------------------------------------------
# two-block mixture solver (bipartite common information)
# ---------------------------------------------------------------------------


def _recon2(w, R, S):
    return np.einsum("k,ka,kb->ab", w, R, S)


def _fg2(w, R, S, Q, mu):
    M = _recon2(w, R, S)
    D = M - Q
    HR = _H(R, axis=1)
    HS = _H(S, axis=1)
    F = _H(M) - float(w @ (HR + HS)) + mu * float((D * D).sum())
    GM = -np.log(np.maximum(M, _TINY)) - 1.0 + 2.0 * mu * D
    gw = np.einsum("ab,ka,kb->k", GM, R, S) - (HR + HS)
    gR = np.einsum("ab,kb->ka", GM, S) * w[:, None] + w[:, None] * (
        np.log(np.maximum(R, _TINY)) + 1.0
    )
    gS = np.einsum("ab,ka->kb", GM, R) * w[:, None] + w[:, None] * (
        np.log(np.maximum(S, _TINY)) + 1.0
    )
    return F, (gw, gR, gS)


def _eg_loop(params, Q, fg, cfg: OptimizerConfig):
    """Penalty-ramped exponentiated-gradient descent over simplex blocks."""
    stages = np.geomspace(10.0, max(cfg.penalty_weight, 10.0), 5)
    iters = max(cfg.max_iters // len(stages), 1) if cfg.max_iters else 0
    eta = 0.5
    for mu in stages:
        if iters == 0:
            break
        F, grads = fg(*params, Q, mu)
        flat = 0
        for _ in range(iters):
            accepted = False
            for _ in range(12):
                cand = tuple(_eg_step(x, g, eta) for x, g in zip(params, grads))
                F2, grads2 = fg(*cand, Q, mu)
                if F2 <= F - 1e-15:
                    params, F, grads = cand, F2, grads2
                    eta = min(eta * 1.3, 5.0)
                    accepted = True
                    break
                eta *= 0.5
                if eta < 1e-9:
                    break
            if not accepted:
                break
            flat = flat + 1 if abs(F - F2) < 1e-12 else 0
            if flat > 20:
                break
        eta = max(eta, 1e-3)
    return params


def _distinct_leaders(candidates, count):
    """First candidates with pairwise distinct objective values."""
    out = []
    for c in candidates:
        if all(abs(c.value - o.value) > 1e-6 for o in out):
            out.append(c)
        if len(out) >= count:
            break
    return out


def _feasible_descent(blocks, Q, fg, polish, value_of, iters=60):
    """Monotone descent along the feasible manifold.

    Alternates one multiplicative step on the unpenalized objective with an
    exact re-polish, accepting only steps that keep feasibility and lower
    the objective.  Terminal values are locally tight, which the penalty
    ramp alone does not guarantee.
    """
    out = polish(*blocks, Q, 300)
    if out[-1] > _VALID_ERR:
        return blocks
    blocks = out[:-1]
    best = value_of(blocks)
    eta = 0.25
    for _ in range(iters):
        _, grads = fg(*blocks, Q, 0.0)
        improved = False
        for _ in range(8):
            cand = tuple(
                _eg_step(_smooth(x, 1e-12), g, eta) for x, g in zip(blocks, grads)
            )
            out = polish(*cand, Q, 150)
            if out[-1] <= _VALID_ERR:
                val = value_of(out[:-1])
                if val < best - 1e-13:
                    blocks = out[:-1]
                    best = val
                    eta = min(eta * 1.4, 2.0)
                    improved = True
                    break
            eta *= 0.5
            if eta < 1e-7:
                break
        if not improved:
            break
    return blocks


def _anneal_refine(topk, Q, fg, polish, cfg: OptimizerConfig, rounds: int = 2):
    """Re-knead the best candidates: perturbing ramp, descent, exact polish.

    Restarting the penalty ramp from a feasible point briefly relaxes the
    constraint and lets the descent slide along the feasible manifold out
    of shallow basins; the polish then restores exact feasibility.
    """
    def value_of(blocks):
        F, _ = fg(*blocks, Q, 0.0)
        return F

    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 9001]))
    hop_cfg = replace(cfg, max_iters=min(cfg.max_iters, 250))
    refined = []
    for cand in topk:
        blocks = _feasible_descent(cand.blocks, Q, fg, polish, value_of)
        best_val = value_of(blocks)
        for hop in range(rounds * 3):
            if hop % 2 == 0:
                # annealed re-ramp from the incumbent
                out = _eg_loop(tuple(_smooth(x, 1e-4) for x in blocks), Q, fg, hop_cfg)
            else:
                # random kick: blend incumbent rows with fresh Dirichlet rows
                mixed = []
                for x in blocks:
                    noise = rng.dirichlet(
                        np.full(x.shape[-1], 0.7), size=x.shape[:-1]
                    ).reshape(x.shape)
                    t = rng.uniform(0.2, 0.6)
                    mixed.append((1 - t) * x + t * noise)
                out = _eg_loop(tuple(mixed), Q, fg, hop_cfg)
            polished = polish(*out, Q, hop_cfg.polish_iters)
            if polished[-1] > _VALID_ERR:
                continue
            trial = _feasible_descent(polished[:-1], Q, fg, polish, value_of)
            val = value_of(trial)
            if val < best_val - 1e-12:
                blocks, best_val = trial, val
        refined.append(blocks)
    return refined


def _em_polish2(w, R, S, Q, iters, tol=5e-13):
    err = np.inf
    stall = 0
    for _ in range(iters):
        M = _recon2(w, R, S)
        ratio = np.where(M > 0, Q / np.where(M > 0, M, 1.0), 0.0)
        P = w[:, None, None] * R[:, :, None] * S[:, None, :] * ratio[None, :, :]
        w2 = P.sum(axis=(1, 2))
        tot = w2.sum()
        if tot <= 0:
            break
        safe = np.where(w2 > 0, w2, 1.0)[:, None]
        R = np.where(w2[:, None] > 0, P.sum(axis=2) / safe, 1.0 / Q.shape[0])
        S = np.where(w2[:, None] > 0, P.sum(axis=1) / safe, 1.0 / Q.shape[1])
        w = w2 / tot
        new_err = float(np.abs(_recon2(w, R, S) - Q).sum())
        stall = stall + 1 if new_err > err * 0.9995 else 0
        err = new_err
        if err < tol or stall > 40:
            break
    return w, R, S, err


def _maximal_rectangles(mask: np.ndarray) -> list[tuple[tuple, tuple]]:
    """Maximal all-positive rectangles (row set x column set) of a support mask."""
    a, b = mask.shape
    seen = {}
    cols_all = list(range(b))
    for r in range(a):
        base = tuple(c for c in cols_all if mask[r, c])
        for size in range(1, len(base) + 1):
            for cols in itertools.combinations(base, size):
                rows = tuple(
                    i for i in range(a) if all(mask[i, c] for c in cols)
                )
                if not rows:
                    continue
                closure = tuple(
                    c for c in cols_all if all(mask[i, c] for i in rows)
                )
                seen[(rows, closure)] = True
    rects = list(seen)
    maximal = []
    for r1 in rects:
        rs1, cs1 = set(r1[0]), set(r1[1])
        if not any(
            r2 != r1 and rs1 <= set(r2[0]) and cs1 <= set(r2[1]) for r2 in rects
        ):
            maximal.append(r1)
    return maximal


def _cover_inits2(Q: np.ndarray, k: int) -> list[tuple]:
    """Initializations from product-cover splits of the support graph."""
    a, b = Q.shape
    mask = Q > 0
    rects = _maximal_rectangles(mask)
    if not rects or len(rects) > 64:
        return []
    inits = []

    def blocks_from_shares(shares):
        # shares: list of (rect, weight-matrix over cells)
        w = np.zeros(k)
        R = np.full((k, a), 1.0 / a)
        S = np.full((k, b), 1.0 / b)
        for i, (rect, cellw) in enumerate(shares[:k]):
            m = Q * cellw
            tot = m.sum()
            if tot <= 0:
                continue
            w[i] = tot
            R[i] = m.sum(axis=1) / tot
            S[i] = m.sum(axis=0) / tot
        if w.sum() <= 0:
            return None
        w /= w.sum()
        return (w, R, S)

    def cover_sets(order):
        chosen = []
        uncovered = {(i, j) for i in range(a) for j in range(b) if mask[i, j]}
        for rect in order:
            cells = {(i, j) for i in rect[0] for j in rect[1]}
            gain = cells & uncovered
            if gain:
                chosen.append(rect)
                uncovered -= gain
            if not uncovered:
                break
        return chosen if not uncovered else None

    by_area = sorted(rects, key=lambda r: -len(r[0]) * len(r[1]))
    for order in (by_area, by_area[::-1]):
        chosen = cover_sets(order)
        if chosen is None or len(chosen) > k:
            continue
        cover_count = np.zeros((a, b))
        for rect in chosen:
            for i in rect[0]:
                for j in rect[1]:
                    cover_count[i, j] += 1
        # balanced: split shared cells evenly among covering rectangles
        shares_bal = []
        for rect in chosen:
            cw = np.zeros((a, b))
            for i in rect[0]:
                for j in rect[1]:
                    if mask[i, j]:
                        cw[i, j] = 1.0 / cover_count[i, j]
            shares_bal.append((rect, cw))
        blocks = blocks_from_shares(shares_bal)
        if blocks is not None:
            inits.append(blocks)
        # hard: assign each cell to the first covering rectangle
        assigned = np.full((a, b), -1)
        for r_i, rect in enumerate(chosen):
            for i in rect[0]:
                for j in rect[1]:
                    if mask[i, j] and assigned[i, j] < 0:
                        assigned[i, j] = r_i
        shares_hard = []
        for r_i, rect in enumerate(chosen):
            cw = (assigned == r_i).astype(float)
            shares_hard.append((rect, cw))
        blocks = blocks_from_shares(shares_hard)
        if blocks is not None:
            inits.append(blocks)
    return inits


def _structured_inits2(Q: np.ndarray, k: int) -> list[tuple]:
    a, b = Q.shape
    qa = Q.sum(axis=1)
    qb = Q.sum(axis=0)
    inits = []
    # constant W
    w = np.zeros(k)
    w[0] = 1.0
    R = np.full((k, a), 1.0 / a)
    S = np.full((k, b), 1.0 / b)
    R[0], S[0] = qa, qb
    inits.append((w, R, S))
    # W = A
    if k >= a:
        w = np.zeros(k)
        w[:a] = qa
        R = np.full((k, a), 1.0 / a)
        S = np.full((k, b), 1.0 / b)
        R[:a] = np.eye(a)
        S[:a] = Q / np.maximum(qa[:, None], _TINY)
        inits.append((w, R, S))
    # W = B
    if k >= b:
        w = np.zeros(k)
        w[:b] = qb
        R = np.full((k, a), 1.0 / a)
        S = np.full((k, b), 1.0 / b)
        S[:b] = np.eye(b)
        R[:b] = (Q / np.maximum(qb[None, :], _TINY)).T
        inits.append((w, R, S))
    # W = joint cell
    cells = [(i, j) for i in range(a) for j in range(b) if Q[i, j] > 0]
    if k >= len(cells):
        w = np.zeros(k)
        R = np.full((k, a), 1.0 / a)
        S = np.full((k, b), 1.0 / b)
        for m, (i, j) in enumerate(cells):
            w[m] = Q[i, j]
            R[m] = np.eye(a)[i]
            S[m] = np.eye(b)[j]
        inits.append((w, R, S))
    inits.extend(_cover_inits2(Q, k))
    return inits


def _random_blocks(rng: np.random.Generator, k: int, shapes, alpha: float):
    out = []
    for shape in shapes:
        x = rng.dirichlet(np.full(shape[-1], alpha), size=shape[:-1])
        out.append(x.reshape(shape))
    return out


@dataclass
class _MixCandidate:
    value: float
    err: float
    blocks: tuple


def _solve_mixture2(Q, k, cfg: OptimizerConfig, seed_tag: int, extra_inits=()):
    """Best decompositions of a bipartite matrix into k product components."""
    a, b = Q.shape
    structured = _structured_inits2(Q, k) + [
        tuple(np.array(x) for x in e) for e in extra_inits
    ]
    ss = np.random.SeedSequence([cfg.seed, seed_tag])
    n_probe = max((5 * cfg.restarts) // 2, len(structured))
    children = ss.spawn(n_probe)
    probes = list(structured)
    for i in range(n_probe):
        rng = np.random.default_rng(children[i])
        alpha = (0.25, 0.7, 1.0, 2.5)[i % 4]
        w = rng.dirichlet(np.full(k, 1.0))
        R, S = _random_blocks(rng, k, [(k, a), (k, b)], alpha)
        probes.append((w, R, S))

    candidates: list[_MixCandidate] = []

    def finish(w, R, S, iters=None):
        w, R, S, err = _em_polish2(w, R, S, Q, iters or cfg.polish_iters)
        if err <= _VALID_ERR:
            M = _recon2(w, R, S)
            value = float(_H(M) - w @ (_H(R, axis=1) + _H(S, axis=1)))
            candidates.append(_MixCandidate(value, err, (w, R, S)))

    # wide phase: exact polish of every probe
    probe_iters = min(cfg.polish_iters, 800)
    for w, R, S in probes:
        finish(w.copy(), R.copy(), S.copy(), probe_iters)
    # deep phase: penalty descent from the structured inits and the most
    # promising probes, then annealed hops around the leaders
    if cfg.max_iters:
        candidates.sort(key=lambda c: c.value)
        deep = [p for p in probes[: len(structured)]]
        deep += [c.blocks for c in candidates[: max(cfg.restarts // 8, 4)]]
        for blocks in deep:
            sm = tuple(_smooth(np.array(x)) for x in blocks)
            out = _eg_loop(sm, Q, _fg2, cfg)
            finish(*out)
        if not candidates:
            raise OptimizerDivergedError(
                "no restart reached feasibility within tolerance"
            )
        candidates.sort(key=lambda c: c.value)
        leaders = _distinct_leaders(candidates, 3)
        for blocks in _anneal_refine(leaders, Q, _fg2, _em_polish2, cfg):
            finish(*blocks)
    if not candidates:
        raise OptimizerDivergedError(
            "no restart reached feasibility within tolerance"
        )
    candidates.sort(key=lambda c: c.value)
    return candidates


# ---------------------------------------------------------------------------
# three-block mixture solver (tripartite common information)
# ---------------------------------------------------------------------------


def _recon3(w, Fb, Gb, Hb):
    return np.einsum("k,ka,kb,kc->abc", w, Fb, Gb, Hb)


def _fg3(w, Fb, Gb, Hb, Q, mu):
    M = _recon3(w, Fb, Gb, Hb)
    D = M - Q
    HF = _H(Fb, axis=1)
    HG = _H(Gb, axis=1)
    HH = _H(Hb, axis=1)
    F = _H(M) - float(w @ (HF + HG + HH)) + mu * float((D * D).sum())
    GM = -np.log(np.maximum(M, _TINY)) - 1.0 + 2.0 * mu * D
    gw = np.einsum("abc,ka,kb,kc->k", GM, Fb, Gb, Hb) - (HF + HG + HH)
    gF = np.einsum("abc,kb,kc->ka", GM, Gb, Hb) * w[:, None] + w[:, None] * (
        np.log(np.maximum(Fb, _TINY)) + 1.0
    )
    gG = np.einsum("abc,ka,kc->kb", GM, Fb, Hb) * w[:, None] + w[:, None] * (
        np.log(np.maximum(Gb, _TINY)) + 1.0
    )
    gH = np.einsum("abc,ka,kb->kc", GM, Fb, Gb) * w[:, None] + w[:, None] * (
        np.log(np.maximum(Hb, _TINY)) + 1.0
    )
    return F, (gw, gF, gG, gH)


def _em_polish3(w, Fb, Gb, Hb, Q, iters, tol=5e-13):
    err = np.inf
    stall = 0
    a, b, c = Q.shape
    for _ in range(iters):
        M = _recon3(w, Fb, Gb, Hb)
        ratio = np.where(M > 0, Q / np.where(M > 0, M, 1.0), 0.0)
        P = (
            w[:, None, None, None]
            * Fb[:, :, None, None]
            * Gb[:, None, :, None]
            * Hb[:, None, None, :]
            * ratio[None, :, :, :]
        )
        w2 = P.sum(axis=(1, 2, 3))
        tot = w2.sum()
        if tot <= 0:
            break
        safe = np.where(w2 > 0, w2, 1.0)[:, None]
        Fb = np.where(w2[:, None] > 0, P.sum(axis=(2, 3)) / safe, 1.0 / a)
        Gb = np.where(w2[:, None] > 0, P.sum(axis=(1, 3)) / safe, 1.0 / b)
        Hb = np.where(w2[:, None] > 0, P.sum(axis=(1, 2)) / safe, 1.0 / c)
        w = w2 / tot
        new_err = float(np.abs(_recon3(w, Fb, Gb, Hb) - Q).sum())
        stall = stall + 1 if new_err > err * 0.9995 else 0
        err = new_err
        if err < tol or stall > 40:
            break
    return w, Fb, Gb, Hb, err


def _structured_inits3(Q: np.ndarray, k: int) -> list[tuple]:
    a, b, c = Q.shape
    qx, qy, qz = Q.sum((1, 2)), Q.sum((0, 2)), Q.sum((0, 1))
    inits = []

    def blank():
        return (
            np.zeros(k),
            np.full((k, a), 1.0 / a),
            np.full((k, b), 1.0 / b),
            np.full((k, c), 1.0 / c),
        )

    # constant W
    w, Fb, Gb, Hb = blank()
    w[0] = 1.0
    Fb[0], Gb[0], Hb[0] = qx, qy, qz
    inits.append((w, Fb, Gb, Hb))

    # W equal to one coordinate (product structure of the conditional is
    # generally approximate; the polish either repairs or rejects it)
    for axis, size, marg in ((0, a, qx), (1, b, qy), (2, c, qz)):
        if k < size:
            continue
        w, Fb, Gb, Hb = blank()
        for m in range(size):
            w[m] = marg[m]
            if marg[m] <= 0:
                continue
            sl = np.take(Q, m, axis=axis) / marg[m]
            if axis == 0:
                Fb[m] = np.eye(a)[m]
                Gb[m] = sl.sum(axis=1)
                Hb[m] = sl.sum(axis=0)
            elif axis == 1:
                Gb[m] = np.eye(b)[m]
                Fb[m] = sl.sum(axis=1)
                Hb[m] = sl.sum(axis=0)
            else:
                Hb[m] = np.eye(c)[m]
                Fb[m] = sl.sum(axis=1)
                Gb[m] = sl.sum(axis=0)
        inits.append((w, Fb, Gb, Hb))

    # W equal to a coordinate pair (exactly feasible)
    pairs = [
        ((0, 1), [(i, j) for i in range(a) for j in range(b) if Q[i, j, :].sum() > 0]),
        ((0, 2), [(i, j) for i in range(a) for j in range(c) if Q[i, :, j].sum() > 0]),
        ((1, 2), [(i, j) for i in range(b) for j in range(c) if Q[:, i, j].sum() > 0]),
    ]
    for (ax1, ax2), cells in pairs:
        if k < len(cells):
            continue
        w, Fb, Gb, Hb = blank()
        for m, (i, j) in enumerate(cells):
            if (ax1, ax2) == (0, 1):
                row = Q[i, j, :]
                w[m] = row.sum()
                Fb[m], Gb[m], Hb[m] = np.eye(a)[i], np.eye(b)[j], row / row.sum()
            elif (ax1, ax2) == (0, 2):
                row = Q[i, :, j]
                w[m] = row.sum()
                Fb[m], Gb[m], Hb[m] = np.eye(a)[i], row / row.sum(), np.eye(c)[j]
            else:
                row = Q[:, i, j]
                w[m] = row.sum()
                Fb[m], Gb[m], Hb[m] = row / row.sum(), np.eye(b)[i], np.eye(c)[j]
        inits.append((w, Fb, Gb, Hb))

    # W = full cell index
    cells = [
        (i, j, l)
        for i in range(a)
        for j in range(b)
        for l in range(c)
        if Q[i, j, l] > 0
    ]
    if k >= len(cells):
        w, Fb, Gb, Hb = blank()
        for m, (i, j, l) in enumerate(cells):
            w[m] = Q[i, j, l]
            Fb[m], Gb[m], Hb[m] = np.eye(a)[i], np.eye(b)[j], np.eye(c)[l]
        inits.append((w, Fb, Gb, Hb))
    return inits


def _hierarchical_inits3(Q, k, cfg: OptimizerConfig, seed_tag: int):
    """Axis-conditioned splittings: reveal one coordinate, split the rest.

    For each axis letter the conditional over the remaining two coordinates
    is decomposed into products by the bipartite solver, giving an exactly
    feasible three-way decomposition with (axis size) * k_inner components.
    These are strong basins for small instances and are cheap to build.
    """
    a, b, c = Q.shape
    inner_cfg = replace(
        cfg,
        restarts=max(cfg.inner_restarts, 8),
        max_iters=min(cfg.inner_max_iters, 300),
        polish_iters=min(cfg.polish_iters, 1000),
        u_card=None,
    )
    out = []
    for axis, size in ((0, a), (1, b), (2, c)):
        k_inner = k // size
        if k_inner < 1:
            continue
        marg = Q.sum(tuple(i for i in range(3) if i != axis))
        comps_w, comps_f, comps_g, comps_h = [], [], [], []
        ok = True
        for m in range(size):
            if marg[m] <= 0:
                continue
            cond = np.take(Q, m, axis=axis) / marg[m]
            rows = np.where(cond.sum(axis=1) > 0)[0]
            cols = np.where(cond.sum(axis=0) > 0)[0]
            sub = cond[np.ix_(rows, cols)]
            ki = min(k_inner, sub.shape[0] * sub.shape[1])
            try:
                cands = _solve_mixture2(
                    sub, ki, inner_cfg, seed_tag=seed_tag + 31 * m + axis
                )
            except OptimizerDivergedError:
                ok = False
                break
            wi, Ri, Si = cands[0].blocks
            for t in range(len(wi)):
                if wi[t] <= 1e-13:
                    continue
                comps_w.append(marg[m] * wi[t])
                one = np.eye(size)[m]
                r_full = np.zeros(cond.shape[0])
                r_full[rows] = Ri[t]
                s_full = np.zeros(cond.shape[1])
                s_full[cols] = Si[t]
                if axis == 0:
                    comps_f.append(one)
                    comps_g.append(r_full)
                    comps_h.append(s_full)
                elif axis == 1:
                    comps_f.append(r_full)
                    comps_g.append(one)
                    comps_h.append(s_full)
                else:
                    comps_f.append(r_full)
                    comps_g.append(s_full)
                    comps_h.append(one)
        if not ok or not comps_w or len(comps_w) > max(k, len(comps_w)):
            continue
        w = np.array(comps_w)
        out.append(
            (w / w.sum(), np.array(comps_f), np.array(comps_g), np.array(comps_h))
        )
    return out


def _solve_mixture3(Q, k, cfg: OptimizerConfig, seed_tag: int, extra_inits=()):
    a, b, c = Q.shape
    structured = (
        _structured_inits3(Q, k)
        + _hierarchical_inits3(Q, k, cfg, seed_tag + 7000)
        + [tuple(np.array(x) for x in e) for e in extra_inits]
    )
    ss = np.random.SeedSequence([cfg.seed, seed_tag])
    n_probe = max((5 * cfg.restarts) // 2, len(structured))
    children = ss.spawn(n_probe)
    probes = list(structured)
    for i in range(n_probe):
        rng = np.random.default_rng(children[i])
        alpha = (0.25, 0.7, 1.0, 2.5)[i % 4]
        w = rng.dirichlet(np.full(k, 1.0))
        Fb, Gb, Hb = _random_blocks(rng, k, [(k, a), (k, b), (k, c)], alpha)
        probes.append((w, Fb, Gb, Hb))

    candidates: list[_MixCandidate] = []

    def finish(w, Fb, Gb, Hb, iters=None):
        w, Fb, Gb, Hb, err = _em_polish3(w, Fb, Gb, Hb, Q, iters or cfg.polish_iters)
        if err <= _VALID_ERR:
            M = _recon3(w, Fb, Gb, Hb)
            value = float(
                _H(M) - w @ (_H(Fb, axis=1) + _H(Gb, axis=1) + _H(Hb, axis=1))
            )
            candidates.append(_MixCandidate(value, err, (w, Fb, Gb, Hb)))

    probe_iters = min(cfg.polish_iters, 800)
    for blocks in probes:
        finish(*(np.array(x).copy() for x in blocks), probe_iters)
    if cfg.max_iters:
        candidates.sort(key=lambda c: c.value)
        deep = [p for p in probes[: len(structured)]]
        deep += [c.blocks for c in candidates[: max(cfg.restarts // 8, 4)]]
        for blocks in deep:
            sm = tuple(_smooth(np.array(x)) for x in blocks)
            out = _eg_loop(sm, Q, _fg3, cfg)
            finish(*out)
        if not candidates:
            raise OptimizerDivergedError(
                "no restart reached feasibility within tolerance"
            )
        candidates.sort(key=lambda c: c.value)
        leaders = _distinct_leaders(candidates, 3)
        for blocks in _anneal_refine(leaders, Q, _fg3, _em_polish3, cfg):
            finish(*blocks)
    if not candidates:
        raise OptimizerDivergedError(
            "no restart reached feasibility within tolerance"
        )
    candidates.sort(key=lambda c: c.value)
    return candidates


# ---------------------------------------------------------------------------
# inner private-rate resolution: min_V I(XY;V|U) given the public layer
# ---------------------------------------------------------------------------


def _ci_2x2_exact(M: np.ndarray, ngrid: int = 80):
    """Exact bipartite common information of a 2x2 joint.

    Every 2x2 joint admits an optimal two-component decomposition, and the
    family of such decompositions has two free parameters: the first
    component's row and column distributions.  Its weight is then fixed by
    the rank-one condition on the remainder, det(M - t N) = 0, which is
    linear in t because N is rank one.  A dense grid plus a local
    Nelder-Mead refinement over the two parameters is globally reliable.
    Matches the known closed form for doubly symmetric binary sources to
    machine precision.

    Returns (value, weights, rows, cols) of the best decomposition.
    """
    from scipy.optimize import minimize as _nm

    det_m = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    hm = _H(M)

    def split(ab):
        a, b = ab
        if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
            return None
        N = np.outer((a, 1.0 - a), (b, 1.0 - b))
        d = N[0, 0] * M[1, 1] + M[0, 0] * N[1, 1] - N[0, 1] * M[1, 0] - M[0, 1] * N[1, 0]
        if abs(d) < 1e-14:
            return None
        t = det_m / d
        A = t * N
        B = M - A
        if t < -1e-12 or (A < -1e-12).any() or (B < -1e-12).any():
            return None
        return np.clip(A, 0.0, None), np.clip(B, 0.0, None)

    def value(ab):
        parts = split(ab)
        if parts is None:
            return 10.0
        val = hm
        for C in parts:
            w = C.sum()
            if w > 1e-15:
                r = C.sum(axis=1) / w
                s = C.sum(axis=0) / w
                val -= w * (_H(r) + _H(s))
        return val

    # vectorized dense scan over the two free parameters
    grid = np.linspace(0.001, 0.999, ngrid)
    A_, B_ = np.meshgrid(grid, grid, indexing="ij")
    a_f, b_f = A_.ravel(), B_.ravel()
    n00, n01 = a_f * b_f, a_f * (1 - b_f)
    n10, n11 = (1 - a_f) * b_f, (1 - a_f) * (1 - b_f)
    d = n00 * M[1, 1] + M[0, 0] * n11 - n01 * M[1, 0] - M[0, 1] * n10
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(np.abs(d) > 1e-14, det_m / np.where(np.abs(d) > 1e-14, d, 1.0), np.nan)
    A00, A01, A10, A11 = t * n00, t * n01, t * n10, t * n11
    B00, B01 = M[0, 0] - A00, M[0, 1] - A01
    B10, B11 = M[1, 0] - A10, M[1, 1] - A11
    ok = (
        (t >= -1e-12)
        & (A00 >= -1e-12) & (A01 >= -1e-12) & (A10 >= -1e-12) & (A11 >= -1e-12)
        & (B00 >= -1e-12) & (B01 >= -1e-12) & (B10 >= -1e-12) & (B11 >= -1e-12)
    )

    def _hrow(p, q):
        tot = np.maximum(p + q, 1e-300)
        pa, pb = np.clip(p, 0, None) / tot, np.clip(q, 0, None) / tot
        return -(xlogy(pa, pa) + xlogy(pb, pb))

    wA = np.clip(A00 + A01 + A10 + A11, 0, None)
    wB = np.clip(B00 + B01 + B10 + B11, 0, None)
    vals = np.where(ok, hm, 10.0)
    vals = vals - np.where(ok & (wA > 1e-15),
                           wA * (_hrow(A00 + A01, A10 + A11) + _hrow(A00 + A10, A01 + A11)), 0.0)
    vals = vals - np.where(ok & (wB > 1e-15),
                           wB * (_hrow(B00 + B01, B10 + B11) + _hrow(B00 + B10, B01 + B11)), 0.0)
    idx = int(np.nanargmin(vals))
    best, barg = float(vals[idx]), (float(a_f[idx]), float(b_f[idx]))
    res = _nm(value, np.array(barg), method="Nelder-Mead",
              options={"xatol": 1e-11, "fatol": 1e-13, "maxfev": 300})
    if res.fun < best:
        best, barg = float(res.fun), tuple(res.x)
    parts = split(barg)
    if parts is None:
        # fall back to the trivial single-component split
        return float(hm - _H(M.sum(1)) - _H(M.sum(0))), np.array([1.0]),             M.sum(axis=1)[None, :], M.sum(axis=0)[None, :]
    ws, rows, cols = [], [], []
    for C in parts:
        w = C.sum()
        if w > 1e-15:
            ws.append(w)
            rows.append(C.sum(axis=1) / w)
            cols.append(C.sum(axis=0) / w)
    ws = np.array(ws)
    return float(best), ws / ws.sum(), np.array(rows), np.array(cols)


def _inner_splitting(M: np.ndarray, cfg: OptimizerConfig, seed_tag: int):
    """Optimal splitting of one conditional joint M(x, y).

    Returns (cost, v_weights, x_rows, y_rows) where the mixture
    sum_v v_weights[v] * x_rows[v] (x) y_rows[v] reproduces M and X, Y are
    independent within each component.  Shortcuts: an already-product M
    costs 0; when the mutual-information lower bound meets the
    min-marginal-entropy upper bound the deterministic witness is exact.
    """
    a, b = M.shape
    ra = M.sum(axis=1)
    rb = M.sum(axis=0)
    rows = np.where(ra > 0)[0]
    cols = np.where(rb > 0)[0]
    Ms = M[np.ix_(rows, cols)]
    ras, rbs = ra[rows], rb[cols]
    mi = float(_H(ras) + _H(rbs) - _H(Ms))
    if mi <= 1e-11:
        vw = np.array([1.0])
        xr = np.zeros((1, a))
        yr = np.zeros((1, b))
        xr[0], yr[0] = ra, rb
        return 0.0, vw, xr, yr
    upper = float(min(_H(ras), _H(rbs)))
    if upper - mi <= 1e-9:
        # pinned: reveal the lower-entropy side
        if _H(ras) <= _H(rbs):
            vw = ras
            xr = np.eye(len(rows), a)  # placeholder, replaced below
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
        return upper, vw, xr, yr
    if Ms.shape == (2, 2):
        val, w, Rk, Sk = _ci_2x2_exact(Ms)
        xr = np.zeros((len(w), a))
        yr = np.zeros((len(w), b))
        xr[:, rows] = Rk
        yr[:, cols] = Sk
        return max(val, 0.0), w, xr, yr
    inner_cfg = replace(
        cfg,
        restarts=cfg.inner_restarts,
        max_iters=cfg.inner_max_iters,
        polish_iters=min(cfg.polish_iters, 1200),
    )
    k = min(len(rows) * len(cols), 9)
    cands = _solve_mixture2(Ms, k, inner_cfg, seed_tag)
    w, R, S = cands[0].blocks
    keep = w > 1e-12
    w = w[keep] / w[keep].sum()
    Rk, Sk = R[keep], S[keep]
    xr = np.zeros((len(w), a))
    yr = np.zeros((len(w), b))
    xr[:, rows] = Rk
    yr[:, cols] = Sk
    return max(cands[0].value, 0.0), w, xr, yr


def _resolve_inner(w_u, mixes, cfg, seed_tag):
    """Private rate sum and per-letter splitting witnesses for a public layer."""
    total = 0.0
    parts = []
    for u, wu in enumerate(w_u):
        if wu <= 1e-14:
            parts.append(None)
            continue
        cost, vw, xr, yr = _inner_splitting(mixes[u], cfg, seed_tag + 1000 + u)
        total += wu * cost
        parts.append((vw, xr, yr))
    return total, parts


# ---------------------------------------------------------------------------
# witness assembly
# ---------------------------------------------------------------------------


def _weave_point(J: JointDist, assignments: dict) -> tuple:
    return tuple(assignments[v] for v in J.variables)


def _assemble_wyner2(J, ga, gb, la, lb, w, R, S, model, u_var="W"):
    mass = {}
    for m, wm in enumerate(w):
        if wm <= 1e-14:
            continue
        for i, pa in enumerate(R[m]):
            if pa <= 1e-15:
                continue
            for j, pb in enumerate(S[m]):
                if pb <= 1e-15:
                    continue
                p = wm * pa * pb
                if p <= 1e-16:
                    continue
                assignment = dict(zip(ga, la[i]))
                assignment.update(zip(gb, lb[j]))
                pt = _weave_point(J, assignment) + (m,)
                mass[pt] = mass.get(pt, 0.0) + p
    used = sorted({pt[-1] for pt in mass})
    alphabets = {v: tuple(J.alphabets[v]) for v in J.variables}
    alphabets[u_var] = tuple(used)
    joint = make_joint(J.variables + (u_var,), alphabets, mass)
    return AuxDecomposition(
        joint=joint,
        base=J,
        model=model,
        u_var=u_var,
        v_var=None,
        roles=J.variables if model == MODEL_WYNER3 and len(J.variables) == 3 else None,
        groups=(tuple(ga), tuple(gb)) if model == MODEL_WYNER2 else None,
    )


def _assemble_wyner3(J, lx, ly, lz, w, Fb, Gb, Hb, u_var="W"):
    mass = {}
    x, y, z = J.variables
    for m, wm in enumerate(w):
        if wm <= 1e-14:
            continue
        for i, px in enumerate(Fb[m]):
            if px <= 1e-15:
                continue
            for j, py in enumerate(Gb[m]):
                if py <= 1e-15:
                    continue
                for l, pz in enumerate(Hb[m]):
                    if pz <= 1e-15:
                        continue
                    p = wm * px * py * pz
                    if p <= 1e-16:
                        continue
                    pt = _weave_point(
                        J, {x: lx[i], y: ly[j], z: lz[l]}
                    ) + (m,)
                    mass[pt] = mass.get(pt, 0.0) + p
    used = sorted({pt[-1] for pt in mass})
    alphabets = {v: tuple(J.alphabets[v]) for v in J.variables}
    alphabets[u_var] = tuple(used)
    joint = make_joint(J.variables + (u_var,), alphabets, mass)
    return AuxDecomposition(
        joint=joint,
        base=J,
        model=MODEL_WYNER3,
        u_var=u_var,
        v_var=None,
        roles=(x, y, z),
    )


def _assemble_collab(J, lx, ly, lz, w, parts, Zrows, u_var="U", v_var="V"):
    """Stitch the public layer and per-letter splittings into one witness."""
    x, y, z = J.variables
    mass = {}
    for u, wu in enumerate(w):
        if wu <= 1e-14 or parts[u] is None:
            continue
        vw, xr, yr = parts[u]
        for v, pv in enumerate(vw):
            if pv <= 1e-14:
                continue
            for i, px in enumerate(xr[v]):
                if px <= 1e-15:
                    continue
                for j, py in enumerate(yr[v]):
                    if py <= 1e-15:
                        continue
                    for l, pz in enumerate(Zrows[u]):
                        if pz <= 1e-15:
                            continue
                        p = wu * pv * px * py * pz
                        if p <= 1e-16:
                            continue
                        pt = _weave_point(
                            J, {x: lx[i], y: ly[j], z: lz[l]}
                        ) + (u, v)
                        mass[pt] = mass.get(pt, 0.0) + p
    used_u = sorted({pt[-2] for pt in mass})
    used_v = sorted({pt[-1] for pt in mass})
    alphabets = {v_: tuple(J.alphabets[v_]) for v_ in J.variables}
    alphabets[u_var] = tuple(used_u)
    alphabets[v_var] = tuple(used_v)
    joint = make_joint(J.variables + (u_var, v_var), alphabets, mass)
    return AuxDecomposition(
        joint=joint,
        base=J,
        model=MODEL_COLLABORATIVE,
        u_var=u_var,
        v_var=v_var,
        roles=(x, y, z),
    )


# ---------------------------------------------------------------------------
# public entry points: common information
# ---------------------------------------------------------------------------


def wyner_ci(
    J: JointDist, group_a, group_b, cfg: Optional[OptimizerConfig] = None
) -> tuple[float, AuxDecomposition]:
    """Bipartite common information min I(AB;W) with A - W - B.

    The two groups must partition the variables of ``J``.  Returns the
    value in nats and a validated witness decomposition; the value is the
    best over all restarts and always lies in
    [I(A;B), min(H(A), H(B))] up to tolerance.
    """
    cfg = cfg or OptimizerConfig()
    ga = (group_a,) if isinstance(group_a, str) else tuple(group_a)
    gb = (group_b,) if isinstance(group_b, str) else tuple(group_b)
    if set(ga) | set(gb) != set(J.variables) or set(ga) & set(gb):
        raise ValidationError("groups must partition the distribution variables")
    Q, la, lb = _dense_matrix(J, ga, gb)
    k = cfg.u_card or min(Q.shape[0] * Q.shape[1], _CARD_CAP)
    cands = _solve_mixture2(Q, k, cfg, seed_tag=101)
    best = cands[0]
    witness = _assemble_wyner2(
        J, ga, gb, la, lb, *best.blocks, model=MODEL_WYNER2
    ).validate(1e-9)
    value = measures(witness.joint, ga + gb, witness.u_var)
    return value, witness


def tripartite_ci(
    J: JointDist, cfg: Optional[OptimizerConfig] = None, extra_inits=()
) -> tuple[float, AuxDecomposition]:
    """Tripartite common information min I(XYZ;W), X, Y, Z independent given W."""
    cfg = cfg or OptimizerConfig()
    if len(J.variables) != 3:
        raise ValidationError("tripartite common information needs three variables")
    x, y, z = J.variables
    Q, lx, ly, lz = _dense_cube(J, x, y, z)
    bound = len(J.alphabets[x]) * len(J.alphabets[y]) * len(J.alphabets[z]) + 1
    k = cfg.u_card or min(bound, _CARD_CAP)
    cands = _solve_mixture3(Q, k, cfg, seed_tag=102, extra_inits=extra_inits)
    best = cands[0]
    witness = _assemble_wyner3(J, lx, ly, lz, *best.blocks).validate(1e-9)
    value = measures(witness.joint, (x, y, z), witness.u_var)
    return value, witness


def _fresh_name(taken: Sequence[str], want: str) -> str:
    if want not in taken:
        return want
    i = 1
    while f"{want}{i}" in taken:
        i += 1
    return f"{want}{i}"


def _lp_reduce_components(w, comps, h_comps, targets):
    """Reweight mixture components onto a basic feasible solution.

    Finds nonnegative weights gamma with  sum_u gamma_u * comps[u] =
    ``targets``  and  sum_u gamma_u * h_comps[u]  preserved, returned at a
    vertex of the constraint polytope so the support size is at most
    (number of independent constraints) + 1.  Used to restore Caratheodory
    cardinality bounds after composing witnesses.
    """
    from scipy.optimize import linprog

    k = len(w)
    A = np.vstack([comps.T, h_comps[None, :]])
    b = np.concatenate([targets, [float(w @ h_comps)]])
    res = linprog(
        c=np.zeros(k),
        A_eq=A,
        b_eq=b,
        bounds=[(0.0, None)] * k,
        method="highs-ds",
    )
    if not res.success:
        return None
    gamma = np.maximum(res.x, 0.0)
    tot = gamma.sum()
    if tot <= 0:
        return None
    return gamma / tot


# ---------------------------------------------------------------------------
# collaborative corner points
# ---------------------------------------------------------------------------


def _mixes_from_pairs(R, pair_labels, lx, ly):
    """Reshape component rows over (x, y)-pair labels into matrices."""
    ix = {lab: i for i, lab in enumerate(lx)}
    iy = {lab: i for i, lab in enumerate(ly)}
    mixes = []
    for row in R:
        M = np.zeros((len(lx), len(ly)))
        for p_idx, pl in enumerate(pair_labels):
            M[ix[pl[0]], iy[pl[1]]] = row[p_idx]
        mixes.append(M)
    return mixes


def collab_corner_points(
    J: JointDist, cfg: Optional[OptimizerConfig] = None
) -> tuple[RatePoint, RatePoint]:
    """Corner points of the collaborative region.

    alpha: minimal public rate C(XY:Z); among public layers within
    ``tol_objective`` of that minimum, the private rate min_V I(XY;V|U) is
    minimized (two-stage lexicographic selection).  beta: zero private
    rate, public rate C(X:Y:Z).  The beta search always includes the
    candidate composed from alpha's witness, and alpha is never reported
    above beta, so the region geometry (alpha.r_p <= beta.r_p <=
    alpha.r_p + alpha.r_k) holds by construction for the returned pair.
    """
    cfg = cfg or OptimizerConfig()
    if len(J.variables) != 3:
        raise ValidationError("corner points need a three-variable distribution")
    x, y, z = J.variables
    Q2, pair_labels, z_labels = _dense_matrix(J, (x, y), (z,))
    _, lx, ly, lz = _dense_cube(J, x, y, z)
    lz_flat = [lab for (lab,) in z_labels]

    k1 = cfg.u_card or min(Q2.shape[0] * Q2.shape[1], _CARD_CAP)
    cands = _solve_mixture2(Q2, k1, cfg, seed_tag=201)
    best_rp = cands[0].value
    pool = [c for c in cands if c.value <= best_rp + cfg.tol_objective][:8]

    scored = []
    for ci, cand in enumerate(pool):
        w, R, S = cand.blocks
        keep = w > 1e-12
        w_k = w[keep] / w[keep].sum()
        R_k, S_k = R[keep], S[keep]
        mixes = _mixes_from_pairs(R_k, pair_labels, lx, ly)
        rk, parts = _resolve_inner(w_k, mixes, cfg, seed_tag=300 + ci)
        scored.append((cand.value, rk, w_k, parts, S_k))
    scored.sort(key=lambda t: (round(t[0], 12), t[1]))
    rp1, rk1, w_a, parts_a, S_a = scored[0]

    # Z rows of the alpha witness live on the z support of the matrix view
    Zrows = np.zeros((len(w_a), len(lz)))
    iz = {lab: i for i, lab in enumerate(lz)}
    for u in range(len(w_a)):
        for j, lab in enumerate(lz_flat):
            Zrows[u, iz[lab]] = S_a[u, j]
    alpha_wit = _assemble_collab(J, lx, ly, lz, w_a, parts_a, Zrows).validate(1e-9)
    alpha = RatePoint.from_witness(alpha_wit, label="alpha")

    # compose alpha's (U, V) pairs into a single conditional-independence
    # witness; it anchors the beta search and the exchange bound
    comp_w, comp_F, comp_G, comp_H = [], [], [], []
    for u, wu in enumerate(w_a):
        if parts_a[u] is None:
            continue
        vw, xr, yr = parts_a[u]
        for v, pv in enumerate(vw):
            if wu * pv <= 1e-14:
                continue
            comp_w.append(wu * pv)
            comp_F.append(xr[v])
            comp_G.append(yr[v])
            comp_H.append(Zrows[u])
    composed = (
        np.array(comp_w),
        np.array(comp_F),
        np.array(comp_G),
        np.array(comp_H),
    )
    beta_val, beta_w3 = tripartite_ci(J, cfg, extra_inits=[composed])

    v_name = _fresh_name(beta_w3.joint.variables, "V")
    mass = {pt + (0,): p for pt, p in beta_w3.joint.mass.items()}
    alphabets = {v: tuple(beta_w3.joint.alphabets[v]) for v in beta_w3.joint.variables}
    alphabets[v_name] = (0,)
    beta_joint = make_joint(beta_w3.joint.variables + (v_name,), alphabets, mass)
    beta_wit = AuxDecomposition(
        joint=beta_joint,
        base=J,
        model=MODEL_COLLABORATIVE,
        u_var=beta_w3.u_var,
        v_var=v_name,
        roles=(x, y, z),
    ).validate(1e-9)
    beta = RatePoint(
        r_p=max(beta_wit.rate_pair()[0], 0.0),
        r_k=0.0,
        witness=beta_wit,
        label="beta",
    )

    if beta.r_p < alpha.r_p - 1e-9:
        # numerically impossible region geometry: fall back to the beta
        # witness as the alpha public layer (its splitting cost is zero)
        alpha = RatePoint(
            r_p=beta.r_p, r_k=0.0, witness=beta.witness, label="alpha"
        )
    return alpha, beta


# ---------------------------------------------------------------------------
# collaborative frontier (five-block scalarization)
# ---------------------------------------------------------------------------


def _recon5(w, Vu, X, Y, Z):
    mix = np.einsum("uv,uva,uvb->uab", Vu, X, Y)
    R = np.einsum("u,uab,uc->abc", w, mix, Z)
    return mix, R


def _fg5(w, Vu, X, Y, Z, Q, mu, lam):
    ku, kv, a = X.shape
    b = Y.shape[2]
    mix, R = _recon5(w, Vu, X, Y, Z)
    D = R - Q
    Hmix = _H(mix.reshape(ku, a * b), axis=1)
    HZ = _H(Z, axis=1)
    HX = _H(X, axis=2)
    HY = _H(Y, axis=2)
    hxy = HX + HY
    F = (
        _H(R)
        + (lam - 1.0) * float(w @ Hmix)
        - float(w @ HZ)
        - lam * float((w[:, None] * Vu * hxy).sum())
        + mu * float((D * D).sum())
    )
    GR = -np.log(np.maximum(R, _TINY)) - 1.0 + 2.0 * mu * D
    Gmix = w[:, None, None] * (
        np.einsum("abc,uc->uab", GR, Z)
        + (lam - 1.0) * (-np.log(np.maximum(mix, _TINY)) - 1.0)
    )
    gX = np.einsum("uab,uv,uvb->uva", Gmix, Vu, Y) + lam * (
        w[:, None, None] * Vu[:, :, None]
    ) * (np.log(np.maximum(X, _TINY)) + 1.0)
    gY = np.einsum("uab,uv,uva->uvb", Gmix, Vu, X) + lam * (
        w[:, None, None] * Vu[:, :, None]
    ) * (np.log(np.maximum(Y, _TINY)) + 1.0)
    gV = np.einsum("uab,uva,uvb->uv", Gmix, X, Y) - lam * w[:, None] * hxy
    gZ = np.einsum("abc,uab->uc", GR, mix) * w[:, None] + w[:, None] * (
        np.log(np.maximum(Z, _TINY)) + 1.0
    )
    gw = (
        np.einsum("abc,uab,uc->u", GR, mix, Z)
        + (lam - 1.0) * Hmix
        - HZ
        - lam * (Vu * hxy).sum(axis=1)
    )
    return F, (gw, gV, gX, gY, gZ)


def _em_polish5(w, Vu, X, Y, Z, Q, iters, tol=5e-13):
    err = np.inf
    stall = 0
    ku, kv, a = X.shape
    b, c = Y.shape[2], Z.shape[1]
    for _ in range(iters):
        mix, R = _recon5(w, Vu, X, Y, Z)
        ratio = np.where(R > 0, Q / np.where(R > 0, R, 1.0), 0.0)
        # responsibilities over (u, v, a, b, c)
        P = (
            w[:, None, None, None, None]
            * Vu[:, :, None, None, None]
            * X[:, :, :, None, None]
            * Y[:, :, None, :, None]
            * Z[:, None, None, None, :]
            * ratio[None, None, :, :, :]
        )
        w2 = P.sum(axis=(1, 2, 3, 4))
        tot = w2.sum()
        if tot <= 0:
            break
        puv = P.sum(axis=(2, 3, 4))
        safe_u = np.where(w2 > 0, w2, 1.0)
        safe_uv = np.where(puv > 0, puv, 1.0)
        Vu = np.where(w2[:, None] > 0, puv / safe_u[:, None], 1.0 / kv)
        X = np.where(puv[:, :, None] > 0, P.sum(axis=(3, 4)) / safe_uv[:, :, None], 1.0 / a)
        Y = np.where(puv[:, :, None] > 0, P.sum(axis=(2, 4)) / safe_uv[:, :, None], 1.0 / b)
        Z = np.where(w2[:, None] > 0, P.sum(axis=(1, 2, 3)) / safe_u[:, None], 1.0 / c)
        w = w2 / tot
        _, R2 = _recon5(w, Vu, X, Y, Z)
        new_err = float(np.abs(R2 - Q).sum())
        stall = stall + 1 if new_err > err * 0.9995 else 0
        err = new_err
        if err < tol or stall > 40:
            break
    return w, Vu, X, Y, Z, err


def _structured_inits5(Q, ku, kv):
    a, b, c = Q.shape
    pairs = [(i, j) for i in range(a) for j in range(b) if Q[i, j, :].sum() > 0]
    qz = Q.sum((0, 1))
    inits = []

    def blank():
        return (
            np.zeros(ku),
            np.full((ku, kv), 1.0 / kv),
            np.full((ku, kv, a), 1.0 / a),
            np.full((ku, kv, b), 1.0 / b),
            np.full((ku, c), 1.0 / c),
        )

    if len(pairs) <= kv:
        # U = Z with V revealing the (x, y) pair
        if len(qz) <= ku:
            w, Vu, X, Y, Z = blank()
            for u in range(c):
                w[u] = qz[u]
                if qz[u] <= 0:
                    continue
                cond = Q[:, :, u] / qz[u]
                for m, (i, j) in enumerate(pairs):
                    Vu[u, m] = cond[i, j]
                    X[u, m] = np.eye(a)[i]
                    Y[u, m] = np.eye(b)[j]
                Z[u] = np.eye(c)[u]
            inits.append((w, Vu, X, Y, Z))
        # U constant, V revealing the pair
        w, Vu, X, Y, Z = blank()
        w[0] = 1.0
        qxy = Q.sum(2)
        for m, (i, j) in enumerate(pairs):
            Vu[0, m] = qxy[i, j]
            X[0, m] = np.eye(a)[i]
            Y[0, m] = np.eye(b)[j]
        Z[0] = qz
        inits.append((w, Vu, X, Y, Z))
    # U = (x, y) pair, V constant
    if len(pairs) <= ku:
        w, Vu, X, Y, Z = blank()
        qxy = Q.sum(2)
        for m, (i, j) in enumerate(pairs):
            w[m] = qxy[i, j]
            Vu[m] = np.eye(kv)[0]
            X[m, :, :] = np.eye(a)[i]
            Y[m, :, :] = np.eye(b)[j]
            Z[m] = Q[i, j, :] / qxy[i, j]
        inits.append((w, Vu, X, Y, Z))
    return inits


def _blocks_from_collab_witness(aux: AuxDecomposition, lx, ly, lz, ku, kv):
    """Dense (w, V|U, X|UV, Y|UV, Z|U) blocks of a factored witness."""
    x, y, z = aux._xyz()
    jd = aux.joint
    u_labels = sorted(aux.u_dist)
    v_labels = [lab for (lab,) in _group_labels(jd, (aux.v_var,))]
    if len(u_labels) > ku or len(v_labels) > kv:
        return None
    ix = {lab: i for i, lab in enumerate(lx)}
    iy = {lab: i for i, lab in enumerate(ly)}
    iz = {lab: i for i, lab in enumerate(lz)}
    iu = {lab[0]: i for i, lab in enumerate(u_labels)}
    iv = {lab: i for i, lab in enumerate(v_labels)}
    a, b, c = len(lx), len(ly), len(lz)
    P = np.zeros((ku, kv, a, b, c))
    xi, yi, zi = (jd.indices((v_,))[0] for v_ in (x, y, z))
    ui = jd.indices((aux.u_var,))[0]
    vi = jd.indices((aux.v_var,))[0]
    for pt, p in jd.mass.items():
        P[iu[pt[ui]], iv[pt[vi]], ix[pt[xi]], iy[pt[yi]], iz[pt[zi]]] += p
    w = P.sum(axis=(1, 2, 3, 4))
    puv = P.sum(axis=(2, 3, 4))
    safe_u = np.where(w > 0, w, 1.0)
    safe_uv = np.where(puv > 0, puv, 1.0)
    Vu = np.where(w[:, None] > 0, puv / safe_u[:, None], 1.0 / kv)
    X = np.where(puv[:, :, None] > 0, P.sum(axis=(3, 4)) / safe_uv[:, :, None], 1.0 / a)
    Y = np.where(puv[:, :, None] > 0, P.sum(axis=(2, 4)) / safe_uv[:, :, None], 1.0 / b)
    Z = np.where(w[:, None] > 0, P.sum(axis=(1, 2, 3)) / safe_u[:, None], 1.0 / c)
    tot = w.sum()
    if tot <= 0:
        return None
    return (w / tot, Vu, X, Y, Z)


def _solve_collab_lambda(Q, ku, kv, lam, cfg: OptimizerConfig, extra_inits=()):
    a, b, c = Q.shape
    structured = _structured_inits5(Q, ku, kv) + [
        tuple(np.array(x) for x in e) for e in extra_inits
    ]
    n_random = max(cfg.restarts - len(structured), 0)
    ss = np.random.SeedSequence([cfg.seed, 401, int(lam * 1e6) % (2**31)])
    children = ss.spawn(max(n_random, 1))
    inits = list(structured)
    for i in range(n_random):
        rng = np.random.default_rng(children[i])
        alpha_c = (0.4, 1.0, 2.5)[i % 3]
        w = rng.dirichlet(np.full(ku, 1.0))
        Vu = rng.dirichlet(np.full(kv, alpha_c), size=ku)
        X = rng.dirichlet(np.full(a, alpha_c), size=(ku, kv))
        Y = rng.dirichlet(np.full(b, alpha_c), size=(ku, kv))
        Z = rng.dirichlet(np.full(c, alpha_c), size=ku)
        inits.append((w, Vu, X, Y, Z))
    inits = inits[: max(cfg.restarts, len(structured))]

    def score(blocks):
        w, Vu, X, Y, Z = blocks
        mix, R = _recon5(w, Vu, X, Y, Z)
        ku_, kv_, a_ = X.shape
        rp = float(_H(R) - w @ (_H(mix.reshape(ku_, -1), axis=1) + _H(Z, axis=1)))
        rk = float(
            (
                w
                * (
                    _H(mix.reshape(ku_, -1), axis=1)
                    - (Vu * (_H(X, axis=2) + _H(Y, axis=2))).sum(axis=1)
                )
            ).sum()
        )
        return rp, rk

    candidates = []

    def finish(blocks):
        w, Vu, X, Y, Z, err = _em_polish5(*blocks, Q, cfg.polish_iters)
        if err <= _VALID_ERR:
            rp, rk = score((w, Vu, X, Y, Z))
            candidates.append((rp + lam * rk, rp, rk, (w, Vu, X, Y, Z)))

    def fg(w, Vu, X, Y, Z, Qm, mu):
        return _fg5(w, Vu, X, Y, Z, Qm, mu, lam)

    for blocks in inits:
        finish(tuple(np.array(v, dtype=float) for v in blocks))
        if cfg.max_iters:
            sm = tuple(_smooth(np.array(v, dtype=float)) for v in blocks)
            out = _eg_loop(sm, Q, fg, cfg)
            finish(out)

    if not candidates:
        raise OptimizerDivergedError(
            "no restart reached feasibility within tolerance"
        )
    candidates.sort(key=lambda t: t[0])
    return candidates


def collab_frontier(
    J: JointDist,
    lambdas: Optional[Iterable[float]] = None,
    cfg: Optional[OptimizerConfig] = None,
) -> Frontier:
    """Lower envelope of the collaborative region.

    For each weight lambda the scalarization I(XYZ;U) + lambda*I(XY;V|U)
    is minimized; corner witnesses join the candidate pool so small and
    large weights recover the corners.  The private rate of every
    candidate public layer is re-resolved exactly before scoring.  The
    returned points are the lower convex envelope of everything found
    (time-sharing makes the region convex), so the private rate is
    nonincreasing along the frontier.
    """
    cfg = cfg or OptimizerConfig()
    lams = tuple(lambdas) if lambdas is not None else DEFAULT_LAMBDAS
    if not lams:
        raise ValidationError("lambda grid must be nonempty")
    if any(l < 0 for l in lams):
        raise ValidationError("lambda weights must be >= 0")
    alpha, beta = collab_corner_points(J, cfg)
    x, y, z = J.variables
    Q, lx, ly, lz = _dense_cube(J, x, y, z)
    bound = len(J.alphabets[x]) * len(J.alphabets[y]) * len(J.alphabets[z]) + 1
    ku = cfg.u_card or min(bound, _CARD_CAP)
    kv = cfg.v_card or min(len(lx) * len(ly), 9)
    extra = []
    for corner in (alpha, beta):
        blocks = _blocks_from_collab_witness(corner.witness, lx, ly, lz, ku, kv)
        if blocks is not None:
            extra.append(blocks)

    per_lambda: dict[float, RatePoint] = {}
    points = [alpha, beta]
    for lam in lams:
        cands = _solve_collab_lambda(Q, ku, kv, lam, cfg, extra_inits=extra)
        best: Optional[RatePoint] = None
        best_score = math.inf
        for _, rp_d, _, blocks in cands[:3]:
            w, Vu, X, Y, Z = blocks
            keep = w > 1e-12
            w_k = w[keep] / w[keep].sum()
            mix = np.einsum("uv,uva,uvb->uab", Vu, X, Y)[keep]
            mixes = [mix[i] for i in range(len(w_k))]
            rk_exact, parts = _resolve_inner(
                w_k, mixes, cfg, seed_tag=500 + int(lam * 100) % 1000
            )
            wit = _assemble_collab(J, lx, ly, lz, w_k, parts, Z[keep]).validate(1e-9)
            pt = RatePoint.from_witness(wit, label="interior")
            sc = pt.r_p + lam * pt.r_k
            if sc < best_score - 1e-12:
                best_score = sc
                best = pt
        for corner in (alpha, beta):
            sc = corner.r_p + lam * corner.r_k
            if sc < best_score - 1e-9:
                best_score = sc
                best = corner
        per_lambda[lam] = best
        points.append(best)
    return Frontier(points=lower_envelope(points), per_lambda=per_lambda)


# ---------------------------------------------------------------------------
# adversarial region and secret-key cost
# ---------------------------------------------------------------------------


def _fg_adv(Phi, Psi, Q, mu, lam):
    """Objective I(Z;U) + lam*I(XY;V|U) + mu*(independence penalty).

    Parameters are the simulation channel Phi(u|z) and the splitting
    channel Psi(v|u,x,y); the joint is Q * Phi * Psi, so the base marginal
    and the chain XY - Z - U hold identically and only X - UV - Y is
    penalized (as the quadratic residual of p(xy,uv)p(uv) - p(x,uv)p(y,uv)).
    """
    a, b, c = Q.shape
    ku = Phi.shape[1]
    qz = Q.sum((0, 1))
    pzu = qz[:, None] * Phi
    pu = pzu.sum(0)
    pxyu = np.einsum("abc,cu->abu", Q, Phi)
    Psi_t = Psi.transpose(1, 2, 0, 3)  # (a, b, u, v)
    pxyuv = pxyu[:, :, :, None] * Psi_t
    puv = pxyuv.sum((0, 1))
    mx = pxyuv.sum(1)  # (a, u, v)
    my = pxyuv.sum(0)  # (b, u, v)

    i1 = float(_H(qz) + _H(pu) - _H(pzu))
    i2 = float(_H(pxyu) - _H(pu) - _H(pxyuv) + _H(puv))
    E = pxyuv * puv[None, None, :, :] - mx[:, None, :, :] * my[None, :, :, :]
    pen = float((E * E).sum())
    F = i1 + lam * i2 + mu * pen

    A = np.log(np.maximum(pzu, _TINY)) - np.log(np.maximum(pu, _TINY))[None, :]
    ratio = (
        np.log(np.maximum(pxyuv, _TINY))
        + np.log(np.maximum(pu, _TINY))[None, None, :, None]
        - np.log(np.maximum(pxyu, _TINY))[:, :, :, None]
        - np.log(np.maximum(puv, _TINY))[None, None, :, :]
    )
    penT = (
        2.0 * E * puv[None, None, :, :]
        + np.einsum("abuv,abuv->uv", 2.0 * E, pxyuv)[None, None, :, :]
        - np.einsum("abuv,buv->auv", 2.0 * E, my)[:, None, :, :]
        - np.einsum("abuv,auv->buv", 2.0 * E, mx)[None, :, :, :]
    )
    B = lam * ratio + mu * penT
    gPhi = A * qz[:, None] + np.einsum(
        "abc,abuv,uabv->cu", Q, B, Psi
    )
    # Psi only reaches the objective through pxyuv = pxyu * Psi
    B_psi = lam * (
        np.log(np.maximum(pxyuv, _TINY)) - np.log(np.maximum(puv, _TINY))[None, None, :, :]
    ) + mu * penT
    gPsi = (B_psi * pxyu[:, :, :, None]).transpose(2, 0, 1, 3)
    return F, (gPhi, gPsi)


def _det_phi_maps(nz: int, ku: int, limit: int = 64):
    """All deterministic simulation channels z -> u (capped)."""
    maps = []
    for combo in itertools.product(range(ku), repeat=nz):
        phi = np.zeros((nz, ku))
        for zi, u in enumerate(combo):
            phi[zi, u] = 1.0
        maps.append(phi)
        if len(maps) >= limit:
            break
    return maps


def _solve_adv_lambda(Q, ku, kv, lam, cfg: OptimizerConfig):
    """Propose candidate simulation channels for one scalarization weight."""
    a, b, c = Q.shape
    structured = []
    for phi in _det_phi_maps(c, ku):
        structured.append(phi)
    ss = np.random.SeedSequence([cfg.seed, 601, int(lam * 1e6) % (2**31)])
    n_random = max(cfg.restarts - len(structured), 4)
    children = ss.spawn(n_random)
    proposals = [p.copy() for p in structured]
    if cfg.max_iters:
        for i in range(n_random):
            rng = np.random.default_rng(children[i])
            phi = rng.dirichlet(np.full(ku, 1.0), size=c)
            psi = rng.dirichlet(np.full(kv, 1.0), size=(ku, a, b))
            def fg(Phi, Psi, Qm, mu):
                return _fg_adv(Phi, Psi, Qm, mu, lam)
            Phi, Psi = _eg_loop((phi, psi), Q, fg, cfg)
            proposals.append(Phi)
        for phi in structured[: max(2, len(structured) // 2)]:
            psi0 = np.full((ku, a, b, kv), 1.0 / kv)
            def fg(Phi, Psi, Qm, mu):
                return _fg_adv(Phi, Psi, Qm, mu, lam)
            Phi, Psi = _eg_loop((_smooth(phi), _smooth(psi0)), Q, fg, cfg)
            proposals.append(Phi)
    return proposals


def _assemble_adv(J, lx, ly, lz, Phi, w_u, parts, u_var="U", v_var="V"):
    """Adversarial witness joint Q * Phi(u|z) * posterior(v|u,x,y)."""
    x, y, z = J.variables
    Qc, *_ = _dense_cube(J, x, y, z)
    a, b, c = Qc.shape
    pxyu = np.einsum("abc,cu->abu", Qc, Phi)
    mass = {}
    for u in range(Phi.shape[1]):
        if w_u[u] <= 1e-14 or parts[u] is None:
            continue
        vw, xr, yr = parts[u]
        recon = np.einsum("v,va,vb->ab", vw, xr, yr)
        for ia in range(a):
            for ib in range(b):
                if pxyu[ia, ib, u] <= 0:
                    continue
                if recon[ia, ib] > 1e-13:
                    post = vw * xr[:, ia] * yr[:, ib] / recon[ia, ib]
                else:
                    post = vw
                for ic in range(c):
                    base = Qc[ia, ib, ic] * Phi[ic, u]
                    if base <= 1e-16:
                        continue
                    for v, pv in enumerate(post):
                        if pv <= 1e-15:
                            continue
                        pt = _weave_point(
                            J, {x: lx[ia], y: ly[ib], z: lz[ic]}
                        ) + (u, v)
                        mass[pt] = mass.get(pt, 0.0) + base * pv
    used_u = sorted({pt[-2] for pt in mass})
    used_v = sorted({pt[-1] for pt in mass})
    alphabets = {v_: tuple(J.alphabets[v_]) for v_ in J.variables}
    alphabets[u_var] = tuple(used_u)
    alphabets[v_var] = tuple(used_v)
    joint = make_joint(J.variables + (u_var, v_var), alphabets, mass)
    return AuxDecomposition(
        joint=joint,
        base=J,
        model=MODEL_ADVERSARIAL,
        u_var=u_var,
        v_var=v_var,
        roles=(x, y, z),
    )


def adversarial_frontier(
    J: JointDist,
    lambdas: Optional[Iterable[float]] = None,
    cfg: Optional[OptimizerConfig] = None,
) -> Frontier:
    """Adversarial (secrecy-formation) region frontier and key cost.

    Scalarizes I(Z;U) + lambda*I(XY;V|U) over simulation channels U|Z with
    the private splitting V re-resolved exactly per public layer.
    ``key_cost`` is min I(XY;V|U) with the public rate unconstrained (ties
    broken toward the smaller public rate); the zero-public-rate corner
    (constant U, private rate C(X:Y)) always joins the candidate pool.
    """
    cfg = cfg or OptimizerConfig()
    lams = tuple(lambdas) if lambdas is not None else DEFAULT_LAMBDAS
    if not lams:
        raise ValidationError("lambda grid must be nonempty")
    if len(J.variables) != 3:
        raise ValidationError("adversarial region needs a three-variable distribution")
    x, y, z = J.variables
    Q, lx, ly, lz = _dense_cube(J, x, y, z)
    a, b, c = Q.shape
    ku = cfg.u_card or min(c + 1, len(J.alphabets[z]) + 1)
    kv = cfg.v_card or min(a * b, 9)
    qz = Q.sum((0, 1))

    scored: dict[bytes, tuple[float, float, np.ndarray]] = {}
    inner_parts: dict[bytes, list] = {}

    def rescore(phi: np.ndarray):
        key = np.round(phi, 6).tobytes()
        if key in scored:
            return scored[key]
        pzu = qz[:, None] * phi
        pu = pzu.sum(0)
        rp = float(_H(qz) + _H(pu) - _H(pzu))
        pxyu = np.einsum("abc,cu->abu", Q, phi)
        mixes = []
        for u in range(phi.shape[1]):
            if pu[u] > 1e-14:
                mixes.append(pxyu[:, :, u] / pu[u])
            else:
                mixes.append(np.full((a, b), 1.0 / (a * b)))
        rk, parts = _resolve_inner(pu, mixes, cfg, seed_tag=700)
        scored[key] = (max(rp, 0.0), max(rk, 0.0), phi)
        inner_parts[key] = parts
        return scored[key]

    def witness_for(phi) -> RatePoint:
        key = np.round(phi, 6).tobytes()
        parts = inner_parts[key]
        pu = (qz[:, None] * phi).sum(0)
        wit = _assemble_adv(J, lx, ly, lz, phi, pu, parts).validate(1e-9)
        return RatePoint.from_witness(wit)

    pool: list[np.ndarray] = []
    const_phi = np.zeros((c, ku))
    const_phi[:, 0] = 1.0
    pool.append(const_phi)
    sweep = sorted(set(lams) | {1000.0})
    for lam in sweep:
        for phi in _solve_adv_lambda(Q, ku, kv, lam, cfg):
            pool.append(phi)
    dedup: dict[bytes, np.ndarray] = {}
    for phi in pool:
        dedup.setdefault(np.round(phi, 6).tobytes(), phi)
    for phi in dedup.values():
        rescore(phi)

    entries = [scored[k] for k in sorted(dedup)]
    per_lambda: dict[float, RatePoint] = {}
    points: list[RatePoint] = []
    for lam in lams:
        rp, rk, phi = min(entries, key=lambda t: (t[0] + lam * t[1], t[0]))
        pt = witness_for(phi)
        pt = RatePoint(pt.r_p, pt.r_k, pt.witness, label="interior")
        per_lambda[lam] = pt
        points.append(pt)
    # key cost: smallest private rate, ties toward small public rate
    min_rk = min(t[1] for t in entries)
    key_candidates = [t for t in entries if t[1] <= min_rk + 1e-9]
    rp, rk, phi = min(key_candidates, key=lambda t: t[0])
    key_point = witness_for(phi)
    points.append(key_point)
    # zero-public corner
    zp = witness_for(const_phi)
    points.append(zp)
    return Frontier(
        points=lower_envelope(points),
        per_lambda=per_lambda,
        key_cost=key_point.r_k,
        key_point=key_point,
    )
