"""Cardinality reduction of auxiliary variables.

Given a joint over (X, Y, Z, U, V) satisfying a model's Markov chains,
produces an equivalent joint whose auxiliaries obey the Caratheodory
bounds |U'| <= |X||Y||Z|+1 and |V'| <= |X||Y| (the latter when Z is
conditionally independent of V given U; |X||Y||Z| otherwise), while

* P(XYZ) is preserved,
* I(XYZ;U) is preserved,
* I(XY;V|U) does not increase.

Both stages reweight existing conditional components: the new weights are
an extreme point of the polytope of distributions reproducing the
required marginals (and, for the U stage, the conditional entropy
H(XYZ|U)).  Extreme points are found as optimal basic solutions of small
linear programs, optimizing the splitting-cost functional so the private
rate can only improve.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linprog

from .decomp import MODEL_ADVERSARIAL, MODEL_COLLABORATIVE
from .dist import JointDist, entropy_nats, make_joint, measures
from .errors import ChainViolationError, InfeasibleReductionError, ValidationError

_LP_TOL = 1e-9


def _lp_reweight(columns: np.ndarray, targets: np.ndarray, objective: np.ndarray,
                 maximize: bool) -> Optional[np.ndarray]:
    """Optimal basic solution of  columns @ g = targets, g >= 0.

    Returns the weight vector at a vertex (support bounded by the number of
    rows) or None if the solver fails.
    """
    c = -objective if maximize else objective.copy()
    res = linprog(
        c=c,
        A_eq=columns,
        b_eq=targets,
        bounds=[(0.0, None)] * columns.shape[1],
        method="highs-ds",
    )
    if not res.success:
        return None
    g = np.maximum(res.x, 0.0)
    return g


def reduce_cardinality(
    aug: JointDist,
    model: str = MODEL_COLLABORATIVE,
    roles: Optional[Sequence[str]] = None,
    tol: float = 1e-7,
) -> JointDist:
    """Reduce |V| then |U| of an augmented joint, preserving its rates.

    ``aug`` ranges over five variables; by default the last two are the
    auxiliaries (U, V) and the first three are (X, Y, Z).  The declared
    model chains must hold within 1e-9 on input.  Raises
    :class:`InfeasibleReductionError` when the reduced joint misses the
    preservation tolerances (``tol``, default 1e-7).
    """
    if roles is None:
        if len(aug.variables) != 5:
            raise ValidationError("expected five variables (X, Y, Z, U, V)")
        x, y, z, u_var, v_var = aug.variables
    else:
        x, y, z, u_var, v_var = roles
    if model == MODEL_COLLABORATIVE:
        chains = {
            "X-VU-Y": ((x,), (y,), (v_var, u_var)),
            "XY-U-Z": ((x, y), (z,), (u_var,)),
        }
    elif model == MODEL_ADVERSARIAL:
        chains = {
            "XY-Z-U": ((x, y), (u_var,), (z,)),
            "X-UV-Y": ((x,), (y,), (u_var, v_var)),
        }
    else:
        raise ValidationError(f"unsupported model for reduction: {model!r}")
    for name, (a, b, c) in chains.items():
        resid = measures(aug, a, b, c)
        if resid > 1e-9:
            raise ChainViolationError(
                f"input does not satisfy {name}: I = {resid:.3e}"
            )

    xyz_cells = sorted(
        {tuple(pt[i] for i in aug.indices((x, y, z))) for pt in aug.mass},
        key=repr,
    )
    cell_index = {cell: i for i, cell in enumerate(xyz_cells)}
    nc = len(xyz_cells)
    u_idx = aug.indices((u_var,))[0]
    v_idx = aug.indices((v_var,))[0]
    xyz_idx = aug.indices((x, y, z))
    xy_idx = aug.indices((x, y))

    u_labels = sorted({pt[u_idx] for pt in aug.mass}, key=repr)
    p_u = {ul: 0.0 for ul in u_labels}
    # per (u, v): conditional over xyz cells; per u: conditional over cells
    cond_uv: dict = {}
    p_v_given_u: dict = {}
    for pt, p in aug.mass.items():
        ul, vl = pt[u_idx], pt[v_idx]
        cell = tuple(pt[i] for i in xyz_idx)
        p_u[ul] += p
        cond_uv.setdefault(ul, {}).setdefault(vl, np.zeros(nc))[cell_index[cell]] += p
        p_v_given_u.setdefault(ul, {})
        p_v_given_u[ul][vl] = p_v_given_u[ul].get(vl, 0.0) + p
    for ul in u_labels:
        for vl in cond_uv[ul]:
            cond_uv[ul][vl] /= p_v_given_u[ul][vl]
        tot = p_u[ul]
        for vl in p_v_given_u[ul]:
            p_v_given_u[ul][vl] /= tot

    xy_cells = sorted({cell[:2] for cell in xyz_cells}, key=repr)
    xy_of_cell = np.array([xy_cells.index(cell[:2]) for cell in xyz_cells])

    def xy_project(vec: np.ndarray) -> np.ndarray:
        out = np.zeros(len(xy_cells))
        np.add.at(out, xy_of_cell, vec)
        return out

    def h(vec: np.ndarray) -> float:
        return entropy_nats(vec[vec > 0])

    # V may be matched on the XY marginal alone when Z decouples from
    # (X, Y, V) given U; otherwise the full XYZ conditional is matched
    z_decoupled = measures(aug, (x, y, v_var), (z,), (u_var,)) <= 1e-9

    def reduce_v(use_xy: bool):
        """Per-letter reweighting of V; returns (weights, changed flag)."""
        new_v: dict = {}
        changed = False
        for ul in u_labels:
            vs = sorted(cond_uv[ul], key=repr)
            weights = np.array([p_v_given_u[ul][vl] for vl in vs])
            cond_u = sum(w * cond_uv[ul][vl] for w, vl in zip(weights, vs))
            if len(vs) == 1:
                new_v[ul] = {vs[0]: 1.0}
                continue
            if use_xy:
                cols = np.stack([xy_project(cond_uv[ul][vl]) for vl in vs], axis=1)
                tgt = xy_project(cond_u)
            else:
                cols = np.stack([cond_uv[ul][vl] for vl in vs], axis=1)
                tgt = cond_u
            hxy = np.array([h(xy_project(cond_uv[ul][vl])) for vl in vs])
            g = _lp_reweight(cols, tgt, hxy, maximize=True)
            if g is None:
                return None, changed
            if float(g @ hxy) <= float(weights @ hxy) + 1e-12 and np.count_nonzero(
                weights > 1e-12
            ) <= cols.shape[0]:
                g = weights  # already extremal enough; keep as is
            else:
                changed = True
            s = g.sum()
            if s <= 0:
                return None, changed
            g = g / s
            new_v[ul] = {vl: g[i] for i, vl in enumerate(vs) if g[i] > 1e-14}
        return new_v, changed

    attempts = [True, False] if z_decoupled else [False]
    reduced: Optional[JointDist] = None
    base_marg = np.zeros(nc)
    for ul in u_labels:
        cond_u = sum(
            p_v_given_u[ul][vl] * cond_uv[ul][vl] for vl in cond_uv[ul]
        )
        base_marg += p_u[ul] * cond_u
    h_cond_u = {
        ul: h(
            sum(p_v_given_u[ul][vl] * cond_uv[ul][vl] for vl in cond_uv[ul])
        )
        for ul in u_labels
    }
    h_xyz_given_u = sum(p_u[ul] * h_cond_u[ul] for ul in u_labels)

    detail = "no feasible reweighting found"
    for use_xy in attempts:
        new_v, v_changed = reduce_v(use_xy)
        if new_v is None:
            continue
        # U stage: reweight components, preserving the base marginal and
        # the conditional entropy, minimizing the residual splitting cost
        cols = np.stack(
            [
                sum(new_v[ul][vl] * cond_uv[ul][vl] for vl in new_v[ul])
                for ul in u_labels
            ],
            axis=1,
        )
        cols = np.vstack([cols, [h_cond_u[ul] for ul in u_labels]])
        tgt = np.concatenate([base_marg, [h_xyz_given_u]])
        split_cost = np.array(
            [
                h(xy_project(cols[:nc, i]))
                - sum(
                    new_v[ul][vl] * h(xy_project(cond_uv[ul][vl]))
                    for vl in new_v[ul]
                )
                for i, ul in enumerate(u_labels)
            ]
        )
        w0 = np.array([p_u[ul] for ul in u_labels])
        g = _lp_reweight(cols, tgt, split_cost, maximize=False)
        u_changed = True
        if g is None:
            g, u_changed = w0, False
        elif float(g @ split_cost) >= float(w0 @ split_cost) - 1e-12 and (
            np.count_nonzero(w0 > 1e-12) <= nc + 1
        ):
            g, u_changed = w0, False
        s = g.sum()
        if s <= 0:
            continue
        g = g / s
        if not v_changed and not u_changed:
            return aug  # already extremal; unchanged up to relabeling

        # V labels are shared slots across the letters of U, so the global
        # alphabet size is the maximum per-letter support, not the union
        relabel = {
            ul: {vl: slot for slot, vl in enumerate(sorted(new_v[ul], key=repr))}
            for ul in u_labels
        }
        max_slots = max(len(m) for m in relabel.values())
        mass: dict = {}
        for i, ul in enumerate(u_labels):
            if g[i] <= 1e-14:
                continue
            for vl, pv in new_v[ul].items():
                vec = cond_uv[ul][vl]
                slot = relabel[ul][vl]
                for ci in np.nonzero(vec > 0)[0]:
                    pt_cell = xyz_cells[ci]
                    assign = {x: pt_cell[0], y: pt_cell[1], z: pt_cell[2],
                              u_var: ul, v_var: slot}
                    pt = (
                        tuple(assign[v_] for v_ in aug.variables)
                        if roles is None
                        else tuple(assign[v_] for v_ in (x, y, z, u_var, v_var))
                    )
                    m = g[i] * pv * vec[ci]
                    if m > 1e-16:
                        mass[pt] = mass.get(pt, 0.0) + m
        variables = aug.variables if roles is None else (x, y, z, u_var, v_var)
        alphabets = {v_: tuple(aug.alphabets[v_]) for v_ in variables}
        alphabets[v_var] = tuple(range(max_slots))
        candidate = make_joint(variables, alphabets, mass)
        ok, detail = _verify_reduction(aug, candidate, (x, y, z, u_var, v_var),
                                       use_xy, tol, chains)
        if ok:
            reduced = candidate
            break
    if reduced is None:
        raise InfeasibleReductionError(
            f"reduction failed preservation tolerances ({detail})"
        )
    return reduced


def _verify_reduction(aug, red, names, used_xy_bound, tol, chains):
    x, y, z, u_var, v_var = names
    for name, (a, b, c) in chains.items():
        resid = measures(red, a, b, c)
        if resid > tol:
            return False, f"chain {name} broken: I = {resid:.2e}"
    d_marg = 0.0
    m0 = aug.marginal((x, y, z))
    m1 = red.marginal((x, y, z))
    for pt in set(m0.mass) | set(m1.mass):
        d_marg += abs(m0.prob(pt) - m1.prob(pt))
    if d_marg > tol:
        return False, f"marginal moved by {d_marg:.2e}"
    i_pub0 = measures(aug, (x, y, z), (u_var,))
    i_pub1 = measures(red, (x, y, z), (u_var,))
    if abs(i_pub0 - i_pub1) > tol:
        return False, f"public information moved by {abs(i_pub0 - i_pub1):.2e}"
    i_k0 = measures(aug, (x, y), (v_var,), (u_var,))
    i_k1 = measures(red, (x, y), (v_var,), (u_var,))
    if i_k1 > i_k0 + tol:
        return False, f"splitting cost increased by {i_k1 - i_k0:.2e}"
    nx = len(aug.alphabets[x])
    ny = len(aug.alphabets[y])
    nz = len(aug.alphabets[z])
    u_card = red.marginal((u_var,)).support_size()
    v_card = red.marginal((v_var,)).support_size()
    if u_card > nx * ny * nz + 1:
        return False, f"|U'| = {u_card} above bound {nx * ny * nz + 1}"
    v_bound = nx * ny if used_xy_bound else nx * ny * nz
    if v_card > v_bound:
        return False, f"|V'| = {v_card} above bound {v_bound}"
    return True, ""
