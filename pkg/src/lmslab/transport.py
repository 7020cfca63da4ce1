"""Exact discrete optimal transport and bipartite bottleneck feasibility.

The 1-Wasserstein distance between weighted point clouds is solved as a
min-cost flow on the complete bipartite graph by a network simplex with
block-search pivoting.  Masses are converted to exact rationals and scaled
to integers by the LCM of their denominators, so flows stay integral and
degenerate pivots cannot cycle.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import tolerances as tol
from ._accel import jit_kernel

_INF64 = 2**62


@dataclass(frozen=True)
class WeightedCloud:
    """Points with simplex weights; uniform when weights omitted."""

    points: np.ndarray
    weights: np.ndarray = None

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if pts.size == 0:
            raise ValueError("empty cloud")
        object.__setattr__(self, "points", pts)
        if self.weights is None:
            w = np.full(len(pts), 1.0 / len(pts))
        else:
            w = np.asarray(self.weights, dtype=np.float64)
            if w.shape != (len(pts),) or np.any(w < 0):
                raise ValueError("weights must be non-negative, one per point")
            if abs(w.sum() - 1.0) > 1e-12:
                raise ValueError("weights must sum to 1 within 1e-12")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class TransportPlan:
    flows: tuple  # of (i, j, mass)
    cost: float


def _netsimplex_impl(num_src, num_snk, cost, supply, demand, eps, max_pivots):
    """Network simplex for the uncapacitated transportation problem.

    Arcs 0..num_src*num_snk-1 are the bipartite arcs in row-major order;
    one artificial arc per node connects it to a root with a large cost.
    Returns (flow on real arcs, status) with status 0 = optimal,
    1 = pivot cap hit, 2 = infeasible, 3 = unbounded.
    """
    n_nodes = num_src + num_snk + 1
    root = n_nodes - 1
    m_real = num_src * num_snk
    m = m_real + num_src + num_snk

    tail = np.empty(m, np.int64)
    head = np.empty(m, np.int64)
    carc = np.empty(m, np.float64)
    flow = np.zeros(m, np.int64)
    in_tree = np.zeros(m, np.uint8)

    max_c = 0.0
    for e in range(m_real):
        tail[e] = e // num_snk
        head[e] = num_src + e % num_snk
        carc[e] = cost[e]
        if cost[e] > max_c:
            max_c = cost[e]
    big = (max_c + 1.0) * n_nodes
    for i in range(num_src):
        e = m_real + i
        tail[e] = i
        head[e] = root
        carc[e] = big
        flow[e] = supply[i]
        in_tree[e] = 1
    for j in range(num_snk):
        e = m_real + num_src + j
        tail[e] = root
        head[e] = num_src + j
        carc[e] = big
        flow[e] = demand[j]
        in_tree[e] = 1

    parent = np.empty(n_nodes, np.int64)
    pred = np.empty(n_nodes, np.int64)
    depth = np.zeros(n_nodes, np.int64)
    pi = np.zeros(n_nodes, np.float64)
    for v in range(n_nodes - 1):
        parent[v] = root
        pred[v] = m_real + v
    parent[root] = -1
    pred[root] = -1

    child_count = np.empty(n_nodes, np.int64)
    child_start = np.empty(n_nodes + 1, np.int64)
    child_fill = np.empty(n_nodes, np.int64)
    child_list = np.empty(n_nodes - 1, np.int64)
    stack = np.empty(n_nodes, np.int64)

    block = int(math.sqrt(m)) + 1
    cursor = 0
    status = 1
    pivots = 0
    while pivots < max_pivots:
        pivots += 1

        # refresh children lists, depths and potentials from the tree;
        # recomputing from scratch keeps float error from accumulating
        for v in range(n_nodes):
            child_count[v] = 0
        for v in range(n_nodes):
            if v != root:
                child_count[parent[v]] += 1
        acc = 0
        for v in range(n_nodes):
            child_start[v] = acc
            child_fill[v] = acc
            acc += child_count[v]
        child_start[n_nodes] = acc
        for v in range(n_nodes):
            if v != root:
                p_ = parent[v]
                child_list[child_fill[p_]] = v
                child_fill[p_] += 1
        top = 1
        stack[0] = root
        depth[root] = 0
        pi[root] = 0.0
        while top > 0:
            top -= 1
            u_ = stack[top]
            for idx in range(child_start[u_], child_start[u_ + 1]):
                w_ = child_list[idx]
                depth[w_] = depth[u_] + 1
                a_ = pred[w_]
                if tail[a_] == w_:
                    pi[w_] = carc[a_] + pi[head[a_]]
                else:
                    pi[w_] = pi[tail[a_]] - carc[a_]
                stack[top] = w_
                top += 1

        # block search for the entering arc (most negative reduced cost)
        best = -eps
        enter = -1
        scanned = 0
        e = cursor
        while scanned < m:
            cnt = 0
            while cnt < block and scanned < m:
                if in_tree[e] == 0:
                    rc = carc[e] - pi[tail[e]] + pi[head[e]]
                    if rc < best:
                        best = rc
                        enter = e
                cnt += 1
                scanned += 1
                e += 1
                if e == m:
                    e = 0
            if enter >= 0:
                break
        cursor = e
        if enter < 0:
            status = 0
            break

        u = tail[enter]
        v = head[enter]
        a_ = u
        b_ = v
        while depth[a_] > depth[b_]:
            a_ = parent[a_]
        while depth[b_] > depth[a_]:
            b_ = parent[b_]
        while a_ != b_:
            a_ = parent[a_]
            b_ = parent[b_]
        join = a_

        # flow change bounded by arcs traversed against their orientation;
        # ties resolved tail-path-first to keep the basis strongly feasible
        delta = _INF64
        u_out = -1
        side = 0
        w_ = u
        while w_ != join:
            a_ = pred[w_]
            if tail[a_] == w_:
                if flow[a_] < delta:
                    delta = flow[a_]
                    u_out = w_
                    side = 0
            w_ = parent[w_]
        w_ = v
        while w_ != join:
            a_ = pred[w_]
            if tail[a_] != w_:
                if flow[a_] <= delta:
                    delta = flow[a_]
                    u_out = w_
                    side = 1
            w_ = parent[w_]
        if u_out < 0:
            status = 3
            break

        flow[enter] += delta
        w_ = u
        while w_ != join:
            a_ = pred[w_]
            if tail[a_] == w_:
                flow[a_] -= delta
            else:
                flow[a_] += delta
            w_ = parent[w_]
        w_ = v
        while w_ != join:
            a_ = pred[w_]
            if tail[a_] == w_:
                flow[a_] += delta
            else:
                flow[a_] -= delta
            w_ = parent[w_]

        leave = pred[u_out]
        in_tree[leave] = 0
        in_tree[enter] = 1
        if side == 0:
            u_in = u
            v_in = v
        else:
            u_in = v
            v_in = u
        node = u_in
        new_par = v_in
        new_arc = enter
        while True:
            nxt_par = parent[node]
            nxt_arc = pred[node]
            parent[node] = new_par
            pred[node] = new_arc
            new_par = node
            new_arc = nxt_arc
            if node == u_out:
                break
            node = nxt_par

    if status == 0:
        for e in range(m_real, m):
            if flow[e] != 0:
                status = 2
                break
    return flow[:m_real], status


_netsimplex = jit_kernel(_netsimplex_impl)


def _rational_masses(weights: np.ndarray) -> list[Fraction]:
    fracs = [Fraction(float(w)).limit_denominator(10**9) for w in weights[:-1]]
    fracs.append(1 - sum(fracs, Fraction(0)))
    if fracs[-1] < 0:
        raise ValueError("weights could not be rationalised to a simplex")
    return fracs


def euclidean_cost_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    sq = np.sum(a**2, axis=1)[:, None] + np.sum(b**2, axis=1)[None, :] - 2.0 * (a @ b.T)
    return np.sqrt(np.maximum(sq, 0.0))


def wasserstein1(a: WeightedCloud, b: WeightedCloud) -> tuple[float, TransportPlan]:
    """Exact 1-Wasserstein distance under the Euclidean ground cost."""
    if a.points.shape[1] != b.points.shape[1]:
        raise ValueError("clouds live in different ambient dimensions")
    if abs(a.weights.sum() - b.weights.sum()) > tol.FLOW_MARGINAL_TOL:
        raise ValueError("total masses differ")

    fa = _rational_masses(a.weights)
    fb = _rational_masses(b.weights)
    scale = math.lcm(*[f.denominator for f in fa + fb])
    supply = np.array([int(f * scale) for f in fa], dtype=np.int64)
    demand = np.array([int(f * scale) for f in fb], dtype=np.int64)
    if supply.sum() != demand.sum():
        raise ValueError("total masses differ after rationalisation")

    cost = euclidean_cost_matrix(a.points, b.points)
    eps = 1e-11 * (1.0 + float(cost.max())) * (len(supply) + len(demand) + 1)
    max_pivots = 200 * (len(supply) * len(demand) + len(supply) + len(demand))
    flow, status = _netsimplex(
        len(supply), len(demand), cost.ravel(), supply, demand, eps, max_pivots
    )
    if status == 1:
        raise RuntimeError("network simplex hit the pivot cap without converging")
    if status == 2:
        raise ValueError("transport problem infeasible: total masses differ")
    if status == 3:
        raise RuntimeError("transport problem unbounded (internal error)")

    flow = flow.reshape(cost.shape)
    total = float(np.sum(flow * cost)) / scale
    nz = np.nonzero(flow)
    plan = tuple((int(i), int(j), flow[i, j] / scale) for i, j in zip(*nz))
    return total, TransportPlan(flows=plan, cost=total)


def bottleneck_feasible(costs: np.ndarray, threshold: float) -> bool:
    """Perfect matching test on edges of the augmented cost matrix <= threshold."""
    c = np.asarray(costs, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError("augmented cost matrix must be square")
    n = c.shape[0]
    if n == 0:
        return True
    adj = c <= threshold
    match_col = np.full(n, -1, dtype=np.int64)
    for row in range(n):
        if not _augment(row, adj, match_col):
            return False
    return True


def _augment(row0: int, adj: np.ndarray, match_col: np.ndarray) -> bool:
    """One augmenting-path step of Kuhn's algorithm, iterative."""
    n = adj.shape[1]
    seen = np.zeros(n, dtype=bool)
    stack = [(row0, 0)]
    path = []  # chosen (row, col) edges along the alternating path
    while stack:
        row, start = stack[-1]
        advanced = False
        for col in range(start, n):
            if adj[row, col] and not seen[col]:
                seen[col] = True
                stack[-1] = (row, col + 1)
                path.append((row, col))
                if match_col[col] == -1:
                    for rr, cc in path:
                        match_col[cc] = rr
                    return True
                stack.append((match_col[col], 0))
                advanced = True
                break
        if not advanced:
            stack.pop()
            if path:
                path.pop()
    return False
