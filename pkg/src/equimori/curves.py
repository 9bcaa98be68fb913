"""Negative-curve enumeration on Del Pezzo models and their incidence graphs.

On the blow-up of the plane in m general points the irreducible rational
curves of self-intersection -1 are exactly the solutions C = a H - sum b_i E_i
of C.C = -1, K.C = -1, which in coordinates is

    sum b_i = 3a - 1,   sum b_i^2 = a^2 + 1.

All solutions lie inside the box a in [0..6], b_i in [-1..3]; the test suite
re-verifies this empirically against a strictly larger box.  The (-2)-classes
(roots, used for Weyl normalization of contractions) satisfy the analogous
equations with right-hand sides 3a and a^2 + 2 and are returned normalized so
the first nonzero coordinate is positive.

Known counts for m = 1..8: (-1)-curves (1, 3, 6, 10, 16, 27, 56, 240); the
m = 3 configuration is a hexagon, the m = 4 one the Petersen graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import EnumerationRangeError, GraphSizeError, ModelMismatchError
from .picard import DivisorClass, ModelKind, SurfaceModel, intersect

__all__ = [
    "enumerate_minus_one_curves",
    "enumerate_minus_two_classes",
    "CurveGraph",
    "GraphInvariants",
    "build_graph",
    "graph_invariants",
    "export_dot",
    "classes_to_json",
]

# Enumeration box; doubling these bounds produces no further solutions, which
# the oracle tests assert for every m.
DEGREE_MAX = 6
B_MIN, B_MAX = -1, 3


def _solve_box(m: int, sum_target: int, sq_target: int, b_min: int, b_max: int) -> List[Tuple[int, ...]]:
    """All b in [b_min..b_max]^m with sum(b) = sum_target, sum(b^2) = sq_target."""
    out: List[Tuple[int, ...]] = []
    prefix = [0] * m

    def rec(i: int, s: int, q: int):
        if q < 0:
            return
        r = m - i
        if r == 0:
            if s == 0 and q == 0:
                out.append(tuple(prefix))
            return
        # bounds pruning: remaining sum and sum of squares must stay reachable
        if s < r * b_min or s > r * b_max:
            return
        if q > r * max(b_min * b_min, b_max * b_max):
            return
        # Cauchy-Schwarz: sum of squares of r numbers summing to s is >= s^2/r
        if q * r < s * s:
            return
        for b in range(b_min, b_max + 1):
            prefix[i] = b
            rec(i + 1, s - b, q - b * b)

    rec(0, sum_target, sq_target)
    return out


def _box_solutions(
    model: SurfaceModel,
    self_int: int,
    k_deg: int,
    scale: int = 1,
) -> List[Tuple[int, ...]]:
    """Box enumeration of classes with given self-intersection and K-degree.

    ``scale`` enlarges the box (scale=2 is the oracle's doubled box).
    """
    a_max = DEGREE_MAX * scale
    b_min, b_max = B_MIN * scale, B_MAX * scale
    sols: List[Tuple[int, ...]] = []
    if model.kind is ModelKind.BLOWUP_P2:
        m = model.m
        # C = a H - sum b_i E_i: C.C = a^2 - sum b^2, K.C = -3a + sum b
        for a in range(0, a_max + 1):
            s = 3 * a + k_deg
            q = a * a - self_int
            for b in _solve_box(m, s, q, b_min, b_max):
                sols.append((a, *(-bi for bi in b)))
    elif model.kind is ModelKind.BLOWUP_P1XP1:
        m = model.m
        # C = c1 F1 + c2 F2 - sum b_i E_i: C.C = 2 c1 c2 - sum b^2,
        # K.C = -2(c1 + c2) + sum b
        for c1 in range(0, a_max + 1):
            for c2 in range(0, a_max + 1):
                s = 2 * (c1 + c2) + k_deg
                q = 2 * c1 * c2 - self_int
                for b in _solve_box(m, s, q, b_min, b_max):
                    sols.append((c1, c2, *(-bi for bi in b)))
    else:
        return []
    return sorted(sols)


def enumerate_minus_one_curves(model: SurfaceModel) -> List[DivisorClass]:
    """All (-1)-curve classes of a general-position Del Pezzo model, sorted."""
    if model.kind is not ModelKind.BLOWUP_P2:
        raise EnumerationRangeError("enumeration is defined for blow-ups of the plane")
    if not 0 <= model.m <= 8:
        raise EnumerationRangeError(
            f"m = {model.m} is outside the Del Pezzo range 0..8 (K^2 would be <= 0)"
        )
    return [model.divisor(c) for c in _box_solutions(model, -1, -1)]


def enumerate_minus_two_classes(model: SurfaceModel) -> List[DivisorClass]:
    """The (-2)-classes (C.C = -2, K.C = 0), sign-normalized.

    Each +/- pair is reported once, with the first nonzero coordinate
    positive; reflections see both signs identically.
    """
    if model.kind is ModelKind.ABSTRACT:
        return []
    if model.kind is ModelKind.BLOWUP_P2 and not 0 <= model.m <= 8:
        raise EnumerationRangeError(
            f"m = {model.m} is outside the Del Pezzo range 0..8 (K^2 would be <= 0)"
        )
    seen = set()
    for coords in _box_solutions(model, -2, 0):
        first = next((v for v in coords if v), 0)
        if first < 0:
            coords = tuple(-v for v in coords)
        seen.add(coords)
    return [model.divisor(c) for c in sorted(seen)]


# ---------------------------------------------------------------------------
# incidence graphs


@dataclass(frozen=True)
class CurveGraph:
    model: SurfaceModel
    vertices: Tuple[DivisorClass, ...]
    edges: Tuple[Tuple[int, int, int], ...]  # (i, j, multiplicity), i < j

    def adjacency(self) -> Dict[int, Dict[int, int]]:
        adj: Dict[int, Dict[int, int]] = {i: {} for i in range(len(self.vertices))}
        for i, j, mult in self.edges:
            adj[i][j] = mult
            adj[j][i] = mult
        return adj


def build_graph(classes: Sequence[DivisorClass], action=None) -> CurveGraph:
    """Intersection graph: an edge of multiplicity C.C' whenever C.C' > 0.

    If a group action is supplied the vertex set must be closed under it.
    """
    if not classes:
        raise ValueError("cannot build a graph on no classes")
    model = classes[0].model
    for c in classes[1:]:
        if c.model != model:
            raise ModelMismatchError("graph vertices live on different models")
    coords = [c.coords for c in classes]
    if len(set(coords)) != len(coords):
        raise ValueError("graph vertices must be pairwise distinct")
    order = sorted(range(len(classes)), key=lambda k: coords[k])
    verts = tuple(classes[k] for k in order)
    if action is not None:
        vert_set = {v.coords for v in verts}
        for iso in action.elements:
            for v in verts:
                if iso.apply(v).coords not in vert_set:
                    raise ValueError("vertex set is not closed under the supplied action")
    edges = []
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            mult = intersect(verts[i], verts[j])
            if mult > 0:
                edges.append((i, j, mult))
    return CurveGraph(model=model, vertices=verts, edges=tuple(edges))


@dataclass(frozen=True)
class GraphInvariants:
    vertex_count: int
    edge_count: int
    degree_sequence: Tuple[int, ...]
    girth: Optional[int]
    automorphism_order: int


def graph_invariants(graph: CurveGraph, max_vertices: int = 300) -> GraphInvariants:
    """Exact invariants; the automorphism order comes from backtracking search
    with degree/neighborhood color refinement, so the graph size is capped."""
    n = len(graph.vertices)
    if n > max_vertices:
        raise GraphSizeError(f"{n} vertices exceeds the search limit {max_vertices}")
    adj = graph.adjacency()
    degrees = tuple(sorted(sum(adj[i].values()) for i in range(n)))
    return GraphInvariants(
        vertex_count=n,
        edge_count=len(graph.edges),
        degree_sequence=degrees,
        girth=_girth(adj, n),
        automorphism_order=_automorphism_order(adj, n),
    )


def _girth(adj: Dict[int, Dict[int, int]], n: int) -> Optional[int]:
    # multigraph convention: a repeated edge is a cycle of length 2
    if any(m >= 2 for nb in adj.values() for m in nb.values()):
        return 2
    best = None
    for root in range(n):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        while queue:
            nxt = []
            for u in queue:
                for v in adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        parent[v] = u
                        nxt.append(v)
                    elif v != parent[u]:
                        cycle = dist[u] + dist[v] + 1
                        if best is None or cycle < best:
                            best = cycle
            queue = nxt
    return best


def _refine_colors(adj, n, colors):
    while True:
        signatures = {}
        for v in range(n):
            sig = (colors[v], tuple(sorted((colors[u], m) for u, m in adj[v].items())))
            signatures[v] = sig
        palette = {s: k for k, s in enumerate(sorted(set(signatures.values())))}
        new = [palette[signatures[v]] for v in range(n)]
        if new == colors:
            return colors
        colors = new


def _automorphism_order(adj, n: int) -> int:
    if n == 0:
        return 1
    colors = _refine_colors(adj, n, [0] * n)
    count = 0
    image = [-1] * n
    used = [False] * n
    order = sorted(range(n), key=lambda v: (colors[v], -len(adj[v])))

    def extend(k: int):
        nonlocal count
        if k == n:
            count += 1
            return
        v = order[k]
        for w in range(n):
            if used[w] or colors[w] != colors[v]:
                continue
            ok = True
            for u, mult in adj[v].items():
                iu = image[u]
                if iu >= 0 and adj[w].get(iu, 0) != mult:
                    ok = False
                    break
            if ok:
                # mapped non-neighbors must stay non-neighbors
                for u in range(n):
                    iu = image[u]
                    if iu >= 0 and u not in adj[v] and iu in adj[w]:
                        ok = False
                        break
            if ok:
                image[v] = w
                used[w] = True
                extend(k + 1)
                used[w] = False
                image[v] = -1

    extend(0)
    return count


# ---------------------------------------------------------------------------
# export


def export_dot(graph: CurveGraph) -> str:
    """Deterministic DOT text; vertices labeled by their class coordinates."""
    lines = ["graph curves {"]
    for i, v in enumerate(graph.vertices):
        label = "(" + ",".join(str(c) for c in v.coords) + ")"
        lines.append(f'  v{i} [label="{label}"];')
    for i, j, mult in graph.edges:
        attr = f' [label="{mult}"]' if mult > 1 else ""
        lines.append(f"  v{i} -- v{j}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def classes_to_json(classes: Sequence[DivisorClass]) -> List[List[int]]:
    return [list(c.coords) for c in classes]
