"""Brute-force reference answers for graph properties and small QBFs.

Nothing here calls the SAT engine or the pruned permutation search of
:mod:`qsms.symmetry`; canonical forms are minima over all ``n!``
relabellings, computed with numpy.  Searches that would be too large raise
:class:`ResourceGuardError` instead of returning a partial answer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import networkx as nx
import numpy as np

from .circuit import AND, VAR, Circuit, Qbf, simplify, substitute, topo_order
from .graph import Graph, OrderKind, cell_order

INF = math.inf


class ResourceGuardError(RuntimeError):
    pass


# --- full-sweep canonical forms -----------------------------------------------------

@lru_cache(maxsize=None)
def _perms(n):
    if n > 10:
        raise ResourceGuardError(f"refusing an n! sweep for n={n}")
    return np.array(list(itertools.permutations(range(n))), dtype=np.int8).reshape(-1, n)


@lru_cache(maxsize=None)
def _position_table(n, kind):
    """pos[u][v] = index of cell {u,v} (0-based vertices) in the given order."""
    order = cell_order(n, kind)
    pos = np.full((n, n), -1, dtype=np.int64)
    for t, (i, j) in enumerate(order.sequence):
        pos[i - 1, j - 1] = pos[j - 1, i - 1] = t
    return pos


def _code(g, kind):
    """Integer whose binary digits are the cell vector (first cell most significant)."""
    order = cell_order(g.n, kind)
    m = len(order.sequence)
    code = 0
    for (u, v) in g.edges:
        code |= 1 << (m - 1 - order.position[(u, v)])
    return code


def _decode(code, n, kind):
    order = cell_order(n, kind)
    m = len(order.sequence)
    return Graph(n, [c for t, c in enumerate(order.sequence) if code >> (m - 1 - t) & 1])


def canonical_code(g, order="lex"):
    """Smallest cell-vector code over all relabellings of ``g``."""
    kind = OrderKind(order)
    n = g.n
    if n < 2 or not g.edges:
        return 0
    perms = _perms(n)
    pos = _position_table(n, kind)
    m = n * (n - 1) // 2
    codes = np.zeros(len(perms), dtype=np.int64)
    for (u, v) in g.edges:
        t = pos[perms[:, u - 1], perms[:, v - 1]]
        codes |= np.left_shift(np.int64(1), (m - 1 - t))
    return int(codes.min())


def canonical_form(g, order="lex"):
    return _decode(canonical_code(g, order), g.n, OrderKind(order))


def is_canonical(g, order="lex"):
    return _code(g, OrderKind(order)) == canonical_code(g, order)


def _orbit_sweep(n, kind):
    """Codes of all canonical graphs on ``n`` vertices by marking whole orbits."""
    m = n * (n - 1) // 2
    if m == 0:
        return [0]
    perms = _perms(n)
    pos = _position_table(n, kind)
    order = cell_order(n, kind)
    # weights[p, t]: bit of the image of cell t under permutation p
    weights = np.zeros((len(perms), m), dtype=np.int64)
    for t, (i, j) in enumerate(order.sequence):
        weights[:, t] = np.left_shift(np.int64(1), m - 1 - pos[perms[:, i - 1], perms[:, j - 1]])
    seen = np.zeros(1 << m, dtype=bool)
    out = []
    for code in range(1 << m):
        if seen[code]:
            continue
        out.append(code)
        bits = [t for t in range(m) if code >> (m - 1 - t) & 1]
        images = weights[:, bits].sum(axis=1) if bits else np.zeros(1, dtype=np.int64)
        seen[images] = True
    return out


def cubic_graphs(n, girth=3, bipartite=False):
    """One labelled copy of every cubic graph on ``n`` vertices (up to isomorphism).

    Vertex 1 is joined to 2, 3, 4; the rest is backtracking with partial
    girth and bipartiteness pruning, followed by isomorphism rejection.
    Results are cached per argument triple.
    """
    if n % 2 or n < 4:
        return []
    if n > 12:
        raise ResourceGuardError("cubic generation is limited to n <= 12")
    return list(_cubic_graphs(n, girth, bool(bipartite)))


@lru_cache(maxsize=None)
def _cubic_graphs(n, girth, bipartite):
    adj = [set() for _ in range(n + 1)]

    def dist_below(a, b, limit):
        # is there a path a..b of length < limit?
        frontier = {a}
        seen = {a}
        for _ in range(limit - 1):
            nxt = set()
            for x in frontier:
                for y in adj[x]:
                    if y == b:
                        return True
                    if y not in seen:
                        seen.add(y)
                        nxt.add(y)
            frontier = nxt
            if not frontier:
                break
        return False

    def can_add(a, b):
        if girth > 3 and dist_below(a, b, girth - 1):
            return False
        if girth == 3 and b in adj[a]:
            return False
        return True

    found = []

    def rec():
        v = next((x for x in range(1, n + 1) if len(adj[x]) < 3), None)
        if v is None:
            found.append(sorted((a, b) for a in range(1, n + 1) for b in adj[a] if a < b))
            return
        need = 3 - len(adj[v])
        cands = [w for w in range(v + 1, n + 1) if len(adj[w]) < 3 and w not in adj[v]]
        # fresh (untouched) vertices are interchangeable: only use the lowest ones
        touched = [w for w in cands if adj[w]]
        fresh = [w for w in cands if not adj[w]]
        for r in range(need + 1):
            if r > len(fresh) or need - r > len(touched):
                continue
            for pick in itertools.combinations(touched, need - r):
                chosen = list(pick) + fresh[:r]
                added = []
                ok = True
                for w in chosen:
                    if not can_add(v, w):
                        ok = False
                        break
                    adj[v].add(w)
                    adj[w].add(v)
                    added.append(w)
                if ok and bipartite and not _two_colourable_adj(adj, n):
                    ok = False
                if ok:
                    rec()
                for w in added:
                    adj[v].discard(w)
                    adj[w].discard(v)

    rec()
    reps = {}
    out = []
    for edges in found:
        G = nx.Graph(edges)
        key = nx.weisfeiler_lehman_graph_hash(G, iterations=4)
        bucket = reps.setdefault(key, [])
        if any(nx.is_isomorphic(G, H) for H in bucket):
            continue
        bucket.append(G)
        out.append(Graph(n, edges))
    return tuple(out)


def _two_colourable_adj(adj, n):
    colour = {}
    for s in range(1, n + 1):
        if s in colour:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
                elif colour[y] == colour[x]:
                    return False
    return True


def enumerate_canonical(n, predicate=None, order="lex", cubic=False):
    """All canonical graphs on ``n`` vertices (optionally filtered), sorted by code.

    Full sweeps are available for ``n <= 7``.  With ``cubic=True`` only cubic
    graphs are produced, from a structured generator, for ``n <= 10``.
    """
    kind = OrderKind(order)
    if cubic:
        if n > 10:
            raise ResourceGuardError("cubic canonical sweep is limited to n <= 10")
        graphs = [canonical_form(g, kind) for g in cubic_graphs(n)]
        graphs.sort(key=lambda g: _code(g, kind))
    else:
        if n >= 8:
            raise ResourceGuardError(f"refusing a full sweep of all graphs on {n} vertices")
        if n < 1:
            raise ValueError("n must be positive")
        graphs = [_decode(c, n, kind) for c in _orbit_sweep(n, kind)]
    if predicate is not None:
        graphs = [g for g in graphs if predicate(g)]
    return graphs


# --- colouring ------------------------------------------------------------------------

def is_properly_k_colorable(g, k):
    adj = g.adjacency_sets()
    order = sorted(range(1, g.n + 1), key=lambda v: -len(adj[v]))
    col = {}

    def rec(i):
        if i == len(order):
            return True
        v = order[i]
        used = {col[u] for u in adj[v] if u in col}
        top = max(col.values(), default=-1)
        for c in range(min(k, top + 2)):
            if c not in used:
                col[v] = c
                if rec(i + 1):
                    return True
                del col[v]
        return False

    if k <= 0:
        return g.n == 0
    return rec(0)


def chromatic_number(g):
    k = 1
    while not is_properly_k_colorable(g, k):
        k += 1
    return k


def is_3_edge_colorable(g):
    adj = g.adjacency_sets()
    if any(len(adj[v]) > 3 for v in range(1, g.n + 1)):
        return False
    edges = sorted(g.edges)
    at = {v: set() for v in range(1, g.n + 1)}

    def rec(i):
        if i == len(edges):
            return True
        u, v = edges[i]
        for c in range(3):
            if c in at[u] or c in at[v]:
                continue
            if i == 0 and c > 0:
                break
            at[u].add(c)
            at[v].add(c)
            if rec(i + 1):
                return True
            at[u].discard(c)
            at[v].discard(c)
        return False

    return rec(0)


def min_dominating_set_size(g):
    n = g.n
    adj = g.adjacency_sets()
    closed = [0] * (n + 1)
    for v in range(1, n + 1):
        m = 1 << (v - 1)
        for u in adj[v]:
            m |= 1 << (u - 1)
        closed[v] = m
    full = (1 << n) - 1
    for size in range(0, n + 1):
        for sub in itertools.combinations(range(1, n + 1), size):
            cov = 0
            for v in sub:
                cov |= closed[v]
            if cov == full:
                return size
    return n


# --- treewidth ----------------------------------------------------------------------

def treewidth(g):
    """Exact treewidth by dynamic programming over vertex subsets."""
    n = g.n
    if n > 12:
        raise ResourceGuardError("treewidth oracle is limited to n <= 12")
    if not g.edges:
        return 0
    adj = g.adjacency_sets()
    nb = [0] * n
    for v in range(1, n + 1):
        for u in adj[v]:
            nb[v - 1] |= 1 << (u - 1)

    def q_size(S, v):
        # vertices outside S + {v} reachable from v through S
        seen = 1 << v
        stack = [nb[v]]
        reach = 0
        while stack:
            f = stack.pop() & ~seen
            while f:
                low = f & -f
                f ^= low
                if seen & low:
                    continue
                seen |= low
                if S & low:
                    stack.append(nb[low.bit_length() - 1])
                else:
                    reach |= low
        return bin(reach).count("1")

    size = 1 << n
    tw = [INF] * size
    tw[0] = -1
    for S in range(1, size):
        best = INF
        f = S
        while f:
            low = f & -f
            f ^= low
            v = low.bit_length() - 1
            rest = S ^ low
            cand = max(tw[rest], q_size(rest, v))
            if cand < best:
                best = cand
        tw[S] = best
    return int(tw[size - 1])


def _delete_edge(g, e):
    return Graph(g.n, [x for x in g.edges if x != e])


def _contract_edge(g, e):
    """Merge the endpoints of ``e`` (into the smaller), relabel to 1..n-1, drop loops and parallels."""
    u, v = e
    keep = [x for x in range(1, g.n + 1) if x != v]
    label = {x: i + 1 for i, x in enumerate(keep)}
    label[v] = label[u]
    edges = set()
    for a, b in g.edges:
        a2, b2 = label[a], label[b]
        if a2 != b2:
            edges.add((min(a2, b2), max(a2, b2)))
    return Graph(g.n - 1, sorted(edges))


def is_treewidth_critical(g, k=None):
    """Every proper minor has smaller treewidth.

    Checked via single edge deletions and contractions; an isolated vertex
    is a proper minor of equal treewidth, so graphs with one are rejected.
    """
    tw = treewidth(g)
    if k is not None and tw != k:
        return False
    adj = g.adjacency_sets()
    if any(not adj[v] for v in range(1, g.n + 1)):
        return False
    for e in g.edges:
        if treewidth(_delete_edge(g, e)) >= tw:
            return False
        if treewidth(_contract_edge(g, e)) >= tw:
            return False
    return True


# --- other properties -------------------------------------------------------------------

def is_010_colorable(g):
    n = g.n
    if n > 24:
        raise ResourceGuardError("010 sweep is limited to n <= 24")
    edges = [(u - 1, v - 1) for u, v in g.edges]
    adj = g.adjacency_sets()
    tris = [(u - 1, v - 1, w - 1) for u, v, w in itertools.combinations(range(1, n + 1), 3)
            if v in adj[u] and w in adj[u] and w in adj[v]]
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    for u, v in edges:
        ok &= ((masks >> u) & 1) | ((masks >> v) & 1) == 1
    for u, v, w in tris:
        ok &= ((masks >> u) & (masks >> v) & (masks >> w) & 1) == 0
    return bool(ok.any())


def folkman_check(g, x=3, y=3):
    """Every red/blue colouring of the edges has a red K_x or a blue K_y."""
    edges = sorted(g.edges)
    if len(edges) > 24:
        raise ResourceGuardError("edge-colouring sweep is limited to 24 edges")
    index = {e: i for i, e in enumerate(edges)}
    adj = g.adjacency_sets()

    def cliques(size):
        out = []
        for sub in itertools.combinations(range(1, g.n + 1), size):
            if all(b in adj[a] for a, b in itertools.combinations(sub, 2)):
                out.append([index[p] for p in itertools.combinations(sub, 2)])
        return out

    red = cliques(x)
    blue = red if y == x else cliques(y)
    if not red and not blue:
        return False
    # cliques grouped by their largest edge index: checked once that edge is coloured
    last_red = {}
    for c in red:
        last_red.setdefault(max(c), []).append(c)
    last_blue = {}
    for c in blue:
        last_blue.setdefault(max(c), []).append(c)
    col = [0] * len(edges)

    def rec(i):
        # returns True if some completion avoids every monochromatic clique
        if i == len(edges):
            return True
        for c in (0, 1):
            col[i] = c
            bad = False
            if c == 0:
                bad = any(all(col[j] == 0 for j in cl) for cl in last_red.get(i, ()))
            else:
                bad = any(all(col[j] == 1 for j in cl) for cl in last_blue.get(i, ()))
            if not bad and rec(i + 1):
                return True
        return False

    return not rec(0)


def _components(adj, vertices):
    vertices = set(vertices)
    comps = 0
    seen = set()
    for s in vertices:
        if s in seen:
            continue
        comps += 1
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in vertices and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return comps


def vertex_connectivity(g):
    """Largest k such that g is k-connected (K_n counts as (n-1)-connected)."""
    n = g.n
    adj = g.adjacency_sets()
    V = list(range(1, n + 1))
    if n == 1:
        return 0
    if _components(adj, V) > 1:
        return 0
    for k in range(1, n - 1):
        for cut in itertools.combinations(V, k):
            rest = [v for v in V if v not in cut]
            if _components(adj, rest) > 1:
                return k
    return n - 1


def girth(g):
    adj = g.adjacency_sets()
    best = INF
    for s in range(1, g.n + 1):
        dist = {s: 0}
        parent = {s: 0}
        queue = [s]
        for x in queue:
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best


def is_bipartite(g):
    return _two_colourable_adj(g.adjacency_sets(), g.n)


def connectivity_report(g):
    adj = g.adjacency_sets()
    V = range(1, g.n + 1)
    degs = [len(adj[v]) for v in V]
    kappa = vertex_connectivity(g)
    tri = [any(a in adj[b] for a, b in itertools.combinations(sorted(adj[v]), 2)) for v in V]
    gi = girth(g)
    return {
        "connected": g.n >= 1 and _components(adj, V) == 1,
        "two_connected": g.n >= 3 and kappa >= 2,
        "connectivity": kappa,
        "girth": gi,
        "cubic": all(d == 3 for d in degs),
        "bipartite": is_bipartite(g),
        "square_free": not _has_4_cycle(adj, g.n),
        "triangle_free": gi > 3,
        "every_vertex_on_triangle": all(tri),
        "min_degree": min(degs) if degs else 0,
    }


def _has_4_cycle(adj, n):
    for u, w in itertools.combinations(range(1, n + 1), 2):
        if len(adj[u] & adj[w]) >= 2:
            return True
    return False


@dataclass
class PropertyReport:
    graph: Graph
    values: dict = field(default_factory=dict)

    def lines(self):
        out = []
        for k, v in self.values.items():
            if isinstance(v, bool):
                v = str(v).lower()
            elif v == INF:
                v = "inf"
            out.append(f"{k}={v}")
        return out


def property_report(g):
    r = dict(n=g.n, m=len(g.edges))
    r.update(connectivity_report(g))
    r["chromatic_number"] = chromatic_number(g)
    r["domination_number"] = min_dominating_set_size(g)
    r["three_edge_colorable"] = is_3_edge_colorable(g)
    r["treewidth"] = treewidth(g) if g.n <= 12 else "skipped"
    r["zero_one_zero_colorable"] = is_010_colorable(g) if g.n <= 24 else "skipped"
    return PropertyReport(g, r)


# --- QBF ground truth ---------------------------------------------------------------------

def _vectorized_truth(c: Circuit, names, rows):
    """Evaluate ``c`` on all 2^len(names) assignments (names[0] is the most significant bit)."""
    k = len(names)
    idx = np.arange(rows, dtype=np.int64)
    val = {}
    nodes = c.pool.nodes
    pos = {nm: k - 1 - i for i, nm in enumerate(names)}
    for nid in topo_order(c.pool, [c.output]):
        kind, payload = nodes[nid]
        if kind == VAR:
            val[nid] = ((idx >> pos[payload]) & 1).astype(bool)
            continue
        acc = np.ones(rows, dtype=bool) if kind == AND else np.zeros(rows, dtype=bool)
        for ch in payload:
            x = val[abs(ch)]
            if ch < 0:
                x = ~x
            if kind == AND:
                acc &= x
            else:
                acc |= x
        val[nid] = acc
    r = val[abs(c.output)]
    return r if c.output > 0 else ~r


def qbf_truth_bruteforce(q: Qbf, free_assignment=None, limit=30):
    """Decide exists X forall Y: matrix[free_assignment] by expansion.

    Variables of the free block that are not assigned are existentially
    quantified.  Independent top-level conjuncts are expanded separately.
    """
    free_assignment = dict(free_assignment or {})
    universal = set(q.forall)
    m = substitute(q.matrix, free_assignment)
    m = simplify(m)
    if m.is_true:
        return True
    if m.is_false:
        return False
    # group top-level conjuncts that share variables
    conj = m.top_conjuncts()
    groups = []  # (vars, lits)
    for lit in conj:
        vs = Circuit(m.pool, lit).variables()
        merged = [g for g in groups if g[0] & vs]
        for g in merged:
            groups.remove(g)
            vs |= g[0]
        lits = [lit] + [l for g in merged for l in g[1]]
        groups.append((vs, lits))
    for vs, lits in groups:
        X = sorted(v for v in vs if v not in universal)
        Y = sorted(v for v in vs if v in universal)
        if len(X) + len(Y) > limit:
            raise ResourceGuardError(f"QBF expansion over {len(X) + len(Y)} variables exceeds {limit}")
        c = Circuit(m.pool, lits[0] if len(lits) == 1 else m.pool.and_(lits))
        names = X + Y
        rows = 1 << len(names)
        truth = np.zeros(rows, dtype=bool)
        chunk = 1 << 22
        if rows <= chunk:
            truth = _vectorized_truth(c, names, rows)
        else:
            # evaluate in slices by fixing the leading X bits
            lead = len(names) - 22
            for hi in range(1 << lead):
                fixed = {names[i]: (hi >> (lead - 1 - i)) & 1 for i in range(lead)}
                sub = simplify(substitute(c, fixed))
                rest = names[lead:]
                if sub.is_true or sub.is_false:
                    truth[hi * chunk:(hi + 1) * chunk] = sub.is_true
                else:
                    truth[hi * chunk:(hi + 1) * chunk] = _vectorized_truth_on(sub, rest)
        table = truth.reshape(1 << len(X), 1 << len(Y))
        if not table.all(axis=1).any():
            return False
    return True


def _vectorized_truth_on(c, names):
    # variables of c are a subset of names; ones that do not occur are irrelevant
    return _vectorized_truth(c, names, 1 << len(names))
