"""Graph-search instances as 2-QBFs of the form  free E, exists X, forall Y: F(E, X) and not H(E, X, Y).

Every encoder returns a :class:`~qsms.circuit.Qbf` whose free block is the
edge variables ``e_i_j`` (``i < j``) in row-wise order.  The matrix is a
top-level conjunction whose last conjunct is the negated universal part; the
other conjuncts never mention universal variables, so the CEGAR engine can
load them once.

Cardinality constraints are built as circuits (sequential counters made of
gates) so that they can be written out as QCIR alongside everything else.
"""

from __future__ import annotations

import itertools
import math
from enum import Enum

from .cegar import edge_var, edge_vars
from .circuit import TRUE, Circuit, Pool, Qbf, simplify
from .graph import OrderKind, cell_order


class Variant(str, Enum):
    THREE_CONNECTED = "three-connected"
    BIPARTITE = "bipartite"
    GIRTH6 = "girth6"


class EncodingContext:
    """Collects variables per block and the conjuncts of F and H."""

    def __init__(self, n, pool=None):
        self.n = n
        self.pool = pool if pool is not None else Pool()
        self.free = edge_vars(n)
        for name in self.free:
            self.pool.var(name)
        self.exists = []
        self.forall = []
        self.F = []
        self.H = []
        self.negated_h = None   # literal for "not H" when given directly
        self._names = set()

    # -- variables --
    def e(self, u, v):
        return self.pool.var(edge_var(u, v))

    def ex(self, name):
        if name not in self._names:
            self._names.add(name)
            self.exists.append(name)
        return self.pool.var(name)

    def univ(self, name):
        if name not in self._names:
            self._names.add(name)
            self.forall.append(name)
        return self.pool.var(name)

    # -- gates (with the same folding rules as simplify) --
    def AND(self, lits):
        lits = [l for l in lits if l != TRUE]
        if any(l == -TRUE for l in lits):
            return -TRUE
        if not lits:
            return TRUE
        if len(lits) == 1:
            return lits[0]
        return self.pool.and_(lits)

    def OR(self, lits):
        lits = [l for l in lits if l != -TRUE]
        if any(l == TRUE for l in lits):
            return TRUE
        if not lits:
            return -TRUE
        if len(lits) == 1:
            return lits[0]
        return self.pool.or_(lits)

    # -- result --
    def qbf(self):
        conj = list(self.F)
        if self.negated_h is not None:
            conj.append(self.negated_h)
        elif self.H:
            conj.append(-self.AND(self.H))
        out = self.AND(conj)
        return Qbf(self.free, self.exists, self.forall, Circuit(self.pool, out))


# --- shared sub-encoders --------------------------------------------------------

def counter(ctx, lits, upto):
    """``s[j]`` is a gate true iff at least ``j+1`` of ``lits`` hold, for j < upto."""
    s = [-TRUE] * upto
    for x in lits:
        nxt = list(s)
        nxt[0] = ctx.OR([s[0], x])
        for j in range(1, upto):
            nxt[j] = ctx.OR([s[j], ctx.AND([s[j - 1], x])])
        s = nxt
    return s


def at_most(ctx, lits, k):
    lits = list(lits)
    if k >= len(lits):
        return TRUE
    if k < 0:
        return -TRUE
    return -counter(ctx, lits, k + 1)[k]


def at_least(ctx, lits, k):
    lits = list(lits)
    if k <= 0:
        return TRUE
    if k > len(lits):
        return -TRUE
    return counter(ctx, lits, k)[k - 1]


def exactly(ctx, lits, k):
    lits = list(lits)
    if k < 0 or k > len(lits):
        return -TRUE
    s = counter(ctx, lits, min(k + 1, len(lits)))
    parts = []
    if k > 0:
        parts.append(s[k - 1])
    if k < len(lits):
        parts.append(-s[k])
    return ctx.AND(parts)


def incident(ctx, v):
    return [ctx.e(v, u) for u in range(1, ctx.n + 1) if u != v]


def add_cubic(ctx):
    for v in range(1, ctx.n + 1):
        ctx.F.append(exactly(ctx, incident(ctx, v), 3))


def add_no_triangles(ctx):
    for u, v, w in itertools.combinations(range(1, ctx.n + 1), 3):
        ctx.F.append(ctx.OR([-ctx.e(u, v), -ctx.e(u, w), -ctx.e(v, w)]))


def cycles(n, length):
    """Vertex sequences of all cycles of the given length in K_n, one per cycle."""
    out = []
    for combo in itertools.combinations(range(1, n + 1), length):
        first, rest = combo[0], combo[1:]
        for perm in itertools.permutations(rest):
            if perm[0] < perm[-1]:
                out.append((first,) + perm)
    return out


def add_no_cycles(ctx, length):
    for cyc in cycles(ctx.n, length):
        edges = [ctx.e(cyc[i], cyc[(i + 1) % length]) for i in range(length)]
        ctx.F.append(ctx.OR([-x for x in edges]))


def add_connected(ctx, prefix="r"):
    """Layered reachability from vertex 1."""
    n = ctx.n
    if n <= 1:
        return

    def r(v, t):
        if v == 1:
            return TRUE
        if t == 0:
            return -TRUE
        return ctx.ex(f"{prefix}_{v}_{t}")

    for t in range(1, n):
        for v in range(2, n + 1):
            reach = [r(v, t - 1)] + [ctx.AND([ctx.e(u, v), r(u, t - 1)]) for u in range(1, n + 1) if u != v]
            ctx.F.append(ctx.OR([-r(v, t), ctx.OR(reach)]))
    for v in range(2, n + 1):
        ctx.F.append(r(v, n - 1))


def _coloring_h(ctx, colours, name):
    """Proper vertex colouring with ``colours`` colours over universal variables."""
    n = ctx.n
    c = {(v, l): ctx.univ(f"{name}_{v}_{l}") for v in range(1, n + 1) for l in range(1, colours + 1)}
    for v in range(1, n + 1):
        ctx.H.append(ctx.OR([c[v, l] for l in range(1, colours + 1)]))
    for u, v in itertools.combinations(range(1, n + 1), 2):
        for l in range(1, colours + 1):
            ctx.H.append(ctx.OR([-ctx.e(u, v), -c[u, l], -c[v, l]]))


# --- families --------------------------------------------------------------------

def encode_empty(n):
    """No constraint at all: every graph is a solution."""
    return EncodingContext(n).qbf()


def encode_triangle_free(n):
    ctx = EncodingContext(n)
    add_no_triangles(ctx)
    return ctx.qbf()


def encode_triangle_free_non_k_colorable(n, k, maximal=False):
    """Triangle-free graphs of chromatic number at least ``k``.

    The universal side states that ``c`` is a proper colouring with ``k-1``
    colours.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    ctx = EncodingContext(n)
    add_no_triangles(ctx)
    if maximal:
        for u, v in itertools.combinations(range(1, n + 1), 2):
            common = [ctx.AND([ctx.e(u, w), ctx.e(v, w)]) for w in range(1, n + 1) if w not in (u, v)]
            ctx.F.append(ctx.OR([ctx.e(u, v)] + common))
    _coloring_h(ctx, k - 1, "c")
    return ctx.qbf()


def encode_folkman(n, k):
    """K_k-free graphs where every red/blue edge colouring has a monochromatic triangle."""
    if k < 3:
        raise ValueError("k must be at least 3")
    ctx = EncodingContext(n)
    for sub in itertools.combinations(range(1, n + 1), k):
        ctx.F.append(ctx.OR([-ctx.e(u, v) for u, v in itertools.combinations(sub, 2)]))
    y = {}
    for u, v in itertools.combinations(range(1, n + 1), 2):
        y[u, v] = ctx.univ(f"c_{u}_{v}")
    mono = []
    for u, v, w in itertools.combinations(range(1, n + 1), 3):
        a, b, c = y[u, v], y[u, w], y[v, w]
        same = ctx.OR([ctx.AND([a, b, c]), ctx.AND([-a, -b, -c])])
        mono.append(ctx.AND([ctx.e(u, v), ctx.e(u, w), ctx.e(v, w), same]))
    ctx.negated_h = ctx.OR(mono)
    return ctx.qbf()


def domination_bound(n):
    return math.ceil(n / 3)


def encode_domination(n, variant=Variant.THREE_CONNECTED, bound=None):
    """Cubic graphs whose domination number exceeds ``bound`` (default ceil(n/3)).

    For the three-connected variant only connectedness is encoded; stronger
    connectivity is checked on the output.
    """
    variant = Variant(variant)
    if n < 4:
        raise ValueError("n must be at least 4")
    ctx = EncodingContext(n)
    add_cubic(ctx)
    if variant is Variant.THREE_CONNECTED:
        add_connected(ctx)
    elif variant is Variant.BIPARTITE:
        b = {i: ctx.ex(f"b_{i}") for i in range(1, n + 1)}
        for i, j in itertools.combinations(range(1, n + 1), 2):
            ctx.F.append(ctx.OR([-b[i], -b[j], -ctx.e(i, j)]))
            ctx.F.append(ctx.OR([b[i], b[j], -ctx.e(i, j)]))
    else:
        for length in (3, 4, 5):
            add_no_cycles(ctx, length)
    d = {i: ctx.univ(f"d_{i}") for i in range(1, n + 1)}
    for v in range(1, n + 1):
        ctx.H.append(ctx.OR([d[v]] + [ctx.AND([ctx.e(u, v), d[u]]) for u in range(1, n + 1) if u != v]))
    if bound is None:
        bound = domination_bound(n)
    ctx.H.append(at_most(ctx, [d[i] for i in range(1, n + 1)], bound))
    return ctx.qbf()


def _elimination_ordering(ctx, k, order_name, arc_name, declare):
    """Conjuncts saying the named ordering/fill-in witnesses width at most ``k``."""
    n = ctx.n
    o = {}
    arc = {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        o[i, j] = declare(f"{order_name}_{i}_{j}")
    for i, j in itertools.combinations(range(1, n + 1), 2):
        arc[i, j] = declare(f"{arc_name}_{i}_{j}")

    def before(u, v):
        return o[u, v] if u < v else -o[v, u]

    def a(u, v):
        return arc[u, v] if u < v else arc[v, u]

    out = []
    for u, v, w in itertools.permutations(range(1, n + 1), 3):
        out.append(ctx.OR([-before(u, v), -before(v, w), before(u, w)]))
    for u, v in itertools.combinations(range(1, n + 1), 2):
        out.append(ctx.OR([-ctx.e(u, v), a(u, v)]))
    for w in range(1, n + 1):
        for u, v in itertools.combinations([x for x in range(1, n + 1) if x != w], 2):
            out.append(ctx.OR([-a(w, u), -a(w, v), -before(w, u), -before(w, v), a(u, v)]))
    for u in range(1, n + 1):
        later = [ctx.AND([a(u, v), before(u, v)]) for v in range(1, n + 1) if v != u]
        out.append(at_most(ctx, later, k))
    return out


def encode_treewidth_exact(n, k):
    """Graphs of treewidth exactly ``k`` (at most k, and no ordering of width k-1)."""
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    ctx = EncodingContext(n)
    ctx.F.extend(_elimination_ordering(ctx, k, "o", "arc", ctx.ex))
    ctx.H.extend(_elimination_ordering(ctx, k - 1, "uo", "uarc", ctx.univ))
    return ctx.qbf()


def encode_snark(n):
    """Connected cubic graphs without 3- and 4-cycles that are not 3-edge-colourable."""
    ctx = EncodingContext(n)
    add_cubic(ctx)
    add_no_cycles(ctx, 3)
    add_no_cycles(ctx, 4)
    add_connected(ctx)
    c = {}
    for i, j in itertools.combinations(range(1, n + 1), 2):
        for l in (1, 2, 3):
            c[i, j, l] = ctx.univ(f"c_{i}_{j}_{l}")

    def col(u, v, l):
        return c[u, v, l] if u < v else c[v, u, l]

    for i, j in itertools.combinations(range(1, n + 1), 2):
        ctx.H.append(ctx.OR([c[i, j, l] for l in (1, 2, 3)]))
    for i in range(1, n + 1):
        others = [x for x in range(1, n + 1) if x != i]
        for j, k in itertools.combinations(others, 2):
            for l in (1, 2, 3):
                ctx.H.append(ctx.OR([-ctx.e(i, j), -ctx.e(i, k), -col(i, j, l), -col(i, k, l)]))
    return ctx.qbf()


def encode_kochen_specker(n):
    """Square-free, min-degree-3, triangle-covered, 4-colourable, not 010-colourable."""
    if n < 3:
        raise ValueError("n must be at least 3")
    ctx = EncodingContext(n)
    V = range(1, n + 1)
    add_no_cycles(ctx, 4)
    for v in V:
        ctx.F.append(at_least(ctx, incident(ctx, v), 3))
    for v in V:
        others = [x for x in V if x != v]
        ctx.F.append(ctx.OR([ctx.AND([ctx.e(v, u), ctx.e(v, w), ctx.e(u, w)])
                             for u, w in itertools.combinations(others, 2)]))
    col = {(v, l): ctx.ex(f"col_{v}_{l}") for v in V for l in range(1, 5)}
    for v in V:
        ctx.F.append(ctx.OR([col[v, l] for l in range(1, 5)]))
    for u, v in itertools.combinations(V, 2):
        for l in range(1, 5):
            ctx.F.append(ctx.OR([-ctx.e(u, v), -col[u, l], -col[v, l]]))
    c = {v: ctx.univ(f"c_{v}") for v in V}
    for u, v in itertools.combinations(V, 2):
        ctx.H.append(ctx.OR([-ctx.e(u, v), c[u], c[v]]))
    for u, v, w in itertools.combinations(V, 3):
        ctx.H.append(ctx.OR([-ctx.e(u, v), -ctx.e(u, w), -ctx.e(v, w), -c[u], -c[v], -c[w]]))
    return ctx.qbf()


# --- static minimality ------------------------------------------------------------

def _perm_prefix(taken):
    prefix = "p"
    i = 0
    while any(name.startswith(prefix + "_") for name in taken):
        i += 1
        prefix = f"p{i}"
    return prefix


def _qstatic(pool, n, order, prefix):
    order = cell_order(n, order if isinstance(order, OrderKind) else OrderKind(order))
    V = range(1, n + 1)
    p = {(i, j): pool.var(f"{prefix}_{i}_{j}") for i in V for j in V}
    names = [f"{prefix}_{i}_{j}" for i in V for j in V]

    def AND(ls):
        return pool.and_(ls)

    def OR(ls):
        return pool.or_(ls)

    is_perm = [OR([p[i, j] for j in V]) for i in V]
    for j in V:
        for i, i2 in itertools.combinations(V, 2):
            is_perm.append(OR([-p[i, j], -p[i2, j]]))
    is_perm = AND(is_perm)

    def pe(i, j):
        # cell (i, j) of the permuted graph: some edge {a, b} lands on {i, j}
        terms = []
        for a, b in itertools.permutations(V, 2):
            terms.append(AND([pool.var(edge_var(a, b)), p[a, i], p[b, j]]))
        return OR(terms)

    non_min = []
    prefix_ge = []
    for (i, j) in order.sequence:
        e = pool.var(edge_var(i, j))
        pij = pe(i, j)
        non_min.append(AND(prefix_ge + [e, -pij]))
        prefix_ge = [AND(prefix_ge + [OR([e, -pij])])] if prefix_ge else [OR([e, -pij])]
    non_min = OR(non_min)
    return Circuit(pool, -AND([non_min, is_perm])), names


def encode_qstatic_minimality(n, order="lex", pool=None, prefix="p"):
    """Circuit that holds for all permutation variables iff the graph is canonical.

    Variables ``p_i_j`` mean "vertex i is mapped to j".  The returned circuit
    is simplified, so for ``n = 1`` it is the constant true.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    pool = pool if pool is not None else Pool()
    c, _ = _qstatic(pool, n, order, prefix)
    return simplify(c)


def augment_with_qstatic(q: Qbf, order="lex"):
    """Conjoin the static minimality circuit and add its permutation variables to the universal block."""
    from .cegar import infer_order

    n = infer_order(q.free)
    if set(q.free) != set(edge_vars(n)):
        raise ValueError("free variables must be exactly the edge variables")
    taken = set(q.free) | set(q.exists) | set(q.forall)
    prefix = _perm_prefix(taken)
    c, names = _qstatic(q.pool, n, order, prefix)
    c = simplify(c)
    parts = q.matrix.top_conjuncts() if q.matrix.output != TRUE else []
    if c.output != TRUE:
        parts.append(c.output)
    if not parts:
        out = TRUE
    elif len(parts) == 1:
        out = parts[0]
    else:
        out = q.pool.and_(parts)
    return Qbf(q.free, q.exists, q.forall + tuple(names), Circuit(q.pool, out))
