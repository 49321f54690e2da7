"""Counterexample-guided 2-QBF solving with optional minimality pruning.

Two incremental SAT solvers cooperate.  The first one proposes assignments
to the free and existential variables; the second one looks for a universal
assignment falsifying the matrix under that proposal.  Each universal
counterexample is substituted into the matrix and the resulting circuit is
added to the first solver as a refinement.

Top-level conjuncts of the matrix that mention no universal variable are
moved to the first solver once, before the loop starts.

With ``sms=True`` the first solver only accepts assignments whose graph
(read off the ``e_i_j`` free variables) is canonical; violations come back
as clauses over the edge variables.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field

from .circuit import Circuit, Qbf, QbfError, simplify, substitute
from .graph import ABSENT, PRESENT, Graph, OrderKind, cell_order
from .sat import Solver
from .symmetry import find_violation
from .tseitin import TseitinContext

EDGE_VAR = re.compile(r"^e_(\d+)_(\d+)$")


def edge_var(u, v):
    if u > v:
        u, v = v, u
    return f"e_{u}_{v}"


def edge_vars(n):
    return [edge_var(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def graph_from_assignment(assignment, n):
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if assignment.get(edge_var(i, j))]
    return Graph(n, edges)


def infer_order(free):
    """Number of vertices behind the ``e_i_j`` names in ``free`` (0 if none)."""
    n = 0
    for name in free:
        m = EDGE_VAR.match(name)
        if m:
            n = max(n, int(m.group(1)), int(m.group(2)))
    return n


def strip_existential_conjuncts(q: Qbf):
    """Split off top-level conjuncts free of universal variables.

    Returns ``(parts, rest)`` where ``parts`` is a list of circuits and
    ``rest`` is ``q`` with those conjuncts removed from the matrix.
    """
    pool = q.pool
    universal = set(q.forall)
    parts = []
    kept = []
    for lit in q.matrix.top_conjuncts():
        c = Circuit(pool, lit)
        if universal.isdisjoint(c.variables()):
            parts.append(c)
        else:
            kept.append(lit)
    if len(kept) == 1:
        out = kept[0]
    else:
        out = pool.and_(kept)
    return parts, Qbf(q.free, q.exists, q.forall, Circuit(pool, out))


@dataclass
class CegarStats:
    iterations: int = 0
    refinements: int = 0
    sms_calls: int = 0
    sms_rejections: int = 0
    solutions: int = 0
    seconds: float = 0.0
    stripped_conjuncts: int = 0

    def as_dict(self):
        return dict(self.__dict__)


@dataclass
class CegarState:
    qbf: Qbf
    rest: Qbf
    first: Solver
    second: Solver
    ctx1: TseitinContext
    ctx2: TseitinContext
    n: int = 0
    sms: bool = False
    order: object = None
    stats: CegarStats = field(default_factory=CegarStats)
    complete: bool | None = None


def _sms_callback(state, max_nodes):
    n = state.n
    order = cell_order(n, state.order)
    varmap = {}
    for (i, j) in order.sequence:
        varmap[(i, j)] = state.ctx1.var(edge_var(i, j))
    cells = list(varmap.items())
    stats = state.stats

    def callback(solver):
        stats.sms_calls += 1
        val = solver.val
        adj = [[None] * (n + 1) for _ in range(n + 1)]
        for (i, j), v in cells:
            x = val[2 * v]
            if x:
                b = PRESENT if x > 0 else ABSENT
                adj[i][j] = b
                adj[j][i] = b
        found = find_violation(adj, n, order, max_nodes)
        if found is None:
            return None
        stats.sms_rejections += 1
        return [-varmap[c] if s == PRESENT else varmap[c] for c, s in found[1]]

    return callback


def init(q: Qbf, sms=False, order="lex", strip=True, seed=None, partial_sms=False, sms_max_nodes=None):
    """Build the two solvers for ``q``.

    ``partial_sms`` also runs the minimality check on partial assignments of
    the first solver (at propagation fixpoints); this is sound because the
    check only reports violations that hold for every completion.
    """
    if not isinstance(q, Qbf):
        raise TypeError("expected a Qbf")
    clash = set(q.free) & set(q.forall)
    if clash:
        raise QbfError(f"free variables also quantified universally: {sorted(clash)}")
    order = OrderKind(order) if not isinstance(order, OrderKind) else order
    n = infer_order(q.free)

    if strip:
        parts, rest = strip_existential_conjuncts(q)
    else:
        parts, rest = [], q
    first = Solver(seed)
    second = Solver(seed)
    ctx1 = TseitinContext(first)
    ctx2 = TseitinContext(second)
    for name in q.free + q.exists:
        ctx1.var(name)
    for p in parts:
        first.add_clause([ctx1.encode(simplify(p))])
    zero = {y: 0 for y in q.forall}
    first.add_clause([ctx1.encode(substitute(rest.matrix, zero))])
    for name in q.free + q.exists + q.forall:
        ctx2.var(name)
    second.add_clause([ctx2.encode(simplify(rest.matrix.negate()))])

    state = CegarState(q, rest, first, second, ctx1, ctx2, n=n, sms=sms, order=order)
    state.stats.stripped_conjuncts = len(parts)
    if sms and n >= 2:
        first.set_admissibility_callback(_sms_callback(state, sms_max_nodes), partial=partial_sms)
    return state


def _step(state: CegarState):
    """Run until a verified witness is found (returned) or none exists (None)."""
    q = state.qbf
    first, second = state.first, state.second
    v1, v2 = state.ctx1.varmap, state.ctx2.varmap
    outer = q.free + q.exists
    while True:
        state.stats.iterations += 1
        if not first.solve():
            return None
        model = first.model
        alpha = {name: model[v1[name]] for name in outer}
        assumptions = [v2[name] if alpha[name] else -v2[name] for name in outer]
        if not second.solve(assumptions):
            return alpha
        m2 = second.model
        beta = {y: m2[v2[y]] for y in q.forall}
        refinement = substitute(state.rest.matrix, beta)
        first.add_clause([state.ctx1.encode(refinement)])
        state.stats.refinements += 1


def solve_2qbf(state: CegarState):
    """Return a satisfying assignment of the free and existential variables, or None."""
    t0 = time.perf_counter()
    try:
        return _step(state)
    finally:
        state.stats.seconds += time.perf_counter() - t0


def enumerate_solutions(state: CegarState, limit=None):
    """Yield assignments to the free variables, one per solution.

    Each reported assignment is blocked on the free variables only.  After
    the generator is exhausted ``state.complete`` tells whether the search
    ran to the end (False when ``limit`` stopped it).
    """
    q = state.qbf
    v1 = state.ctx1.varmap
    state.complete = None
    count = 0
    t0 = time.perf_counter()
    try:
        while True:
            if limit is not None and count >= limit:
                state.complete = False
                return
            alpha = _step(state)
            if alpha is None:
                state.complete = True
                return
            sol = {name: alpha[name] for name in q.free}
            count += 1
            state.stats.solutions += 1
            state.first.add_clause([-v1[x] if sol[x] else v1[x] for x in q.free])
            yield sol
    finally:
        state.stats.seconds += time.perf_counter() - t0


def enumerate_graphs(q: Qbf, limit=None, n=None, **kwargs):
    """Convenience wrapper: run the enumeration and return ``(graphs, state)``.

    ``n`` defaults to the largest vertex in the edge variables (at least 1).
    """
    state = init(q, **kwargs)
    if n is None:
        n = max(1, infer_order(q.free))
    graphs = [graph_from_assignment(a, n) for a in enumerate_solutions(state, limit)]
    return graphs, state


def ccl_refinement_view(n: int, k: int, beta):
    """Clause over edge variables equivalent to substituting a colouring.

    ``beta`` assigns every ``c_v_l`` (vertex ``v`` in 1..n, colour ``l`` in
    1..k-1).  For the chromatic-number encoding, substituting ``beta`` and
    simplifying leaves the disjunction of ``e_u_v`` over pairs that share a
    colour; that is returned as a list of variable names.  A vertex with no
    colour makes the substituted matrix true, which is reported as
    ``ValueError``.
    """
    colours = {}
    for v in range(1, n + 1):
        cs = set()
        for l in range(1, k):
            name = f"c_{v}_{l}"
            if name not in beta:
                raise ValueError(f"assignment misses {name}")
            if beta[name]:
                cs.add(l)
        if not cs:
            raise ValueError(f"vertex {v} has no colour; the refinement is trivially true")
        colours[v] = cs
    return [edge_var(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if colours[u] & colours[v]]


def decide_graph(q: Qbf, g, **kwargs) -> bool:
    """Whether the fixed graph ``g`` satisfies ``q`` (edge variables assigned, rest solved)."""
    fixed = {name: 0 for name in q.free}
    for (u, v) in g.edges:
        fixed[edge_var(u, v)] = 1
    matrix = substitute(q.matrix, fixed)
    sub = Qbf((), q.exists, q.forall, matrix)
    return solve_2qbf(init(sub, **kwargs)) is not None


__all__ = [
    "CegarState",
    "CegarStats",
    "ccl_refinement_view",
    "decide_graph",
    "edge_var",
    "edge_vars",
    "enumerate_graphs",
    "enumerate_solutions",
    "graph_from_assignment",
    "infer_order",
    "init",
    "solve_2qbf",
    "strip_existential_conjuncts",
]

