"""Lexicographic minimality checks and symmetry-breaking clauses.

A graph is canonical when no vertex permutation produces a strictly smaller
cell vector (see :func:`qsms.graph.matrix_vector`).  The search below looks
for a witness permutation; for the row-wise (lex) order it keeps an ordered
partition of the still-unassigned positions so that interchangeable choices
are not enumerated one by one.

Undefined cells stop a comparison chain: such a branch cannot produce a
witness.  The check is therefore sound on partial graphs and complete on
fully defined ones.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import (
    ABSENT,
    PRESENT,
    UNDEFINED,
    CellOrder,
    Graph,
    OrderKind,
    PartialGraph,
    apply_permutation,
    inverse,
)


class _BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class Canonical:
    def __bool__(self):
        return False


CANONICAL = Canonical()


@dataclass(frozen=True)
class Violation:
    """Witness that every graph agreeing with ``consulted`` is non-canonical.

    ``permutation[v-1]`` is the new label of vertex ``v``; applying it yields a
    graph with a strictly smaller cell vector.
    """

    permutation: tuple[int, ...]
    consulted: tuple[tuple[tuple[int, int], int], ...]

    def __bool__(self):
        return True


MinimalityVerdict = Canonical | Violation


def _twins(adj, u, w, n):
    au, aw = adj[u], adj[w]
    for x in range(1, n + 1):
        if x != u and x != w and au[x] != aw[x]:
            return False
    return True


def _distinct_reps(adj, cands, n):
    """Drop candidates that are twins of an earlier one (swapping them is an automorphism)."""
    reps = []
    for v in cands:
        if not any(_twins(adj, r, v, n) for r in reps):
            reps.append(v)
    return reps


def _lex_search(adj, n, budget):
    """Return the preimage map ``q`` (position -> vertex) of a witness, or None."""
    q = [0] * (n + 1)
    counter = [0]

    def rec(i, blocks):
        # blocks: list of (start, end, candidates) partitioning positions i..n
        s0, e0, cands = blocks[0]
        for v in _distinct_reps(adj, cands, n):
            counter[0] += 1
            if budget is not None and counter[0] > budget:
                raise _BudgetExceeded
            q[i] = v
            rest = [u for u in cands if u != v]
            todo = ([(i + 1, e0, rest)] if rest else []) + blocks[1:]
            row = adj[i]
            av = adj[v]
            refined = []
            placed = {}
            outcome = None  # None: equal so far, False: abandon, int: violating position
            for s, e, c in todo:
                zeros = [u for u in c if av[u] == ABSENT]
                ones = [u for u in c if av[u] == PRESENT]
                zi = oi = 0
                for j in range(s, e + 1):
                    a = row[j]
                    if a is UNDEFINED:
                        outcome = False
                        break
                    if a == ABSENT:
                        if zi < len(zeros):
                            placed[j] = zeros[zi]
                            zi += 1
                            continue
                        outcome = False
                        break
                    if zi < len(zeros):
                        placed[j] = zeros[zi]
                        zi += 1
                        outcome = j
                        break
                    if oi < len(ones):
                        placed[j] = ones[oi]
                        oi += 1
                        continue
                    outcome = False
                    break
                if outcome is not None:
                    if outcome is not False:
                        # complete the witness: this block, then the later ones
                        left = [u for u in c if u not in placed.values()]
                        for j in range(s, e + 1):
                            if j not in placed:
                                placed[j] = left.pop(0)
                        for s2, e2, c2 in refined:
                            for j, u in zip(range(s2, e2 + 1), c2):
                                placed[j] = u
                        for s2, e2, c2 in todo[todo.index((s, e, c)) + 1:]:
                            for j, u in zip(range(s2, e2 + 1), c2):
                                placed[j] = u
                        for j, u in placed.items():
                            q[j] = u
                        return True
                    break
                if zeros:
                    refined.append((s, s + len(zeros) - 1, zeros))
                if ones:
                    refined.append((s + len(zeros), e, ones))
            if outcome is False:
                continue
            if i + 1 > n - 1 or not refined:
                # all cells compared and equal
                continue
            if rec(i + 1, refined):
                return True
        return False

    if n < 2:
        return None
    if rec(1, [(1, n, list(range(1, n + 1)))]):
        return q
    return None


def _colex_search(adj, n, budget):
    q = [0] * (n + 1)
    used = [False] * (n + 1)
    counter = [0]

    def rec(j):
        # choose q[j]; compare column j: cells (i, j), i < j
        free = [u for u in range(1, n + 1) if not used[u]]
        for v in _distinct_reps(adj, free, n):
            counter[0] += 1
            if budget is not None and counter[0] > budget:
                raise _BudgetExceeded
            av = adj[v]
            verdict = 0
            for i in range(1, j):
                a = adj[i][j]
                b = av[q[i]]
                if a is UNDEFINED or b is UNDEFINED:
                    verdict = -1
                    break
                if a != b:
                    verdict = 1 if a > b else -1
                    break
            if verdict < 0:
                continue
            q[j] = v
            used[v] = True
            if verdict > 0:
                rest = [u for u in range(1, n + 1) if not used[u]]
                for k, u in zip(range(j + 1, n + 1), rest):
                    q[k] = u
                return True
            if j < n and rec(j + 1):
                return True
            used[v] = False
        return False

    if n < 2:
        return None
    if rec(1):
        return q
    return None


def _replay(adj, order: CellOrder, q):
    """Walk the cell order under preimage map ``q`` up to the first difference."""
    consulted = {}
    for (i, j) in order.sequence:
        a = adj[i][j]
        u, w = q[i], q[j]
        b = adj[u][w]
        if a is UNDEFINED or b is UNDEFINED:
            raise AssertionError("witness replay hit an undefined cell")
        consulted[(i, j)] = a
        consulted[(u, w) if u < w else (w, u)] = b
        if a != b:
            if not (a == PRESENT and b == ABSENT):
                raise AssertionError("witness replay found a larger vector")
            return tuple(sorted(consulted.items()))
    raise AssertionError("witness replay found an equal vector")


def find_violation(adj, n: int, order: CellOrder, max_nodes: int | None = None):
    """Search on a raw adjacency matrix (``adj[u][v]`` in {1, 0, None}).

    Returns ``(permutation, consulted)`` or None.  Exceeding ``max_nodes``
    returns None, which is sound.
    """
    search = _lex_search if order.kind is OrderKind.LEX else _colex_search
    try:
        q = search(adj, n, max_nodes)
    except _BudgetExceeded:
        return None
    if q is None:
        return None
    consulted = _replay(adj, order, q)
    return inverse(q[1:]), consulted


def check_partial(g: PartialGraph, order: CellOrder, max_nodes: int | None = None) -> MinimalityVerdict:
    if order.n != g.n:
        raise ValueError(f"cell order is for n={order.n}, graph has n={g.n}")
    found = find_violation(g.adjacency(), g.n, order, max_nodes)
    if found is None:
        return CANONICAL
    return Violation(*found)


def is_canonical(g: PartialGraph, order: CellOrder) -> bool:
    if not g.is_total:
        raise ValueError("is_canonical needs a fully defined graph")
    return not check_partial(g, order)


def canonical_form(g: Graph, order: CellOrder) -> Graph:
    """Smallest-vector isomorphic copy, by repeatedly applying witnesses."""
    adj = g.adjacency()
    while True:
        found = find_violation(adj, g.n, order)
        if found is None:
            return g
        g = apply_permutation(g, found[0])
        adj = g.adjacency()


def violation_to_clause(v: Violation, varmap) -> list[int]:
    """Negate the consulted cells: present -> negative literal, absent -> positive."""
    clause = []
    for cell, state in v.consulted:
        var = varmap[cell]
        clause.append(-var if state == PRESENT else var)
    return clause
