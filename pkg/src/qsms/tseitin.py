"""Circuit-to-CNF translation with gate hashing, and CNF cardinality constraints."""

from __future__ import annotations

from .circuit import AND, FALSE, TRUE, VAR, Circuit, topo_order


class TseitinContext:
    """Maps circuit nodes and structural gate keys to literals of one solver.

    Or-gates are stored as negated and-gates over negated inputs, so
    ``or(a, b)`` and ``-and(-a, -b)`` share one variable.
    """

    def __init__(self, solver):
        self.solver = solver
        self.varmap = {}
        self.gates = {}
        self._memo = {}   # id(pool) -> (pool, {node id: literal})
        self._true = None

    def var(self, name: str) -> int:
        v = self.varmap.get(name)
        if v is None:
            v = self.solver.new_var()
            self.varmap[name] = v
        return v

    def true_lit(self) -> int:
        if self._true is None:
            self._true = self.solver.new_var()
            self.solver.add_clause([self._true])
        return self._true

    def _and(self, lits):
        out = []
        seen = set()
        for l in lits:
            if -l in seen:
                return -self.true_lit()
            if l not in seen:
                seen.add(l)
                out.append(l)
        if not out:
            return self.true_lit()
        if len(out) == 1:
            return out[0]
        key = tuple(sorted(out))
        g = self.gates.get(key)
        if g is not None:
            return g
        g = self.solver.new_var()
        add = self.solver.add_clause
        for l in key:
            add([-g, l])
        add([g] + [-l for l in key])
        self.gates[key] = g
        return g

    def _lit(self, memo, ch):
        if abs(ch) == TRUE:
            return self.true_lit() if ch > 0 else -self.true_lit()
        return memo[ch] if ch > 0 else -memo[-ch]

    def encode(self, c: Circuit) -> int:
        """Return a literal equivalent to ``c`` under the emitted definitions."""
        if c.output == TRUE:
            return self.true_lit()
        if c.output == FALSE:
            return -self.true_lit()
        entry = self._memo.get(id(c.pool))
        if entry is None:
            entry = (c.pool, {})
            self._memo[id(c.pool)] = entry
        memo = entry[1]
        nodes = c.pool.nodes
        root = abs(c.output)
        if root not in memo:
            for nid in topo_order(c.pool, [root]):
                if nid in memo:
                    continue
                kind, payload = nodes[nid]
                if kind == VAR:
                    memo[nid] = self.var(payload)
                    continue
                lits = [self._lit(memo, ch) for ch in payload]
                if kind == AND:
                    memo[nid] = self._and(lits)
                else:
                    memo[nid] = -self._and([-l for l in lits])
        lit = memo[root]
        return lit if c.output > 0 else -lit


def tseitin(c: Circuit, ctx: TseitinContext) -> int:
    return ctx.encode(c)


def cardinality_le(lits, k, solver):
    """Sequential counter (Sinz 2005): at most ``k`` of ``lits`` are true."""
    lits = list(lits)
    n = len(lits)
    if not 0 <= k:
        raise ValueError("k must be non-negative")
    if k >= n:
        return
    if k == 0:
        for x in lits:
            solver.add_clause([-x])
        return
    add = solver.add_clause
    s = [[solver.new_var() for _ in range(k)] for _ in range(n - 1)]
    add([-lits[0], s[0][0]])
    for j in range(1, k):
        add([-s[0][j]])
    for i in range(1, n - 1):
        x = lits[i]
        add([-x, s[i][0]])
        add([-s[i - 1][0], s[i][0]])
        for j in range(1, k):
            add([-x, -s[i - 1][j - 1], s[i][j]])
            add([-s[i - 1][j], s[i][j]])
        add([-x, -s[i - 1][k - 1]])
    add([-lits[n - 1], -s[n - 2][k - 1]])


def cardinality_ge(lits, k, solver):
    lits = list(lits)
    if k <= 0:
        return
    if k > len(lits):
        solver.add_clause([])
        return
    cardinality_le([-x for x in lits], len(lits) - k, solver)


def cardinality_eq(lits, k, solver):
    lits = list(lits)
    if not 0 <= k <= len(lits):
        raise ValueError("need 0 <= k <= len(lits)")
    cardinality_le(lits, k, solver)
    cardinality_ge(lits, k, solver)
