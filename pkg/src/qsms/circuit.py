"""And/or circuits over named variables and 2-QBF containers.

Circuits live in a :class:`Pool`, an append-only hash-consed node table.  A
literal is a signed node id; node 1 is the empty conjunction, so literal ``1``
is true and ``-1`` is false.  A :class:`Circuit` is a pool plus an output
literal, so many circuits can share structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

VAR, AND, OR = "var", "and", "or"
TRUE, FALSE = 1, -1


class Pool:
    __slots__ = ("nodes", "_index", "_vars")

    def __init__(self):
        self.nodes = [None, (AND, ())]
        self._index = {(AND, ()): 1}
        self._vars = {}

    def _node(self, key):
        nid = self._index.get(key)
        if nid is None:
            nid = len(self.nodes)
            self.nodes.append(key)
            self._index[key] = nid
        return nid

    def var(self, name: str) -> int:
        nid = self._vars.get(name)
        if nid is None:
            nid = self._node((VAR, name))
            self._vars[name] = nid
        return nid

    def has_var(self, name):
        return name in self._vars

    def and_(self, lits: Iterable[int]) -> int:
        return self._node((AND, tuple(lits)))

    def or_(self, lits: Iterable[int]) -> int:
        return self._node((OR, tuple(lits)))

    def kind(self, lit):
        return self.nodes[abs(lit)][0]

    def name(self, lit):
        node = self.nodes[abs(lit)]
        if node[0] != VAR:
            raise ValueError("not a variable literal")
        return node[1]

    def children(self, lit):
        return self.nodes[abs(lit)][1]

    def __len__(self):
        return len(self.nodes) - 1


def topo_order(pool: Pool, roots: Iterable[int]) -> list[int]:
    """Node ids reachable from ``roots`` in children-first order."""
    nodes = pool.nodes
    seen = set()
    out = []
    for r in roots:
        r = abs(r)
        if r in seen:
            continue
        stack = [(r, False)]
        while stack:
            nid, expanded = stack.pop()
            if expanded:
                out.append(nid)
                continue
            if nid in seen:
                continue
            seen.add(nid)
            stack.append((nid, True))
            kind, payload = nodes[nid]
            if kind != VAR:
                for ch in reversed(payload):
                    if abs(ch) not in seen:
                        stack.append((abs(ch), False))
    return out


@dataclass(frozen=True)
class Circuit:
    pool: Pool = field(compare=False, repr=False)
    output: int

    def negate(self) -> "Circuit":
        return Circuit(self.pool, -self.output)

    def variables(self) -> set[str]:
        nodes = self.pool.nodes
        return {nodes[i][1] for i in topo_order(self.pool, [self.output]) if nodes[i][0] == VAR}

    def size(self) -> int:
        """Number of gate nodes reachable from the output."""
        nodes = self.pool.nodes
        return sum(1 for i in topo_order(self.pool, [self.output]) if nodes[i][0] != VAR)

    def top_conjuncts(self) -> list[int]:
        """Children of a positive top-level AND, else the output itself."""
        if self.output > 0 and self.pool.kind(self.output) == AND:
            return list(self.pool.children(self.output))
        return [self.output]

    @property
    def is_true(self):
        return self.output == TRUE

    @property
    def is_false(self):
        return self.output == FALSE

    def __eq__(self, other):
        return isinstance(other, Circuit) and structurally_equal(self, other)

    def __hash__(self):
        return hash(self.output)


def _fold(pool, kind, lits):
    """Build an and/or gate with constant folding, dedup and unary collapse."""
    if kind == AND:
        unit, zero = TRUE, FALSE
    else:
        unit, zero = FALSE, TRUE
    out = []
    seen = set()
    for c in lits:
        if c == unit:
            continue
        if c == zero or -c in seen:
            return zero
        if c not in seen:
            seen.add(c)
            out.append(c)
    if not out:
        return unit
    if len(out) == 1:
        return out[0]
    return pool.and_(out) if kind == AND else pool.or_(out)


def _rewrite(c: Circuit, leaf) -> Circuit:
    """Rebuild ``c`` bottom-up, mapping variables through ``leaf`` and folding gates."""
    pool = c.pool
    nodes = pool.nodes
    memo = {}
    for nid in topo_order(pool, [c.output]):
        kind, payload = nodes[nid]
        if kind == VAR:
            memo[nid] = leaf(nid, payload)
        else:
            if not payload:
                memo[nid] = TRUE if kind == AND else FALSE
                continue
            lits = [memo[ch] if ch > 0 else -memo[-ch] for ch in payload]
            memo[nid] = _fold(pool, kind, lits)
    out = memo[abs(c.output)]
    return Circuit(pool, out if c.output > 0 else -out)


def simplify(c: Circuit) -> Circuit:
    """Remove constant inputs, collapse empty and unary gates.

    Duplicate inputs are merged and a gate with complementary inputs becomes
    a constant; both preserve equivalence.
    """
    return _rewrite(c, lambda nid, name: nid)


def substitute(c: Circuit, assignment: Mapping[str, int | bool]) -> Circuit:
    """Replace assigned variables by constants and simplify."""
    if not assignment:
        return c

    def leaf(nid, name):
        if name in assignment:
            return TRUE if assignment[name] else FALSE
        return nid

    return _rewrite(c, leaf)


def evaluate(c: Circuit, assignment: Mapping[str, int | bool]) -> int:
    nodes = c.pool.nodes
    val = {}
    for nid in topo_order(c.pool, [c.output]):
        kind, payload = nodes[nid]
        if kind == VAR:
            if payload not in assignment:
                raise ValueError(f"variable {payload!r} is not assigned")
            val[nid] = bool(assignment[payload])
        elif kind == AND:
            val[nid] = all(val[ch] if ch > 0 else not val[-ch] for ch in payload)
        else:
            val[nid] = any(val[ch] if ch > 0 else not val[-ch] for ch in payload)
    r = val[abs(c.output)]
    return int(r if c.output > 0 else not r)


def import_circuit(pool: Pool, c: Circuit) -> Circuit:
    """Copy ``c`` into ``pool`` (identity if it already lives there)."""
    if c.pool is pool:
        return c
    nodes = c.pool.nodes
    memo = {}
    for nid in topo_order(c.pool, [c.output]):
        kind, payload = nodes[nid]
        if kind == VAR:
            memo[nid] = pool.var(payload)
        else:
            lits = [memo[ch] if ch > 0 else -memo[-ch] for ch in payload]
            memo[nid] = pool.and_(lits) if kind == AND else pool.or_(lits)
    out = memo[abs(c.output)]
    return Circuit(pool, out if c.output > 0 else -out)


def structurally_equal(a: Circuit, b: Circuit) -> bool:
    """Same DAG shape, operators, child order and variable names."""
    if a.pool is b.pool:
        return a.output == b.output
    shared = Pool()
    return import_circuit(shared, a).output == import_circuit(shared, b).output


class QbfError(ValueError):
    pass


@dataclass(frozen=True)
class Qbf:
    """``free`` (outermost, reported) + ``exists`` + ``forall`` over a matrix."""

    free: tuple[str, ...]
    exists: tuple[str, ...]
    forall: tuple[str, ...]
    matrix: Circuit

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(self.free))
        object.__setattr__(self, "exists", tuple(self.exists))
        object.__setattr__(self, "forall", tuple(self.forall))
        blocks = [set(self.free), set(self.exists), set(self.forall)]
        total = len(self.free) + len(self.exists) + len(self.forall)
        if len(blocks[0] | blocks[1] | blocks[2]) != total:
            raise QbfError("quantifier blocks overlap or repeat a variable")
        missing = self.matrix.variables() - (blocks[0] | blocks[1] | blocks[2])
        if missing:
            raise QbfError(f"matrix variables not bound by the prefix: {sorted(missing)}")

    @property
    def pool(self):
        return self.matrix.pool

    def structurally_equal(self, other: "Qbf") -> bool:
        return (
            (self.free, self.exists, self.forall) == (other.free, other.exists, other.forall)
            and structurally_equal(self.matrix, other.matrix)
        )
