"""Graphs, partially defined graphs, permutations and cell orders.

Vertices are 1-based.  A graph on ``n`` vertices is stored as a mapping from
upper-triangle cells ``(i, j)``, ``i < j``, to one of three states.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

PRESENT = 1
ABSENT = 0
UNDEFINED = None


class GraphFormatError(ValueError):
    """Raised for malformed edge-list or graph6 input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OrderKind(str, Enum):
    LEX = "lex"
    COLEX = "colex"


class CellOrder:
    """The sequence of upper-triangle cells used for vector comparison."""

    __slots__ = ("kind", "n", "sequence", "position")

    def __init__(self, n: int, kind: OrderKind | str = OrderKind.LEX):
        kind = OrderKind(kind)
        self.kind = kind
        self.n = n
        if kind is OrderKind.LEX:
            seq = list(combinations(range(1, n + 1), 2))
        else:
            seq = [(i, j) for j in range(1, n + 1) for i in range(1, j)]
        self.sequence = tuple(seq)
        self.position = {c: t for t, c in enumerate(seq)}

    def __len__(self):
        return len(self.sequence)

    def __iter__(self):
        return iter(self.sequence)

    def __eq__(self, other):
        return isinstance(other, CellOrder) and (self.kind, self.n) == (other.kind, other.n)

    def __hash__(self):
        return hash((self.kind, self.n))

    def __repr__(self):
        return f"CellOrder({self.n}, {self.kind.value!r})"


@lru_cache(maxsize=None)
def cell_order(n: int, kind: str = "lex") -> CellOrder:
    return CellOrder(n, kind)


def all_cells(n: int):
    return combinations(range(1, n + 1), 2)


def _norm(u, v):
    return (u, v) if u < v else (v, u)


class PartialGraph:
    """Adjacency over ``[n]`` where each cell is 1, 0 or None (undefined).

    Instances are treated as immutable values; operations return new objects.
    """

    __slots__ = ("n", "_cells", "_hash")

    def __init__(self, n: int, cells: Mapping[tuple[int, int], int | None] | None = None):
        if n < 1:
            raise ValueError("vertex count must be positive")
        self.n = n
        full = {c: UNDEFINED for c in all_cells(n)}
        if cells:
            for (u, v), state in cells.items():
                if u == v:
                    raise ValueError(f"self-loop at vertex {u}")
                c = _norm(u, v)
                if c not in full:
                    raise ValueError(f"cell {c} out of range for n={n}")
                if state not in (PRESENT, ABSENT, UNDEFINED):
                    state = PRESENT if state else ABSENT
                full[c] = state
        self._cells = full
        self._hash = None

    # --- access -----------------------------------------------------------
    def __getitem__(self, cell):
        u, v = cell
        return self._cells[_norm(u, v)]

    def cells(self):
        return dict(self._cells)

    def defined_edges(self):
        return [c for c, s in self._cells.items() if s == PRESENT]

    def absent_cells(self):
        return [c for c, s in self._cells.items() if s == ABSENT]

    def undefined_cells(self):
        return [c for c, s in self._cells.items() if s is UNDEFINED]

    @property
    def is_total(self):
        return all(s is not UNDEFINED for s in self._cells.values())

    def adjacency(self):
        """Return an (n+1)x(n+1) list matrix of cell states, index 0 unused."""
        n = self.n
        m = [[ABSENT] * (n + 1) for _ in range(n + 1)]
        for (u, v), s in self._cells.items():
            m[u][v] = m[v][u] = s
        return m

    def extends(self, other: "PartialGraph") -> bool:
        """True iff ``self`` is an extension of ``other``."""
        if self.n != other.n:
            return False
        for c, s in other._cells.items():
            if s is not UNDEFINED and self._cells[c] != s:
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, PartialGraph) and self.n == other.n and self._cells == other._cells

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, tuple(self._cells.values())))
        return self._hash

    def __repr__(self):
        if self.is_total:
            return f"Graph(n={self.n}, edges={self.defined_edges()})"
        return f"PartialGraph(n={self.n}, present={self.defined_edges()}, absent={self.absent_cells()})"


class Graph(PartialGraph):
    """A fully defined simple undirected graph."""

    __slots__ = ()

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        cells = {c: ABSENT for c in all_cells(n)}
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            cells[_norm(u, v)] = PRESENT
        super().__init__(n, cells)

    @classmethod
    def from_partial(cls, g: PartialGraph) -> "Graph":
        if not g.is_total:
            raise ValueError("partial graph has undefined cells")
        return cls(g.n, g.defined_edges())

    @property
    def edges(self):
        return self.defined_edges()

    def neighbors(self, v):
        return [u for u in range(1, self.n + 1) if u != v and self[(u, v)] == PRESENT]

    def degree(self, v):
        return len(self.neighbors(v))

    def adjacency_sets(self):
        adj = {v: set() for v in range(1, self.n + 1)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def _check_perm(p: Sequence[int], n: int):
    if len(p) != n:
        raise ValueError(f"permutation length {len(p)} does not match n={n}")
    if sorted(p) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {list(p)}")


def apply_permutation(g: PartialGraph, p: Sequence[int]):
    """Relabel ``g`` by ``p``; ``p[v-1]`` is the image of vertex ``v``.

    Cell ``{u, v}`` of ``g`` becomes cell ``{p(u), p(v)}`` of the result.
    """
    _check_perm(p, g.n)
    if isinstance(g, Graph):
        return Graph(g.n, [(p[u - 1], p[v - 1]) for u, v in g.edges])
    cells = {_norm(p[u - 1], p[v - 1]): s for (u, v), s in g.cells().items()}
    return PartialGraph(g.n, cells)


def inverse(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, x in enumerate(p, start=1):
        inv[x - 1] = i
    return tuple(inv)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p ∘ q``: apply ``q`` first, then ``p``."""
    return tuple(p[q[i] - 1] for i in range(len(q)))


def matrix_vector(g: PartialGraph, order: CellOrder) -> tuple:
    if order.n != g.n:
        raise ValueError(f"cell order is for n={order.n}, graph has n={g.n}")
    return tuple(g[c] for c in order.sequence)


# --- edge-list text format ---------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    lines = [(k, ln.strip()) for k, ln in enumerate(text.splitlines(), start=1)]
    lines = [(k, ln) for k, ln in lines if ln]
    if not lines:
        raise GraphFormatError("empty input", 1)
    k, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(x.isdigit() for x in parts):
        raise GraphFormatError(f"expected header 'n m', got {header!r}", k)
    n, m = int(parts[0]), int(parts[1])
    if n < 1:
        raise GraphFormatError("vertex count must be positive", k)
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}", k)
    seen = set()
    for k, ln in body:
        parts = ln.split()
        if len(parts) != 2 or not all(x.lstrip("-").isdigit() for x in parts):
            raise GraphFormatError(f"malformed edge line {ln!r}", k)
        u, v = int(parts[0]), int(parts[1])
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(f"vertex out of range 1..{n}", k)
        if not u < v:
            raise GraphFormatError(f"edge must satisfy u < v, got {u} {v}", k)
        if (u, v) in seen:
            raise GraphFormatError(f"duplicate edge {u} {v}", k)
        seen.add((u, v))
    return Graph(n, seen)


def emit_edge_list(g: Graph) -> str:
    edges = sorted(g.edges)
    out = [f"{g.n} {len(edges)}"]
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def emit_edge_line(g: Graph) -> str:
    """Single-line variant used for streams: ``n: u-v u-v ...``."""
    return f"{g.n}: " + " ".join(f"{u}-{v}" for u, v in sorted(g.edges))


def parse_edge_line(line: str) -> Graph:
    head, _, rest = line.partition(":")
    if not head.strip().isdigit():
        raise GraphFormatError(f"malformed edge line {line!r}")
    n = int(head)
    edges = []
    for tok in rest.split():
        a, _, b = tok.partition("-")
        if not (a.isdigit() and b.isdigit()):
            raise GraphFormatError(f"malformed edge token {tok!r}")
        u, v = int(a), int(b)
        if not (1 <= u < v <= n):
            raise GraphFormatError(f"bad edge {tok!r}")
        edges.append((u, v))
    return Graph(n, edges)


# --- graph6 ------------------------------------------------------------------

def emit_graph6(g: Graph) -> str:
    n = g.n
    if not 1 <= n <= 62:
        raise ValueError(f"graph6 emission supports 1 <= n <= 62, got {n}")
    bits = [1 if g[(i, j)] == PRESENT else 0 for j in range(2, n + 1) for i in range(1, j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def parse_graph6(s: str) -> Graph:
    s = s.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s or not 63 <= ord(s[0]) <= 125:
        raise GraphFormatError(f"unsupported graph6 string {s!r}")
    n = ord(s[0]) - 63
    m = n * (n - 1) // 2
    nbytes = (m + 5) // 6
    data = s[1:]
    if len(data) != nbytes:
        raise GraphFormatError(f"graph6 length mismatch for n={n}")
    bits = []
    for ch in data:
        val = ord(ch) - 63
        if not 0 <= val < 64:
            raise GraphFormatError(f"bad graph6 character {ch!r}")
        bits.extend((val >> (5 - k)) & 1 for k in range(6))
    edges = []
    t = 0
    for j in range(2, n + 1):
        for i in range(1, j):
            if bits[t]:
                edges.append((i, j))
            t += 1
    return Graph(n, edges)


def parse_graph_line(line: str) -> Graph:
    """Accept either a graph6 string or a single-line edge list."""
    line = line.strip()
    if ":" in line:
        return parse_edge_line(line)
    return parse_graph6(line)
