"""Named problem families: encoder, output filter and oracle predicate in one place."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from . import encoders as enc
from . import oracle

NAMES = ("none", "triangle-free", "folkman", "domination", "treewidth", "snark", "kochen-specker")
_ALIAS = re.compile(r"^triangle-free-non-(\d+)-col$")


@dataclass
class Family:
    name: str
    n: int
    k: int | None = None
    variant: str | None = None
    maximal: bool = False
    critical: bool = False
    params: dict = field(default_factory=dict)

    # -- encoding --
    def encode(self):
        n, k = self.n, self.k
        if self.name == "none":
            return enc.encode_empty(n)
        if self.name == "triangle-free":
            if k is None:
                if self.maximal:
                    raise ValueError("--maximal needs --k")
                return enc.encode_triangle_free(n)
            return enc.encode_triangle_free_non_k_colorable(n, k, self.maximal)
        if self.name == "folkman":
            return enc.encode_folkman(n, k if k is not None else 4)
        if self.name == "domination":
            return enc.encode_domination(n, self.variant or enc.Variant.THREE_CONNECTED)
        if self.name == "treewidth":
            if k is None:
                raise ValueError("treewidth needs --k")
            return enc.encode_treewidth_exact(n, k)
        if self.name == "snark":
            return enc.encode_snark(n)
        if self.name == "kochen-specker":
            return enc.encode_kochen_specker(n)
        raise ValueError(f"unknown problem {self.name!r}")

    # -- predicates --
    def encoded_predicate(self, g):
        """What the encoding itself accepts (before any output filter)."""
        name = self.name
        if name == "none":
            return True
        if name == "triangle-free":
            if not _triangle_free(g):
                return False
            if self.maximal and not _maximal_triangle_free(g):
                return False
            return self.k is None or not oracle.is_properly_k_colorable(g, self.k - 1)
        if name == "folkman":
            k = self.k if self.k is not None else 4
            return not _has_clique(g, k) and oracle.folkman_check(g)
        if name == "domination":
            rep = oracle.connectivity_report(g)
            if not rep["cubic"]:
                return False
            if oracle.min_dominating_set_size(g) <= enc.domination_bound(g.n):
                return False
            variant = enc.Variant(self.variant or enc.Variant.THREE_CONNECTED)
            if variant is enc.Variant.THREE_CONNECTED:
                return rep["connected"]
            if variant is enc.Variant.BIPARTITE:
                return rep["bipartite"]
            return rep["girth"] >= 6
        if name == "treewidth":
            return oracle.treewidth(g) == self.k
        if name == "snark":
            rep = oracle.connectivity_report(g)
            return rep["cubic"] and rep["girth"] >= 5 and rep["connected"] and not oracle.is_3_edge_colorable(g)
        if name == "kochen-specker":
            rep = oracle.connectivity_report(g)
            return (rep["square_free"] and rep["min_degree"] >= 3 and rep["every_vertex_on_triangle"]
                    and oracle.is_properly_k_colorable(g, 4) and not oracle.is_010_colorable(g))
        raise ValueError(f"unknown problem {name!r}")

    def output_filter(self, g):
        """Extra conditions checked on solver output."""
        if self.name == "snark":
            return oracle.vertex_connectivity(g) >= 2
        if self.name == "domination" and enc.Variant(self.variant or enc.Variant.THREE_CONNECTED) is enc.Variant.THREE_CONNECTED:
            return oracle.vertex_connectivity(g) >= 3
        if self.name == "treewidth" and self.critical:
            return oracle.is_treewidth_critical(g, self.k)
        return True

    def predicate(self, g):
        """Full membership: encoding conditions plus output filter."""
        return self.encoded_predicate(g) and self.output_filter(g)

    @property
    def cubic(self):
        return self.name in ("domination", "snark")


def make_family(name, n=None, k=None, variant=None, maximal=False, critical=False):
    m = _ALIAS.match(name)
    if m:
        name, k = "triangle-free", int(m.group(1)) + 1
    if name not in NAMES:
        raise ValueError(f"unknown problem {name!r}; choose from {', '.join(NAMES)}")
    if variant is not None and name != "domination":
        raise ValueError("--variant only applies to domination")
    if critical and name != "treewidth":
        raise ValueError("--critical only applies to treewidth")
    if maximal and name != "triangle-free":
        raise ValueError("--maximal only applies to triangle-free")
    if variant is not None:
        variant = enc.Variant(variant).value
    return Family(name, n, k, variant, maximal, critical)


def _triangle_free(g):
    adj = g.adjacency_sets()
    return not any(adj[u] & adj[v] for u, v in g.edges)


def _maximal_triangle_free(g):
    adj = g.adjacency_sets()
    return all(v in adj[u] or adj[u] & adj[v] for u, v in itertools.combinations(range(1, g.n + 1), 2))


def _has_clique(g, k):
    adj = g.adjacency_sets()
    return any(all(b in adj[a] for a, b in itertools.combinations(sub, 2))
               for sub in itertools.combinations(range(1, g.n + 1), k))
