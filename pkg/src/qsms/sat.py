"""A compact incremental CDCL SAT solver.

Literals use the DIMACS convention at the interface (``v`` / ``-v``).
Internally literal ``v`` is ``2*v`` and ``-v`` is ``2*v + 1``.

Features: two watched literals (with a separate binary-clause index),
first-UIP learning with local minimisation, VSIDS branching with phase saving
(initial phase false), Luby restarts, LBD-based learnt clause reduction,
assumptions, and an admissibility callback that may reject a model by
returning a clause the model falsifies.
"""

from __future__ import annotations

import heapq
import random
from typing import Callable, Iterable, Sequence


class ContractViolation(RuntimeError):
    """A callback returned a clause that the current assignment satisfies."""


def _luby(x):
    """Element ``x`` (0-based) of the Luby restart sequence."""
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return 1 << seq


class Solver:
    """Incremental CDCL solver; see module docstring."""

    def __init__(self, seed: int | None = None):
        self.nvars = 0
        self.val = [0, 0]          # per internal literal: 1 true, -1 false, 0 unassigned
        self.level = [0]
        self.reason = [None]
        self.activity = [0.0]
        self.phase = [False]
        self.watches = [[], []]
        self.bins = [[], []]
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.heap = []
        self.var_inc = 1.0
        self.var_decay = 0.95
        self.ok = True
        self.learnts = []
        self.lbd = {}
        self.original = []          # DIMACS clauses, for export
        self.model = None
        self.callback = None
        self.partial_callback = False
        self._rng = random.Random(seed) if seed else None
        self.max_learnts = 4000
        self.stats = {"conflicts": 0, "decisions": 0, "propagations": 0, "restarts": 0,
                      "callback_calls": 0, "callback_rejections": 0, "solves": 0}

    # --- variables and clauses ----------------------------------------------
    def new_var(self) -> int:
        self.nvars += 1
        v = self.nvars
        self.val.extend((0, 0))
        self.level.append(0)
        self.reason.append(None)
        act = self._rng.random() * 1e-5 if self._rng else 0.0
        self.activity.append(act)
        self.phase.append(False)
        self.watches.extend(([], []))
        self.bins.extend(([], []))
        heapq.heappush(self.heap, (-act, v))
        return v

    def ensure_vars(self, n):
        while self.nvars < n:
            self.new_var()

    @staticmethod
    def _ilit(lit):
        return 2 * lit if lit > 0 else -2 * lit + 1

    @staticmethod
    def _dlit(ilit):
        return ilit >> 1 if not ilit & 1 else -(ilit >> 1)

    def value(self, var: int):
        """Current value of ``var``: True, False or None."""
        x = self.val[2 * var]
        return None if x == 0 else x > 0

    def lit_value(self, lit: int):
        x = self.val[self._ilit(lit)]
        return None if x == 0 else x > 0

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Conjoin a clause. Tautologies are dropped; returns False once unsat."""
        lits = list(lits)
        if not self.ok:
            return False
        seen = set()
        out = []
        for l in lits:
            if l == 0:
                raise ValueError("literal 0 is not allowed")
            if -l in seen:
                return True
            if l not in seen:
                seen.add(l)
                out.append(l)
        if out:
            self.ensure_vars(max(abs(l) for l in out))
        self.original.append(out)
        if self.trail_lim:
            self._cancel_until(0)
        val = self.val
        cl = []
        for l in out:
            il = self._ilit(l)
            if val[il] == 1:
                return True
            if val[il] == 0:
                cl.append(il)
        if not cl:
            self.ok = False
            return False
        if len(cl) == 1:
            self._assign(cl[0], None)
            if self._propagate() is not None:
                self.ok = False
                return False
            return True
        self._attach(cl)
        return True

    def _attach(self, cl):
        if len(cl) == 2:
            self.bins[cl[0]].append(cl[1])
            self.bins[cl[1]].append(cl[0])
        else:
            self.watches[cl[0]].append(cl)
            self.watches[cl[1]].append(cl)

    def set_admissibility_callback(self, f: Callable | None, partial: bool = False):
        """Register ``f(solver) -> None | clause``.

        ``f`` is called on every total model (and, with ``partial=True``, also
        at propagation fixpoints before each decision).  Returning a clause
        rejects the current assignment; the clause must be falsified by it.
        """
        self.callback = f
        self.partial_callback = partial

    # --- core ---------------------------------------------------------------
    def _assign(self, il, reason):
        v = il >> 1
        self.val[il] = 1
        self.val[il ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(il)

    def _propagate(self):
        """Unit propagation; returns a conflicting clause (list) or None."""
        val = self.val
        watches = self.watches
        bins = self.bins
        trail = self.trail
        level = self.level
        reason = self.reason
        lvl = len(self.trail_lim)
        qhead = self.qhead
        props = 0
        conflict = None
        while qhead < len(trail):
            p = trail[qhead]
            qhead += 1
            props += 1
            fl = p ^ 1
            for other in bins[fl]:
                x = val[other]
                if x == 1:
                    continue
                if x == -1:
                    conflict = [other, fl]
                    break
                val[other] = 1
                val[other ^ 1] = -1
                v = other >> 1
                level[v] = lvl
                reason[v] = [other, fl]
                trail.append(other)
            if conflict is not None:
                break
            ws = watches[fl]
            i = 0
            j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if not c:
                    continue  # deleted clause
                if c[0] == fl:
                    c[0] = c[1]
                    c[1] = fl
                first = c[0]
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = fl
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        conflict = c
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        break
                    val[first] = 1
                    val[first ^ 1] = -1
                    v = first >> 1
                    level[v] = lvl
                    reason[v] = c
                    trail.append(first)
            del ws[j:]
            if conflict is not None:
                break
        self.qhead = qhead if conflict is None else len(trail)
        self.stats["propagations"] += props
        return conflict

    def _cancel_until(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        val = self.val
        phase = self.phase
        heap = self.heap
        act = self.activity
        trail = self.trail
        stop = self.trail_lim[lvl]
        for k in range(len(trail) - 1, stop - 1, -1):
            il = trail[k]
            v = il >> 1
            val[il] = 0
            val[il ^ 1] = 0
            self.reason[v] = None
            phase[v] = not (il & 1)
            heapq.heappush(heap, (-act[v], v))
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(trail)

    def _bump(self, v):
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for k in range(1, self.nvars + 1):
                act[k] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[k], k) for k in range(1, self.nvars + 1) if self.val[2 * k] == 0]
            heapq.heapify(self.heap)
        elif self.val[2 * v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _analyze(self, confl):
        """First-UIP conflict analysis. Returns (learnt internal lits, backjump level)."""
        level = self.level
        reason = self.reason
        trail = self.trail
        cur = len(self.trail_lim)
        seen = set()
        learnt = [0]
        counter = 0
        p = None
        idx = len(trail) - 1
        c = confl
        while True:
            for q in c:
                if p is not None and q == p:
                    continue
                v = q >> 1
                if v in seen or level[v] == 0:
                    continue
                seen.add(v)
                self._bump(v)
                if level[v] == cur:
                    counter += 1
                else:
                    learnt.append(q)
            while (trail[idx] >> 1) not in seen:
                idx -= 1
            p = trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            c = reason[p >> 1]
        learnt[0] = p ^ 1
        # local minimisation: drop literals implied by other learnt literals
        keep = [learnt[0]]
        lits_vars = {l >> 1 for l in learnt}
        for l in learnt[1:]:
            r = reason[l >> 1]
            if r is None:
                keep.append(l)
                continue
            if all((q >> 1) in lits_vars or level[q >> 1] == 0 for q in r if q != (l ^ 1)):
                continue
            keep.append(l)
        learnt = keep
        if len(learnt) == 1:
            bt = 0
        else:
            mi = 1
            for k in range(2, len(learnt)):
                if level[learnt[k] >> 1] > level[learnt[mi] >> 1]:
                    mi = k
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
            bt = level[learnt[1] >> 1]
        self.var_inc /= self.var_decay
        return learnt, bt

    def _learn(self, learnt, bt):
        self._cancel_until(bt)
        if len(learnt) == 1:
            self._assign(learnt[0], None)
            return
        self._attach(learnt)
        if len(learnt) > 2:
            self.learnts.append(learnt)
            self.lbd[id(learnt)] = len({self.level[l >> 1] for l in learnt})
        self._assign(learnt[0], learnt if len(learnt) > 2 else [learnt[0], learnt[1]])

    def _reduce_db(self):
        lbd = self.lbd
        reason = self.reason
        locked = set()
        for il in self.trail:
            r = reason[il >> 1]
            if r is not None:
                locked.add(id(r))
        self.learnts.sort(key=lambda c: lbd.get(id(c), 99))
        half = len(self.learnts) // 2
        keep = self.learnts[:half]
        for c in self.learnts[half:]:
            if lbd.get(id(c), 99) <= 2 or id(c) in locked:
                keep.append(c)
            else:
                lbd.pop(id(c), None)
                c.clear()
        self.learnts = keep
        self.max_learnts = int(self.max_learnts * 1.1)

    def _handle_external(self, clause):
        """Install a falsified clause from the callback and resolve the conflict.

        Returns False if the database became unsatisfiable.
        """
        ils = []
        seen = set()
        for l in clause:
            il = self._ilit(l)
            if il in seen:
                continue
            seen.add(il)
            if self.val[il] != -1:
                raise ContractViolation(f"callback clause {clause} is not falsified by the current assignment")
            ils.append(il)
        self.original.append(list(clause))
        if not ils:
            self.ok = False
            return False
        level = self.level
        ils.sort(key=lambda il: -level[il >> 1])
        top = level[ils[0] >> 1]
        if top == 0:
            self.ok = False
            return False
        self._cancel_until(top)
        if len(ils) == 1:
            self._cancel_until(0)
            self._assign(ils[0], None)
            return True
        if level[ils[1] >> 1] < top:
            bt = level[ils[1] >> 1]
            self._cancel_until(bt)
            self._attach(ils)
            self._assign(ils[0], ils if len(ils) > 2 else [ils[0], ils[1]])
            return True
        self._attach(ils)
        self.stats["conflicts"] += 1
        learnt, bt = self._analyze(ils)
        self._learn(learnt, bt)
        return True

    def _pick_branch(self):
        val = self.val
        act = self.activity
        if len(self.heap) > 8 * self.nvars + 1000:
            self.heap = [(-act[k], k) for k in range(1, self.nvars + 1) if val[2 * k] == 0]
            heapq.heapify(self.heap)
        heap = self.heap
        while heap:
            a, v = heapq.heappop(heap)
            if val[2 * v] == 0 and -a == act[v]:
                return v
        for v in range(1, self.nvars + 1):
            if val[2 * v] == 0:
                return v
        return 0

    def solve(self, assumptions: Sequence[int] = ()) -> bool:
        """Search for a model consistent with ``assumptions``.

        On success the model is in ``self.model`` (list of bools, index 0
        unused); the solver returns to decision level 0 either way.
        """
        self.stats["solves"] += 1
        self.model = None
        if not self.ok:
            return False
        for a in assumptions:
            self.ensure_vars(abs(a))
        assumps = [self._ilit(a) for a in assumptions]
        self._cancel_until(0)
        if self._propagate() is not None:
            self.ok = False
            return False
        restart_no = 0
        try:
            while True:
                budget = 100 * _luby(restart_no)
                restart_no += 1
                result = self._search(budget, assumps)
                if result is not None:
                    return result
                self.stats["restarts"] += 1
                self._cancel_until(0)
        finally:
            self._cancel_until(0)

    def _search(self, budget, assumps):
        conflicts = 0
        nassump = len(assumps)
        while True:
            confl = self._propagate()
            if confl is not None:
                self.stats["conflicts"] += 1
                conflicts += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, bt = self._analyze(confl)
                self._learn(learnt, bt)
                continue
            if conflicts >= budget:
                return None
            if len(self.learnts) - len(self.trail) > self.max_learnts:
                self._reduce_db()
            if self.partial_callback and self.callback is not None and len(self.trail_lim) >= nassump:
                self.stats["callback_calls"] += 1
                clause = self.callback(self)
                if clause is not None:
                    self.stats["callback_rejections"] += 1
                    if not self._handle_external(clause):
                        return False
                    continue
            # assumptions first
            nxt = None
            while len(self.trail_lim) < nassump:
                a = assumps[len(self.trail_lim)]
                x = self.val[a]
                if x == 1:
                    self.trail_lim.append(len(self.trail))
                elif x == -1:
                    return False
                else:
                    nxt = a
                    break
            if nxt is None:
                v = self._pick_branch()
                if v == 0:
                    if self.callback is not None:
                        self.stats["callback_calls"] += 1
                        clause = self.callback(self)
                        if clause is not None:
                            self.stats["callback_rejections"] += 1
                            if not self._handle_external(clause):
                                return False
                            continue
                    self.model = [False] + [self.val[2 * k] > 0 for k in range(1, self.nvars + 1)]
                    return True
                nxt = 2 * v + (0 if self.phase[v] else 1)
                self.stats["decisions"] += 1
            self.trail_lim.append(len(self.trail))
            self._assign(nxt, None)

    # --- utilities ------------------------------------------------------------
    def model_value(self, lit: int) -> bool:
        v = self.model[abs(lit)]
        return v if lit > 0 else not v

    def to_dimacs(self) -> str:
        out = [f"p cnf {self.nvars} {len(self.original)}"]
        out.extend(" ".join(map(str, c)) + " 0" for c in self.original)
        return "\n".join(out) + "\n"
