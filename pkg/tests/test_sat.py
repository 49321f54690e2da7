import itertools
import random

import pytest
from conftest import random_circuit, truth_table

from qsms.circuit import Circuit, Pool, simplify
from qsms.graph import cell_order
from qsms.sat import ContractViolation, Solver
from qsms.symmetry import find_violation
from qsms.tseitin import TseitinContext, cardinality_eq, cardinality_ge, cardinality_le


def brute_sat(clauses, nvars):
    for bits in itertools.product((False, True), repeat=nvars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def random_cnf(rng, nvars, nclauses, width=3):
    return [[rng.choice((1, -1)) * rng.randint(1, nvars) for _ in range(width)] for _ in range(nclauses)]


def projected_models(s, variables):
    """All assignments to ``variables`` extendable to a model (enumerated with blocking clauses)."""
    out = set()
    while s.solve():
        m = tuple(s.model_value(v) for v in variables)
        out.add(m)
        s.add_clause([-v if s.model_value(v) else v for v in variables])
    return out


def test_trivial_cases():
    s = Solver()
    assert s.solve()
    s = Solver()
    x = s.new_var()
    s.add_clause([x])
    assert not s.solve([-x])
    assert s.solve()
    assert s.model_value(x)
    s.add_clause([])
    assert not s.solve()


def test_tautology_is_ignored():
    s = Solver()
    x = s.new_var()
    s.add_clause([x, -x])
    assert not s.original
    assert s.solve([-x]) and s.solve([x])


def test_random_3cnf_against_brute_force():
    rng = random.Random(12)
    for _ in range(300):
        n = rng.randint(1, 12)
        cnf = random_cnf(rng, n, rng.randint(1, 5 * n))
        s = Solver()
        s.ensure_vars(n)
        for c in cnf:
            s.add_clause(c)
        res = s.solve()
        assert res == brute_sat(cnf, n)
        if res:
            assert all(any(s.model_value(l) for l in c) for c in cnf)


def test_assumptions_do_not_persist():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(2, 10)
        cnf = random_cnf(rng, n, rng.randint(1, 3 * n))
        s = Solver()
        s.ensure_vars(n)
        for c in cnf:
            s.add_clause(c)
        assumps = [rng.choice((1, -1)) * v for v in rng.sample(range(1, n + 1), rng.randint(1, n))]
        assert s.solve(assumps) == brute_sat(cnf + [[a] for a in assumps], n)
        assert s.solve() == brute_sat(cnf, n)


def test_incremental_unsat_is_permanent():
    s = Solver()
    x, y = s.new_var(), s.new_var()
    s.add_clause([x, y])
    s.add_clause([-x])
    s.add_clause([-y])
    assert not s.solve()
    s.add_clause([x, -y])
    assert not s.solve()


def test_blocking_clause_removes_one_model():
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(2, 7)
        cnf = random_cnf(rng, n, rng.randint(1, 2 * n))
        expect = {bits for bits in itertools.product((False, True), repeat=n)
                  if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in cnf)}
        s = Solver()
        s.ensure_vars(n)
        for c in cnf:
            s.add_clause(c)
        assert projected_models(s, list(range(1, n + 1))) == expect


def test_pigeonhole_unsat():
    for holes in (3, 4, 5):
        s = Solver()
        var = {(p, h): s.new_var() for p in range(holes + 1) for h in range(holes)}
        for p in range(holes + 1):
            s.add_clause([var[p, h] for h in range(holes)])
        for h in range(holes):
            for p, q in itertools.combinations(range(holes + 1), 2):
                s.add_clause([-var[p, h], -var[q, h]])
        assert not s.solve()


def test_callback_accept_all():
    s = Solver()
    s.ensure_vars(3)
    s.set_admissibility_callback(lambda solver: None)
    assert len(projected_models(s, [1, 2, 3])) == 8


def test_callback_rejects_variable():
    s = Solver()
    s.ensure_vars(3)
    s.set_admissibility_callback(lambda solver: [-1] if solver.lit_value(1) else None)
    models = projected_models(s, [1, 2, 3])
    assert len(models) == 4 and not any(m[0] for m in models)


def test_callback_contract_violation():
    s = Solver()
    s.ensure_vars(2)
    s.add_clause([1])
    s.set_admissibility_callback(lambda solver: [1])
    with pytest.raises(ContractViolation):
        s.solve()


@pytest.mark.parametrize("partial", [False, True])
def test_sms_callback_counts_classes(partial):
    n = 4
    order = cell_order(n)
    s = Solver()
    var = {c: s.new_var() for c in order.sequence}

    def cb(solver):
        adj = [[None] * (n + 1) for _ in range(n + 1)]
        for (i, j), v in var.items():
            x = solver.lit_value(v)
            if x is not None:
                adj[i][j] = adj[j][i] = int(x)
        found = find_violation(adj, n, order)
        if found is None:
            return None
        return [-var[c] if st else var[c] for c, st in found[1]]

    s.set_admissibility_callback(cb, partial=partial)
    assert len(projected_models(s, list(var.values()))) == 11


def test_seeded_runs_are_reproducible():
    rng = random.Random(6)
    cnf = random_cnf(rng, 12, 30)

    def run(seed):
        s = Solver(seed)
        s.ensure_vars(12)
        for c in cnf:
            s.add_clause(c)
        seq = []
        while s.solve() and len(seq) < 20:
            m = tuple(s.model[1:13])
            seq.append(m)
            s.add_clause([-(v + 1) if m[v] else v + 1 for v in range(12)])
        return seq

    assert run(3) == run(3)
    assert run(None) == run(None)


def test_dimacs_export():
    s = Solver()
    s.ensure_vars(2)
    s.add_clause([1, -2])
    assert s.to_dimacs() == "p cnf 2 1\n1 -2 0\n"


# --- Tseitin and cardinality ------------------------------------------------------------

def test_and_gate_clauses():
    pool = Pool()
    c = Circuit(pool, pool.and_([pool.var("x"), pool.var("y")]))
    s = Solver()
    ctx = TseitinContext(s)
    x, y = ctx.var("x"), ctx.var("y")
    g = ctx.encode(c)
    assert g not in (x, y)
    assert sorted(map(sorted, s.original)) == sorted(map(sorted, [[-g, x], [-g, y], [-x, -y, g]]))
    before = len(s.original)
    assert ctx.encode(c) == g
    assert len(s.original) == before


def test_structural_hashing_shares_or_and_negated_and():
    pool = Pool()
    a, b = pool.var("a"), pool.var("b")
    s = Solver()
    ctx = TseitinContext(s)
    g1 = ctx.encode(Circuit(pool, pool.or_([a, b])))
    g2 = ctx.encode(Circuit(pool, -pool.and_([-a, -b])))
    assert g1 == g2


def test_tseitin_preserves_projected_models():
    rng = random.Random(10)
    for _ in range(200):
        names = [f"v{i}" for i in range(rng.randint(1, 8))]
        c = simplify(random_circuit(rng, names, gates=rng.randint(1, 10)))
        s = Solver()
        ctx = TseitinContext(s)
        vs = [ctx.var(x) for x in names]
        s.add_clause([ctx.encode(c)])
        got = projected_models(s, vs)
        table = truth_table(c, names)
        want = {bits for bits, t in zip(itertools.product((False, True), repeat=len(names)), table) if t}
        assert got == want


def test_cardinality_le_single():
    s = Solver()
    x = s.new_var()
    cardinality_le([x], 0, s)
    assert not s.solve([x])


@pytest.mark.parametrize("n,k", [(4, 2), (5, 1), (5, 3), (6, 0), (3, 3)])
def test_cardinality_counts(n, k):
    from math import comb

    s = Solver()
    xs = [s.new_var() for _ in range(n)]
    cardinality_le(xs, k, s)
    assert len(projected_models(s, xs)) == sum(comb(n, j) for j in range(k + 1))
    s = Solver()
    xs = [s.new_var() for _ in range(n)]
    cardinality_eq(xs, k, s)
    assert len(projected_models(s, xs)) == comb(n, k)
    s = Solver()
    xs = [s.new_var() for _ in range(n)]
    cardinality_ge(xs, k, s)
    assert len(projected_models(s, xs)) == sum(comb(n, j) for j in range(k, n + 1))


def test_cardinality_eq_cubic_n4_is_k4():
    s = Solver()
    cells = list(itertools.combinations(range(1, 5), 2))
    var = {c: s.new_var() for c in cells}
    for v in range(1, 5):
        cardinality_eq([var[c] for c in cells if v in c], 3, s)
    models = projected_models(s, [var[c] for c in cells])
    assert models == {(True,) * 6}


def test_cardinality_rejects_bad_k():
    s = Solver()
    xs = [s.new_var() for _ in range(3)]
    with pytest.raises(ValueError):
        cardinality_eq(xs, 4, s)
    with pytest.raises(ValueError):
        cardinality_le(xs, -1, s)
