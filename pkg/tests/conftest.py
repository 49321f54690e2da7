import itertools
import random

import pytest

from qsms.circuit import Circuit, Pool, Qbf, evaluate


def random_circuit(rng, names, pool=None, gates=8, max_arity=3):
    """Random and/or DAG over ``names``; constants and repeats allowed on purpose."""
    pool = pool if pool is not None else Pool()
    lits = [pool.var(x) for x in names] + [1]
    for _ in range(gates):
        k = rng.randint(0, max_arity)
        children = [rng.choice(lits) * rng.choice((1, -1)) for _ in range(k)]
        g = pool.and_(children) if rng.random() < 0.5 else pool.or_(children)
        lits.append(g)
    return Circuit(pool, lits[-1] * rng.choice((1, -1)))


def truth_table(c, names):
    return [evaluate(c, dict(zip(names, bits))) for bits in itertools.product((0, 1), repeat=len(names))]


def random_qbf(rng, nx=None, ny=None, nfree=0, gates=None):
    nx = rng.randint(0, 4) if nx is None else nx
    ny = rng.randint(0, 4) if ny is None else ny
    free = [f"f{i}" for i in range(nfree)]
    X = [f"x{i}" for i in range(nx)]
    Y = [f"y{i}" for i in range(ny)]
    names = free + X + Y
    if not names:
        names, X = ["x0"], ["x0"]
    c = random_circuit(rng, names, gates=gates or rng.randint(1, 10))
    return Qbf(free, X, Y, c)


def qbf_truth_by_expansion(q, free_assignment=None):
    """Straight recursive expansion; independent of the oracle's vectorised version."""
    fixed = dict(free_assignment or {})
    X = [x for x in q.free if x not in fixed] + list(q.exists)
    Y = list(q.forall)
    for xs in itertools.product((0, 1), repeat=len(X)):
        a = dict(fixed, **dict(zip(X, xs)))
        if all(evaluate(q.matrix, dict(a, **dict(zip(Y, ys)))) for ys in itertools.product((0, 1), repeat=len(Y))):
            return True
    return False


def rng_for(seed):
    return random.Random(seed)



# --- acceptance reporting ------------------------------------------------------------

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _CRITERIA[mark.args[0]] = (report.passed, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, secs = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({secs:.1f} s)")
