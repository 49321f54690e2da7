"""QCIR-G14 reading and writing (and/or gates only, at most free+exists+forall)."""

from __future__ import annotations

import re

from .circuit import AND, OR, VAR, Circuit, Pool, Qbf, QbfError, topo_order

HEADER = "#QCIR-G14"
_IDENT = re.compile(r"^[A-Za-z0-9_]+$")
_QUANT = re.compile(r"^(free|exists|forall)\s*\((.*)\)$")
_OUTPUT = re.compile(r"^output\s*\((.*)\)$")
_GATE = re.compile(r"^([A-Za-z0-9_]+)\s*=\s*([A-Za-z]+)\s*\((.*)\)$")


class QcirError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _split_args(text, lineno):
    text = text.strip()
    if not text:
        return []
    args = [a.strip() for a in text.split(",")]
    for a in args:
        name = a[1:] if a.startswith("-") else a
        if not _IDENT.match(name):
            raise QcirError(f"bad identifier {a!r}", lineno)
    return args


def parse_qcir(text: str, pool: Pool | None = None) -> Qbf:
    pool = pool if pool is not None else Pool()
    lines = text.splitlines()
    if not lines or lines[0].strip().split()[0:1] != [HEADER]:
        raise QcirError(f"missing {HEADER} header", 1)

    blocks = []  # (kind, names, lineno)
    output = None
    gates = {}  # name -> (op, args, lineno)
    declared = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _QUANT.match(line)
        if m:
            if output is not None or gates:
                raise QcirError("quantifier block after the output/gates", lineno)
            names = _split_args(m.group(2), lineno)
            for nm in names:
                if nm.startswith("-"):
                    raise QcirError(f"negated name {nm!r} in prefix", lineno)
                if nm in declared:
                    raise QcirError(f"variable {nm!r} quantified twice", lineno)
                declared[nm] = m.group(1)
            blocks.append((m.group(1), names, lineno))
            continue
        m = _OUTPUT.match(line)
        if m:
            if output is not None:
                raise QcirError("second output line", lineno)
            args = _split_args(m.group(1), lineno)
            if len(args) != 1:
                raise QcirError("output takes exactly one literal", lineno)
            output = (args[0], lineno)
            continue
        m = _GATE.match(line)
        if m:
            name, op, body = m.group(1), m.group(2).lower(), m.group(3)
            if op not in (AND, OR):
                raise QcirError(f"unsupported gate type {op!r}", lineno)
            if name in gates:
                raise QcirError(f"gate {name!r} redefined", lineno)
            if name in declared:
                raise QcirError(f"gate {name!r} clashes with a quantified variable", lineno)
            gates[name] = (op, _split_args(body, lineno), lineno)
            continue
        raise QcirError(f"cannot parse {line!r}", lineno)
    if output is None:
        raise QcirError("missing output line", len(lines))

    # prefix shape: [free] [exists] [forall], same-kind neighbours merged
    merged = []
    for kind, names, lineno in blocks:
        if merged and merged[-1][0] == kind:
            merged[-1][1].extend(names)
        else:
            merged.append((kind, list(names), lineno))
    shape = [k for k, _, _ in merged]
    rank = {"free": 0, "exists": 1, "forall": 2}
    if "free" in shape[1:]:
        raise QcirError("free block must come first", merged[shape.index("free", 1)][2])
    if any(rank[a] >= rank[b] for a, b in zip(shape, shape[1:])):
        bad = next(i for i, (a, b) in enumerate(zip(shape, shape[1:]), 1) if rank[a] >= rank[b])
        raise QcirError("only exists-forall prefixes (2-QBF) are supported", merged[bad][2])
    prefix = {k: tuple(names) for k, names, _ in merged}

    built = {}
    state = {}

    def resolve(arg, lineno):
        neg = arg.startswith("-")
        name = arg[1:] if neg else arg
        if name in gates:
            lit = build(name)
        elif name in declared:
            lit = pool.var(name)
        else:
            raise QcirError(f"undeclared variable {name!r}", lineno)
        return -lit if neg else lit

    def build(name):
        if name in built:
            return built[name]
        op, args, lineno = gates[name]
        if state.get(name) == "open":
            raise QcirError(f"cyclic definition through gate {name!r}", lineno)
        state[name] = "open"
        lits = [resolve(a, lineno) for a in args]
        lit = pool.and_(lits) if op == AND else pool.or_(lits)
        state[name] = "done"
        built[name] = lit
        return lit

    # definition order keeps recursion shallow for topologically sorted files
    for name in gates:
        build(name)
    out = resolve(*output)
    try:
        return Qbf(prefix.get("free", ()), prefix.get("exists", ()), prefix.get("forall", ()), Circuit(pool, out))
    except QbfError as e:
        raise QcirError(str(e)) from None


def emit_qcir(q: Qbf) -> str:
    pool = q.pool
    nodes = pool.nodes
    var_names = set(q.free) | set(q.exists) | set(q.forall)
    prefix = "g"
    while any(v.startswith(prefix) and v[len(prefix):].isdigit() for v in var_names):
        prefix = "_" + prefix
    out = [HEADER]
    for kind, names in (("free", q.free), ("exists", q.exists), ("forall", q.forall)):
        if names:
            out.append(f"{kind}({', '.join(names)})")

    order = topo_order(pool, [q.matrix.output])
    names = {}
    body = []
    for nid in order:
        kind, payload = nodes[nid]
        if kind == VAR:
            names[nid] = payload
            continue
        gname = f"{prefix}{len(body) + 1}"
        names[nid] = gname
        args = ", ".join(names[ch] if ch > 0 else "-" + names[-ch] for ch in payload)
        body.append(f"{gname} = {kind}({args})")
    o = q.matrix.output
    out.append(f"output({'' if o > 0 else '-'}{names[abs(o)]})")
    out.extend(body)
    return "\n".join(out) + "\n"
