"""Finite ordered algebras: validation, evaluation, homomorphisms, quotients.

Carriers are ordered lists of element names.  Wherever a quotient has to
name a class, the representative is the earliest-listed element, so all
outputs are deterministic and diffable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path as FsPath

from . import relations
from .errors import (
    NotACongruence,
    NotAHomomorphism,
    NotCompatibleQuasiorder,
    NotOrderCongruence,
    ParseError,
    PreconditionFailed,
    SizeLimit,
    UnboundVariable,
    ValidationError,
)
from .signature import Signature, parse_signature
from .terms import Term

MAX_CARRIER = 64
MAX_PRODUCT = 10_000

Rel = frozenset


class OrderedAlgebra:
    """A finite carrier with a partial order, total op tables and constants."""

    def __init__(self, sig: Signature, carrier: list[str], order,
                 op_tables: dict[str, dict[tuple[str, ...], str]],
                 const_vals: dict[str, str], name: str = "A"):
        if len(carrier) > MAX_CARRIER:
            raise SizeLimit(f"carrier too large ({len(carrier)} > {MAX_CARRIER})")
        if len(set(carrier)) != len(carrier):
            raise ValidationError("carrier has duplicate element names")
        self.sig = sig
        self.carrier = list(carrier)
        self.name = name
        self.index = {e: i for i, e in enumerate(carrier)}
        closed = relations.reflexive_transitive_closure(order, carrier)
        bad = relations.antisymmetry_violations(closed)
        if bad:
            raise ValidationError(f"order is not antisymmetric: {bad[0]}")
        for (a, b) in closed:
            if a not in self.index or b not in self.index:
                raise ValidationError(f"order pair {(a, b)} outside the carrier")
        self.order: Rel = closed
        self.op_tables = {f: dict(tbl) for f, tbl in op_tables.items()}
        self.const_vals = dict(const_vals)
        self._check_totality()

    def _check_totality(self):
        for f, k in self.sig.ops.items():
            if k == 0:
                if f not in self.const_vals:
                    raise ValidationError(f"constant {f!r} has no value")
                if self.const_vals[f] not in self.index:
                    raise ValidationError(f"constant {f!r} maps outside the carrier")
                continue
            tbl = self.op_tables.get(f)
            if tbl is None:
                raise ValidationError(f"missing table for {f!r}")
            for args in itertools.product(self.carrier, repeat=k):
                if args not in tbl:
                    raise ValidationError(f"table of {f!r} missing entry {args}")
                if tbl[args] not in self.index:
                    raise ValidationError(f"table of {f!r} maps {args} outside the carrier")

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.order

    def op(self, f: str, args: tuple[str, ...]) -> str:
        return self.op_tables[f][args]

    def const(self, c: str) -> str:
        return self.const_vals[c]

    def up_set(self, a: str) -> list[str]:
        return [b for b in self.carrier if self.leq(a, b)]

    def __repr__(self):
        return f"OrderedAlgebra({self.name}, |{len(self.carrier)}|)"


@dataclass
class Homomorphism:
    dom: OrderedAlgebra
    cod: OrderedAlgebra
    map: dict[str, str]

    def __call__(self, a: str) -> str:
        return self.map[a]

    def image(self) -> list[str]:
        seen = set(self.map.values())
        return [e for e in self.cod.carrier if e in seen]


def validate_algebra(alg: OrderedAlgebra) -> list[dict]:
    """Exhaustive membership report for the constant-inequality variety.

    Each entry records one violated monotonicity instance or one violated
    constant inequality.  An empty report means the algebra belongs to the
    variety.  Violations are data, not exceptions: the tool is a checker.
    """
    report = []
    for f, k in alg.sig.ops.items():
        if k == 0:
            continue
        tbl = alg.op_tables[f]
        for xs in itertools.product(alg.carrier, repeat=k):
            for ys in itertools.product(alg.carrier, repeat=k):
                if all(alg.leq(x, y) for x, y in zip(xs, ys)):
                    if not alg.leq(tbl[xs], tbl[ys]):
                        report.append({"kind": "monotonicity", "op": f,
                                       "lhs": xs, "rhs": ys,
                                       "lhs_val": tbl[xs], "rhs_val": tbl[ys]})
    for (c, d) in sorted(alg.sig.const_order):
        if c != d and not alg.leq(alg.const(c), alg.const(d)):
            report.append({"kind": "constant", "left": c, "right": d,
                           "left_val": alg.const(c), "right_val": alg.const(d)})
    return report


def evaluate(alg: OrderedAlgebra, t: Term, env: dict[str, str]) -> str:
    """Evaluate a term; variables come from env, constants from the algebra."""
    if t.is_leaf:
        l = t.label
        if alg.sig.has(l):
            return alg.const(l)
        if l not in env:
            raise UnboundVariable(f"variable {l!r} not bound")
        return env[l]
    return alg.op(t.label, tuple(evaluate(alg, c, env) for c in t.children))


def check_homomorphism(h: Homomorphism) -> dict[str, bool]:
    a, b, m = h.dom, h.cod, h.map
    is_hom = True
    for f, k in a.sig.ops.items():
        if k == 0:
            if m[a.const(f)] != b.const(f):
                is_hom = False
            continue
        for args in itertools.product(a.carrier, repeat=k):
            if m[a.op(f, args)] != b.op(f, tuple(m[x] for x in args)):
                is_hom = False
                break
        if not is_hom:
            break
    is_monotone = all(b.leq(m[x], m[y]) for (x, y) in a.order)
    is_embedding = is_monotone and all(
        a.leq(x, y)
        for x in a.carrier for y in a.carrier
        if b.leq(m[x], m[y]))
    return {"is_hom": is_hom, "is_monotone": is_monotone,
            "is_order_embedding": is_embedding}


def directed_kernel(h: Homomorphism) -> Rel:
    """All pairs the codomain orders after mapping; a compatible quasiorder."""
    flags = check_homomorphism(h)
    if not (flags["is_hom"] and flags["is_monotone"]):
        raise NotAHomomorphism("directed kernel needs a monotone homomorphism")
    return frozenset((x, y)
                     for x in h.dom.carrier for y in h.dom.carrier
                     if h.cod.leq(h.map[x], h.map[y]))


def kernel(h: Homomorphism) -> Rel:
    k = directed_kernel(h)
    return k & relations.inverse(k)


def is_congruence(alg: OrderedAlgebra, theta: Rel) -> bool:
    """Equivalence compatible with the ops of the unordered reduct."""
    carrier = alg.carrier
    if not relations.is_reflexive(theta, carrier):
        return False
    if theta != relations.inverse(theta):
        return False
    if not relations.is_transitive(theta):
        return False
    for f, k in alg.sig.ops.items():
        if k == 0:
            continue
        for args in itertools.product(carrier, repeat=k):
            for i in range(k):
                for b in carrier:
                    if (args[i], b) in theta:
                        other = args[:i] + (b,) + args[i + 1:]
                        if (alg.op(f, args), alg.op(f, other)) not in theta:
                            return False
    return True


def leq_theta(alg: OrderedAlgebra, theta: Rel) -> Rel:
    """Smallest quasiorder containing the order and the congruence.

    Computed as the transitive closure of their union, which equals the
    alternating-chain description because both relations are reflexive.
    """
    if not is_congruence(alg, theta):
        raise NotACongruence("relation is not a congruence of the reduct")
    return relations.transitive_closure(alg.order | theta)


def is_order_congruence(alg: OrderedAlgebra, theta: Rel) -> bool:
    """Closed chain condition: mutually leq-theta-related elements are glued."""
    lt = leq_theta(alg, theta)
    return all((a, b) in theta
               for (a, b) in lt if (b, a) in lt)


def is_compatible_quasiorder(alg: OrderedAlgebra, sigma: Rel) -> bool:
    carrier = alg.carrier
    if not relations.is_reflexive(sigma, carrier):
        return False
    if not relations.is_transitive(sigma):
        return False
    if not alg.order <= sigma:
        return False
    for f, k in alg.sig.ops.items():
        if k == 0:
            continue
        for args in itertools.product(carrier, repeat=k):
            for i in range(k):
                for b in carrier:
                    if (args[i], b) in sigma:
                        other = args[:i] + (b,) + args[i + 1:]
                        if (alg.op(f, args), alg.op(f, other)) not in sigma:
                            return False
    return True


def _class_map(alg: OrderedAlgebra, eq: Rel) -> tuple[list[list[str]], dict[str, str]]:
    blocks = relations.pairs_to_blocks(eq, alg.carrier)
    rep = {}
    for block in blocks:
        for e in block:
            rep[e] = block[0]
    return blocks, rep


def _quotient_name(representative: str) -> str:
    return f"[{representative}]"


def _quotient_algebra(alg: OrderedAlgebra, eq: Rel, order_source: Rel,
                      name: str) -> tuple[OrderedAlgebra, Homomorphism]:
    """Quotient carrier and tables; order projected from order_source pairs."""
    blocks, rep = _class_map(alg, eq)
    carrier = [_quotient_name(b[0]) for b in blocks]
    cname = {e: _quotient_name(rep[e]) for e in alg.carrier}
    order = {(cname[a], cname[b]) for (a, b) in order_source}
    tables: dict[str, dict[tuple[str, ...], str]] = {}
    reps = [b[0] for b in blocks]
    for f, k in alg.sig.ops.items():
        if k == 0:
            continue
        tbl = {}
        for args in itertools.product(reps, repeat=k):
            tbl[tuple(cname[a] for a in args)] = cname[alg.op(f, args)]
        tables[f] = tbl
    consts = {c: cname[v] for c, v in alg.const_vals.items()}
    q = OrderedAlgebra(alg.sig, carrier, order, tables, consts, name=name)
    nat = Homomorphism(alg, q, cname)
    return q, nat


def regular_quotient(alg: OrderedAlgebra, theta: Rel) -> tuple[OrderedAlgebra, Homomorphism]:
    """Quotient by an order-congruence, ordered by the projected chain relation.

    The projected order is the coarsest compatible order making the natural
    map monotone; the closed chain condition makes it antisymmetric.
    """
    if not is_congruence(alg, theta):
        raise NotOrderCongruence("not a congruence")
    if not is_order_congruence(alg, theta):
        raise NotOrderCongruence("congruence fails the closed chain condition")
    return _quotient_algebra(alg, theta, leq_theta(alg, theta),
                             name=f"{alg.name}/theta")


def nonregular_quotient(alg: OrderedAlgebra, sigma: Rel) -> OrderedAlgebra:
    """Quotient by a compatible quasiorder; classes of sigma & sigma^-1, order from sigma."""
    if not is_compatible_quasiorder(alg, sigma):
        raise NotCompatibleQuasiorder("relation is not a compatible quasiorder")
    eq = sigma & relations.inverse(sigma)
    q, _ = _quotient_algebra(alg, eq, sigma, name=f"{alg.name}/sigma")
    return q


def factor_through(f: Homomorphism, theta: Rel) -> Homomorphism:
    """The unique map g from the quotient with g after the natural map = f."""
    alg = f.dom
    lt = leq_theta(alg, theta)
    dk = directed_kernel(f)
    missing = sorted(set(lt) - set(dk))
    if missing:
        raise PreconditionFailed(
            f"leq-theta pair {missing[0]} is not in the directed kernel")
    q, nat = regular_quotient(alg, theta)
    gmap: dict[str, str] = {}
    for e in alg.carrier:
        cls = nat.map[e]
        val = f.map[e]
        if cls in gmap and gmap[cls] != val:
            raise PreconditionFailed(
                f"representatives of {cls} disagree under f")
        gmap.setdefault(cls, val)
    return Homomorphism(q, f.cod, gmap)


def product(algebras: list[OrderedAlgebra]) -> OrderedAlgebra:
    """Componentwise product; the empty product is the one-element algebra."""
    if not algebras:
        raise ValueError("need a signature for the empty product; use terminal(sig)")
    sig = algebras[0].sig
    for a in algebras[1:]:
        if a.sig.ops != sig.ops or a.sig.const_order != sig.const_order:
            raise ValidationError("product factors have different signatures")
    size = 1
    for a in algebras:
        size *= len(a.carrier)
    if size > MAX_PRODUCT:
        raise SizeLimit(f"product carrier would have {size} elements")
    tuples = list(itertools.product(*[a.carrier for a in algebras]))
    name_of = {t: "(" + ",".join(t) + ")" for t in tuples}
    carrier = [name_of[t] for t in tuples]
    order = {(name_of[s], name_of[t])
             for s in tuples for t in tuples
             if all(a.leq(x, y) for a, x, y in zip(algebras, s, t))}
    tables: dict[str, dict[tuple[str, ...], str]] = {}
    for f, k in sig.ops.items():
        if k == 0:
            continue
        tbl = {}
        for args in itertools.product(tuples, repeat=k):
            res = tuple(a.op(f, tuple(arg[i] for arg in args))
                        for i, a in enumerate(algebras))
            tbl[tuple(name_of[x] for x in args)] = name_of[res]
        tables[f] = tbl
    consts = {c: name_of[tuple(a.const(c) for a in algebras)]
              for c in sig.constants()}
    return OrderedAlgebra(sig, carrier, order, tables, consts,
                          name="x".join(a.name for a in algebras))


def terminal(sig: Signature) -> OrderedAlgebra:
    """One-element algebra; the empty product."""
    e = "()"
    tables = {f: {tuple([e] * k): e} for f, k in sig.ops.items() if k > 0}
    consts = {c: e for c in sig.constants()}
    return OrderedAlgebra(sig, [e], {(e, e)}, tables, consts, name="1")


def generated_subalgebra(alg: OrderedAlgebra, seed) -> list[str]:
    """Closure of seed plus all constants under every operation table."""
    current = {alg.const(c) for c in alg.sig.constants()}
    current.update(seed)
    changed = True
    while changed:
        changed = False
        for f, k in alg.sig.ops.items():
            if k == 0:
                continue
            for args in itertools.product(sorted(current, key=alg.index.get), repeat=k):
                v = alg.op(f, args)
                if v not in current:
                    current.add(v)
                    changed = True
    return [e for e in alg.carrier if e in current]


def subalgebra(alg: OrderedAlgebra, subset: list[str], name: str | None = None) -> OrderedAlgebra:
    """The subalgebra on a closed subset, with the restricted order."""
    sub = set(subset)
    carrier = [e for e in alg.carrier if e in sub]
    order = {(a, b) for (a, b) in alg.order if a in sub and b in sub}
    tables = {}
    for f, k in alg.sig.ops.items():
        if k == 0:
            continue
        tbl = {}
        for args in itertools.product(carrier, repeat=k):
            v = alg.op(f, args)
            if v not in sub:
                raise ValidationError(f"subset not closed: {f}{args} = {v}")
            tbl[args] = v
        tables[f] = tbl
    consts = {}
    for c in alg.sig.constants():
        v = alg.const(c)
        if v not in sub:
            raise ValidationError(f"subset misses the constant value {v}")
        consts[c] = v
    return OrderedAlgebra(alg.sig, carrier, order, tables, consts,
                          name=name or f"{alg.name}|{len(carrier)}")


def all_congruences(alg: OrderedAlgebra) -> list[Rel]:
    """Every congruence of the unordered reduct, by partition enumeration."""
    out = []
    for part in relations.all_partitions(alg.carrier):
        theta = relations.partition_to_pairs(part)
        if is_congruence(alg, theta):
            out.append(theta)
    return out


def all_homomorphisms(dom: OrderedAlgebra, cod: OrderedAlgebra) -> list[Homomorphism]:
    """Every homomorphism of ordered algebras between two small carriers."""
    out = []
    strict_order = [(a, b) for (a, b) in dom.order if a != b]
    op_items = [(f, k) for f, k in dom.sig.ops.items() if k > 0]
    consts = dom.sig.constants()
    tuples_by_op = {f: list(itertools.product(dom.carrier, repeat=k))
                    for f, k in op_items}
    for values in itertools.product(cod.carrier, repeat=len(dom.carrier)):
        m = dict(zip(dom.carrier, values))
        if any(m[dom.const(c)] != cod.const(c) for c in consts):
            continue
        if any((m[a], m[b]) not in cod.order for (a, b) in strict_order):
            continue
        good = True
        for f, _ in op_items:
            tbl_d, tbl_c = dom.op_tables[f], cod.op_tables[f]
            for args in tuples_by_op[f]:
                if m[tbl_d[args]] != tbl_c[tuple(m[x] for x in args)]:
                    good = False
                    break
            if not good:
                break
        if good:
            out.append(Homomorphism(dom, cod, m))
    return out


# File format support (.oalg and .hom).

def parse_algebra(text: str, base_dir: str | FsPath = ".",
                  sig: Signature | None = None) -> OrderedAlgebra:
    """Parse the `.oalg` format; the referenced `.sig` file is loaded too."""
    name = "A"
    carrier: list[str] = []
    order: set[tuple[str, str]] = set()
    tables: dict[str, dict[tuple[str, ...], str]] = {}
    consts: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "algebra":
            if len(tokens) != 4 or tokens[2] != "over":
                raise ParseError(f"malformed algebra line: {line!r}")
            name = tokens[1]
            sig_path = FsPath(base_dir) / tokens[3]
            sig = parse_signature(sig_path.read_text())
        elif tokens[0] == "elements":
            carrier.extend(tokens[1:])
        elif tokens[0] == "order":
            if len(tokens) != 4 or tokens[2] != "<=":
                raise ParseError(f"malformed order line: {line!r}")
            order.add((tokens[1], tokens[3]))
        elif tokens[0] == "op":
            # op f: (e0,e1) -> e1
            rest = line[len("op"):].strip()
            try:
                fname, mapping = rest.split(":", 1)
                lhs, rhs = mapping.split("->")
                args = tuple(a.strip() for a in lhs.strip().strip("()").split(",") if a.strip())
                value = rhs.strip()
            except ValueError as exc:
                raise ParseError(f"malformed op line: {line!r}") from exc
            tables.setdefault(fname.strip(), {})[args] = value
        elif tokens[0] == "const":
            if len(tokens) != 4 or tokens[2] != "=":
                raise ParseError(f"malformed const line: {line!r}")
            consts[tokens[1]] = tokens[3]
        else:
            raise ParseError(f"unknown line {line!r}")
    if sig is None:
        raise ParseError("no signature: need an `algebra <name> over <sigfile>` line")
    return OrderedAlgebra(sig, carrier, order, tables, consts, name=name)


def load_algebra(path: str | FsPath) -> OrderedAlgebra:
    p = FsPath(path)
    return parse_algebra(p.read_text(), base_dir=p.parent)


def print_algebra(alg: OrderedAlgebra, sig_file: str) -> str:
    lines = [f"algebra {alg.name} over {sig_file}",
             "elements " + " ".join(alg.carrier)]
    for (a, b) in sorted(alg.order, key=lambda p: (alg.index[p[0]], alg.index[p[1]])):
        if a != b:
            lines.append(f"order {a} <= {b}")
    for f in alg.op_tables:
        for args in itertools.product(alg.carrier, repeat=alg.sig.arity(f)):
            lines.append(f"op {f}: ({','.join(args)}) -> {alg.op(f, args)}")
    for c in alg.sig.constants():
        lines.append(f"const {c} = {alg.const(c)}")
    return "\n".join(lines) + "\n"


def parse_homomorphism(text: str, base_dir: str | FsPath = ".") -> Homomorphism:
    """Parse the `.hom` format: a header line plus one `map` line per element."""
    dom = cod = None
    mapping: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "hom":
            if len(tokens) != 5 or tokens[1] != "from" or tokens[3] != "to":
                raise ParseError(f"malformed hom line: {line!r}")
            dom = load_algebra(FsPath(base_dir) / tokens[2])
            cod = load_algebra(FsPath(base_dir) / tokens[4])
        elif tokens[0] == "map":
            if len(tokens) != 4 or tokens[2] != "->":
                raise ParseError(f"malformed map line: {line!r}")
            mapping[tokens[1]] = tokens[3]
        else:
            raise ParseError(f"unknown line {line!r}")
    if dom is None or cod is None:
        raise ParseError("missing `hom from <dom.oalg> to <cod.oalg>` line")
    missing = [e for e in dom.carrier if e not in mapping]
    if missing:
        raise ParseError(f"map not total, missing {missing}")
    return Homomorphism(dom, cod, mapping)


# Worked instances used across tests and demos.

def chain(n: int, sig: Signature, name: str | None = None) -> OrderedAlgebra:
    """Chain e0 < ... < e{n-1} with join operations and extremal constants."""
    carrier = [f"e{i}" for i in range(n)]
    idx = {e: i for i, e in enumerate(carrier)}
    order = {(a, b) for a in carrier for b in carrier if idx[a] <= idx[b]}
    tables = {}
    for f, k in sig.ops.items():
        if k == 0:
            continue
        tables[f] = {args: carrier[max(idx[a] for a in args)]
                     for args in itertools.product(carrier, repeat=k)}
    consts = {}
    names = sorted(sig.constants())
    for c in names:
        consts[c] = carrier[0]
    # Respect declared constant inequalities by pushing maximal constants up.
    for c in names:
        if any(c != d and (d, c) in sig.const_order for d in names):
            consts[c] = carrier[-1]
    return OrderedAlgebra(sig, carrier, order, tables, consts,
                          name=name or f"CH{n}")


def with_trivial_order(alg: OrderedAlgebra) -> OrderedAlgebra:
    return OrderedAlgebra(alg.sig, alg.carrier, relations.identity(alg.carrier),
                          alg.op_tables, alg.const_vals, name=alg.name + "=")
