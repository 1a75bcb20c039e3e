"""Amalgams of ordered algebras, their pushout, dominions, and epi checks.

The pushout of two algebras over a shared subalgebra is never materialized
(its carrier is a quotient of an infinite term algebra); every question
about it is answered by a budgeted certificate search.  A found scheme is
a checkable proof; exhausting the budget is reported as Unknown and never
as a refutation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path as FsPath

from . import relations
from .algebra import (
    Homomorphism,
    OrderedAlgebra,
    all_congruences,
    all_homomorphisms,
    chain as chain_algebra,
    check_homomorphism,
    evaluate,
    generated_subalgebra,
    is_order_congruence,
    load_algebra,
    product as product_algebra,
    regular_quotient,
    subalgebra,
    validate_algebra,
)
from .errors import (
    CommutationFailure,
    ParseError,
    PreconditionFailed,
    TheoremContradiction,
    ValidationError,
    WitnessInconsistency,
)
from .schemes import (
    IneqStep,
    RelStep,
    Scheme,
    Step,
    assert_valid,
    make_rel,
    validate_scheme,
)
from .signature import Signature
from .terms import (
    Term,
    leaf,
    leaf_paths,
    leaves,
    op_count,
    all_paths,
    replace_at,
    skeleton,
    subterm_at,
)
from .termorder import VarPoset, extend_monotone_map


def side_tag(name: str, side: int) -> str:
    return f"{name}<{side}>"


def tag_algebra(alg: OrderedAlgebra, side: int) -> tuple[OrderedAlgebra, dict[str, str]]:
    """A disjoint copy with every element name suffixed by the side marker."""
    ren = {e: side_tag(e, side) for e in alg.carrier}
    carrier = [ren[e] for e in alg.carrier]
    order = {(ren[a], ren[b]) for (a, b) in alg.order}
    tables = {f: {tuple(ren[a] for a in args): ren[v] for args, v in tbl.items()}
              for f, tbl in alg.op_tables.items()}
    consts = {c: ren[v] for c, v in alg.const_vals.items()}
    copy = OrderedAlgebra(alg.sig, carrier, order, tables, consts,
                          name=f"{alg.name}<{side}>")
    return copy, ren


class Amalgam:
    """Two ordered algebras embedding a shared one; carriers kept disjoint
    by automatic side tagging of element names."""

    def __init__(self, center: OrderedAlgebra, a1: OrderedAlgebra,
                 a2: OrderedAlgebra, phi1: dict[str, str], phi2: dict[str, str]):
        self.sig = center.sig
        self.c = center
        self.a1, ren1 = tag_algebra(a1, 1)
        self.a2, ren2 = tag_algebra(a2, 2)
        self.phi1 = {c: ren1[phi1[c]] for c in center.carrier}
        self.phi2 = {c: ren2[phi2[c]] for c in center.carrier}
        self._img1 = {v: k for k, v in self.phi1.items()}
        self._img2 = {v: k for k, v in self.phi2.items()}

    # -- amalgam-level term helpers ------------------------------------------

    def variables(self) -> list[str]:
        return self.a1.carrier + self.a2.carrier

    def var_poset(self) -> VarPoset:
        order = set(self.a1.order) | set(self.a2.order)
        return VarPoset(tuple(self.variables()), frozenset(order))

    def label_class(self, label: str) -> int:
        """1 or 2 for side elements, 0 for constant symbols."""
        if label in self.a1.index:
            return 1
        if label in self.a2.index:
            return 2
        if self.sig.has(label) and self.sig.arity(label) == 0:
            return 0
        raise ValidationError(f"unknown leaf label {label!r}")

    def leaf_leq(self, a: str, b: str) -> bool:
        ca, cb = self.label_class(a), self.label_class(b)
        if ca != cb:
            return False
        if ca == 1:
            return self.a1.leq(a, b)
        if ca == 2:
            return self.a2.leq(a, b)
        return self.sig.const_leq(a, b)

    def term_leq(self, s: Term, t: Term) -> bool:
        if skeleton(s) != skeleton(t):
            return False
        return all(self.leaf_leq(a, b) for a, b in zip(leaves(s), leaves(t)))

    def side(self, i: int) -> OrderedAlgebra:
        return self.a1 if i == 1 else self.a2

    def term_class(self, t: Term) -> int | None:
        """1 or 2 when all element leaves lie on one side, 0 for none, None if mixed."""
        sides = {self.label_class(l) for l in leaves(t)} - {0}
        if not sides:
            return 0
        if len(sides) == 1:
            return sides.pop()
        return None

    def eval_in_side(self, t: Term, i: int) -> str:
        alg = self.side(i)
        env = {e: e for e in alg.carrier}
        return evaluate(alg, t, env)

    def glue_tag(self, a: str, b: str) -> str | None:
        if a == b:
            return "ID"
        z = self._img1.get(a)
        if z is not None and self.phi2[z] == b:
            return "GLUE"
        z = self._img2.get(a)
        if z is not None and self.phi1[z] == b:
            return "GLUEINV"
        return None

    def transport(self, label: str, side: int) -> str:
        """Map a glue-image label onto the requested side, if possible."""
        cls = self.label_class(label)
        if cls == side or cls == 0:
            return label
        z = self._img1.get(label) if cls == 1 else self._img2.get(label)
        if z is None:
            raise WitnessInconsistency(
                f"{label!r} is not a shared image and cannot switch sides")
        return self.phi2[z] if side == 2 else self.phi1[z]

    def in_relation(self, tag: str, u: Term, v: Term) -> bool:
        if tag == "ID":
            return u == v
        if tag in ("GLUE", "GLUEINV"):
            return (u.is_leaf and v.is_leaf
                    and self.glue_tag(u.label, v.label) == tag)
        if tag in ("EV1", "EV2"):
            i = 1 if tag == "EV1" else 2
            if not v.is_leaf or self.term_class(u) not in (i, 0):
                return False
            return self.eval_in_side(u, i) == v.label
        if tag in ("EV1INV", "EV2INV"):
            i = 1 if tag == "EV1INV" else 2
            if not u.is_leaf or self.term_class(v) not in (i, 0):
                return False
            return self.eval_in_side(v, i) == u.label
        return False


def validate_amalgam(am: Amalgam) -> list[dict]:
    """Check the embeddings, the disjointness, and variety membership."""
    report = []
    for alg in (am.c, am.a1, am.a2):
        for item in validate_algebra(alg):
            report.append({"kind": "variety", "algebra": alg.name, **item})
    overlap = set(am.a1.carrier) & set(am.a2.carrier)
    if overlap:
        report.append({"kind": "disjointness", "shared": sorted(overlap)})
    for label, phi, target in (("phi1", am.phi1, am.a1), ("phi2", am.phi2, am.a2)):
        h = Homomorphism(am.c, target, phi)
        flags = check_homomorphism(h)
        if not flags["is_hom"]:
            report.append({"kind": "embedding", "map": label, "problem": "not a homomorphism"})
        if not flags["is_monotone"]:
            report.append({"kind": "embedding", "map": label, "problem": "not monotone"})
        if not flags["is_order_embedding"]:
            report.append({"kind": "embedding", "map": label,
                           "problem": "does not reflect the order"})
        if len(set(phi.values())) != len(phi):
            report.append({"kind": "embedding", "map": label, "problem": "not injective"})
    return report


class SpecialAmalgam(Amalgam):
    """Two tagged copies of one algebra glued along a subalgebra."""

    def __init__(self, base: OrderedAlgebra, center_subset: list[str]):
        center = subalgebra(base, center_subset, name=f"{base.name}|C")
        ident = {e: e for e in center.carrier}
        super().__init__(center, base, base, ident, ident)
        self.base = base
        self.alpha1 = {e: side_tag(e, 1) for e in base.carrier}
        self.alpha2 = {e: side_tag(e, 2) for e in base.carrier}
        self.nu = {side_tag(e, 1): side_tag(e, 2) for e in base.carrier}
        self.nu_inv = {v: k for k, v in self.nu.items()}

    def transport(self, label: str, side: int) -> str:
        cls = self.label_class(label)
        if cls == side or cls == 0:
            return label
        return self.nu[label] if side == 2 else self.nu_inv[label]

    def to_side1(self, label: str) -> str:
        """The copy-collapsing map: side-2 elements through the isomorphism."""
        cls = self.label_class(label)
        if cls == 1:
            return label
        if cls == 2:
            return self.nu_inv[label]
        return self.a1.const(label)

    def collapse_eval(self, t: Term) -> str:
        """Evaluate a mixed term in side 1 after collapsing the copies.

        Any scheme from s to t forces collapse_eval(s) <= collapse_eval(t),
        which is what makes this map a sound search prune.
        """
        if t.is_leaf:
            return self.to_side1(t.label)
        return self.a1.op(t.label, tuple(self.collapse_eval(c) for c in t.children))

    def center_of_side1(self, label: str) -> str | None:
        return self._img1.get(label)


def make_special(base: OrderedAlgebra, seed) -> SpecialAmalgam:
    """Special amalgam over the subalgebra generated by the seed."""
    return SpecialAmalgam(base, generated_subalgebra(base, seed))


# -- The pushout search --------------------------------------------------------

@dataclass
class Budget:
    """Search budget.  The first two fields bound what a witness may look
    like; the last two bound the work spent looking for one.  Exceeding a
    work cap is folded into Unknown together with the statistics.  Deeper
    unfoldings than max_unfold_ops are still reachable through several
    consecutive unfold steps."""

    max_term_ops: int = 4
    max_scheme_len: int = 8
    max_nodes: int = 20_000
    max_unfold_ops: int = 2


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    nodes_generated: int = 0
    depth_reached: int = 0
    capped: bool = False
    pruned: int = 0

    def as_dict(self) -> dict:
        return {"nodes_expanded": self.nodes_expanded,
                "nodes_generated": self.nodes_generated,
                "depth_reached": self.depth_reached,
                "capped": self.capped, "pruned": self.pruned}


@dataclass
class Proven:
    scheme: Scheme
    stats: SearchStats

    @property
    def proven(self) -> bool:
        return True


@dataclass
class Unknown:
    stats: SearchStats

    @property
    def proven(self) -> bool:
        return False


def _achievable_values(am: Amalgam, t: Term, side: int) -> dict[str, Term]:
    """Values reachable by raising leaves of t and evaluating on `side`,
    with one witness raised term per value.  Symbol leaves stay fixed."""
    alg = am.side(side)
    if t.is_leaf:
        cls = am.label_class(t.label)
        if cls == 0:
            return {alg.const(t.label): t}
        if cls != side:
            return {}
        return {b: leaf(b) for b in alg.up_set(t.label)}
    child_maps = [_achievable_values(am, c, side) for c in t.children]
    if any(not m for m in child_maps):
        return {}
    out: dict[str, Term] = {}
    for combo in itertools.product(*[sorted(m.items()) for m in child_maps]):
        value = alg.op(t.label, tuple(v for v, _ in combo))
        if value not in out:
            out[value] = Term(t.label, tuple(w for _, w in combo))
    return out


def _unfold_pool(am: Amalgam, side: int, max_ops: int) -> dict[str, list[Term]]:
    """Composite terms over one side's elements, grouped by their value.

    Lists are ordered by operation count.  Cached per amalgam: the pool
    depends only on the side's tables, not on the query.
    """
    cache = am.__dict__.setdefault("_unfold_cache", {})
    key = (side, max_ops)
    if key in cache:
        return cache[key]
    alg = am.side(side)
    by_ops: list[dict[str, list[Term]]] = [{e: [leaf(e)] for e in alg.carrier}]
    for n in range(1, max_ops + 1):
        layer: dict[str, list[Term]] = {}
        for f, k in alg.sig.ops.items():
            if k == 0:
                continue
            for split in _splits(n - 1, k):
                pools = [by_ops[m] for m in split]
                keys = [sorted(p.keys(), key=alg.index.get) for p in pools]
                for vals in itertools.product(*keys):
                    res = alg.op(f, vals)
                    for kids in itertools.product(*[p[v] for p, v in zip(pools, vals)]):
                        layer.setdefault(res, []).append(Term(f, kids))
        by_ops.append(layer)
    pool: dict[str, list[Term]] = {}
    for layer in by_ops[1:]:
        for val, ts in layer.items():
            pool.setdefault(val, []).extend(ts)
    cache[key] = pool
    return pool


def _splits(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _splits(total - first, parts - 1):
            yield (first,) + rest


def _achievable_cached(am: Amalgam, sub: Term, side: int) -> dict[str, Term]:
    cache = am.__dict__.setdefault("_achievable_cache", {})
    key = (sub, side)
    if key not in cache:
        cache[key] = _achievable_values(am, sub, side)
    return cache[key]


def _moves(am: Amalgam, u: Term, budget: Budget):
    """Candidate successor states, each a raise step fused with one
    relation step.  Deterministic order: folds, glue swaps, unfolds."""
    ops_left = budget.max_term_ops - op_count(u)
    # Folds of raised subterms, sides 1 then 2.
    for side, tag in ((1, "EV1"), (2, "EV2")):
        for path in all_paths(u):
            sub = subterm_at(u, path)
            if sub.is_leaf:
                continue
            for value, witness in sorted(_achievable_cached(am, sub, side).items()):
                raised = replace_at(u, path, witness)
                steps: list[Step] = []
                if raised != u:
                    steps.append(IneqStep(u, raised))
                steps.append(make_rel(tag, raised, path, leaf(value)))
                yield steps
    # Glue swaps at raised leaves.
    for path in leaf_paths(u):
        a = subterm_at(u, path).label
        cls = am.label_class(a)
        if cls == 0:
            continue
        alg = am.side(cls)
        images = am._img1 if cls == 1 else am._img2
        other = am.phi2 if cls == 1 else am.phi1
        tag = "GLUE" if cls == 1 else "GLUEINV"
        for b in alg.up_set(a):
            z = images.get(b)
            if z is None:
                continue
            raised = replace_at(u, path, leaf(b)) if b != a else u
            steps = []
            if raised != u:
                steps.append(IneqStep(u, raised))
            steps.append(make_rel(tag, raised, path, leaf(other[z])))
            yield steps
    # Unfolds at raised leaves, cheapest terms first.
    if ops_left > 0:
        width = min(ops_left, budget.max_unfold_ops)
        for side, tag in ((1, "EV1INV"), (2, "EV2INV")):
            alg = am.side(side)
            for path in leaf_paths(u):
                a = subterm_at(u, path).label
                if am.label_class(a) != side:
                    continue
                for b in alg.up_set(a):
                    raised = replace_at(u, path, leaf(b)) if b != a else u
                    for w in _unfold_pool(am, side, width).get(b, ()):
                        steps = []
                        if raised != u:
                            steps.append(IneqStep(u, raised))
                        steps.append(make_rel(tag, raised, path, w))
                        yield steps


def pushout_leq(am: Amalgam, s: Term, t: Term,
                budget: Budget | None = None) -> Proven | Unknown:
    """Search for a certificate that s precedes t in the pushout order.

    Breadth-first over fused raise-and-rewrite moves; a hit is returned as
    a validated scheme.  Unknown covers both a genuinely exhausted budget
    and hitting the node cap; the stats say which.
    """
    budget = budget or Budget()
    stats = SearchStats()
    prune = getattr(am, "collapse_eval", None)
    target_img = prune(t) if prune else None
    back: dict[Term, tuple[Term, tuple[Step, ...]] | None] = {s: None}

    def finish(u: Term) -> Proven:
        steps: list[Step] = []
        cur = u
        while back[cur] is not None:
            prev, part = back[cur]
            steps = list(part) + steps
            cur = prev
        if u != t:
            steps.append(IneqStep(u, t))
        sch = Scheme(s, t, tuple(steps))
        assert_valid(am, sch, "search result")
        return Proven(sch, stats)

    if prune and not am.a1.leq(prune(s), target_img):
        return Unknown(stats)
    if am.term_leq(s, t):
        return finish(s)
    frontier = [s]
    for depth in range(1, budget.max_scheme_len + 1):
        stats.depth_reached = depth
        new_frontier: list[Term] = []
        for u in frontier:
            stats.nodes_expanded += 1
            for steps in _moves(am, u, budget):
                stats.nodes_generated += 1
                if stats.nodes_generated > budget.max_nodes:
                    stats.capped = True
                    return Unknown(stats)
                v = steps[-1].right
                if v in back:
                    continue
                if prune and not am.a1.leq(prune(v), target_img):
                    stats.pruned += 1
                    continue
                back[v] = (u, tuple(steps))
                if am.term_leq(v, t):
                    return finish(v)
                new_frontier.append(v)
        if not new_frontier:
            return Unknown(stats)
        frontier = new_frontier
    return Unknown(stats)


@dataclass
class ProvenEqual:
    forward: Scheme
    backward: Scheme
    stats: SearchStats

    @property
    def proven(self) -> bool:
        return True


def pushout_equal(am: Amalgam, s: Term, t: Term,
                  budget: Budget | None = None) -> ProvenEqual | Unknown:
    """Both directions of pushout_leq; equality of classes needs both."""
    fwd = pushout_leq(am, s, t, budget)
    if not fwd.proven:
        return Unknown(fwd.stats)
    bwd = pushout_leq(am, t, s, budget)
    if not bwd.proven:
        merged = SearchStats(
            fwd.stats.nodes_expanded + bwd.stats.nodes_expanded,
            fwd.stats.nodes_generated + bwd.stats.nodes_generated,
            max(fwd.stats.depth_reached, bwd.stats.depth_reached),
            fwd.stats.capped or bwd.stats.capped,
            fwd.stats.pruned + bwd.stats.pruned)
        return Unknown(merged)
    merged = SearchStats(
        fwd.stats.nodes_expanded + bwd.stats.nodes_expanded,
        fwd.stats.nodes_generated + bwd.stats.nodes_generated,
        max(fwd.stats.depth_reached, bwd.stats.depth_reached),
        fwd.stats.capped or bwd.stats.capped,
        fwd.stats.pruned + bwd.stats.pruned)
    return ProvenEqual(fwd.scheme, bwd.scheme, merged)


# -- Mediating morphism ---------------------------------------------------------

class Mediator:
    """The universal map out of the pushout, applied on representatives."""

    def __init__(self, am: Amalgam, target: OrderedAlgebra,
                 gamma1: dict[str, str], gamma2: dict[str, str]):
        self.am = am
        self.target = target
        alpha = {}
        alpha.update({e: gamma1[e] for e in am.a1.carrier})
        alpha.update({e: gamma2[e] for e in am.a2.carrier})
        self.beta = extend_monotone_map(am.var_poset(), target, alpha)

    def __call__(self, representative: Term) -> str:
        return self.beta(representative)

    def check_scheme(self, sch: Scheme) -> None:
        """A valid scheme must transport to a chain of target inequalities
        whose relation steps become equalities."""
        prev_val = self.beta(sch.source)
        for s in sch.steps:
            lv, rv = self.beta(s.left), self.beta(s.right)
            if lv != prev_val:
                raise WitnessInconsistency("scheme transport lost the chain")
            if isinstance(s, IneqStep):
                if not self.target.leq(lv, rv):
                    raise WitnessInconsistency("inequality step broke under the mediator")
            else:
                if lv != rv:
                    raise WitnessInconsistency("relation step not collapsed by the mediator")
            prev_val = rv

    def check_pair(self, result: ProvenEqual) -> None:
        self.check_scheme(result.forward)
        self.check_scheme(result.backward)
        if self.beta(result.forward.source) != self.beta(result.forward.target):
            raise WitnessInconsistency("mediator disagrees on a proven equality")


def mediate(am: Amalgam, target: OrderedAlgebra, gamma1: dict[str, str],
            gamma2: dict[str, str]) -> Mediator:
    """Mediating map for a commuting cocone; commutation checked pointwise."""
    h1 = Homomorphism(am.a1, target, gamma1)
    h2 = Homomorphism(am.a2, target, gamma2)
    for h, label in ((h1, "gamma1"), (h2, "gamma2")):
        flags = check_homomorphism(h)
        if not (flags["is_hom"] and flags["is_monotone"]):
            raise CommutationFailure(f"{label} is not a homomorphism of ordered algebras")
    for z in am.c.carrier:
        if gamma1[am.phi1[z]] != gamma2[am.phi2[z]]:
            raise CommutationFailure(
                f"cocone does not commute at {z}: "
                f"{gamma1[am.phi1[z]]} != {gamma2[am.phi2[z]]}")
    return Mediator(am, target, gamma1, gamma2)


# -- Dominions and epis -----------------------------------------------------------

def dominion_special(sp: SpecialAmalgam, budget: Budget | None = None) -> dict[str, dict]:
    """Status of every base element against the pushout intersection.

    Shared-subalgebra elements are in the dominion outright; for the rest
    the certificate search must come back empty, and a found certificate
    is a contradiction with the theory, reported as a hard error.
    """
    out = {}
    for x in sp.base.carrier:
        if x in sp.c.index:
            out[x] = {"status": "InC"}
            continue
        res = pushout_equal(sp, leaf(sp.alpha1[x]), leaf(sp.alpha2[x]), budget)
        if res.proven:
            raise TheoremContradiction(
                f"certificate equates the two copies of {x} outside the core")
        out[x] = {"status": "NoWitnessFound", "stats": res.stats.as_dict()}
    return out


@dataclass
class Separator:
    codomain: OrderedAlgebra
    f: Homomorphism
    g: Homomorphism
    element: str


def _chain_products(sig: Signature, max_size: int) -> list[OrderedAlgebra]:
    """Chains and products of chains with carrier at most max_size."""
    singles = [chain_algebra(n, sig) for n in range(2, max_size + 1)]
    out = list(singles)
    for a, b in itertools.combinations_with_replacement(singles, 2):
        if len(a.carrier) * len(b.carrier) <= max_size:
            out.append(product_algebra([a, b]))
    return out


def separator_candidates(alg: OrderedAlgebra, max_size: int):
    """Codomains tried by the separator search, lazily and in order:
    regular quotients, non-regular quotients (same classes under coarser
    compatible quasiorders), then chains and products of chains."""
    from .closure import all_compatible_quasiorders
    from .algebra import nonregular_quotient

    seen: set = set()

    def fingerprint(d: OrderedAlgebra):
        return (tuple(d.carrier), tuple(sorted(d.order)),
                tuple(sorted((f, tuple(sorted(tbl.items())))
                             for f, tbl in d.op_tables.items())),
                tuple(sorted(d.const_vals.items())))

    def emit(d: OrderedAlgebra):
        if len(d.carrier) <= max_size and not validate_algebra(d):
            fp = fingerprint(d)
            if fp not in seen:
                seen.add(fp)
                yield d

    for theta in all_congruences(alg):
        if is_order_congruence(alg, theta):
            q, _ = regular_quotient(alg, theta)
            yield from emit(q)
    for sigma in all_compatible_quasiorders(alg):
        yield from emit(nonregular_quotient(alg, sigma))
    for d in _chain_products(alg.sig, max_size):
        yield from emit(d)


def separator_search(alg: OrderedAlgebra, center: list[str], x: str,
                     max_size: int) -> Separator | None:
    """A pair of homomorphisms agreeing on the subalgebra but not at x.

    Structured codomains first (quotients give readable witnesses fast),
    then a complete joint search over all codomains up to the size cap.
    None means no separator exists at the cap; it never asserts that x is
    dominated.
    """
    if x in center:
        raise PreconditionFailed(f"{x} already lies in the subalgebra")
    cache = alg.__dict__.setdefault("_separator_hom_cache", {})
    for cod in separator_candidates(alg, max_size):
        key = (tuple(cod.carrier), tuple(sorted(cod.order)),
               tuple(sorted((f, tuple(sorted(t.items())))
                            for f, t in cod.op_tables.items())))
        if key in cache:
            homs = cache[key]
        else:
            homs = all_homomorphisms(alg, cod)
            cache[key] = homs
        by_restriction: dict[tuple, list[Homomorphism]] = {}
        for h in homs:
            key2 = tuple(h.map[c] for c in center)
            by_restriction.setdefault(key2, []).append(h)
        for group in by_restriction.values():
            for f, g in itertools.combinations(group, 2):
                if f.map[x] != g.map[x]:
                    return Separator(cod, f, g, x)
    return exhaustive_separator(alg, center, x, max_size)


def _complete_monotone(table: dict, arity: int, elements: list[str],
                       order: frozenset) -> dict | None:
    """Extend a partial table to a total one monotone for the order, or
    report that none exists.  Complete backtracking over the free cells."""
    assigned = dict(table)

    def comparable(c1, c2):
        return all((a, b) in order for a, b in zip(c1, c2))

    cells = list(itertools.product(elements, repeat=arity))
    for c1 in assigned:
        for c2 in assigned:
            if comparable(c1, c2) and (assigned[c1], assigned[c2]) not in order:
                return None
    free = [c for c in cells if c not in assigned]

    def backtrack(i: int) -> bool:
        if i == len(free):
            return True
        cell = free[i]
        for v in elements:
            ok = True
            for c2, v2 in assigned.items():
                if comparable(c2, cell) and (v2, v) not in order:
                    ok = False
                    break
                if comparable(cell, c2) and (v, v2) not in order:
                    ok = False
                    break
            if ok:
                assigned[cell] = v
                if backtrack(i + 1):
                    return True
                del assigned[cell]
        return False

    return assigned if backtrack(0) else None


def exhaustive_separator(alg: OrderedAlgebra, center: list[str], x: str,
                         max_size: int) -> Separator | None:
    """Complete search over all codomains of at most max_size elements.

    Enumerates the two maps jointly; the codomain's order can be taken as
    the least quasiorder making both maps monotone (optionally extended by
    the constant inequalities), and its tables as any monotone completion
    of the entries the homomorphism conditions force.  Any separator at
    the cap is found this way.
    """
    elements = [f"d{i}" for i in range(max_size)]
    consts = alg.sig.constants()
    strict = [(a, b) for (a, b) in alg.order if a != b]
    op_items = [(f, k) for f, k in alg.sig.ops.items() if k > 0]
    for h1v in itertools.product(elements, repeat=len(alg.carrier)):
        h1 = dict(zip(alg.carrier, h1v))
        for h2v in itertools.product(elements, repeat=len(alg.carrier)):
            h2 = dict(zip(alg.carrier, h2v))
            if any(h1[z] != h2[z] for z in center) or h1[x] == h2[x]:
                continue
            base = {(h[a], h[b]) for h in (h1, h2) for (a, b) in strict}
            const_pairs = {(h1[alg.const(c)], h1[alg.const(d)])
                           for (c, d) in alg.sig.const_order if c != d}
            for extra in ({frozenset()} | {frozenset(const_pairs)}):
                order = relations.reflexive_transitive_closure(base | set(extra), elements)
                if not relations.is_antisymmetric(order):
                    continue
                if not all(p in order for p in const_pairs):
                    continue
                tables = {}
                ok = True
                for f, k in op_items:
                    forced: dict = {}
                    for h in (h1, h2):
                        for args, v in alg.op_tables[f].items():
                            key = tuple(h[a] for a in args)
                            if forced.get(key, h[v]) != h[v]:
                                ok = False
                                break
                            forced[key] = h[v]
                        if not ok:
                            break
                    if not ok:
                        break
                    total = _complete_monotone(forced, k, elements, order)
                    if total is None:
                        ok = False
                        break
                    tables[f] = total
                if not ok:
                    continue
                cvals = {c: h1[alg.const(c)] for c in consts}
                cod = OrderedAlgebra(alg.sig, elements, order, tables, cvals,
                                     name=f"S{max_size}")
                if validate_algebra(cod):
                    continue
                f_hom = Homomorphism(alg, cod, h1)
                g_hom = Homomorphism(alg, cod, h2)
                for h in (f_hom, g_hom):
                    flags = check_homomorphism(h)
                    if not (flags["is_hom"] and flags["is_monotone"]):
                        raise WitnessInconsistency("exhaustive separator produced a bad map")
                return Separator(cod, f_hom, g_hom, x)
    return None


@dataclass
class EpiReport:
    verdict: str                      # Surjective | NotEpi | Inconclusive
    separator: Separator | None = None
    missing: list[str] = field(default_factory=list)


def epi_check(h: Homomorphism, max_size: int) -> EpiReport:
    """Surjectivity, or an explicit pair of morphisms splitting the image.

    A separator found for any element outside the image shows the map is
    not an epimorphism; trivial-order algebras are supported unchanged.
    """
    image = h.image()
    missing = [e for e in h.cod.carrier if e not in image]
    if not missing:
        return EpiReport("Surjective")
    for x in missing:
        sep = separator_search(h.cod, image, x, max_size)
        if sep is not None:
            return EpiReport("NotEpi", separator=sep, missing=missing)
    return EpiReport("Inconclusive", missing=missing)


# -- File format ------------------------------------------------------------------

def parse_amalgam(text: str, base_dir: str | FsPath = ".") -> Amalgam:
    """Parse the `.amalgam` format.

    Either a single `special over <oalg> seed e0 e1 ...` line, or `left`,
    `right`, `center` file references plus `embed phi1: c -> e` lines.
    """
    left = right = center = None
    phi1: dict[str, str] = {}
    phi2: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "special":
            if len(tokens) < 4 or tokens[1] != "over" or tokens[3] != "seed":
                if len(tokens) == 3 and tokens[1] == "over":
                    tokens = tokens + ["seed"]
                else:
                    raise ParseError(f"malformed special line: {line!r}")
            base = load_algebra(FsPath(base_dir) / tokens[2])
            seed = tokens[4:] if len(tokens) > 4 else []
            unknown = [e for e in seed if e not in base.index]
            if unknown:
                raise ParseError(f"seed elements {unknown} not in the carrier")
            return make_special(base, seed)
        if tokens[0] in ("left", "right", "center"):
            if len(tokens) != 2:
                raise ParseError(f"malformed {tokens[0]} line: {line!r}")
            alg = load_algebra(FsPath(base_dir) / tokens[1])
            if tokens[0] == "left":
                left = alg
            elif tokens[0] == "right":
                right = alg
            else:
                center = alg
        elif tokens[0] == "embed":
            if len(tokens) != 5 or tokens[3] != "->" or tokens[1] not in ("phi1:", "phi2:"):
                raise ParseError(f"malformed embed line: {line!r}")
            (phi1 if tokens[1] == "phi1:" else phi2)[tokens[2]] = tokens[4]
        else:
            raise ParseError(f"unknown line {line!r}")
    if left is None or right is None or center is None:
        raise ParseError("amalgam needs left, right and center algebras")
    missing = [c for c in center.carrier if c not in phi1 or c not in phi2]
    if missing:
        raise ParseError(f"embeddings not total on {missing}")
    return Amalgam(center, left, right, phi1, phi2)


def load_amalgam(path: str | FsPath) -> Amalgam:
    p = FsPath(path)
    return parse_amalgam(p.read_text(), base_dir=p.parent)
