"""Generated compatible quasiorders and order-congruences on finite algebras.

The closure itself is a fixpoint interleaving transitivity with one-slot
operation compatibility; scheme witnesses are reconstructed on demand from
back-pointers recorded while the fixpoint runs.  A literal breadth-first
search over translated generator steps serves as the independent oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import relations
from .algebra import OrderedAlgebra
from .errors import WitnessInconsistency
from .schemes import (
    IDENTITY_TRANSLATION,
    IneqStep,
    RelStep,
    Scheme,
    Step,
    Translation,
    compose,
)
from .terms import Term, formal_var, leaf, leaf_count, substitute_leaves

Pair = tuple[str, str]


@dataclass(frozen=True)
class _OpExtension:
    op: str
    fillers: tuple[str, ...]
    slot: int
    inner: Pair


def _single_op_translation(alg: OrderedAlgebra, op: str, fillers: tuple[str, ...],
                           slot: int) -> Translation:
    k = alg.sig.arity(op)
    template = Term(op, tuple(leaf(formal_var(i)) for i in range(1, k + 1)))
    return Translation(template, slot, fillers)


def _eval_translation(alg: OrderedAlgebra, trans: Translation, value: str) -> str:
    """Evaluate a translation at a carrier element; fillers are elements."""
    def ev(t: Term, fills: list[str]) -> str:
        if t.is_leaf:
            if alg.sig.has(t.label):
                return alg.const(t.label)
            return fills.pop(0)
        return alg.op(t.label, tuple(ev(c, fills) for c in t.children))

    fills = [f for f in trans.fills_with(value)]
    return ev(trans.template, fills)


class GeneratedClosure:
    """Least compatible quasiorder containing the order and a relation H.

    `witness(c, c')` rebuilds an alternating inequality / translated-step
    certificate from the recorded provenance; translated steps carry the
    generator pair they rewrite and the one-hole context they act under.
    """

    def __init__(self, alg: OrderedAlgebra, hyp: frozenset[Pair],
                 symmetric: bool = False):
        self.alg = alg
        self.hyp = frozenset(hyp)
        self.symmetric = symmetric
        self.hyp_all = self.hyp | relations.inverse(self.hyp) if symmetric else self.hyp
        self._prov: dict[Pair, tuple] = {}
        self.relation = self._fixpoint()
        self._memo: dict[Pair, tuple[Step, ...]] = {}

    def _add(self, pair: Pair, prov: tuple, todo: list[Pair]) -> None:
        if pair not in self._prov:
            self._prov[pair] = prov
            todo.append(pair)

    def _fixpoint(self) -> frozenset[Pair]:
        alg = self.alg
        todo: list[Pair] = []
        for (a, b) in sorted(alg.order, key=lambda p: (alg.index[p[0]], alg.index[p[1]])):
            self._add((a, b), ("base",), todo)
        for (a, b) in sorted(self.hyp_all, key=lambda p: (alg.index[p[0]], alg.index[p[1]])):
            self._add((a, b), ("hyp", (a, b)), todo)
        ops = [(f, k) for f, k in alg.sig.ops.items() if k > 0]
        while todo:
            pair = todo.pop()
            x, y = pair
            # transitivity in both directions
            for (a, b) in list(self._prov):
                if b == x and (a, y) not in self._prov:
                    self._add((a, y), ("trans", (a, x), (x, y)), todo)
                if y == a and (x, b) not in self._prov:
                    self._add((x, b), ("trans", (x, y), (y, b)), todo)
            # one-slot op compatibility
            for f, k in ops:
                for fillers in itertools.product(alg.carrier, repeat=k - 1):
                    for slot in range(1, k + 1):
                        args_x = fillers[: slot - 1] + (x,) + fillers[slot - 1:]
                        args_y = fillers[: slot - 1] + (y,) + fillers[slot - 1:]
                        new = (alg.op(f, args_x), alg.op(f, args_y))
                        if new not in self._prov:
                            self._add(new, ("op", f, fillers, slot, pair), todo)
        return frozenset(self._prov)

    def witness(self, c: str, c2: str) -> Scheme | None:
        if (c, c2) not in self.relation:
            return None
        steps = self._steps_for((c, c2))
        return Scheme(leaf(c), leaf(c2), _canonical_steps(leaf(c), leaf(c2), steps))

    def _steps_for(self, pair: Pair) -> tuple[Step, ...]:
        if pair in self._memo:
            return self._memo[pair]
        prov = self._prov[pair]
        a, b = pair
        if prov[0] == "base":
            steps: tuple[Step, ...] = (IneqStep(leaf(a), leaf(b)),)
        elif prov[0] == "hyp":
            tag = "HYP" if pair in self.hyp or not self.symmetric else "HYPINV"
            steps = (RelStep(tag, IDENTITY_TRANSLATION, leaf(a), leaf(b),
                             leaf(a), leaf(b)),)
        elif prov[0] == "trans":
            steps = _join_steps(self._steps_for(prov[1]), self._steps_for(prov[2]))
        else:
            _, f, fillers, slot, inner = prov
            trans = _single_op_translation(self.alg, f, fillers, slot)
            steps = tuple(self._transport(s, trans) for s in self._steps_for(inner))
        self._memo[pair] = steps
        return steps

    def _transport(self, step: Step, trans: Translation) -> Step:
        if isinstance(step, IneqStep):
            return IneqStep(leaf(_eval_translation(self.alg, trans, step.left.label)),
                            leaf(_eval_translation(self.alg, trans, step.right.label)))
        assert isinstance(step, RelStep)
        combined = compose(trans, step.trans)
        return RelStep(step.tag, combined, step.u, step.v,
                       leaf(_eval_translation(self.alg, trans, step.left.label)),
                       leaf(_eval_translation(self.alg, trans, step.right.label)))


def _join_steps(first: tuple[Step, ...], second: tuple[Step, ...]) -> tuple[Step, ...]:
    if first and second and isinstance(first[-1], IneqStep) and isinstance(second[0], IneqStep):
        merged = IneqStep(first[-1].left, second[0].right)
        return first[:-1] + (merged,) + second[1:]
    return first + second


def _canonical_steps(source: Term, target: Term, steps: tuple[Step, ...]) -> tuple[Step, ...]:
    """Merge adjacent inequalities and drop trivial ones."""
    out: list[Step] = []
    for s in steps:
        if isinstance(s, IneqStep):
            if s.left == s.right:
                continue
            if out and isinstance(out[-1], IneqStep):
                out[-1] = IneqStep(out[-1].left, s.right)
                continue
        out.append(s)
    return tuple(out)


def enumerate_translations(alg: OrderedAlgebra, x_labels: list[str],
                           max_ops: int) -> list[Translation]:
    """All one-hole contexts with at most max_ops template operations.

    Fillers range over the given labels plus the interpreted constants;
    the zero-op case contributes only the identity context.
    """
    labels = list(dict.fromkeys(list(x_labels)
                                + [alg.const(c) for c in alg.sig.constants()]))
    out = [IDENTITY_TRANSLATION]
    templates = _regular_templates(alg, max_ops)
    for template in templates:
        n = leaf_count(template)
        for slot in range(1, n + 1):
            for fillers in itertools.product(labels, repeat=n - 1):
                out.append(Translation(template, slot, tuple(fillers)))
    return out


def _regular_templates(alg: OrderedAlgebra, max_ops: int) -> list[Term]:
    """Constant-free regular templates with 1..max_ops operation symbols."""
    shapes: list[list[Term]] = [[leaf("_")]]
    for n in range(1, max_ops + 1):
        layer: list[Term] = []
        for f, k in alg.sig.ops.items():
            if k == 0:
                continue
            for split in _splits(n - 1, k):
                for kids in itertools.product(*[shapes[m] for m in split]):
                    layer.append(Term(f, kids))
        shapes.append(layer)

    def renumber(t: Term) -> Term:
        counter = 0

        def go(n: Term) -> Term:
            nonlocal counter
            if n.is_leaf:
                counter += 1
                return leaf(formal_var(counter))
            return Term(n.label, tuple(go(c) for c in n.children))

        return go(t)

    return [renumber(t) for layer in shapes[1:] for t in layer]


def _splits(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _splits(total - first, parts - 1):
            yield (first,) + rest


def step_relation(alg: OrderedAlgebra, x_labels: list[str],
                  hyp: frozenset[Pair], max_ops: int) -> frozenset[Pair]:
    """One translated generator step: pairs (p(u), p(v)) for (u, v) in H."""
    out = set()
    full = len(alg.carrier) ** 2
    for trans in enumerate_translations(alg, x_labels, max_ops):
        for (u, v) in hyp:
            out.add((_eval_translation(alg, trans, u),
                     _eval_translation(alg, trans, v)))
        if len(out) == full:
            break
    return frozenset(out)


def one_slot_step_relation(alg: OrderedAlgebra, hyp: frozenset[Pair],
                           depth: int) -> frozenset[Pair]:
    """The same relation computed by chained one-slot extensions.

    A translation template deeper than one operation acts on a finite
    algebra exactly like a chain of single-operation contexts whose side
    arguments are pre-evaluated elements, so this agrees with the literal
    template enumeration at equal depth.
    """
    current = set(hyp)
    out = set(hyp)
    for _ in range(depth):
        nxt = set()
        for (x, y) in current:
            for f, k in alg.sig.ops.items():
                if k == 0:
                    continue
                for fillers in itertools.product(alg.carrier, repeat=k - 1):
                    for slot in range(1, k + 1):
                        args_x = fillers[: slot - 1] + (x,) + fillers[slot - 1:]
                        args_y = fillers[: slot - 1] + (y,) + fillers[slot - 1:]
                        pair = (alg.op(f, args_x), alg.op(f, args_y))
                        if pair not in out:
                            nxt.add(pair)
        out.update(nxt)
        current = nxt
        if not current:
            break
    return frozenset(out)


def gen_compatible_quasiorder(alg: OrderedAlgebra, hyp) -> GeneratedClosure:
    """Least compatible quasiorder containing the order and H, with witnesses."""
    return GeneratedClosure(alg, frozenset(hyp), symmetric=False)


def compatible_closure(alg: OrderedAlgebra, pairs) -> frozenset[Pair]:
    """Fixpoint closure of order + pairs, without witness bookkeeping."""
    rel = set(alg.order) | set(pairs)
    ops = [(f, k) for f, k in alg.sig.ops.items() if k > 0]
    changed = True
    while changed:
        changed = False
        snapshot = list(rel)
        for (a, b) in snapshot:
            for (c, d) in snapshot:
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        for (x, y) in list(rel):
            for f, k in ops:
                for fillers in itertools.product(alg.carrier, repeat=k - 1):
                    for slot in range(1, k + 1):
                        ax = fillers[: slot - 1] + (x,) + fillers[slot - 1:]
                        ay = fillers[: slot - 1] + (y,) + fillers[slot - 1:]
                        p = (alg.op(f, ax), alg.op(f, ay))
                        if p not in rel:
                            rel.add(p)
                            changed = True
    return frozenset(rel)


def all_compatible_quasiorders(alg: OrderedAlgebra) -> list[frozenset[Pair]]:
    """Every compatible quasiorder, enumerated as closures of generator sets.

    Breadth-first over the closure join-semilattice: start from the order
    itself and keep adjoining single pairs until nothing new appears.
    """
    base = compatible_closure(alg, ())
    seen = {base}
    frontier = [base]
    all_pairs = [(a, b) for a in alg.carrier for b in alg.carrier if a != b]
    while frontier:
        nxt = []
        for rel in frontier:
            for p in all_pairs:
                if p in rel:
                    continue
                bigger = compatible_closure(alg, rel | {p})
                if bigger not in seen:
                    seen.add(bigger)
                    nxt.append(bigger)
        frontier = nxt
    return sorted(seen, key=lambda r: (len(r), sorted(r)))


@dataclass
class GeneratedOrderCongruence:
    closure: GeneratedClosure

    @property
    def leq(self) -> frozenset[Pair]:
        return self.closure.relation

    @property
    def theta(self) -> frozenset[Pair]:
        return self.closure.relation & relations.inverse(self.closure.relation)

    def witness(self, c: str, c2: str) -> Scheme | None:
        return self.closure.witness(c, c2)


def gen_order_congruence(alg: OrderedAlgebra, hyp) -> GeneratedOrderCongruence:
    """Order-congruence generated by H: close H together with its inverse."""
    return GeneratedOrderCongruence(GeneratedClosure(alg, frozenset(hyp),
                                                     symmetric=True))


def bfs_over_step_relation(alg: OrderedAlgebra, rel: frozenset[Pair],
                           max_len: int) -> frozenset[Pair]:
    """Alternate order moves with steps from rel, at most max_len steps."""
    succ: dict[str, set[str]] = {}
    for (a, b) in rel:
        succ.setdefault(a, set()).add(b)
    out = set()
    for c in alg.carrier:
        reach = set(alg.up_set(c))
        for _ in range(max_len):
            nxt = set(reach)
            for a in reach:
                for b in succ.get(a, ()):
                    nxt.update(alg.up_set(b))
            if nxt == reach:
                break
            reach = nxt
        out.update((c, b) for b in reach)
    return frozenset(out)


def bfs_generated_quasiorder(alg: OrderedAlgebra, x_labels: list[str], hyp,
                             max_ops: int, max_len: int,
                             literal: bool = False) -> frozenset[Pair]:
    """Independent oracle: breadth-first over translated generator steps.

    With literal=True the step relation comes from explicit template
    enumeration; the default uses the equivalent chained one-slot form,
    which is much cheaper at depth three and beyond.
    """
    hyp = frozenset(hyp)
    if literal:
        rel = step_relation(alg, x_labels, hyp, max_ops)
    else:
        rel = one_slot_step_relation(alg, hyp, max_ops)
    return bfs_over_step_relation(alg, rel, max_len)


def check_generated_scheme(alg: OrderedAlgebra, hyp, sch: Scheme,
                           allow_inverse: bool) -> None:
    """Recheck a closure witness: chaining, inequalities, translated steps."""
    hyp = frozenset(hyp)
    hyp_inv = relations.inverse(hyp)
    prev = sch.source
    for s in sch.steps:
        if s.left != prev:
            raise WitnessInconsistency("steps do not chain")
        prev = s.right
        if isinstance(s, IneqStep):
            if (s.left.label, s.right.label) not in alg.order:
                raise WitnessInconsistency(f"bad inequality {s}")
        elif isinstance(s, RelStep):
            pair = (s.u.label, s.v.label)
            if s.tag == "HYP":
                if pair not in hyp:
                    raise WitnessInconsistency(f"pair {pair} not a generator")
            elif s.tag == "HYPINV":
                if not allow_inverse or pair not in hyp_inv:
                    raise WitnessInconsistency(f"pair {pair} not an inverse generator")
            else:
                raise WitnessInconsistency(f"unexpected tag {s.tag}")
            if _eval_translation(alg, s.trans, s.u.label) != s.left.label:
                raise WitnessInconsistency("left side does not evaluate")
            if _eval_translation(alg, s.trans, s.v.label) != s.right.label:
                raise WitnessInconsistency("right side does not evaluate")
        else:
            raise WitnessInconsistency("closure witnesses use single steps only")
    if prev != sch.target:
        raise WitnessInconsistency("endpoint mismatch")
