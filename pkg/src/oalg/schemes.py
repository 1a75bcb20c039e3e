"""Zigzag schemes as first-class certificates, plus the rewriting engine
that normalizes a scheme between single-leaf endpoints down to one whose
terms are all single nodes.

A scheme alternates inequality steps with tagged relation steps.  Relation
steps carry the one-hole context they act under as an explicit translation
(constant-free regular template, slot index, label fillers), so every
certificate can be rechecked without trusting the producer.

Tags:
  EV1 / EV2        evaluate a subterm over one side to its value there
  EV1INV / EV2INV  unfold a value into a term that evaluates to it
  GLUE / GLUEINV   swap a shared-subalgebra image between the two sides
  ID               diagonal; kept only transiently
  MULTI            simultaneous leafwise GLUE/GLUEINV/ID rewrite
  HYP / HYPINV     generator pair of a finite-algebra closure
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import (
    NotApplicable,
    NotClosedChain,
    ParseError,
    SkeletonMismatch,
    TheoremContradiction,
    ValidationError,
    WitnessInconsistency,
)
from .signature import Signature, is_formal_variable
from .terms import (
    Path,
    Term,
    leaf,
    leaf_count,
    leaf_paths,
    leaf_span,
    leaves,
    op_count,
    parse_term,
    path_of_leaf,
    print_term,
    regularize,
    replace_at,
    skeleton,
    substitute_leaves,
    subterm_at,
    is_regular,
)

EV_TAGS = ("EV1", "EV2")
EVINV_TAGS = ("EV1INV", "EV2INV")
GLUE_TAGS = ("GLUE", "GLUEINV", "ID")
HYP_TAGS = ("HYP", "HYPINV")
ALL_TAGS = EV_TAGS + EVINV_TAGS + GLUE_TAGS + HYP_TAGS


def tag_side(tag: str) -> int:
    if tag in ("EV1", "EV1INV"):
        return 1
    if tag in ("EV2", "EV2INV"):
        return 2
    raise ValueError(f"tag {tag!r} has no side")


@dataclass(frozen=True)
class Translation:
    """A one-hole context: template with the slot leaf left open, the other
    leaf positions filled by fixed labels."""

    template: Term
    slot: int
    fillers: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.fillers) + 1

    def fills_with(self, u: Union[str, Term]) -> list:
        out: list = list(self.fillers[: self.slot - 1])
        out.append(u)
        out.extend(self.fillers[self.slot - 1:])
        return out

    def apply(self, u: Union[str, Term]) -> Term:
        return substitute_leaves(self.template, self.fills_with(u))

    def hole_path(self) -> Path:
        return path_of_leaf(self.template, self.slot)

    def is_identity(self) -> bool:
        return self.template.is_leaf and not self.fillers


IDENTITY_TRANSLATION = Translation(leaf("z1"), 1, ())


def compose(outer: Translation, inner: Translation) -> Translation:
    """The translation computing outer(inner(u))."""
    merged = replace_at(outer.template, outer.hole_path(), inner.template)
    template, _ = regularize(merged)
    slot = outer.slot - 1 + inner.slot
    fillers = (outer.fillers[: outer.slot - 1]
               + inner.fillers
               + outer.fillers[outer.slot - 1:])
    return Translation(template, slot, fillers)


def context_translation(t: Term, path: Path) -> Translation:
    """The one-hole context of the subterm occurrence at `path` inside t."""
    slot = leaf_span(t, path)[0]
    stripped = replace_at(t, path, leaf("__slot__"))
    template, labels = regularize(stripped)
    fillers = tuple(l for i, l in enumerate(labels, start=1) if i != slot)
    return Translation(template, slot, fillers)


@dataclass(frozen=True)
class IneqStep:
    left: Term
    right: Term


@dataclass(frozen=True)
class RelStep:
    tag: str
    trans: Translation
    u: Term
    v: Term
    left: Term
    right: Term

    def hole_path(self) -> Path:
        return self.trans.hole_path()


@dataclass(frozen=True)
class MultiStep:
    """Leafwise rewrite on a shared skeleton; one tag per leaf column."""

    left: Term
    right: Term
    tags: tuple[str, ...]


Step = Union[IneqStep, RelStep, MultiStep]


@dataclass(frozen=True)
class Scheme:
    source: Term
    target: Term
    steps: tuple[Step, ...]

    def __len__(self):
        return len(self.steps)

    def rel_steps(self):
        return [s for s in self.steps if isinstance(s, RelStep)]

    def ev_load(self) -> int:
        """Total operation count of terms sitting under EV-family tags.

        This is the termination measure of the normalizer: case rewrites
        never increase it and the shrinking cases strictly decrease it.
        """
        total = 0
        for s in self.steps:
            if isinstance(s, RelStep) and s.tag in EV_TAGS:
                total += op_count(s.u)
            elif isinstance(s, RelStep) and s.tag in EVINV_TAGS:
                total += op_count(s.v)
        return total


def make_rel(tag: str, whole: Term, path: Path, new_sub: Term) -> RelStep:
    """Relation step rewriting the subterm of `whole` at `path` to `new_sub`."""
    u = subterm_at(whole, path)
    return RelStep(tag, context_translation(whole, path), u, new_sub,
                   whole, replace_at(whole, path, new_sub))


def chain_ok(sch: Scheme) -> bool:
    prev = sch.source
    for s in sch.steps:
        if s.left != prev:
            return False
        prev = s.right
    return prev == sch.target


def validate_scheme(am, sch: Scheme) -> list[dict]:
    """Recheck every invariant of a certificate against an amalgam.

    Returns a report of violations; empty means the certificate is valid.
    """
    report = []
    prev = sch.source
    for idx, s in enumerate(sch.steps):
        if s.left != prev:
            report.append({"kind": "chain", "step": idx,
                           "expected": print_term(prev), "got": print_term(s.left)})
        prev = s.right
        if isinstance(s, IneqStep):
            if not am.term_leq(s.left, s.right):
                report.append({"kind": "ineq", "step": idx,
                               "left": print_term(s.left), "right": print_term(s.right)})
        elif isinstance(s, RelStep):
            flag, _ = is_regular(s.trans.template, am.sig)
            if not flag:
                report.append({"kind": "template", "step": idx})
            if any(is_formal_variable(f) for f in s.trans.fillers):
                report.append({"kind": "fillers", "step": idx})
            if s.trans.apply(s.u) != s.left or s.trans.apply(s.v) != s.right:
                report.append({"kind": "application", "step": idx})
            if not am.in_relation(s.tag, s.u, s.v):
                report.append({"kind": "relation", "step": idx, "tag": s.tag,
                               "u": print_term(s.u), "v": print_term(s.v)})
        elif isinstance(s, MultiStep):
            if skeleton(s.left) != skeleton(s.right):
                report.append({"kind": "multi-skeleton", "step": idx})
                continue
            ls, rs = list(leaves(s.left)), list(leaves(s.right))
            if len(s.tags) != len(ls):
                report.append({"kind": "multi-tags", "step": idx})
                continue
            for col, (a, b, tg) in enumerate(zip(ls, rs, s.tags)):
                if tg not in GLUE_TAGS or am.glue_tag(a, b) != tg:
                    report.append({"kind": "multi-pair", "step": idx,
                                   "column": col + 1, "pair": (a, b), "tag": tg})
    if prev != sch.target:
        report.append({"kind": "endpoint", "expected": print_term(sch.target),
                       "got": print_term(prev)})
    return report


def assert_valid(am, sch: Scheme, where: str = "") -> Scheme:
    report = validate_scheme(am, sch)
    if report:
        raise WitnessInconsistency(f"invalid scheme {where}: {report[:3]}")
    return sch


# -- Grid representation ----------------------------------------------------

@dataclass
class Grid:
    """Leaf rows of a same-skeleton scheme segment.

    `transitions[k]` explains how row k becomes row k+1: either ("ineq",)
    or ("rel", tags) with one GLUE/GLUEINV/ID tag per column.
    """

    rows: list[tuple[str, ...]]
    transitions: list[tuple]
    columns: int


def _glue_columns(step: Step) -> tuple[str, ...]:
    n = leaf_count(step.left)
    if isinstance(step, MultiStep):
        return step.tags
    assert isinstance(step, RelStep) and step.tag in GLUE_TAGS
    col = leaf_span(step.left, step.hole_path())[0]
    return tuple(step.tag if i == col else "ID" for i in range(1, n + 1))


def build_grid(sch: Scheme, i: int, j: int) -> Grid:
    """Grid of the segment steps[i..j]; all terms must share one skeleton."""
    segment = sch.steps[i:j + 1]
    if not segment:
        raise NotApplicable("empty segment")
    skel = skeleton(segment[0].left)
    rows = [tuple(leaves(segment[0].left))]
    transitions: list[tuple] = []
    for s in segment:
        if skeleton(s.left) != skel or skeleton(s.right) != skel:
            raise SkeletonMismatch("segment steps change the skeleton")
        if isinstance(s, IneqStep):
            transitions.append(("ineq",))
        elif isinstance(s, MultiStep) or (isinstance(s, RelStep) and s.tag in GLUE_TAGS):
            transitions.append(("rel", _glue_columns(s)))
        else:
            raise SkeletonMismatch(f"step tag outside the grid fragment: {s}")
        rows.append(tuple(leaves(s.right)))
    return Grid(rows, transitions, len(rows[0]))


# -- Covering ----------------------------------------------------------------

@dataclass(frozen=True)
class Covering:
    """How the unfolded occurrence on the left relates to the folded one
    on the right of an EVINV ... EV segment.

    verdict: "proper" (same occurrence), "covers" (left contains right),
    "covered_by" (right contains left), "disjoint".
    """

    verdict: str
    left_span: tuple[int, int]
    right_span: tuple[int, int]
    left_path: Path
    right_path: Path


def covering_of_paths(term: Term, left_path: Path, right_path: Path) -> Covering:
    ls = leaf_span(term, left_path)
    rs = leaf_span(term, right_path)
    if left_path == right_path:
        verdict = "proper"
    elif right_path[: len(left_path)] == left_path:
        verdict = "covers"
    elif left_path[: len(right_path)] == right_path:
        verdict = "covered_by"
    else:
        verdict = "disjoint"
    # Same-skeleton occurrences can only nest or be disjoint; a genuine
    # partial overlap would contradict the tree structure.
    span_nested = (ls[0] <= rs[0] and rs[1] <= ls[1]) or (rs[0] <= ls[0] and ls[1] <= rs[1])
    span_disjoint = ls[1] < rs[0] or rs[1] < ls[0]
    if verdict == "disjoint" and not span_disjoint and not span_nested:
        raise TheoremContradiction(f"partially overlapping occurrences: {ls} vs {rs}")
    return Covering(verdict, ls, rs, left_path, right_path)


def covering(sch: Scheme, left_inner: int, right_inner: int) -> Covering:
    """Covering verdict for the EVINV step at index left_inner and the EV
    step at right_inner, located on their shared skeleton."""
    a = sch.steps[left_inner]
    b = sch.steps[right_inner]
    if not (isinstance(a, RelStep) and a.tag in EVINV_TAGS):
        raise NotApplicable("left step is not an unfold")
    if not (isinstance(b, RelStep) and b.tag in EV_TAGS):
        raise NotApplicable("right step is not a fold")
    if skeleton(a.right) != skeleton(b.left):
        raise SkeletonMismatch("the two steps do not share a skeleton")
    return covering_of_paths(a.right, a.hole_path(), b.hole_path())


# -- Lemma-style single pushes ----------------------------------------------

def push_rel_inv_right(am, sch: Scheme, i: int) -> Scheme:
    """Move an unfold step rightward past the inequality that follows it.

    The unfolded subterm is re-evaluated at the raised leaf labels, so the
    inequality happens first on folded terms and the unfold happens last.
    """
    steps = sch.steps
    if i + 1 >= len(steps):
        raise NotApplicable("no following step")
    a, b = steps[i], steps[i + 1]
    if not (isinstance(a, RelStep) and a.tag in EVINV_TAGS and isinstance(b, IneqStep)):
        raise NotApplicable("expected an unfold followed by an inequality")
    side = tag_side(a.tag)
    path = a.hole_path()
    raised_sub = subterm_at(b.right, path)
    folded_val = am.eval_in_side(raised_sub, side)
    mid = replace_at(b.right, path, leaf(folded_val))
    new_ineq = IneqStep(a.left, mid)
    new_rel = make_rel(a.tag, mid, path, raised_sub)
    if not am.term_leq(new_ineq.left, new_ineq.right):
        raise WitnessInconsistency("push produced a bad inequality")
    out = Scheme(sch.source, sch.target,
                 steps[:i] + (new_ineq, new_rel) + steps[i + 2:])
    return out


def push_rel_left(am, sch: Scheme, i: int) -> Scheme:
    """Move a fold step leftward past the inequality that precedes it."""
    steps = sch.steps
    if i + 1 >= len(steps):
        raise NotApplicable("no following step")
    a, b = steps[i], steps[i + 1]
    if not (isinstance(a, IneqStep) and isinstance(b, RelStep) and b.tag in EV_TAGS):
        raise NotApplicable("expected an inequality followed by a fold")
    side = tag_side(b.tag)
    path = b.hole_path()
    low_sub = subterm_at(a.left, path)
    folded_val = am.eval_in_side(low_sub, side)
    new_rel = make_rel(b.tag, a.left, path, leaf(folded_val))
    new_ineq = IneqStep(new_rel.right, b.right)
    if not am.term_leq(new_ineq.left, new_ineq.right):
        raise WitnessInconsistency("push produced a bad inequality")
    return Scheme(sch.source, sch.target,
                  steps[:i] + (new_rel, new_ineq) + steps[i + 2:])


# -- Grid contraction ---------------------------------------------------------

def grid_contract(am, sch: Scheme, i: int, j: int) -> Scheme:
    """Contract a same-skeleton segment into inequality, MULTI, inequality.

    Column processing: a column with no glue pairs collapses to its bottom
    value; with an even number of glue pairs, side transport shows top and
    bottom agree up to inequalities and the column also collapses; with an
    odd count, the last glue pair survives as the column's MULTI entry.
    """
    grid = build_grid(sch, i, j)
    top = grid.rows[0]
    bottom = grid.rows[-1]
    n_rows = len(grid.rows)
    mid_from: list[str] = []
    mid_to: list[str] = []
    mid_tags: list[str] = []
    for col in range(grid.columns):
        values = [grid.rows[r][col] for r in range(n_rows)]
        glue_positions = [k for k, tr in enumerate(grid.transitions)
                          if tr[0] == "rel" and tr[1][col] in ("GLUE", "GLUEINV")]
        if len(glue_positions) % 2 == 0:
            _check_column_chain(am, values, grid.transitions, col, len(values) - 1)
            mid_from.append(bottom[col])
            mid_to.append(bottom[col])
            mid_tags.append("ID")
        else:
            k = glue_positions[-1]
            _check_column_chain(am, values, grid.transitions, col, k)
            for r in range(k + 1, len(grid.transitions)):
                tr = grid.transitions[r]
                if tr[0] == "rel" and tr[1][col] != "ID":
                    raise WitnessInconsistency("glue pair after the pivot")
            mid_from.append(values[k])
            mid_to.append(values[k + 1])
            mid_tags.append(grid.transitions[k][1][col])
    template, _ = regularize(sch.steps[i].left)
    t_top = substitute_leaves(template, top)
    t_from = substitute_leaves(template, mid_from)
    t_to = substitute_leaves(template, mid_to)
    t_bottom = substitute_leaves(template, bottom)
    new_steps: tuple[Step, ...] = (IneqStep(t_top, t_from),
                                   MultiStep(t_from, t_to, tuple(mid_tags)),
                                   IneqStep(t_to, t_bottom))
    return Scheme(sch.source, sch.target,
                  sch.steps[:i] + new_steps + sch.steps[j + 1:])


def _check_column_chain(am, values: list[str], transitions: list[tuple],
                        col: int, upto: int) -> None:
    """Verify that a column prefix chains after transport to its first side.

    Transporting across the isomorphism maps glue pairs to equalities and
    keeps inequalities, so the prefix composes to values[0] <= values[upto]
    in the order of the first value's side.
    """
    home = am.label_class(values[0])

    def to_home(w: str) -> str:
        return am.transport(w, home)

    for k in range(upto):
        tr = transitions[k]
        a, b = values[k], values[k + 1]
        if tr[0] == "ineq":
            if not am.leaf_leq(a, b) or not am.leaf_leq(to_home(a), to_home(b)):
                raise WitnessInconsistency(f"column chain breaks at {(a, b)}")
        elif tr[1][col] != "ID" and to_home(a) != to_home(b):
            raise WitnessInconsistency(f"glue pair {(a, b)} does not transport away")
    if not am.leaf_leq(values[0], to_home(values[upto])):
        raise WitnessInconsistency("column prefix does not chain")


# -- Simplification -----------------------------------------------------------

def simplify(am, sch: Scheme) -> Scheme:
    """Drop trivial steps and merge adjacent inequalities."""
    steps: list[Step] = []
    for s in sch.steps:
        if isinstance(s, IneqStep) and s.left == s.right:
            continue
        if isinstance(s, RelStep) and s.u == s.v:
            continue
        if isinstance(s, MultiStep):
            if s.left == s.right:
                continue
            if s.left.is_leaf:
                tag = am.glue_tag(s.left.label, s.right.label)
                if tag is None:
                    raise WitnessInconsistency("bad single-leaf MULTI step")
                steps.append(make_rel(tag, s.left, (), s.right))
                continue
        if steps and isinstance(s, IneqStep) and isinstance(steps[-1], IneqStep):
            steps[-1] = IneqStep(steps[-1].left, s.right)
            continue
        steps.append(s)
    return Scheme(sch.source, sch.target, tuple(steps))


# -- The normalizer -----------------------------------------------------------

@dataclass
class NormalizeResult:
    status: str              # "case1" or "stuck"
    scheme: Scheme
    iterations: int
    trace: list[str] = field(default_factory=list)
    reason: str | None = None

    @property
    def is_case1(self) -> bool:
        return self.status == "case1"


def is_case1(sch: Scheme) -> bool:
    """All terms single nodes; only inequality and glue steps remain."""
    if not (sch.source.is_leaf and sch.target.is_leaf):
        return False
    for s in sch.steps:
        if isinstance(s, (MultiStep,)):
            return False
        if not (s.left.is_leaf and s.right.is_leaf):
            return False
        if isinstance(s, RelStep) and s.tag not in ("GLUE", "GLUEINV", "ID"):
            return False
    return True


def _find_core(sch: Scheme) -> tuple[int, int] | None:
    """Leftmost fold preceded by an unfold with only grid steps between."""
    first_ev = None
    for idx, s in enumerate(sch.steps):
        if isinstance(s, RelStep) and s.tag in EV_TAGS:
            first_ev = idx
            break
    if first_ev is None:
        return None
    last_inv = None
    for idx in range(first_ev - 1, -1, -1):
        s = sch.steps[idx]
        if isinstance(s, RelStep) and s.tag in EVINV_TAGS:
            last_inv = idx
            break
        if isinstance(s, RelStep) and s.tag in EV_TAGS:
            break
    if last_inv is None:
        return None
    return last_inv, first_ev


def _mid_pairs(mid: MultiStep | None, term_left: Term, term_right: Term):
    """Per-column (from, to, tag) triples between the unfold and the fold."""
    ls = list(leaves(term_left))
    rs = list(leaves(term_right))
    if mid is None:
        if term_left != term_right:
            raise WitnessInconsistency("unfold and fold terms differ without a MULTI step")
        return [(a, a, "ID") for a in ls]
    return list(zip(ls, rs, mid.tags))


def _multi_between(am, left_term: Term, right_term: Term) -> MultiStep | RelStep | None:
    """Build the MULTI step for two same-skeleton terms, or None if equal."""
    if left_term == right_term:
        return None
    if skeleton(left_term) != skeleton(right_term):
        raise WitnessInconsistency("MULTI endpoints have different skeletons")
    tags = []
    for a, b in zip(leaves(left_term), leaves(right_term)):
        tag = am.glue_tag(a, b)
        if tag is None:
            raise TheoremContradiction(f"column pair {(a, b)} is not a glue pair")
        tags.append(tag)
    return MultiStep(left_term, right_term, tuple(tags))


def _resolve_core(am, sch: Scheme, i: int, j: int, trace: list[str]) -> Scheme:
    """Rewrite the innermost unfold ... fold pair by the covering case analysis."""
    steps = sch.steps
    # Contract whatever sits strictly between into [Ineq, MULTI, Ineq].
    if j > i + 1:
        sch = grid_contract(am, sch, i + 1, j - 1)
        sch = simplify(am, sch)
        pair = _find_core(sch)
        if pair is None:
            return sch
        i, j = pair
        steps = sch.steps
    # Push the unfold right and the fold left across leftover inequalities.
    changed = True
    while changed:
        changed = False
        if i + 1 < len(sch.steps) and isinstance(sch.steps[i + 1], IneqStep):
            sch = push_rel_inv_right(am, sch, i)
            sch = simplify(am, sch)
            pair = _find_core(sch)
            if pair is None:
                return sch
            i, j = pair
            changed = True
        if isinstance(sch.steps[j - 1], IneqStep) and j - 1 > i:
            sch = push_rel_left(am, sch, j - 1)
            sch = simplify(am, sch)
            pair = _find_core(sch)
            if pair is None:
                return sch
            i, j = pair
            changed = True
    steps = sch.steps
    unfold = steps[i]
    fold = steps[j]
    mid: MultiStep | None = None
    if j == i + 2 and isinstance(steps[i + 1], MultiStep):
        mid = steps[i + 1]
    elif j != i + 1:
        raise WitnessInconsistency("core segment failed to canonicalize")
    t1, t2 = unfold.right, fold.left
    pairs = _mid_pairs(mid, t1, t2)
    cov = covering_of_paths(t1, unfold.hole_path(), fold.hole_path())
    side_l = tag_side(unfold.tag)
    side_r = tag_side(fold.tag)
    t0, t3 = unfold.left, fold.right
    prefix, suffix = steps[:i], steps[j + 1:]
    trace.append(f"case({cov.verdict}) at {cov.left_path}/{cov.right_path}")

    def splice(new_steps: Iterable[Step | None]) -> Scheme:
        body = tuple(s for s in new_steps if s is not None)
        return simplify(am, Scheme(sch.source, sch.target, prefix + body + suffix))

    if cov.verdict == "proper":
        # Both the unfold and the fold vanish; the collapsed column becomes
        # a glue (or diagonal) pair between the two evaluated values.
        return splice([_multi_between(am, t0, t3)])
    if cov.verdict == "covers":
        inner = subterm_at(t1, cov.right_path)
        w_left = am.eval_in_side(inner, side_l)
        reduced = replace_at(t1, cov.right_path, leaf(w_left))
        new_unfold = make_rel(unfold.tag, t0, cov.left_path,
                              subterm_at(reduced, cov.left_path))
        new_multi = _multi_between(am, reduced, t3)
        return splice([new_unfold, new_multi])
    if cov.verdict == "covered_by":
        inner = subterm_at(t2, cov.left_path)
        w_right = am.eval_in_side(inner, side_r)
        reduced = replace_at(t2, cov.left_path, leaf(w_right))
        new_multi = _multi_between(am, t0, reduced)
        new_fold = make_rel(fold.tag, reduced, cov.right_path, leaf(am.eval_in_side(
            subterm_at(reduced, cov.right_path), side_r)))
        if new_fold.right != t3:
            raise WitnessInconsistency("dual shrink changed the segment endpoint")
        return splice([new_multi, new_fold])
    # disjoint: fold first, unfold later; both survive but commute.
    u1 = replace_at(t2, cov.left_path, subterm_at(t0, cov.left_path))
    multi_a = _multi_between(am, t0, u1)
    fold_b = make_rel(fold.tag, u1, cov.right_path, leaf(am.eval_in_side(
        subterm_at(u1, cov.right_path), side_r)))
    u2 = fold_b.right
    unfold_c = make_rel(unfold.tag, u2, cov.left_path, subterm_at(t1, cov.left_path))
    multi_d = _multi_between(am, unfold_c.right, t3)
    return splice([multi_a, fold_b, unfold_c, multi_d])


def normalize(am, sch: Scheme, max_iters: int | None = None) -> NormalizeResult:
    """Drive a scheme between single-leaf endpoints to its single-node form.

    Repeatedly contracts the maximal glue-only region between the innermost
    unfold/fold pair and resolves the pair by the covering case analysis.
    Runs that exceed the iteration cap stop with a diagnosis instead of
    looping; they are never silently wrong.
    """
    if not (sch.source.is_leaf and sch.target.is_leaf):
        return NormalizeResult("stuck", sch, 0, [], "endpoints are not single leaves")
    if max_iters is None:
        max_iters = 10 * max(1, len(sch.steps))
    trace: list[str] = []
    cur = simplify(am, sch)
    for s in cur.steps:
        if isinstance(s, RelStep) and s.tag in EV_TAGS + EVINV_TAGS:
            term = s.u if s.tag in EV_TAGS else s.v
            if term.is_leaf and am.sig.has(term.label):
                return NormalizeResult("stuck", cur, 0, trace,
                                       "single-node constant-symbol evaluation step")
    load = cur.ev_load()
    for it in range(1, max_iters + 1):
        if is_case1(cur):
            return NormalizeResult("case1", cur, it - 1, trace)
        pair = _find_core(cur)
        if pair is None:
            cur = simplify(am, cur)
            if is_case1(cur):
                return NormalizeResult("case1", cur, it - 1, trace)
            return NormalizeResult("stuck", cur, it - 1, trace,
                                   "no unfold/fold pair but not single-node")
        try:
            cur = _resolve_core(am, cur, pair[0], pair[1], trace)
        except (TheoremContradiction, WitnessInconsistency, NotApplicable) as exc:
            return NormalizeResult("stuck", cur, it, trace, f"{type(exc).__name__}: {exc}")
        assert_valid(am, cur, "after case rewrite")
        new_load = cur.ev_load()
        if new_load > load:
            return NormalizeResult("stuck", cur, it, trace, "termination measure increased")
        load = new_load
    return NormalizeResult("stuck", cur, max_iters, trace, "iteration cap reached")


def extract_center(sp, fwd: Scheme, rev: Scheme) -> str:
    """From a single-node scheme pair for x in side 1 and y in side 2,
    recover the shared-subalgebra element z with phi1(z) = x, phi2(z) = y.

    Transporting the side-2 inequalities to side 1 turns both schemes into
    chains whose antisymmetry forces every intermediate value to coincide.
    """
    if not (is_case1(fwd) and is_case1(rev)):
        raise NotClosedChain("both schemes must be in single-node form")
    x = fwd.source.label
    y = fwd.target.label
    if rev.source.label != y or rev.target.label != x:
        raise NotClosedChain("reverse scheme endpoints do not match")

    def transported_chain(sch: Scheme) -> list[str]:
        vals = [sp.to_side1(sch.source.label)]
        for s in sch.steps:
            vals.append(sp.to_side1(s.right.label))
        return vals

    chain_fwd = transported_chain(fwd)
    chain_rev = transported_chain(rev)
    for chain in (chain_fwd, chain_rev):
        for a, b in zip(chain, chain[1:]):
            if not sp.a1.leq(a, b):
                raise NotClosedChain(f"transported chain breaks at {(a, b)}")
    if chain_fwd[0] != chain_rev[-1] or chain_fwd[-1] != chain_rev[0]:
        raise NotClosedChain("chains do not close")
    lo, hi = chain_fwd[0], chain_fwd[-1]
    if not (sp.a1.leq(lo, hi) and sp.a1.leq(hi, lo)):
        raise NotClosedChain("endpoints are not mutually comparable")
    # Antisymmetry: the whole chain is constant.
    base = chain_fwd[0]
    for v in chain_fwd + chain_rev:
        if v != base:
            raise NotClosedChain(f"chain value {v} differs from {base}")
    z = sp.center_of_side1(base)
    if z is None or sp.phi1[z] != x or sp.phi2[z] != y:
        raise NotClosedChain("endpoints are not images of a shared element")
    return z


# -- Serialization -------------------------------------------------------------

def scheme_to_lines(sch: Scheme) -> list[str]:
    lines = []
    if not sch.steps:
        lines.append(f"INEQ {print_term(sch.source)} <= {print_term(sch.target)}")
        return lines
    for s in sch.steps:
        if isinstance(s, IneqStep):
            lines.append(f"INEQ {print_term(s.left)} <= {print_term(s.right)}")
        elif isinstance(s, RelStep):
            fills = " ".join(s.trans.fillers)
            body = f"REL {s.tag} {print_term(s.trans.template)} {s.trans.slot}"
            if fills:
                body += f" {fills}"
            lines.append(f"{body} {print_term(s.u)} -> {print_term(s.v)}")
        else:
            tags = ",".join(s.tags)
            lines.append(f"REL MULTI:{tags} {print_term(s.left)} -> {print_term(s.right)}")
    return lines


def scheme_from_lines(sig: Signature, variables: list[str], lines: list[str]) -> Scheme:
    """Parse the line format produced by scheme_to_lines."""
    steps: list[Step] = []
    z_vars = [f"z{i}" for i in range(1, 65)]
    endpoints: tuple[Term, Term] | None = None
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("INEQ"):
            body = line[len("INEQ"):].strip()
            if "<=" not in body:
                raise ParseError(f"malformed INEQ line: {line!r}")
            l, r = body.split("<=", 1)
            left = parse_term(sig, variables, l.strip())
            right = parse_term(sig, variables, r.strip())
            steps.append(IneqStep(left, right))
        elif line.startswith("REL"):
            body = line[len("REL"):].strip()
            tag, rest = body.split(None, 1)
            if "->" not in rest:
                raise ParseError(f"malformed REL line: {line!r}")
            lhs, rhs = rest.rsplit("->", 1)
            if tag.startswith("MULTI:"):
                tags = tuple(tag[len("MULTI:"):].split(","))
                left = parse_term(sig, variables, lhs.strip())
                right = parse_term(sig, variables, rhs.strip())
                steps.append(MultiStep(left, right, tags))
                continue
            tokens = lhs.split()
            template, used = _read_prefix(sig, z_vars, tokens)
            slot = int(tokens[used])
            n = leaf_count(template)
            fills = tuple(tokens[used + 1: used + n])
            u_tokens = tokens[used + n:]
            u = parse_term(sig, variables, " ".join(u_tokens))
            v = parse_term(sig, variables, rhs.strip())
            trans = Translation(template, slot, fills)
            steps.append(RelStep(tag, trans, u, v, trans.apply(u), trans.apply(v)))
        else:
            raise ParseError(f"unknown scheme line {line!r}")
    if not steps:
        raise ParseError("empty scheme file")
    if len(steps) == 1 and isinstance(steps[0], IneqStep) and steps[0].left == steps[0].right:
        return Scheme(steps[0].left, steps[0].right, ())
    return Scheme(steps[0].left, steps[-1].right, tuple(steps))


def _read_prefix(sig: Signature, variables: list[str], tokens: list[str]) -> tuple[Term, int]:
    """Read one self-delimiting prefix word from the head of a token list."""
    need = 1
    used = 0
    for tok in tokens:
        used += 1
        if sig.has(tok):
            need += sig.arity(tok) - 1
        else:
            need -= 1
        if need == 0:
            return parse_term(sig, variables, " ".join(tokens[:used])), used
    raise ParseError("prefix word ended early")
