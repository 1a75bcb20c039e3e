import random

from oalg import relations
from oalg.algebra import all_congruences, chain, is_order_congruence, leq_theta
from oalg.closure import (
    bfs_generated_quasiorder,
    check_generated_scheme,
    enumerate_translations,
    gen_compatible_quasiorder,
    gen_order_congruence,
    one_slot_step_relation,
    step_relation,
)
from oalg.generators import random_algebra, random_relation
from oalg.signature import SIG1
from oalg.terms import print_term

CH3 = chain(3, SIG1)
TOTAL = frozenset((a, b) for a in CH3.carrier for b in CH3.carrier)


def test_enumerate_translations_identity_only():
    out = enumerate_translations(CH3, ["e0"], 0)
    assert len(out) == 1 and out[0].template.label == "z1"


def test_enumerate_translations_count():
    # templates f z1 z2 and g z1 z2 z3; fillers over {e0} + constant values
    out = enumerate_translations(CH3, ["e0"], 1)
    assert len(out) == 1 + 2 * 2 + 3 * 4


def test_enumerate_translations_no_labels():
    bare = CH3
    out = enumerate_translations(bare, [], 1)
    # fillers still include the interpreted constants e0, e2
    assert all(set(t.fillers) <= {"e0", "e2"} for t in out)


def test_step_relation_examples():
    assert step_relation(CH3, CH3.carrier, frozenset(), 1) == frozenset()
    delta = relations.identity(CH3.carrier)
    assert delta <= step_relation(CH3, CH3.carrier, delta, 1)
    stepped = step_relation(CH3, CH3.carrier, frozenset({("e2", "e0")}), 1)
    assert ("e2", "e0") in stepped and ("e2", "e1") in stepped


def test_generated_quasiorder_examples():
    assert gen_compatible_quasiorder(CH3, frozenset()).relation == CH3.order
    assert gen_compatible_quasiorder(CH3, {("e2", "e0")}).relation == TOTAL
    assert gen_compatible_quasiorder(CH3, CH3.order).relation == CH3.order


def test_generated_congruence_examples():
    res = gen_order_congruence(CH3, frozenset())
    assert res.leq == CH3.order
    assert res.theta == relations.identity(CH3.carrier)
    res = gen_order_congruence(CH3, {("e0", "e1")})
    assert ("e1", "e0") in res.leq
    assert ("e0", "e1") in res.theta and ("e2", "e0") not in res.theta
    res = gen_order_congruence(CH3, relations.identity(CH3.carrier))
    assert res.theta == relations.identity(CH3.carrier)


def test_witnesses_validate():
    clo = gen_compatible_quasiorder(CH3, {("e2", "e0")})
    for (a, b) in sorted(clo.relation):
        sch = clo.witness(a, b)
        check_generated_scheme(CH3, {("e2", "e0")}, sch, allow_inverse=False)
    sym = gen_order_congruence(CH3, {("e0", "e1")})
    for (a, b) in sorted(sym.leq):
        sch = sym.witness(a, b)
        check_generated_scheme(CH3, {("e0", "e1")}, sch, allow_inverse=True)


def test_witness_none_for_unrelated():
    clo = gen_compatible_quasiorder(CH3, frozenset())
    assert clo.witness("e2", "e0") is None


def test_least_closure():
    rng = random.Random(11)
    for _ in range(15):
        alg = random_algebra(rng, SIG1, rng.randrange(2, 5))
        hyp = random_relation(rng, alg.carrier, 2)
        sigma = gen_compatible_quasiorder(alg, hyp).relation
        base = set(alg.order) | set(hyp)
        for pair in sorted(sigma - base)[:3]:
            # derived pairs regenerate from the rest of the closure
            rest = frozenset(sigma - {pair})
            assert pair in gen_compatible_quasiorder(alg, rest).relation


def test_oracle_equivalence_sample():
    rng = random.Random(12)
    for _ in range(40):
        alg = random_algebra(rng, SIG1, rng.randrange(2, 5))
        hyp = random_relation(rng, alg.carrier, 3)
        fix = gen_compatible_quasiorder(alg, hyp).relation
        assert bfs_generated_quasiorder(alg, alg.carrier, hyp, 3, 6) == fix


def test_literal_and_one_slot_step_relations_agree():
    rng = random.Random(13)
    for _ in range(6):
        alg = random_algebra(rng, SIG1, rng.randrange(2, 4))
        hyp = random_relation(rng, alg.carrier, 2)
        for depth in (1, 2):
            lit = step_relation(alg, alg.carrier, hyp, depth)
            fast = one_slot_step_relation(alg, hyp, depth)
            assert lit == fast


def test_generated_congruence_below_any_order_congruence():
    rng = random.Random(14)
    for _ in range(12):
        alg = random_algebra(rng, SIG1, rng.randrange(2, 5))
        for theta in all_congruences(alg):
            if not is_order_congruence(alg, theta):
                continue
            lt = leq_theta(alg, theta)
            pool = sorted(lt)[:4]
            hyp = frozenset(pool)
            clo = gen_compatible_quasiorder(alg, hyp)
            eq = clo.relation & relations.inverse(clo.relation)
            assert eq <= theta


def test_scheme_display_shape():
    clo = gen_compatible_quasiorder(CH3, {("e2", "e0")})
    sch = clo.witness("e1", "e0")
    assert sch.source.label == "e1" and sch.target.label == "e0"
    assert print_term(sch.source) == "e1"
