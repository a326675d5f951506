import json

import pytest

from congen import zoo
from congen.algebra import AbelianSpec, make_abelian
from congen.congruence import congruence_lattice
from congen.decide import (ABELIAN, EXPANDED_M2_FREE, EXPANDED_SUFFICIENT, FG, INCONCLUSIVE,
                           MALCEV_SIMPLE, NILPOTENT, NOT_FG, PGROUP, PRODUCT, decide,
                           decide_abelian, decide_expanded, decide_malcev_simple, decide_nilpotent,
                           decide_pgroup, element_orders, group_is_nilpotent, recheck_decomposition,
                           recheck_splitting_witness, sylow_components, sylow_subgroups)
from congen.commutator import is_nilpotent
from congen.errors import InapplicableError
from congen.lattice import has_m2_interval
from oracles import element_order


def partitions(n, top=None):
    top = top or n
    if n == 0:
        yield []
        return
    for k in range(min(n, top), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


def abelian_pgroups(limit=81):
    """Exponent lists of every abelian p-group of order <= limit; Z2^6 is left out (2825 congruences)."""
    out = []
    for p in (2, 3, 5, 7):
        e = 1
        while p ** e <= limit:
            for part in partitions(e):
                orders = [p ** x for x in part]
                if orders != [2] * 6:
                    out.append(orders)
            e += 1
    return out


def members(orders, pred):
    import itertools
    import numpy as np
    coords = list(itertools.product(*[range(k) for k in orders]))
    return [int(np.ravel_multi_index(c, orders)) for c in coords if pred(c)]


def test_abelian_closed_form():
    assert sylow_components(AbelianSpec([12, 18])) == {2: [2, 1], 3: [2, 1]}
    assert decide_abelian(AbelianSpec([4, 2])).status == NOT_FG
    assert decide_abelian(AbelianSpec([27, 25, 25, 5])).status == FG
    v = decide_abelian(AbelianSpec([3, 25, 5]))
    assert v.status == NOT_FG and v.theorem == ABELIAN
    sp = v.witnesses["splitting_pair"]
    assert (sp["p"], sp["D"], sp["E"]) == (5, "5Z25 x Z5", "5Z25 x {0}")
    v = decide_abelian(AbelianSpec([9, 3]))
    assert (v.witnesses["splitting_pair"]["D"], v.witnesses["splitting_pair"]["E"]) == ("3Z9 x Z3", "3Z9 x {0}")
    assert decide_abelian([8, 8, 2]).status == FG
    assert decide_abelian([6]).status == FG


def test_pgroup_named_instances(d8, z9xz3):
    v = decide_pgroup(z9xz3)
    assert v.status == NOT_FG and v.theorem == PGROUP
    sp = v.witnesses["splitting_pair"]
    assert sp["delta"]["ideal"] == members([9, 3], lambda c: c[0] % 3 == 0)
    assert sp["eps"]["ideal"] == members([9, 3], lambda c: c[0] % 3 == 0 and c[1] == 0)
    assert recheck_splitting_witness(z9xz3, v)
    assert decide_pgroup(make_abelian([9, 9])).status == FG
    v = decide_pgroup(d8)
    assert v.status == FG and recheck_decomposition(d8, v)
    assert [c["ideal"] for c in v.witnesses["cutting_chain"]] == [[0], [0, 2], list(range(8))]
    assert [iv["size"] for iv in v.witnesses["intervals"]] == [2, 5]
    with pytest.raises(InapplicableError):
        decide_pgroup(zoo.symmetric(3))
    with pytest.raises(InapplicableError):
        decide_pgroup(zoo.prime_field(5))


def test_z4xz2_witness_is_the_torsion_pair(z4xz2):
    v = decide_pgroup(z4xz2)
    sp = v.witnesses["splitting_pair"]
    assert sp["delta"]["ideal"] == members([4, 2], lambda c: (2 * c[0]) % 4 == 0)
    assert sp["eps"]["ideal"] == members([4, 2], lambda c: c[0] % 2 == 0 and c[1] == 0)


def test_element_orders_and_sylow(d8):
    mul = d8.op("mul").table.tolist()
    assert element_orders(d8).tolist() == [element_order(mul, 0, x) for x in range(8)]
    a = make_abelian([4, 2, 3])
    syl = sylow_subgroups(a)
    assert sorted(map(len, syl.values())) == [3, 8]


def test_nilpotent():
    assert decide_nilpotent(make_abelian([2, 3])).status == FG
    a = make_abelian([4, 2, 3])
    v = decide_nilpotent(a)
    assert v.status == NOT_FG and v.theorem == NILPOTENT
    assert recheck_splitting_witness(a, v)
    sp = v.witnesses["splitting_pair"]
    assert set(sp["eps"]["ideal"]) == {0, 12}
    s3 = zoo.symmetric(3)
    v = decide_nilpotent(s3)
    assert v.status == INCONCLUSIVE and "nilpotent" in v.reason
    with pytest.raises(InapplicableError):
        decide_nilpotent(zoo.prime_field(3))


def test_expanded():
    f4 = zoo.field_square(2)
    v = decide_expanded(f4)
    assert v.status == INCONCLUSIVE and "m2_interval" in v.witnesses
    v = decide_expanded(make_abelian([9, 3]))
    assert v.status == NOT_FG and v.theorem == EXPANDED_M2_FREE
    v = decide_expanded(zoo.dihedral(4))
    assert v.status == FG and v.theorem == EXPANDED_SUFFICIENT
    with pytest.raises(InapplicableError):
        decide_expanded(zoo.set_with_identity(2))


def test_malcev_simple():
    v = decide_malcev_simple(make_abelian([2, 2]))
    assert v.status == FG and v.witnesses["lattice_size"] == 5
    assert decide_malcev_simple(make_abelian([9, 9])).status == FG
    g = make_abelian([9, 3])
    v = decide_malcev_simple(g)
    assert v.status == NOT_FG and v.theorem == MALCEV_SIMPLE
    assert recheck_splitting_witness(g, v)
    assert decide_malcev_simple(zoo.prime_field(7)).status == FG
    with pytest.raises(InapplicableError):
        decide_malcev_simple(zoo.dihedral(4))
    with pytest.raises(InapplicableError):
        decide_malcev_simple(zoo.set_with_identity(3), budget=50)


def test_pipeline_named_instances(d8):
    v = decide(AbelianSpec([4, 2]))
    assert v.status == NOT_FG and v.theorem == ABELIAN
    v = decide(d8)
    assert v.status == FG and v.theorem == PGROUP
    v = decide(zoo.symmetric(3))
    assert v.status == FG and v.theorem == EXPANDED_SUFFICIENT
    assert v.attempts[0][0] == NILPOTENT
    assert decide(make_abelian([2, 3])).status == FG
    assert decide(zoo.set_with_identity(1)).theorem == "trivial"


def test_klein_four_without_group_structure():
    g = make_abelian([2, 2])
    assert decide(g).theorem == PGROUP
    v = decide(zoo.forget_group(g))
    assert v.status == FG and v.theorem == MALCEV_SIMPLE


def test_f2_squared_resolves_through_product():
    r = zoo.field_square(2)
    v = decide(r)
    assert v.status == FG and v.theorem == PRODUCT
    assert [t for t, _ in v.attempts] == [EXPANDED_SUFFICIENT, MALCEV_SIMPLE]
    assert all(f["verdict"]["status"] == FG for f in v.witnesses["factors"])


def test_product_not_fg_propagates():
    a = zoo.forget_group(make_abelian([4, 2, 3]))
    v = decide(a)
    assert v.status == NOT_FG and v.theorem == PRODUCT
    assert recheck_splitting_witness(a, v)


def test_inconclusive_without_any_criterion():
    v = decide(zoo.set_with_identity(3))
    assert v.status == INCONCLUSIVE
    assert len(v.attempts) == 2


@pytest.mark.parametrize("orders", abelian_pgroups(), ids=lambda o: "x".join(map(str, o)))
def test_abelian_pgroup_consistency(orders):
    a = make_abelian(orders)
    va = decide_abelian(AbelianSpec(orders))
    vp = decide_pgroup(a)
    assert va.status == vp.status
    assert decide_expanded(a).status == vp.status
    _, lat = congruence_lattice(a)
    try:
        vm = decide_malcev_simple(a)
    except InapplicableError:
        vm = None
    if vm is not None:
        assert vm.status == vp.status
    for v, target in ((va, None), (vp, a), (vm, a)):
        if v is not None and v.status == NOT_FG:
            assert recheck_splitting_witness(target, v)
    if vp.status == FG:
        assert recheck_decomposition(a, vp)


def expanded_fixtures():
    return [make_abelian([2, 3]), make_abelian([2, 2, 3]), make_abelian([4, 2, 3]), zoo.field_square(2),
            zoo.field_square(3), zoo.symmetric(3), zoo.dihedral(6), make_abelian([6, 2]),
            zoo.prime_field(2), make_abelian([9, 3])]


def test_expanded_never_refutes_with_m2():
    for a in expanded_fixtures():
        v = decide_expanded(a)
        _, lat = congruence_lattice(a)
        if has_m2_interval(lat):
            assert v.status != NOT_FG, a.name


def test_verdict_json():
    v = decide(make_abelian([9, 3]))
    data = json.loads(json.dumps(v.to_json()))
    assert data["status"] == NOT_FG
    assert set(data["witnesses"]) >= {"splitting_pair", "cutting_chain"}


def test_group_nilpotency_matches_commutator_chain():
    for a in (zoo.dihedral(4), zoo.dihedral(6), zoo.symmetric(3), zoo.symmetric(4), make_abelian([4, 2, 3]),
              zoo.dihedral(8)):
        assert group_is_nilpotent(a) == is_nilpotent(a), a.name


def test_nilpotent_route_avoids_pair_algebra():
    # A(1) would have 375^2 elements
    v = decide(make_abelian([3, 25, 5]))
    assert v.status == NOT_FG and v.theorem == NILPOTENT
    assert recheck_splitting_witness(make_abelian([3, 25, 5]), v)


def test_closed_form_recheck_rejects_tampered_witness():
    v = decide_abelian(AbelianSpec([9, 3]))
    assert recheck_splitting_witness(None, v)
    sp = v.witnesses["splitting_pair"]
    swapped = dict(sp, D_members=sp["E_members"], E_members=sp["D_members"])
    assert not recheck_splitting_witness(None, type(v)(v.status, v.theorem, {"splitting_pair": swapped}))
    not_sub = dict(sp, E_members=[0, 1])
    assert not recheck_splitting_witness(None, type(v)(v.status, v.theorem, {"splitting_pair": not_sub}))
    whole = dict(sp, D_members=list(range(27)))
    assert not recheck_splitting_witness(None, type(v)(v.status, v.theorem, {"splitting_pair": whole}))
