import itertools

import pytest

from congen import lattice as L
from congen import zoo
from congen.algebra import make_abelian
from congen.commutator import (binary_commutator, commutator_table, is_abelian, is_nilpotent,
                               nilpotency_chain, pair_algebra)
from congen.congruence import Congruence, congruence_lattice, is_congruence, meet
from congen.errors import InconclusiveError, MalformedInputError
from oracles import commutator_subgroup, lower_central_series, normal_subgroups

FIXTURES = {
    "Z4": lambda: make_abelian([4]),
    "Z4xZ2": lambda: make_abelian([4, 2]),
    "D8": lambda: zoo.dihedral(4),
    "S3": lambda: zoo.symmetric(3),
    "Z9xZ3": lambda: make_abelian([9, 3]),
    "Z2xZ2": lambda: make_abelian([2, 2]),
    "Z3xZ3": lambda: make_abelian([3, 3]),
    "D12": lambda: zoo.dihedral(6),
}


@pytest.fixture(scope="module", params=sorted(FIXTURES))
def alg(request):
    return FIXTURES[request.param]()


def group_mul(a):
    return a.op(a.signature[0][0]).table


def test_examples(z4xz2, d8):
    one = Congruence.one(8)
    assert binary_commutator(z4xz2, one, one).is_zero()
    got = binary_commutator(d8, one, one)
    assert got.block_of(0) == [0, 2]
    for th in congruence_lattice(d8)[0]:
        assert binary_commutator(d8, th, Congruence.zero(8)).is_zero()


def test_bc1_bc2(alg):
    cons, lat = congruence_lattice(alg)
    tab = commutator_table(alg)
    m = len(cons)
    for i in range(m):
        for j in range(m):
            k = tab.entries[(i, j)]
            assert cons[k] <= meet(cons[i], cons[j])
            assert tab.entries[(j, i)] == k
    for i in range(m):
        for j in range(m):
            for g in range(m):
                if not lat.le(i, g):
                    continue
                for d in range(m):
                    if lat.le(j, d):
                        assert lat.le(tab.entries[(i, j)], tab.entries[(g, d)])


@pytest.mark.parametrize("name", ["D8", "S3", "D12", "Z4xZ2"])
def test_against_group_commutator(name):
    a = FIXTURES[name]()
    mul = group_mul(a).tolist()
    e = a.zero
    cons, _ = congruence_lattice(a)
    normals = normal_subgroups(mul, e)
    assert {frozenset(c.block_of(e)) for c in cons} == normals
    for al in cons:
        for be in cons:
            want = commutator_subgroup(mul, e, al.block_of(e), be.block_of(e))
            assert set(binary_commutator(a, al, be).block_of(e)) == set(want)


@pytest.mark.parametrize("name", ["D8", "S3", "D12"])
def test_lower_central_series(name):
    a = FIXTURES[name]()
    mul = group_mul(a).tolist()
    got = [frozenset(c.block_of(a.zero)) for c in nilpotency_chain(a)]
    assert got == [frozenset(s) for s in lower_central_series(mul, a.zero)]


def test_nilpotency(z4xz2, d8, s3):
    assert [c.is_zero() for c in nilpotency_chain(z4xz2)] == [True]
    assert is_nilpotent(d8) and not is_abelian(d8)
    chain = nilpotency_chain(s3)
    assert not is_nilpotent(s3)
    assert chain[-1].block_of(0) == [0, 3, 4]
    assert is_abelian(z4xz2)


def projective_cover_pairs(lat):
    cov = L.covers(lat)
    return [(p, q) for p in cov for q in cov if L.projective(lat, p, q)]


def test_transfer_across_projective_intervals(alg):
    cons, lat = congruence_lattice(alg)
    tab = commutator_table(alg).entries
    pairs = projective_cover_pairs(lat)
    assert pairs
    for (al, be), (ga, de) in pairs:
        for eps in range(len(cons)):
            assert lat.le(tab[(eps, be)], al) == lat.le(tab[(eps, de)], ga)
        assert lat.le(tab[(be, be)], al) == lat.le(tab[(de, de)], ga)


def is_prime_power(n):
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return n == 1


def test_simple_lattice_consequences(alg):
    cons, lat = congruence_lattice(alg)
    if not (len(cons) >= 3 and L.is_modular(lat) and L.is_simple_lattice(lat)):
        pytest.skip("hypothesis not met")
    for phi, psi in L.covers(lat):
        assert binary_commutator(alg, cons[psi], cons[psi]) <= cons[phi]
    assert is_nilpotent(alg)
    assert is_prime_power(alg.size)


@pytest.mark.parametrize("orders", [[2, 2], [3, 3], [5, 5]])
def test_simple_lattice_hypothesis_holds(orders):
    a = make_abelian(orders)
    cons, lat = congruence_lattice(a)
    assert L.is_simple_lattice(lat)
    for phi, psi in L.covers(lat):
        assert binary_commutator(a, cons[psi], cons[psi]) <= cons[phi]
    assert not L.is_simple_lattice(congruence_lattice(make_abelian([2, 3]))[1])


def test_without_group_structure_matches():
    g = make_abelian([2, 2])
    h = zoo.forget_group(g)
    one = Congruence.one(4)
    assert binary_commutator(h, one, one).is_zero()
    s = zoo.symmetric(3)
    t = zoo.forget_group(s)
    assert binary_commutator(t, Congruence.one(6), Congruence.one(6)) == \
        binary_commutator(s, Congruence.one(6), Congruence.one(6))


def test_no_malcev_term():
    a = zoo.set_with_identity(3)
    one = Congruence.one(3)
    with pytest.raises(InconclusiveError):
        binary_commutator(a, one, one, budget=50)


def test_pair_algebra(z4):
    alpha = congruence_lattice(z4)[0][1]  # cosets of {0, 2}
    aa, pid = pair_algebra(z4, alpha)
    assert aa.size == 8
    assert (pid >= 0).sum() == 8
    assert is_congruence(z4, alpha)


def test_size_mismatch(z4):
    with pytest.raises(MalformedInputError):
        binary_commutator(z4, Congruence.one(4), Congruence.one(8))


def test_join_distributive(alg):
    cons, lat = congruence_lattice(alg)
    tab = commutator_table(alg).entries
    m = len(cons)
    for i, j, k in itertools.product(range(m), repeat=3):
        assert tab[(lat.join(i, j), k)] == lat.join(tab[(i, k)], tab[(j, k)])
