import numpy as np
import pytest

from congen import zoo
from congen.algebra import make_abelian, quotient
from congen.clone import compose, delta, random_compatible
from congen.congruence import congruence_lattice, is_compatible
from congen.errors import MalformedInputError, PreconditionError
from congen.expanded import (decompose_product, extend, ideal_from_members, ideal_lattice,
                             induced_congruences, is_cutting_ideal, lift_tilde, maps_into,
                             modified_projection, product_function, product_map_e,
                             project_to_quotient, shift, skew_free_check, transversal)
from congen.tables import FnTable
from checks import run_extension_samples, run_shift_samples, shift_identities
from oracles import normal_subgroups, subgroups_by_subsets


def test_ideal_lattice_sizes(z4, z9xz3, d8):
    ideals, _ = ideal_lattice(z4)
    assert [i.members for i in ideals] == [(0,), (0, 2), (0, 1, 2, 3)]
    ideals, _ = ideal_lattice(z9xz3)
    assert len(ideals) == 10
    assert {frozenset(i.members) for i in ideals} == normal_subgroups(z9xz3.plus.tolist(), 0)
    ideals, _ = ideal_lattice(d8)
    assert {frozenset(i.members) for i in ideals} == normal_subgroups(d8.op("mul").table.tolist(), 0)
    assert len(ideals) == 6


def test_ideals_are_subgroups(z4xz2):
    ideals, _ = ideal_lattice(z4xz2)
    assert {frozenset(i.members) for i in ideals} == set(subgroups_by_subsets(z4xz2.plus.tolist(), 0))


def test_ideal_from_members(z4):
    assert ideal_from_members(z4, [2, 0]).members == (0, 2)
    with pytest.raises(MalformedInputError):
        ideal_from_members(z4, [0, 1])
    with pytest.raises(MalformedInputError):
        ideal_from_members(z4, [2])
    with pytest.raises(PreconditionError):
        ideal_lattice(zoo.set_with_identity(2))


def test_ideal_congruence_roundtrip(z9xz3):
    ideals, _ = ideal_lattice(z9xz3)
    cons, _ = congruence_lattice(z9xz3)
    assert [i.congruence() for i in ideals] == cons


def test_transversal_examples(z4, z9xz3):
    t = transversal(z4, ideal_from_members(z4, [0, 2]))
    assert t.reps == (0, 1) and t.r(3) == 1
    assert transversal(z4, ideal_from_members(z4, range(4))).reps == (0,)
    i = ideal_from_members(z9xz3, [3 * a + b for a in (0, 3, 6) for b in range(3)])
    assert transversal(z9xz3, i).reps == (0, 3, 6)


def test_random_transversal_invariants(z9xz3):
    rng = np.random.default_rng(3)
    i = ideal_from_members(z9xz3, [0, 9, 18])
    lab = i.congruence().array
    for _ in range(20):
        t = transversal(z9xz3, i, rng)
        assert t.reps[0] == 0
        assert len({int(lab[r]) for r in t.reps}) == len(t.reps) == 9
        assert all(lab[t.r(x)] == lab[x] for x in range(27))


def test_shift_examples(z4, d8):
    i = ideal_from_members(z4, [0, 2])
    t = transversal(z4, i)
    f = FnTable.from_function(4, 1, lambda x: (x + 1) % 4)
    got = shift(z4, i, t, f, (1,))
    assert got.values.tolist() == [2, 3, 0, 1]
    assert maps_into(got, i)
    g = FnTable.from_function(4, 2, lambda x, y: (x + 2 * y) % 4)
    assert shift(z4, i, t, g, (0, 0)) == g
    zero = FnTable.constant(4, 0, 2)
    for al in [(0, 1), (1, 1), (1, 0)]:
        assert shift(z4, i, t, zero, al) == zero
    with pytest.raises(PreconditionError):
        shift(z4, i, t, f, (3,))
    with pytest.raises(PreconditionError):
        shift(z4, i, t, f, (0, 0))


@pytest.mark.parametrize("name,members", [
    ("Z4", [0, 2]), ("Z4xZ2", [0, 4]), ("Z4xZ2", [0, 2, 4, 6]), ("Z4xZ2", [0, 1]),
    ("D8", [0, 2]), ("S3", [0, 3, 4]), ("Z9xZ3", [0, 9, 18])])
def test_shift_rules_randomised(name, members):
    a = {"Z4": lambda: make_abelian([4]), "Z4xZ2": lambda: make_abelian([4, 2]),
         "D8": lambda: zoo.dihedral(4), "S3": lambda: zoo.symmetric(3),
         "Z9xZ3": lambda: make_abelian([9, 3])}[name]()
    i = ideal_from_members(a, members)
    rng = np.random.default_rng(len(members) * 31 + a.size)
    total = 4 if a.size <= 8 else 3
    assert run_shift_samples(a, i, 30, rng, max_total=total) == []
    assert run_shift_samples(a, i, 10, rng, max_total=total, compatible_only=True) == []


def test_composition_rule_needs_coset_preserving_f(z4):
    i = ideal_from_members(z4, [0, 2])
    t = transversal(z4, i)
    f = FnTable(1, 4, [0, 1, 3, 3])  # 0 and 2 share a coset, their images do not
    g = FnTable(1, 4, [2, 2, 2, 2])
    assert dict(shift_identities(z4, i, t, f, g, (0, 0)))["zeta"]
    assert "compose" not in dict(shift_identities(z4, i, t, f, g, (0, 0)))
    lead = t.r(g(0))
    assert shift(z4, i, t, compose(g, f), (0,)) != compose(shift(z4, i, t, g, (0,)),
                                                         shift(z4, i, t, f, (lead,)))


@pytest.mark.parametrize("name,members", [("Z4", [0, 2]), ("D8", [0, 2]), ("S3", [0, 3, 4]),
                                          ("Z8", [0, 4]), ("Z8", [0, 2, 4, 6])])
def test_extension_randomised(name, members):
    a = {"Z4": lambda: make_abelian([4]), "D8": lambda: zoo.dihedral(4),
         "S3": lambda: zoo.symmetric(3), "Z8": lambda: make_abelian([8])}[name]()
    i = ideal_from_members(a, members)
    assert is_cutting_ideal(a, i)
    assert run_extension_samples(a, i, 15, np.random.default_rng(5)) == []


def test_cutting_ideals(z4, z4xz2, d8):
    assert is_cutting_ideal(z4, ideal_from_members(z4, [0, 2]))
    assert is_cutting_ideal(d8, ideal_from_members(d8, [0, 2]))
    ideals, _ = ideal_lattice(z4xz2)
    assert [i.size for i in ideals if is_cutting_ideal(z4xz2, i)] == [1, 8]


def test_extend_examples(z4, z4xz2):
    i = ideal_from_members(z4, [0, 2])
    ident = FnTable.identity(2)
    assert extend(z4, i, ident, 0) == modified_projection(z4, i, 1, 1)
    assert extend(z4, i, FnTable.constant(2, 1), 2) == FnTable.constant(4, 2)
    plus2 = FnTable(1, 2, [1, 0])  # x + 2 on I's indexing
    assert extend(z4, i, plus2, 0).values.tolist() == [2, 0, 0, 0]
    with pytest.raises(PreconditionError):
        extend(z4, i, ident, 1)
    with pytest.raises(PreconditionError):
        extend(z4xz2, ideal_from_members(z4xz2, [0, 4]), ident, 0)
    with pytest.raises(MalformedInputError):
        extend(z4, i, FnTable.identity(4), 0)


def test_modified_projection(z4, d8, s3):
    i = ideal_from_members(z4, [0, 2])
    o21 = modified_projection(z4, i, 2, 1)
    assert o21(2, 0) == 2 and o21(1, 2) == 0 and o21(2, 2) == 2 and o21(0, 2) == 0
    assert modified_projection(z4, i, 1, 1) == delta(o21)
    for a, mem in ((z4, [0, 2]), (d8, [0, 2]), (s3, [0, 3, 4])):
        j = ideal_from_members(a, mem)
        for n in (1, 2, 3):
            for m in range(1, n + 1):
                assert is_compatible(a, modified_projection(a, j, n, m))
    with pytest.raises(MalformedInputError):
        modified_projection(z4, i, 2, 3)


def test_induced_congruences(z4, z9xz3):
    assert len(induced_congruences(z4, ideal_from_members(z4, [0, 2]))) == 2
    i = ideal_from_members(z9xz3, [3 * a + b for a in (0, 3, 6) for b in range(3)])
    assert len(induced_congruences(z9xz3, i)) == 6
    assert len(induced_congruences(z4, ideal_from_members(z4, [0]))) == 1


def test_lift_tilde(z4):
    cons, _ = congruence_lattice(z4)
    alpha = cons[1]
    assert lift_tilde(z4, alpha, FnTable.identity(2)).values.tolist() == [0, 1, 0, 1]
    assert lift_tilde(z4, alpha, FnTable.constant(2, 1)) == FnTable.constant(4, 1)
    f = FnTable(1, 2, [1, 0])
    assert lift_tilde(z4, alpha, f).values.tolist() == [1, 0, 1, 0]


@pytest.mark.parametrize("name", ["Z4", "D8", "Z9xZ3", "S3"])
def test_lift_tilde_compatible_and_projects_back(name):
    a = {"Z4": lambda: make_abelian([4]), "D8": lambda: zoo.dihedral(4),
         "Z9xZ3": lambda: make_abelian([9, 3]), "S3": lambda: zoo.symmetric(3)}[name]()
    from congen.lattice import cutting_elements
    cons, lat = congruence_lattice(a)
    rng = np.random.default_rng(11)
    for k in cutting_elements(lat):
        alpha = cons[k]
        q = quotient(a, alpha)
        for arity in (1, 2):
            f = random_compatible(q, arity, rng)
            for r in (None, rng):
                lifted = lift_tilde(a, alpha, f, r)
                assert is_compatible(a, lifted)
                assert project_to_quotient(a, alpha, lifted) == f


def test_lift_tilde_needs_cutting(z4xz2):
    cons, lat = congruence_lattice(z4xz2)
    with pytest.raises(PreconditionError):
        lift_tilde(z4xz2, cons[1], FnTable.identity(cons[1].n_blocks))


def test_skew_free():
    z2, z3 = make_abelian([2]), make_abelian([3])
    assert skew_free_check(z2, z3)
    assert not skew_free_check(z2, z2)
    assert not skew_free_check(make_abelian([4]), z2)


def test_decompose_product():
    from congen.algebra import direct_product
    z2, z3 = make_abelian([2]), make_abelian([3])
    p = direct_product(z2, z3)
    f, g = decompose_product(z2, z3, FnTable.identity(6))
    assert f == FnTable.identity(2) and g == FnTable.identity(3)
    rng = np.random.default_rng(2)
    for arity in (1, 2, 3):
        h = random_compatible(p, arity, rng)
        f, g = decompose_product(z2, z3, h)
        assert product_function(f, g) == h
        assert is_compatible(z2, f) and is_compatible(z3, g)
    swap = FnTable(2, 6, product_map_e(3, 2).values)  # mixes the factors the wrong way
    with pytest.raises(PreconditionError):
        decompose_product(z2, z3, swap)


def test_map_e():
    from congen.algebra import direct_product
    z2, z3 = make_abelian([2]), make_abelian([3])
    e = product_map_e(2, 3)
    assert e(1 * 3 + 2, 0 * 3 + 1) == 1 * 3 + 1
    assert is_compatible(direct_product(z2, z3), e)
    # without skew-freeness it fails: Z4 x Z2 has a diagonal congruence
    assert not is_compatible(make_abelian([4, 2]), product_map_e(4, 2))
