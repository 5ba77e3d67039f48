import pytest
from hypothesis import given, settings

from satinfolab.core import (Assignment, Clause, CnfInstance, DimacsError, DimensionError,
                             DuplicateVariableError, Literal, emit_dimacs, evaluate, parse_dimacs)
from satinfolab.trbs import build_instance

from conftest import all_assignments, instances, random_instance, seeded, sweep_models


def test_single_positive_literal():
    assert evaluate(CnfInstance.from_ints(1, [[1]]), Assignment.from_string("1"))


def test_first_clause_falsified():
    inst = CnfInstance.from_ints(2, [[1, -2], [2]])
    assert not evaluate(inst, Assignment.from_string("01"))


def test_theorem_instance_unique_model():
    inst = build_instance(5, 3)
    models = sweep_models(inst)
    assert [m.to_string() for m in models] == ["101"]
    assert evaluate(inst, Assignment.from_string("101"))


def test_empty_conjunction_is_true():
    inst = CnfInstance(4)
    assert all(evaluate(inst, a) for a in all_assignments(4))


def test_empty_clause_is_false_everywhere():
    inst = CnfInstance(3, (Clause.of(1), Clause()))
    assert not any(evaluate(inst, a) for a in all_assignments(3))


def test_dimension_error():
    with pytest.raises(DimensionError):
        evaluate(CnfInstance.from_ints(2, [[1]]), Assignment.from_string("1"))


def test_clause_normalizes_literal_order():
    assert Clause.of(-3, 1) == Clause.of(1, -3)
    assert [lit.var for lit in Clause.of(3, -1, 2)] == [1, 2, 3]


def test_clause_rejects_duplicate_variable():
    with pytest.raises(DuplicateVariableError):
        Clause.of(2, -2)


def test_instance_rejects_out_of_range_literal():
    with pytest.raises(ValueError):
        CnfInstance.from_ints(2, [[3]])


def test_literal_index_positive():
    with pytest.raises(ValueError):
        Literal(0)


def test_assignment_counter_roundtrip():
    for v in range(16):
        assert Assignment.from_int(v, 4).to_int() == v
    assert Assignment.from_int(1, 3).to_string() == "001"


@pytest.mark.parametrize("seed", range(20))
def test_clause_deletion_is_monotone(seed):
    rng = seeded(seed)
    inst = random_instance(rng, max_n=5, max_m=6, min_m=1)
    drop = rng.randrange(inst.m)
    smaller = CnfInstance(inst.n, inst.clauses[:drop] + inst.clauses[drop + 1:])
    for a in all_assignments(inst.n):
        if evaluate(inst, a):
            assert evaluate(smaller, a)


class TestDimacs:
    def test_parse_unit(self):
        inst = parse_dimacs("p cnf 1 1\n1 0\n")
        assert inst == CnfInstance.from_ints(1, [[1]])

    def test_parse_two_clauses(self):
        inst = parse_dimacs("c comment\np cnf 2 2\n1 -2 0\n2 0\n")
        assert inst.n == 2
        assert inst.clauses == (Clause.of(1, -2), Clause.of(2))

    def test_clause_may_span_lines(self):
        assert parse_dimacs("p cnf 3 1\n1 -2\n3 0\n").clauses == (Clause.of(1, -2, 3),)

    def test_duplicate_variable_rejected(self):
        with pytest.raises(DuplicateVariableError):
            parse_dimacs("p cnf 2 1\n1 1 0\n")

    @pytest.mark.parametrize("text", [
        "1 0\n",
        "p cnf x 1\n1 0\n",
        "p dnf 1 1\n1 0\n",
        "p cnf 1 1\n2 0\n",
        "p cnf 1 2\n1 0\n",
        "p cnf 1 1\n1\n",
        "p cnf 1 1\n1 a 0\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(DimacsError):
            parse_dimacs(text)

    def test_emit_unit(self):
        assert emit_dimacs(CnfInstance.from_ints(1, [[1]])) == "p cnf 1 1\n1 0\n"

    def test_emit_empty_clause(self):
        assert emit_dimacs(CnfInstance(2, (Clause(),))) == "p cnf 2 1\n0\n"

    def test_emit_normalized_order(self):
        assert emit_dimacs(CnfInstance.from_ints(3, [[3, -1]])) == "p cnf 3 1\n-1 3 0\n"

    def test_roundtrip_random(self):
        rng = seeded(1234)
        for _ in range(1000):
            inst = random_instance(rng, max_n=8, max_m=10)
            assert parse_dimacs(emit_dimacs(inst)) == inst

    @settings(max_examples=200, deadline=None)
    @given(instances(max_n=8))
    def test_roundtrip_property(self, inst):
        assert parse_dimacs(emit_dimacs(inst)) == inst
