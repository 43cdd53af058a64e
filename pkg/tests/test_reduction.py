from collections import Counter

import pytest

from tmsatlab.machine import (
    ComputationHistory,
    Machine,
    TransitionTable,
    accepts_within,
    initial_configuration,
)
from tmsatlab.reduction import (
    GridIncompatibleError,
    MalformedModelError,
    ReductionError,
    clause_counts,
    concatenate,
    decode_assignment,
    encode_history,
    input_part,
    reduce_machine,
    run_part,
)
from tmsatlab.sat import check_model, solve_dpll, to_cnf


def kind_count(f, kind):
    return sum(1 for mn in f.var_meanings.values() if mn.kind == kind)


class TestReduce:
    def test_variable_grid_sizes(self, m_accept1):
        f = reduce_machine(m_accept1, "1", 1)
        assert kind_count(f, "Q") == 6
        assert kind_count(f, "H") == 4
        assert kind_count(f, "S") == 12

    def test_satisfiable_iff_accepting(self, m_accept1):
        assert solve_dpll(to_cnf(reduce_machine(m_accept1, "1", 1))).satisfiable
        assert not solve_dpll(to_cnf(reduce_machine(m_accept1, "0", 2))).satisfiable

    def test_input_symbol_outside_alphabet(self, m_accept1):
        with pytest.raises(ReductionError):
            reduce_machine(m_accept1, "x", 2)

    def test_input_longer_than_grid(self, m_accept1):
        with pytest.raises(ReductionError):
            reduce_machine(m_accept1, "111", 1)

    def test_bound_must_be_positive(self, m_accept1):
        with pytest.raises(ValueError):
            reduce_machine(m_accept1, "1", 0)

    def test_deterministic_output(self, m_parity):
        from tmsatlab.sat import to_dimacs
        a = to_dimacs(reduce_machine(m_parity, "11", 4))
        b = to_dimacs(reduce_machine(m_parity, "11", 4))
        assert a == b


class TestPartition:
    def test_input_part_is_four_unit_clauses(self, m_accept1):
        cy = input_part(reduce_machine(m_accept1, "1", 1))
        assert cy.clause_count == 4
        assert all(len(c.literals) == 1 for c in cy.clauses)
        assert all(c.group == "G4" for c in cy.clauses)

    def test_input_part_of_run_part_is_empty(self, m_accept1):
        f = reduce_machine(m_accept1, "1", 1)
        assert input_part(run_part(f)).clause_count == 0

    def test_partition_counts(self, m_accept1):
        f = reduce_machine(m_accept1, "1", 2)
        assert input_part(f).clause_count + run_part(f).clause_count == f.clause_count

    def test_run_part_groups(self, m_parity):
        f = reduce_machine(m_parity, "11", 4)
        assert {c.group for c in run_part(f).clauses} == {"G1", "G2", "G3", "G5", "G6"}

    def test_group_counts(self, m_accept1):
        f = reduce_machine(m_accept1, "1", 1)
        counts = clause_counts(f)
        assert counts["G4"] == 4
        assert counts["G5"] == 1
        assert sum(counts.values()) == f.clause_count


class TestConcatenate:
    def test_reassembly_is_original_multiset(self, m_accept1):
        f = reduce_machine(m_accept1, "1", 2)
        back = concatenate(input_part(f), run_part(f))
        assert Counter(back.clauses) == Counter(f.clauses)

    def test_compatible_same_machine_satisfiable(self, m_accept1):
        cy = input_part(reduce_machine(m_accept1, "1", 2))
        cr = run_part(reduce_machine(m_accept1, "1", 2))
        assert solve_dpll(to_cnf(concatenate(cy, cr))).satisfiable

    def test_mismatched_input_part_pins_unsat(self, m_accept1):
        cy = input_part(reduce_machine(m_accept1, "0", 2))
        cr = run_part(reduce_machine(m_accept1, "1", 2))
        assert not solve_dpll(to_cnf(concatenate(cy, cr))).satisfiable

    def test_incompatible_grids_raise(self, m_accept1, m_parity):
        cy = input_part(reduce_machine(m_accept1, "1", 2))
        cr = run_part(reduce_machine(m_parity, "11", 2))
        with pytest.raises(GridIncompatibleError):
            concatenate(cy, cr)

    def test_different_bounds_raise(self, m_accept1):
        cy = input_part(reduce_machine(m_accept1, "1", 2))
        cr = run_part(reduce_machine(m_accept1, "1", 3))
        with pytest.raises(GridIncompatibleError):
            concatenate(cy, cr)

    def test_argument_roles_enforced(self, m_accept1):
        f = reduce_machine(m_accept1, "1", 1)
        with pytest.raises(ValueError):
            concatenate(run_part(f), run_part(f))
        with pytest.raises(ValueError):
            concatenate(input_part(f), f)


def accept_at_start_machine():
    return Machine(
        name="trivial",
        states=frozenset(["qa"]),
        input_alphabet=frozenset(["0", "1"]),
        tape_alphabet=frozenset(["0", "1", "_"]),
        blank="_",
        table=TransitionTable(),
        start="qa",
        accept="qa",
    )


class TestEncodeHistory:
    def test_induced_assignment_satisfies(self, m_accept1):
        _, witness = accepts_within(m_accept1, "1", 1)
        f, assignment = encode_history(m_accept1, witness, 1)
        assert check_model(to_cnf(f), assignment)

    def test_clause_count_exceeds_transitions(self, fixture_set):
        for m in fixture_set:
            for y in ("", "1", "11"):
                accepted, witness = accepts_within(m, y, 4)
                if not accepted:
                    continue
                f, _ = encode_history(m, witness, 4)
                assert f.clause_count > witness.transitions

    def test_zero_transition_history_padded(self):
        m = accept_at_start_machine()
        h = ComputationHistory((initial_configuration(m, ""),), "")
        f, assignment = encode_history(m, h, 1)
        assert check_model(to_cnf(f), assignment)
        assert solve_dpll(to_cnf(f)).satisfiable

    def test_bound_violation(self, m_parity):
        _, witness = accepts_within(m_parity, "11", 4)
        with pytest.raises(ReductionError):
            encode_history(m_parity, witness, 2)

    def test_non_accepting_history_rejected(self, m_accept1):
        h = ComputationHistory((initial_configuration(m_accept1, "1"),), "1")
        with pytest.raises(ReductionError):
            encode_history(m_accept1, h, 1)


class TestDecode:
    def test_solve_then_decode(self, m_accept1):
        f = reduce_machine(m_accept1, "1", 1)
        result = solve_dpll(to_cnf(f))
        h = decode_assignment(f, result.assignment)
        assert [(c.state, c.head) for c in h.configs] == [("q0", 0), ("qacc", 1)]
        assert h.configs[1].tape == ("1", "_")

    def test_encode_decode_round_trip(self, fixture_set):
        for m in fixture_set:
            for y in ("", "1", "11"):
                accepted, witness = accepts_within(m, y, 4)
                if not accepted:
                    continue
                f, assignment = encode_history(m, witness, 4)
                assert decode_assignment(f, assignment) == witness

    def test_reencoding_decoded_history(self, m_parity):
        f = reduce_machine(m_parity, "11", 4)
        result = solve_dpll(to_cnf(f))
        h = decode_assignment(f, result.assignment)
        f2, induced = encode_history(m_parity, h, 4)
        assert check_model(to_cnf(f2), induced)

    def test_malformed_model_rejected(self, m_accept1):
        f = reduce_machine(m_accept1, "1", 1)
        result = solve_dpll(to_cnf(f))
        broken = dict(result.assignment)
        # force a second state variable true at time 0
        for vid, mn in f.var_meanings.items():
            if mn.kind == "Q" and mn.time == 0 and not broken[vid]:
                broken[vid] = True
                break
        with pytest.raises(MalformedModelError):
            decode_assignment(f, broken)

    def test_unsatisfying_assignment_rejected(self, m_accept1):
        f = reduce_machine(m_accept1, "1", 1)
        result = solve_dpll(to_cnf(f))
        broken = dict(result.assignment)
        # falsify the G5 unit without breaking uniqueness
        for vid, mn in f.var_meanings.items():
            if mn.kind == "Q" and mn.time == 1:
                broken[vid] = mn.state == "qrej"
        with pytest.raises((ValueError, MalformedModelError)):
            decode_assignment(f, broken)
