"""The parity-counting machine over a stored run-part library.

Builds the machine from encoded accepting computations, executes its
concatenate-solve-count algorithm, accounts the (i, j, k) transition and
clause counts, checks their ordering claims, and searches for a
shared-particular-table witness among the decoded computations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .machine import (
    ComputationHistory,
    Machine,
    extract_particular_table,
    table_generates,
)
from .reduction import (
    LabeledFormula,
    clause_counts,
    concatenate,
    encode_history,
    decode_assignment,
    input_part,
    reduce_machine,
    run_part,
    _grid_signature,
)
from .sat import solve_dpll, to_cnf


class ParityMachineError(Exception):
    pass


class UndecodedInstanceError(ParityMachineError):
    """Metrics requested for an instance with no decoded history."""


@dataclass
class ParityMachine:
    """A machine whose program embeds a library of run parts; on input y
    it counts the satisfiable concatenations and accepts on odd parity."""

    library: List[LabeledFormula]
    base: Machine
    bound: int
    incompatible_indices: Tuple[int, ...] = ()


@dataclass
class InstanceResult:
    index: int
    clause_count: int
    groups: Dict[str, int]
    satisfiable: bool
    history: Optional[ComputationHistory]


@dataclass
class RunReport:
    input: str
    bound: int
    instances: List[InstanceResult]
    counter: int
    accept: bool
    cost: int
    input_clause_count: int
    designated: Optional[int]  # first satisfiable instance, if any


@dataclass
class Metrics:
    i: int  # clauses materialized across the whole run (machine-step lower bound)
    j: int  # clause count of the designated instance
    k: int  # transitions of its decoded history


@dataclass
class ClaimReport:
    i_gt_j: bool
    j_gt_k: bool
    i_eq_k: bool
    chain: bool
    equality_incompatible_with_chain: bool


def build_parity_machine(histories, bound: int, base: Machine) -> ParityMachine:
    """Encode each (machine, accepting history) pair and keep only the
    run part. Entries whose variable grid cannot unify with the base
    machine's are flagged as incompatible."""
    base_sig = _grid_signature(reduce_machine(base, "", bound))
    library: List[LabeledFormula] = []
    incompatible: List[int] = []
    for idx, (m, h) in enumerate(histories):
        formula, _ = encode_history(m, h, bound)
        entry = run_part(formula)
        library.append(entry)
        if _grid_signature(entry) != base_sig:
            incompatible.append(idx)
    return ParityMachine(library, base, bound, tuple(incompatible))


def run_parity_machine(pm: ParityMachine, y: str) -> RunReport:
    """The embedded algorithm: build the input part for y, concatenate it
    with every stored run part in library order, solve each, count the
    satisfiable ones, and accept iff the count is odd.

    Grid-incompatible entries count as unsatisfiable.
    """
    cy = input_part(reduce_machine(pm.base, y, pm.bound))
    instances: List[InstanceResult] = []
    counter = 0
    for idx, cr in enumerate(pm.library):
        groups = clause_counts(cr)
        groups["G4"] += cy.clause_count
        total = cy.clause_count + cr.clause_count
        if idx in pm.incompatible_indices:
            instances.append(InstanceResult(idx, total, groups, False, None))
            continue
        cj = concatenate(cy, cr)
        result = solve_dpll(to_cnf(cj))
        history = None
        if result.satisfiable:
            counter += 1
            history = decode_assignment(cj, result.assignment)
        instances.append(InstanceResult(idx, total, groups, result.satisfiable, history))
    cost = sum(inst.clause_count for inst in instances) + cy.clause_count
    designated = next((inst.index for inst in instances if inst.satisfiable), None)
    return RunReport(
        input=y,
        bound=pm.bound,
        instances=instances,
        counter=counter,
        accept=counter % 2 == 1,
        cost=cost,
        input_clause_count=cy.clause_count,
        designated=designated,
    )


def transition_metrics(report: RunReport, chosen: int) -> Metrics:
    """(i, j, k) for a chosen satisfiable instance: the run's total
    materialized clauses, the instance's clause count, and the decoded
    history's transition count."""
    inst = report.instances[chosen]
    if not inst.satisfiable or inst.history is None:
        raise UndecodedInstanceError(
            f"instance {chosen} is unsatisfiable; no decoded history")
    return Metrics(i=report.cost, j=inst.clause_count, k=inst.history.transitions)


def check_counting_claims(m: Metrics) -> ClaimReport:
    """Pure arithmetic on a metrics triple: the strict chain i > j > k
    excludes i = k."""
    i_gt_j = m.i > m.j
    j_gt_k = m.j > m.k
    i_eq_k = m.i == m.k
    chain = i_gt_j and j_gt_k
    return ClaimReport(
        i_gt_j=i_gt_j,
        j_gt_k=j_gt_k,
        i_eq_k=i_eq_k,
        chain=chain,
        equality_incompatible_with_chain=not (chain and i_eq_k),
    )


@dataclass
class SharedTableWitness:
    candidate: int
    input: str
    instance_a: int
    instance_b: int


@dataclass
class SharedTableSearchReport:
    witness: Optional[SharedTableWitness]
    examined: List[Tuple[int, str, int]]  # (candidate, input, satisfiable count)


def find_shared_table_witness(candidates: List[ParityMachine],
                              inputs: List[str]) -> SharedTableSearchReport:
    """Exhaustive search for a decoded computation whose particular table
    also generates the decoded computation of a different satisfiable
    instance on the same input."""
    examined: List[Tuple[int, str, int]] = []
    for ci, pm in enumerate(candidates):
        for y in inputs:
            report = run_parity_machine(pm, y)
            decoded = [(inst.index, inst.history, pm.library[inst.index])
                       for inst in report.instances if inst.satisfiable]
            examined.append((ci, y, len(decoded)))
            for ai, (idx_a, hist_a, entry_a) in enumerate(decoded):
                machine_a = entry_a.provenance.machine
                table = extract_particular_table(hist_a, machine_a)
                for idx_b, hist_b, _ in decoded:
                    if idx_b == idx_a:
                        continue
                    if table_generates(table, hist_b):
                        return SharedTableSearchReport(
                            SharedTableWitness(ci, y, idx_a, idx_b), examined)
    return SharedTableSearchReport(None, examined)


def report_to_dict(report: RunReport) -> dict:
    """The stable-key JSON view of a run, including the metrics of the
    designated (first satisfiable) instance when one exists."""
    instances = []
    for inst in report.instances:
        instances.append({
            "index": inst.index,
            "clauses": inst.clause_count,
            "groups": {g: inst.groups[g] for g in
                       ("G1", "G2", "G3", "G4", "G5", "G6")},
            "verdict": "sat" if inst.satisfiable else "unsat",
            "history_len": inst.history.transitions if inst.history else None,
        })
    metrics = claims = None
    if report.designated is not None:
        m = transition_metrics(report, report.designated)
        c = check_counting_claims(m)
        metrics = {"i": m.i, "j": m.j, "k": m.k}
        claims = {"i_gt_j": c.i_gt_j, "j_gt_k": c.j_gt_k, "i_eq_k": c.i_eq_k}
    return {
        "input": report.input,
        "bound": report.bound,
        "instances": instances,
        "counter": report.counter,
        "accept": report.accept,
        "cost": report.cost,
        "metrics": metrics,
        "claims": claims,
    }


def report_to_json(report: RunReport) -> str:
    return json.dumps(report_to_dict(report), indent=2)
