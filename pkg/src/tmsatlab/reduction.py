"""Machine + input + bound -> labeled CNF.

The clause groups follow the classic grouping: per-time uniqueness of
state/head/cell symbols (G1-G3), the initial configuration as unit
clauses (G4, the input part), acceptance at the final time (G5), and
transition semantics via explicit selector variables plus frame clauses
(G6). Everything outside G4 is the run part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from .machine import (
    LEFT,
    RIGHT,
    ComputationHistory,
    Configuration,
    Machine,
    apply_target,
    initial_configuration,
    used_rule_indices,
)

GROUPS = ("G1", "G2", "G3", "G4", "G5", "G6")
INPUT_GROUP = "G4"
PAD = "PAD"


class ReductionError(Exception):
    """Base class for reduction-level errors."""


class GridIncompatibleError(ReductionError):
    """Two formulas whose variable grids cannot be unified."""


class MalformedModelError(ReductionError):
    """An assignment violating a G1/G2/G3 uniqueness constraint."""


@dataclass(frozen=True)
class VarMeaning:
    """What a CNF variable asserts about the computation grid."""

    kind: str  # "Q" state, "H" head, "S" symbol, "Tr" transition selector
    time: int
    state: Optional[str] = None
    cell: Optional[int] = None
    symbol: Optional[str] = None
    rule: Union[int, str, None] = None  # rule index or PAD

    def __str__(self):
        if self.kind == "Q":
            return f"Q({self.time},{self.state})"
        if self.kind == "H":
            return f"H({self.time},{self.cell})"
        if self.kind == "S":
            return f"S({self.time},{self.cell},{self.symbol})"
        return f"Tr({self.time},{self.rule})"


@dataclass(frozen=True)
class Clause:
    literals: Tuple[int, ...]
    group: str

    def __post_init__(self):
        if not self.literals:
            raise ValueError("empty clause")
        if self.group not in GROUPS:
            raise ValueError(f"unknown group {self.group!r}")
        lits = set(self.literals)
        if any(-lit in lits for lit in lits):
            raise ValueError("clause contains a variable and its negation")


@dataclass
class Provenance:
    machine: Optional[Machine]
    machine_name: str
    input: Optional[str]


@dataclass
class LabeledFormula:
    var_meanings: Dict[int, VarMeaning]
    clauses: List[Clause]
    bound: int
    provenance: Optional[Provenance] = None

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    @property
    def var_count(self) -> int:
        return max(self.var_meanings) if self.var_meanings else 0


class _Grid:
    """Deterministic variable numbering: Q, then H, then S, then Tr,
    each block in lexicographic grid order."""

    def __init__(self, m: Machine, bound: int):
        self.machine = m
        self.bound = bound
        self.states = sorted(m.states)
        self.symbols = sorted(m.tape_alphabet)
        self.rules = m.rules()
        self.meanings: Dict[int, VarMeaning] = {}
        self.q: Dict[Tuple[int, str], int] = {}
        self.h: Dict[Tuple[int, int], int] = {}
        self.s: Dict[Tuple[int, int, str], int] = {}
        self.tr: Dict[Tuple[int, Union[int, str]], int] = {}
        vid = 0
        for i in range(bound + 1):
            for k in self.states:
                vid += 1
                self.q[(i, k)] = vid
                self.meanings[vid] = VarMeaning("Q", i, state=k)
        for i in range(bound + 1):
            for j in range(bound + 1):
                vid += 1
                self.h[(i, j)] = vid
                self.meanings[vid] = VarMeaning("H", i, cell=j)
        for i in range(bound + 1):
            for j in range(bound + 1):
                for sym in self.symbols:
                    vid += 1
                    self.s[(i, j, sym)] = vid
                    self.meanings[vid] = VarMeaning("S", i, cell=j, symbol=sym)
        for i in range(bound):
            for r in list(range(len(self.rules))) + [PAD]:
                vid += 1
                self.tr[(i, r)] = vid
                self.meanings[vid] = VarMeaning("Tr", i, rule=r)


def _exactly_one(ids: List[int], group: str) -> List[Clause]:
    out = [Clause(tuple(ids), group)]
    for a in range(len(ids)):
        for b in range(a + 1, len(ids)):
            out.append(Clause((-ids[a], -ids[b]), group))
    return out


def _moved_head(j: int, move: str, bound: int) -> int:
    if move == LEFT:
        return max(0, j - 1)
    if move == RIGHT:
        return min(bound, j + 1)
    return j


def reduce_machine(m: Machine, input_str: str, bound: int) -> LabeledFormula:
    """The reduction: satisfiable iff m accepts input_str within `bound`
    transitions."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if len(input_str) > bound + 1:
        raise ReductionError(
            f"input of {len(input_str)} symbols does not fit cells 0..{bound}")
    for ch in input_str:
        if ch not in m.input_alphabet:
            raise ReductionError(f"input symbol {ch!r} not in input alphabet")

    g = _Grid(m, bound)
    T = bound
    clauses: List[Clause] = []

    # G1/G2/G3: exactly one state, head cell, and symbol per cell, per time.
    for i in range(T + 1):
        clauses.extend(_exactly_one([g.q[(i, k)] for k in g.states], "G1"))
    for i in range(T + 1):
        clauses.extend(_exactly_one([g.h[(i, j)] for j in range(T + 1)], "G2"))
    for i in range(T + 1):
        for j in range(T + 1):
            clauses.extend(_exactly_one([g.s[(i, j, l)] for l in g.symbols], "G3"))

    # G4: the initial configuration, as unit clauses.
    clauses.append(Clause((g.q[(0, m.start)],), "G4"))
    clauses.append(Clause((g.h[(0, 0)],), "G4"))
    for j in range(T + 1):
        sym = input_str[j] if j < len(input_str) else m.blank
        clauses.append(Clause((g.s[(0, j, sym)],), "G4"))

    # G5: accept at the final time.
    clauses.append(Clause((g.q[(T, m.accept)],), "G5"))

    # G6: transition semantics via selector variables, plus frame clauses.
    for i in range(T):
        clauses.append(Clause(
            tuple(g.tr[(i, r)] for r in list(range(len(g.rules))) + [PAD]), "G6"))
        for r, (state, symbol, nxt, write, move) in enumerate(g.rules):
            tr = g.tr[(i, r)]
            clauses.append(Clause((-tr, g.q[(i, state)]), "G6"))
            clauses.append(Clause((-tr, g.q[(i + 1, nxt)]), "G6"))
            for j in range(T + 1):
                hij = g.h[(i, j)]
                clauses.append(Clause((-tr, -hij, g.s[(i, j, symbol)]), "G6"))
                clauses.append(Clause((-tr, -hij, g.s[(i + 1, j, write)]), "G6"))
                clauses.append(Clause(
                    (-tr, -hij, g.h[(i + 1, _moved_head(j, move, T))]), "G6"))
        pad = g.tr[(i, PAD)]
        clauses.append(Clause((-pad, g.q[(i, m.accept)]), "G6"))
        clauses.append(Clause((-pad, g.q[(i + 1, m.accept)]), "G6"))
        for j in range(T + 1):
            clauses.append(Clause((-pad, -g.h[(i, j)], g.h[(i + 1, j)]), "G6"))
            for l in g.symbols:
                clauses.append(Clause(
                    (-pad, -g.s[(i, j, l)], g.s[(i + 1, j, l)]), "G6"))
        # Frame: cells away from the head keep their symbol.
        for j in range(T + 1):
            for l in g.symbols:
                clauses.append(Clause(
                    (-g.s[(i, j, l)], g.h[(i, j)], g.s[(i + 1, j, l)]), "G6"))

    return LabeledFormula(
        var_meanings=g.meanings,
        clauses=clauses,
        bound=bound,
        provenance=Provenance(machine=m, machine_name=m.name, input=input_str),
    )


def input_part(f: LabeledFormula) -> LabeledFormula:
    """Exactly the G4 clauses; variable meanings preserved."""
    return LabeledFormula(
        var_meanings=dict(f.var_meanings),
        clauses=[c for c in f.clauses if c.group == INPUT_GROUP],
        bound=f.bound,
        provenance=f.provenance,
    )


def run_part(f: LabeledFormula) -> LabeledFormula:
    """All non-G4 clauses."""
    return LabeledFormula(
        var_meanings=dict(f.var_meanings),
        clauses=[c for c in f.clauses if c.group != INPUT_GROUP],
        bound=f.bound,
        provenance=f.provenance,
    )


def _grid_signature(f: LabeledFormula):
    states = sorted({mn.state for mn in f.var_meanings.values() if mn.kind == "Q"})
    symbols = sorted({mn.symbol for mn in f.var_meanings.values() if mn.kind == "S"})
    return f.bound, tuple(states), tuple(symbols)


def concatenate(cy: LabeledFormula, cr: LabeledFormula) -> LabeledFormula:
    """Conjoin an input part with a run part over a unified variable grid.

    Raises GridIncompatibleError when the two grids (bound, state set,
    symbol set) differ; such a pair can never be satisfiable together.
    """
    if any(c.group != INPUT_GROUP for c in cy.clauses):
        raise ValueError("first argument must contain only G4 clauses")
    if any(c.group == INPUT_GROUP for c in cr.clauses):
        raise ValueError("second argument must contain no G4 clauses")
    if _grid_signature(cy) != _grid_signature(cr):
        raise GridIncompatibleError(
            "formulas use entirely incompatible variable grids")
    # Q/H/S blocks coincide under the fixed numbering; the run part owns
    # the Tr block, whose ids the input part's clauses never reference.
    meanings = dict(cy.var_meanings)
    meanings.update(cr.var_meanings)
    for clause in cy.clauses:
        for lit in clause.literals:
            if meanings[abs(lit)] != cy.var_meanings[abs(lit)]:
                raise GridIncompatibleError(
                    f"variable {abs(lit)} means different things in the two formulas")
    machine = cr.provenance.machine if cr.provenance else None
    name = cr.provenance.machine_name if cr.provenance else "?"
    inp = cy.provenance.input if cy.provenance else None
    return LabeledFormula(
        var_meanings=meanings,
        clauses=list(cy.clauses) + list(cr.clauses),
        bound=cr.bound,
        provenance=Provenance(machine=machine, machine_name=name, input=inp),
    )


def _config_symbol(c: Configuration, j: int, blank: str) -> str:
    return c.tape[j] if j < len(c.tape) else blank


def induced_assignment(m: Machine, h: ComputationHistory, g: _Grid) -> Dict[int, bool]:
    """The satisfying assignment a history induces on the grid, padding
    short histories by repeating the final accepting configuration."""
    T = g.bound
    k = h.transitions
    rule_ids = used_rule_indices(h, m)
    assignment: Dict[int, bool] = {}
    for i in range(T + 1):
        c = h.configs[min(i, k)]
        for state in g.states:
            assignment[g.q[(i, state)]] = state == c.state
        for j in range(T + 1):
            assignment[g.h[(i, j)]] = j == c.head
            sym = _config_symbol(c, j, m.blank)
            for l in g.symbols:
                assignment[g.s[(i, j, l)]] = l == sym
    for i in range(T):
        chosen = rule_ids[i] if i < k else PAD
        for r in list(range(len(g.rules))) + [PAD]:
            assignment[g.tr[(i, r)]] = r == chosen
    return assignment


def encode_history(m: Machine, h: ComputationHistory, bound: int):
    """Reduce m on h.input, plus the satisfying assignment induced by h.

    Returns (formula, assignment). The history must be legal for m,
    accepting, and of at most `bound` transitions.
    """
    if h.transitions > bound:
        raise ReductionError(
            f"history of {h.transitions} transitions exceeds bound {bound}")
    if h.configs[-1].state != m.accept:
        raise ReductionError("history does not end in the accept state")
    if h.configs[0] != initial_configuration(m, h.input):
        raise ReductionError("history does not start from the initial configuration")
    f = reduce_machine(m, h.input, bound)
    g = _Grid(m, bound)
    return f, induced_assignment(m, h, g)  # legality checked inside


def _read_unique(a: Dict[int, bool], ids: Dict, keys, what: str):
    true_keys = [key for key in keys if a.get(ids[key])]
    if len(true_keys) != 1:
        raise MalformedModelError(
            f"assignment sets {len(true_keys)} {what} variables true, expected 1")
    return true_keys[0]


def decode_assignment(f: LabeledFormula, a: Dict[int, bool]) -> ComputationHistory:
    """Read a satisfying assignment back into a computation history.

    Replays the machine's rules as chosen by the Tr variables, verifying
    each configuration against the Q/H/S grid, and strips the trailing
    accept-state padding.
    """
    if f.provenance is None or f.provenance.machine is None:
        raise ReductionError("formula carries no machine provenance to decode with")
    m = f.provenance.machine
    if f.provenance.input is None:
        raise ReductionError("formula carries no input provenance to decode with")
    for clause in f.clauses:
        if not any(a.get(abs(lit)) == (lit > 0) for lit in clause.literals):
            if clause.group in ("G1", "G2", "G3"):
                raise MalformedModelError(
                    f"assignment violates a {clause.group} uniqueness clause")
            raise ValueError("assignment does not satisfy the formula")

    g = _Grid(m, f.bound)
    T = f.bound

    def check_against_grid(i: int, c: Configuration):
        state = _read_unique(a, g.q, [(i, k) for k in g.states], "state")
        head = _read_unique(a, g.h, [(i, j) for j in range(T + 1)], "head")
        if state != (i, c.state) or head != (i, c.head):
            raise MalformedModelError(f"replayed configuration at time {i} "
                                      "disagrees with the assignment grid")
        for j in range(T + 1):
            sym = _read_unique(a, g.s, [(i, j, l) for l in g.symbols], "symbol")
            if sym != (i, j, _config_symbol(c, j, m.blank)):
                raise MalformedModelError(
                    f"cell {j} at time {i} disagrees with the assignment grid")

    config = initial_configuration(m, f.provenance.input)
    configs = [config]
    check_against_grid(0, config)
    rules = g.rules
    for i in range(T):
        chosen = None
        for r in range(len(rules)):
            if a.get(g.tr[(i, r)]):
                chosen = r
                break
        if chosen is None:
            if not a.get(g.tr[(i, PAD)]):
                raise MalformedModelError(f"no transition selected at time {i}")
            if config.state != m.accept:
                raise MalformedModelError(
                    f"padding selected at time {i} outside the accept state")
            break
        state, symbol, nxt, write, move = rules[chosen]
        if config.state != state or config.tape[config.head] != symbol:
            raise MalformedModelError(
                f"rule {chosen} selected at time {i} is not applicable")
        config = apply_target(config, (nxt, write, move), m.blank)
        configs.append(config)
        check_against_grid(i + 1, config)
    if configs[-1].state != m.accept:
        raise MalformedModelError("decoded history does not end in the accept state")
    return ComputationHistory(tuple(configs), f.provenance.input)


def clause_counts(f: LabeledFormula) -> Dict[str, int]:
    """Per-group clause counts over all six groups."""
    counts = {group: 0 for group in GROUPS}
    for clause in f.clauses:
        counts[clause.group] += 1
    return counts
