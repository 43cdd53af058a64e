"""Single-tape Turing machines.

Configurations, bounded (non)deterministic simulation, particular
transition tables collected from computations, and the selector-based
table merge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

LEFT = "L"
RIGHT = "R"
STAY = "S"
MOVES = (LEFT, RIGHT, STAY)

# (next state, write symbol, move)
Target = Tuple[str, str, str]
RuleKey = Tuple[str, str]


class MachineError(Exception):
    """Base class for machine-related errors."""


class MachineSyntaxError(MachineError):
    """Malformed machine description text."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class MachineSemanticError(MachineError):
    """Well-formed text that violates a machine invariant."""


class IllegalHistoryError(MachineError):
    """A configuration pair not licensed by any rule of the machine."""

    def __init__(self, index: int, message: str):
        self.index = index
        super().__init__(f"step {index}: {message}")


@dataclass
class TransitionTable:
    """Map from (state, symbol) to target triples, in declaration order.

    A merged table additionally carries a fresh selector state whose two
    targets choose between the retained branch sub-tables before the
    first tape read.
    """

    entries: Dict[RuleKey, Tuple[Target, ...]] = field(default_factory=dict)
    selector: Optional[Tuple[str, str]] = None
    selector_state: Optional[str] = None
    branches: Optional[Tuple["TransitionTable", "TransitionTable"]] = None

    def rules(self) -> List[Tuple[str, str, str, str, str]]:
        """Flatten to (state, symbol, next, write, move) in declaration order."""
        out = []
        for (state, symbol), targets in self.entries.items():
            for nxt, write, move in targets:
                out.append((state, symbol, nxt, write, move))
        return out

    def states(self) -> set:
        """Every state mentioned in entries, selector, or selector state."""
        out = set()
        for (state, _), targets in self.entries.items():
            out.add(state)
            for nxt, _, _ in targets:
                out.add(nxt)
        if self.selector is not None:
            out.update(self.selector)
        if self.selector_state is not None:
            out.add(self.selector_state)
        return out


def is_deterministic(t: TransitionTable) -> bool:
    """True iff every target set is a singleton and no selector is present."""
    if t.selector is not None:
        return False
    return all(len(targets) == 1 for targets in t.entries.values())


@dataclass
class Machine:
    name: str
    states: frozenset
    input_alphabet: frozenset
    tape_alphabet: frozenset
    blank: str
    table: TransitionTable
    start: str
    accept: str
    reject: Optional[str] = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.start not in self.states:
            raise MachineSemanticError(f"start state {self.start!r} not declared")
        if self.accept not in self.states:
            raise MachineSemanticError(f"accept state {self.accept!r} not declared")
        if self.reject is not None and self.reject not in self.states:
            raise MachineSemanticError(f"reject state {self.reject!r} not declared")
        if self.blank not in self.tape_alphabet:
            raise MachineSemanticError(f"blank {self.blank!r} not in tape alphabet")
        if not self.input_alphabet <= self.tape_alphabet:
            raise MachineSemanticError("input alphabet not a subset of tape alphabet")
        for (state, symbol), targets in self.table.entries.items():
            if state == self.accept:
                raise MachineSemanticError(
                    f"transition out of accept state {state!r}")
            if state not in self.states:
                raise MachineSemanticError(f"unknown state {state!r} in rule")
            if symbol not in self.tape_alphabet:
                raise MachineSemanticError(f"unknown symbol {symbol!r} in rule")
            if not targets:
                raise MachineSemanticError(
                    f"empty target set for ({state!r}, {symbol!r})")
            for nxt, write, move in targets:
                if nxt not in self.states:
                    raise MachineSemanticError(f"unknown target state {nxt!r}")
                if write not in self.tape_alphabet:
                    raise MachineSemanticError(f"unknown write symbol {write!r}")
                if move not in MOVES:
                    raise MachineSemanticError(f"bad move {move!r}")

    def rules(self) -> List[Tuple[str, str, str, str, str]]:
        return self.table.rules()


@dataclass(frozen=True)
class Configuration:
    state: str
    head: int
    tape: Tuple[str, ...]

    def __post_init__(self):
        if not (0 <= self.head < len(self.tape)):
            raise ValueError(f"head {self.head} outside tape of {len(self.tape)} cells")


@dataclass(frozen=True)
class ComputationHistory:
    configs: Tuple[Configuration, ...]
    input: str

    def __post_init__(self):
        if not self.configs:
            raise ValueError("a history needs at least one configuration")

    @property
    def transitions(self) -> int:
        return len(self.configs) - 1


_REQUIRED_KEYS = ("states", "start", "accept", "blank", "input_alphabet", "tape_alphabet")


def parse_machine(text: str, name: str = "machine") -> Machine:
    """Parse the line-oriented machine file format.

    Keys: states, start, accept, [reject], blank, input_alphabet,
    tape_alphabet, rule (repeatable; repeated (state, symbol) keys
    accumulate nondeterministic targets). '#' starts a comment.
    """
    fields: Dict[str, str] = {}
    rules: List[Tuple[int, str]] = []
    saw_content = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        saw_content = True
        if ":" not in line:
            raise MachineSyntaxError(lineno, f"expected 'key: value', got {line!r}")
        key, value = line.split(":", 1)
        key = key.strip()
        value = value.strip()
        if key == "rule":
            rules.append((lineno, value))
        elif key in _REQUIRED_KEYS or key == "reject":
            if key in fields:
                raise MachineSyntaxError(lineno, f"duplicate key {key!r}")
            fields[key] = value
        else:
            raise MachineSyntaxError(lineno, f"unknown key {key!r}")
    if not saw_content:
        raise MachineSyntaxError(1, "empty machine description")
    for key in _REQUIRED_KEYS:
        if key not in fields:
            raise MachineSemanticError(f"missing required key {key!r}")

    entries: Dict[RuleKey, List[Target]] = {}
    for lineno, body in rules:
        if "->" not in body:
            raise MachineSyntaxError(lineno, f"rule missing '->': {body!r}")
        lhs, rhs = body.split("->", 1)
        lhs_parts = lhs.split()
        rhs_parts = rhs.split()
        if len(lhs_parts) != 2 or len(rhs_parts) != 3:
            raise MachineSyntaxError(
                lineno, "rule must be 'state symbol -> state symbol move'")
        state, symbol = lhs_parts
        nxt, write, move = rhs_parts
        if move not in MOVES:
            raise MachineSyntaxError(lineno, f"move must be one of {MOVES}, got {move!r}")
        target = (nxt, write, move)
        bucket = entries.setdefault((state, symbol), [])
        if target not in bucket:
            bucket.append(target)

    table = TransitionTable({key: tuple(ts) for key, ts in entries.items()})
    return Machine(
        name=name,
        states=frozenset(fields["states"].split()),
        input_alphabet=frozenset(fields["input_alphabet"].split()),
        tape_alphabet=frozenset(fields["tape_alphabet"].split()),
        blank=fields["blank"],
        table=table,
        start=fields["start"],
        accept=fields["accept"],
        reject=fields.get("reject"),
    )


def initial_configuration(m: Machine, input_str: str) -> Configuration:
    for ch in input_str:
        if ch not in m.input_alphabet:
            raise MachineSemanticError(f"input symbol {ch!r} not in input alphabet")
    tape = tuple(input_str) if input_str else (m.blank,)
    return Configuration(state=m.start, head=0, tape=tape)


def apply_target(c: Configuration, target: Target, blank: str) -> Configuration:
    """Write, then move; clamp a left move at cell 0, extend on a right
    move at the last cell."""
    nxt, write, move = target
    tape = list(c.tape)
    tape[c.head] = write
    head = c.head
    if move == LEFT:
        head = max(0, head - 1)
    elif move == RIGHT:
        head += 1
        if head == len(tape):
            tape.append(blank)
    return Configuration(state=nxt, head=head, tape=tuple(tape))


def step(m: Machine, c: Configuration) -> List[Configuration]:
    """Successor configurations in rule declaration order.

    Empty list means the machine is stuck (rejects). Accepting
    configurations have no successors by construction.
    """
    if c.state == m.accept:
        raise ValueError("step on an accepting configuration")
    targets = m.table.entries.get((c.state, c.tape[c.head]), ())
    out: List[Configuration] = []
    for target in targets:
        nc = apply_target(c, target, m.blank)
        if nc not in out:
            out.append(nc)
    return out


def enumerate_accepting_histories(
        m: Machine, input_str: str, bound: int, limit: int) -> List[ComputationHistory]:
    """All accepting histories of at most `bound` transitions, breadth-first,
    ties broken by rule declaration order, truncated at `limit`."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    if limit < 1:
        raise ValueError("limit must be at least 1")
    init = initial_configuration(m, input_str)
    out: List[ComputationHistory] = []
    if init.state == m.accept:
        out.append(ComputationHistory((init,), input_str))
        return out[:limit]
    frontier: List[Tuple[Configuration, ...]] = [(init,)]
    for _ in range(bound):
        nxt: List[Tuple[Configuration, ...]] = []
        for path in frontier:
            for nc in step(m, path[-1]):
                new_path = path + (nc,)
                if nc.state == m.accept:
                    out.append(ComputationHistory(new_path, input_str))
                    if len(out) >= limit:
                        return out
                else:
                    nxt.append(new_path)
        frontier = nxt
        if not frontier:
            break
    return out


def accepts_within(m: Machine, input_str: str, bound: int):
    """Bounded acceptance oracle.

    Returns (accepted, witness); the witness is the shortest accepting
    history in breadth-first order, or None.
    """
    found = enumerate_accepting_histories(m, input_str, bound, limit=1)
    if found:
        return True, found[0]
    return False, None


def _licensing_targets(m: Machine, c1: Configuration, c2: Configuration):
    """Targets of m whose application to c1 yields c2, in declaration order."""
    key = (c1.state, c1.tape[c1.head])
    out = []
    for target in m.table.entries.get(key, ()):
        if apply_target(c1, target, m.blank) == c2:
            out.append((key, target))
    return out


def extract_particular_table(h: ComputationHistory, m: Machine) -> TransitionTable:
    """Collect exactly the transitions exercised by consecutive pairs of h.

    Raises IllegalHistoryError naming the first offending step if some
    pair is not licensed by any rule of m.
    """
    entries: Dict[RuleKey, List[Target]] = {}
    for idx in range(h.transitions):
        c1, c2 = h.configs[idx], h.configs[idx + 1]
        licensed = _licensing_targets(m, c1, c2)
        if not licensed:
            raise IllegalHistoryError(
                idx, f"no rule of {m.name} licenses the pair at this step")
        key, target = licensed[0]
        bucket = entries.setdefault(key, [])
        if target not in bucket:
            bucket.append(target)
    return TransitionTable({key: tuple(ts) for key, ts in entries.items()})


def used_rule_indices(h: ComputationHistory, m: Machine) -> List[int]:
    """Index into m.rules() of the rule used at each step of h (first
    licensing rule in declaration order)."""
    rule_list = m.rules()
    out = []
    for idx in range(h.transitions):
        c1, c2 = h.configs[idx], h.configs[idx + 1]
        licensed = _licensing_targets(m, c1, c2)
        if not licensed:
            raise IllegalHistoryError(
                idx, f"no rule of {m.name} licenses the pair at this step")
        (state, symbol), (nxt, write, move) = licensed[0]
        out.append(rule_list.index((state, symbol, nxt, write, move)))
    return out


def _pair_licensed_by(t: TransitionTable, c1: Configuration, c2: Configuration) -> bool:
    for nxt, write, move in t.entries.get((c1.state, c1.tape[c1.head]), ()):
        if c2.state != nxt:
            continue
        tape = list(c1.tape)
        tape[c1.head] = write
        head = c1.head
        if move == LEFT:
            head = max(0, head - 1)
        elif move == RIGHT:
            head += 1
        if head == len(tape):
            # Right move off the end: the simulator extends with a blank,
            # which the bare table cannot name; accept whatever c2 grew by.
            if len(c2.tape) != len(tape) + 1:
                continue
            tape.append(c2.tape[-1])
        if c2.head == head and c2.tape == tuple(tape):
            return True
    return False


def table_generates(t: TransitionTable, h: ComputationHistory) -> bool:
    """True iff every consecutive pair of h is licensed by some triple of t.

    A merged table licenses h iff one of its branch sub-tables does.
    """
    if t.branches is not None:
        return any(table_generates(branch, h) for branch in t.branches)
    return all(
        _pair_licensed_by(t, h.configs[i], h.configs[i + 1])
        for i in range(h.transitions))


def _rename_table(t: TransitionTable, suffix: str) -> Dict[RuleKey, Tuple[Target, ...]]:
    return {
        (state + suffix, symbol): tuple(
            (nxt + suffix, write, move) for nxt, write, move in targets)
        for (state, symbol), targets in t.entries.items()
    }


def merge_tables(ta: TransitionTable, tb: TransitionTable,
                 start_a: str, start_b: str) -> TransitionTable:
    """Disjoint union of two tables behind a fresh selector start state.

    The first table keeps its state names; the second is suffixed with
    primes until the two state spaces are disjoint. The selector targets
    are the (renamed) start states of the two branches.
    """
    states_a = ta.states() | {start_a}
    states_b = tb.states() | {start_b}
    suffix = "'"
    while {s + suffix for s in states_b} & states_a:
        suffix += "'"
    renamed_b = _rename_table(tb, suffix)
    all_states = states_a | {s + suffix for s in states_b}
    fresh = "q_start"
    while fresh in all_states:
        fresh += "'"
    entries = dict(ta.entries)
    entries.update(renamed_b)
    return TransitionTable(
        entries=entries,
        selector=(start_a, start_b + suffix),
        selector_state=fresh,
        branches=(ta, tb),
    )
