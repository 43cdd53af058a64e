"""CNF satisfiability backend.

A plain DPLL solver (two-watched-literal unit propagation, chronological
backtracking, fixed branching order), an exhaustive truth-table oracle
for cross-validation, and DIMACS I/O.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .reduction import LabeledFormula

BRUTE_FORCE_VAR_LIMIT = 24


class SatError(Exception):
    """Base class for solver-level errors."""


class DimacsError(SatError):
    """Malformed DIMACS text."""


class BruteForceGuardError(SatError):
    """Brute-force oracle asked to enumerate past its variable guard."""


@dataclass
class CnfFormula:
    var_count: int
    clauses: List[List[int]]
    comments: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.var_count < 0:
            raise ValueError("var_count must be non-negative")
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.var_count:
                    raise ValueError(f"literal {lit} out of range 1..{self.var_count}")


@dataclass
class SolveResult:
    satisfiable: bool
    assignment: Optional[Dict[int, bool]] = None

    @classmethod
    def sat(cls, assignment: Dict[int, bool]) -> "SolveResult":
        return cls(True, assignment)

    @classmethod
    def unsat(cls) -> "SolveResult":
        return cls(False, None)


def to_cnf(f: LabeledFormula) -> CnfFormula:
    """Strip the labels off a labeled formula."""
    return CnfFormula(f.var_count, [list(c.literals) for c in f.clauses])


def check_model(f: CnfFormula, assignment: Dict[int, bool]) -> bool:
    return all(
        any(assignment.get(abs(lit)) == (lit > 0) for lit in clause)
        for clause in f.clauses)


def _verified(f: CnfFormula, assignment: Dict[int, bool]) -> SolveResult:
    # Internal check before any Sat verdict leaves the module.
    if not check_model(f, assignment):
        raise SatError("internal error: model fails verification")
    return SolveResult.sat(assignment)


def solve_dpll(f: CnfFormula) -> SolveResult:
    """DPLL with unit propagation and chronological backtracking.

    Deterministic: branches on the lowest-index unassigned variable,
    trying true first.
    """
    n = f.var_count
    clauses: List[List[int]] = []
    for clause in f.clauses:
        seen = list(dict.fromkeys(clause))
        if any(-lit in seen for lit in seen):
            continue  # tautology, always satisfied
        clauses.append(seen)

    assign: List[Optional[bool]] = [None] * (n + 1)
    trail: List[int] = []
    watches: Dict[int, List[int]] = {}
    units: List[int] = []
    for ci, clause in enumerate(clauses):
        if len(clause) == 1:
            units.append(clause[0])
        else:
            for lit in clause[:2]:
                watches.setdefault(lit, []).append(ci)

    def lit_value(lit: int) -> Optional[bool]:
        v = assign[abs(lit)]
        if v is None:
            return None
        return v if lit > 0 else not v

    def propagate(pending: List[int]) -> bool:
        """Make each pending literal true and propagate; False on conflict."""
        qi = 0
        while qi < len(pending):
            lit = pending[qi]
            qi += 1
            val = lit_value(lit)
            if val is True:
                continue
            if val is False:
                return False
            assign[abs(lit)] = lit > 0
            trail.append(abs(lit))
            neg = -lit
            watchers = watches.get(neg, [])
            kept: List[int] = []
            for pos, ci in enumerate(watchers):
                clause = clauses[ci]
                # Keep the two watched literals in the first two slots.
                if clause[0] == neg:
                    clause[0], clause[1] = clause[1], clause[0]
                other = clause[0]
                if lit_value(other) is True:
                    kept.append(ci)
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if lit_value(clause[k]) is not False:
                        clause[1], clause[k] = clause[k], clause[1]
                        watches.setdefault(clause[1], []).append(ci)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(ci)
                if lit_value(other) is False:
                    kept.extend(watchers[pos + 1:])
                    watches[neg] = kept
                    return False
                pending.append(other)
            watches[neg] = kept
        return True

    def backtrack_to(mark: int):
        while len(trail) > mark:
            assign[trail.pop()] = None

    if not propagate(list(units)):
        return SolveResult.unsat()

    # Decision stack entries: (trail length before the decision, var, flipped).
    stack: List[Tuple[int, int, bool]] = []
    while True:
        var = 1
        while var <= n and assign[var] is not None:
            var += 1
        if var > n:
            model = {v: bool(assign[v]) for v in range(1, n + 1)}
            return _verified(f, model)
        stack.append((len(trail), var, False))
        ok = propagate([var])
        while not ok:
            # Chronological backtracking: flip the deepest untried decision.
            while stack and stack[-1][2]:
                mark, _, _ = stack.pop()
                backtrack_to(mark)
            if not stack:
                return SolveResult.unsat()
            mark, dvar, _ = stack.pop()
            backtrack_to(mark)
            stack.append((mark, dvar, True))
            ok = propagate([-dvar])


def solve_bruteforce(f: CnfFormula) -> SolveResult:
    """Exhaustive truth-table evaluation over all 2^n assignments.

    Assignments are ordered lexicographically (variable 1 most
    significant, false before true); the first satisfying one is
    returned. Refuses formulas above the variable guard.
    """
    n = f.var_count
    if n > BRUTE_FORCE_VAR_LIMIT:
        raise BruteForceGuardError(
            f"{n} variables exceeds the brute-force guard of {BRUTE_FORCE_VAR_LIMIT}")
    total = 1 << n
    full = (1 << total) - 1
    # Bit p of a mask is assignment index p; var v is true in assignment a
    # iff bit (n - v) of a is set.
    var_mask: Dict[int, int] = {}
    for v in range(1, n + 1):
        block = 1 << (n - v)
        mask = ((1 << block) - 1) << block
        width = 2 * block
        while width < total:
            mask |= mask << width
            width *= 2
        var_mask[v] = mask

    formula_mask = full
    for clause in f.clauses:
        clause_mask = 0
        for lit in clause:
            m = var_mask[abs(lit)]
            clause_mask |= m if lit > 0 else (full ^ m)
        formula_mask &= clause_mask
        if not formula_mask:
            return SolveResult.unsat()
    first = (formula_mask & -formula_mask).bit_length() - 1
    assignment = {v: bool((first >> (n - v)) & 1) for v in range(1, n + 1)}
    return _verified(f, assignment)


def to_dimacs(f) -> str:
    """Render a CnfFormula or LabeledFormula as DIMACS text.

    Labeled formulas get `c var <id> = <meaning>` headers and a
    `c clause <n> group G<k>` comment before each clause.
    """
    lines: List[str] = []
    if isinstance(f, LabeledFormula):
        for vid in sorted(f.var_meanings):
            lines.append(f"c var {vid} = {f.var_meanings[vid]}")
        lines.append(f"p cnf {f.var_count} {f.clause_count}")
        for idx, clause in enumerate(f.clauses, start=1):
            lines.append(f"c clause {idx} group {clause.group}")
            lines.append(" ".join(str(lit) for lit in clause.literals) + " 0")
    else:
        for comment in f.comments:
            lines.append(f"c {comment}")
        lines.append(f"p cnf {f.var_count} {len(f.clauses)}")
        for clause in f.clauses:
            lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF text, preserving comments as metadata."""
    comments: List[str] = []
    header: Optional[Tuple[int, int]] = None
    tokens: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[1:].strip())
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(f"line {lineno}: duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before header")
        try:
            tokens.extend(int(tok) for tok in line.split())
        except ValueError:
            raise DimacsError(f"line {lineno}: bad literal in {line!r}")
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    var_count, clause_count = header
    clauses: List[List[int]] = []
    current: List[int] = []
    for tok in tokens:
        if tok == 0:
            if not current:
                raise DimacsError("empty clause in DIMACS input")
            clauses.append(current)
            current = []
        else:
            if abs(tok) > var_count:
                raise DimacsError(f"literal {tok} out of range 1..{var_count}")
            current.append(tok)
    if current:
        raise DimacsError("missing terminating 0 on final clause")
    if len(clauses) != clause_count:
        raise DimacsError(
            f"header claims {clause_count} clauses, found {len(clauses)}")
    return CnfFormula(var_count, clauses, tuple(comments))
