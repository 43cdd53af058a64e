"""Propositional argument checking by truth-table enumeration.

Formulas are small expression trees over named atoms; arguments are
premise lists with a conclusion. Validity is decided by exhaustive
enumeration, with an explicit vacuity flag for arguments whose premises
are jointly unsatisfiable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

ATOM_GUARD = 20


class ArgumentError(Exception):
    pass


class FormulaSyntaxError(ArgumentError):
    pass


class AtomGuardError(ArgumentError):
    """Enumeration refused above the atom guard."""


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    operand: "PropFormula"

    def __str__(self):
        return f"!{_wrap(self.operand)}"


@dataclass(frozen=True)
class And:
    left: "PropFormula"
    right: "PropFormula"

    def __str__(self):
        return f"{_wrap(self.left)} & {_wrap(self.right)}"


@dataclass(frozen=True)
class Or:
    left: "PropFormula"
    right: "PropFormula"

    def __str__(self):
        return f"{_wrap(self.left)} | {_wrap(self.right)}"


@dataclass(frozen=True)
class Implies:
    left: "PropFormula"
    right: "PropFormula"

    def __str__(self):
        return f"{_wrap(self.left)} -> {_wrap(self.right)}"


@dataclass(frozen=True)
class Iff:
    left: "PropFormula"
    right: "PropFormula"

    def __str__(self):
        return f"{_wrap(self.left)} <-> {_wrap(self.right)}"


PropFormula = Union[Atom, Not, And, Or, Implies, Iff]


def _wrap(f: PropFormula) -> str:
    if isinstance(f, (Atom, Not)):
        return str(f)
    return f"({f})"


@dataclass
class ArgumentForm:
    premises: List[PropFormula]
    conclusion: PropFormula


_TOKENS = ("<->", "->", "!", "&", "|", "(", ")")


def _tokenize(text: str) -> List[str]:
    out: List[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        for tok in _TOKENS:
            if text.startswith(tok, i):
                out.append(tok)
                i += len(tok)
                break
        else:
            if ch.isalpha():
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                out.append(text[i:j])
                i = j
            else:
                raise FormulaSyntaxError(f"unexpected character {ch!r}")
    return out


class _Parser:
    """Precedence (loosest first): <->, ->, |, &, !. '->' associates right."""

    def __init__(self, tokens: List[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of formula")
        self.pos += 1
        return tok

    def parse(self) -> PropFormula:
        f = self.iff()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"trailing input at {self.peek()!r}")
        return f

    def iff(self) -> PropFormula:
        left = self.implies()
        while self.peek() == "<->":
            self.take()
            left = Iff(left, self.implies())
        return left

    def implies(self) -> PropFormula:
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disj(self) -> PropFormula:
        left = self.conj()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self) -> PropFormula:
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> PropFormula:
        tok = self.take()
        if tok == "!":
            return Not(self.unary())
        if tok == "(":
            inner = self.iff()
            if self.take() != ")":
                raise FormulaSyntaxError("expected ')'")
            return inner
        if tok.isidentifier():
            return Atom(tok)
        raise FormulaSyntaxError(f"unexpected token {tok!r}")


def parse_formula(text: str) -> PropFormula:
    tokens = _tokenize(text)
    if not tokens:
        raise FormulaSyntaxError("empty formula")
    return _Parser(tokens).parse()


def atoms(f: PropFormula) -> FrozenSet[str]:
    if isinstance(f, Atom):
        return frozenset([f.name])
    if isinstance(f, Not):
        return atoms(f.operand)
    return atoms(f.left) | atoms(f.right)


def eval_prop(f: PropFormula, assignment: Dict[str, bool]) -> bool:
    """Truth-functional evaluation; the assignment must cover every atom."""
    if isinstance(f, Atom):
        if f.name not in assignment:
            raise ArgumentError(f"assignment missing atom {f.name!r}")
        return assignment[f.name]
    if isinstance(f, Not):
        return not eval_prop(f.operand, assignment)
    left = eval_prop(f.left, assignment)
    right = eval_prop(f.right, assignment)
    if isinstance(f, And):
        return left and right
    if isinstance(f, Or):
        return left or right
    if isinstance(f, Implies):
        return (not left) or right
    return left == right  # Iff


def _assignments(names: List[str]):
    """All assignments in lexicographic order (false before true)."""
    for values in product([False, True], repeat=len(names)):
        yield dict(zip(names, values))


def _guarded_atoms(formulas: List[PropFormula]) -> List[str]:
    names = sorted(set().union(*[atoms(f) for f in formulas]) if formulas else set())
    if len(names) > ATOM_GUARD:
        raise AtomGuardError(
            f"{len(names)} atoms exceeds the enumeration guard of {ATOM_GUARD}")
    return names


def is_tautology(f: PropFormula) -> bool:
    names = _guarded_atoms([f])
    return all(eval_prop(f, a) for a in _assignments(names))


def is_satisfiable(formulas: List[PropFormula]) -> bool:
    names = _guarded_atoms(formulas)
    return any(
        all(eval_prop(f, a) for f in formulas) for a in _assignments(names))


@dataclass
class ArgumentResult:
    valid: bool
    vacuous: bool  # valid only because the premises are jointly unsatisfiable
    counterexample: Optional[Dict[str, bool]]


def is_valid_argument(arg: ArgumentForm) -> ArgumentResult:
    """Truth-table validity: every assignment satisfying all premises must
    satisfy the conclusion. On failure, returns the lexicographically
    first counterexample."""
    names = _guarded_atoms(arg.premises + [arg.conclusion])
    premises_satisfiable = False
    counterexample = None
    for a in _assignments(names):
        if all(eval_prop(p, a) for p in arg.premises):
            premises_satisfiable = True
            if not eval_prop(arg.conclusion, a):
                counterexample = a
                break
    valid = counterexample is None
    return ArgumentResult(
        valid=valid,
        vacuous=valid and not premises_satisfiable,
        counterexample=counterexample,
    )


def analyze_modus_tollens_schema() -> dict:
    """The canned analysis of the three-atom schema.

    Checks, in order: the bare schema {P1 -> (P2 -> P3), !(P2 -> P3)}
    concluding !P1 is valid; under the definitional axiom P2 <-> P3 the
    implication P2 -> P3 is a tautology and its negation unsatisfiable;
    hence the full premise set is unsatisfiable and the argument, while
    still valid, is vacuous.
    """
    p1, p2, p3 = Atom("P1"), Atom("P2"), Atom("P3")
    implication = Implies(p2, p3)
    axiom = Iff(p2, p3)
    schema = ArgumentForm([Implies(p1, implication), Not(implication)], Not(p1))
    schema_result = is_valid_argument(schema)
    with_axiom = ArgumentForm(schema.premises + [axiom], schema.conclusion)
    full_result = is_valid_argument(with_axiom)
    return {
        "schema": {
            "premises": [str(p) for p in schema.premises],
            "conclusion": str(schema.conclusion),
            "axiom": str(axiom),
        },
        "schema_valid": schema_result.valid,
        "schema_vacuous": schema_result.vacuous,
        "implication_tautology_under_axiom": is_tautology(Implies(axiom, implication)),
        "negated_implication_satisfiable_under_axiom": is_satisfiable(
            [axiom, Not(implication)]),
        "premise_set_satisfiable": is_satisfiable(with_axiom.premises),
        "valid": full_result.valid,
        "vacuous": full_result.vacuous,
    }


def analyze_argument(arg: ArgumentForm) -> dict:
    """Report for a user-supplied argument form."""
    result = is_valid_argument(arg)
    return {
        "schema": {
            "premises": [str(p) for p in arg.premises],
            "conclusion": str(arg.conclusion),
        },
        "premise_set_satisfiable": is_satisfiable(arg.premises),
        "valid": result.valid,
        "vacuous": result.vacuous,
        "counterexample": result.counterexample,
    }


def parse_argument_file(text: str) -> ArgumentForm:
    """Schema files: 'premise: <formula>' lines (repeatable) and one
    'conclusion: <formula>' line; '#' starts a comment."""
    premises: List[PropFormula] = []
    conclusion: Optional[PropFormula] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise FormulaSyntaxError(f"line {lineno}: expected 'key: formula'")
        key, body = line.split(":", 1)
        key = key.strip()
        if key == "premise":
            premises.append(parse_formula(body))
        elif key == "conclusion":
            if conclusion is not None:
                raise FormulaSyntaxError(f"line {lineno}: duplicate conclusion")
            conclusion = parse_formula(body)
        else:
            raise FormulaSyntaxError(f"line {lineno}: unknown key {key!r}")
    if conclusion is None:
        raise FormulaSyntaxError("schema file has no conclusion")
    return ArgumentForm(premises, conclusion)
