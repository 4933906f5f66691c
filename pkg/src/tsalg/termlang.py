"""Term language over {0, 1, &, |, ~, s} with parser, printer, evaluator,
and equation / quasi-equation checkers.

Grammar (whitespace-insensitive)::

    term  := or ;  or := and ('|' and)* ;  and := unary ('&' unary)* ;
    unary := '~' unary
           | 's[' nat ',' nat ']' unary
           | 's{' nat (',' nat)* '}' unary
           | atom ;
    atom  := '0' | '1' | ident | '(' term ')' ;
    eq    := term '=' term ;
    quasi := eq (',' eq)* '=>' eq .

's[i,j]' applies the substitution operator of the transposition swapping
coordinates i and j; 's{a0,a1,...}' that of the permutation with the given
image list.  Precedence: '~' and 's' bind tightest, then '&', then '|';
'&' and '|' associate to the left.  print_term emits a canonical form that
parses back to a structurally identical tree.

Checkers enumerate assignments with variables in sorted name order, each
variable running through bit vectors in increasing numeric value, so the
first (least) violating assignment is deterministic.  Random mode draws
each variable's bit vector as independent fair coin bits from a seeded
generator and always reports the seed it used.
"""

from __future__ import annotations

import itertools
import random as _random
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .algebra import Carrier, CarrierMismatch, Elem, complement, join, meet, one, subst, zero
from .seqspace import DimensionMismatch, NotAPermutation, Perm, transposition

#: Documented default seed for every sampled check in the package.
DEFAULT_SEED = 1729

#: Default ceiling on (2 ** |D|) ** v, the number of assignments an
#: exhaustive check is allowed to enumerate.
DEFAULT_ASSIGNMENT_BUDGET = 1 << 20


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would overrun its configured budget."""


class EvalError(ValueError):
    """A term cannot be evaluated under the given assignment."""


class TermSyntaxError(ValueError):
    """Input text is not a well-formed term, equation or quasi-equation."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


# --- abstract syntax ---------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Not:
    arg: "Term"


@dataclass(frozen=True)
class And:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Or:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Transposition:
    """Operator spec: swap coordinates i and j."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i < 0 or self.j < 0:
            raise ValueError("transposition coordinates must be naturals")
        if self.i == self.j:
            raise ValueError(f"transposition needs two distinct coordinates, got {self.i} twice")


@dataclass(frozen=True)
class Images:
    """Operator spec: the permutation with this image list."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        Perm(self.images)  # validates bijection


PermSpec = Union[Transposition, Images]


@dataclass(frozen=True)
class Subst:
    perm: PermSpec
    arg: "Term"


Term = Union[Var, Zero, One, Not, And, Or, Subst]


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class QuasiEquation:
    hypotheses: tuple[Equation, ...]
    conclusion: Equation


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Zero, One)):
        return set()
    if isinstance(t, (Not, Subst)):
        return term_vars(t.arg)
    if isinstance(t, (And, Or)):
        return term_vars(t.left) | term_vars(t.right)
    raise TypeError(f"not a term node: {t!r}")


def equation_vars(eq: Equation) -> set[str]:
    return term_vars(eq.lhs) | term_vars(eq.rhs)


def quasi_vars(qe: QuasiEquation) -> set[str]:
    out: set[str] = set()
    for h in qe.hypotheses:
        out |= equation_vars(h)
    return out | equation_vars(qe.conclusion)


# --- parser ------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> TermSyntaxError:
        return TermSyntaxError(message, self.pos)

    def skip_ws(self) -> None:
        t = self.text
        while self.pos < len(t) and t[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, lit: str) -> bool:
        self.skip_ws()
        if self.text.startswith(lit, self.pos):
            self.pos += len(lit)
            return True
        return False

    def expect(self, lit: str) -> None:
        if not self.take(lit):
            raise self.error(f"expected {lit!r}")

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a natural number")
        return int(self.text[start : self.pos])

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        t = self.text
        if self.pos < len(t) and (t[self.pos].isalpha() or t[self.pos] == "_"):
            self.pos += 1
            while self.pos < len(t) and (t[self.pos].isalnum() or t[self.pos] == "_"):
                self.pos += 1
        if self.pos == start:
            raise self.error("expected an identifier")
        return t[start : self.pos]

    def nat_list(self, close: str) -> tuple[int, ...]:
        out = [self.nat()]
        while self.take(","):
            out.append(self.nat())
        self.expect(close)
        return tuple(out)

    # grammar rules

    def term(self) -> Term:
        return self.or_()

    def or_(self) -> Term:
        node = self.and_()
        while self.peek() == "|":
            self.expect("|")
            node = Or(node, self.and_())
        return node

    def and_(self) -> Term:
        node = self.unary()
        while self.peek() == "&":
            self.expect("&")
            node = And(node, self.unary())
        return node

    def unary(self) -> Term:
        if self.take("~"):
            return Not(self.unary())
        self.skip_ws()
        here = self.pos
        c = self.peek()
        if c.isalpha() or c == "_":
            name = self.ident()
            if name == "s" and self.peek() in ("[", "{"):
                if self.take("["):
                    i = self.nat()
                    self.expect(",")
                    j = self.nat()
                    self.expect("]")
                    if i == j:
                        self.pos = here
                        raise self.error(f"s[{i},{j}] does not name a transposition")
                    return Subst(Transposition(i, j), self.unary())
                self.expect("{")
                images = self.nat_list("}")
                try:
                    spec = Images(images)
                except NotAPermutation as exc:
                    self.pos = here
                    raise self.error(str(exc)) from None
                return Subst(spec, self.unary())
            return Var(name)
        return self.atom()

    def atom(self) -> Term:
        if self.take("0"):
            return Zero()
        if self.take("1"):
            return One()
        if self.take("("):
            node = self.term()
            self.expect(")")
            return node
        c = self.peek()
        if c.isalpha() or c == "_":
            return Var(self.ident())
        raise self.error("expected '0', '1', a variable, or '('")

    def equation(self) -> Equation:
        lhs = self.term()
        self.skip_ws()
        if not (self.text.startswith("=", self.pos) and not self.text.startswith("=>", self.pos)):
            raise self.error("expected '='")
        self.pos += 1
        return Equation(lhs, self.term())

    def quasi(self) -> QuasiEquation:
        eqs = [self.equation()]
        while self.take(","):
            eqs.append(self.equation())
        if not self.take("=>"):
            raise self.error("expected '=>'")
        return QuasiEquation(tuple(eqs), self.equation())

    def finish(self) -> None:
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("unexpected trailing input")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    node = p.term()
    p.finish()
    return node


def parse_equation(text: str) -> Equation:
    p = _Parser(text)
    eq = p.equation()
    p.finish()
    return eq


def parse_quasi(text: str) -> QuasiEquation:
    p = _Parser(text)
    qe = p.quasi()
    p.finish()
    return qe


# --- printer -----------------------------------------------------------


def _spec_str(spec: PermSpec) -> str:
    if isinstance(spec, Transposition):
        return f"s[{spec.i},{spec.j}]"
    return "s{" + ",".join(map(str, spec.images)) + "}"


def _unary_operand(t: Term) -> str:
    # '~' and 's' bind tighter than '&' and '|'
    s = print_term(t)
    return f"({s})" if isinstance(t, (And, Or)) else s


def print_term(t: Term) -> str:
    """Canonical text form; parse_term(print_term(t)) == t."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Not):
        return "~" + _unary_operand(t.arg)
    if isinstance(t, Subst):
        return _spec_str(t.perm) + " " + _unary_operand(t.arg)
    if isinstance(t, And):
        left = print_term(t.left)
        if isinstance(t.left, Or):
            left = f"({left})"
        right = print_term(t.right)
        if isinstance(t.right, (And, Or)):
            right = f"({right})"
        return f"{left} & {right}"
    if isinstance(t, Or):
        left = print_term(t.left)
        right = print_term(t.right)
        if isinstance(t.right, Or):
            right = f"({right})"
        return f"{left} | {right}"
    raise TypeError(f"not a term node: {t!r}")


def print_equation(eq: Equation) -> str:
    return f"{print_term(eq.lhs)} = {print_term(eq.rhs)}"


def print_quasi(qe: QuasiEquation) -> str:
    conclusion = print_equation(qe.conclusion)
    if not qe.hypotheses:
        return conclusion
    return ", ".join(print_equation(h) for h in qe.hypotheses) + " => " + conclusion


# --- evaluation --------------------------------------------------------


def spec_perm(spec: PermSpec, n: int) -> Perm:
    """Resolve an operator spec against a concrete dimension."""
    if isinstance(spec, Transposition):
        if spec.i >= n or spec.j >= n:
            raise DimensionMismatch(f"s[{spec.i},{spec.j}] does not fit dimension {n}")
        return transposition(n, spec.i, spec.j)
    if len(spec.images) != n:
        raise DimensionMismatch(
            f"image list of length {len(spec.images)} does not fit dimension {n}"
        )
    return Perm(spec.images)


def eval_term(t: Term, D: Carrier, assignment: Mapping[str, Elem]) -> Elem:
    if isinstance(t, Var):
        try:
            x = assignment[t.name]
        except KeyError:
            raise EvalError(f"unassigned variable {t.name!r}") from None
        if x.carrier is not D and x.carrier != D:
            raise CarrierMismatch(f"assignment for {t.name!r} lives on a different carrier")
        return x
    if isinstance(t, Zero):
        return zero(D)
    if isinstance(t, One):
        return one(D)
    if isinstance(t, Not):
        return complement(eval_term(t.arg, D, assignment))
    if isinstance(t, And):
        return meet(eval_term(t.left, D, assignment), eval_term(t.right, D, assignment))
    if isinstance(t, Or):
        return join(eval_term(t.left, D, assignment), eval_term(t.right, D, assignment))
    if isinstance(t, Subst):
        return subst(D, spec_perm(t.perm, D.n), eval_term(t.arg, D, assignment))
    raise TypeError(f"not a term node: {t!r}")


def equation_violated(D: Carrier, eq: Equation, assignment: Mapping[str, Elem]) -> bool:
    return eval_term(eq.lhs, D, assignment) != eval_term(eq.rhs, D, assignment)


def quasi_violated(D: Carrier, qe: QuasiEquation, assignment: Mapping[str, Elem]) -> bool:
    """True when the assignment satisfies every hypothesis but not the
    conclusion.  This is the single violation test all checkers (and any
    witness re-validation) share."""
    for h in qe.hypotheses:
        if equation_violated(D, h, assignment):
            return False
    return equation_violated(D, qe.conclusion, assignment)


# --- checking ----------------------------------------------------------


@dataclass(frozen=True)
class Exhaustive:
    """Enumerate every assignment; requires (2**|D|)**v within budget."""

    budget: int | None = None


@dataclass(frozen=True)
class Random:
    """Sample assignments with a seeded generator."""

    trials: int
    seed: int = DEFAULT_SEED


Mode = Union[Exhaustive, Random]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check.

    outcome is one of 'holds-exhaustive', 'holds-sampled', 'fails'.  A
    fails outcome always carries a witness assignment that re-evaluates to
    a violation; sampled outcomes always carry trials and seed.
    """

    outcome: str
    witness: dict[str, Elem] | None = None
    trials: int | None = None
    seed: int | None = None
    assignments_tested: int = 0

    @property
    def holds(self) -> bool:
        return self.outcome != "fails"


def _assignments(names: list[str], D: Carrier, mode: Mode) -> Iterator[dict[str, Elem]]:
    space = 1 << D.size
    if isinstance(mode, Exhaustive):
        budget = DEFAULT_ASSIGNMENT_BUDGET if mode.budget is None else mode.budget
        total = space ** len(names)
        if total > budget:
            raise BudgetExceeded(
                f"exhaustive check needs {total} assignments, budget is {budget}"
            )
        for combo in itertools.product(range(space), repeat=len(names)):
            yield {nm: Elem(D, b) for nm, b in zip(names, combo)}
    elif isinstance(mode, Random):
        rng = _random.Random(mode.seed)
        size = D.size
        for _ in range(mode.trials):
            yield {nm: Elem(D, rng.getrandbits(size) if size else 0) for nm in names}
    else:
        raise TypeError(f"unknown checking mode: {mode!r}")


def check_quasi(D: Carrier, qe: QuasiEquation, mode: Mode = Exhaustive()) -> Verdict:
    """Check a quasi-equation over the algebra on D.

    Exhaustive mode scans assignments in canonical order (variables sorted
    by name, bit vectors increasing), so a fails verdict carries the least
    violating assignment.
    """
    names = sorted(quasi_vars(qe))
    tested = 0
    for assignment in _assignments(names, D, mode):
        tested += 1
        if quasi_violated(D, qe, assignment):
            if isinstance(mode, Random):
                return Verdict(
                    "fails", witness=assignment, trials=mode.trials, seed=mode.seed,
                    assignments_tested=tested,
                )
            return Verdict("fails", witness=assignment, assignments_tested=tested)
    if isinstance(mode, Random):
        return Verdict("holds-sampled", trials=mode.trials, seed=mode.seed, assignments_tested=tested)
    return Verdict("holds-exhaustive", assignments_tested=tested)


def check_equation(D: Carrier, eq: Equation, mode: Mode = Exhaustive()) -> Verdict:
    """Check an equation; identical to a hypothesis-free quasi-equation."""
    return check_quasi(D, QuasiEquation((), eq), mode)


def sigma(n: int, f: Perm, g: Perm) -> QuasiEquation:
    """The quasi-equation  s_f x | s_g x = ~x  =>  0 = 1  for a given pair
    of coordinate permutations of dimension n.

    It says the substitution pair (f, g) never maps any set onto the exact
    complement; on a one-element algebra it holds vacuously since 0 = 1.
    """
    if f.n != n or g.n != n:
        raise DimensionMismatch(f"permutation dimensions {f.n}, {g.n} do not match n={n}")
    x = Var("x")
    hypothesis = Equation(Or(Subst(Images(f.images), x), Subst(Images(g.images), x)), Not(x))
    return QuasiEquation((hypothesis,), Equation(Zero(), One()))
