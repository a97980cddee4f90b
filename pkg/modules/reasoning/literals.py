"""
Literals, terms, clauses and instances.

Variables are 0-based feature indices. For display variable i is written x{i+1}, and in
JSON a literal is a signed 1-based integer (x1 -> 1, not x1 -> -1).
"""
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Tuple, Union

from modules.reasoning.errors import InputError

Instance = Tuple[int, ...]


class Literal(NamedTuple):
    variable: int
    polarity: bool = True

    def negate(self) -> "Literal":
        return Literal(self.variable, not self.polarity)

    def to_int(self) -> int:
        return self.variable + 1 if self.polarity else -(self.variable + 1)

    @classmethod
    def from_int(cls, value: int) -> "Literal":
        if value == 0:
            raise InputError("0 is not a literal")
        return cls(abs(value) - 1, value > 0)

    def satisfied_by(self, x: Sequence[int]) -> bool:
        return bool(x[self.variable]) == self.polarity

    def __str__(self) -> str:
        name = f"x{self.variable + 1}"
        return name if self.polarity else f"¬{name}"


@dataclass(frozen=True)
class _LiteralSet:
    literals: frozenset = frozenset()

    def __post_init__(self):
        literals = frozenset(Literal(int(lit[0]), bool(lit[1])) for lit in self.literals)
        seen = {}
        for lit in literals:
            if lit.variable < 0:
                raise InputError(f"negative variable index {lit.variable}")
            if seen.get(lit.variable, lit.polarity) != lit.polarity:
                raise InputError(f"x{lit.variable + 1} occurs with both polarities")
            seen[lit.variable] = lit.polarity
        object.__setattr__(self, "literals", literals)

    @classmethod
    def of(cls, *literals: Literal):
        return cls(frozenset(literals))

    @classmethod
    def from_ints(cls, values: Iterable[int]):
        return cls(frozenset(Literal.from_int(v) for v in values))

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(sorted(self.literals))

    def __contains__(self, literal) -> bool:
        return literal in self.literals

    def __le__(self, other: "_LiteralSet") -> bool:
        return self.literals <= other.literals

    def __lt__(self, other: "_LiteralSet") -> bool:
        return self.literals < other.literals

    @property
    def size(self) -> int:
        return len(self.literals)

    def variables(self) -> frozenset:
        return frozenset(lit.variable for lit in self.literals)

    def polarity(self, variable: int) -> Optional[bool]:
        for lit in self.literals:
            if lit.variable == variable:
                return lit.polarity
        return None

    def sorted(self) -> Tuple[Literal, ...]:
        return tuple(sorted(self.literals))

    def to_ints(self) -> list:
        return [lit.to_int() for lit in self.sorted()]

    def sort_key(self) -> Tuple[int, ...]:
        """Lexicographic key on sorted variable indices"""
        return tuple(lit.variable for lit in self.sorted())


class Term(_LiteralSet):
    """Conjunction of literals"""

    def covers(self, x: Sequence[int]) -> bool:
        return all(lit.satisfied_by(x) for lit in self.literals)

    def without(self, literal: Literal) -> "Term":
        return Term(self.literals - {literal})

    def negation(self) -> "Clause":
        return Clause(frozenset(lit.negate() for lit in self.literals))

    def __str__(self) -> str:
        if not self.literals:
            return "⊤"
        return " ∧ ".join(str(lit) for lit in self.sorted())


class Clause(_LiteralSet):
    """Disjunction of literals"""

    def satisfied_by(self, x: Sequence[int]) -> bool:
        return any(lit.satisfied_by(x) for lit in self.literals)

    def negation(self) -> Term:
        return Term(frozenset(lit.negate() for lit in self.literals))

    def __str__(self) -> str:
        if not self.literals:
            return "⊥"
        return " ∨ ".join(str(lit) for lit in self.sorted())


def as_instance(values: Union[str, Sequence[int]], n: Optional[int] = None) -> Instance:
    """Parse '1011', '1,0,1,1' or a sequence of bits into an Instance"""
    if isinstance(values, str):
        text = values.strip()
        parts = [p.strip() for p in text.split(",")] if "," in text else list(text.replace(" ", ""))
        try:
            bits = tuple(int(p) for p in parts if p != "")
        except ValueError:
            raise InputError(f"instance '{values}' is not a bit vector") from None
    else:
        bits = tuple(int(v) for v in values)
    if any(b not in (0, 1) for b in bits):
        raise InputError(f"instance {bits} contains values other than 0 and 1")
    if n is not None and len(bits) != n:
        raise InputError(f"instance has {len(bits)} values, the tree expects {n}")
    return bits


def term_of_instance(x: Sequence[int]) -> Term:
    """t_x: one literal per feature, with the polarity of x"""
    return Term(frozenset(Literal(i, bool(v)) for i, v in enumerate(x)))
