"""CNF formulas with bounded literal occurrences and a brute-force SAT oracle."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import InvalidFormulaError, check_cap, default_cap

__all__ = [
    "CnfFormula",
    "validate_3b2",
    "validate_relaxed",
    "require_formula",
    "sat_bruteforce",
    "example_formula",
    "enumerate_3b2",
]

Literal = Tuple[int, bool]


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of clauses; a literal is ``(variable index, polarity)``.

    Polarity ``True`` is the positive literal.
    """

    num_vars: int
    clauses: Tuple[Tuple[Literal, ...], ...] = field(default_factory=tuple)

    def __post_init__(self):
        cl = tuple(tuple((int(v), bool(p)) for v, p in c) for c in self.clauses)
        object.__setattr__(self, "clauses", cl)
        if self.num_vars < 0:
            raise InvalidFormulaError("num_vars must be non-negative")
        for c in cl:
            for v, _ in c:
                if not 0 <= v < self.num_vars:
                    raise InvalidFormulaError(f"variable {v} out of range")

    def occurrences(self) -> Counter:
        return Counter(lit for c in self.clauses for lit in c)

    def evaluate(self, assignment: Sequence[bool]) -> bool:
        return all(any(assignment[v] == p for v, p in c) for c in self.clauses)

    def to_json(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "clauses": [[[v, p] for v, p in c] for c in self.clauses],
        }

    @classmethod
    def from_json(cls, data) -> "CnfFormula":
        if not isinstance(data, dict) or set(data) != {"num_vars", "clauses"}:
            raise InvalidFormulaError("formula needs exactly the keys num_vars and clauses")
        try:
            clauses = [[(int(v), bool(p)) for v, p in c] for c in data["clauses"]]
            return cls(int(data["num_vars"]), tuple(map(tuple, clauses)))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InvalidFormulaError):
                raise
            raise InvalidFormulaError(f"malformed clause list: {exc}") from None


def validate_3b2(f: CnfFormula) -> bool:
    """Every clause has three literals and every literal occurs exactly twice."""
    if any(len(c) != 3 for c in f.clauses):
        return False
    occ = f.occurrences()
    return all(occ[(v, p)] == 2 for v in range(f.num_vars) for p in (True, False))


def validate_relaxed(f: CnfFormula) -> bool:
    """Clauses of one to three literals, each literal at most twice."""
    if any(not 1 <= len(c) <= 3 for c in f.clauses):
        return False
    return all(n <= 2 for n in f.occurrences().values())


def require_formula(f: CnfFormula, strict: bool = True) -> None:
    ok = validate_3b2(f) if strict else validate_relaxed(f)
    if not ok:
        kind = "exactly-twice 3-literal" if strict else "relaxed (at most twice, 1-3 literals)"
        raise InvalidFormulaError(f"formula is not a valid {kind} formula")


def sat_bruteforce(f: CnfFormula, cap: Optional[int] = None) -> Tuple[bool, Optional[Tuple[bool, ...]]]:
    """Try all assignments; returns ``(satisfiable, assignment or None)``."""
    check_cap("num_vars", f.num_vars, default_cap(24) if cap is None else cap)
    for a in itertools.product((False, True), repeat=f.num_vars):
        if f.evaluate(a):
            return True, a
    return False, None


def example_formula() -> CnfFormula:
    """(x | y | z) & (~x | y | ~z) & (~x | ~y | z) & (x | ~y | ~z)."""
    T, F = True, False
    return CnfFormula(
        3,
        (
            ((0, T), (1, T), (2, T)),
            ((0, F), (1, T), (2, F)),
            ((0, F), (1, F), (2, T)),
            ((0, T), (1, F), (2, F)),
        ),
    )


def enumerate_3b2(num_vars: int) -> Iterator[CnfFormula]:
    """All exactly-twice formulas whose clauses use distinct variables.

    Clause order is canonical (sorted) and literal order within a clause
    follows variable order, so every formula is produced once. Empty when
    ``4 * num_vars`` is not a multiple of 3.
    """
    if num_vars == 0:
        yield CnfFormula(0, ())
        return
    if (4 * num_vars) % 3:
        return
    lits = [(v, p) for v in range(num_vars) for p in (True, False)]
    m = 4 * num_vars // 3
    candidates = [
        tuple(c)
        for c in itertools.combinations(lits, 3)
        if len({v for v, _ in c}) == 3
    ]
    seen = set()

    def rec(start: int, chosen: List[tuple], occ: Counter):
        if len(chosen) == m:
            if all(occ[l] == 2 for l in lits):
                key = tuple(chosen)
                if key not in seen:
                    seen.add(key)
                    yield CnfFormula(num_vars, key)
            return
        for i in range(start, len(candidates)):
            c = candidates[i]
            if any(occ[l] >= 2 for l in c):
                continue
            for l in c:
                occ[l] += 1
            chosen.append(c)
            yield from rec(i, chosen, occ)
            chosen.pop()
            for l in c:
                occ[l] -= 1

    yield from rec(0, [], Counter())
