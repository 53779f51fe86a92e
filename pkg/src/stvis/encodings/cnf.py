"""CNF formulas, the sequential-counter at-most-k encoding, and DIMACS I/O."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO


class CnfError(ValueError):
    pass


@dataclass
class CnfFormula:
    num_vars: int = 0
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    # meaning[var] is ("x", v) | ("path", u, v, index) | ("counter", i, j); index 0 unused
    meaning: list[tuple | None] = field(default_factory=lambda: [None])

    def new_var(self, meaning: tuple | None = None) -> int:
        self.num_vars += 1
        self.meaning.append(meaning)
        return self.num_vars

    def add_clause(self, lits: Iterable[int]) -> None:
        seen: dict[int, None] = {}
        for lit in lits:
            if lit == 0 or abs(lit) > self.num_vars:
                raise CnfError(f"literal {lit} outside 1..{self.num_vars}")
            if -lit in seen:
                return  # tautology
            seen[lit] = None
        if not seen:
            raise CnfError("refusing to emit an empty clause")
        self.clauses.append(tuple(seen))

    def satisfied_by(self, model: Sequence[bool]) -> bool:
        """``model[v]`` is the value of variable v (index 0 ignored)."""
        return all(any(model[l] if l > 0 else not model[-l] for l in c) for c in self.clauses)

    def structure(self) -> tuple[int, list[tuple[int, ...]]]:
        return self.num_vars, list(self.clauses)


def add_at_most_k(cnf: CnfFormula, xs: Sequence[int], k: int) -> list[list[int]]:
    """Sequential-counter encoding of ``sum(xs) <= k``.

    Register s[i][j] (0-based i, j) is forced true when at least j+1 of
    xs[0..i] are true. Returns the register variables for inspection.
    """
    n = len(xs)
    if k < 0:
        raise CnfError("k must be nonnegative")
    if k >= n:
        return []
    if k == 0:
        for x in xs:
            cnf.add_clause([-x])
        return []
    s = [[cnf.new_var(("counter", i, j)) for j in range(k)] for i in range(n - 1)]
    cnf.add_clause([-xs[0], s[0][0]])
    for j in range(1, k):
        cnf.add_clause([-s[0][j]])
    for i in range(1, n - 1):
        x = xs[i]
        cnf.add_clause([-x, s[i][0]])
        cnf.add_clause([-s[i - 1][0], s[i][0]])
        for j in range(1, k):
            cnf.add_clause([-x, -s[i - 1][j - 1], s[i][j]])
            cnf.add_clause([-s[i - 1][j], s[i][j]])
        cnf.add_clause([-x, -s[i - 1][k - 1]])
    cnf.add_clause([-xs[n - 1], -s[n - 2][k - 1]])
    return s


def write_dimacs(cnf: CnfFormula, sink: TextIO, comments: Iterable[str] = ()) -> None:
    for line in comments:
        sink.write(f"c {line}\n")
    sink.write(f"p cnf {cnf.num_vars} {len(cnf.clauses)}\n")
    for clause in cnf.clauses:
        sink.write(" ".join(map(str, clause)) + " 0\n")


def read_dimacs(source: TextIO) -> CnfFormula:
    header = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for line in source:
        s = line.strip()
        if not s or s.startswith("c") or s.startswith("%"):
            continue
        if s.startswith("p"):
            parts = s.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"bad header: {s!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        for tok in s.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if header is None:
        raise CnfError("missing 'p cnf' header")
    if pending:
        raise CnfError("last clause is not zero-terminated")
    if len(clauses) != header[1]:
        raise CnfError(f"header announces {header[1]} clauses, found {len(clauses)}")
    cnf = CnfFormula(header[0], clauses, [None] * (header[0] + 1))
    return cnf


def write_var_map(cnf: CnfFormula, sink: TextIO) -> None:
    """Sidecar file describing what each variable means."""
    for var in range(1, cnf.num_vars + 1):
        meaning = cnf.meaning[var] if var < len(cnf.meaning) else None
        if meaning is None:
            continue
        sink.write(f"var {var} = {' '.join(map(str, meaning))}\n")
