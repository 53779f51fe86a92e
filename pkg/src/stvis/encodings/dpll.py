"""A small complete DPLL solver with two-literal watching.

No clause learning: on conflict the most recent unflipped decision is flipped
(chronological backtracking). Decisions pick the lowest-index unassigned
variable and try False first, so runs are fully deterministic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .cnf import CnfFormula


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass
class SolverVerdict:
    status: Status
    model: list[bool] | None = None  # model[v] for v in 1..num_vars, index 0 unused
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


def solve_cnf(cnf: CnfFormula) -> SolverVerdict:
    n = cnf.num_vars
    value = [0] * (n + 1)  # 0 unassigned, 1 true, -1 false
    # watches indexed by literal: lit -> slot lit + n
    watches: list[list[list[int]]] = [[] for _ in range(2 * n + 1)]
    units: list[int] = []
    for clause in cnf.clauses:
        if not clause:
            return SolverVerdict(Status.UNSAT)
        c = list(clause)
        if len(c) == 1:
            units.append(c[0])
            continue
        watches[c[0] + n].append(c)
        watches[c[1] + n].append(c)

    trail: list[int] = []
    decisions_at: list[int] = []  # trail index where each decision level starts
    flipped: list[bool] = []
    stats = [0, 0, 0]  # decisions, conflicts, propagations

    def assign(lit: int) -> bool:
        v = lit if lit > 0 else -lit
        cur = value[v]
        want = 1 if lit > 0 else -1
        if cur == 0:
            value[v] = want
            trail.append(lit)
            return True
        return cur == want

    def propagate(qhead: int) -> bool:
        while qhead < len(trail):
            false_lit = -trail[qhead]
            qhead += 1
            stats[2] += 1
            ws = watches[false_lit + n]
            i = j = 0
            end = len(ws)
            while i < end:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = value[first if first > 0 else -first]
                if (fv > 0) == (first > 0) and fv != 0:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    vk = value[lk if lk > 0 else -lk]
                    if vk == 0 or (vk > 0) == (lk > 0):
                        c[1], c[k] = lk, c[1]
                        watches[lk + n].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if fv == 0:
                        value[first if first > 0 else -first] = 1 if first > 0 else -1
                        trail.append(first)
                    else:
                        while i < end:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        return False
            del ws[j:]
        return True

    def undo_to(length: int) -> None:
        while len(trail) > length:
            lit = trail.pop()
            value[lit if lit > 0 else -lit] = 0

    for lit in units:
        if not assign(lit):
            return SolverVerdict(Status.UNSAT)
    ok = propagate(0)
    next_var = 1
    while True:
        if not ok:
            stats[1] += 1
            while flipped and flipped[-1]:
                undo_to(decisions_at.pop())
                flipped.pop()
            if not flipped:
                return SolverVerdict(Status.UNSAT, None, *stats)
            start = decisions_at[-1]
            dec = trail[start]
            undo_to(start)
            flipped[-1] = True
            next_var = min(next_var, abs(dec))
            trail.append(-dec)
            value[abs(dec)] = 1 if -dec > 0 else -1
            ok = propagate(start)
            continue
        while next_var <= n and value[next_var] != 0:
            next_var += 1
        if next_var > n:
            model = [False] + [value[v] > 0 for v in range(1, n + 1)]
            if not cnf.satisfied_by(model):
                raise AssertionError("solver produced a model that violates a clause")
            return SolverVerdict(Status.SAT, model, *stats)
        stats[0] += 1
        decisions_at.append(len(trail))
        flipped.append(False)
        trail.append(-next_var)
        value[next_var] = -1
        ok = propagate(len(trail) - 1)
