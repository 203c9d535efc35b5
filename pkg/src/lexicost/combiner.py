"""Exact minimisation of a lexicographic cost over unions of promising programs.

Selecting a subset of promising (non-recursive, positively-covering) programs
yields a union whose coverage is the bitwise OR of the members' coverages and
whose charged size is the sum of the members' sizes.  `optimal_combination`
finds a subset whose cost vector is lexicographically minimal over all 2^n
subsets (optionally only those within a rule-count budget, keeping the union
inside a bias-bounded space), by depth-first branch and bound with
per-component admissible lower bounds, then deterministically tie-breaks
cost-equal optima to the smallest selected-id set in lexicographic order.
`brute_force_combination` is the independent exhaustive oracle with the
identical contract.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cost import CostSpec, CostVector, evaluate
from .errors import LengthMismatchError, TooLargeError
from .evaluator import Confusion, bits_to_string, confusion_of, string_to_bits
from .kb import Program

BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class PromisingEntry:
    id: int
    program: Program
    pos_bits: int
    neg_bits: int
    size: int


@dataclass(frozen=True)
class CombineProblem:
    entries: tuple[PromisingEntry, ...]
    n_pos: int
    n_neg: int
    spec: CostSpec
    # when set, a hard budget on the summed rule count of the selection, so
    # the union stays inside a bias-bounded hypothesis space
    max_rules: int | None = None

    def __post_init__(self):
        for e in self.entries:
            if e.pos_bits >> self.n_pos or e.neg_bits >> self.n_neg:
                raise LengthMismatchError(
                    f"entry {e.id} has coverage bits beyond n_pos/n_neg"
                )


@dataclass(frozen=True)
class CombineSolution:
    selected: tuple[int, ...]
    cost: CostVector
    conf: Confusion
    total_size: int


def _solution(problem: CombineProblem, ids: tuple[int, ...]) -> CombineSolution:
    by_id = {e.id: e for e in problem.entries}
    pos = neg = size = 0
    for i in ids:
        e = by_id[i]
        pos |= e.pos_bits
        neg |= e.neg_bits
        size += e.size
    conf = confusion_of(pos, neg, problem.n_pos, problem.n_neg)
    return CombineSolution(
        selected=tuple(sorted(ids)),
        cost=evaluate(problem.spec, conf, size),
        conf=conf,
        total_size=size,
    )


def _cost_of(spec: CostSpec, pos: int, neg: int, size: int,
             n_pos: int, n_neg: int) -> CostVector:
    return evaluate(spec, confusion_of(pos, neg, n_pos, n_neg), size)


class _Search:
    """Branch-and-bound state over a fixed entry order."""

    def __init__(self, entries: list[PromisingEntry], n_pos: int, n_neg: int,
                 spec: CostSpec, max_rules: int | None):
        self.entries = entries
        self.n_pos = n_pos
        self.n_neg = n_neg
        self.spec = spec
        self.budget = float("inf") if max_rules is None else max_rules
        self.rule_counts = [len(e.program.rules) for e in entries]
        n = len(entries)
        suffix = [0] * (n + 1)
        for i in range(n - 1, -1, -1):
            suffix[i] = suffix[i + 1] | entries[i].pos_bits
        self.suffix_pos = suffix

    def lower_bound(self, i: int, pos: int, neg: int, size: int) -> CostVector:
        fp = neg.bit_count()
        fn = self.n_pos - (pos | self.suffix_pos[i]).bit_count()
        return tuple(
            c.a_fp * fp + c.b_fn * fn + c.c_size * size
            for c in self.spec.components
        )

    def leaf_cost(self, pos: int, neg: int, size: int) -> CostVector:
        return _cost_of(self.spec, pos, neg, size, self.n_pos, self.n_neg)

    def minimise(self) -> CostVector:
        incumbent = self.leaf_cost(0, 0, 0)
        n = len(self.entries)

        def dfs(i: int, pos: int, neg: int, size: int, rules: int) -> None:
            nonlocal incumbent
            if self.lower_bound(i, pos, neg, size) >= incumbent:
                return
            if i == n:
                cost = self.leaf_cost(pos, neg, size)
                if cost < incumbent:
                    incumbent = cost
                return
            e = self.entries[i]
            if rules + self.rule_counts[i] <= self.budget:
                include = (pos | e.pos_bits, neg | e.neg_bits, size + e.size,
                           rules + self.rule_counts[i])
                lb_in = self.lower_bound(i + 1, *include[:3])
                lb_out = self.lower_bound(i + 1, pos, neg, size)
                if lb_in <= lb_out:
                    dfs(i + 1, *include)
                    dfs(i + 1, pos, neg, size, rules)
                else:
                    dfs(i + 1, pos, neg, size, rules)
                    dfs(i + 1, *include)
            else:
                dfs(i + 1, pos, neg, size, rules)

        dfs(0, 0, 0, 0, 0)
        return incumbent

    def can_reach(self, i: int, pos: int, neg: int, size: int, rules: int,
                  target: CostVector) -> bool:
        """Can some feasible subset of entries[i:] reach cost == target?"""
        if self.lower_bound(i, pos, neg, size) > target:
            return False
        if i == len(self.entries):
            return self.leaf_cost(pos, neg, size) == target
        e = self.entries[i]
        if rules + self.rule_counts[i] <= self.budget and self.can_reach(
            i + 1, pos | e.pos_bits, neg | e.neg_bits, size + e.size,
            rules + self.rule_counts[i], target
        ):
            return True
        return self.can_reach(i + 1, pos, neg, size, rules, target)


def _dominates(e1: PromisingEntry, e2: PromisingEntry) -> bool:
    """e1 renders e2 unnecessary: covers no fewer positives, no more
    negatives, is no larger in literals or in rules, and is strictly better
    somewhere (id breaks exact ties)."""
    if e2.pos_bits & ~e1.pos_bits:
        return False
    if e1.neg_bits & ~e2.neg_bits:
        return False
    if e1.size > e2.size:
        return False
    if len(e1.program.rules) > len(e2.program.rules):
        return False
    if (e1.pos_bits, e1.neg_bits, e1.size) != (e2.pos_bits, e2.neg_bits, e2.size):
        return True
    return e1.id < e2.id


def _filter_dominated(entries: tuple[PromisingEntry, ...]) -> list[PromisingEntry]:
    return [
        e for e in entries
        if not any(f is not e and _dominates(f, e) for f in entries)
    ]


def optimal_combination(
    p: CombineProblem, *, dominance_filter: bool = True
) -> CombineSolution:
    """Lexicographically minimal-cost subset over all feasible subsets."""
    entries = list(p.entries)
    if dominance_filter:
        entries = _filter_dominated(p.entries)

    # phase 1: optimal cost, searched in a pruning-friendly order
    branch_order = sorted(
        entries, key=lambda e: (-e.pos_bits.bit_count(), e.size, e.id)
    )
    opt = _Search(branch_order, p.n_pos, p.n_neg, p.spec, p.max_rules).minimise()

    # phase 2: smallest id set (as a sorted tuple) achieving that cost
    id_order = sorted(entries, key=lambda e: e.id)
    search = _Search(id_order, p.n_pos, p.n_neg, p.spec, p.max_rules)
    chosen: list[int] = []
    pos = neg = size = rules = 0
    start = 0
    while search.leaf_cost(pos, neg, size) != opt:
        for j in range(start, len(id_order)):
            e = id_order[j]
            n_rules = len(e.program.rules)
            if rules + n_rules > search.budget:
                continue
            if search.can_reach(
                j + 1, pos | e.pos_bits, neg | e.neg_bits, size + e.size,
                rules + n_rules, opt
            ):
                chosen.append(e.id)
                pos |= e.pos_bits
                neg |= e.neg_bits
                size += e.size
                rules += n_rules
                start = j + 1
                break
        else:  # pragma: no cover - phase 1 guarantees reachability
            raise AssertionError("optimal cost unreachable during tie-break")
    return _solution(p, tuple(chosen))


def brute_force_combination(p: CombineProblem) -> CombineSolution:
    """Exhaustive oracle over all 2^n subsets; same contract, |entries| <= 20."""
    n = len(p.entries)
    if n > BRUTE_FORCE_LIMIT:
        raise TooLargeError(f"{n} entries exceeds the brute-force limit of "
                            f"{BRUTE_FORCE_LIMIT}")
    entries = sorted(p.entries, key=lambda e: e.id)
    budget = float("inf") if p.max_rules is None else p.max_rules
    best: tuple[CostVector, tuple[int, ...]] | None = None

    def rec(i: int, pos: int, neg: int, size: int, rules: int,
            ids: tuple[int, ...]) -> None:
        nonlocal best
        if i == n:
            cost = _cost_of(p.spec, pos, neg, size, p.n_pos, p.n_neg)
            key = (cost, ids)
            if best is None or key < best:
                best = key
            return
        e = entries[i]
        rec(i + 1, pos, neg, size, rules, ids)
        n_rules = len(e.program.rules)
        if rules + n_rules <= budget:
            rec(i + 1, pos | e.pos_bits, neg | e.neg_bits, size + e.size,
                rules + n_rules, ids + (e.id,))

    rec(0, 0, 0, 0, 0, ())
    assert best is not None
    return _solution(p, best[1])


def dump_problem(p: CombineProblem) -> str:
    """One entry per line: `id size pos_bits neg_bits` with bitstrings.

    A zero-length bitset (e.g. a task with no negatives) is written as `-`.
    """

    def bstr(bits: int, length: int) -> str:
        return bits_to_string(bits, length) if length else "-"

    return "\n".join(
        f"{e.id} {e.size} {bstr(e.pos_bits, p.n_pos)} "
        f"{bstr(e.neg_bits, p.n_neg)}"
        for e in p.entries
    )


def parse_problem(text: str, spec: CostSpec) -> CombineProblem:
    """Inverse of dump_problem; entry programs are not reconstructed."""
    entries = []
    n_pos = n_neg = 0
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        ident, size, pos_s, neg_s = line.split()
        pos_s = "" if pos_s == "-" else pos_s
        neg_s = "" if neg_s == "-" else neg_s
        n_pos, n_neg = len(pos_s), len(neg_s)
        entries.append(
            PromisingEntry(
                id=int(ident),
                program=Program(),
                pos_bits=string_to_bits(pos_s),
                neg_bits=string_to_bits(neg_s),
                size=int(size),
            )
        )
    return CombineProblem(tuple(entries), n_pos, n_neg, spec)
