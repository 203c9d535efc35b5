"""Candidate-program enumeration within a bias, with constraint pruning.

The generator yields every bias-respecting, non-redundant program exactly
once, in nondecreasing total size, breaking ties within a size class by the
canonical rendering.  Hypothesis rules draw body predicates from the bias's
body predicates (plus head predicates when recursion is enabled), use only
variables, have distinct canonical head variables, and must be safe (head
variables occur in the body) and connected.  Multi-rule candidates are
produced only when recursion is enabled; non-recursive unions are the
combine stage's job.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .kb import VAR, Atom, Bias, Program, Rule, Term, variable_name

PRUNE_SPECIALIZATIONS = "prune-specializations"
PRUNE_EXACT = "prune-exact"


@dataclass(frozen=True)
class Constraint:
    kind: str
    anchor: Program


def prune_specializations(anchor: Program) -> Constraint:
    return Constraint(PRUNE_SPECIALIZATIONS, anchor)


def prune_exact(anchor: Program) -> Constraint:
    return Constraint(PRUNE_EXACT, anchor)


# ---------------------------------------------------------------------------
# Theta-subsumption
# ---------------------------------------------------------------------------


def _bind_atom(a1: Atom, a2: Atom, theta: dict[str, Term]) -> bool:
    """Extend theta so that a1·theta == a2; mutates theta, no undo."""
    for t1, t2 in zip(a1.args, a2.args):
        if t1.is_var:
            bound = theta.get(t1.name)
            if bound is None:
                theta[t1.name] = t2
            elif bound != t2:
                return False
        elif t1 != t2:
            return False
    return True


def _cover_body(lits: tuple[Atom, ...], candidates: tuple[Atom, ...],
                theta: dict[str, Term]) -> bool:
    if not lits:
        return True
    first, rest = lits[0], lits[1:]
    for cand in candidates:
        if cand.predicate == first.predicate and cand.arity == first.arity:
            attempt = dict(theta)
            if _bind_atom(first, cand, attempt) and _cover_body(rest, candidates, attempt):
                return True
    return False


def theta_subsumes(r1: Rule, r2: Rule) -> bool:
    """True iff a substitution maps r1's head to r2's head and its body into r2's."""
    if (r1.head.predicate, r1.head.arity) != (r2.head.predicate, r2.head.arity):
        return False
    theta: dict[str, Term] = {}
    if not _bind_atom(r1.head, r2.head, theta):
        return False
    return _cover_body(r1.body, r2.body, theta)


def program_subsumes(p1: Program, p2: Program) -> bool:
    """Every rule of p2 is subsumed by some rule of p1 (so p1 entails p2)."""
    return all(any(theta_subsumes(r1, r2) for r1 in p1.rules) for r2 in p2.rules)


# ---------------------------------------------------------------------------
# Redundancy
# ---------------------------------------------------------------------------


def _rule_redundant(r: Rule) -> bool:
    head_vars = set(r.head.variables())
    body_vars = {v for a in r.body for v in a.variables()}
    # unused head variable: the rule is unsafe under least-model semantics
    if head_vars - body_vars:
        return True
    # a body literal equal to the head can never derive anything new
    if r.head in r.body:
        return True
    # every body literal must reach the head through a chain of shared variables
    connected = set(head_vars)
    pending = list(r.body)
    progress = True
    while progress and pending:
        progress = False
        still = []
        for a in pending:
            avars = set(a.variables())
            if avars & connected:
                connected |= avars
                progress = True
            else:
                still.append(a)
        pending = still
    return bool(pending)


def is_redundant(p: Program) -> bool:
    """Obviously-simplifiable program: a removable literal or a subsumed rule."""
    for r in p.rules:
        if _rule_redundant(r):
            return True
    for r1, r2 in itertools.permutations(p.rules, 2):
        if theta_subsumes(r1, r2):
            return True
    return False


def _all_rules_can_fire(p: Program, edb_preds: frozenset[tuple[str, int]]) -> bool:
    """Reject programs containing a rule that can never fire.

    A body predicate is available if it is a background relation or derivable
    by this program; derivability is the fixpoint of "some rule for the
    predicate has an all-available body".  A recursive program without a base
    rule fails this check, as does a rule consuming an underivable invented
    head predicate.  Assumes background facts only populate the declared body
    predicates.
    """
    derivable: set[tuple[str, int]] = set()
    changed = True
    while changed:
        changed = False
        for r in p.rules:
            hkey = (r.head.predicate, r.head.arity)
            if hkey in derivable:
                continue
            if all(
                (a.predicate, a.arity) in edb_preds or (a.predicate, a.arity) in derivable
                for a in r.body
            ):
                derivable.add(hkey)
                changed = True
    return all(
        (a.predicate, a.arity) in edb_preds or (a.predicate, a.arity) in derivable
        for r in p.rules
        for a in r.body
    )


# ---------------------------------------------------------------------------
# Rule and program enumeration
# ---------------------------------------------------------------------------


def _literal_pool(bias: Bias) -> list[tuple[Atom, frozenset[int]]]:
    """All body literals over the allowed predicates, paired with var indices."""
    preds = set(bias.body_preds)
    if bias.enable_recursion:
        preds |= set(bias.head_preds)
    pool = []
    for pred, arity in sorted(preds):
        for pattern in itertools.product(range(bias.max_vars), repeat=arity):
            a = Atom(pred, tuple(Term(VAR, variable_name(i)) for i in pattern))
            pool.append((a, frozenset(pattern)))
    return pool


def enumerate_rules(bias: Bias, body_len: int) -> list[Rule]:
    """All canonical, safe, connected rules with exactly body_len body literals."""
    pool = _literal_pool(bias)
    out: set[Rule] = set()
    for hp, ha in sorted(bias.head_preds):
        if ha > bias.max_vars:
            continue
        head = Atom(hp, tuple(Term(VAR, variable_name(i)) for i in range(ha)))
        head_ids = frozenset(range(ha))
        for combo in itertools.combinations(range(len(pool)), body_len):
            used = set(head_ids)
            for i in combo:
                used |= pool[i][1]
            # variable indices must form a contiguous prefix: anything else is
            # a renaming of a combination we also enumerate
            if used != set(range(len(used))):
                continue
            body_vars = frozenset().union(*(pool[i][1] for i in combo))
            if not head_ids <= body_vars:
                continue
            rule = Rule(head, tuple(pool[i][0] for i in combo))
            if len(rule.body) != body_len:  # duplicate literals collapsed
                continue
            if _rule_redundant(rule):
                continue
            out.add(rule)
    return sorted(out, key=Rule.sort_key)


class CandidateGenerator:
    """Stateful candidate stream over a bias; single-owner, engine-driven."""

    def __init__(self, bias: Bias, *, ordering: str = "by-size",
                 size_cap: int | None = None):
        if ordering not in ("by-size", "unordered"):
            raise ValueError(f"unknown ordering {ordering!r}")
        self.bias = bias
        self.ordering = ordering
        cap = bias.max_program_size if size_cap is None else size_cap
        self.size_cap = min(cap, bias.max_program_size)
        self.emitted: set[Program] = set()
        self._spec_anchors: list[Program] = []
        self._exact: set[Program] = set()
        self._size = 1
        self._buffer: deque[Program] = deque()
        self._rules_by_size: dict[int, list[Rule]] = {}
        self._flat_rules: list[Rule] = []
        self._flat_built_upto = 1

    # -- constraints --------------------------------------------------------

    def add_constraint(self, c: Constraint) -> None:
        if c.kind == PRUNE_EXACT:
            self._exact.add(c.anchor)
        elif c.kind == PRUNE_SPECIALIZATIONS:
            if c.anchor not in self._spec_anchors:
                self._spec_anchors.append(c.anchor)
        else:
            raise ValueError(f"unknown constraint kind {c.kind!r}")

    def set_size_cap(self, cap: int) -> None:
        """Tighten the size cap; never loosens."""
        self.size_cap = min(self.size_cap, cap)

    # -- stream -------------------------------------------------------------

    def next_candidate(self) -> Program | None:
        """The next constraint-consistent candidate, or None when exhausted."""
        while True:
            while not self._buffer:
                if not self._advance():
                    return None
            p = self._buffer.popleft()
            if self._blocked(p):
                continue
            self.emitted.add(p)
            return p

    def __iter__(self):
        while (p := self.next_candidate()) is not None:
            yield p

    def _blocked(self, p: Program) -> bool:
        if p.size > self.size_cap or p in self.emitted or p in self._exact:
            return True
        return any(program_subsumes(a, p) for a in self._spec_anchors)

    def _advance(self) -> bool:
        self._size += 1
        if self._size > min(self.size_cap, self.bias.max_program_size):
            return False
        self._buffer.extend(self._programs_of_total(self._size))
        return True

    # -- enumeration --------------------------------------------------------

    def _rules_of_size(self, rsize: int) -> list[Rule]:
        if rsize < 2 or rsize > 1 + self.bias.max_body:
            return []
        if rsize not in self._rules_by_size:
            self._rules_by_size[rsize] = enumerate_rules(self.bias, rsize - 1)
        return self._rules_by_size[rsize]

    def _flat_upto(self, rsize: int) -> list[Rule]:
        """Rules of size 2..rsize in stream order, cached incrementally."""
        rsize = min(rsize, 1 + self.bias.max_body)
        while self._flat_built_upto < rsize:
            self._flat_built_upto += 1
            self._flat_rules.extend(self._rules_of_size(self._flat_built_upto))
        return self._flat_rules

    def _programs_of_total(self, total: int) -> list[Program]:
        programs = [Program([r]) for r in self._rules_of_size(total)]
        if self.bias.enable_recursion and self.bias.max_clauses >= 2:
            rules = self._flat_upto(total - 2)
            chosen: list[Rule] = []

            def rec(start: int, remaining: int) -> None:
                if remaining == 0:
                    if len(chosen) >= 2:
                        self._maybe_add_multi(programs, chosen)
                    return
                if len(chosen) >= self.bias.max_clauses or remaining < 2:
                    return
                budget_rules = self.bias.max_clauses - len(chosen)
                for i in range(start, len(rules)):
                    sz = rules[i].size
                    if sz > remaining:
                        continue
                    # the leftover must be fillable with 1..budget-1 more rules
                    left = remaining - sz
                    if left != 0 and (budget_rules == 1 or left < 2):
                        continue
                    chosen.append(rules[i])
                    rec(i + 1, left)
                    chosen.pop()

            rec(0, total)
        edb = self.bias.body_preds
        programs = [p for p in programs if _all_rules_can_fire(p, edb)]
        return sorted(programs, key=lambda p: tuple(r.sort_key() for r in p.rules))

    def _maybe_add_multi(self, programs: list[Program], chosen: list[Rule]) -> None:
        for r1, r2 in itertools.permutations(chosen, 2):
            if theta_subsumes(r1, r2):
                return
        programs.append(Program(list(chosen)))
