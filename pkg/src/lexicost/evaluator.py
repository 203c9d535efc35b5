"""Bottom-up least-model evaluation and example coverage.

Entailment of an example is membership of the ground example atom in the
least Herbrand model of the background facts plus the hypothesis.  The
fixpoint is computed by semi-naive iteration: each round only re-derives
through rule bodies that can touch an atom derived in the previous round.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LengthMismatchError, LexicostError, ResourceLimitError
from .kb import Atom, Program, Rule, Task, const

DEFAULT_ATOM_CAP = 10_000_000

# internal ground-atom form: (predicate, (constant names...))
_Ground = tuple[str, tuple[str, ...]]


@dataclass(frozen=True)
class Coverage:
    """Bitsets over the positive/negative example lists; bit i = example i."""

    pos_bits: int
    neg_bits: int
    n_pos: int
    n_neg: int

    def pos_string(self) -> str:
        return bits_to_string(self.pos_bits, self.n_pos)

    def neg_string(self) -> str:
        return bits_to_string(self.neg_bits, self.n_neg)


@dataclass(frozen=True)
class Confusion:
    tp: int
    fp: int
    tn: int
    fn: int


def bits_to_string(bits: int, length: int) -> str:
    return "".join("1" if bits >> i & 1 else "0" for i in range(length))


def string_to_bits(s: str) -> int:
    bits = 0
    for i, ch in enumerate(s):
        if ch == "1":
            bits |= 1 << i
    return bits


def _ground(a: Atom) -> _Ground:
    return (a.predicate, tuple(t.name for t in a.args))


# A compiled body literal: (predicate, argspec) where each argspec entry is
# ('v', var_index) or ('c', constant_name).
def _compile_atom(a: Atom, var_ids: dict[str, int]):
    spec = []
    for t in a.args:
        if t.is_var:
            spec.append(("v", var_ids.setdefault(t.name, len(var_ids))))
        else:
            spec.append(("c", t.name))
    return (a.predicate, tuple(spec))


def _compile_rule(rule: Rule):
    var_ids: dict[str, int] = {}
    head = _compile_atom(rule.head, var_ids)
    n_head_vars = len(var_ids)
    body = tuple(_compile_atom(a, var_ids) for a in rule.body)
    body_vars = {v for _, spec in body for kind, v in spec if kind == "v"}
    if any(i not in body_vars for i in range(n_head_vars)):
        raise LexicostError(
            f"rule is not range-restricted (head variable missing from body): {rule}"
        )
    return (head, body, len(var_ids))


def _match(spec, fact_args, env) -> bool:
    """Extend env in place to match a compiled literal against ground args."""
    trail = []
    for (kind, val), arg in zip(spec, fact_args):
        if kind == "c":
            if val != arg:
                for i in trail:
                    env[i] = None
                return False
        else:
            bound = env[val]
            if bound is None:
                env[val] = arg
                trail.append(val)
            elif bound != arg:
                for i in trail:
                    env[i] = None
                return False
    return True


def _bound_count(spec, env) -> int:
    return sum(1 for kind, val in spec if kind == "c" or env[val] is not None)


def _join(body, use_delta_at, relations, delta, env, out, head):
    """Backtracking join over the remaining body literals.

    `use_delta_at` names the one literal that must read from the delta
    relation; all others read the full relations.  Remaining literals are
    chosen most-bound-first, smaller relation first.
    """
    def rec(remaining: tuple[int, ...], env: list) -> None:
        if not remaining:
            args = tuple(
                val if kind == "c" else env[val] for kind, val in head[1]
            )
            out.add((head[0], args))
            return
        # pick the next literal: delta literal first, then most bound / smallest
        def choose_key(i):
            pred, spec = body[i]
            rel = delta if i == use_delta_at else relations
            size = len(rel.get(pred, ()))
            return (0 if i == use_delta_at else 1, -_bound_count(spec, env), size)

        i = min(remaining, key=choose_key)
        rest = tuple(j for j in remaining if j != i)
        pred, spec = body[i]
        rel = delta if i == use_delta_at else relations
        for fact_args in rel.get(pred, ()):
            if len(fact_args) != len(spec):
                continue
            trail = [v for (k, v) in spec if k == "v" and env[v] is None]
            if _match(spec, fact_args, env):
                rec(rest, env)
                # undo bindings introduced by this match
                for v in trail:
                    env[v] = None

    rec(tuple(range(len(body))), env)


def _least_model_ground(
    rules: list, facts: set[_Ground], max_atoms: int
) -> dict[str, set[tuple[str, ...]]]:
    relations: dict[str, set[tuple[str, ...]]] = {}
    for pred, args in facts:
        relations.setdefault(pred, set()).add(args)
    derived_count = 0

    compiled = [_compile_rule(r) for r in rules]
    delta = {p: set(v) for p, v in relations.items()}
    while delta:
        derived: set[_Ground] = set()
        for head, body, nvars in compiled:
            for i, (pred, _spec) in enumerate(body):
                if pred not in delta or not delta[pred]:
                    continue
                env: list = [None] * nvars
                _join(body, i, relations, delta, env, derived, head)
        new_delta: dict[str, set[tuple[str, ...]]] = {}
        for pred, args in derived:
            rel = relations.setdefault(pred, set())
            if args not in rel:
                rel.add(args)
                new_delta.setdefault(pred, set()).add(args)
                derived_count += 1
                if derived_count > max_atoms:
                    raise ResourceLimitError(
                        f"least model derived more than {max_atoms} atoms"
                    )
        delta = new_delta
    return relations


def least_model(
    p: Program, facts: frozenset[Atom] | set[Atom], *, max_atoms: int = DEFAULT_ATOM_CAP
) -> frozenset[Atom]:
    """The least fixpoint of the program over the facts; a superset of facts."""
    relations = _least_model_ground(
        list(p.rules), {_ground(a) for a in facts}, max_atoms
    )
    return frozenset(
        Atom(pred, tuple(const(name) for name in args))
        for pred, tuples in relations.items()
        for args in tuples
    )


def coverage_of_examples(
    p: Program,
    facts: frozenset[Atom],
    pos: tuple[Atom, ...],
    neg: tuple[Atom, ...],
    *,
    max_atoms: int = DEFAULT_ATOM_CAP,
) -> Coverage:
    relations = _least_model_ground(
        list(p.rules), {_ground(a) for a in facts}, max_atoms
    )

    def bits(examples: tuple[Atom, ...]) -> int:
        out = 0
        for i, a in enumerate(examples):
            pred, args = _ground(a)
            if args in relations.get(pred, ()):
                out |= 1 << i
        return out

    return Coverage(bits(pos), bits(neg), len(pos), len(neg))


def coverage(p: Program, t: Task, *, max_atoms: int = DEFAULT_ATOM_CAP) -> Coverage:
    """Which training examples the hypothesis entails over the task's facts."""
    return coverage_of_examples(p, t.bk_facts, t.pos, t.neg, max_atoms=max_atoms)


def confusion(c: Coverage, t: Task) -> Confusion:
    if c.n_pos != len(t.pos) or c.n_neg != len(t.neg):
        raise LengthMismatchError(
            f"coverage is over {c.n_pos}/{c.n_neg} examples, task has "
            f"{len(t.pos)}/{len(t.neg)}"
        )
    tp = c.pos_bits.bit_count()
    fp = c.neg_bits.bit_count()
    return Confusion(tp=tp, fp=fp, tn=c.n_neg - fp, fn=c.n_pos - tp)


def confusion_of(cov_pos: int, cov_neg: int, n_pos: int, n_neg: int) -> Confusion:
    tp = cov_pos.bit_count()
    fp = cov_neg.bit_count()
    return Confusion(tp=tp, fp=fp, tn=n_neg - fp, fn=n_pos - tp)
