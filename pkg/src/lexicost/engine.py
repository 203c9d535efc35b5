"""The learning loop: generate, test, combine, constrain, bound, terminate.

Each candidate is tested standalone and may update the best hypothesis
directly (this is how recursive solutions are found).  Non-recursive
candidates covering at least one positive example join the promising pool,
over which the combine stage selects an exactly optimal union.  Candidates
covering no positives prune all their specialisations from future
generation.  When the cost function charges for size, the generator's size
cap shrinks as the best cost improves, and exhaustion of the stream proves
global optimality over the bias-defined space.
"""

from __future__ import annotations

from dataclasses import dataclass

from .combiner import CombineProblem, PromisingEntry, optimal_combination
from .cost import CostSpec, CostVector, evaluate, generator_size_bound
from .evaluator import (
    Confusion,
    confusion,
    confusion_of,
    coverage,
    coverage_of_examples,
)
from .generator import CandidateGenerator, prune_exact, prune_specializations
from .kb import EMPTY_PROGRAM, Atom, Program, Task, validate_example

PROOF_OPTIMAL = "optimal"
PROOF_CAP_EXHAUSTED = "cap-exhausted"


@dataclass
class LearnOptions:
    spec: CostSpec
    max_size: int | None = None
    candidate_cap: int | None = None
    combine_every: int = 1
    specialization_pruning: bool = True
    dominance_filter: bool = True
    use_size_bound: bool = True

    def __post_init__(self):
        if self.combine_every < 1:
            raise ValueError("combine_every must be >= 1")


@dataclass
class LearnStats:
    generated: int = 0
    tested: int = 0
    promising: int = 0
    combine_calls: int = 0


@dataclass
class LearnResult:
    best: Program
    cost: CostVector
    train_conf: Confusion
    stats: LearnStats
    proof: str
    final_problem: CombineProblem | None = None
    # costs at the start and after each improvement, in loop order
    cost_history: tuple[CostVector, ...] = ()


def _admissible(
    p: Program,
    conf: Confusion,
    spec: CostSpec,
    head_preds: frozenset[tuple[str, int]],
) -> bool:
    """Promising-pool admission.

    The union coverage of selected entries is computed as a bitwise OR, which
    is only exact when no selected rule consumes a predicate another rule can
    derive; requiring that no body literal uses any declared head predicate
    guarantees it for every possible union (and excludes recursive programs).
    Entries must cover a positive, and when false positives are the leading
    objective they must cover no negative: a union containing such an entry
    could never beat the empty hypothesis.
    """
    if p.is_recursive or conf.tp == 0:
        return False
    if any(
        (a.predicate, a.arity) in head_preds for r in p.rules for a in r.body
    ):
        return False
    if spec.fp_is_primary and conf.fp > 0:
        return False
    return True


def learn(t: Task, o: LearnOptions) -> LearnResult:
    spec = o.spec
    ordering = "by-size" if spec.minimises_size else "unordered"
    gen = CandidateGenerator(t.bias, ordering=ordering, size_cap=o.max_size)

    stats = LearnStats()
    n_pos, n_neg = len(t.pos), len(t.neg)
    best_prog = EMPTY_PROGRAM
    best_conf = Confusion(tp=0, fp=0, tn=n_neg, fn=n_pos)
    best_cost = evaluate(spec, best_conf, 0)

    entries: list[PromisingEntry] = []
    pending = 0
    proof = PROOF_OPTIMAL
    history: list[CostVector] = [best_cost]

    def run_combine() -> None:
        nonlocal best_prog, best_conf, best_cost, pending
        pending = 0
        stats.combine_calls += 1
        problem = CombineProblem(
            tuple(entries), n_pos, n_neg, spec, max_rules=t.bias.max_clauses
        )
        sol = optimal_combination(problem, dominance_filter=o.dominance_filter)
        union = Program(
            r for e in entries if e.id in set(sol.selected) for r in e.program.rules
        )
        uconf = sol.conf
        ucost = evaluate(spec, uconf, union.size)
        if ucost < best_cost:
            best_prog, best_conf, best_cost = union, uconf, ucost
            history.append(best_cost)

    while True:
        if o.candidate_cap is not None and stats.generated >= o.candidate_cap:
            proof = PROOF_CAP_EXHAUSTED
            break
        h = gen.next_candidate()
        if h is None:
            break
        stats.generated += 1

        cov = coverage(h, t)
        conf = confusion(cov, t)
        stats.tested += 1

        standalone = evaluate(spec, conf, h.size)
        if standalone < best_cost:
            best_prog, best_conf, best_cost = h, conf, standalone
            history.append(best_cost)

        if _admissible(h, conf, spec, t.bias.head_preds):
            entries.append(
                PromisingEntry(
                    id=len(entries),
                    program=h,
                    pos_bits=cov.pos_bits,
                    neg_bits=cov.neg_bits,
                    size=h.size,
                )
            )
            stats.promising += 1
            pending += 1
            if pending >= o.combine_every:
                run_combine()

        if conf.tp == 0 and o.specialization_pruning:
            gen.add_constraint(prune_specializations(h))
        gen.add_constraint(prune_exact(h))

        if o.use_size_bound:
            bound = generator_size_bound(spec, best_cost)
            if bound is not None:
                gen.set_size_cap(bound)

    if pending:
        run_combine()

    final_problem = (
        CombineProblem(tuple(entries), n_pos, n_neg, spec,
                       max_rules=t.bias.max_clauses)
        if entries
        else None
    )
    return LearnResult(
        best=best_prog,
        cost=best_cost,
        train_conf=best_conf,
        stats=stats,
        proof=proof,
        final_problem=final_problem,
        cost_history=tuple(history),
    )


def evaluate_on_test(
    r: LearnResult,
    t: Task,
    test_pos: tuple[Atom, ...] | list[Atom],
    test_neg: tuple[Atom, ...] | list[Atom],
) -> Confusion:
    """Coverage of the learned hypothesis over held-out examples, against the
    same background facts."""
    test_pos = tuple(test_pos)
    test_neg = tuple(test_neg)
    for a in (*test_pos, *test_neg):
        validate_example(a, t.bias)
    cov = coverage_of_examples(r.best, t.bk_facts, test_pos, test_neg)
    return confusion_of(cov.pos_bits, cov.neg_bits, len(test_pos), len(test_neg))
