"""Bounded checking of clause and CFT correctness.

A clause is refuted by an erroneous/correct environment pair and an
erroneous trace that the correct environment cannot reproduce up to
event-equivalence. The search here never enumerates environment tables.
For a candidate erroneous trace it builds the weakest pair of
environments that can produce it: the correct side offers one concrete
input per required equivalence class and nothing irrelevant. It then
solves the choice of concrete values as a game over the correct-side
runs. :func:`check_clause_oracle` is the brute-force transcription used
to cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from ._pool import parallel_map
from .cft import CFT, clauses
from .component import IN, Component, Message, format_trace, trace_key, traces_up_to, validate_deterministic
from .environment import (
    EnvTable,
    accepts_under_env,
    enumerate_environments,
    env_valid,
    envs_erroneous_pair,
)
from .equivalence import ByClauseAndEvent, abstract, msg_equiv, msg_irrelevant, signature, trace_equiv
from .errors import PreconditionError, SimplificationError
from .formula import EventRef, NegClause


@dataclass(frozen=True)
class Bounds:
    trace_depth: int = 4
    env_depth: int = 3
    max_offers: int = 2
    witness_depth: Optional[int] = None

    def __post_init__(self):
        for name in ("trace_depth", "env_depth", "max_offers"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.witness_depth is not None and self.witness_depth < self.trace_depth:
            raise ValueError("witness_depth must be >= trace_depth")

    def for_component(self, comp: Component) -> "Bounds":
        """Fill in the default witness depth: trace depth + 2 * |states|."""
        if self.witness_depth is not None:
            return self
        return replace(self, witness_depth=self.trace_depth + 2 * len(comp.states))


@dataclass(frozen=True)
class Counterexample:
    env_f: EnvTable
    env_c: EnvTable
    trace_f: tuple
    failed_witnesses: tuple = ()

    def sort_key(self):
        return ("\n".join(self.env_f.dump()), "\n".join(self.env_c.dump()), trace_key(self.trace_f))

    def dump(self, indent="  "):
        lines = [f"{indent}trace_f: {format_trace(self.trace_f)}", f"{indent}env_f depth={self.env_f.depth}:"]
        lines += [f"{indent}  {row}" for row in self.env_f.dump()]
        lines.append(f"{indent}env_c depth={self.env_c.depth}:")
        lines += [f"{indent}  {row}" for row in self.env_c.dump()]
        if self.failed_witnesses:
            lines.append(f"{indent}witnesses:")
            lines += [f"{indent}  {format_trace(t)} diverges@{i}" for t, i in self.failed_witnesses]
        return lines


@dataclass(frozen=True)
class Verdict:
    clause: NegClause
    event: EventRef
    counterexample: Optional[Counterexample] = None

    @property
    def correct(self):
        return self.counterexample is None

    @property
    def status(self):
        return "CorrectWithinBounds" if self.correct else "Refuted"

    def format(self, fmt="machine"):
        result = "correct" if self.correct else "refuted"
        if fmt == "machine":
            lines = [f"VERDICT clause={self.clause} result={result}"]
        else:
            lines = [f"clause {self.clause} / {self.event}: {self.status}"]
        if self.counterexample is not None:
            lines += self.counterexample.dump()
        return "\n".join(lines)


def _require(comp, event, require_deterministic):
    if require_deterministic:
        bad = validate_deterministic(comp)
        if bad:
            raise PreconditionError(f"precondition violated: {comp.name} is not deterministic ({bad[0]})")
    decl = comp.port_map.get(event.port)
    if decl is not None and decl.direction is IN:
        raise PreconditionError(f"precondition violated: output event {event} sits on an input port")


def _advance(i, m, target, rel):
    """Position in ``target`` after appending ``m``; ``None`` once diverged."""
    a = abstract(m, rel)
    if a is None:
        return i
    if i < len(target) and target[i] == a:
        return i + 1
    return None


def _concretes(comp, a):
    port, value = a
    if value is not None:
        return [Message(port, value, "?")]
    return [Message(port, v, "?") for v in comp.port(port).domain]


def _requirements(comp, tf, rel, bounds):
    """Abstract offers the pair must agree on, or ``None`` if ``tf`` is out of reach.

    Returns a map from signature-prefix length to required input classes.
    """
    need = {}
    sizes = []
    for k, m in enumerate(tf):
        if not m.is_input:
            continue
        if k > bounds.env_depth:
            return None
        i = len(signature(tf[:k], rel))
        a = abstract(m, rel)
        if a is not None:
            need.setdefault(i, set()).add(a)
        sizes.append((i, a is None))
    for i, irrelevant in sizes:
        if len(need.get(i, ())) + irrelevant > bounds.max_offers:
            return None
    return {i: tuple(sorted(v, key=str)) for i, v in need.items()}


class _Game:
    """Can the correct environment avoid every run equivalent to the target?"""

    def __init__(self, comp, rel, target, need, bounds):
        self.comp, self.rel, self.target, self.need, self.bounds = comp, rel, target, need, bounds
        self.memo = {}
        self.strategy = {}

    def avoid(self, i, states, n):
        key = (i, states, n)
        if key not in self.memo:
            self.memo[key] = self._avoid(i, states, n)
        return self.memo[key]

    def _avoid(self, i, states, n):
        if i == len(self.target):
            return False
        if n == self.bounds.witness_depth:
            return True
        comp = self.comp
        outputs = sorted({m for s in states for m in comp.enabled(s) if not m.is_input})
        for m in outputs:
            j = _advance(i, m, self.target, self.rel)
            if j is not None and not self.avoid(j, comp.post(states, m), n + 1):
                return False
        if n > self.bounds.env_depth:
            return True
        picks = []
        for a in self.need.get(i, ()):
            for c in _concretes(comp, a):
                nxt = comp.post(states, c)
                j = _advance(i, c, self.target, self.rel)
                if not nxt or j is None or self.avoid(j, nxt, n + 1):
                    picks.append(c)
                    break
            else:
                return False
        self.strategy[(i, states, n)] = tuple(picks)
        return True


def _build_counterexample(comp, rel, tf, need, game, bounds):
    target = game.target
    universe = traces_up_to(comp, bounds.env_depth)
    # correct-side offers chosen by the game, along the runs it allows
    chosen = {}
    stack = [((), 0, frozenset([comp.initial]))]
    while stack:
        t, i, states = stack.pop()
        n = len(t)
        if n > bounds.env_depth or i is None or i == len(target):
            continue
        pick = game.strategy.get((i, states, n))
        if pick is not None and need.get(i):
            chosen[t] = pick
        moves = [m for m in {m for s in states for m in comp.enabled(s)} if not m.is_input]
        moves += [c for c in (pick or ()) if comp.post(states, c)]
        for m in moves:
            stack.append((t + (m,), _advance(i, m, target, rel), comp.post(states, m)))

    prefix_inputs = {tf[:k]: m for k, m in enumerate(tf) if m.is_input}
    f_map, c_map = {}, {}
    for t in universe:
        sig = signature(t, rel)
        req = need.get(len(sig), ()) if sig == target[:len(sig)] else ()
        lowest = [_concretes(comp, a)[0] for a in req]
        c_map[t] = chosen.get(t, lowest)
        f_offers = set()
        nxt = prefix_inputs.get(t)
        for a, low in zip(req, lowest):
            f_offers.add(nxt if nxt is not None and abstract(nxt, rel) == a else low)
        if nxt is not None:
            f_offers.add(nxt)
        f_map[t] = f_offers
    env_f = EnvTable.from_map(bounds.env_depth, f_map)
    env_c = EnvTable.from_map(bounds.env_depth, c_map)
    return Counterexample(env_f, env_c, tuple(tf), near_misses(comp, env_c, tf, rel, bounds.witness_depth))


def find_witness(comp: Component, env: EnvTable, tf, rel, max_len: int):
    """A trace of length <= max_len accepted under ``env`` and equivalent to ``tf``."""
    target = signature(tf, rel)
    dead = set()

    def dfs(t, i, states):
        if i == len(target):
            return t
        n = len(t)
        if n == max_len:
            return None
        memo_key = (i, states, n) if n > env.depth else None
        if memo_key in dead:
            return None
        offered = env.offers(t)
        moves = sorted({m for s in states for m in comp.enabled(s) if not m.is_input or m in offered})
        for m in moves:
            j = _advance(i, m, target, rel)
            if j is None:
                continue
            found = dfs(t + (m,), j, comp.post(states, m))
            if found is not None:
                return found
        if memo_key is not None:
            dead.add(memo_key)
        return None

    return dfs((), 0, frozenset([comp.initial]))


def near_misses(comp: Component, env: EnvTable, tf, rel, max_len: int, limit=4, budget=2000):
    """Runs under ``env`` that stop matching ``tf``, with the signature index they reach."""
    target = signature(tf, rel)
    leaves = set()
    stack = [((), 0, frozenset([comp.initial]))]
    while stack and budget > 0:
        budget -= 1
        t, i, states = stack.pop()
        offered = env.offers(t)
        moves = sorted({m for s in states for m in comp.enabled(s) if not m.is_input or m in offered})
        if len(t) == max_len or not moves:
            leaves.add((t, i))
            continue
        for m in moves:
            j = _advance(i, m, target, rel)
            if j is None:
                leaves.add((t + (m,), i))
            else:
                stack.append((t + (m,), j, comp.post(states, m)))
    ranked = sorted(leaves, key=lambda x: (-x[1], trace_key(x[0])))
    return tuple(ranked[:limit])


def verify_counterexample(comp: Component, cex: Counterexample, rel: ByClauseAndEvent, bounds: Bounds,
                          *, check_offers=True, method="grouped"):
    """Re-check every condition of a counterexample directly. Returns a failure reason or ``None``."""
    b = bounds.for_component(comp)
    universe = traces_up_to(comp, b.env_depth)
    if check_offers:
        for env in (cex.env_f, cex.env_c):
            if any(len(msgs) > b.max_offers for _, msgs in env.entries):
                return "too many offers"
    if len(cex.trace_f) > b.trace_depth:
        return "erroneous trace too long"
    if not env_valid(cex.env_f, rel, universe=universe, method=method):
        return "erroneous environment invalid"
    if not env_valid(cex.env_c, rel, universe=universe, method=method):
        return "correct environment invalid"
    if not envs_erroneous_pair(cex.env_f, cex.env_c, rel, universe=universe, method=method):
        return "environments not related"
    if not accepts_under_env(comp, cex.env_f, cex.trace_f, allow_beyond=True):
        return "erroneous trace not accepted"
    witness = find_witness(comp, cex.env_c, cex.trace_f, rel, b.witness_depth)
    if witness is not None:
        return f"witness {format_trace(witness)} exists"
    return None


def check_clause(comp: Component, clause: NegClause, event: EventRef, bounds: Bounds = Bounds(),
                 *, require_deterministic=True) -> Verdict:
    _require(comp, event, require_deterministic)
    b = bounds.for_component(comp)
    rel = ByClauseAndEvent(clause, event)
    solved = {}
    for tf in traces_up_to(comp, b.trace_depth):
        need = _requirements(comp, tf, rel, b)
        if need is None:
            continue
        target = signature(tf, rel)
        key = (target, tuple(sorted(need.items())))
        if key not in solved:
            game = _Game(comp, rel, target, need, b)
            solved[key] = game if game.avoid(0, frozenset([comp.initial]), 0) else None
        game = solved[key]
        if game is None:
            continue
        cex = _build_counterexample(comp, rel, tf, need, game, b)
        reason = verify_counterexample(comp, cex, rel, b)
        if reason is not None:
            raise AssertionError(f"internal error: constructed counterexample fails re-verification: {reason}")
        return Verdict(clause, event, cex)
    return Verdict(clause, event)


def _check_clause_job(args):
    comp, clause, event, bounds, require_deterministic = args
    return check_clause(comp, clause, event, bounds, require_deterministic=require_deterministic)


def check_cft(comp: Component, cft: CFT, bounds: Bounds = Bounds(), *, require_deterministic=True,
              jobs=1) -> list:
    """One verdict per clause of the negated formula, in canonical clause order."""
    _require(comp, cft.output_event, require_deterministic)
    work = [(comp, c, cft.output_event, bounds, False) for c in clauses(cft)]
    return parallel_map(_check_clause_job, work, jobs)


def cft_correct(verdicts) -> bool:
    return all(v.correct for v in verdicts)


def traces_under_env(comp: Component, env: EnvTable, depth: int) -> list:
    """Every trace of length <= depth that ``comp`` communicates under ``env``."""
    found = []
    frontier = [((), frozenset([comp.initial]))]
    for n in range(depth + 1):
        found.extend(t for t, _ in frontier)
        if n == depth:
            break
        nxt = []
        for t, states in frontier:
            offered = env.offers(t)
            for m in sorted({m for s in states for m in comp.enabled(s)}):
                if m.is_input and m not in offered:
                    continue
                nxt.append((t + (m,), comp.post(states, m)))
        frontier = nxt
    return found


def check_clause_oracle(comp: Component, clause: NegClause, event: EventRef, bounds: Bounds = Bounds(),
                        *, require_deterministic=True) -> Verdict:
    """Brute force over every valid table pair; tables are keyed by accepted traces."""
    _require(comp, event, require_deterministic)
    b = bounds.for_component(comp)
    rel = ByClauseAndEvent(clause, event)
    keys = traces_up_to(comp, b.env_depth)
    envs = list(enumerate_environments(comp.inputs(), b.env_depth, b.max_offers, rel, keys=keys))
    candidates = traces_up_to(comp, b.trace_depth)
    runs = [traces_under_env(comp, env, b.witness_depth) for env in envs]
    best = None
    for wf in envs:
        erroneous = [t for t in candidates if accepts_under_env(comp, wf, t, allow_beyond=True)]
        if not erroneous:
            continue
        for wc, correct_runs in zip(envs, runs):
            if not envs_erroneous_pair(wf, wc, rel, universe=keys):
                continue
            for tf in erroneous:
                if any(trace_equiv(tf, tc, rel) for tc in correct_runs):
                    continue
                cex = Counterexample(wf, wc, tf)
                if best is None or cex.sort_key() < best.sort_key():
                    best = cex
    if best is None:
        return Verdict(clause, event)
    return Verdict(clause, event, replace(best, failed_witnesses=near_misses(comp, best.env_c, best.trace_f, rel,
                                                                            b.witness_depth)))


def strip_irrelevant(env: EnvTable, rel) -> EnvTable:
    return EnvTable(env.depth, tuple((t, [m for m in msgs if not msg_irrelevant(m, rel)]) for t, msgs in env.entries))


def simplify_counterexample(comp: Component, cex: Counterexample, rel: ByClauseAndEvent,
                            bounds: Bounds = Bounds()) -> Counterexample:
    """Shrink a counterexample to the offers its erroneous trace actually uses.

    Along traces equivalent to a prefix of the erroneous trace, the
    erroneous side offers every irrelevant input plus the next input of
    the trace; the correct side offers one matching input. Everywhere
    else relevant offers are dropped.
    """
    b = bounds.for_component(comp)
    universe = traces_up_to(comp, b.env_depth)
    t1 = tuple(cex.trace_f)
    env_c = strip_irrelevant(cex.env_c, rel)
    irrelevant_inputs = {m for m in comp.inputs() if msg_irrelevant(m, rel)}
    f_map, c_map = {}, {}
    for t in universe:
        matches = [k for k in range(len(t1) + 1) if trace_equiv(t, t1[:k], rel)]
        if not matches:
            f_map[t] = {m for m in cex.env_f.offers(t) if msg_irrelevant(m, rel)}
            c_map[t] = {m for m in env_c.offers(t) if msg_irrelevant(m, rel)}
            continue
        nexts = sorted({t1[k] for k in matches if k < len(t1) and t1[k].is_input})
        f_map[t] = irrelevant_inputs | set(nexts)
        picked = set()
        for nv in nexts:
            if msg_irrelevant(nv, rel):
                continue
            options = sorted(m for m in env_c.offers(t) if msg_equiv(m, nv, rel))
            if not options:
                raise SimplificationError(f"correct environment offers no match for {nv} at {format_trace(t)}")
            picked.add(options[0])
        c_map[t] = picked
    simple = Counterexample(EnvTable.from_map(b.env_depth, f_map), EnvTable.from_map(b.env_depth, c_map), t1)
    reason = verify_counterexample(comp, simple, rel, b, check_offers=False)
    if reason is not None:
        raise SimplificationError(f"simplification not counterexample-preserving: {reason}")
    return replace(simple, failed_witnesses=near_misses(comp, simple.env_c, t1, rel, b.witness_depth))


def refuted_relations(verdicts):
    return [(v, ByClauseAndEvent(v.clause, v.event)) for v in verdicts if not v.correct]

