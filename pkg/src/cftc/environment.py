"""Finite environment tables and the erroneous-environment relation.

An environment maps every observed trace to the set of inputs it offers
next. Here it is a finite table keyed by traces of length <= ``depth``;
every other trace is offered nothing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping

from .component import Component, Message, format_trace, run, trace_key
from .equivalence import ByClauseAndEvent, msg_equiv, msg_irrelevant, signature, trace_equiv
from .errors import EnvBoundError


@dataclass(frozen=True)
class EnvTable:
    depth: int = 0
    entries: tuple = ()

    def __post_init__(self):
        if self.depth < 0:
            raise EnvBoundError("environment depth must be >= 0")
        table = {}
        for t, msgs in self.entries:
            t = tuple(t)
            if len(t) > self.depth:
                raise EnvBoundError(f"trace {format_trace(t)} is longer than the table depth {self.depth}")
            msgs = frozenset(msgs)
            for m in msgs:
                if not m.is_input:
                    raise EnvBoundError(f"environment offers the output {m}")
            if msgs:
                table[t] = table.get(t, frozenset()) | msgs
        entries = tuple(
            (t, tuple(sorted(table[t]))) for t in sorted(table, key=trace_key)
        )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_map(cls, depth: int, offers_map: Mapping):
        return cls(depth, tuple(offers_map.items()))

    @cached_property
    def offers_map(self):
        return {t: frozenset(msgs) for t, msgs in self.entries}

    def offers(self, t) -> frozenset:
        t = tuple(t)
        if len(t) > self.depth:
            return frozenset()
        return self.offers_map.get(t, frozenset())

    def dump(self):
        return [f"{format_trace(t)} : {{{','.join(str(m) for m in msgs)}}}" for t, msgs in self.entries]

    def __str__(self):
        return "\n".join(self.dump()) or "(offers nothing)"


def offers(env: EnvTable, t) -> frozenset:
    return env.offers(t)


def accepts_under_env(comp: Component, env: EnvTable, t, *, allow_beyond=False) -> bool:
    """Whether ``comp`` can communicate ``t`` with every input offered by ``env``.

    An input at a prefix longer than the table depth raises unless
    ``allow_beyond`` is set, in which case it is simply not offered.
    """
    t = tuple(t)
    for k, m in enumerate(t):
        if m.is_input:
            if k > env.depth and not allow_beyond:
                raise EnvBoundError("environment bound exceeded")
            if m not in env.offers(t[:k]):
                return False
    return bool(run(comp, t))


def all_traces(alphabet: Iterable[Message], bound: int) -> list:
    alphabet = sorted(set(alphabet))
    out = []
    for n in range(bound + 1):
        out.extend(itertools.product(alphabet, repeat=n))
    return out


def _universe(wf, wc, alphabet, trace_bound, universe):
    if universe is not None:
        return [tuple(t) for t in universe]
    depth = min(wf.depth, wc.depth)
    if trace_bound is None:
        trace_bound = depth
    if trace_bound > depth:
        raise EnvBoundError(f"bound mismatch: trace bound {trace_bound} exceeds table depth {depth}")
    return all_traces(alphabet or (), trace_bound)


def _offers_match(c_offers, f_offers, rel: ByClauseAndEvent) -> bool:
    clause = rel.clause_only
    for pv in c_offers:
        if not (msg_irrelevant(pv, rel) or any(msg_equiv(pv, qu, clause) for qu in f_offers)):
            return False
    for qu in f_offers:
        if not (msg_irrelevant(qu, rel) or any(msg_equiv(pv, qu, clause) for pv in c_offers)):
            return False
    return True


@lru_cache(maxsize=256)
def _equivalent_pairs(traces, rel):
    return [(t1, t2) for t1 in traces for t2 in traces if trace_equiv(t1, t2, rel)]


def envs_erroneous_pair(wf: EnvTable, wc: EnvTable, rel: ByClauseAndEvent, alphabet=None,
                        trace_bound=None, *, universe=None, method="direct") -> bool:
    """Whether ``wf`` is an erroneous environment for ``wc`` under ``rel``.

    The quantification over equivalent trace pairs ranges over
    ``universe`` when given, else over all traces on ``alphabet`` up to
    ``trace_bound``. ``method="grouped"`` only pairs traces with equal
    signatures, which are exactly the equivalent ones.
    """
    traces = _universe(wf, wc, alphabet, trace_bound, universe)
    if method == "direct":
        for t1, t2 in _equivalent_pairs(tuple(traces), rel):
            if not _offers_match(wc.offers(t1), wf.offers(t2), rel):
                return False
        return True
    if method != "grouped":
        raise ValueError(f"unknown method {method!r}")
    buckets = {}
    for t in traces:
        buckets.setdefault(signature(t, rel), []).append(t)
    for bucket in buckets.values():
        for t1 in bucket:
            c_offers = wc.offers(t1)
            for t2 in bucket:
                if not _offers_match(c_offers, wf.offers(t2), rel):
                    return False
    return True


def env_valid(env: EnvTable, rel: ByClauseAndEvent, alphabet=None, trace_bound=None, *,
              universe=None, method="direct") -> bool:
    return envs_erroneous_pair(env, env, rel, alphabet, trace_bound, universe=universe, method=method)


def offer_sets(inputs, max_offers):
    inputs = sorted(set(inputs))
    for k in range(min(max_offers, len(inputs)) + 1):
        for combo in itertools.combinations(inputs, k):
            yield frozenset(combo)


def enumerate_environments(inputs, depth: int, max_offers: int, rel: ByClauseAndEvent, *,
                           keys=None, trace_alphabet=None, method="direct") -> Iterator[EnvTable]:
    """Every valid table over ``keys`` with at most ``max_offers`` offers per trace.

    ``keys`` defaults to all traces of length <= depth over
    ``trace_alphabet`` (itself defaulting to ``inputs``).
    """
    if depth < 0 or max_offers < 0:
        raise EnvBoundError("bounds must be >= 0")
    if keys is None:
        keys = all_traces(trace_alphabet if trace_alphabet is not None else inputs, depth)
    keys = sorted({tuple(k) for k in keys if len(k) <= depth}, key=trace_key)
    options = list(offer_sets(inputs, max_offers))
    for choice in itertools.product(options, repeat=len(keys)):
        env = EnvTable(depth, tuple(zip(keys, choice)))
        if env_valid(env, rel, universe=keys, method=method):
            yield env
