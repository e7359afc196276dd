"""Cross-check the game-based checker against brute force on random small components.

    python3 scripts/oracle_sweep.py --instances 200 --env-depth 1 --max-offers 2
"""

import argparse
import random
import sys
import time

from cftc.checker import Bounds, check_clause, check_clause_oracle
from cftc.component import traces_up_to
from cftc.formula import EventRef, Kind, NegClause
from cftc.generate import GenParams, gen_component


def instance(seed, max_states, depth):
    rng = random.Random(f"sweep:{seed}")
    outs = ("q",) if rng.random() < 0.6 else ("q", "s")
    params = GenParams(max_states=max_states, domain_size=2, inputs=("p",), outputs=outs)
    attempt = 0
    while True:
        comp = gen_component(("sweep", seed, attempt), params)
        if any(t[0].is_input and not t[-1].is_input for t in traces_up_to(comp, depth) if t):
            break
        attempt += 1
    # "r" is not a port of the component, so clauses over it ignore everything
    events = [EventRef(p, k) for p in ("p", "r") for k in Kind]
    clause = NegClause.of(rng.sample(events, rng.randint(1, 2)))
    return comp, clause, EventRef(rng.choice(outs), rng.choice(list(Kind)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--max-states", type=int, default=3)
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--env-depth", type=int, default=1)
    ap.add_argument("--max-offers", type=int, default=2)
    args = ap.parse_args(argv)

    bounds = Bounds(args.depth, args.env_depth, args.max_offers)
    start = time.perf_counter()
    refuted, disagreements = 0, []
    for seed in range(args.instances):
        comp, clause, event = instance(seed, args.max_states, args.depth)
        fast = check_clause(comp, clause, event, bounds)
        slow = check_clause_oracle(comp, clause, event, bounds)
        refuted += not slow.correct
        if fast.correct != slow.correct:
            disagreements.append(seed)
            print(f"DISAGREE seed={seed} clause={clause} event={event} checker={fast.status} oracle={slow.status}")
    print(f"SWEEP instances={args.instances} refuted={refuted} disagreements={len(disagreements)} "
          f"seconds={time.perf_counter() - start:.1f}")
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
