"""Classify sequence prefixes and repair a non-conforming one by splicing.

Three verdicts on finite prefixes, each against a tolerance schedule
(scales paired with the positions from which they apply): consecutive
gaps small (quasi-Cauchy), all pairwise gaps small (Cauchy), some pair
small in every tail (pseudo-Cauchy).  The harmonic sums separate the
first two; splicing shows how any prefix on a chain-connected space can
be widened into a schedule-consistent walk.
"""

import numpy as np

from chainscope.fixtures import make_fixture
from chainscope.harness import chainability_threshold, random_space
from chainscope.sequences import (
    SequencePrefix,
    ToleranceSchedule,
    bourbaki_qc_test,
    cauchy_test,
    pseudo_cauchy_test,
    quasi_cauchy_test,
    shift_schedule,
    splice_to_quasi_cauchy,
)


def show(tag, verdict):
    if verdict.witness is None:
        print(f"  {tag}: {verdict.status}")
    else:
        w = verdict.witness
        print(
            f"  {tag}: {verdict.status}"
            f" (stage {w.stage}, positions {w.index}/{w.partner},"
            f" gap {w.gap:.4f})"
        )


def main():
    fx = make_fixture("harmonic-sums", n=200)
    prefix = fx.prefix
    print("harmonic sums H_1..H_200, canonical prefix")

    schedule = ToleranceSchedule(((0.6, 0), (0.1, 12), (0.02, 60)))
    print(f"schedule: {list(schedule.stages)}")
    show("quasi-Cauchy", quasi_cauchy_test(prefix, schedule))
    show("Cauchy     ", cauchy_test(prefix, schedule))
    show("pseudo     ", pseudo_cauchy_test(prefix, schedule))
    print("consecutive gaps shrink like 1/n, but the tail spread stays")
    print("above 1: quasi-Cauchy without being Cauchy")

    bqc = bourbaki_qc_test(prefix, fx.space, 0.2)
    print(
        f"tail in one 0.2-chain component from position {bqc.n0}"
        f" (component of point {bqc.center})"
    )

    print()
    print("splice repair on a random cloud:")
    space = random_space("euclidean-cloud", 80, seed=3, dim=2)
    thr = chainability_threshold(space)
    rng = np.random.default_rng(3)
    hops = tuple(int(v) for v in rng.integers(0, 80, size=6))
    rough = SequencePrefix(space, hops)
    sched = ToleranceSchedule(((1.5 * thr, 0), (1.2 * thr, 3)))
    before = quasi_cauchy_test(rough, sched)
    print(f"  raw 6-point prefix: {before.status}")
    out, embedding = splice_to_quasi_cauchy(rough, space, sched)
    shifted = shift_schedule(sched, embedding)
    after = quasi_cauchy_test(out, shifted)
    print(
        f"  spliced to {len(out)} points, original positions at"
        f" {list(embedding)}: {after.status}"
    )
    kept = all(out.indices[embedding[p]] == hops[p] for p in range(len(hops)))
    print(f"  original prefix preserved in order: {kept}")


if __name__ == "__main__":
    main()
