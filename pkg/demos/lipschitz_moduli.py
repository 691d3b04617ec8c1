"""Tour the Lipschitz-type moduli that tell the example spaces apart."""

import math

import numpy as np

from chainscope.fixtures import make_fixture
from chainscope.moduli import (
    equi_chain_continuity_check,
    lipschitz_constant,
    lits_modulus,
    local_lipschitz_profile,
    seq_lipschitz_constant,
    ward_falsifier,
)
from chainscope.sequences import SequencePrefix, ToleranceSchedule


def main():
    # indicator of the integers inside {m} U {m + 1/m}: each truncation
    # has a finite constant, but it lives at ever-smaller scales, so no
    # scale restriction tames it and it grows with the truncation size
    print("integer indicator on naturals-plus:")
    for n in (10, 25, 50):
        fx = make_fixture("naturals-plus", n=n)
        plain = lipschitz_constant(fx.function)
        small = lits_modulus(fx.function, 0.25)
        tiny = lits_modulus(fx.function, 0.05)
        print(
            f"  n={n:>2}: global {plain.constant:6.2f},"
            f" scales < 0.25: {small.constant:6.2f},"
            f" scales < 0.05: {tiny.constant:6.2f}"
        )
    print("  (the small truncation has no pair closer than 0.05 at all)")

    print()
    print("even indicator on the square roots:")
    fx = make_fixture("sqrt-space", n=50)
    evens = tuple(i for i in range(50) if (i + 1) % 2 == 0)
    flat = seq_lipschitz_constant(fx.function, SequencePrefix(fx.space, evens), "all-pairs")
    mixed = seq_lipschitz_constant(fx.function, fx.prefix, "consecutive")
    print(f"  along the even subsequence (all pairs): {flat.constant}")
    print(
        f"  along the interleaved walk (consecutive): {mixed.constant:.3f}"
        f" = sqrt(50)+sqrt(49) up to rounding"
    )

    print()
    print("sqrt of the index on harmonic sums, consecutive modulus:")
    for n in (100, 1000, 50001):
        fx = make_fixture("harmonic-sums", n=n)
        rep = seq_lipschitz_constant(fx.function, fx.prefix, "consecutive")
        want = n / (math.sqrt(n) + math.sqrt(n - 1))
        print(f"  n={n:>5}: {rep.constant:10.4f} (closed form {want:10.4f})")
    print("  grows without bound, so no single constant works per sequence")

    print()
    print("power towers, local profile at delta=0.5:")
    for n in (6, 9, 12):
        fx = make_fixture("scaled-unit-vectors", n=n, variant="towers", k=n)
        top = float(np.max(local_lipschitz_profile(fx.function, 0.5)))
        print(f"  n=k={n:>2}: worst in-ball slope {top:.4e}")

    print()
    print("ward falsifier hunting a continuity break:")
    fx = make_fixture("naturals-plus", n=50)
    sched = ToleranceSchedule(((1.0, 0), (0.05, 2)))
    hit = ward_falsifier(fx.function, fx.space, 0.5, sched, budget=500)
    a, b = hit.pair
    print(
        f"  {hit.status} after {hit.evaluations} evaluation(s):"
        f" pair ({fx.space.label_of(a)}, {fx.space.label_of(b)})"
        f" with image gap {hit.image_gap}"
    )

    print()
    print("tent family: delegation to a chain neighbor vs going alone")
    fx = make_fixture("tent-family", n=30, variant="ramp")
    family = list(fx.family)
    chained = equi_chain_continuity_check(family, 0.2, chain=True)
    alone = equi_chain_continuity_check(family, 0.2, chain=False)
    print(f"  chain-delegated uniform scale: {chained.uniform_delta:.4f}")
    print(f"  plain uniform scale:           {alone.uniform_delta:.4f}")
    print(
        f"  ratio {chained.uniform_delta / alone.uniform_delta:.1f}x:"
        " steep members borrow the certificate of a close flat one"
    )


if __name__ == "__main__":
    main()
