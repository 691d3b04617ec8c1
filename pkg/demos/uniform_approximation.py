"""Build the level-set approximation of an unbounded-slope function.

f(H_n) = sqrt(n) on the harmonic sums has no global Lipschitz constant,
yet at every scale eps it admits a Lipschitz-behaved approximation
within eps: cover the range by overlapping windows of width 2*eps, blend
the window indicator distances into a partition g, and average the
window indices into h.  Then eps*h tracks f, and g and h move slowly
along any walk whose steps eventually shrink.
"""

from chainscope.approximation import approximate, level_sets, proof_bounds_report
from chainscope.fixtures import make_fixture
from chainscope.moduli import spike_function
from chainscope.sequences import SequencePrefix, ToleranceSchedule


def main():
    fx = make_fixture("harmonic-sums", n=200)
    f = fx.function
    print("f = sqrt of the index on H_1..H_200")

    for eps in (0.5, 0.2, 0.1):
        windows = level_sets(f, eps)
        sizes = sorted(len(m) for m in windows.values())
        decomp = approximate(f, eps)
        g = decomp.g.values
        print(
            f"eps={eps}: {len(windows)} windows"
            f" (sizes {sizes[0]}..{sizes[-1]}),"
            f" sup|eps*h - f| = {decomp.sup_error:.4f},"
            f" g in [{g.min():.4f}, {g.max():.4f}]"
        )

    eps = 0.1
    decomp = approximate(f, eps)
    schedule = ToleranceSchedule(((eps, 30),))
    report = proof_bounds_report(decomp, fx.prefix, schedule)
    print()
    print(f"slope bounds along the canonical walk, tail from {report.n0}:")
    print(f"  derived small scale delta = {report.delta:.4f}")
    print(
        f"  |dg| <= 3d:          ok={report.g_bound_ok},"
        f" sharpest ratio {report.g_sharp:.3f} of 3"
    )
    print(
        f"  |dh| <= (10/d^2) d:  ok={report.h_bound_ok},"
        f" sharpest ratio {report.h_sharp:.3f}"
        f" of {10.0 / report.delta ** 2:.1f}"
    )
    print(f"  pairs checked: {report.pairs_checked}, violations: {len(report.violations)}")

    # adversarial wrinkle: a sharp spike drives the admissible small
    # scale down to the grid spacing, but the bounds survive
    print()
    grid = make_fixture("grid-interval", count=51)
    spike = spike_function(grid.space, [25], [0.04], [1.0])
    dec2 = approximate(spike, 1.0)
    walk = SequencePrefix(grid.space, (24, 25, 26))
    rep2 = proof_bounds_report(dec2, walk, ToleranceSchedule(((0.5, 0),)))
    print(
        f"spiked grid: delta collapses to {rep2.delta:.4f}"
        f" (the grid spacing is"
        f" {grid.space.min_positive_distance():.4f}),"
        f" bounds still hold: {rep2.all_ok}"
    )
    print(f"sup error stays {dec2.sup_error:.4f} < 1.0")


if __name__ == "__main__":
    main()
