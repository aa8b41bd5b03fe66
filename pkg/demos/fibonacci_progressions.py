"""Enumerate the Fibonacci model set and build progressions inside it."""
from modelsets import TAU, CpsDescriptor, Interval
from modelsets.cps import enumerate_model_set
from modelsets.progressions import bounded_gap_ap, bounded_gap_radius, constructive_ap


def main():
    cps = CpsDescriptor.golden()
    W = Interval(-1, TAU - 1)

    ps = enumerate_model_set(cps, W, (0, 20))
    print("points in [0, 20]:", ", ".join(str(x) for x in ps.elements()))

    ap = constructive_ap(cps, W, 0, 4)
    print(f"5-term progression from 0 with step {ap.diff}:")
    for x in ap.terms():
        print(f"  {str(x):>8}  x = {float(x):8.4f}   x* = {float(x.conj()):+.4f}")
    print("step window:", ap.witness)

    # every ball of this radius holds an (n+1)-term progression
    for n in (2, 4, 8):
        R = bounded_gap_radius(cps, W, n)
        p = bounded_gap_ap(cps, W, n, 1000.0)
        print(f"n={n}: R={R:8.2f}, near 1000: start {float(p.start):.3f}, step {p.diff}")


if __name__ == "__main__":
    main()
