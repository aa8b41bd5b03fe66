"""Monochromatic 3-term progressions in 2-colored Fibonacci points."""
import numpy as np

from modelsets import TAU, CpsDescriptor, Interval
from modelsets.cps import enumerate_model_set
from modelsets.vdw import certify_model_vdw, color, model_vdw_radius, vdw_number_oracle


def main():
    res = vdw_number_oracle(2, 3)
    print("W(2,3) =", res.number, " witness on 1..8:", "".join(str(c + 1) for c in res.witness))

    cps = CpsDescriptor.golden()
    W = Interval(-1, TAU - 1)
    R = model_vdw_radius(cps, W, 2, 3)
    print(f"ball radius {R.radius:.2f} from the {R.N}-term carrier")

    ps = enumerate_model_set(cps, W, (-R.radius - 300, R.radius + 300))
    cols = [color(ps, "random", 2, seed=1), color(ps, "threshold", 2, window=W)]
    cert = certify_model_vdw(cps, W, ps, cols, 3, np.linspace(-250, 250, 6), R)
    for e in cert.trace:
        terms = ", ".join(f"{float(x):.3f}" for x in e.found.terms())
        print(f"  {e.coloring:>15} center {e.center:8.1f}: {terms}")
    print("all balls succeeded:", cert.ok)


if __name__ == "__main__":
    main()
