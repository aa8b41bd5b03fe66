"""Almost periods of the Fibonacci set and a progression-free Delone set."""
from modelsets import TAU, CpsDescriptor, Interval
from modelsets.cps import enumerate_model_set
from modelsets.density import AveragingSequence, almost_periods, counterexample_set, verify_no_3ap


def main():
    cps = CpsDescriptor.golden()
    lam = enumerate_model_set(cps, Interval(-1, TAU - 1), (-3000, 3000))
    found = almost_periods(lam, 0.05, (0, 200), AveragingSequence((1000,)))
    print("translations t in [0, 200] with d_B(Λ, t+Λ) < 0.05 at n = 1000:")
    for t, v in found:
        print(f"  {str(t):>10}  t = {float(t):8.3f}  d_B = {float(v):.4f}")

    # 0, n + a_n, -n + b_n with tiny perturbations; near-progressions appear far out
    for N in (10, 50, 100):
        rep = verify_no_3ap(counterexample_set(N))
        print(f"N={N:3d}: least |2b - a - c| = {float(rep.min_residual):.3e}")


if __name__ == "__main__":
    main()
