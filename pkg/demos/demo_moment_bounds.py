"""Moment machinery for sums of independent indicators: exact fourth
moment, the 4*mu^2 bound, the constructive k-th moment bound, and the
4/d^4 tail inequality.

Run: python3 demos/demo_moment_bounds.py
"""

from linprobe import (
    BernoulliProfile,
    brute_force_moment,
    exact_fourth_moment,
    fourth_moment_bound,
    fourth_moment_bound_sharp,
    kth_moment_bound_check,
    tail_check,
)


def main():
    profile = BernoulliProfile.uniform(16, 0.5)
    print(f"X = sum of {profile.n} Bernoulli(0.5): mu = {profile.mu}, "
          f"var = {profile.variance}")

    exact = exact_fourth_moment(profile)
    brute = brute_force_moment(profile, 4)
    print(f"\nE[(X-mu)^4] closed form : {exact}")
    print(f"E[(X-mu)^4] 2^n oracle  : {brute}")
    print(f"sharp bound mu + 3 mu^2 : {fourth_moment_bound_sharp(profile.mu)}")
    print(f"bound 4 mu^2            : {fourth_moment_bound(profile.mu)}")

    print("\nconstructive k-th moment bound sum_c c^k/c! * var^c:")
    for k in (2, 4, 6, 8):
        ex, bound, ok = kth_moment_bound_check(profile, k)
        print(f"  k={k}: exact = {ex:12.4f}  bound = {bound:12.4f}  "
              f"within = {ok}")

    print("\ntail Pr[|X - mu| >= d * sqrt(mu)] versus bounds:")
    for d in (1.5, 2.0, 2.5, 3.0):
        rep = tail_check(profile, d=d)
        print(f"  d={d}: exact tail = {rep.empirical_prob:.6f}  "
              f"4/d^4 = {rep.bound_fourth:.4f}  1/d^2 = {rep.bound_chebyshev:.4f}"
              f"{'  (vacuous)' if rep.vacuous else ''}")

    big = BernoulliProfile.uniform(256, 0.5)
    rep = tail_check(big, d=2.0, trials=10**5, seed=1)
    print(f"\nlarge profile (n=256, Monte Carlo): tail = {rep.empirical_prob:.5f}"
          f" +- {rep.std_error:.5f} vs 4/d^4 = {rep.bound_fourth}")


if __name__ == "__main__":
    main()
