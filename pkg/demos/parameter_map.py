"""From the reduced (q, k) description back to physical equation constants.

The reduced spiral problem carries one twist parameter q and selects one
wavenumber k.  A physical oscillatory medium is instead described by two
constants (alpha, beta): linear and nonlinear dispersion.  The bridge is

    q = (beta - alpha) / (1 + alpha beta)

together with a rotating-frame frequency Omega and rescalings (a, delta)
of amplitude and length.  This script walks one parameter set across the
bridge and checks the identities that must hold on the far side.
"""

import warnings

from cglspiral import physical
from cglspiral.solver import solve_spiral

# start from a solved reduced problem
profile, report = solve_spiral(1, 0.5)
q, k = report.q, report.k_numeric
print(f"reduced inputs: q = {q}, selected k = {k:.9f}")

print()
print("one twist, a one-parameter family of media (choose alpha):")
print(f"{'alpha':>6}  {'beta':>9}  {'Omega':>10}  {'k_star':>10}"
      f"  {'a':>8}  {'delta':>8}")
with warnings.catch_warnings():
    # alpha = 1.0 puts beta at 3.0, outside the small-|beta - alpha|
    # regime the asymptotics assume; the map itself stays exact
    warnings.simplefilter("ignore", UserWarning)
    for alpha in (0.0, 0.5, 1.0, -0.8):
        trip = physical.physical_from_reduced(alpha, q, k)
        print(f"{alpha:6.2f}  {trip.beta:9.5f}  {trip.Omega:10.6f}"
              f"  {trip.k_star:10.7f}  {trip.a:8.5f}  {trip.delta:8.5f}")
print("(the alpha = 1.0 row warns: |beta - alpha| = 2 is far outside the")
print(" smallness regime, though the identities below still hold exactly)")

alpha = 0.5
trip = physical.physical_from_reduced(alpha, q, k)
print()
print(f"checks at alpha = {alpha}:")
disp, amp = physical.dispersion_check(trip.alpha, trip.beta, trip.Omega,
                                      trip.k_star)
print(f"  dispersion Omega + beta - k*^2 (beta - alpha)    : {disp:.2e}")
amp_gap = (1 - trip.k_star ** 2) \
    - (1 - k * k) * (1 - trip.Omega * trip.alpha) / (1 + trip.alpha * trip.beta)
print(f"  amplitude  (1-k*^2) = (1-k^2)(1-Omega a)/(1+a b) : {amp_gap:.2e}")

q_back, k_back, Omega_back = physical.reduced_from_physical(
    trip.alpha, trip.beta, trip.k_star)
print(f"  roundtrip twist      : |q - q'| = {abs(q - q_back):.2e}")
print(f"  roundtrip wavenumber : |k - k'| = {abs(k - k_back):.2e}")
print(f"  roundtrip frequency  : |Omega - Omega'| = {abs(trip.Omega - Omega_back):.2e}")

print()
print("the alpha = beta diagonal is twist-free: no wavenumber is selected")
print(f"  twist_from(0.7, 0.7) = {physical.twist_from(0.7, 0.7)}")

print()
print("admissibility: 1 + alpha beta > 0 restricts how far beta can sit")
print("from alpha.  beta_from_alpha_q refuses pairs outside that wedge:")
try:
    physical.beta_from_alpha_q(1.9, 0.6)
except ValueError as exc:
    print(f"  beta_from_alpha_q(1.9, 0.6) -> ValueError: {exc}")
