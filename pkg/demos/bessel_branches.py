"""Walk K_{i nu} across its evaluation branches.

The imaginary-order modified Bessel function is evaluated three ways:
an ascending series for small argument, a large-argument expansion, and
an integral-representation quadrature used as the reference.  This
script scans across the handover point and prints the relative gap of
each fast branch against the quadrature.
"""

import numpy as np

from cglspiral import specfun

nu = 0.1
print(f"K_(i {nu})(x): branch vs quadrature reference")
print(f"{'x':>8}  {'value':>16}  {'branch':>11}  {'rel gap':>10}")
for x in np.geomspace(0.02, 60.0, 14):
    x = float(x)
    ref = specfun.k_imag(nu, x, method="quadrature")
    ev = specfun.k_imag(nu, x)
    gap = abs(ev.value / ref.value - 1.0) if ref.value != 0 else float("nan")
    print(f"{x:8.3f}  {ev.value:16.8e}  {ev.method:>11}  {gap:10.2e}")

print()
print("small-argument oscillation: K_(i nu) flips sign deep below the floor")
floor = specfun.sign_validity_floor(0.3)
print(f"  sign validity floor for nu=0.3: {floor:.3e}")
for x in (2e-5, 4e-5, 1e-4, floor, 1.0):
    ev = specfun.k_imag(0.3, x)
    print(f"  K(i 0.3)({x:9.3e}) = {ev.value:+.6e}")

print()
print("integer orders stay usable in log scale where the plain value overflows:")
I1 = specfun.bessel_integer("I", 1, 800.0)
K1 = specfun.bessel_integer("K", 1, 800.0)
print(f"  I_1(800): log|I| = {I1.log_abs_value:.3f} "
      "(the plain value would overflow float64)")
# the e^{+-x} scale factors cancel in I' K - I K' = 1/x
wronskian = I1.scaled_derivative * K1.scaled_value \
    - I1.scaled_value * K1.scaled_derivative
print(f"  scaled Wronskian I'K - IK' = {wronskian:.9e}  (1/x = {1/800.0:.9e})")
