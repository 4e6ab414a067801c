"""
The virtual double slit
=======================

Particle 2 never meets a slit. Projecting particle 1 onto the two slit modes
still leaves particle 2 in two Gaussian packets, centered at +-y0' with
complex squared width Gamma^2. This script shows how those numbers approach
the real slits as the source gets broader.
"""
import numpy as np

from ghostsim import KinematicsConfig, SlitPair, SourceParams, Experiment, gamma_approx

# Dimensionless units: hbar = m = 1. Slits at +-1, width 0.25, and the
# source-to-slit flight time t0 = 0.1.
slits = SlitPair(y0=1.0, epsilon=0.25)
kin = KinematicsConfig.time_domain(t0=0.1, t=0.5)

print(f"{'omega':>8} {'Re y0_prime':>12} {'Im y0_prime':>12} {'Re Gamma^2':>11} {'Im Gamma^2':>11}  broad?")
for omega in (2.0, 5.0, 20.0, 100.0, 1e4):
    exp = Experiment(SourceParams(sigma=1.0, omega=omega), slits, kin)
    b = exp.at_slits
    print(f"{omega:8.0f} {b.y0_prime.real:12.6f} {b.y0_prime.imag:12.2e} "
          f"{b.gamma_sq.real:11.6f} {b.gamma_sq.imag:11.6f}  {exp.regime().admissible}")

# In the broad limit Gamma^2 tends to epsilon^2 + hbar^2/sigma^2 plus the
# imaginary part 4 t0 picked up in flight. The factor 4 (twice the 2 t0 a
# single free packet would get) is what places the virtual slit at the real
# one: particle 2 behaves as if it had travelled back to the source and out
# again.
approx = gamma_approx(slits, SourceParams(1.0, 1e4), spread0=0.1)
print("broad-source value:", np.round(approx.value, 6))
