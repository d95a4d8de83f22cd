"""Convergence certificates for a seeker that is pulled away once before settling.

At gamma = eps/10 the seeker enters the band, leaves it and comes back; at
eps/100 it only enters once, after the excursion is over.
"""
from truthseekers import certify_convergence, fixture, simulate
from truthseekers.export import certificate_text

config = fixture("interrupted_2agent").config
traj = simulate(config, 80)
for gamma in (config.epsilon / 10, config.epsilon / 100):
    print(f"gamma = {gamma}")
    print(certificate_text(certify_convergence(traj, gamma)))
    print()
