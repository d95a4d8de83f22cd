"""Decaying self-weight: the seeker never gets within 2/5 eps of the truth."""
from truthseekers import fixture, simulate

config = fixture("beta_decay").config
traj = simulate(config, 200)
gaps = [abs(traj.x(t)[0] - config.h) / config.epsilon for t in range(1, 201)]
print("min |x_1 - h| / eps over t = 1..200:", float(min(gaps)))
print("attained at t =", 1 + gaps.index(min(gaps)))
