"""Finite-difference reference estimates vs the certified bracket.

Nothing here is rigorous: the method-of-lines runs are plain numerics
with a coarse/fine agreement gate. But the estimates should land
between t_G and t_K every time, and the large-amplitude runs should
follow the closed-form rescaled profile.
"""

from evocontrol import fd, heat

print(f"{'A':>6} {'t_G':>10} {'estimate':>10} {'t_K':>10}")
for A in (4.0, 10.0, 20.0):
    row = heat.run_scenario(heat.HeatScenario(A=A))
    est = fd.fd_blowup_time(fd.FdConfig(A=A, N=128))
    inside = row.t_g <= est.value <= row.t_k
    marker = "" if inside else "  <-- outside!"
    print(f"{A:6.1f} {row.t_g:10.5f} {est.value:10.5f} {row.t_k:10.5f}{marker}")

print()
print("large-amplitude asymptotics: A * estimate -> sqrt(pi/2) = 1.2533")
est100 = fd.fd_blowup_time(fd.FdConfig(A=100.0, N=128))
print(f"  A = 100: A * estimate = {100.0 * est100.value:.4f}")

print()
print("rescaled state vs the closed-form profile (max-norm deviation):")
for tau in (0.0, 0.3, 0.6):
    dev = fd.limit_profile_check(100.0, tau, N=128)
    print(f"  tau = {tau}: {dev:.2e}")
