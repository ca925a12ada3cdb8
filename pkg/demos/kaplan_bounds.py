"""Upper bound on the blow-up time, computed three independent ways.

The bound comes from a scalar comparison equation for the weighted
first-mode functional Q: closed form, an improper-integral quadrature,
and direct integration of the comparison equation to blow-up. The datum
A s_1 has Q-value A / C_K, and blow-up is guaranteed once that exceeds
one.
"""

from evocontrol import heat, kaplan

print(f"upper-bound constant C_K = {heat.C_K:.10f}")
print()
print(f"{'A':>6} {'Q0':>9} {'closed':>12} {'quadrature':>12} {'comparison':>12}")
for A in (2.0, 4.0, 10.0, 20.0):
    q0 = A / heat.C_K
    closed = kaplan.kaplan_time(q0, 2)
    quadr = kaplan.kaplan_time_by_quadrature(q0, 2)
    by_ode = kaplan.comparison_blowup_time(q0, 2)
    print(f"{A:6.1f} {q0:9.4f} {closed:12.8f} {quadr:12.8f} {by_ode:12.8f}")

print()
print("the recursive minorant converges to the comparison solution:")
q0, t = 2.0 / heat.C_K, 0.5
exact = kaplan.comparison_solution(q0, 2, t)
for n in (0, 2, 4, 8):
    s_n = kaplan.sn_iteration(q0, 2, n, t)
    print(f"  n = {n}: S_n({t}) = {s_n:.8f}   gap {exact - s_n:+.2e}")
