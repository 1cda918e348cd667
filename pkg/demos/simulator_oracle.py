"""Check the final-size formula against the branching process it models.

A node with degree d whose friends each reshare with probability p starts
a Galton-Watson tree with mean offspring p*d; the expected total number of
reshares is p*d / (1 - p*d). The closed-form predictor evaluated on the
empty cascade state must reproduce exactly that number, so Monte-Carlo
simulation gives an independent oracle for the prediction formula.

Run:  python3 demos/simulator_oracle.py   (takes ~10 seconds)
"""

from sharecast import (
    ConstantDegree,
    KernelParams,
    SimSpec,
    constant_p,
    mc_final_size,
    normalize,
    predict_final,
)

kernel = normalize(KernelParams(c=1.0, s0=300.0, theta=1.0))

print(f"{'p*d':>6} {'formula':>9} {'simulated':>10} {'std err':>9} {'z':>6}")
for pd in (0.2, 0.4, 0.6, 0.8):
    p = pd / 10.0
    spec = SimSpec(
        kernel=kernel,
        p_profile=constant_p(p),
        degree_dist=ConstantDegree(10),
        root_degree=10,
        horizon_s=1e15,  # effectively no truncation
        seed=0,
    )
    mean, se = mc_final_size(spec, n_runs=5000, seed=int(pd * 10))
    _, pred = predict_final(0, 10.0, 0.0, p, 10.0, eps=0.0)
    z = abs(mean - pred) / se
    print(f"{pd:>6.1f} {pred:>9.4f} {mean:>10.4f} {se:>9.4f} {z:>6.2f}")

print("\nEvery row agrees within sampling error; as p*d approaches 1 the")
print("variance blows up, which is exactly why near-critical cascades are")
print("the hard case for early prediction.")
