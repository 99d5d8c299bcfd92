"""Finite-blocklength behavior of the key-agreement scheme.

Sweeps the key rates through the admissible corner of the erasure channel
and shows the two sides of the tradeoff at blocklength n = 8:

* reliability — the third user's decoding error rate climbs as the total
  codebook rate crosses what its observation can support;
* secrecy — the plug-in leakage estimate of a pairwise key drops once the
  randomization rate reaches its threshold.

Run:  python3 demos/finite_blocklength_tradeoff.py
"""

import math

from keyregion import (
    RateQuad,
    SimConfig,
    build_erasure_gdmmac,
    example1_design,
    simulate,
)

CHANNEL = build_erasure_gdmmac(p12=0.3, p21=0.3, p13=0.5, p23=0.1)
DESIGN = example1_design()
N = 8
EPS = 1.2 / math.sqrt(N)
CORNER = RateQuad(r12=0.2, r23=0.2)  # admissible key-rate corner
SECRECY_RAND = RateQuad(r12=0.5, r23=0.7)  # per-pair secrecy thresholds

print("=" * 68)
print(f"Reliability: error rates vs key-rate scale (n = {N}, 200 trials)")
print("=" * 68)
print(f"{'scale':>6} {'user 1':>8} {'user 2':>8} {'user 3':>8}")
for scale in (0.25, 0.5, 1.0, 1.25, 1.5):
    report = simulate(
        SimConfig(
            channel=CHANNEL,
            design=DESIGN,
            n=N,
            key_rates=CORNER.scaled(scale),
            randomization_rates=SECRECY_RAND,
            trials=200,
            seed=3,
            epsilon_typ=EPS,
        )
    )
    e = report.error_rates
    print(f"{scale:>6.2f} {e['u1']:>8.3f} {e['u2']:>8.3f} {e['u3']:>8.3f}")
print("below the corner the block decodes reliably; past it the third")
print("user's joint codebook outgrows its observation and decoding fails.\n")

print("=" * 68)
print("Secrecy: leakage of the (1,2) key vs randomization rate")
print("=" * 68)
print(f"{'rand rate':>10} {'raw bits':>10} {'corrected':>10}")
for rand in (0.0, 0.3, 0.6):
    report = simulate(
        SimConfig(
            channel=CHANNEL,
            design=DESIGN,
            n=N,
            key_rates=RateQuad(r12=0.25),
            randomization_rates=RateQuad(r12=rand),
            trials=2000,
            seed=11,
            epsilon_typ=EPS,
        )
    )
    est = report.leakage_bits["k12"]
    print(f"{rand:>10.2f} {est.bits:>10.3f} {est.corrected_bits:>10.3f}")
print("raw plug-in estimates carry a bucket-count bias; the corrected")
print("column subtracts it. Randomization at/above the threshold (0.5)")
print("drives the eavesdropper's information about the key to zero.")
