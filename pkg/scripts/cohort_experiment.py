"""Fair vs contaminated synthetic cohorts over many seeds.

    python scripts/cohort_experiment.py --seeds 20 --fraud uniform_replacement:0.3:400:900

Cohort ``k`` uses seed ``1000 * k``; election ``i`` in it uses ``1000 * k + i``.
"""

import argparse


from benfordbase.cli import FRAUD_SEED_OFFSET, AnalysisConfig, analyze_cohort, simulate_samples
from benfordbase.synth import FraudModel


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--elections", type=int, default=45)
    p.add_argument("--n", type=int, default=5000)
    p.add_argument("--decades", type=float, default=6.0)
    p.add_argument("--fraud", default="uniform_replacement:0.3:400:900")
    p.add_argument("--target", type=int, default=4)
    args = p.parse_args()

    cfg = AnalysisConfig()
    print("seed   fair_max_z  target_z  target_is_max")
    for k in range(args.seeds):
        seed = 1000 * k
        fair, _, _ = analyze_cohort(simulate_samples(args.elections, args.n, args.decades, seed), cfg)
        fraud = FraudModel.parse(args.fraud, seed=seed + FRAUD_SEED_OFFSET)
        dirty, _, _ = analyze_cohort(
            simulate_samples(args.elections, args.n, args.decades, seed, fraud, args.target), cfg)
        top, _ = dirty.max_z()
        print(f"{seed:5d}  {fair.max_z()[1].z:10.2f}  {dirty.per_election[args.target].z:8.2f}  {top == args.target}")


if __name__ == "__main__":
    main()
