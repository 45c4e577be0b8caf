"""Stopping-count histograms of the sequential detection protocol.

    python scripts/detection_statistics.py --dims 2 3 4 5 --trials 10000
"""
import argparse

from coherence_witness.detection import detection_statistics


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4, 5])
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--kind", default="pure", choices=["pure", "mixed", "incoherent"])
    args = parser.parse_args()

    for dim in args.dims:
        hist = detection_statistics(dim, args.trials, args.seed, args.kind)
        first = hist.get(1, 0) / args.trials
        print(f"d={dim}: stop after one witness {first:.4%}  histogram {hist}")


if __name__ == "__main__":
    main()
