#!/usr/bin/env python3
"""Run the multi-expert synthetic benchmark and print per-trial WERs.

Checks the expected quality ordering of the decoding schemes: committees
of 5 and 2 dictionary decoders against the best single dictionary decode,
and dictionary decoding against best-path decoding.
"""

import argparse
import sys
import time

from ctcdec.experiment import ExperimentConfig, run_experiment


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--lines", type=int, default=50, help="lines per trial")
    parser.add_argument("--vocab", type=int, default=50, help="lexicon size")
    parser.add_argument("--experts", type=int, default=5)
    parser.add_argument("--noise", type=float, default=0.25)
    parser.add_argument("--fpc", type=int, default=3, help="frames per character")
    parser.add_argument("--beam", type=int, default=8)
    parser.add_argument("--lambda", dest="vote_lambda", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    config = ExperimentConfig(
        trials=args.trials,
        lines_per_trial=args.lines,
        vocab_size=args.vocab,
        experts=args.experts,
        noise=args.noise,
        frames_per_char=args.fpc,
        beam_width=args.beam,
        vote_lambda=args.vote_lambda,
        seed=args.seed,
    )
    started = time.perf_counter()
    result = run_experiment(config)
    elapsed = time.perf_counter() - started

    header = f"{'trial':>5}  {'dec-bp':>7}  {'dec-dm':>7}  {'best-dm':>7}  {'dec-e2':>7}  {'dec-e5':>7}  ordering"
    print(header)
    print("-" * len(header))
    for i, trial in enumerate(result.trials):
        e2 = trial.wer_committee.get(2, float("nan"))
        e5 = trial.wer_committee.get(5, float("nan"))
        print(
            f"{i:>5}  {trial.wer_best_path_mean:>7.4f}  {trial.wer_dictionary_mean:>7.4f}  "
            f"{trial.wer_dictionary_best:>7.4f}  {e2:>7.4f}  {e5:>7.4f}  "
            f"{'ok' if trial.ordering_holds else 'VIOLATED'}"
        )
    print(f"\nordering held in {result.passes}/{len(result.trials)} trials ({elapsed:.1f}s)")
    return 0 if result.majority_holds else 1


if __name__ == "__main__":
    sys.exit(main())
