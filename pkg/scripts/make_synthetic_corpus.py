"""Write a small EMO-DB-named corpus of planted-feature utterances.

    python scripts/make_synthetic_corpus.py out_dir [--takes 2]
"""
import argparse

from emocascade.synth import write_planted_corpus

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out_dir")
    ap.add_argument("--takes", type=int, default=2)
    args = ap.parse_args()
    for p in write_planted_corpus(args.out_dir, args.takes):
        print(p)
