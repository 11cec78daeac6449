"""Benchmark of the compiled span kernel against the pure-Python fallback.

Generates a synthetic corpus of random dependency trees, then times
(a) the bare kernels over pre-encoded buffers and (b) the end-to-end
extract_document path with each backend forced.

Usage: python3 benchmarks/bench_kernels.py [--sentences N] [--tokens N]
"""

import argparse
import random
import statistics
import time

from npukr import Sentence, Token, build_tree
from npukr import _kernel_py
from npukr.extractor import DEFAULT_CONFIG, ExtractionConfig, encode_tree, extract_document

try:
    from npukr import _kernel
except ImportError:
    _kernel = None

UPOS = ["NOUN", "VERB", "ADJ", "ADP", "PRON", "PROPN", "X", "PUNCT", "NUM", "CCONJ", "DET"]
DEPREL = ["nmod", "flat", "amod", "case", "obl", "nsubj", "punct", "conj", "obj"]


def random_tree(rng: random.Random, n: int):
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = {order[0]: 0}
    for pos in range(1, n):
        heads[order[pos]] = rng.choice(order[:pos])
    tokens = []
    for i in range(1, n + 1):
        upos = rng.choice(UPOS)
        feats = {}
        if upos == "VERB" and rng.random() < 0.3:
            feats["VerbForm"] = "Inf"
        if upos == "X" and rng.random() < 0.7:
            feats["Foreign"] = "Yes"
        deprel = "root" if heads[i] == 0 else rng.choice(DEPREL)
        tokens.append(
            Token(i, f"слово{i}", f"слово{i}", upos, feats=feats, head=heads[i], deprel=deprel)
        )
    return build_tree(Sentence(f"bench:{n}", tuple(tokens)))


def time_call(fn, repeats=5):
    samples = []
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - started)
    return min(samples), statistics.median(samples)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sentences", type=int, default=5000)
    parser.add_argument("--tokens", type=int, default=30)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = random.Random(2024)
    trees = [random_tree(rng, rng.randint(3, args.tokens)) for _ in range(args.sentences)]
    total_tokens = sum(len(t.sentence.tokens) for t in trees)
    encoded = [encode_tree(t, DEFAULT_CONFIG) for t in trees]
    print(
        f"corpus: {args.sentences} sentences, {total_tokens} tokens "
        f"(best of {args.repeats} runs)"
    )

    def run_kernel(impl):
        for enc in encoded:
            impl.extract_spans(*enc, False)

    py_best, _ = time_call(lambda: run_kernel(_kernel_py), args.repeats)
    print(f"kernel python   : {py_best * 1e3:8.1f} ms  ({total_tokens / py_best / 1e6:.2f} Mtok/s)")
    if _kernel is not None:
        c_best, _ = time_call(lambda: run_kernel(_kernel), args.repeats)
        print(f"kernel compiled : {c_best * 1e3:8.1f} ms  ({total_tokens / c_best / 1e6:.2f} Mtok/s)")
        print(f"kernel speedup  : {py_best / c_best:8.2f}x")
        for enc in encoded[:200]:
            assert _kernel.extract_spans(*enc, False) == _kernel_py.extract_spans(*enc, False)
    else:
        print("kernel compiled : not built")

    cfg = ExtractionConfig()

    def run_end_to_end():
        extract_document(trees, cfg)

    import npukr._backend as backend

    saved = (backend._impl, backend._name, backend.extract_spans)
    try:
        backend.extract_spans = _kernel_py.extract_spans
        e2e_py, _ = time_call(run_end_to_end, args.repeats)
        print(f"end-to-end python   : {e2e_py * 1e3:8.1f} ms")
        if _kernel is not None:
            backend.extract_spans = _kernel.extract_spans
            e2e_c, _ = time_call(run_end_to_end, args.repeats)
            print(f"end-to-end compiled : {e2e_c * 1e3:8.1f} ms")
            print(f"end-to-end speedup  : {e2e_py / e2e_c:8.2f}x (encoding stays in Python)")
    finally:
        backend._impl, backend._name, backend.extract_spans = saved


if __name__ == "__main__":
    main()
