"""Command-line interface: train, classify, eval, serve, build-vocab."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .baseline import CueLexicon, cue_classify
from .errors import ReqCausalError
from .evaluation import evaluate, load_dataset
from .model import (
    ModelConfig,
    TextClassifier,
    desk_scale_config,
    init_params,
    load_checkpoint,
    save_checkpoint,
    train,
)
from .store import FeedbackStore
from .syntax import INTERLEAVE_TOKENS, add_dep_markers
from .tokenizer import Vocabulary, build_vocab


def _read_corpus(path: Path) -> list[str]:
    if path.suffix.lower() in (".jsonl", ".csv"):
        return load_dataset(path).texts()
    lines = path.read_text(encoding="utf-8").splitlines()
    return [line for line in lines if line.strip()]


def _vocab_sidecar(checkpoint: Path) -> Path:
    return checkpoint.with_suffix(checkpoint.suffix + ".vocab")


def _load_backend(args) -> tuple:
    """Returns (classifier, kind) from --baseline or --checkpoint/--vocab."""
    if args.baseline:
        lexicon = CueLexicon.load(args.lexicon) if getattr(args, "lexicon", None) else CueLexicon()
        return (lambda text: cue_classify(text, lexicon)), "baseline"
    if not args.checkpoint:
        raise ReqCausalError("either --baseline or --checkpoint is required")
    checkpoint = Path(args.checkpoint)
    params = load_checkpoint(checkpoint)
    vocab_path = Path(args.vocab) if args.vocab else _vocab_sidecar(checkpoint)
    vocab = Vocabulary.load(vocab_path)
    return TextClassifier(params, vocab), "trained"


def _add_backend_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--baseline", action="store_true",
                        help="use the cue-phrase baseline instead of a checkpoint")
    parser.add_argument("--checkpoint", help="model checkpoint path")
    parser.add_argument("--vocab", help="vocabulary file (default: <checkpoint>.vocab)")
    parser.add_argument("--lexicon", help="cue lexicon file for the baseline")


def cmd_build_vocab(args) -> int:
    corpus = _read_corpus(Path(args.corpus))
    vocab = build_vocab(corpus, min_freq=args.min_freq, max_size=args.max_size)
    vocab.save(args.out)
    print(f"wrote {len(vocab)} tokens to {args.out}")
    return 0


def cmd_train(args) -> int:
    dataset = load_dataset(args.data, args.format)
    vocab = build_vocab(dataset.texts(), min_freq=args.min_freq, max_size=args.max_size)
    if args.mode == INTERLEAVE_TOKENS:
        vocab = add_dep_markers(vocab)
    config = desk_scale_config(
        vocab_size=len(vocab),
        seq_len=args.max_len,
        seed=args.seed,
        enrichment_mode=args.mode,
    )
    params = init_params(config)
    _, history = train(
        params, dataset, vocab,
        epochs=args.epochs, batch_size=args.batch_size, learning_rate=args.lr,
        log=print,
    )
    out = Path(args.out)
    save_checkpoint(params, out)
    vocab_out = Path(args.vocab_out) if args.vocab_out else _vocab_sidecar(out)
    vocab.save(vocab_out)
    print(f"final mean loss {history[-1]:.6f}")
    print(f"wrote checkpoint {out} and vocabulary {vocab_out}")
    return 0


def cmd_classify(args) -> int:
    classifier, _ = _load_backend(args)
    if args.text is not None:
        texts = [args.text]
    else:
        texts = [line for line in sys.stdin.read().splitlines() if line.strip()]
    for text in texts:
        prediction = classifier(text)
        print(f"{prediction.label} {prediction.confidence:.3f}")
    return 0


def cmd_eval(args) -> int:
    classifier, _ = _load_backend(args)
    dataset = load_dataset(args.data, args.format)
    report = evaluate(classifier, dataset)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.format_table())
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    from .syntax import resolve_enrichment_mode

    classifier, kind = _load_backend(args)
    if args.mode is not None and kind == "trained":
        # the mode is baked into the checkpoint; the flag is an assertion
        requested = resolve_enrichment_mode(args.mode)
        actual = classifier.params.config.enrichment_mode
        if requested != actual:
            raise ReqCausalError(
                f"checkpoint was trained with enrichment mode {actual!r}, not {requested!r}"
            )
    store = FeedbackStore(args.store)
    app = create_app(classifier, store, model_kind=kind, ui_dir=args.ui)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    finally:
        store.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reqcausal",
        description="Causality detection for natural-language requirements.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-vocab", help="build a vocabulary file from a corpus")
    p.add_argument("corpus", help="text file (one sentence per line) or .jsonl/.csv dataset")
    p.add_argument("--out", required=True, help="output vocabulary file")
    p.add_argument("--min-freq", type=int, default=1)
    p.add_argument("--max-size", type=int, default=30000)
    p.set_defaults(func=cmd_build_vocab)

    p = sub.add_parser("train", help="train a model and write a checkpoint")
    p.add_argument("--data", required=True, help="labeled dataset (.jsonl or .csv)")
    p.add_argument("--format", choices=("jsonl", "csv"))
    p.add_argument("--out", required=True, help="checkpoint output path")
    p.add_argument("--vocab-out", help="vocabulary output (default: <out>.vocab)")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--max-len", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", default=None, help="enrichment mode: sum-embedding | interleave-tokens")
    p.add_argument("--min-freq", type=int, default=1)
    p.add_argument("--max-size", type=int, default=30000)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify one sentence or stdin lines")
    _add_backend_flags(p)
    p.add_argument("--text", help="sentence to classify; omit to read stdin")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", help="evaluate a classifier on a labeled dataset")
    _add_backend_flags(p)
    p.add_argument("--data", required=True)
    p.add_argument("--format", choices=("jsonl", "csv"))
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the REST service")
    _add_backend_flags(p)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store", required=True, help="feedback log path (JSONL)")
    p.add_argument("--ui", help="directory of built UI assets to serve at /")
    p.add_argument("--mode", default=None,
                   help="assert the checkpoint's enrichment mode (sum-embedding | interleave-tokens)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ReqCausalError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
