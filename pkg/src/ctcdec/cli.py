"""Command-line interface.

Subcommands:

``decode``
    run a decoding scheme over a manifest of confidence matrices.
``eval``
    score a hypothesis file against a reference file (CER/WER).
``lexicon``
    build a word-frequency lexicon from transcripts.
``synth``
    generate synthetic matrices (plus manifest and references) for a
    list of text lines.
``inspect``
    print matrix statistics and NaC boundary intervals.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .alphabet import NAC_CHAR, Alphabet, default_alphabet, normalize_transcript
from .batch import LineRecord, Manifest, load_manifest, run_batch, save_manifest
from .bestpath import decode_best_path
from .committee import CommitteeConfig, committee_decode
from .dictionary import DecodeParams, decode_dictionary
from .errors import CtcDecError, ParseError
from .evaluate import evaluate
from .expressions import (
    RuleConfig,
    compile_rules,
    decode_expression,
    default_rule_config,
    parse_rules,
)
from .lexicon import build_lexicon, load_lexicon, save_lexicon
from .matio import NAC_TOKEN, load_matrix, store_matrix
from .matrix import detect_boundaries
from .synthetic import generate_synthetic

SCHEMES = ("dec-bp", "dec-ce", "dec-dm", "dec-e")


def _parse_beam(value: str) -> int | None:
    if value.lower() in ("inf", "none", "unlimited"):
        return None
    return int(value)


def load_alphabet_arg(spec: str) -> Alphabet:
    """``default`` or a path to an alphabet JSON file."""
    if spec == "default":
        return default_alphabet()
    try:
        with open(spec, encoding="utf-8") as fh:
            doc = json.load(fh)
        symbols = tuple(NAC_CHAR if s == NAC_TOKEN else s for s in doc["symbols"])
        return Alphabet(
            symbols=symbols,
            nac_index=symbols.index(NAC_CHAR),
            normalization_map=doc.get("normalization", {}),
            separator=doc.get("separator"),
        )
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise ParseError(0, f"bad alphabet file {spec!r}: {exc}") from None


class SchemeDecoder:
    """Picklable per-record decode callable for batch runs."""

    def __init__(
        self,
        scheme: str,
        rule_config: RuleConfig | None = None,
        lexicon=None,
        params: DecodeParams | None = None,
        committee: CommitteeConfig | None = None,
    ):
        self.scheme = scheme
        self.rule_config = rule_config
        self.lexicon = lexicon
        self.params = params or DecodeParams()
        self.committee = committee
        self._model_cache: dict[tuple[str, ...], object] = {}

    def _model(self, alphabet: Alphabet):
        if self.scheme == "dec-ce" or self.rule_config is not None:
            key = alphabet.symbols
            model = self._model_cache.get(key)
            if model is None:
                config = self.rule_config or default_rule_config(alphabet)
                model = compile_rules(config, alphabet)
                self._model_cache[key] = model
            return model
        return None

    def __call__(self, matrices):
        alphabet = matrices[0].alphabet
        if self.scheme == "dec-bp":
            return decode_best_path(matrices[0])
        if self.scheme == "dec-ce":
            return decode_expression(
                matrices[0],
                self._model(alphabet),
                beam_width=self.params.beam_width,
                min_symbol_prob=self.params.min_symbol_prob,
            )
        if self.scheme == "dec-dm":
            return decode_dictionary(
                matrices[0], self.lexicon, self.params, self._model(alphabet)
            )
        return committee_decode(
            matrices, self.lexicon, self.params, self.committee, self._model(alphabet)
        )

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_model_cache"] = {}
        return state


def _cmd_decode(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    rule_config = None
    if args.rules:
        with open(args.rules, encoding="utf-8") as fh:
            rule_config = parse_rules(fh.read())
    lexicon = None
    if args.scheme in ("dec-dm", "dec-e"):
        if not args.lexicon:
            print(f"{args.scheme} requires --lexicon", file=sys.stderr)
            return 2
        lexicon = load_lexicon(args.lexicon)
    params = DecodeParams(
        lm_weight=args.alpha,
        word_bonus=args.beta,
        beam_width=args.beam,
        oov_policy=args.oov,
        min_symbol_prob=args.min_symbol_prob,
    )
    committee = None
    experts = None
    if args.scheme == "dec-e":
        experts = args.experts or manifest.expert_count
        if experts > manifest.expert_count:
            print(
                f"--experts {experts} but the manifest lists only "
                f"{manifest.expert_count} matrices per line",
                file=sys.stderr,
            )
            return 2
        committee = CommitteeConfig(
            n=experts, vote_lambda=args.vote_lambda, null_confidence=args.null_conf
        )
    decoder = SchemeDecoder(
        args.scheme,
        rule_config=rule_config,
        lexicon=lexicon,
        params=params,
        committee=committee,
    )
    results = run_batch(manifest, decoder, args.out, experts=experts, jobs=args.jobs)
    failures = sum(1 for _, text in results if text.startswith("ERROR:"))
    print(f"decoded {len(results)} line(s), {failures} failure(s) -> {args.out}")
    return 0


def _read_lines_file(path: str) -> list[tuple[str, str]]:
    """Read ``id<TAB>text`` or bare-text lines."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for i, raw in enumerate(fh):
            line = raw.rstrip("\n")
            if "\t" in line:
                line_id, text = line.split("\t", 1)
            else:
                line_id, text = str(i), line
            out.append((line_id, text))
    return out


def _cmd_eval(args: argparse.Namespace) -> int:
    alphabet = load_alphabet_arg(args.alphabet)
    hyp_lines = _read_lines_file(args.hyp)
    ref_lines = _read_lines_file(args.ref)
    ref_by_id = dict(ref_lines)
    if len(ref_by_id) == len(ref_lines) and all(h[0] in ref_by_id for h in hyp_lines):
        pairs = [(text, ref_by_id[line_id]) for line_id, text in hyp_lines]
    else:
        if len(hyp_lines) != len(ref_lines):
            print(
                f"cannot pair {len(hyp_lines)} hypotheses with {len(ref_lines)} references",
                file=sys.stderr,
            )
            return 2
        pairs = [(h[1], r[1]) for h, r in zip(hyp_lines, ref_lines)]
    report = evaluate([p[0] for p in pairs], [p[1] for p in pairs], alphabet)
    cops, wops = report.char_ops, report.word_ops
    print(f"{'lines':<12}{len(report.lines)}")
    print(f"{'ref chars':<12}{sum(s.char_ref_len for s in report.lines)}")
    print(f"{'CER':<12}{report.cer:.6f}  (sub {cops.substitutions}  del {cops.deletions}  ins {cops.insertions})")
    print(f"{'ref words':<12}{sum(s.word_ref_len for s in report.lines)}")
    print(f"{'WER':<12}{report.wer:.6f}  (sub {wops.substitutions}  del {wops.deletions}  ins {wops.insertions})")
    if args.per_line:
        for (_, ref), (line_id, _), score in zip(pairs, hyp_lines, report.lines):
            print(f"line {line_id}: char {score.char_distance}/{score.char_ref_len}  word {score.word_distance}/{score.word_ref_len}")
    print(f"cer={report.cer}")
    print(f"wer={report.wer}")
    print(f"char_substitutions={cops.substitutions}")
    print(f"char_deletions={cops.deletions}")
    print(f"char_insertions={cops.insertions}")
    print(f"word_substitutions={wops.substitutions}")
    print(f"word_deletions={wops.deletions}")
    print(f"word_insertions={wops.insertions}")
    return 0


def _cmd_lexicon(args: argparse.Namespace) -> int:
    alphabet = load_alphabet_arg(args.alphabet)
    transcripts: list[str] = []
    for source in args.corpus:
        path = Path(source)
        files = sorted(path.glob("*.txt")) if path.is_dir() else [path]
        for f in files:
            with open(f, encoding="utf-8") as fh:
                for raw in fh:
                    line = raw.rstrip("\n")
                    if line:
                        transcripts.append(normalize_transcript(line, alphabet))
    lexicon = build_lexicon(transcripts, alphabet)
    save_lexicon(lexicon, args.out)
    print(f"{len(lexicon)} words, total count {lexicon.total_count} -> {args.out}")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    alphabet = load_alphabet_arg(args.alphabet)
    out_dir = Path(args.out_dir)
    (out_dir / "refs").mkdir(parents=True, exist_ok=True)
    texts = [t for _, t in _read_lines_file(args.lines)]
    records = []
    for i, text in enumerate(texts):
        line_id = f"l{i:04d}"
        normalized = normalize_transcript(text, alphabet)
        ref_path = out_dir / "refs" / f"{line_id}.txt"
        ref_path.write_text(normalized + "\n", encoding="utf-8")
        paths = []
        for expert in range(args.experts):
            seed = int(np.random.SeedSequence([args.seed, expert, i]).generate_state(1)[0])
            matrix = generate_synthetic(
                normalized, alphabet, frames_per_char=args.fpc, noise=args.noise, seed=seed
            )
            mat_path = out_dir / f"e{expert}_{line_id}.ctcmat"
            store_matrix(matrix, mat_path, binary=args.binary)
            paths.append(str(mat_path))
        records.append(LineRecord(line_id=line_id, matrix_paths=tuple(paths), ref_path=str(ref_path)))
    manifest = Manifest(records=tuple(records))
    save_manifest(manifest, out_dir / "manifest.json")
    with open(out_dir / "refs.tsv", "w", encoding="utf-8") as fh:
        for rec, text in zip(records, texts):
            fh.write(f"{rec.line_id}\t{normalize_transcript(text, alphabet)}\n")
    print(f"{len(records)} line(s) x {args.experts} expert(s) -> {out_dir}")
    return 0


def _cmd_inspect(args: argparse.Namespace) -> int:
    matrix = load_matrix(args.matrix)
    alphabet = matrix.alphabet
    sums = matrix.probs.sum(axis=1)
    nac_col = matrix.probs[:, alphabet.nac_index]
    intervals = detect_boundaries(matrix, args.threshold)
    print(f"{'frames':<12}{matrix.num_frames}")
    print(f"{'symbols':<12}{matrix.num_symbols} (NaC at index {alphabet.nac_index})")
    print(f"{'separator':<12}{alphabet.separator!r}")
    print(f"{'row sums':<12}min {sums.min():.9f}  max {sums.max():.9f}")
    print(f"{'NaC conf':<12}mean {nac_col.mean():.4f}  max {nac_col.max():.4f}")
    spans = " ".join(f"[{s},{e})" for s, e in intervals) or "(none)"
    print(f"{'boundaries':<12}{spans}  (threshold {args.threshold})")
    print(f"{'best path':<12}{decode_best_path(matrix).text!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctcdec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", help="decode a manifest of confidence matrices")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--scheme", required=True, choices=SCHEMES)
    p.add_argument("--rules", help="expression rule file (dec-ce; optional overlay for dec-dm/dec-e)")
    p.add_argument("--lexicon", help="lexicon file (dec-dm, dec-e)")
    p.add_argument("--beam", type=_parse_beam, default=64, help="beam width, or 'inf'")
    p.add_argument("--alpha", type=float, default=1.0, help="word-frequency weight")
    p.add_argument("--beta", type=float, default=0.0, help="word insertion bonus")
    p.add_argument("--oov", choices=("reject", "pass-punct"), default="reject")
    p.add_argument("--min-symbol-prob", type=float, default=0.0)
    p.add_argument("--experts", type=int, default=0, help="committee size (default: all manifest experts)")
    p.add_argument("--lambda", dest="vote_lambda", type=float, default=0.5)
    p.add_argument("--null-conf", type=float, default=0.7)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("eval", help="score hypotheses against references")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--alphabet", default="default")
    p.add_argument("--per-line", action="store_true")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("lexicon", help="lexicon utilities")
    lex_sub = p.add_subparsers(dest="lexicon_command", required=True)
    pb = lex_sub.add_parser("build", help="count words in transcript files")
    pb.add_argument("--corpus", nargs="+", required=True, help="transcript files or directories of *.txt")
    pb.add_argument("--out", required=True)
    pb.add_argument("--alphabet", default="default")
    pb.set_defaults(func=_cmd_lexicon)

    p = sub.add_parser("synth", help="generate synthetic matrices for text lines")
    p.add_argument("--lines", required=True, help="text file, one line per text line")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--fpc", type=int, default=3, help="frames per character")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--experts", type=int, default=1)
    p.add_argument("--binary", action="store_true")
    p.add_argument("--alphabet", default="default")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("inspect", help="print matrix statistics")
    p.add_argument("--matrix", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=_cmd_inspect)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CtcDecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
