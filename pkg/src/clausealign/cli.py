"""Command-line front end.

Every subcommand writes its data to files, logs to stderr, and leaves a
``<output>.manifest.json`` recording the resolved arguments, so
``clausealign replay <manifest>`` regenerates the same outputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import shlex
import sys
from datetime import datetime, timezone

from clausealign import __version__
from clausealign.aligner import (
    AlignmentError,
    align_corpus,
    estimate_length_model,
    estimate_mode_probs,
    read_alignments,
    write_alignments,
)
from clausealign.augment import (
    DEFAULT_MAX_LEN,
    DEFAULT_MAX_SPAN,
    SPLIT_NAMES,
    SpanPair,
    SplitError,
    augment_paragraph,
    split_dataset,
    write_spans,
)
from clausealign.corpus import (
    DEFAULT_DELIMITERS,
    CorpusError,
    load_corpus,
    load_parallel_text,
    load_split_or_raw,
    read_jsonl,
    split_record,
)
from clausealign.evaluation import EvalError, alignment_prf, bleu, grid_search, tokenize
from clausealign.lexicon import Lexicon, LexiconError, build_idf, load_dictionary
from clausealign.scoring import AlignmentConfig, ScoringError, read_config, write_config
from clausealign.segmenter import MaxMatchSegmenter, load_wordlist

log = logging.getLogger("clausealign")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_PARTIAL = 4

CONFIG_ENV = "CLAUSEALIGN_CONFIG"

INPUT_ERRORS = (CorpusError, LexiconError, ScoringError, AlignmentError, SplitError, EvalError,
                OSError, KeyError)


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _delimiters(args):
    return frozenset(DEFAULT_DELIMITERS | set(args.extra_delimiters or ""))


def _open_out(path):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline="\n")


# --- shared resource loading -------------------------------------------------

def _load_config(args) -> AlignmentConfig:
    path = args.config or os.environ.get(CONFIG_ENV)
    overrides = {}
    if getattr(args, "beta", None) is not None:
        overrides["beta"] = args.beta
    if getattr(args, "gamma", None) is not None:
        overrides["gamma"] = args.gamma
    if getattr(args, "lam", None) is not None:
        overrides["lam"] = args.lam
    overrides.update(
        use_lexical=not args.no_lexical,
        use_statistical=not args.no_statistical,
        use_edit=not args.no_edit,
        use_dictionary=not args.no_dictionary,
        scorer=args.scorer,
    )
    if path:
        log.info("reading config %s", path)
        return read_config(path, **overrides)
    log.warning("no config given; using built-in length model and mode priors")
    return AlignmentConfig(**overrides)


def _idf_documents(args, items, lexicon, segmenter):
    if args.idf_source == "definitions":
        return [list(d) for d in lexicon.entries.values() if d]
    docs = []
    for it in items:
        if args.idf_source == "modern" and it.modern_words is not None:
            words = [w for ws in it.modern_words for w in ws]
        else:
            seq = it.ancient if args.idf_source == "ancient" else it.modern
            words = [w for c in seq for w in segmenter(c.text)]
        if args.idf_unit == "char":
            words = list("".join(words))
        docs.append(words)
    return docs


def _load_resources(args, items):
    lexicon = load_dictionary(args.dict, args.stopwords) if args.dict else Lexicon()
    segmenter = MaxMatchSegmenter(load_wordlist(args.wordlist) if args.wordlist else ())
    docs = _idf_documents(args, items, lexicon, segmenter)
    if not docs:
        raise CorpusError("no documents available to build the IDF table")
    return lexicon, segmenter, build_idf(docs)


# --- subcommands --------------------------------------------------------------

def cmd_split_clauses(args):
    errors = []
    if args.ancient_txt or args.modern_txt:
        if not (args.ancient_txt and args.modern_txt):
            raise CorpusError("--ancient-txt and --modern-txt must be given together")
        records = load_parallel_text(args.ancient_txt, args.modern_txt)
    else:
        records = load_corpus(args.corpus, errors=errors)
    delims = _delimiters(args)
    written = 0
    with _open_out(args.out) as fh:
        for rec in records:
            try:
                sr = split_record(rec, delims)
            except CorpusError as e:
                errors.append((rec.key, str(e)))
                continue
            fh.write(json.dumps(sr.to_json(), ensure_ascii=False) + "\n")
            written += 1
    for key, msg in errors:
        log.error("record %s/%s: %s", key[0], key[1], msg)
    log.info("split %d records, %d failed", written, len(errors))
    return EXIT_PARTIAL if errors else EXIT_OK


def cmd_estimate(args):
    items = load_split_or_raw(args.corpus, _delimiters(args))
    records = [it.record for it in items]
    lm = estimate_length_model(records, _delimiters(args))
    if not os.path.exists(args.gold):
        raise CorpusError(f"gold file not found: {args.gold}")
    probs = estimate_mode_probs(read_alignments(args.gold), floor=args.floor)
    kw = {"mu": lm.mu, "sigma": lm.sigma, "mode_probs": probs}
    for attr in ("beta", "gamma", "lam"):
        if getattr(args, attr) is not None:
            kw[attr] = getattr(args, attr)
    cfg = AlignmentConfig(**kw)
    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    write_config(cfg, args.out)
    log.info("mu=%.6f sigma=%.6f from %d paragraphs", lm.mu, lm.sigma, len(records))
    return EXIT_OK


def cmd_align(args):
    errors = []
    items = load_split_or_raw(args.corpus, _delimiters(args), errors=errors)
    config = _load_config(args)
    lexicon, segmenter, idf = _load_resources(args, items)
    results = align_corpus(items, config, lexicon, idf, segmenter, jobs=args.jobs)
    n_failed = 0
    with _open_out(args.out) as fh:
        for res in results:
            if res.error:
                n_failed += 1
                log.error("record %s/%s: %s", res.key[0], res.key[1], res.error)
                continue
            write_alignments(res.pairs, fh)
    for key, msg in errors:
        log.error("record %s/%s: %s", key[0], key[1], msg)
    log.info("aligned %d paragraphs, %d failed", len(results) - n_failed, n_failed + len(errors))
    return EXIT_PARTIAL if (n_failed or errors) else EXIT_OK


def _group_pairs(pairs):
    """Aligned pairs grouped per paragraph, paragraphs in first-seen order."""
    groups = {}
    for p in pairs:
        groups.setdefault((p.article_id, p.paragraph_id), []).append(p)
    return groups


def _augment(pairs, max_span, max_len, both_sides):
    """Augment paragraph by paragraph; pairs must be in alignment order."""
    spans = []
    for group in _group_pairs(pairs).values():
        spans.extend(augment_paragraph(group, max_span, max_len, both_sides))
    return spans


def cmd_augment(args):
    pairs = read_alignments(args.alignments)
    spans = _augment(pairs, args.max_span, args.max_len, args.both_sides)
    with _open_out(args.out) as fh:
        write_spans(spans, fh)
    log.info("%d aligned pairs -> %d spans", len(pairs), len(spans))
    return EXIT_OK


def cmd_split_dataset(args):
    rows = [obj for _, obj in read_jsonl(args.input)]
    is_spans = bool(rows) and "src" in rows[0]
    if is_spans:
        items = [SpanPair.from_json(o) for o in rows]
    else:
        from clausealign.aligner import AlignedPair
        items = [AlignedPair.from_json(o) for o in rows]
    groups = {}
    for it in items:
        groups.setdefault(it.article_id, []).append(it)
    split = split_dataset(groups, tuple(args.ratios), args.seed)
    os.makedirs(args.out_dir, exist_ok=True)
    for name in SPLIT_NAMES:
        part = getattr(split, name)
        if is_spans:
            spans = part
        else:
            max_span = 1 if args.no_augment else args.max_span
            spans = _augment(part, max_span, args.max_len, args.both_sides)
        with _open_out(os.path.join(args.out_dir, f"{name}.jsonl")) as fh:
            write_spans(spans, fh)
        log.info("%s: %d articles, %d spans", name, len(split.articles[name]), len(spans))
    with _open_out(os.path.join(args.out_dir, "articles.json")) as fh:
        json.dump(split.articles, fh, ensure_ascii=False, indent=1)
        fh.write("\n")
    return EXIT_OK


def cmd_eval_align(args):
    pred = read_alignments(args.pred)
    gold = read_alignments(args.gold)
    prf = alignment_prf(pred, gold, include_drops=not args.exclude_drops)
    report = {"precision": prf.precision, "recall": prf.recall, "f1": prf.f1,
              "n_predicted": prf.n_predicted, "n_gold": prf.n_gold, "n_correct": prf.n_correct}
    with _open_out(args.out) as fh:
        json.dump(report, fh, indent=1)
        fh.write("\n")
    print(f"P={100 * prf.precision:.2f} R={100 * prf.recall:.2f} F1={100 * prf.f1:.2f}")
    return EXIT_OK


def _read_lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read().splitlines()
    except UnicodeDecodeError as e:
        raise CorpusError(f"{path}: invalid UTF-8 ({e.reason})") from None


def cmd_eval_bleu(args):
    hyps = [tokenize(l, args.tokenize) for l in _read_lines(args.hyp)]
    refs = [tokenize(l, args.tokenize) for l in _read_lines(args.ref)]
    rep = bleu(hyps, refs, args.max_n)
    report = {f"bleu_{n}": v for n, v in enumerate(rep.bleu, 1)}
    report.update(brevity_penalty=rep.brevity_penalty, hyp_len=rep.hyp_len, ref_len=rep.ref_len,
                  precisions=list(rep.precisions))
    with _open_out(args.out) as fh:
        json.dump(report, fh, indent=1)
        fh.write("\n")
    print(" ".join(f"BLEU-{n}={v:.2f}" for n, v in enumerate(rep.bleu, 1))
          + f" BP={rep.brevity_penalty:.4f}")
    return EXIT_OK


def cmd_grid_search(args):
    items = load_split_or_raw(args.corpus, _delimiters(args))
    gold = read_alignments(args.gold)
    config = _load_config(args)
    lexicon, segmenter, idf = _load_resources(args, items)
    res = grid_search(items, gold, args.betas, args.gammas, args.lambdas, config, lexicon, idf,
                      segmenter, jobs=args.jobs, include_drops=not args.exclude_drops)
    with _open_out(args.out) as fh:
        fh.write(res.to_tsv())
    if args.config_out:
        write_config(res.best, args.config_out)
    b = res.best
    log.info("best beta=%g gamma=%g lambda=%g", b.beta, b.gamma, b.lam)
    failed = sum(1 for g in res.table if g.error)
    return EXIT_PARTIAL if failed else EXIT_OK


# --- parser --------------------------------------------------------------------

def _add_scoring_flags(p):
    p.add_argument("--config", help=f"alignment config file (default: ${CONFIG_ENV})")
    p.add_argument("--dict", help="ancient dictionary TSV (headword<TAB>definition)")
    p.add_argument("--stopwords", help="stop-word file for dictionary definitions")
    p.add_argument("--wordlist", help="modern wordlist for maximum-matching segmentation")
    p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--no-lexical", action="store_true")
    p.add_argument("--no-statistical", action="store_true")
    p.add_argument("--no-edit", action="store_true")
    p.add_argument("--no-dictionary", action="store_true")
    p.add_argument("--scorer", choices=("combined", "lcs"), default="combined")
    p.add_argument("--idf-source", choices=("modern", "ancient", "definitions"), default="modern",
                   help="documents the IDF table is computed over")
    p.add_argument("--idf-unit", choices=("word", "char"), default="word")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)


def _add_augment_flags(p):
    p.add_argument("--max-span", type=int, default=DEFAULT_MAX_SPAN)
    p.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    p.add_argument("--both-sides", action="store_true",
                   help="apply the length filter to the modern side as well")


def build_parser():
    parser = argparse.ArgumentParser(prog="clausealign", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--manifest", help="where to write the run manifest")
    parser.add_argument("--extra-delimiters", default="",
                        help="characters to add to the clause delimiter set, e.g. '？?'")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split-clauses", help="split corpus paragraphs into clauses")
    p.add_argument("--corpus", help="JSONL corpus")
    p.add_argument("--ancient-txt", help="plain-text ancient paragraphs, one per line")
    p.add_argument("--modern-txt", help="plain-text modern paragraphs, line-aligned")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_split_clauses)

    p = sub.add_parser("estimate", help="estimate length model and mode priors")
    p.add_argument("--corpus", required=True)
    p.add_argument("--gold", required=True, help="gold alignment JSONL for mode priors")
    p.add_argument("--floor", type=float, default=1e-4, help="prior for modes absent from gold")
    p.add_argument("--beta", type=float, default=5.0)
    p.add_argument("--gamma", type=float, default=0.05)
    p.add_argument("--lambda", dest="lam", type=float, default=0.05)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("align", help="align clauses paragraph by paragraph")
    p.add_argument("--corpus", required=True, help="raw or clause-split corpus JSONL")
    p.add_argument("--out", required=True)
    _add_scoring_flags(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("augment", help="merge adjacent aligned pairs into longer spans")
    p.add_argument("--alignments", required=True)
    p.add_argument("--out", required=True)
    _add_augment_flags(p)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("split-dataset", help="article-disjoint train/dev/test split")
    p.add_argument("--input", required=True, help="aligned pairs or augmented spans JSONL")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ratios", type=_float_list, default=[0.8, 0.1, 0.1])
    p.add_argument("--no-augment", action="store_true",
                   help="write unmerged pairs only (aligned-pair input)")
    _add_augment_flags(p)
    p.set_defaults(func=cmd_split_dataset)

    p = sub.add_parser("eval-align", help="precision/recall/F1 against gold alignments")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--exclude-drops", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval_align)

    p = sub.add_parser("eval-bleu", help="corpus BLEU-1..4 with brevity penalty")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--tokenize", choices=("char", "space"), default="char")
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval_bleu)

    p = sub.add_parser("grid-search", help="tune beta, gamma, lambda on a dev set")
    p.add_argument("--corpus", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--betas", type=_float_list, default=[3, 5, 10])
    p.add_argument("--gammas", type=_float_list, default=[0.03, 0.05, 0.1])
    p.add_argument("--lambdas", type=_float_list, default=[0.03, 0.05, 0.1])
    p.add_argument("--exclude-drops", action="store_true")
    p.add_argument("--out", required=True, help="score table TSV")
    p.add_argument("--config-out", help="write the best config here")
    _add_scoring_flags(p)
    p.set_defaults(func=cmd_grid_search)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest_path")
    p.set_defaults(func=None)
    return parser


def _manifest_path(args):
    if args.manifest:
        return args.manifest
    out = getattr(args, "out", None) or os.path.join(getattr(args, "out_dir", "."), "run")
    return out + ".manifest.json"


def _write_manifest(args, argv, started, code):
    resolved = {k: v for k, v in vars(args).items() if k not in ("func",)}
    manifest = {
        "subcommand": args.command,
        "argv": list(argv),
        "resolved": resolved,
        "config_env": os.environ.get(CONFIG_ENV),
        "seed": getattr(args, "seed", None),
        "tool_version": __version__,
        "started": started,
        "finished": datetime.now(timezone.utc).isoformat(),
        "exit_code": code,
    }
    if hasattr(args, "config"):
        try:
            manifest["config"] = _load_config(args).to_dict()
        except Exception:  # config problems were already reported by the run
            pass
    path = _manifest_path(args)
    with _open_out(path) as fh:
        json.dump(manifest, fh, ensure_ascii=False, indent=1, default=str)
        fh.write("\n")


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    if args.command == "replay":
        try:
            with open(args.manifest_path, encoding="utf-8") as fh:
                recorded = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            log.error("cannot read manifest: %s", e)
            return EXIT_INPUT
        if recorded.get("config_env") and not any(a.startswith("--config") for a in recorded["argv"]):
            os.environ[CONFIG_ENV] = recorded["config_env"]
        log.info("replaying: %s", shlex.join(recorded["argv"]))
        return main(recorded["argv"])

    if args.command == "split-clauses" and not (args.corpus or args.ancient_txt):
        parser.error("split-clauses needs --corpus or --ancient-txt/--modern-txt")

    started = datetime.now(timezone.utc).isoformat()
    try:
        code = args.func(args)
    except INPUT_ERRORS as e:
        log.error("%s", e)
        code = EXIT_INPUT
    _write_manifest(args, argv, started, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
