"""Command-line entry point.

Subcommands: simulate | pipeline | evaluate | sweep | summarize | friedman.
All data goes to files (written atomically: temp file + rename), all
diagnostics to stderr, and every file-producing run drops a manifest.json
recording the command, inputs, outputs, seed and engine version.  Exit
status is 0 iff no error.  The one stdout exception is ``friedman``, which
exists to print a test result.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__, metrics
from .analytics import (
    detect_jva,
    peer_gaze_drop_alert,
    serialize_alerts,
    serialize_jva,
    summarize,
    summary_to_json,
)
from .errors import EngineError, SchemaError
from .forest import ForestParams
from .io import (
    align,
    load_config,
    parse_annotations,
    parse_decisions,
    parse_detection_stream,
    serialize_annotations,
    serialize_decisions,
    serialize_detection_stream,
    serialize_seats,
    serialize_sweep_rows,
    serialize_truth,
    session_config_from_mapping,
)
from .mlp import MlpParams
from .pipeline import run_pipeline
from .simulate import generate, noise_spec_from_mapping, scene_spec_from_mapping
from .sweep import build_dataset, forest_trainer, mlp_trainer, run_sweep

__all__ = ["main"]

#: Sampled-frame window for the peer-gaze drop alert in ``summarize``.
ALERT_WINDOW = 30
ALERT_DROP_RATIO = 0.5

DEFAULT_FRACTIONS = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _write_manifest(
    out_dir: Path,
    command: str,
    config: Path | None,
    inputs: Sequence[Path],
    outputs: Sequence[str],
    seed: int | None,
    started: float,
    extra: dict | None = None,
) -> None:
    doc = {
        "command": command,
        "config": str(config) if config is not None else None,
        "inputs": [str(p) for p in inputs],
        "outputs": list(outputs),
        "seed": seed,
        "engine_version": __version__,
        "duration_s": round(time.monotonic() - started, 3),
    }
    if extra:
        doc.update(extra)
    _write_atomic(out_dir / "manifest.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _load_mapping(config: Path | None) -> dict[str, object]:
    if config is None:
        return {}
    return load_config(config)


# ---------------------------------------------------------------------------
# Subcommand handlers (each returns the process exit status)
# ---------------------------------------------------------------------------


def _cmd_simulate(args: argparse.Namespace, started: float) -> int:
    mapping = _load_mapping(args.config)
    scene = scene_spec_from_mapping(mapping)
    noise = noise_spec_from_mapping(mapping)
    if args.seed is not None:
        scene = dataclasses.replace(scene, seed=args.seed)
    stream, truth, annotations = generate(scene, noise)
    out: Path = args.out_dir
    _write_atomic(out / "detections.jsonl", serialize_detection_stream(stream))
    _write_atomic(out / "annotations.csv", serialize_annotations(annotations))
    _write_atomic(out / "truth.csv", serialize_truth(truth.rows))
    _write_manifest(
        out,
        "simulate",
        args.config,
        [],
        ["detections.jsonl", "annotations.csv", "truth.csv"],
        scene.seed,
        started,
        extra={"generator": "pcg64"},
    )
    return 0


def _cmd_pipeline(args: argparse.Namespace, started: float) -> int:
    cfg = session_config_from_mapping(_load_mapping(args.config))
    if args.gate is not None:
        cfg = dataclasses.replace(cfg, tracking_gate=args.gate)
    stream = parse_detection_stream(args.detections)
    result = run_pipeline(stream, cfg, args.tablet_as_laptop)
    if result.order_violations:
        print(
            f"warning: {result.order_violations} anchor update(s) rejected "
            "to preserve seat order",
            file=sys.stderr,
        )
    out: Path = args.out_dir
    _write_atomic(out / "decisions.csv", serialize_decisions(result.decisions))
    _write_atomic(out / "seats.csv", serialize_seats(result.final_seat_map.seats))
    _write_manifest(
        out,
        "pipeline",
        args.config,
        [args.detections],
        ["decisions.csv", "seats.csv"],
        None,
        started,
        extra={"gate": result.gate, "order_violations": result.order_violations},
    )
    return 0


def _cmd_evaluate(args: argparse.Namespace, started: float) -> int:
    decisions = parse_decisions(args.decisions)
    annotations = parse_annotations(args.annotations)
    aligned = align(decisions, annotations)
    report = metrics.evaluate(
        aligned.pairs, aligned.unmatched_pred, aligned.unmatched_true
    )
    if report.degenerate:
        print(
            "warning: degenerate evaluation: " + "; ".join(report.degenerate),
            file=sys.stderr,
        )
    out: Path = args.out_dir
    _write_atomic(
        out / "report.json",
        json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n",
    )
    _write_manifest(
        out,
        "evaluate",
        None,
        [args.decisions, args.annotations],
        ["report.json"],
        None,
        started,
    )
    return 0


def _parse_fractions(text: str) -> tuple[float, ...]:
    try:
        fractions = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise SchemaError(f"invalid --fractions value {text!r}: {exc}") from None
    if not fractions:
        raise SchemaError("--fractions must name at least one fraction")
    return fractions


def _cmd_sweep(args: argparse.Namespace, started: float) -> int:
    cfg = session_config_from_mapping(_load_mapping(args.config))
    stream = parse_detection_stream(args.detections)
    annotations = parse_annotations(args.annotations)
    annotators = {rec.annotator_id for rec in annotations}
    if len(annotators) > 1:
        raise SchemaError(
            "annotations carry multiple annotator ids "
            f"({sorted(annotators)}); filter to one annotator first"
        )
    fractions = _parse_fractions(args.fractions)

    dataset = build_dataset(stream, annotations, cfg)
    rule_result = run_pipeline(stream, cfg, args.tablet_as_laptop)
    rule_aligned = align(rule_result.decisions, annotations)
    rule_f1 = metrics.evaluate(
        rule_aligned.pairs, rule_aligned.unmatched_pred, rule_aligned.unmatched_true
    ).weighted_f1

    trainers = {
        "forest": forest_trainer(ForestParams(seed=args.seed)),
        "mlp": mlp_trainer(MlpParams(seed=args.seed)),
    }
    seeds = (args.seed, args.seed + 1, args.seed + 2)
    result = run_sweep(dataset, fractions, trainers, rule_f1, seeds)

    out: Path = args.out_dir
    _write_atomic(out / "sweep.csv", serialize_sweep_rows(result.to_rows()))
    _write_manifest(
        out,
        "sweep",
        args.config,
        [args.detections, args.annotations],
        ["sweep.csv"],
        args.seed,
        started,
        extra={"fractions": list(fractions), "n_samples": len(dataset)},
    )
    return 0


def _cmd_summarize(args: argparse.Namespace, started: float) -> int:
    decisions = parse_decisions(args.decisions)
    summary = summarize(decisions)
    episodes = detect_jva(decisions, min_duration=args.min_duration)
    alerts = peer_gaze_drop_alert(decisions, ALERT_WINDOW, ALERT_DROP_RATIO)
    out: Path = args.out_dir
    _write_atomic(out / "summary.json", summary_to_json(summary))
    _write_atomic(out / "jva.csv", "\n".join(serialize_jva(episodes)) + "\n")
    _write_atomic(out / "alerts.csv", "\n".join(serialize_alerts(alerts)) + "\n")
    _write_manifest(
        out,
        "summarize",
        None,
        [args.decisions],
        ["summary.json", "jva.csv", "alerts.csv"],
        None,
        started,
        extra={
            "min_duration": args.min_duration,
            "alert_window": ALERT_WINDOW,
            "alert_drop_ratio": ALERT_DROP_RATIO,
        },
    )
    return 0


def _read_score_table(path: Path) -> tuple[list[str], list[list[float]]]:
    """Friedman input: a CSV with one named column per treatment and one row
    per block."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise SchemaError("scores file is empty", line=1)
    names = [part.strip() for part in lines[0].split(",")]
    if len(names) < 2 or any(not n for n in names):
        raise SchemaError(
            f"scores header must name >= 2 treatments, got {lines[0]!r}", line=1
        )
    blocks: list[list[float]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(names):
            raise SchemaError(
                f"expected {len(names)} scores, got {len(parts)}", line=lineno
            )
        try:
            blocks.append([float(part) for part in parts])
        except ValueError:
            raise SchemaError(f"non-numeric score in {line!r}", line=lineno) from None
    return names, blocks


def _cmd_friedman(args: argparse.Namespace, started: float) -> int:
    names, blocks = _read_score_table(args.scores)
    result = metrics.friedman_test(blocks)
    doc = {
        "treatments": names,
        "blocks": len(blocks),
        "chi_square": result.chi_square,
        "df": result.df,
        "p_value": result.p_value,
        "degenerate": result.degenerate,
        "alpha": args.alpha,
        "significant": bool(result.p_value < args.alpha),
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazelab",
        description=(
            "Collaborative-learning gaze behaviour engine: synthesize or "
            "ingest per-frame detections, decide who looks at what, and "
            "evaluate or summarize the results."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser(
        "simulate", help="generate a synthetic session (detections + truth)"
    )
    sim.add_argument("--config", type=Path, help="scene/noise config file")
    sim.add_argument("--out-dir", type=Path, required=True)
    sim.add_argument("--seed", type=int, help="override the scene seed")
    sim.set_defaults(handler=_cmd_simulate)

    pipe = sub.add_parser(
        "pipeline", help="track seats and decide gaze behaviour per frame"
    )
    pipe.add_argument("--detections", type=Path, required=True)
    pipe.add_argument("--config", type=Path, required=True, help="session config file")
    pipe.add_argument("--out-dir", type=Path, required=True)
    pipe.add_argument(
        "--gate", type=float, help="override the tracking gate (pixels)"
    )
    pipe.add_argument(
        "--tablet-as-laptop",
        action="store_true",
        help="classify tablet gaze as L instead of O",
    )
    pipe.set_defaults(handler=_cmd_pipeline)

    ev = sub.add_parser(
        "evaluate", help="score a decisions file against annotations"
    )
    ev.add_argument("decisions", type=Path)
    ev.add_argument("--annotations", type=Path, required=True)
    ev.add_argument("--out-dir", type=Path, required=True)
    ev.set_defaults(handler=_cmd_evaluate)

    sw = sub.add_parser(
        "sweep", help="training-fraction sweep of the learned baselines"
    )
    sw.add_argument("--detections", type=Path, required=True)
    sw.add_argument("--annotations", type=Path, required=True)
    sw.add_argument("--config", type=Path, required=True, help="session config file")
    sw.add_argument("--out-dir", type=Path, required=True)
    sw.add_argument(
        "--fractions",
        default=DEFAULT_FRACTIONS,
        help=f"comma-separated training fractions (default {DEFAULT_FRACTIONS})",
    )
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--tablet-as-laptop", action="store_true")
    sw.set_defaults(handler=_cmd_sweep)

    su = sub.add_parser(
        "summarize", help="session summary, JVA episodes and gaze-drop alerts"
    )
    su.add_argument("decisions", type=Path)
    su.add_argument("--out-dir", type=Path, required=True)
    su.add_argument(
        "--min-duration",
        type=int,
        default=3,
        help="minimum JVA episode length in sampled frames",
    )
    su.set_defaults(handler=_cmd_summarize)

    fr = sub.add_parser(
        "friedman", help="Friedman test over a blocks-by-treatments score CSV"
    )
    fr.add_argument("scores", type=Path)
    fr.add_argument("--alpha", type=float, default=0.05)
    fr.set_defaults(handler=_cmd_friedman)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        return args.handler(args, started)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
