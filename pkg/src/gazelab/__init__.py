"""gazelab: deterministic gaze-behaviour analytics for small-group video.

The package turns per-frame vision detections (head boxes, object boxes,
gaze points) into per-student gaze-behaviour decisions — looking at a peer
(S), at one's own laptop (L), or elsewhere (O) — plus session summaries and
an evaluation harness, with a seeded synthetic-scene generator standing in
for camera footage.

Typical flow:

    stream = io.parse_detection_stream(path)
    result = pipeline.run_pipeline(stream, session_config)
    report = metrics.evaluate(io.align(result.decisions, annotations).pairs)

or just the command line: ``gazelab simulate | pipeline | evaluate |
sweep | summarize | friedman``.
"""

__version__ = "0.1.0"

__all__ = [
    "model",
    "errors",
    "io",
    "tracking",
    "assignment",
    "metrics",
    "features",
    "forest",
    "mlp",
    "sweep",
    "simulate",
    "analytics",
    "pipeline",
    "cli",
]
