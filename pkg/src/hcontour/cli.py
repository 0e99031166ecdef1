"""Command-line front end: detect, synth, eval, and bench subcommands.

Exit codes: 0 success, 1 no contour found, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import base64
import json
import sys
import warnings
from pathlib import Path

from .imgio import GrayImage, PgmError, binarize, otsu_threshold, read_pgm, write_pgm
from .scanline import Contour, NoContourError, ScanParams, assemble_contour, direct_scan
from .slidefill import SlidingParams, detect_sliding
from .synthbench import ShapeSpec, compare, generate, iou, rasterize_contour

EXIT_OK = 0
EXIT_NO_CONTOUR = 1
EXIT_ERROR = 2

_BENCH_CASES = ("rect", "c-shape")


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_ERROR


def _positive_int(flag: str, minimum: int = 1):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{flag} must be >= {minimum}, got {value}")
        return value

    return parse


def _byte_value(flag: str):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {text!r}")
        if not 0 <= value <= 255:
            raise argparse.ArgumentTypeError(f"{flag} must lie in 0..255, got {value}")
        return value

    return parse


def _bin_threshold(text: str):
    if text == "otsu":
        return "otsu"
    return _byte_value("--bin-threshold")(text)


def _size(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise argparse.ArgumentTypeError(f"--size expects WxH, e.g. 400x300, got {text!r}")
    w, h = int(parts[0]), int(parts[1])
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError(f"--size must be at least 1x1, got {text!r}")
    return w, h


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hcontour",
        description="Extract the outer contour of a honeycomb-block image.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", help="detect the block contour in a PGM image")
    detect.add_argument("--algo", choices=("direct", "sliding"), default="direct",
                        help="detection algorithm (default: direct)")
    detect.add_argument("--input", required=True, help="input PGM file")
    detect.add_argument("--json", help="write contour JSON here (default: stdout)")
    detect.add_argument("--overlay", help="write an SVG overlay here")
    detect.add_argument("--overlay-ref", action="store_true",
                        help="reference the input PGM by relative path instead of embedding it")
    detect.add_argument("--bin-threshold", type=_bin_threshold, default="otsu",
                        help="binarization threshold 0..255 or 'otsu' (default: otsu)")
    detect.add_argument("--pitch", type=_positive_int("--pitch", 2), default=None,
                        help="expected cell pitch in pixels; sets the default --run-limit")
    detect.add_argument("--run-limit", type=_positive_int("--run-limit"), default=None,
                        help="longest black run kept inside a row segment "
                             "(default: 2*pitch when --pitch is given, else 20)")
    detect.add_argument("--min-width", type=_positive_int("--min-width", 0), default=None,
                        help="minimum accepted row width (default: 10)")
    detect.add_argument("--core", type=_positive_int("--core"), default=None,
                        help="sliding window side length (default: 8)")
    detect.add_argument("--step", type=_positive_int("--step"), default=None,
                        help="sliding window stride (default: 8)")
    detect.add_argument("--fill-threshold", type=_byte_value("--fill-threshold"), default=None,
                        help="window mean above which the window fills white (default: 40)")
    detect.set_defaults(func=cmd_detect)

    synth = sub.add_parser("synth", help="generate a synthetic blank and its mask")
    synth.add_argument("--shape", default="rect",
                       help="'rect', 'c-shape', or a JSON file with [[x, y], ...] vertices "
                            "(default: rect)")
    synth.add_argument("--pitch", type=_positive_int("--pitch", 2), default=24,
                       help="cell pitch in pixels (default: 24)")
    synth.add_argument("--wall", type=_positive_int("--wall"), default=2,
                       help="wall thickness in pixels (default: 2)")
    synth.add_argument("--size", type=_size, default=(400, 300),
                       help="image size WxH (default: 400x300)")
    synth.add_argument("--specks", type=_positive_int("--specks", 0), default=0,
                       help="isolated noise pixels outside the blank (default: 0)")
    synth.add_argument("--seed", type=int, default=1,
                       help="64-bit seed for speck placement (default: 1)")
    synth.add_argument("--image", default="blank.pgm",
                       help="output PGM for the rendered image (default: blank.pgm)")
    synth.add_argument("--mask", default="mask.pgm",
                       help="output PGM for the ground-truth mask (default: mask.pgm)")
    synth.set_defaults(func=cmd_synth)

    ev = sub.add_parser("eval", help="print the IoU of a contour JSON against a truth mask")
    ev.add_argument("--json", required=True, help="contour JSON produced by detect")
    ev.add_argument("--input", required=True, help="ground-truth mask PGM")
    ev.set_defaults(func=cmd_eval)

    bench = sub.add_parser("bench", help="run both algorithms over the built-in cases")
    bench.add_argument("--cases", default=",".join(_BENCH_CASES),
                       help="comma-separated subset of rect,c-shape (default: both)")
    bench.add_argument("--out-dir", default="bench-results",
                       help="directory for per-case report JSON (default: bench-results)")
    bench.set_defaults(func=cmd_bench)
    return parser


def _contour_json(algorithm: str, contour: Contour, params: dict) -> str:
    pts = ", ".join(f"[{x}, {y}]" for x, y in contour.points)
    return (
        f'{{"algorithm": {json.dumps(algorithm)}, "points": [{pts}], '
        f'"closed": true, "params": {json.dumps(params)}}}'
    )


def _overlay_svg(image: GrayImage, input_path: str, overlay_path: str,
                 contour: Contour, embed: bool) -> str:
    w, h = image.width, image.height
    if embed:
        payload = base64.b64encode(write_pgm(image)).decode("ascii")
        href = f"data:image/x-portable-graymap;base64,{payload}"
    else:
        base = Path(overlay_path).resolve().parent
        href = Path(input_path).resolve().relative_to(base).as_posix() \
            if Path(input_path).resolve().is_relative_to(base) else Path(input_path).name
    path_data = "M " + " L ".join(f"{x} {y}" for x, y in contour.points) + " Z"
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">\n'
        f'  <image x="0" y="0" width="{w}" height="{h}" href="{href}"/>\n'
        f'  <path d="{path_data}" fill="none" stroke="red" stroke-width="1"/>\n'
        "</svg>\n"
    )


def cmd_detect(args) -> int:
    try:
        data = Path(args.input).read_bytes()
    except OSError as exc:
        return _fail(f"cannot read {args.input}: {exc}")
    try:
        image = read_pgm(data)
    except PgmError as exc:
        return _fail(f"{args.input}: {exc}")

    threshold = args.bin_threshold
    if threshold == "otsu":
        threshold = otsu_threshold(image)
    binary = binarize(image, threshold)

    if args.algo == "direct":
        for flag in ("core", "step", "fill_threshold"):
            if getattr(args, flag) is not None:
                _warn(f"--{flag.replace('_', '-')} ignored for algorithm 'direct'")
        run_limit = args.run_limit
        if run_limit is None:
            run_limit = 2 * args.pitch if args.pitch else 20
        params = ScanParams(
            run_limit=run_limit,
            min_width=10 if args.min_width is None else args.min_width,
        )
        try:
            contour = assemble_contour(direct_scan(binary, params))
        except NoContourError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NO_CONTOUR
        used = {"bin_threshold": threshold, "run_limit": params.run_limit,
                "min_width": params.min_width}
    else:
        for flag in ("run_limit", "min_width", "pitch"):
            if getattr(args, flag) is not None:
                _warn(f"--{flag.replace('_', '-')} ignored for algorithm 'sliding'")
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            params = SlidingParams(
                core=8 if args.core is None else args.core,
                step=8 if args.step is None else args.step,
                fill_threshold=40 if args.fill_threshold is None else args.fill_threshold,
            )
        for warning in caught:
            _warn(str(warning.message))
        try:
            contour = detect_sliding(binary, params)
        except NoContourError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NO_CONTOUR
        used = {"bin_threshold": threshold, "core": params.core, "step": params.step,
                "fill_threshold": params.fill_threshold}

    text = _contour_json(args.algo, contour, used)
    if args.json:
        Path(args.json).write_text(text + "\n", encoding="ascii")
    else:
        print(text)
    if args.overlay:
        svg = _overlay_svg(image, args.input, args.overlay, contour,
                           embed=not args.overlay_ref)
        Path(args.overlay).write_text(svg, encoding="ascii")
    return EXIT_OK


def preset_polygon(shape: str, size: tuple[int, int]) -> tuple[tuple[int, int], ...]:
    """Built-in blank outlines, scaled to the image size.

    'rect' is a convex rectangle; 'c-shape' carves a notch into its top
    edge, so some rows cross the blank twice.
    """
    w, h = size
    x0, x1 = round(0.15 * w), round(0.85 * w)
    y0, y1 = round(2 * h / 15), round(13 * h / 15)
    if shape == "rect":
        return ((x0, y0), (x1, y0), (x1, y1), (x0, y1))
    if shape == "c-shape":
        nx0, nx1 = round(0.40 * w), round(0.60 * w)
        ny = round(19 * h / 30)
        return ((x0, y0), (nx0, y0), (nx0, ny), (nx1, ny), (nx1, y0),
                (x1, y0), (x1, y1), (x0, y1))
    raise ValueError(f"unknown shape preset {shape!r}")


def _load_polygon(shape: str, size: tuple[int, int]) -> tuple[tuple[int, int], ...]:
    if shape in ("rect", "c-shape"):
        return preset_polygon(shape, size)
    payload = json.loads(Path(shape).read_text(encoding="ascii"))
    return tuple((int(x), int(y)) for x, y in payload)


def cmd_synth(args) -> int:
    try:
        polygon = _load_polygon(args.shape, args.size)
        spec = ShapeSpec(
            polygon=polygon,
            cell_pitch=args.pitch,
            wall_thickness=args.wall,
            image_size=args.size,
            speck_count=args.specks,
            speck_seed=args.seed,
        )
        image, truth = generate(spec)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    Path(args.image).write_bytes(write_pgm(image))
    Path(args.mask).write_bytes(write_pgm(truth.mask))
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        payload = json.loads(Path(args.json).read_text(encoding="ascii"))
        contour = Contour(tuple((int(x), int(y)) for x, y in payload["points"]))
        truth = read_pgm(Path(args.input).read_bytes())
    except (OSError, ValueError, KeyError) as exc:
        return _fail(str(exc))
    truth_mask = binarize(truth, 127)
    try:
        detected = rasterize_contour(contour, (truth.width, truth.height))
    except ValueError as exc:
        return _fail(str(exc))
    print(f"{iou(detected, truth_mask):.4f}")
    return EXIT_OK


def cmd_bench(args) -> int:
    cases = tuple(c.strip() for c in args.cases.split(",") if c.strip())
    unknown = [c for c in cases if c not in _BENCH_CASES]
    if unknown:
        return _fail(f"unknown bench case(s): {', '.join(unknown)}")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    size = (400, 300)
    pitch, wall = 24, 2
    lines = [f"{'case':<10} {'algo':<8} {'iou':>8} {'median_ms':>10}"]
    for case in cases:
        spec = ShapeSpec(
            polygon=preset_polygon(case, size),
            cell_pitch=pitch,
            wall_thickness=wall,
            image_size=size,
        )
        image, truth = generate(spec)
        threshold = otsu_threshold(image)
        report = compare(
            image,
            truth,
            ScanParams(run_limit=2 * pitch, min_width=10),
            SlidingParams(core=8, step=8, fill_threshold=40),
            threshold,
        )
        (out_dir / f"{case}.json").write_text(report.to_json() + "\n", encoding="ascii")
        d, s = report.direct, report.sliding
        lines.append(f"{case:<10} {'direct':<8} {d.iou:>8.4f} {d.ms:>10.3f}")
        lines.append(f"{case:<10} {'sliding':<8} {s.iou:>8.4f} {s.ms:>10.3f}")
    lines.append("")
    lines.append("note: the sliding fill usually costs more time than direct row "
                 "scanning; the timings above are reported, not asserted.")
    summary = "\n".join(lines) + "\n"
    (out_dir / "summary.txt").write_text(summary, encoding="ascii")
    print(summary, end="")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except Exception as exc:  # malformed inputs must not escape as tracebacks
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
