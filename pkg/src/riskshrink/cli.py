"""Command-line interface: denoise, evaluate, curves, verify.

Exit codes: 0 success, 1 check/runtime failure, 2 usage error.  All
randomness flows from explicit seed flags, so identical invocations produce
byte-identical outputs.
"""

import argparse
import csv
import json
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import risklab
from .audio import WavFormatError, mix_at_snr, read_wav
from .metrics import gain_report
from .pipeline import DenoiserConfig, denoise, denoise_file
from .shrinkage import ShrinkageKind, gain

_CONFIG_FIELD_TYPES = {
    "sample_rate": int,
    "frame_ms": float,
    "overlap_fraction": float,
    "kind": lambda s: ShrinkageKind(s),
    "alpha": float,
    "beta": float,
    "eta": float,
    "init_noise_frames": int,
    "vad_threshold": float,
    "vad_hangover": int,
}


def _parse_kinds(text: str) -> list[ShrinkageKind]:
    if text.strip().lower() == "all":
        return list(ShrinkageKind)
    out = []
    for name in text.split(","):
        name = name.strip().lower()
        try:
            out.append(ShrinkageKind(name))
        except ValueError:
            valid = ", ".join(k.value for k in ShrinkageKind)
            raise ValueError(f"unknown kind {name!r} (choose from: {valid}, all)")
    return out


def _parse_config_file(path: str) -> dict:
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_FIELD_TYPES:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _CONFIG_FIELD_TYPES[key](raw.strip())
    return values


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="plain-text key=value config file")
    sub.add_argument("--sample-rate", type=int, default=None)
    sub.add_argument("--frame-ms", type=float, default=None)
    sub.add_argument("--overlap-fraction", type=float, default=None)
    sub.add_argument("--kind", default=None, help="distortion measure, e.g. mse, wcosh")
    sub.add_argument("--alpha", type=float, default=None)
    sub.add_argument("--beta", type=float, default=None)
    sub.add_argument("--eta", type=float, default=None)
    sub.add_argument("--init-noise-frames", type=int, default=None)
    sub.add_argument("--vad-threshold", type=float, default=None)
    sub.add_argument("--vad-hangover", type=int, default=None)


def _build_config(args: argparse.Namespace) -> DenoiserConfig:
    merged = {}
    if args.config:
        merged.update(_parse_config_file(args.config))
    for f in fields(DenoiserConfig):
        flag_val = getattr(args, f.name, None)
        if flag_val is not None:
            if f.name == "kind":
                flag_val = ShrinkageKind(flag_val.strip().lower())
            merged[f.name] = flag_val
    return DenoiserConfig(**merged)


def _cmd_denoise(args, parser) -> int:
    try:
        config = _build_config(args)
    except ValueError as exc:
        parser.error(str(exc))
    summary = denoise_file(args.in_path, args.out_path, config)
    print(
        json.dumps(
            {
                "in": args.in_path,
                "out": args.out_path,
                "kind": config.kind.value,
                "alpha": config.alpha,
                "frames": summary.frames,
                "speech_percent": round(100.0 * summary.speech_fraction, 2),
            }
        )
    )
    return 0


def _cmd_evaluate(args, parser) -> int:
    try:
        kinds = _parse_kinds(args.kinds)
        snrs = [float(v) for v in args.snr_list.split(",") if v.strip()]
        seeds = [int(v) for v in args.seeds.split(",") if v.strip()]
    except ValueError as exc:
        parser.error(str(exc))
    if not snrs or not seeds:
        parser.error("--snr-list and --seeds must be non-empty")
    clean = read_wav(args.clean)
    noise = read_wav(args.noise)

    rows = []
    for snr_db in sorted(snrs):
        for kind in ShrinkageKind:
            if kind not in kinds:
                continue
            config = DenoiserConfig(
                sample_rate=clean.sample_rate, kind=kind, alpha=args.alpha
            )
            reports = []
            for seed in seeds:
                noisy, _ = mix_at_snr(clean, noise, snr_db, seed_offset=seed)
                out = denoise(noisy.samples, config)
                reports.append(
                    gain_report(clean.samples, noisy.samples, out, config.frame_len)
                )
            mean = lambda attr: float(np.mean([getattr(r, attr) for r in reports]))
            rows.append(
                [
                    Path(args.clean).name,
                    kind.value,
                    f"{args.alpha:.6f}",
                    f"{snr_db:.2f}",
                    f"{mean('input_snr_db'):.6f}",
                    f"{mean('output_snr_db'):.6f}",
                    f"{mean('snr_gain_db'):.6f}",
                    f"{mean('input_ssnr_db'):.6f}",
                    f"{mean('output_ssnr_db'):.6f}",
                    f"{mean('ssnr_gain_db'):.6f}",
                    str(len(seeds)),
                ]
            )
    header = [
        "file",
        "kind",
        "alpha",
        "snr_db",
        "input_snr_db",
        "output_snr_db",
        "snr_gain_db",
        "input_ssnr_db",
        "output_ssnr_db",
        "ssnr_gain_db",
        "seeds",
    ]
    with open(args.out_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out_csv}")
    return 0


def _cmd_curves(args, parser) -> int:
    try:
        lo, hi, step = (float(v) for v in args.xi_db_range.split(":"))
    except ValueError:
        parser.error("--xi-db-range must look like lo:hi:step, e.g. -10:40:0.5")
    if step <= 0 or hi < lo:
        parser.error("--xi-db-range needs hi >= lo and step > 0")
    if args.alpha is not None and args.alpha <= 0:
        parser.error("--alpha must be positive")

    n = int(np.floor((hi - lo) / step + 0.5)) + 1
    header = ["xi_db"] + [k.value for k in ShrinkageKind]
    rows = []
    for i in range(n):
        xi_db = lo + i * step
        xi = 10.0 ** (xi_db / 10.0)
        rows.append(
            [f"{xi_db:.4f}"] + [f"{gain(k, xi, args.alpha):.9f}" for k in ShrinkageKind]
        )
    if args.out_csv:
        with open(args.out_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        print(f"wrote {len(rows)} rows to {args.out_csv}")
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(header)
        writer.writerows(rows)
    return 0


def _cmd_verify(args, parser) -> int:
    if args.samples <= 0:
        parser.error("--samples must be positive")
    if not 0.0 < args.grid_step <= 0.5:
        parser.error("--grid-step must be in (0, 0.5]")
    rows = risklab.verification_suite(
        n_samples=args.samples, seed=args.seed, grid_step=args.grid_step
    )
    failures = 0
    print(f"{'check':<42s} {'lhs':>15s} {'rhs':>15s} {'tol':>12s} status")
    for row in rows:
        ok = row.passed
        failures += 0 if ok else 1
        print(
            f"{row.name:<42s} {row.lhs:>15.8g} {row.rhs:>15.8g} "
            f"{row.tol:>12.4g} {'PASS' if ok else 'FAIL'}"
        )
    print(f"{len(rows)} checks, {failures} failed")
    return 1 if failures else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskshrink",
        description="DCT-domain speech enhancement by risk-optimal shrinkage",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_den = subs.add_parser("denoise", help="denoise a mono PCM-16 WAV file")
    p_den.add_argument("--in", dest="in_path", required=True, help="input WAV")
    p_den.add_argument("--out", dest="out_path", required=True, help="output WAV")
    _add_config_flags(p_den)
    p_den.set_defaults(func=_cmd_denoise)

    p_eval = subs.add_parser(
        "evaluate", help="mix noise into clean speech at target SNRs and score gains"
    )
    p_eval.add_argument("--clean", required=True, help="clean reference WAV")
    p_eval.add_argument(
        "--noise", required=True, help="noise WAV, at least as long as the clean file"
    )
    p_eval.add_argument("--snr-list", default="5,10,15", help="comma-separated dB values")
    p_eval.add_argument("--kinds", default="all", help="comma-separated kinds or 'all'")
    p_eval.add_argument("--out-csv", required=True)
    p_eval.add_argument("--seeds", default="0", help="comma-separated noise-segment seeds")
    p_eval.add_argument("--alpha", type=float, default=1.75)
    p_eval.set_defaults(func=_cmd_evaluate)

    p_cur = subs.add_parser(
        "curves", help="export gain-versus-SNR curves for every measure"
    )
    p_cur.add_argument(
        "--xi-db-range",
        default="-10:40:0.5",
        help="lo:hi:step in dB (use --xi-db-range=-10:40:0.5 for negative lo)",
    )
    p_cur.add_argument("--alpha", type=float, default=1.0)
    p_cur.add_argument("--out-csv", default=None, help="default: stdout")
    p_cur.set_defaults(func=_cmd_curves)

    p_ver = subs.add_parser(
        "verify", help="run the numerical verification suite and print a report"
    )
    p_ver.add_argument("--samples", type=int, default=1_000_000)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--grid-step", type=float, default=1e-4)
    p_ver.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (OSError, ValueError, WavFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
