"""Command-line front end for numberwall.

Subcommands:
    gen      Generate a wall; write a dump, a profile or an image
    verify   Run the verification suite and write a JSON report
    fractal  Box counts and dimension estimates as CSV
    render   Render a wall dump as PPM/PGM
    seq      Print sequence prefixes

Usage:
    python main.py gen --p 3 --seq cantor --h 3 --pad tilde --out wall.ppm
    python main.py verify --suite all --p 3 --h 2 --json report.json
    python main.py fractal --p 3 --levels 5 --csv out.csv

Exit status: 0 on success, 1 when a verification check fails, 2 on usage
errors and on any NumberWallError.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import yaml
from pydantic import ValidationError

from src.exceptions import NumberWallError, SuiteError
from src.finite_field import as_prime
from src.fractal import box_dim_estimate, fractal_rows, write_csv
from src.logging_config import configure_module_logging, setup_all_logging
from src.render import Palette, write_image
from src.sequences import (
    Seq,
    cantor,
    cantor_left,
    cantor_tilde,
    left_zero_extend,
    pseudo_singer,
    singer,
    singer_tilde,
)
from src.settings import Settings
from src.verify import load_suite_from_yaml, reports_to_json, run_suite, run_suite_definition
from src.wall import Wall, WindowKind
from src.wall_engine import generate_ra_wall, generate_wall, profile

logger = configure_module_logging("cli")

SEQUENCES = ("cantor", "singer", "pseudo_singer")
PADDINGS = ("none", "left", "tilde")


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _banner(title: str):
    print("\n" + "=" * 70)
    print(title)
    print("=" * 70)


def build_sequence(p: int, name: str, h: Optional[int], length: Optional[int], pad: str) -> Seq:
    """
    The sequence selected by the gen/seq flags.

    "tilde" pads the level-h block with zeros on both sides and needs h;
    otherwise the prefix length is `length`, or the block length of level h.

    Raises:
        NumberWallError: On an impossible combination
    """
    prime = as_prime(p)
    if pad == "tilde":
        if h is None:
            raise NumberWallError("--pad tilde needs --h")
        if name == "cantor":
            return cantor_tilde(prime, h)
        if name == "singer":
            return singer_tilde(prime, h)
        raise NumberWallError(f"--pad tilde is defined for cantor and singer, not {name}")
    if length is None:
        if h is None:
            raise NumberWallError("Give --h or --length")
        length = prime.p**h + (2 if name == "singer" else 0)
    if name == "cantor":
        return cantor_left(prime, length) if pad == "left" else cantor(prime, length)
    build = singer if name == "singer" else pseudo_singer
    s = build(prime, length)
    return left_zero_extend(s) if pad == "left" else s


def _read_sequence(args) -> Seq:
    if args.seq_file:
        return Seq.from_text(Path(args.seq_file).read_text())
    return build_sequence(args.p, args.seq, args.h, args.length, args.pad)


def cmd_gen(args) -> int:
    """Generate a wall and write it in the format chosen by the output suffix."""
    s = _read_sequence(args)
    max_row = args.max_row if args.max_row is not None else (len(s) - 1) // 2
    if (args.r0, args.a0) == (1, 1):
        w = generate_wall(s, max_row)
    else:
        w = generate_ra_wall(s, args.r0, args.a0, max_row)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    suffix = out.suffix.lower()
    if suffix == ".ppm":
        write_image(w, out, Palette.COLOR)
    elif suffix == ".pgm":
        write_image(w, out, Palette.GRAY)
    elif suffix == ".txt":
        out.write_text(profile(w).to_text())
    else:
        w.dump(out)
    finite = sum(1 for r in w.windows if r.kind is WindowKind.FINITE)
    print(f"✓ {w.describe()}")
    print(f"  windows: {len(w.windows)} ({finite} finite), fallbacks: {w.fallbacks}")
    print(f"  wrote {out}")
    return 0


def resolve_suite_path(name: str, suites_dir: Path) -> Path:
    """A suite file path as given, else `<name>` or `<name>.yaml` under the suites directory."""
    path = Path(name)
    if path.exists():
        return path
    for candidate in (suites_dir / name, suites_dir / f"{name}.yaml"):
        if candidate.exists():
            return candidate
    return path


def cmd_verify(args, settings: Settings) -> int:
    """Run checks, print one line each, write the JSON report."""
    seed = args.seed if args.seed is not None else settings.seed
    if args.suite_file:
        path = resolve_suite_path(args.suite_file, settings.suites_dir)
        try:
            suite = load_suite_from_yaml(path.read_text())
        except (OSError, yaml.YAMLError, ValidationError) as e:
            raise SuiteError(f"Cannot load suite {args.suite_file}: {e}") from e
        _banner(f"VERIFY: {suite.metadata.name}")
        reports = run_suite_definition(suite, seed=args.seed)
    else:
        filters = [f for f in args.suite.split(",") if f]
        _banner(f"VERIFY: {', '.join(filters)} | p={args.p} h={args.h} seed={seed}")
        reports = run_suite(filters, primes=args.p, levels=args.h, seed=seed, trials=args.trials)

    for r in reports:
        mark = "✓" if r.passed else "✗"
        params = " ".join(f"{k}={v}" for k, v in r.params.items())
        print(f"  {mark} {r.check:<15} {params}  ({r.details.get('comparisons', 0)} comparisons)")
        for mm in r.mismatches[:3]:
            print(f"      [{mm.m},{mm.n}] expected {mm.expected} got {mm.actual}: {mm.context}")

    if args.json:
        out = Path(args.json)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(reports_to_json(reports, deterministic=not args.timings))
        print(f"\n  report: {out}")

    failed = [r for r in reports if not r.passed]
    print("\n" + "=" * 70)
    if failed:
        print(f"✗ {len(failed)} of {len(reports)} checks failed")
        print("=" * 70 + "\n")
        return 1
    print(f"✓ All {len(reports)} checks passed")
    print("=" * 70 + "\n")
    return 0


def cmd_fractal(args) -> int:
    """Per-level counts and estimates; the least-squares slope goes to the log."""
    rows = fractal_rows(args.p, args.levels)
    if args.csv:
        out = Path(args.csv)
        out.parent.mkdir(parents=True, exist_ok=True)
        write_csv(rows, out)
        print(f"✓ wrote {len(rows)} rows to {out}")
    for row in rows:
        print(f"  k={row.level}: {row.N_k} <= {row.k_count} <= {row.a_k}  estimate {row.estimate:.6f}")
    if len(rows) >= 2:
        estimate = box_dim_estimate([r.k_count for r in rows], args.p)
        logger.info(
            f"p={args.p} slope={estimate.slope:.6f} tail_slope={estimate.tail_slope:.6f} target={estimate.target:.6f}"
        )
        print(f"  slope {estimate.slope:.6f}, target {estimate.target:.6f}")
    return 0


def cmd_render(args) -> int:
    w = Wall.load(Path(args.wall))
    target = profile(w) if args.profile else w
    height, width = write_image(target, Path(args.out), Palette(args.palette))
    print(f"✓ {width}x{height} image written to {args.out}")
    return 0


def cmd_seq(args) -> int:
    text = _read_sequence(args).to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _add_sequence_args(parser: argparse.ArgumentParser):
    parser.add_argument("--p", type=int, default=3, help="Odd prime (default: 3)")
    parser.add_argument("--seq", choices=SEQUENCES, default="cantor", help="Sequence family")
    parser.add_argument("--h", type=int, help="Level: block length p^h (p^h+2 for singer)")
    parser.add_argument("--length", type=int, help="Prefix length; overrides --h")
    parser.add_argument("--pad", choices=PADDINGS, default="none", help="Zero padding mode")
    parser.add_argument("--seq-file", help="Read the sequence from a text file instead")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nwall",
        description="Number walls over prime fields",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", help="Log level (default: NWALL_LOG_LEVEL or INFO)")
    parser.add_argument("--no-log-file", action="store_true", help="Log to the console only")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="Generate a wall")
    _add_sequence_args(gen)
    gen.add_argument("--max-row", type=int, help="Last row (default: half the sequence length)")
    gen.add_argument("--r0", type=int, default=1, help="Row -1 ratio of an (r0, a0)-wall")
    gen.add_argument("--a0", type=int, default=1, help="Row -1 scale of an (r0, a0)-wall")
    gen.add_argument("--out", required=True, help=".ppm, .pgm, .txt (profile) or a wall dump")

    verify = sub.add_parser("verify", help="Run the verification suite")
    verify.add_argument("--suite", default="all", help="Comma-separated filters, or 'all'")
    verify.add_argument("--suite-file", help="YAML suite file, or a suite name under NWALL_SUITES_DIR; replaces --suite/--p/--h")
    verify.add_argument("--p", type=_int_list, default=[3], help="Comma-separated primes")
    verify.add_argument("--h", type=_int_list, default=[1], help="Comma-separated levels")
    verify.add_argument("--seed", type=int, help="RNG seed (default: NWALL_SEED)")
    verify.add_argument("--trials", type=int, default=20, help="Random instances per randomized check")
    verify.add_argument("--json", help="Write the JSON report here")
    verify.add_argument("--timings", action="store_true", help="Keep millis in the JSON report")

    fractal = sub.add_parser("fractal", help="Box counts per level")
    fractal.add_argument("--p", type=int, default=3, help="Odd prime")
    fractal.add_argument("--levels", type=int, default=4, help="Levels 1..N")
    fractal.add_argument("--csv", help="Write CSV here")

    render = sub.add_parser("render", help="Render a wall dump")
    render.add_argument("wall", help="Wall dump written by gen")
    render.add_argument("--out", required=True, help="Output image")
    render.add_argument("--palette", choices=[p.value for p in Palette], default=Palette.COLOR.value)
    render.add_argument("--profile", action="store_true", help="Render the profile instead of residues")

    seq = sub.add_parser("seq", help="Print a sequence prefix")
    _add_sequence_args(seq)
    seq.add_argument("--out", help="Write to a file instead of stdout")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = Settings.from_env()
    setup_all_logging(args.log_level or settings.log_level, include_file=not args.no_log_file, log_dir=settings.log_dir)
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "verify":
            return cmd_verify(args, settings)
        if args.command == "fractal":
            return cmd_fractal(args)
        if args.command == "render":
            return cmd_render(args)
        return cmd_seq(args)
    except NumberWallError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"\n✗ {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
