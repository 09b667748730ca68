"""Command-line front end: design, enumerate, select and emit patterns.

Exit codes: 0 success, 1 verify mismatch, 2 bad input, 3 solver failure,
4 degenerate endpoints.
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from pydantic import ValidationError

from . import __version__
from .backend.autocorr import autocorrelation_deviation, extraction_residuals, same_beampattern
from .backend.core import beampattern, default_grid
from .backend.design import convex_mother, sidelobe_report, spheroidal_mother
from .backend.enumeration import enumerate_family
from .backend.errors import (
    AmbiguousDesignError,
    BeamspaceError,
    ConvergenceError,
    DegenerateEndpointsError,
    DomainError,
    SingularSystemError,
)
from .backend.formats import (
    fmt_number,
    pattern_frame,
    read_beam_vector,
    read_design_spec,
    read_family,
    read_manifest,
    read_vectors,
    table_csv,
    write_beam_vector,
    write_family,
    write_manifest,
    write_text,
    write_vector_set,
)
from .backend.ledger import list_runs, open_ledger, record_run
from .backend.models import ArrayGeometry, RunManifest, validation_messages
from .backend.selection import power_profile, profile_csv, select_indices, scale_to_power
from .config import config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_SOLVER = 3
EXIT_DEGENERATE = 4

EXTRACTION_MAX_RESIDUAL = 1e-8


def _print(*parts: object) -> None:
    print(*parts, file=sys.stdout)


def _error(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _parse_angles(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",") if x.strip()], dtype=np.float64)
    except ValueError as e:
        raise DomainError(f"Invalid angle list {text!r}") from e


class Run:
    """Bookkeeping for one command: inputs, outputs and the manifest written at the end."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: list[str] = []
        self.outputs: list[str] = []
        self.started = time.perf_counter()

    def manifest(self) -> RunManifest:
        parameters = {
            key: (str(value) if isinstance(value, Path) else value)
            for key, value in sorted(vars(self.args).items())
            if key not in {"func", "argv"}
        }
        return RunManifest(
            command=self.args.command,
            argv=list(self.args.argv),
            parameters=parameters,
            inputs=self.inputs,
            outputs=self.outputs,
            version=__version__,
            wall_time_s=time.perf_counter() - self.started,
        )

    def manifest_path(self) -> Path | None:
        """--manifest, else next to the first output, else next to the first input."""
        if self.args.manifest:
            return Path(self.args.manifest)
        if self.outputs:
            return Path(self.outputs[0] + ".manifest.json")
        if self.inputs:
            return Path(f"{self.inputs[0]}.{self.args.command}.manifest.json")
        return None

    def finish(self) -> None:
        path = self.manifest_path()
        if path is None:
            return
        manifest = self.manifest()
        write_manifest(path, manifest)
        url = self.args.ledger or config.ledger_url
        if url:
            record = record_run(open_ledger(url), manifest)
            logger.info("Recorded run %s in the ledger", record.id)


def cmd_design(args: argparse.Namespace, run: Run) -> int:
    spec = read_design_spec(args.spec)
    run.inputs.append(str(args.spec))
    if args.method == "spheroidal":
        w = spheroidal_mother(spec)
    else:
        w = convex_mother(spec)
    run.outputs.append(str(write_beam_vector(args.out, w)))
    report = sidelobe_report(w, spec)
    _print(f"norm2: {fmt_number(w.norm**2)}")
    for key, value in report.items():
        _print(f"{key}: {fmt_number(value)}")
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace, run: Run) -> int:
    w = read_beam_vector(args.input)
    run.inputs.append(str(args.input))
    family = enumerate_family(w, sample=args.sample, seed=args.seed, threads=args.threads)
    run.outputs.append(str(write_family(args.out, family)))
    _print(family.distinct_count)
    return EXIT_OK


def cmd_pattern(args: argparse.Namespace, run: Run) -> int:
    if args.angles is not None:
        grid = _parse_angles(args.angles)
    else:
        grid = default_grid(args.step)
    patterns = []
    for path in args.input:
        run.inputs.append(str(path))
        patterns.extend(beampattern(w, grid) for w in read_vectors(path))
    frame = pattern_frame(patterns[0].angles, [p.powers for p in patterns])
    run.outputs.append(str(write_text(args.out, table_csv(frame))))
    _print(f"{len(patterns)} pattern(s) on {patterns[0].angles.shape[0]} angles")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, run: Run) -> int:
    w = read_beam_vector(args.first)
    v = read_beam_vector(args.second)
    run.inputs.extend([str(args.first), str(args.second)])
    deviation = autocorrelation_deviation(w, v)
    same = same_beampattern(w, v, rel_tol=args.tol)
    _print(f"max_lag_deviation: {fmt_number(deviation)}")
    _print("same beampattern" if same else "different beampattern")
    return EXIT_OK if same else EXIT_MISMATCH


def cmd_select(args: argparse.Namespace, run: Run) -> int:
    family = read_family(args.family)
    run.inputs.append(str(args.family))
    subset, _ = select_indices(
        family,
        args.k,
        args.power,
        budget=args.budget,
        metric=args.metric,
        exhaustive=args.exhaustive,
    )
    chosen = scale_to_power([family.members[i] for i in subset], args.power)
    before = power_profile([family.mother], args.power)
    after = power_profile(chosen, args.power)
    run.outputs.append(str(write_vector_set(args.out, chosen)))
    profile_path = args.profile or args.out.with_suffix(".profile.csv")
    run.outputs.append(str(write_text(profile_path, profile_csv(after))))
    _print(f"members: {' '.join(family.masks[i].to_bits() for i in subset)}")
    _print(f"uniformity before: {fmt_number(before.uniformity)}")
    _print(f"uniformity after: {fmt_number(after.uniformity)}")
    return EXIT_OK


def cmd_extract(args: argparse.Namespace, run: Run) -> int:
    geometry = ArrayGeometry(element_count=args.elements, spacing=args.spacing)
    angles = None if args.angles is None else _parse_angles(args.angles)
    residuals = extraction_residuals(geometry, angles)
    for j, residual in enumerate(residuals, start=1):
        _print(f"{j},{fmt_number(residual)}")
    return EXIT_OK if np.all(residuals <= args.max_residual) else EXIT_SOLVER


def cmd_replay(args: argparse.Namespace, run: Run) -> int:
    manifest = read_manifest(args.manifest_file)
    logger.info("Replaying %s: %s", manifest.command, " ".join(manifest.argv))
    return main(manifest.argv)


def cmd_runs(args: argparse.Namespace, run: Run) -> int:
    url = args.ledger or config.ledger_url
    if not url:
        raise DomainError("No ledger configured; pass --ledger or set BEAMSPACE_LEDGER_URL")
    for record in list_runs(open_ledger(url), command=args.filter, limit=args.limit):
        _print(f"{record.id}\t{record.command}\t{' '.join(record.to_manifest().argv)}")
    return EXIT_OK


def _global_options(parser: argparse.ArgumentParser, default=None) -> None:
    parser.add_argument("--threads", type=int, default=default, help="Worker threads.")
    parser.add_argument("--seed", type=int, default=default, help="Seed for mask sampling.")
    parser.add_argument("--tol", type=float, default=default, help="Relative same-pattern tolerance.")
    parser.add_argument("--ledger", default=default, help="SQL URL of the run ledger.")
    parser.add_argument("--manifest", type=Path, default=default, help="Manifest output path.")
    parser.add_argument("--log-level", dest="log_level", default=default, help="Logging level.")
    parser.add_argument(
        "-v", "--verbose", action="count", default=default, help="More logging (repeatable)."
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beamspace",
        description="Same-beampattern beamforming vectors for MIMO radar transmit beamspace.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser)
    # subcommands accept the same flags without clobbering values given before them
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, func: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = command("design", cmd_design, "Design a mother beam vector for a sector.")
    p.add_argument("--method", choices=["spheroidal", "cvx"], default="spheroidal")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)

    p = command("enumerate", cmd_enumerate, "Enumerate the flip family of a beam vector.")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--sample", type=int, default=None, help="Visit only N random masks.")

    p = command("pattern", cmd_pattern, "Write beampatterns as CSV.")
    p.add_argument("--input", type=Path, nargs="+", required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--step", type=float, default=None, help="Grid step in degrees.")
    p.add_argument("--angles", default=None, help="Comma-separated angles in degrees.")

    p = command("verify", cmd_verify, "Check whether two beam vectors share a beampattern.")
    p.add_argument("first", type=Path)
    p.add_argument("second", type=Path)

    p = command("select", cmd_select, "Pick the most power-uniform subset of a family.")
    p.add_argument("--family", type=Path, required=True)
    p.add_argument("-k", type=int, default=4)
    p.add_argument("--power", type=float, required=True)
    p.add_argument("--metric", choices=["maxdev", "var"], default="maxdev")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--profile", type=Path, default=None)

    p = command("extract", cmd_extract, "Check the Toeplitz diagonal extraction.")
    p.add_argument("--elements", "-m", type=int, required=True)
    p.add_argument("--spacing", type=float, default=0.5)
    p.add_argument("--angles", default=None)
    p.add_argument("--max-residual", dest="max_residual", type=float, default=EXTRACTION_MAX_RESIDUAL)

    p = command("replay", cmd_replay, "Re-run the command stored in a manifest.")
    p.add_argument("manifest_file", type=Path)

    p = command("runs", cmd_runs, "List runs stored in the ledger.")
    p.add_argument("--command", dest="filter", default=None)
    p.add_argument("--limit", type=int, default=20)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    if args.verbose:
        level = logging.DEBUG if args.verbose > 1 else logging.INFO
    else:
        level = getattr(logging, (args.log_level or config.log_level).upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("beamspace").setLevel(level)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    args.argv = argv
    _configure_logging(args)

    run = Run(args)
    try:
        code = args.func(args, run)
        run.finish()
        return code
    except DegenerateEndpointsError as e:
        _error(str(e))
        return EXIT_DEGENERATE
    except (ConvergenceError, AmbiguousDesignError) as e:
        _error(str(e))
        return EXIT_SOLVER
    except ValidationError as e:
        for field, message in validation_messages(e).items():
            _error(f"{field}: {message}")
        return EXIT_INPUT
    except (DomainError, SingularSystemError) as e:
        _error(str(e))
        return EXIT_INPUT
    except BeamspaceError as e:
        _error(str(e))
        return EXIT_INPUT
    except OSError as e:
        _error(str(e))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
