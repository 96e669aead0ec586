"""Command-line entry point: ``kmroots validate | roots | string | verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .cartan import CartanMatrix, TypeTag, classify_type, symmetrize, validate
from .errors import InvalidInput, KMRootsError, NotGCM
from .lattice import RootVector, norm
from .multiplicity import MultiplicityTable, load_or_build
from .strings import analyze
from .verify import run_verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_ENGINE = 3
EXIT_VERIFY = 4

ENV_CACHE_DIR = "KMROOTS_CACHE_DIR"
ENV_CONFIG = "KMROOTS_CONFIG"
DEFAULT_CONFIG_PATH = Path("~/.config/kmroots/config.json")
DEFAULT_CACHE_DIR = Path("~/.cache/kmroots")
STRING_HEIGHT_CAP = 30
FORMATS = ("json", "csv", "table")


@dataclass
class Config:
    cache_dir: Path | None = None
    default_height: int = 12
    default_window: tuple[int, int] = (-12, 12)
    output_format: str = "table"

    def check(self) -> "Config":
        if self.default_height < 2:
            raise InvalidInput(f"default_height must be at least 2, got {self.default_height}")
        lo, hi = self.default_window
        if not lo <= 0 <= hi:
            raise InvalidInput(f"default_window {self.default_window} must contain 0")
        if self.output_format not in FORMATS:
            raise InvalidInput(f"output_format must be one of {FORMATS}")
        return self


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like -3..3, got {text!r}") from None
    if not lo <= 0 <= hi:
        raise argparse.ArgumentTypeError(f"window {text} must contain 0")
    return lo, hi


def parse_vector(text: str) -> RootVector:
    try:
        return RootVector(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"vector must look like 1,0,2, got {text!r}") from None


def load_config(path: Path | None) -> Config:
    explicit = path is not None
    if path is None:
        env = os.environ.get(ENV_CONFIG)
        path = Path(env) if env else DEFAULT_CONFIG_PATH.expanduser()
        explicit = bool(env)
    if not path.exists():
        if explicit:
            raise InvalidInput(f"config file {path} does not exist")
        return Config()
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read config {path}: {exc}") from exc
    cfg = Config()
    if "cache_dir" in raw:
        cfg.cache_dir = Path(raw["cache_dir"]).expanduser()
    if "default_height" in raw:
        cfg.default_height = int(raw["default_height"])
    if "default_window" in raw:
        w = raw["default_window"]
        cfg.default_window = parse_window(w) if isinstance(w, str) else (int(w[0]), int(w[1]))
    if "output_format" in raw:
        cfg.output_format = raw["output_format"]
    return cfg.check()


def resolve_cache_dir(args, cfg: Config) -> Path | None:
    if args.no_cache:
        return None
    if args.cache_dir is not None:
        return Path(args.cache_dir)
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    if cfg.cache_dir is not None:
        return cfg.cache_dir
    return DEFAULT_CACHE_DIR.expanduser()


def read_matrix(path: str) -> CartanMatrix:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc
    if isinstance(raw, dict):
        rows, name = raw.get("rows"), str(raw.get("name", ""))
    else:
        rows, name = raw, ""
    if not isinstance(rows, list):
        raise NotGCM(NotGCM.NOT_SQUARE, "rows")
    return validate(rows, name or Path(path).stem)


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _diag(q) -> str:
    return "diag(" + ",".join(map(str, q)) + ")"


# -- commands -------------------------------------------------------------


def cmd_validate(args, cfg: Config) -> tuple[str, int]:
    A = read_matrix(args.matrix)
    q = symmetrize(A)
    types = classify_type(A, q)
    fmt = args.format or cfg.output_format
    if fmt == "json":
        return _dump_json(
            {
                "name": A.name,
                "valid": True,
                "size": A.size,
                "symmetrizer": list(q.q),
                "components": [
                    {
                        "indices": list(t.component),
                        "type": t.tag.value,
                        "null_root": list(t.null_root) if t.null_root is not None else None,
                    }
                    for t in types
                ],
            }
        ), EXIT_OK
    lines = [f"{A.name}: valid generalized Cartan matrix of size {A.size}"]
    for t in types:
        prefix = "" if len(types) == 1 else f"component {list(t.component)}: "
        parts = [t.tag.value]
        if t.tag is TypeTag.AFFINE:
            parts.append("δ = [" + ",".join(map(str, t.null_root)) + "]")
        parts.append(f"D = {_diag(q.q[i] for i in t.component)}")
        lines.append(prefix + ", ".join(parts))
    return "\n".join(lines) + "\n", EXIT_OK


def root_rows(table: MultiplicityTable, H: int) -> list[dict]:
    rows = []
    for v, m in table.positive_roots(H):
        n = norm(table.gram, v)
        rows.append(
            {
                "coeffs": list(v),
                "height": v.height,
                "kind": "real" if n > 0 else "imaginary",
                "norm": n,
                "mult": m,
            }
        )
    return rows


def cmd_roots(args, cfg: Config) -> tuple[str, int]:
    A = read_matrix(args.matrix)
    H = args.max_height if args.max_height is not None else cfg.default_height
    if H < 1:
        raise InvalidInput(f"--max-height must be positive, got {H}")
    table = load_or_build(A, H, resolve_cache_dir(args, cfg))
    rows = root_rows(table, H)
    fmt = args.format or cfg.output_format
    if fmt == "json":
        return _dump_json({"name": A.name, "matrix_id": table.matrix_id, "max_height": H, "roots": rows}), EXIT_OK
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["coeffs", "height", "kind", "norm", "mult"])
        for r in rows:
            w.writerow([" ".join(map(str, r["coeffs"])), r["height"], r["kind"], r["norm"], r["mult"]])
        return buf.getvalue(), EXIT_OK
    header = ("coeffs", "height", "kind", "norm", "mult")
    body = [(str(r["coeffs"]), str(r["height"]), r["kind"], str(r["norm"]), str(r["mult"])) for r in rows]
    widths = [max(len(x[i]) for x in [header, *body]) for i in range(5)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in [header, *body]]
    return "\n".join(lines) + "\n", EXIT_OK


def _string_height(alpha: RootVector, beta: RootVector, window: tuple[int, int]) -> int:
    lo, hi = window
    return max(abs((alpha + beta * n).height) for n in (lo, 0, hi))


def cmd_string(args, cfg: Config) -> tuple[str, int]:
    A = read_matrix(args.matrix)
    window = args.window or cfg.default_window
    if len(args.alpha) != A.size or len(args.beta) != A.size:
        raise InvalidInput(f"vectors must have {A.size} entries")
    if args.max_height is not None:
        H = args.max_height
    else:
        H = max(2, min(STRING_HEIGHT_CAP, _string_height(args.alpha, args.beta, window)))
    table = load_or_build(A, H, resolve_cache_dir(args, cfg))
    s = analyze(table, args.alpha, args.beta, window)
    fmt = args.format or cfg.output_format
    if fmt == "json":
        return _dump_json(s.to_dict()), EXIT_OK
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "vector", "dim", "member"])
        for n in range(s.window[0], s.window[1] + 1):
            member = s.run[0] <= n <= s.run[1]
            w.writerow([n, " ".join(map(str, s.vector(n))), s.dim(n), int(member)])
        return buf.getvalue(), EXIT_OK
    c, g = s.classification, s.growth
    lines = [
        f"string through {list(s.alpha)} along {list(s.beta)}",
        f"window {s.window[0]}..{s.window[1]}" + (" (clipped by table height)" if s.clipped else ""),
        f"members {s.run[0]}..{s.run[1]}",
        "dims " + " ".join(("[" + str(d) + "]") if n == s.origin_index else str(d) for n, d in zip(range(s.window[0], s.window[1] + 1), s.dims)),
        f"classification {c.tag.value} directions {list(c.directions)}" + (" (second direction unknown at bound)" if c.unknown_at_bound else ""),
        f"  evidence: {c.evidence}",
        f"growth {g.tag.value} {json.dumps(g.params, sort_keys=True)}",
    ]
    for cert in s.certificates:
        lines.append(f"certificate {cert.kind.value} {json.dumps(cert.params, sort_keys=True)}")
        lines.append("  (n, bound, mult): " + " ".join(f"({a},{b},{m})" for a, b, m in cert.samples))
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_verify(args, cfg: Config) -> tuple[str, int]:
    matrices = None if args.matrix is None else [read_matrix(args.matrix)]
    H = args.max_height if args.max_height is not None else cfg.default_height
    if H < 2:
        raise InvalidInput(f"--max-height must be at least 2, got {H}")
    report = run_verify(matrices, H, cache_dir=resolve_cache_dir(args, cfg))
    fmt = args.format or cfg.output_format
    if fmt == "json":
        text = report.to_json()
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "anchor", "instances", "failures", "passed"])
        for c in report.checks:
            w.writerow([c.name, c.anchor, c.instances, len(c.failures), int(c.passed)])
        text = buf.getvalue()
    else:
        text = report.to_table()
    return text, EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--cache-dir", help=f"table cache directory (env {ENV_CACHE_DIR})")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write cached tables")
    common.add_argument("--config", type=Path, help=f"JSON config file (default {DEFAULT_CONFIG_PATH})")
    common.add_argument("--format", choices=FORMATS)

    p = _Parser(prog="kmroots", description="Root multiplicities and root strings of Kac-Moody algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", parents=[common], help="check a matrix and report its type")
    v.add_argument("matrix")

    r = sub.add_parser("roots", parents=[common], help="list positive roots with multiplicities")
    r.add_argument("matrix")
    r.add_argument("--max-height", type=int)

    s = sub.add_parser("string", parents=[common], help="analyse the root string alpha + n beta")
    s.add_argument("matrix")
    s.add_argument("--alpha", type=parse_vector, required=True)
    s.add_argument("--beta", type=parse_vector, required=True)
    s.add_argument("--window", type=parse_window)
    s.add_argument("--max-height", type=int)

    ver = sub.add_parser("verify", parents=[common], help="run the structural checks")
    group = ver.add_mutually_exclusive_group()
    group.add_argument("matrix", nargs="?")
    group.add_argument("--corpus", action="store_true", help="use the built-in corpus (the default)")
    ver.add_argument("--max-height", type=int)
    return p


_VALUE_OPTIONS = ("--alpha", "--beta", "--window")


def _glue_values(argv: list[str]) -> list[str]:
    # argparse reads "-3..3" or "-1,0" as an option; bind such values to their flag.
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTIONS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


COMMANDS = {"validate": cmd_validate, "roots": cmd_roots, "string": cmd_string, "verify": cmd_verify}


def run(argv: list[str] | None = None) -> tuple[str, str, int]:
    """Run a command and return ``(stdout, stderr, exit_code)`` without printing."""
    try:
        args = build_parser().parse_args(_glue_values(list(sys.argv[1:] if argv is None else argv)))
    except UsageError as exc:
        return "", f"{exc}\n", EXIT_USAGE
    except SystemExit as exc:  # --help
        return "", "", EXIT_OK if not exc.code else EXIT_USAGE
    try:
        cfg = load_config(args.config)
        out, code = COMMANDS[args.command](args, cfg)
    except KMRootsError as exc:
        return "", f"error: {type(exc).__name__}: {exc}\n", exc.exit_code
    return out, "", code


def main(argv: list[str] | None = None) -> int:
    out, err, code = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
