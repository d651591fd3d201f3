"""Command-line interface: per-discriminant reports, cached range census, verification.

Output is newline-delimited JSON; rationals are ``"num/den"`` strings and
real numbers are decimal strings with an explicit precision.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

from . import __version__
from .errors import InvalidDiscriminantError
from .hermitian import enumerate_spaces, is_globally_isotropic, lattice_classes
from .quadratic_field import make_field, odd_fundamental_discriminants, reduced_forms
from .quaternion import algebra_from_space, level
from .verify import SCOPES, run_scope
from .volumes import VolumeValue, evaluate, unitary_degree, unitary_volume

log = logging.getLogger(__name__)

CACHE_ENV = "UNITARY_SHIMURA_CACHE_DIR"
CACHE_SCHEMA = {"schema": "unitary-shimura-census", "schema_version": 1}
DEFAULT_PRECISION = 30


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s: str) -> Fraction:
    num, den = s.split("/")
    return Fraction(int(num), int(den))


def volume_to_dict(v: VolumeValue) -> dict:
    return {
        "c_const": fraction_str(v.c_const),
        "c_zeta": fraction_str(v.c_zeta),
        "c_log": {str(p): fraction_str(c) for p, c in v.c_log.items()},
    }


def volume_from_dict(d: dict) -> VolumeValue:
    return VolumeValue(
        parse_fraction(d["c_const"]),
        parse_fraction(d["c_zeta"]),
        {int(p): parse_fraction(c) for p, c in d["c_log"].items()},
    )


@dataclass(frozen=True)
class ComponentReport:
    D: int
    space_index: int
    det: Fraction
    negative_primes: tuple[int, ...]
    p_circ: tuple[int, ...]
    lattice_class: str
    isotropic: bool
    disc_B: int
    N: int
    degree: Fraction
    volume_symbolic: VolumeValue
    volume_numeric: str
    precision: int

    def to_dict(self) -> dict:
        return {
            "D": self.D,
            "space_id": {
                "index": self.space_index,
                "det": fraction_str(self.det),
                "negative_primes": list(self.negative_primes),
                "p_circ": list(self.p_circ),
            },
            "lattice_class": self.lattice_class,
            "isotropic": self.isotropic,
            "disc_B": self.disc_B,
            "N": self.N,
            "degree": fraction_str(self.degree),
            "volume_symbolic": volume_to_dict(self.volume_symbolic),
            "volume_numeric": {"value": self.volume_numeric, "precision": self.precision},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComponentReport":
        sid = d["space_id"]
        return cls(
            D=d["D"],
            space_index=sid["index"],
            det=parse_fraction(sid["det"]),
            negative_primes=tuple(sid["negative_primes"]),
            p_circ=tuple(sid["p_circ"]),
            lattice_class=d["lattice_class"],
            isotropic=d["isotropic"],
            disc_B=d["disc_B"],
            N=d["N"],
            degree=parse_fraction(d["degree"]),
            volume_symbolic=volume_from_dict(d["volume_symbolic"]),
            volume_numeric=d["volume_numeric"]["value"],
            precision=d["volume_numeric"]["precision"],
        )


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cmd_report(D: int, precision: int = DEFAULT_PRECISION) -> list[ComponentReport]:
    """One report per connected component, i.e. per (space, Steinitz class)."""
    ctx = make_field(D)
    out = []
    for index, W in enumerate(enumerate_spaces(ctx)):
        B = algebra_from_space(W)
        N = level(ctx, B)
        deg = unitary_degree(ctx, W)
        vol = unitary_volume(ctx, W)
        numeric = str(evaluate(vol, precision))
        for c in lattice_classes(W):
            out.append(
                ComponentReport(
                    D=D,
                    space_index=index,
                    det=W.det_class,
                    negative_primes=tuple(W.inv.sorted_primes()),
                    p_circ=W.p_circ,
                    lattice_class=c.label(),
                    isotropic=is_globally_isotropic(W),
                    disc_B=B.disc,
                    N=N,
                    degree=deg,
                    volume_symbolic=vol,
                    volume_numeric=numeric,
                    precision=precision,
                )
            )
    return out


def _checksum(D: int, precision: int) -> str:
    return hashlib.sha256(dumps({"D": D, "version": __version__, "precision": precision}).encode()).hexdigest()


def census_record(D: int, precision: int) -> dict:
    ctx = make_field(D)
    G = reduced_forms(ctx)
    reports = cmd_report(D, precision)
    spaces = []
    for index, W in enumerate(enumerate_spaces(ctx)):
        spaces.append(
            {
                "index": index,
                "det": fraction_str(W.det_class),
                "components": [r.to_dict() for r in reports if r.space_index == index],
            }
        )
    return {
        "D": D,
        "h": len(G),
        "o_k": ctx.o_k,
        "cl0": len(G.principal_genus),
        "spaces": spaces,
        "checksum": _checksum(D, precision),
    }


# --- cache -------------------------------------------------------------------


def default_cache_path() -> Path:
    base = os.environ.get(CACHE_ENV)
    root = Path(base) if base else Path.home() / ".cache" / "unitary_shimura"
    return root / "census.ndjson"


class CensusCache:
    """Append-only NDJSON file: a schema header, then one ``{key, record}`` per line."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.entries: dict[tuple[int, str, int], dict] = {}
        self._load()

    @staticmethod
    def key(D: int, precision: int) -> tuple[int, str, int]:
        return (D, __version__, precision)

    def _load(self) -> None:
        if not self.path.exists():
            return
        with self.path.open(encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines:
            return
        try:
            header = json.loads(lines[0])
        except json.JSONDecodeError:
            header = None
        if header != CACHE_SCHEMA:
            log.warning("cache %s has an unknown header; ignoring its contents", self.path)
            return
        for n, line in enumerate(lines[1:], start=2):
            try:
                item = json.loads(line)
                k = item["key"]
                key = (int(k["D"]), str(k["version"]), int(k["precision"]))
                record = item["record"]
                if record["checksum"] != _checksum(key[0], key[2]) or record["D"] != key[0]:
                    raise ValueError("checksum mismatch")
            except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                log.warning("dropping corrupted cache line %d in %s", n, self.path)
                continue
            self.entries[key] = record

    def get(self, D: int, precision: int) -> Optional[dict]:
        return self.entries.get(self.key(D, precision))

    def append(self, records: Iterable[tuple[int, int, dict]]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fresh = not self.path.exists() or self.path.stat().st_size == 0
        with self.path.open("a", encoding="utf-8") as fh:
            if fresh:
                fh.write(dumps(CACHE_SCHEMA) + "\n")
            for D, precision, record in records:
                key = self.key(D, precision)
                fh.write(dumps({"key": {"D": D, "version": key[1], "precision": precision}, "record": record}) + "\n")
                self.entries[key] = record


@dataclass
class CensusStats:
    computed: int = 0
    cached: int = 0
    discriminants: list[int] = field(default_factory=list)


def _record_job(args: tuple[int, int]) -> dict:
    D, precision = args
    return census_record(D, precision)


def cmd_census(
    d_min: int,
    d_max: int,
    precision: int = DEFAULT_PRECISION,
    jobs: int = 1,
    cache_path: Optional[Path] = None,
    stats: Optional[CensusStats] = None,
) -> list[dict]:
    """Census records for every odd fundamental D in [d_min, d_max], ordered by |D|."""
    if not d_min <= d_max < 0:
        raise ValueError("need d_min <= d_max < 0")
    stats = stats if stats is not None else CensusStats()
    discs = list(odd_fundamental_discriminants(d_min, d_max))
    stats.discriminants = discs
    cache = CensusCache(cache_path) if cache_path is not None else None
    results: dict[int, dict] = {}
    todo = []
    for D in discs:
        hit = cache.get(D, precision) if cache else None
        if hit is not None:
            results[D] = hit
            stats.cached += 1
        else:
            todo.append(D)
    if todo:
        work = [(D, precision) for D in todo]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                fresh = list(pool.map(_record_job, work, chunksize=max(1, len(work) // (4 * jobs))))
        else:
            fresh = [_record_job(w) for w in work]
        stats.computed += len(fresh)
        for D, record in zip(todo, fresh):
            results[D] = record
        if cache is not None:
            cache.append((D, precision, results[D]) for D in todo)
    return [results[D] for D in discs]


# --- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unitary-shimura",
        description="Degrees and arithmetic volumes of unitary Shimura curves over Q(sqrt(D)), D odd.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="report every connected component for one discriminant")
    p.add_argument("-D", type=int, required=True, help="odd negative fundamental discriminant")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="digits for numeric volumes")

    p = sub.add_parser("census", help="records for every odd fundamental D in a range")
    p.add_argument("--min", dest="d_min", type=int, required=True)
    p.add_argument("--max", dest="d_max", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cache", type=Path, default=None, help=f"cache file (default under ${CACHE_ENV})")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--scope", choices=SCOPES + ("all",), default="all")
    p.add_argument("--bound", type=int, default=500, help="largest |D| to check")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "report":
            for r in cmd_report(args.D, args.precision):
                out.write(dumps(r.to_dict()) + "\n")
        elif args.command == "census":
            cache = None if args.no_cache else (args.cache or default_cache_path())
            for record in cmd_census(args.d_min, args.d_max, args.precision, args.jobs, cache):
                out.write(dumps(record) + "\n")
        else:
            results = run_scope(args.scope, args.bound)
            for res in results:
                out.write(res.line() + "\n")
            failed = sum(not r.passed for r in results)
            out.write(f"{len(results) - failed}/{len(results)} checks passed\n")
            return 1 if failed else 0
    except InvalidDiscriminantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
