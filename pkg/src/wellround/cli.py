"""Command line interface.

    wellround --d -1 --group GL complex
    wellround --d -5 --group PSL --max-degree 3 homology
    wellround --d -3 classes
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import export
from .formspace import WeightSpec
from .perturb import wall_assemble
from .quadfield import FieldConfig, steinitz_lattices
from .snfhomology import integral_homology
from .voronoi import CellComplexData, complex_for_group

log = logging.getLogger("wellround")

GROUPS = ("GL", "SL", "PGL", "PSL")


class UsageError(ValueError):
    pass


@dataclass
class JobSpec:
    field_d: int
    lattice_class_index: int = 0
    weight: str = "phi0"
    group: str = "GL"
    max_degree: int = 3
    output_path: str | None = None
    format: str = "text"
    orientation_seed: int = 0
    max_seconds: float | None = None

    def validate(self):
        try:
            K = FieldConfig(self.field_d)
        except ValueError as e:
            raise UsageError(str(e)) from None
        n = len(steinitz_lattices(K))
        if not 0 <= self.lattice_class_index < n:
            raise UsageError(f"lattice index must be in 0..{n - 1} for d = {self.field_d}")
        if self.max_degree < 0:
            raise UsageError("max degree must be nonnegative")
        if self.group not in GROUPS:
            raise UsageError(f"group must be one of {GROUPS}")
        if self.group in ("SL", "PSL") and not K.is_imaginary:
            raise UsageError("SL and PSL are only available for imaginary quadratic fields")
        return K


def _cache_path(spec: JobSpec) -> Path | None:
    root = os.environ.get("WELLROUND_CACHE")
    if not root:
        return None
    K = FieldConfig(spec.field_d)
    key = f"{K.disc}_{spec.lattice_class_index}_{spec.weight}_{spec.group}_{spec.orientation_seed}"
    return Path(root) / f"complex_{hashlib.sha1(key.encode()).hexdigest()[:16]}_{key}.json"


def load_or_build_complex(spec: JobSpec) -> CellComplexData:
    K = spec.validate()
    path = _cache_path(spec)
    if path is not None and path.exists():
        try:
            return export.complex_from_json(json.loads(path.read_text()))
        except (export.SchemaError, KeyError, ValueError) as e:
            log.warning("ignoring unusable cache file %s: %s", path, e)
    L = steinitz_lattices(K)[spec.lattice_class_index]
    w = WeightSpec.phi0() if spec.weight == "phi0" else WeightSpec.phi1(K)
    cd = complex_for_group(L, spec.group, w, spec.orientation_seed)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(export.complex_to_json(cd, spec.lattice_class_index)))
    return cd


def _emit(spec: JobSpec, text: str, doc: dict):
    out = json.dumps(doc, indent=1) if spec.format == "json" else text
    if spec.output_path:
        Path(spec.output_path).write_text(out + ("\n" if not out.endswith("\n") else ""))
    else:
        print(out)


def cmd_complex(spec: JobSpec) -> CellComplexData:
    cd = load_or_build_complex(spec)
    lines = [
        f"field d={spec.field_d} lattice={spec.lattice_class_index} weight={spec.weight} group={cd.group_label}",
        f"orbit counts by dimension: {cd.counts}",
        f"maximal stabilizer order: {cd.max_stabilizer_order}",
    ]
    _emit(spec, "\n".join(lines), export.complex_to_json(cd, spec.lattice_class_index))
    return cd


def compute_homology(spec: JobSpec):
    """Rows (n, H_n) for n = 0..max_degree and the truncation degree (or None)."""
    cd = load_or_build_complex(spec)
    start = time.monotonic()
    if spec.max_seconds is None:
        R = wall_assemble(cd, spec.max_degree + 1)
        return [(n, integral_homology(R, n)) for n in range(spec.max_degree + 1)], None
    rows = []
    for n in range(spec.max_degree + 1):
        if time.monotonic() - start > spec.max_seconds:
            return rows, n
        R = wall_assemble(cd, n + 1)
        rows.append((n, integral_homology(R, n)))
    return rows, None


def format_table(rows, truncated_at=None) -> str:
    out = [f"{'n':>3}  H_n"]
    for n, h in rows:
        out.append(f"{n:>3}  {h}")
    if truncated_at is not None:
        out.append(f"... truncated before degree {truncated_at} (time limit)")
    return "\n".join(out)


def cmd_homology(spec: JobSpec):
    rows, trunc = compute_homology(spec)
    doc = export.homology_to_json(spec.field_d, spec.lattice_class_index, spec.weight, spec.group, rows, trunc)
    header = f"integral homology of {spec.group}(L), d={spec.field_d}, lattice {spec.lattice_class_index}"
    _emit(spec, header + "\n" + format_table(rows, trunc), doc)
    return rows


def cmd_classes(spec: JobSpec) -> list[str]:
    cd = load_or_build_complex(spec)
    K = FieldConfig(spec.field_d)
    mu = len(K.torsion_units)
    lines = []
    records = []
    for p in sorted(cd.orbits):
        for idx, c in enumerate(cd.orbits[p]):
            nvec = len(c.rays) * mu
            nperf = len(c.vertices)
            lines.append(f"dim {p}  cell {idx}  |S| = {nvec}  stabilizer order {c.stabilizer.order}"
                         f"  perfect forms in closure {nperf}")
            records.append({"dim": p, "index": idx, "min_vectors": nvec,
                            "stabilizer_order": c.stabilizer.order, "perfect_forms_in_closure": nperf})
    _emit(spec, "\n".join(lines), {"schema_version": export.SCHEMA_VERSION, "kind": "classes",
                                   "field": {"d": spec.field_d}, "group": cd.group_label,
                                   "classes": records})
    return lines


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wellround", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--d", type=int, required=True, help="squarefree integer; negative for imaginary fields")
    ap.add_argument("--lattice", type=int, default=0, help="Steinitz class index (0 = Z_K^2)")
    ap.add_argument("--weight", choices=("phi0", "phi1"), default="phi0")
    ap.add_argument("--group", choices=GROUPS, default="GL")
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--out", default=None, help="write output to this file")
    ap.add_argument("--orientation-seed", type=int, default=0)
    ap.add_argument("--max-seconds", type=float, default=None, help="time cap for homology tables")
    ap.add_argument("-v", "--verbose", action="store_true")
    ap.add_argument("command", choices=("complex", "homology", "classes"))
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    spec = JobSpec(args.d, args.lattice, args.weight, args.group, args.max_degree, args.out,
                   args.format, args.orientation_seed, args.max_seconds)
    try:
        spec.validate()
    except UsageError as e:
        ap.error(str(e))
    {"complex": cmd_complex, "homology": cmd_homology, "classes": cmd_classes}[args.command](spec)
    return 0


if __name__ == "__main__":
    sys.exit(main())
