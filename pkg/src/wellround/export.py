"""JSON documents for complexes and homology tables.

Rationals are written as "p/q" strings, group elements as 4x4 integer arrays
acting on the Z-basis of the lattice.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any

from .formspace import FormSpace, WeightSpec, sigma_basis_names
from .latiso import MatrixGroup
from .quadfield import FieldConfig, steinitz_lattices
from .voronoi import ID4, BoundaryTerm, CellComplexData, MinimalClass, _perfect

SCHEMA_VERSION = "1.0"


class SchemaError(ValueError):
    pass


def q2s(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def s2q(s: str) -> Fraction:
    return Fraction(s)


def _mat(A) -> list[list[int]]:
    return [list(r) for r in A]


def _unmat(A) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in r) for r in A)


def check_version(doc: dict, kind: str):
    v = str(doc.get("schema_version", ""))
    if v.split(".")[0] != SCHEMA_VERSION.split(".")[0]:
        raise SchemaError(f"unsupported schema version {v!r}")
    if doc.get("kind") != kind:
        raise SchemaError(f"expected a {kind} document, got {doc.get('kind')!r}")


def complex_to_json(cd: CellComplexData, lattice_index: int) -> dict[str, Any]:
    S = cd.space
    K = S.K
    orbits = {}
    for p in sorted(cd.orbits):
        cells = []
        for c in cd.orbits[p]:
            cells.append({
                "dim": c.dim,
                "min_vectors": [list(v) for v in c.vectors],
                "t_form": [q2s(x) for x in c.t_form],
                "barycenter": [q2s(x) for x in c.barycenter],
                "orientation_basis": [[q2s(x) for x in row] for row in c.orient_basis],
                "stabilizer": {
                    "order": c.stabilizer.order,
                    "generators": [_mat(g) for g in c.stabilizer.generators],
                    "elements": [_mat(g) for g in c.stabilizer.elements],
                    "characters": [c.chi[g] for g in c.stabilizer.elements],
                },
                "perfect_forms_in_closure": len(c.vertices),
                "vertices": [{"perfect": j, "element": _mat(g)} for j, g in c.vertices],
                "home": {"perfect": c.home[0], "element": _mat(c.home[1])},
            })
        orbits[str(p)] = cells
    boundaries = {
        str(p): [[{"target": t.target, "sign": t.sign, "element": _mat(t.element)} for t in terms]
                 for terms in cd.boundaries[p]]
        for p in sorted(cd.boundaries)
    }
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "complex",
        "field": {"d": K.squarefree_d, "disc": K.disc},
        "lattice_index": lattice_index,
        "sigma_basis": sigma_basis_names(K),
        "weight": S.weight.kind,
        "group": cd.group_label,
        "orientation_seed": cd.seed,
        "center": [_mat(z) for z in cd.center],
        "perfect_forms": [[q2s(x) for x in P.coords] for P in cd.perfect],
        "counts": cd.counts,
        "orbits": orbits,
        "boundaries": boundaries,
    }


def complex_from_json(doc: dict) -> CellComplexData:
    check_version(doc, "complex")
    K = FieldConfig(int(doc["field"]["d"]))
    L = steinitz_lattices(K)[int(doc["lattice_index"])]
    w = WeightSpec.phi0() if doc["weight"] == "phi0" else WeightSpec.phi1(K)
    S = FormSpace(L, w)
    orbits: dict[int, list[MinimalClass]] = {}
    for p, cells in doc["orbits"].items():
        out = []
        for idx, c in enumerate(cells):
            vecs = [tuple(v) for v in c["min_vectors"]]
            st = c["stabilizer"]
            elems = [_unmat(g) for g in st["elements"]]
            chi = dict(zip(elems, st["characters"]))
            grp = MatrixGroup([_unmat(g) for g in st["generators"]], int(st["order"]), elems)
            out.append(MinimalClass(
                idx, int(c["dim"]), frozenset(S.ev(v) for v in vecs), vecs,
                tuple(s2q(x) for x in c["t_form"]), grp, chi,
                [[s2q(x) for x in row] for row in c["orientation_basis"]],
                tuple(s2q(x) for x in c["barycenter"]),
                [(int(v["perfect"]), _unmat(v["element"])) for v in c.get("vertices", [])],
                (int(c["home"]["perfect"]), _unmat(c["home"]["element"])) if "home" in c else (0, ID4)))
        orbits[int(p)] = out
    boundaries = {
        int(p): [[BoundaryTerm(int(t["target"]), int(t["sign"]), _unmat(t["element"])) for t in terms]
                 for terms in rows]
        for p, rows in doc["boundaries"].items()
    }
    center = tuple(_unmat(z) for z in doc["center"])
    perfect = [_perfect(S, tuple(s2q(x) for x in P)) for P in doc.get("perfect_forms", [])]
    return CellComplexData(S, doc["group"], orbits, boundaries, perfect, center, int(doc.get("orientation_seed", 0)))


def homology_to_json(d: int, lattice_index: int, weight: str, group: str, rows, truncated_at=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "homology",
        "field": {"d": d},
        "lattice_index": lattice_index,
        "weight": weight,
        "group": group,
        "rows": [{"n": n, "torsion": list(h.torsion), "free_rank": h.free_rank, "text": str(h)} for n, h in rows],
        "truncated_at": truncated_at,
    }
