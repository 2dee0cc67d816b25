"""Exact double description for pointed cones given by integer rays.

Cones here are full dimensional (perfect forms have full rank ray sets), so a
cone is described by its primitive integer facet normals h with h.r >= 0.
Faces are handled as frozensets of ray indices.
"""
from __future__ import annotations

from typing import Sequence

from . import linalg


def _dot(h, r) -> int:
    return sum(a * b for a, b in zip(h, r))


def facets(rays: Sequence[Sequence[int]]) -> list[tuple[tuple[int, ...], frozenset[int]]]:
    """Facet normals of cone(rays) with their incident ray index sets.

    Rays are processed in the given order; the result is sorted by normal.
    """
    rays = [tuple(int(x) for x in r) for r in rays]
    if not rays:
        raise ValueError("no rays")
    n = len(rays[0])
    # initial simplex from the first independent rays
    basis: list[int] = []
    for i, r in enumerate(rays):
        if linalg.rank([rays[j] for j in basis] + [r]) > len(basis):
            basis.append(i)
            if len(basis) == n:
                break
    if len(basis) < n:
        raise ValueError("rays do not span the ambient space")
    Rinv = linalg.inverse([rays[i] for i in basis])
    # column j of R^{-1} is the normal vanishing on all basis rays but the j-th
    normals = [linalg.primitive([Rinv[i][j] for i in range(n)]) for j in range(n)]
    done = list(basis)
    cur = [(h, frozenset(b for b in basis if _dot(h, rays[b]) == 0)) for h in normals]
    for i in range(len(rays)):
        if i in basis:
            continue
        r = rays[i]
        vals = [_dot(h, r) for h, _ in cur]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zero = [k for k, v in enumerate(vals) if v == 0]
        new = [(cur[k][0], cur[k][1]) for k in pos]
        new += [(cur[k][0], cur[k][1] | {i}) for k in zero]
        zsets = [z for _, z in cur]
        for p in pos:
            zp = cur[p][1]
            for q in neg:
                common = zp & cur[q][1]
                if len(common) < n - 2:
                    continue
                if any(common <= z for k, z in enumerate(zsets) if k != p and k != q):
                    continue
                if (linalg.rank([rays[j] for j in common]) if common else 0) != n - 2:
                    continue
                hp, hq = cur[p][0], cur[q][0]
                vp, vq = vals[p], vals[q]
                h = linalg.primitive([vp * b - vq * a for a, b in zip(hp, hq)])
                new.append((h, common | {i}))
        done.append(i)
        cur = new
    # the zero sets above only cover processed rays, which is all of them now
    out = []
    for h, _ in cur:
        z = frozenset(j for j, r in enumerate(rays) if _dot(h, r) == 0)
        out.append((h, z))
    out.sort()
    return out


def face_lattice(facet_sets: Sequence[frozenset[int]], rank_of) -> dict[int, list[frozenset[int]]]:
    """All nonempty faces of a full dimensional cone, grouped by rank.

    ``rank_of(face)`` gives the linear rank of the rays in a face.  Facets of a
    face F are the maximal sets among F & Z over facet sets Z not containing F.
    """
    all_rays = frozenset().union(*facet_sets)
    top_rank = rank_of(all_rays)
    levels: dict[int, list[frozenset[int]]] = {top_rank: [all_rays]}
    rk = top_rank
    current = [all_rays]
    while rk > 1 and current:
        nxt: set[frozenset[int]] = set()
        for F in current:
            nxt.update(sub_facets(F, facet_sets))
        rk -= 1
        nxt = {f for f in nxt if f}
        current = sorted(nxt, key=lambda s: sorted(s))
        for f in current:
            if rank_of(f) != rk:
                raise AssertionError("face lattice is not graded by rank")
        if current:
            levels[rk] = current
    return levels


def sub_facets(F: frozenset[int], facet_sets: Sequence[frozenset[int]]) -> list[frozenset[int]]:
    cands = {F & Z for Z in facet_sets if not F <= Z}
    return [c for c in cands if not any(c < d for d in cands)]
