"""Simplicial fan core.

A Fan stores primitive integer rays (in coordinates of whatever lattice the
caller fixed) and its maximal cones as sorted ray-index tuples.  Everything
downstream assumes validity, so construction checks eagerly: `full` runs the
pairwise intersection-is-a-common-face test, `fast` covers the cheaper
invariants that internal surgeries can break (used where the input fan was
already validated and the surgery is proven shape-preserving).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .errors import InvalidInputError
from .lattice import det, dot, mat_inv, mat_rank, primitive, vec_mat
from .linprog import lp_maximize


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple                 # tuple of primitive integer vectors, distinct
    max_cones: tuple            # tuple of sorted index tuples, each of size dim
    support_kind: str           # "complete" | "cone-supported" | "other"

    def ray_matrix(self, cone):
        return tuple(self.rays[i] for i in cone)


class Wall(NamedTuple):
    shared: tuple               # sorted ray indices, size dim-1
    cone_a: int
    cone_b: int
    apex_a: int
    apex_b: int


@lru_cache(maxsize=None)
def _rays_inverse(ray_rows):
    try:
        return mat_inv(ray_rows)
    except ValueError:
        raise InvalidInputError("cone rays are linearly dependent")


def _barycentric(fan, cone, p):
    """Coefficients lam with p = sum lam_i ray_i over the cone, or None if
    any coefficient is negative (p outside the cone)."""
    lam = vec_mat(p, _rays_inverse(fan.ray_matrix(cone)))
    if all(x >= 0 for x in lam):
        return lam
    return None


def _facet_functional(fan, cone, k):
    """Linear form vanishing on cone minus ray k, equal to 1 on ray k."""
    Cinv = _rays_inverse(fan.ray_matrix(cone))
    return tuple(Cinv[i][k] for i in range(fan.dim))


@lru_cache(maxsize=None)
def _facet_map(fan):
    fm = defaultdict(list)
    for ci, cone in enumerate(fan.max_cones):
        for k in range(fan.dim):
            fm[cone[:k] + cone[k + 1:]].append(ci)
    return dict(fm)


def walls(fan):
    """Every interior facet, reported once, with its two cones and apexes."""
    out = []
    for facet, cs in _facet_map(fan).items():
        if len(cs) == 2:
            a, b = cs
            shared = set(facet)
            apex_a = next(i for i in fan.max_cones[a] if i not in shared)
            apex_b = next(i for i in fan.max_cones[b] if i not in shared)
            out.append(Wall(facet, a, b, apex_a, apex_b))
    out.sort(key=lambda w: (w.shared, w.cone_a, w.cone_b))
    return tuple(out)


def is_complete(fan):
    return all(len(cs) == 2 for cs in _facet_map(fan).values())


def _certificate(fan, ca, cb, shared):
    """Cheap soundness certificate that cones ca, cb meet in cone(shared):
    the form -sum of ca's dual functionals off the shared set must be
    strictly positive on cb's non-shared rays."""
    cone_a = fan.max_cones[ca]
    Cinv = _rays_inverse(fan.ray_matrix(cone_a))
    ks = [k for k in range(fan.dim) if cone_a[k] not in shared]
    u = tuple(-sum(Cinv[i][k] for k in ks) for i in range(fan.dim))
    return all(
        dot(u, fan.rays[j]) > 0 for j in fan.max_cones[cb] if j not in shared
    )


def _lp_face_check(fan, ca, cb, shared):
    """Exact decision: do cones ca and cb intersect exactly in the common
    face spanned by their shared rays?  Searches for a separating form u
    with u = 0 on shared rays, u <= -s on ca's others, u >= s on cb's
    others; valid iff max s > 0."""
    n = fan.dim
    A_le, b_le, A_eq, b_eq = [], [], [], []
    for j in shared:
        A_eq.append(list(fan.rays[j]) + [0])
        b_eq.append(0)
    for j in fan.max_cones[ca]:
        if j not in shared:
            A_le.append(list(fan.rays[j]) + [1])
            b_le.append(0)
    for j in fan.max_cones[cb]:
        if j not in shared:
            A_le.append([-x for x in fan.rays[j]] + [1])
            b_le.append(0)
    bounds = [(-1, 1)] * n + [(0, None)]
    opt, _ = lp_maximize([0] * n + [1], A_le, b_le, bounds, A_eq, b_eq)
    return opt > 0


def _check_pairwise_faces(fan):
    m = len(fan.max_cones)
    for ca in range(m):
        sa = set(fan.max_cones[ca])
        for cb in range(ca + 1, m):
            shared = sa.intersection(fan.max_cones[cb])
            if len(shared) == fan.dim - 1:
                continue  # shared facet: the apex side check already ran
            if _certificate(fan, ca, cb, shared):
                continue
            if _certificate(fan, cb, ca, shared):
                continue
            if not _lp_face_check(fan, ca, cb, shared):
                raise InvalidInputError(
                    f"cones {fan.max_cones[ca]} and {fan.max_cones[cb]} "
                    "do not intersect in a common face"
                )


def _wall_graph_connected(n_cones, fm):
    if n_cones <= 1:
        return True
    adj = defaultdict(set)
    for cs in fm.values():
        if len(cs) == 2:
            adj[cs[0]].add(cs[1])
            adj[cs[1]].add(cs[0])
    seen = {0}
    stack = [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n_cones


def make_fan(rays, max_cones, *, validate="full"):
    """Build a Fan after validating it.

    validate: "full" adds the pairwise common-face test on top of the "fast"
    checks (simplicial cones, facet incidence <= 2, apexes on opposite sides
    of each wall, every ray used, primitive distinct rays).
    """
    rays = tuple(tuple(x for x in r) for r in rays)
    if not rays:
        raise InvalidInputError("fan needs at least one ray")
    n = len(rays[0])
    if n < 1:
        raise InvalidInputError("dimension must be >= 1")
    for r in rays:
        if len(r) != n:
            raise InvalidInputError("rays of mixed dimension")
        if any(not isinstance(x, int) for x in r):
            raise InvalidInputError("ray coordinates must be integers")
        if not any(r):
            raise InvalidInputError("zero ray")
        if primitive(r) != r:
            raise InvalidInputError(f"ray {r} is not primitive")
    if len(set(rays)) != len(rays):
        raise InvalidInputError("duplicate rays")

    cones = []
    for c in max_cones:
        c = tuple(sorted(c))
        if len(c) != n or len(set(c)) != n:
            raise InvalidInputError("maximal cones must have dim distinct rays")
        if any(not (0 <= i < len(rays)) for i in c):
            raise InvalidInputError("cone ray index out of range")
        cones.append(c)
    if not cones:
        raise InvalidInputError("fan needs at least one maximal cone")
    if len(set(cones)) != len(cones):
        raise InvalidInputError("duplicate maximal cones")
    cones = tuple(cones)

    used = set()
    for c in cones:
        used.update(c)
    if used != set(range(len(rays))):
        raise InvalidInputError("fan has unused rays")

    for c in cones:
        if det(tuple(rays[i] for i in c)) == 0:
            raise InvalidInputError(f"cone {c} is not simplicial")

    fm = defaultdict(list)
    for ci, c in enumerate(cones):
        for k in range(n):
            fm[c[:k] + c[k + 1:]].append(ci)
    for facet, cs in fm.items():
        if len(cs) > 2:
            raise InvalidInputError(f"facet {facet} shared by more than two cones")

    # provisional fan for functional helpers; support kind fixed below
    provisional = Fan(n, rays, cones, "other")

    for facet, cs in fm.items():
        if len(cs) == 2:
            ca, cb = cs
            shared = set(facet)
            k = next(k for k in range(n) if cones[ca][k] not in shared)
            u = _facet_functional(provisional, cones[ca], k)
            apex_b = next(i for i in cones[cb] if i not in shared)
            if dot(u, rays[apex_b]) >= 0:
                raise InvalidInputError(
                    f"cones {cones[ca]} and {cones[cb]} lie on the same side "
                    f"of their shared facet {facet}"
                )

    if all(len(cs) == 2 for cs in fm.values()):
        kind = "complete"
    else:
        kind = "cone-supported"
        if not _wall_graph_connected(len(cones), fm):
            kind = "other"
        else:
            for facet, cs in fm.items():
                if len(cs) != 1:
                    continue
                ci = cs[0]
                shared = set(facet)
                k = next(k for k in range(n) if cones[ci][k] not in shared)
                u = _facet_functional(provisional, cones[ci], k)
                if any(dot(u, r) < 0 for r in rays):
                    kind = "other"
                    break

    fan = Fan(n, rays, cones, kind)
    if validate == "full":
        _check_pairwise_faces(fan)
    elif validate != "fast":
        raise InvalidInputError(f"unknown validation level {validate!r}")
    return fan


def locate(fan, p):
    """(cone index, barycentric coordinates) of the first maximal cone
    containing p.  Raises if p is outside the support."""
    p = tuple(Fraction(x) for x in p)
    if len(p) != fan.dim:
        raise InvalidInputError("point dimension mismatch")
    for ci, cone in enumerate(fan.max_cones):
        lam = _barycentric(fan, cone, p)
        if lam is not None:
            return ci, lam
    raise InvalidInputError(f"point {p} outside the fan support")


def in_support(fan, p):
    p = tuple(Fraction(x) for x in p)
    return any(_barycentric(fan, c, p) is not None for c in fan.max_cones)


def star_subdivision(fan, w):
    """Insert primitive(w) as a new ray; every maximal cone containing it is
    replaced by the joins of w with its facets not containing w."""
    wp = primitive(w)
    if wp in fan.rays:
        raise InvalidInputError(f"{wp} is already a ray")
    wf = tuple(Fraction(x) for x in wp)
    kept, split = [], []
    for cone in fan.max_cones:
        lam = _barycentric(fan, cone, wf)
        if lam is None:
            kept.append(cone)
        else:
            split.append((cone, lam))
    if not split:
        raise InvalidInputError(f"{wp} is outside the fan support")
    w_idx = len(fan.rays)
    new_cones = list(kept)
    for cone, lam in split:
        for k in range(fan.dim):
            if lam[k] > 0:
                new_cones.append(tuple(sorted(cone[:k] + cone[k + 1:] + (w_idx,))))
    return make_fan(fan.rays + (wp,), new_cones, validate="fast")


def fans_equal(f1, f2):
    """Equal ray sets (as vectors) and equal cone sets under the induced
    ray re-indexing."""
    if f1.dim != f2.dim or len(f1.rays) != len(f2.rays):
        return False
    if set(f1.rays) != set(f2.rays):
        return False
    to2 = {i: f2.rays.index(r) for i, r in enumerate(f1.rays)}
    cones1 = {tuple(sorted(to2[i] for i in c)) for c in f1.max_cones}
    return cones1 == set(f2.max_cones)


def boundary_functionals(fan):
    """Inward functionals of the boundary facets (deduplicated)."""
    out = []
    for facet, cs in _facet_map(fan).items():
        if len(cs) != 1:
            continue
        cone = fan.max_cones[cs[0]]
        shared = set(facet)
        k = next(k for k in range(fan.dim) if cone[k] not in shared)
        u = _facet_functional(fan, cone, k)
        scaled = primitive(u)
        if scaled not in out:
            out.append(scaled)
    return tuple(out)


def support_cone_rays(fan):
    """Extreme rays of the support cone of a cone-supported fan."""
    if fan.support_kind != "cone-supported":
        raise InvalidInputError("fan support is not a strictly convex cone")
    fns = boundary_functionals(fan)
    out = []
    for ray in fan.rays:
        vanishing = [u for u in fns if dot(u, ray) == 0]
        if mat_rank(vanishing) == fan.dim - 1:
            out.append(ray)
    return tuple(out)


def point_in_cone(p, gens):
    """Is p a nonnegative rational combination of the generator vectors?"""
    p = tuple(Fraction(x) for x in p)
    n = len(p)
    if len(gens) == n and det(tuple(gens)) != 0:
        lam = vec_mat(p, _rays_inverse(tuple(tuple(g) for g in gens)))
        return all(x >= 0 for x in lam)
    from .linprog import lp_feasible

    A_eq = [[Fraction(g[j]) for g in gens] for j in range(n)]
    return lp_feasible([], [], [(0, None)] * len(gens), A_eq, list(p))
