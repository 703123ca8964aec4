"""Log pairs on simplicial fans and their discrepancy calculus.

A pair is a fan plus one boundary coefficient per ray, each in [0,1).  The
log discrepancy function psi is the piecewise linear function with
psi(v_i) = 1 - d_i: singularity tests, K-equivalence, and divisor
comparison all reduce to exact evaluations of psi.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .circuits import defect, wall_relation
from .errors import InvalidInputError
from .fan import Fan, _rays_inverse, locate, walls
from .lattice import (
    LatticeBasis,
    box_points,
    cofactor_kernel,
    dot,
    mat_inv,
    mat_rank,
    primitive,
    vec_add,
    vec_mat,
)


@dataclass(frozen=True)
class ToricPair:
    fan: Fan
    coeffs: tuple        # boundary coefficient per ray, each in [0,1)
    lattice: LatticeBasis


def make_pair(fan, coeffs, lattice=None):
    if lattice is None:
        lattice = LatticeBasis.standard(fan.dim)
    if lattice.dim != fan.dim:
        raise InvalidInputError("lattice dimension does not match the fan")
    cs = tuple(Fraction(c) for c in coeffs)
    if len(cs) != len(fan.rays):
        raise InvalidInputError("one boundary coefficient per ray required")
    for c in cs:
        if not 0 <= c < 1:
            raise InvalidInputError(f"boundary coefficient {c} outside [0,1)")
    return ToricPair(fan, cs, lattice)


def psi_heights(pair):
    """Heights of the log discrepancy function: 1 - d_i at ray i."""
    return tuple(1 - c for c in pair.coeffs)


def pl_eval(fan, heights, point):
    """Evaluate the piecewise linear interpolation of ray heights at a
    support point."""
    ci, lam = locate(fan, point)
    cone = fan.max_cones[ci]
    return sum(l * Fraction(heights[i]) for l, i in zip(lam, cone))


def _linear_eval(fan, cone, heights, point):
    # the linear extension of the cone's heights, no containment test
    lam = vec_mat(tuple(Fraction(x) for x in point), _rays_inverse(fan.ray_matrix(cone)))
    return sum(l * heights[i] for l, i in zip(lam, cone))


def min_discrepancy_witness(pair):
    """(value, point) minimizing psi over primitive non-ray lattice points
    of the support, or None when no candidate exists.

    The minimum of psi over such points is attained either at a box point
    of some maximal cone or at a pairwise sum of two rays of one cone:
    any lattice point splits as an integer ray combination plus a box
    point, psi is positive on rays, and a non-primitive pair sum rescales
    to a box point of the same cone.
    """
    psi = psi_heights(pair)
    fan = pair.fan
    std = LatticeBasis.standard(fan.dim)
    best = None
    for cone in fan.max_cones:
        rays = fan.ray_matrix(cone)
        for bp in box_points(rays, std):
            val = sum(t * psi[i] for t, i in zip(bp.bary, cone))
            cand = (val, tuple(int(x) for x in bp.point))
            if best is None or cand < best:
                best = cand
        for a, b in combinations(cone, 2):
            w = vec_add(fan.rays[a], fan.rays[b])
            if primitive(w) != w:
                continue
            cand = (psi[a] + psi[b], w)
            if best is None or cand < best:
                best = cand
    return best


def is_terminal(pair):
    """psi > 1 at every primitive lattice point that is not a ray."""
    wit = min_discrepancy_witness(pair)
    return wit is None or wit[0] > 1


def is_canonical(pair):
    """psi >= 1 at every primitive lattice point that is not a ray."""
    wit = min_discrepancy_witness(pair)
    return wit is None or wit[0] >= 1


@lru_cache(maxsize=None)
def _integer_functionals(ray_rows):
    """Primitive integer facet functionals of a simplicial cone, the j-th
    positive on ray j and vanishing on the others."""
    inv = mat_inv(ray_rows)
    n = len(ray_rows)
    return tuple(primitive([inv[i][j] for i in range(n)]) for j in range(n))


def cell_extreme_rays(fan_x, cone_x, fan_y, cone_y):
    """Primitive extreme rays of the intersection of two full-dimensional
    simplicial cones; empty when the intersection is lower-dimensional."""
    n = fan_x.dim
    funcs = _integer_functionals(fan_x.ray_matrix(cone_x))
    funcs += _integer_functionals(fan_y.ray_matrix(cone_y))
    funcs = tuple(dict.fromkeys(funcs))
    found = {}
    for sub in combinations(funcs, n - 1):
        v = cofactor_kernel(sub)
        if all(x == 0 for x in v):
            continue
        signs = [dot(v, f) for f in funcs]
        if all(s >= 0 for s in signs):
            found[primitive(v)] = True
        elif all(s <= 0 for s in signs):
            found[primitive([-x for x in v])] = True
    rays = tuple(found)
    if len(rays) < n or mat_rank(rays) < n:
        return ()
    return tuple(sorted(rays))


def _check_common_footing(pair_x, pair_y):
    if pair_x.lattice != pair_y.lattice:
        raise InvalidInputError("pairs live on different lattices")
    if pair_x.fan.dim != pair_y.fan.dim:
        raise InvalidInputError("pairs have different dimensions")


def _check_supports_equal(fan_x, fan_y, same_rays):
    kx, ky = fan_x.support_kind, fan_y.support_kind
    if "other" in (kx, ky):
        raise InvalidInputError("fan support is neither complete nor a cone")
    if kx != ky:
        raise InvalidInputError("supports differ")
    if kx == "cone-supported" and not same_rays:
        from .fan import in_support

        ok = all(in_support(fan_y, r) for r in fan_x.rays) and all(
            in_support(fan_x, r) for r in fan_y.rays
        )
        if not ok:
            raise InvalidInputError("supports differ")


def k_equivalent(pair_x, pair_y):
    """Do the pairs share rays, coefficients, and log discrepancy function?

    Ray-set or coefficient mismatches return False; psi agreement is then
    decided exactly at the extreme rays of all full-dimensional pairwise
    cone intersections.
    """
    _check_common_footing(pair_x, pair_y)
    fx, fy = pair_x.fan, pair_y.fan
    _check_supports_equal(fx, fy, same_rays=False)
    if dict(zip(fx.rays, pair_x.coeffs)) != dict(zip(fy.rays, pair_y.coeffs)):
        return False
    psix, psiy = psi_heights(pair_x), psi_heights(pair_y)
    for cx in fx.max_cones:
        rx = set(fx.ray_matrix(cx))
        for cy in fy.max_cones:
            if rx == set(fy.ray_matrix(cy)):
                continue  # identical cones carry identical heights
            for e in cell_extreme_rays(fx, cx, fy, cy):
                if _linear_eval(fx, cx, psix, e) != _linear_eval(fy, cy, psiy, e):
                    return False
    return True


def k_compare(pair_x, pair_y):
    """Compare K_X + B against K_Y + C as divisors on a common resolution.

    Returns "equal", "X_ge_Y", "Y_ge_X", or "incomparable".  Higher log
    canonical divisor means lower psi: psi_X <= psi_Y everywhere with a
    strict point reports X_ge_Y.
    """
    _check_common_footing(pair_x, pair_y)
    fx, fy = pair_x.fan, pair_y.fan
    _check_supports_equal(fx, fy, same_rays=False)
    psix, psiy = psi_heights(pair_x), psi_heights(pair_y)
    lt = gt = False
    for cx in fx.max_cones:
        for cy in fy.max_cones:
            for e in cell_extreme_rays(fx, cx, fy, cy):
                a = _linear_eval(fx, cx, psix, e)
                b = _linear_eval(fy, cy, psiy, e)
                lt, gt = lt or a < b, gt or a > b
    for i, r in enumerate(fx.rays):
        a, b = psix[i], pl_eval(fy, psiy, r)
        lt, gt = lt or a < b, gt or a > b
    for i, r in enumerate(fy.rays):
        a, b = pl_eval(fx, psix, r), psiy[i]
        lt, gt = lt or a < b, gt or a > b
    if lt and gt:
        return "incomparable"
    if lt:
        return "X_ge_Y"
    if gt:
        return "Y_ge_X"
    return "equal"


def is_nef(fan, heights):
    """Nonnegative defect across every wall."""
    hs = tuple(Fraction(h) for h in heights)
    if len(hs) != len(fan.rays):
        raise InvalidInputError("one height per ray required")
    return all(defect(wall_relation(fan, w), hs) >= 0 for w in walls(fan))
