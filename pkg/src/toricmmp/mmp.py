"""Exact minimal model surgery on simplicial fans.

Four engines share the wall calculus: regular triangulation by placing and
flipping, decomposition of a K-equivalence into a flop sequence driven by a
pencil of height functions, the relative MMP over an affine base, and
terminalization by repeated discrepancy-one-or-less extractions.  All
scheduling ties are broken by a symbolic infinitesimal perturbation or by
explicit lexicographic rules, so every run is deterministic.
"""

from fractions import Fraction
from typing import NamedTuple

from .circuits import classify, defect, wall_relation
from .errors import (
    BudgetExceededError,
    EngineInvariantError,
    InvalidInputError,
    NonProjectiveError,
    NotKEquivalentError,
)
from .fan import (
    _facet_functional,
    _facet_map,
    fans_equal,
    in_support,
    make_fan,
    point_in_cone,
    star_subdivision,
    walls,
)
from .lattice import LatticeBasis, dot, mat_rank, primitive
from .linprog import lp_maximize
from .pairs import k_equivalent, make_pair, min_discrepancy_witness, psi_heights


class FlopStep(NamedTuple):
    wall: tuple              # shared ray vectors of a crossing wall
    circuit: tuple           # the n+1 circuit ray vectors
    coeffs: tuple            # relation coefficients, aligned with circuit
    event_time: Fraction     # crossing time of the unperturbed pencil
    k_defect_check: Fraction  # discrepancy defect at the event, always 0


class MmpStep(NamedTuple):
    kind: str                # "flip" | "divisorial"
    wall: tuple              # shared ray vectors
    circuit: tuple
    coeffs: tuple
    defect: Fraction         # discrepancy defect that triggered the step
    removed_ray: tuple | None
    center: tuple | None     # ray vectors spanning the contraction center


class ExtractionStep(NamedTuple):
    ray: tuple
    psi_value: Fraction      # log discrepancy of the extracted valuation


# ------------------------------------------------------------ projectivity


def ample_heights(fan):
    """Heights strictly convex across every wall, found by maximizing the
    worst wall defect inside the unit box.  Raises NonProjectiveError when
    only flat-or-worse height functions exist."""
    ws = walls(fan)
    n_rays = len(fan.rays)
    if not ws:
        return (Fraction(0),) * n_rays
    rows = []
    for w in ws:
        rel = wall_relation(fan, w)
        row = [Fraction(0)] * (n_rays + 1)
        for i, a in zip(rel.ray_indices, rel.coeffs):
            row[i] -= a
        row[n_rays] = Fraction(1)
        rows.append(row)  # t - defect_w(h) <= 0
    objective = [Fraction(0)] * n_rays + [Fraction(1)]
    bounds = [(-1, 1)] * n_rays + [(0, 1)]
    opt, x = lp_maximize(objective, rows, [0] * len(rows), bounds)
    if opt <= 0:
        raise NonProjectiveError("no strictly convex height function exists")
    return tuple(x[:n_rays])


def _checked_convex_heights(fan, given, label):
    if given is None:
        return ample_heights(fan)
    hs = tuple(Fraction(h) for h in given)
    if len(hs) != len(fan.rays):
        raise InvalidInputError(f"{label}: one height per ray required")
    for w in walls(fan):
        if defect(wall_relation(fan, w), hs) <= 0:
            raise InvalidInputError(f"{label}: heights are not strictly convex")
    return hs


# -------------------------------------------------------------- surgeries


def _flip_replacement(fan, rel):
    """Max cones after the bistellar move across rel, or None when some
    plus-side cone of the circuit is missing (circuit not isolated)."""
    circ = set(rel.ray_indices)
    plus = {tuple(sorted(circ - {i})) for i in rel.s_plus}
    present = set(fan.max_cones)
    if not plus <= present:
        return None
    minus = [tuple(sorted(circ - {j})) for j in rel.s_minus]
    return [c for c in fan.max_cones if c not in plus] + minus


def bistellar_flip(fan, wall):
    """Replace the plus-side cones of the wall circuit by the minus side.

    The wall must be of flipping type and its circuit isolated: every cone
    spanned by the circuit minus one plus-ray is present in the fan.
    """
    rel = wall_relation(fan, wall)
    if classify(rel).kind != "flipping":
        raise InvalidInputError("wall is not of flipping type")
    cones = _flip_replacement(fan, rel)
    if cones is None:
        raise InvalidInputError("wall circuit is not isolated")
    return make_fan(fan.rays, cones, validate="fast")


def _contracted_fan(fan, rel, j):
    """Fan after removing ray j of a divisorial circuit, or None when the
    star of j is not exactly the plus side of the circuit."""
    circ = set(rel.ray_indices)
    star = {c for c in fan.max_cones if j in c}
    plus = {tuple(sorted(circ - {i})) for i in rel.s_plus}
    if star != plus:
        return None

    def shift(i):
        return i if i < j else i - 1

    cones = [
        tuple(sorted(shift(i) for i in c)) for c in fan.max_cones if j not in c
    ]
    cones.append(tuple(sorted(shift(i) for i in circ - {j})))
    rays = fan.rays[:j] + fan.rays[j + 1:]
    return make_fan(rays, cones, validate="fast")


def divisorial_contract(fan, wall):
    """Contract the unique negative ray of a divisorial wall circuit.

    Returns (fan, removed_ray, center_rays) where center_rays spans the
    face the removed divisor maps onto.
    """
    rel = wall_relation(fan, wall)
    kind = classify(rel)
    if kind.kind != "divisorial":
        raise InvalidInputError("wall is not of divisorial type")
    j = kind.ray
    out = _contracted_fan(fan, rel, j)
    if out is None:
        raise InvalidInputError("star of the contracted ray does not match the circuit")
    center = tuple(fan.rays[i] for i in sorted(rel.s_plus + rel.s_zero))
    return out, fan.rays[j], center


# ------------------------------------------------- regular triangulation


def _insert_ray(fan, r):
    """Place one ray: star subdivision inside the support, joins to all
    visible boundary facets outside it."""
    if in_support(fan, r):
        return star_subdivision(fan, r)
    new_idx = len(fan.rays)
    added = []
    for facet, cs in _facet_map(fan).items():
        if len(cs) != 1:
            continue
        cone = fan.max_cones[cs[0]]
        k = next(k for k in range(fan.dim) if cone[k] not in facet)
        u = _facet_functional(fan, cone, k)
        if dot(u, r) < 0:
            added.append(tuple(sorted(facet + (new_idx,))))
    if not added:
        raise EngineInvariantError("outside ray sees no boundary facet")
    return make_fan(fan.rays + (r,), list(fan.max_cones) + added, validate="fast")


def _negative_walls(fan, hmap):
    hs = tuple(hmap[v] for v in fan.rays)
    out = []
    for w in walls(fan):
        rel = wall_relation(fan, w)
        d = defect(rel, hs)
        if d < 0:
            key = tuple(sorted(fan.rays[i] for i in w.shared))
            out.append((d, key, w, rel))
    out.sort(key=lambda e: (e[0], e[1]))
    return out


def _flips_to_convexity(fan, hmap, budget, focus):
    """Flip away negative-defect walls, most negative first.  With a focus
    ray only circuits through it are touched; stalled walls are left for
    the global pass."""
    while True:
        cands = _negative_walls(fan, hmap)
        if focus is not None:
            cands = [
                e for e in cands
                if focus in tuple(fan.rays[i] for i in e[3].ray_indices)
            ]
        if not cands:
            return fan, budget
        progressed = False
        for _, _, w, rel in cands:
            kind = classify(rel)
            if kind.kind == "divisorial":
                raise InvalidInputError(
                    f"ray {fan.rays[kind.ray]} is not on the lower hull"
                )
            if kind.kind == "fiber":
                raise InvalidInputError(
                    "fiber-type wall: heights have no lower hull over this support"
                )
            cones = _flip_replacement(fan, rel)
            if cones is None:
                continue
            if budget == 0:
                raise BudgetExceededError("flip budget exhausted")
            budget -= 1
            fan = make_fan(fan.rays, cones, validate="fast")
            progressed = True
            break
        if not progressed:
            if focus is not None:
                return fan, budget
            raise EngineInvariantError("negative wall stuck with non-isolated circuit")


def regular_triangulation(rays, heights, lattice=None):
    """Triangulate the cone over the rays along the lower hull of the
    lifted heights, by incremental placing and flips to convexity."""
    rays = tuple(tuple(x) for x in rays)
    if not rays:
        raise InvalidInputError("no rays given")
    dim = len(rays[0])
    if lattice is None:
        lattice = LatticeBasis.standard(dim)
    if lattice.dim != dim:
        raise InvalidInputError("lattice dimension does not match the rays")
    if len(set(rays)) != len(rays):
        raise InvalidInputError("duplicate ray")
    for r in rays:
        if len(r) != dim or any(not isinstance(x, int) for x in r):
            raise InvalidInputError("rays must be integer vectors of equal length")
        if primitive(r) != r:
            raise InvalidInputError(f"ray {r} is not primitive")
    hs = tuple(Fraction(h) for h in heights)
    if len(hs) != len(rays):
        raise InvalidInputError("one height per ray required")

    seed = []
    for i, r in enumerate(rays):
        if mat_rank([rays[k] for k in seed] + [r]) == len(seed) + 1:
            seed.append(i)
        if len(seed) == dim:
            break
    if len(seed) < dim:
        raise InvalidInputError("rays do not span the ambient space")

    hmap = dict(zip(rays, hs))
    budget = 10 * len(rays) ** 2
    fan = make_fan([rays[i] for i in seed], [tuple(range(dim))], validate="fast")
    for i in (k for k in range(len(rays)) if k not in seed):
        fan = _insert_ray(fan, rays[i])
        fan, budget = _flips_to_convexity(fan, hmap, budget, focus=rays[i])
    fan, budget = _flips_to_convexity(fan, hmap, budget, focus=None)

    final_hs = tuple(hmap[v] for v in fan.rays)
    for w in walls(fan):
        if defect(wall_relation(fan, w), final_hs) == 0:
            raise InvalidInputError("heights are not generic: flat wall at convergence")
    pos = {v: k for k, v in enumerate(rays)}
    cones = [tuple(sorted(pos[fan.rays[i]] for i in c)) for c in fan.max_cones]
    return make_fan(rays, cones, validate="fast")


# ------------------------------------------------------ symbolic epsilon


class EpsPoly:
    """Polynomial in one positive infinitesimal with Fraction coefficients,
    constant term first, ordered by the sign of the lowest nonzero term."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        cs = [Fraction(x) for x in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.c = tuple(cs)

    def _get(self, i):
        return self.c[i] if i < len(self.c) else Fraction(0)

    @property
    def const_term(self):
        return self._get(0)

    def __add__(self, other):
        o = other if isinstance(other, EpsPoly) else EpsPoly((other,))
        n = max(len(self.c), len(o.c))
        return EpsPoly([self._get(i) + o._get(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return EpsPoly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-(other if isinstance(other, EpsPoly) else EpsPoly((other,))))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = other if isinstance(other, EpsPoly) else EpsPoly((other,))
        if not self.c or not o.c:
            return EpsPoly()
        out = [Fraction(0)] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(o.c):
                out[i + j] += a * b
        return EpsPoly(out)

    __rmul__ = __mul__

    def sign(self):
        for x in self.c:
            if x:
                return 1 if x > 0 else -1
        return 0

    def __eq__(self, other):
        o = other if isinstance(other, EpsPoly) else EpsPoly((other,))
        return self.c == o.c

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __repr__(self):
        return f"EpsPoly({self.c})"


# ---------------------------------------------------------- flop sweeper


def flop_decompose(pair_x, pair_y, ample_x=None, ample_y=None):
    """Decompose a K-equivalence into the flop sequence swept out by the
    pencil between ample height functions of the two fans.

    Ties are collapsed by an infinitesimal lexicographic perturbation of
    the target heights, so each event is a single circuit.  Returns the
    tuple of FlopStep records; replaying their circuits on the first fan
    reproduces the second.
    """
    if not k_equivalent(pair_x, pair_y):
        raise NotKEquivalentError("pairs are not K-equivalent")
    fx, fy = pair_x.fan, pair_y.fan
    n_rays = len(fx.rays)
    h0 = _checked_convex_heights(fx, ample_x, "ampleX")
    h1_y = _checked_convex_heights(fy, ample_y, "ampleY")
    pos_y = {v: i for i, v in enumerate(fy.rays)}
    h1 = tuple(h1_y[pos_y[v]] for v in fx.rays)
    # target heights with the symbolic tie-breaker on ray i at eps^(i+1)
    pert = [EpsPoly((h1[i],) + (0,) * i + (1,)) for i in range(n_rays)]
    psi = psi_heights(pair_x)

    cur = fx
    steps = []
    budget = 10 * n_rays * n_rays
    while True:
        events = []
        for w in walls(cur):
            rel = wall_relation(cur, w)
            d1 = EpsPoly()
            for i, a in zip(rel.ray_indices, rel.coeffs):
                d1 = d1 + a * pert[i]
            if d1.sign() >= 0:
                continue  # never crosses zero before the target
            d0 = Fraction(defect(rel, h0))
            if d0 <= 0:
                raise EngineInvariantError("wall defect nonpositive before its event")
            events.append((d0, d0 - d1, w, rel))
        if not events:
            break
        # crossing time d0/(d0-d1): minimize by exact cross-multiplication
        best = None
        for ev in events:
            if best is None or ev[0] * best[1] < best[0] * ev[1]:
                best = ev
        tied = [ev for ev in events if ev[0] * best[1] == best[0] * ev[1]]
        signatures = {
            (tuple(cur.rays[i] for i in ev[3].ray_indices), ev[3].coeffs)
            for ev in tied
        }
        if len(signatures) > 1:
            raise EngineInvariantError("simultaneous events on distinct circuits")
        d0, q, w, rel = best
        k_defect = Fraction(defect(rel, psi))
        if k_defect != 0:
            raise EngineInvariantError(
                f"event wall has discrepancy defect {k_defect}, expected 0"
            )
        if classify(rel).kind != "flipping":
            raise EngineInvariantError(
                "event wall is not of flipping type: "
                "inputs are not isomorphic in codimension one"
            )
        cones = _flip_replacement(cur, rel)
        if cones is None:
            raise EngineInvariantError("event circuit is not isolated")
        if budget == 0:
            raise BudgetExceededError("flop step budget exhausted")
        budget -= 1
        event_time = d0 / q.const_term
        if not 0 < event_time < 1:
            raise EngineInvariantError(f"event time {event_time} outside (0,1)")
        steps.append(
            FlopStep(
                wall=tuple(cur.rays[i] for i in w.shared),
                circuit=tuple(cur.rays[i] for i in rel.ray_indices),
                coeffs=rel.coeffs,
                event_time=event_time,
                k_defect_check=k_defect,
            )
        )
        cur = make_fan(cur.rays, cones, validate="fast")
    if not fans_equal(cur, fy):
        raise EngineInvariantError("sweep exhausted before reaching the target fan")
    return tuple(steps)


# ------------------------------------------------------------ relative MMP


def relative_mmp(pair, base):
    """Run the (K+B)-MMP of a pair whose fan triangulates the cone over
    base.  Executes the positive-discrepancy-defect wall of largest defect
    each round (ties by smallest apex ray pair, skipping non-extremal
    walls) until K+B is nef over the base.  Returns (pair, steps)."""
    fan = pair.fan
    if fan.support_kind != "cone-supported":
        raise InvalidInputError("relative MMP needs a fan supported on a strictly convex cone")
    base = tuple(primitive(b) for b in base)
    if len(set(base)) != len(base):
        raise InvalidInputError("duplicate base generator")
    for b in base:
        if not in_support(fan, b):
            raise InvalidInputError("base cone exceeds the fan support")
    for r in fan.rays:
        if not point_in_cone(r, base):
            raise InvalidInputError("fan support exceeds the base cone")

    cur = pair
    steps = []
    budget = 10 * len(fan.rays) ** 2
    while True:
        psi = psi_heights(cur)
        cands = []
        for w in walls(cur.fan):
            rel = wall_relation(cur.fan, w)
            d = defect(rel, psi)
            if d > 0:
                apexes = tuple(sorted((cur.fan.rays[w.apex_a], cur.fan.rays[w.apex_b])))
                cands.append((-d, apexes, w, rel))
        if not cands:
            break
        cands.sort(key=lambda e: (e[0], e[1]))
        if budget == 0:
            raise BudgetExceededError("step budget exhausted")
        budget -= 1
        executed = None
        for neg_d, _, w, rel in cands:
            kind = classify(rel)
            if kind.kind == "fiber":
                raise InvalidInputError(
                    "fiber-type wall with positive defect: "
                    "the pair is not birational over this base"
                )
            wall_rays = tuple(cur.fan.rays[i] for i in w.shared)
            circuit = tuple(cur.fan.rays[i] for i in rel.ray_indices)
            if kind.kind == "divisorial":
                new_fan = _contracted_fan(cur.fan, rel, kind.ray)
                if new_fan is None:
                    continue
                removed = cur.fan.rays[kind.ray]
                center = tuple(
                    cur.fan.rays[i] for i in sorted(rel.s_plus + rel.s_zero)
                )
                coeffs = tuple(
                    c for i, c in enumerate(cur.coeffs) if i != kind.ray
                )
                executed = MmpStep(
                    "divisorial", wall_rays, circuit, rel.coeffs, -neg_d, removed, center
                )
                cur = make_pair(new_fan, coeffs, cur.lattice)
                break
            cones = _flip_replacement(cur.fan, rel)
            if cones is None:
                continue
            executed = MmpStep(
                "flip", wall_rays, circuit, rel.coeffs, -neg_d, None, None
            )
            cur = make_pair(
                make_fan(cur.fan.rays, cones, validate="fast"), cur.coeffs, cur.lattice
            )
            break
        if executed is None:
            raise EngineInvariantError("no executable wall among positive defects")
        steps.append(executed)
    return cur, tuple(steps)


# ---------------------------------------------------------- terminalize


def terminalize(pair):
    """Extract every valuation of log discrepancy at most one, worst
    first, assigning the new rays coefficient zero.  Returns (pair, steps)."""
    cur = pair
    steps = []
    budget = 10 * len(pair.fan.rays) ** 2
    while True:
        wit = min_discrepancy_witness(cur)
        if wit is None or wit[0] > 1:
            break
        if budget == 0:
            raise BudgetExceededError("extraction budget exhausted")
        budget -= 1
        val, pt = wit
        w = primitive(pt)
        steps.append(ExtractionStep(ray=w, psi_value=val))
        cur = make_pair(
            star_subdivision(cur.fan, w), cur.coeffs + (Fraction(0),), cur.lattice
        )
    return cur, tuple(steps)
