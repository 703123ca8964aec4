"""Abelian quotient singularities and their rank ledgers.

A finite abelian subgroup of the torus acting on affine space is encoded
by cyclic generators (1/r)(w_1..w_n).  The quotient is the orthant cone in
the overlattice N generated by the weight vectors; the pipeline
terminalizes, drops the quasi-reflection boundary, runs the relative MMP,
and records one ledger entry per step with the exact stack-rank change.
The ranks telescope: the order of the acting group equals the rank of the
final model plus the total rank spent along the way.
"""

from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .errors import EngineInvariantError, InvalidInputError
from .fan import fans_equal, make_fan, star_subdivision, walls
from .lattice import (
    LatticeBasis,
    det,
    mat_identity,
    mat_inv,
    primitive,
    smith_normal_form,
    vec_mat,
    vec_scale,
)
from .mmp import bistellar_flip, divisorial_contract, relative_mmp, terminalize
from .pairs import make_pair


class GroupData(NamedTuple):
    n: int
    gens: tuple    # ((r, weights), ...) acting by x_i -> zeta_r^{w_i} x_i


class LedgerEntry(NamedTuple):
    kind: str                # "extraction" | "coefficient_drop" | "flip" | "divisorial"
    ray: tuple               # extracted / dropped / removed ray, or the flip locus
    center: tuple            # ray indices of the smallest orthant face met by the locus
    rank_before: int
    rank_after: int
    psi_value: Fraction | None   # log discrepancy of an extraction
    components: tuple | None     # residue labels counted by a coefficient drop


class McKayReport(NamedTuple):
    group: GroupData
    order: int               # order of the acting image, the index [N : Z^n]
    sl: bool
    quotient: object         # ToricPair of the quotient
    resolution: object       # ToricPair after the full pipeline, boundary-free
    ledger: tuple
    rank_quotient: int
    rank_resolution: int


def make_group(n, gens):
    if not isinstance(n, int) or n < 1:
        raise InvalidInputError("group dimension must be a positive integer")
    out = []
    for g in gens:
        r, weights = g
        if not isinstance(r, int) or r < 1:
            raise InvalidInputError("generator order must be a positive integer")
        ws = tuple(int(w) % r for w in weights)
        if len(ws) != n:
            raise InvalidInputError("one weight per coordinate required")
        out.append((r, ws))
    return GroupData(n, tuple(out))


def group_lattice(G):
    """The overlattice Z^n + sum Z (1/r)(w_1..w_n), as a canonical basis."""
    rows = [tuple(row) for row in mat_identity(G.n)]
    for r, ws in G.gens:
        rows.append(tuple(Fraction(w, r) for w in ws))
    return LatticeBasis.from_rows(rows)


def group_order(G):
    order = 1 / group_lattice(G).determinant
    if order.denominator != 1:
        raise EngineInvariantError("lattice index is not an integer")
    return int(order)


def is_sl(G):
    return all(sum(ws) % r == 0 for r, ws in G.gens)


def quotient_pair(G):
    """The quotient orthant as a pair: rays are the primitivized axis
    images e_i / m_i, each carrying coefficient 1 - 1/m_i, where m_i is
    the order of the quasi-reflection subgroup along axis i."""
    B = group_lattice(G)
    rays = []
    mults = []
    for i in range(G.n):
        e = tuple(int(i == j) for j in range(G.n))
        coords = B.coords(e)
        if any(x.denominator != 1 for x in coords):
            raise EngineInvariantError("unit vector escaped its own overlattice")
        ints = [int(x) for x in coords]
        m = gcd(*ints)
        rays.append(tuple(x // m for x in ints))
        mults.append(m)
    fan = make_fan(rays, [tuple(range(G.n))], validate="full")
    coeffs = [Fraction(m - 1, m) for m in mults]
    return make_pair(fan, coeffs, B)


def _standard_multiplicities(pair):
    ms = []
    for d in pair.coeffs:
        m = 1 / (1 - Fraction(d))
        if m.denominator != 1:
            raise InvalidInputError(
                f"coefficient {d} is not of the standard form 1 - 1/m"
            )
        ms.append(int(m))
    return ms


def stack_rank(pair):
    """Sum of maximal-cone multiplicities in the stack lattice spanned by
    m_i * v_i; equals the group order for a quotient pair."""
    ms = _standard_multiplicities(pair)
    fan = pair.fan
    total = 0
    for cone in fan.max_cones:
        rows = [vec_scale(ms[i], fan.rays[i]) for i in cone]
        total += abs(det(rows))
    return total


def case_a_components(r1, s1):
    """Residues 1..r1-1 surviving the floor-multiple sieve of s1; there
    are exactly r1 - s1 of them."""
    if not (isinstance(r1, int) and isinstance(s1, int) and 1 <= s1 <= r1):
        raise InvalidInputError("need integers 1 <= s1 <= r1")
    excluded = {(k * r1) // s1 for k in range(1, s1)}
    return tuple(l for l in range(1, r1) if l not in excluded)


def boundary_divisor_pair(pair, ray_index):
    """Restrict a single-cone local model to the boundary divisor of one
    ray: quotient the lattice by that ray, primitivize the other ray
    images, and fold each imprimitivity index c into the coefficient
    1 - 1/(c*m)."""
    fan = pair.fan
    if len(fan.max_cones) != 1:
        raise InvalidInputError("expected a single-cone local model")
    if not 0 <= ray_index < len(fan.rays):
        raise InvalidInputError("ray index out of range")
    ms = _standard_multiplicities(pair)
    v = fan.rays[ray_index]
    _, u, V = smith_normal_form((v,))
    sign = u[0][0]
    # v.V = sign * e_1; dropping the first coordinate of x.V realizes N/Zv
    imgs = []
    coeffs = []
    for i in fan.max_cones[0]:
        if i == ray_index:
            continue
        x = vec_mat(fan.rays[i], V)[1:]
        c = gcd(*x)
        imgs.append(tuple(xx // c for xx in x))
        coeffs.append(1 - Fraction(1, c * ms[i]))
    newfan = make_fan(imgs, [tuple(range(fan.dim - 1))], validate="full")
    return make_pair(newfan, coeffs, LatticeBasis.standard(fan.dim - 1))


# ------------------------------------------------------------- pipeline


def _center_map(quotient):
    rays = quotient.fan.rays
    inv = mat_inv(rays)

    def center_of(x):
        lam = vec_mat(tuple(Fraction(v) for v in x), inv)
        if any(l < 0 for l in lam):
            raise EngineInvariantError("step locus escapes the quotient cone")
        return tuple(i for i, l in enumerate(lam) if l > 0)

    return center_of


def _wall_by_vectors(fan, shared_vecs):
    target = set(shared_vecs)
    for w in walls(fan):
        if {fan.rays[i] for i in w.shared} == target:
            return w
    raise EngineInvariantError("recorded wall not present during replay")


def _checked_entry(kind, ray, center, before, after, psi=None, components=None):
    if after > before:
        raise EngineInvariantError(f"stack rank increased across a {kind} step")
    if psi == 1 and before != after:
        raise EngineInvariantError("crepant extraction changed the stack rank")
    return LedgerEntry(kind, ray, center, before, after, psi, components)


def mckay_pipeline(G):
    """Terminalize the quotient, drop the quasi-reflection boundary, run
    the relative MMP over the quotient cone, and account for every unit of
    group order in the ledger."""
    X = quotient_pair(G)
    order = group_order(G)
    rank_x = stack_rank(X)
    if rank_x != order:
        raise EngineInvariantError("stack rank of the quotient misses the group order")
    center_of = _center_map(X)
    ledger = []

    work = X
    terminal, ext_steps = terminalize(X)
    for st in ext_steps:
        nxt = make_pair(
            star_subdivision(work.fan, st.ray),
            work.coeffs + (Fraction(0),),
            work.lattice,
        )
        ledger.append(
            _checked_entry(
                "extraction", st.ray, center_of(st.ray),
                stack_rank(work), stack_rank(nxt), psi=st.psi_value,
            )
        )
        work = nxt
    if not fans_equal(work.fan, terminal.fan):
        raise EngineInvariantError("extraction replay diverged")

    for i in range(len(work.fan.rays)):
        if work.coeffs[i] == 0:
            continue
        m = _standard_multiplicities(work)[i]
        coeffs = work.coeffs[:i] + (Fraction(0),) + work.coeffs[i + 1:]
        nxt = make_pair(work.fan, coeffs, work.lattice)
        ray = work.fan.rays[i]
        ledger.append(
            _checked_entry(
                "coefficient_drop", ray, center_of(ray),
                stack_rank(work), stack_rank(nxt),
                components=case_a_components(m, 1),
            )
        )
        work = nxt

    final, msteps = relative_mmp(work, X.fan.rays)
    for st in msteps:
        w = _wall_by_vectors(work.fan, st.wall)
        if st.kind == "flip":
            locus = (0,) * work.fan.dim
            for vec, a in zip(st.circuit, st.coeffs):
                if a < 0:
                    locus = tuple(l + x for l, x in zip(locus, vec))
            nxt = make_pair(
                bistellar_flip(work.fan, w), work.coeffs, work.lattice
            )
            entry_ray = primitive(locus)
            kind = "flip"
        else:
            fan2, removed, _ = divisorial_contract(work.fan, w)
            j = work.fan.rays.index(removed)
            nxt = make_pair(
                fan2, work.coeffs[:j] + work.coeffs[j + 1:], work.lattice
            )
            entry_ray = removed
            kind = "divisorial"
        ledger.append(
            _checked_entry(
                kind, entry_ray, center_of(entry_ray),
                stack_rank(work), stack_rank(nxt),
            )
        )
        work = nxt
    if not fans_equal(work.fan, final.fan):
        raise EngineInvariantError("minimal model replay diverged")

    rank_y = stack_rank(final)
    spent = sum(e.rank_before - e.rank_after for e in ledger)
    if rank_y + spent != order:
        raise EngineInvariantError("rank ledger does not telescope to the group order")
    return McKayReport(
        group=G,
        order=order,
        sl=is_sl(G),
        quotient=X,
        resolution=final,
        ledger=tuple(ledger),
        rank_quotient=rank_x,
        rank_resolution=rank_y,
    )


# --------------------------------------------------- dimension-two chains


def hj_resolution(r, a):
    """Resolution fan of the cyclic surface quotient (1/r)(1, a) from the
    boundary lattice points of its Newton polygon, with the chain of
    self-intersection numbers -b_i read off the consecutive relations
    v_{i-1} + v_{i+1} = b_i v_i."""
    if not (isinstance(r, int) and isinstance(a, int)):
        raise InvalidInputError("need integer parameters")
    if not (0 < a < r) or gcd(r, a) != 1:
        raise InvalidInputError("need 0 < a < r with gcd(r, a) = 1")
    G = make_group(2, [(r, (1, a))])
    B = group_lattice(G)
    pts = {(Fraction(k, r), Fraction(k * a % r, r)) for k in range(1, r)}
    pts |= {(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))}
    # walk the lower-left hull boundary from (0,1) to (1,0); among
    # collinear candidates take the nearest so on-edge points survive
    boundary = [(Fraction(0), Fraction(1))]
    while boundary[-1] != (Fraction(1), Fraction(0)):
        v = boundary[-1]
        best = None
        for q in pts:
            if q == v or q in boundary:
                continue
            if best is None:
                best = q
                continue
            dq = (q[0] - v[0], q[1] - v[1])
            db = (best[0] - v[0], best[1] - v[1])
            cross = dq[0] * db[1] - dq[1] * db[0]
            if cross > 0 or (cross == 0 and abs(dq[0]) + abs(dq[1]) < abs(db[0]) + abs(db[1])):
                best = q
        boundary.append(best)
    rays = []
    for p in boundary:
        coords = B.coords(p)
        rays.append(tuple(int(x) for x in coords))
    chain = []
    for i in range(1, len(boundary) - 1):
        prev_pt, cur_pt, next_pt = boundary[i - 1], boundary[i], boundary[i + 1]
        total = tuple(pq + nq for pq, nq in zip(prev_pt, next_pt))
        k = next(j for j in range(2) if cur_pt[j] != 0)
        b = total[k] / cur_pt[k]
        if b.denominator != 1 or any(
            total[j] != b * cur_pt[j] for j in range(2)
        ) or b < 2:
            raise EngineInvariantError("boundary points violate the chain relation")
        chain.append(-int(b))
    cones = [(i, i + 1) for i in range(len(rays) - 1)]
    fan = make_fan(rays, cones, validate="full")
    return fan, tuple(chain)
