"""Decomposing a K-equivalence into elementary flops.

Two triangulations of the same cone over a square give the basic
threefold flop; a cone over a pentagon needs two.  The sweep moves a
height function from one model to the other and records each wall it
crosses, always at a crepant circuit.
"""

from toricmmp import (
    bistellar_flip,
    fans_equal,
    flop_decompose,
    k_equivalent,
    make_fan,
    make_pair,
    walls,
)


def replay(fan, steps):
    """Apply the recorded circuits; lands exactly on the target fan."""
    for st in steps:
        target = set(st.wall)
        w = next(w for w in walls(fan)
                 if {fan.rays[i] for i in w.shared} == target)
        fan = bistellar_flip(fan, w)
    return fan


def show(name, px, py):
    print(f"== {name}")
    print("  K-equivalent:", k_equivalent(px, py))
    steps = flop_decompose(px, py)
    for k, st in enumerate(steps, 1):
        print(f"  flop {k} at time {st.event_time}: circuit {list(st.circuit)}")
    print("  replay reaches target:",
          fans_equal(replay(px.fan, steps), py.fan))


# the square: both diagonals triangulate the cone over it
square = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
fx = make_fan(square, [(0, 1, 2), (0, 2, 3)])
fy = make_fan(square, [(0, 1, 3), (1, 2, 3)])
show("basic flop", make_pair(fx, [0] * 4), make_pair(fy, [0] * 4))

# the pentagon: triangulations from adjacent corners share no diagonal,
# so the sweep crosses two walls, in increasing time order
pentagon = [(0, 0, 1), (1, 0, 1), (2, 1, 1), (1, 2, 1), (0, 1, 1)]
fx = make_fan(pentagon, [(0, 1, 2), (0, 2, 3), (0, 3, 4)])
fy = make_fan(pentagon, [(1, 2, 3), (1, 3, 4), (0, 1, 4)])
show("pentagon", make_pair(fx, [0] * 5), make_pair(fy, [0] * 5))
