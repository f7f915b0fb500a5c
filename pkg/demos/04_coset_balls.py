"""Balls in the typed coset graph of a spherical Artin group.

Vertices are cosets of the maximal standard parabolic subgroups (one type
per dropped generator), edges are chambers joining two types. The bound
caps the Garside size of the witness chambers; the effective bound is the
radius actually completed under the chamber cap.

    python3 demos/04_coset_balls.py
"""

from artinkit import build_ball, complexes, dynkin

I24 = "vertices a b\nedge a b 4\n"
A3 = "vertices a b c\nedge a b 3\nedge b c 3\n"


def main():
    d = dynkin.parse_diagram(I24)
    ball = build_ball(d, ["a", "b"], 3)
    print("I2(4) ball    vertices", len(ball.vertices),
          "edges", len(ball.edges), "inner", len(ball.inner),
          "effective bound", ball.effective_bound)
    v0 = ball.vertices[0]
    print("sample vertex", v0.id, "type", v0.type,
          "witness", v0.witness)
    print("its neighbors", sorted(ball.neighbors(v0.id))[:8], "...")

    # links of inner vertices are themselves coset graphs one rank down
    d3 = dynkin.parse_diagram(A3)
    b3 = build_ball(d3, ["a", "b", "c"], 4)
    center = next(v.id for v in b3.vertices
                  if v.type == "a" and v.witness.is_identity())
    lk = complexes.vertex_link(b3, center)
    print("A3 ball       vertices", len(b3.vertices), "edges", len(b3.edges))
    print("link of a-vertex at identity:", len(lk.vertices), "vertices,",
          len(lk.edges), "edges, types",
          sorted({v.type for v in lk.vertices}))

    dot = ball.to_dot()
    print("dot export starts with:", dot.splitlines()[0])


if __name__ == "__main__":
    main()
