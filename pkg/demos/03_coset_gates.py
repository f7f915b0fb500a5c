"""Minimal coset representatives and nearest-point gates in Coxeter groups.

Each coset of a standard parabolic subgroup has a unique shortest element
(its gate); between two such cosets the nearest-point map is a bijection
between two translated sub-cosets.

    python3 demos/03_coset_gates.py
"""

import artinkit.coxeter as cx
from artinkit import dynkin

A3 = "vertices a b c\nedge a b 3\nedge b c 3\n"


def main():
    d = dynkin.parse_diagram(A3)

    x = cx.normal_form(d, "cabab")
    print("element      ", x, "length", x.length)

    r = cx.gate_projection(x, {"a", "b"})
    print("x = gate.tail", r.gate, ".", r.tail,
          " (lengths", r.gate.length, "+", r.tail.length, ")")

    members = cx.coset_elements(x, {"a", "b"})
    shortest = min(members, key=lambda u: (u.length, u.word))
    print("coset size   ", len(members), "shortest =", shortest)
    assert shortest == r.gate

    # two cosets that intersect: the gate sets coincide at distance 0
    g1 = cx.normal_form(d, "")
    g2 = cx.normal_form(d, "ca")
    X, Y, _ = cx.pair_gate(d, frozenset("ab"), g1, frozenset("bc"), g2)
    print("overlapping  ", [str(u) for u in X], [str(v) for v in Y])

    # two disjoint cosets: unique nearest points at distance 1
    g2 = cx.normal_form(d, "b")
    X, Y, pairs = cx.pair_gate(d, frozenset("a"), g1, frozenset("c"), g2)
    for u, v in pairs:
        w = cx.multiply(cx.inverse(u), v)
        print("matched pair ", u, "<->", v, " distance", w.length)


if __name__ == "__main__":
    main()
