"""Combinatorial health checks on coset-graph balls.

girth: shortest cycle through inner vertices (certified upper bound).
4wheel: every short labeled cycle bounds, wheel by wheel.
bowtie: no two squares share exactly one vertex (needs a path orientation).
order: the inner vertices of each type carry a graded linear order.

    python3 demos/05_local_checks.py
"""

from artinkit import build_ball, checks, dynkin

I24 = "vertices a b\nedge a b 4\n"
A3 = "vertices a b c\nedge a b 3\nedge b c 3\n"


def main():
    d2 = dynkin.parse_diagram(I24)
    ball2 = build_ball(d2, ["a", "b"], 8)
    inner, upper = checks.girth_report(ball2, ["a", "b"])
    print(f"I2(4) girth: shortest inner cycle {inner}, upper bound {upper}")

    d3 = dynkin.parse_diagram(A3)
    ball3 = build_ball(d3, ["a", "b", "c"], 5)
    orientation = d3.path_order()

    for verdict in (
        checks.check_labeled_4wheel(ball3),
        checks.check_bowtie_free(ball3, orientation),
        checks.linear_order(ball3, orientation).verdict,
    ):
        print(verdict.render().splitlines()[0])
        assert verdict.status == checks.VERIFIED

    # a ball too small to contain inner structure stays honest
    small = build_ball(d3, ["a", "b", "c"], 2)
    v = checks.check_bowtie_free(small, orientation)
    print("bound 2 bowtie:", v.status)


if __name__ == "__main__":
    main()
