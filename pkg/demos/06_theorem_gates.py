"""Theorem gates: which structural result applies to a diagram, if any.

gate_all runs every gate and reports applicable / conditional /
not-applicable verdicts with certificates; overall() folds them into a
single summary.

    python3 demos/06_theorem_gates.py
"""

from artinkit import dynkin, gate_all, overall

SAMPLES = [
    ("spherical path", "vertices a b c\nedge a b 4\nedge b c 3\n"),
    ("tree with a 6-label joint",
     "vertices a b c d\nedge a b 3\nedge b c 6\nedge c d 4\n"),
    ("4-cycle, labels 3 4 3 4",
     "vertices p q r s\nedge p q 3\nedge q r 4\nedge r s 3\nedge s p 4\n"),
    ("affine 4-label path",
     "vertices a b c d e\nedge a b 3\nedge b c 3\nedge c d 4\nedge d e 3\n"),
    ("complete graph on 4, all 3",
     "vertices p q r s\nedge p q 3\nedge p r 3\nedge p s 3\n"
     "edge q r 3\nedge q s 3\nedge r s 3\n"),
]


def main():
    for title, text in SAMPLES:
        d = dynkin.parse_diagram(text)
        verdicts = gate_all(d)
        hits = [v.theorem for v in verdicts if v.applicable]
        print(f"{title}: overall {overall(verdicts)}"
              f" via {', '.join(hits) if hits else '(nothing applies)'}")
        for v in verdicts:
            if v.applicable:
                for a in v.conditional_assumptions:
                    print("   assumes:", a)
    print()
    print("full report for the 4-cycle:")
    d = dynkin.parse_diagram(SAMPLES[2][1])
    for v in gate_all(d):
        print(" ", v.render())


if __name__ == "__main__":
    main()
