"""Parse labeled Coxeter diagrams and classify them.

Run from the repo root after `pip install -e .`:

    python3 demos/01_diagrams.py
"""

from artinkit import classify, dynkin, errors

SAMPLES = [
    ("path, labels 3 3", "vertices a b c\nedge a b 3\nedge b c 3\n"),
    ("path, labels 4 3", "vertices a b c\nedge a b 4\nedge b c 3\n"),
    ("path, labels 5 3", "vertices a b c\nedge a b 5\nedge b c 3\n"),
    ("triangle, all 3", "vertices a b c\nedge a b 3\nedge b c 3\nedge a c 3\n"),
    ("path, labels 3 6", "vertices a b c\nedge a b 3\nedge b c 6\n"),
    ("star with 3 legs", "vertices h a b c\nedge h a 3\nedge h b 3\nedge h c 3\n"),
    ("two pieces", "vertices a b c\nedge b c 4\n"),
]


def main():
    for title, text in SAMPLES:
        d = dynkin.parse_diagram(text)
        try:
            cls = str(classify(d))
        except errors.NotConnected as exc:
            cls = f"unclassified ({exc})"
        print(f"{title:18} rank {d.rank}: {cls}; "
              f"locally_reducible={dynkin.is_locally_reducible(d)}")
    # missing edges mean the generators commute (label 2)
    d = dynkin.parse_diagram("vertices a b c d\nedge a b 3\nedge b c 3\nedge c d 4\n")
    print("edge labels       ", [m for (_, _, m) in d.edges])
    print("path order        ", d.path_order())


if __name__ == "__main__":
    main()
