"""Garside normal forms: the word problem in a spherical Artin group.

Every signed word in the generators evaluates to a unique normal form
Delta^k . f1 | f2 | ... ; two words name the same group element exactly
when the forms coincide.

    python3 demos/02_garside_words.py
"""

from artinkit import dynkin, garside

A3 = "vertices a b c\nedge a b 3\nedge b c 3\n"


def letters(text):
    # "b^-1 a" -> [("b", -1), ("a", 1)]; a bare word is all-positive
    out = []
    for tok in text.split():
        if tok.endswith("^-1"):
            out.append((tok[:-3], -1))
        else:
            out.extend((s, 1) for s in tok)
    return out


def nf(d, text):
    return garside.serialize(garside.from_letters(d, letters(text)))


def main():
    d = dynkin.parse_diagram(A3)

    print("normal forms:")
    for w in ("a", "ab", "aba", "bab", "abacba", "a a^-1", "b^-1 a b"):
        print(f"  {w!r:12} -> {nf(d, w)}")

    # aba and bab are the two sides of the braid relation
    assert nf(d, "aba") == nf(d, "bab")

    x = garside.from_letters(d, "abac")
    y = garside.from_letters(d, "cb")
    print("product      ", garside.serialize(garside.multiply(x, y)))
    print("inverse      ", garside.serialize(garside.inverse(x)))
    print("x * x^-1     ", garside.serialize(
        garside.multiply(x, garside.inverse(x))))

    # gcd/lcm for left-divisibility of positive elements
    g = garside.left_gcd(garside.from_letters(d, "abab"),
                         garside.from_letters(d, "abc"))
    l = garside.left_lcm(garside.from_letters(d, "ab"),
                         garside.from_letters(d, "b"))
    print("left gcd     ", garside.serialize(g))
    print("left lcm     ", garside.serialize(l))

    # serialization round-trips
    s = garside.serialize(x)
    assert garside.parse_element(d, s) == x
    print("round trip    ok:", s)


if __name__ == "__main__":
    main()
