import json
import random
from itertools import combinations

import pytest

from artinkit import complexes as cpx
from artinkit import dynkin
from artinkit import garside as ga
from artinkit.errors import (
    BoundTooLarge,
    InvalidFolding,
    NotSpherical,
    VertexNotInner,
)


def path(names, labels):
    edges = tuple(
        (names[i], names[i + 1], labels[i]) for i in range(len(labels))
    )
    return dynkin.DynkinDiagram(tuple(names), edges)


A2 = path("ab", [3])
A3 = path("abc", [3, 3])
B3 = path("abc", [4, 3])
I24 = path("ab", [4])


def adjacency(ball):
    return {v.id: set(ball.neighbors(v.id)) for v in ball.vertices}


# frozen shapes of small balls: (diagram, types, bound) ->
#   (effective_bound, vertices, edges, inner, chambers)
BALL_SHAPES = [
    (A2, ["a", "b"], 4, (4, 92, 157, 20, 157)),
    (A3, ["a", "b", "c"], 4, (4, 1907, 9771, 77, 9457)),
    (A2, ["a"], 2, (2, 10, 0, 1, 25)),
]


def test_ball_shapes_frozen():
    for d, types, L, want in BALL_SHAPES:
        b = cpx.build_ball(d, types, L)
        got = (b.effective_bound, len(b.vertices), len(b.edges),
               len(b.inner), b.chamber_count)
        assert got == want, (d.vertices, types, L, got)


def test_rank_one_ball_is_discrete():
    d1 = dynkin.DynkinDiagram(("a",), ())
    b = cpx.build_ball(d1, ["a"], 4)
    # the only proper parabolic is empty, so vertices are group elements
    assert len(b.vertices) == 9
    assert b.edges == ()
    witnesses = {ga.serialize(v.witness) for v in b.vertices}
    assert len(witnesses) == 9


def test_single_type_ball_edgeless():
    b = cpx.build_ball(A2, ["a"], 2)
    assert b.edges == ()
    assert all(v.type == "a" for v in b.vertices)


def test_ball_rejects_bad_inputs():
    aff = dynkin.DynkinDiagram(
        ("a", "b", "c"), (("a", "b", 3), ("b", "c", 3), ("a", "c", 3)))
    with pytest.raises(NotSpherical):
        cpx.build_ball(aff, ["a"], 3)
    with pytest.raises(BoundTooLarge):
        cpx.build_ball(A3, ["a", "b", "c"], 4, max_chambers=10)
    with pytest.raises(ValueError):
        cpx.build_ball(A2, [], 3)


def test_merge_iff_coset_equality_exhaustive():
    # every chamber pair, every type: same vertex <=> h^-1 g in A_{S-{s}}
    b = cpx.build_ball(A2, ["a", "b"], 3)
    t = ga.table(A2)
    chambers = [ga._wrap(t, raw) for raw in cpx._chambers(t, b.effective_bound)]
    assert len(chambers) == 67
    located = [
        {s: b.locate(g, s) for s in b.types} for g in chambers
    ]
    for i in range(len(chambers)):
        for j in range(i + 1, len(chambers)):
            diff = ga.multiply(ga.inverse(chambers[i]), chambers[j])
            for s in b.types:
                same = located[i][s] == located[j][s]
                assert same == ga.in_parabolic(diff, b.type_parabolic[s])


def test_every_edge_witness_realizes_both_endpoints():
    b = cpx.build_ball(A3, ["a", "b", "c"], 3)
    for (i, j) in b.edges:
        g = b.edge_witness(i, j)
        assert {b.locate(g, b.vertex(i).type), b.locate(g, b.vertex(j).type)} \
            == {i, j}


def test_adjacent_vertices_have_distinct_types():
    for d, types, L, _ in BALL_SHAPES:
        b = cpx.build_ball(d, types, L)
        for i, j in b.edges:
            assert b.vertex(i).type != b.vertex(j).type


def test_witness_is_size_minimal_in_coset():
    b = cpx.build_ball(A2, ["a", "b"], 4)
    t = ga.table(A2)
    for raw in cpx._chambers(t, b.effective_bound):
        g = ga._wrap(t, raw)
        for s in b.types:
            v = b.locate(g, s)
            assert b.vertex(v).witness.size <= g.size


def test_flagness_on_inner_triangles():
    b = cpx.build_ball(A3, ["a", "b", "c"], 4)
    t = ga.table(A3)
    covered = set()
    for raw in cpx._chambers(t, b.effective_bound):
        g = ga._wrap(t, raw)
        row = sorted(b.locate(g, s) for s in b.types)
        covered.add(tuple(row))
    tris = []
    for v in sorted(b.inner):
        nb = [u for u in b.neighbors(v) if u > v and u in b.inner]
        for x, y in combinations(nb, 2):
            if (min(x, y), max(x, y)) in b._edge_set:
                tris.append((v, x, y))
    assert len(tris) == 239
    for tri in tris:
        assert tuple(sorted(tri)) in covered


def test_rebuild_and_jobs_are_byte_identical():
    one = cpx.build_ball(A2, ["a", "b"], 4).to_json_str()
    again = cpx.build_ball(A2, ["a", "b"], 4).to_json_str()
    parallel = cpx.build_ball(A2, ["a", "b"], 4, jobs=2).to_json_str()
    assert one == again == parallel


def test_bound_monotonicity():
    # vertices keep their witnesses, edges never disappear, and the
    # smaller ball is induced on its inner part (boundary edges may
    # arrive late: the A3 pair below has 14 of those, all non-inner)
    cases = [(A2, ["a", "b"], 3, 0), (A3, ["a", "b", "c"], 3, 14)]
    for d, types, L, late in cases:
        small = cpx.build_ball(d, types, L, max_chambers=10 ** 6)
        big = cpx.build_ball(d, types, L + 1, max_chambers=10 ** 6)

        def key(ball, vid):
            v = ball.vertex(vid)
            return (v.type, ga.serialize(v.witness))

        sk = {key(small, v.id): v.id for v in small.vertices}
        bk = {key(big, v.id): v.id for v in big.vertices}
        assert set(sk) <= set(bk)
        for i, j in small.edges:
            e = tuple(sorted((bk[key(small, i)], bk[key(small, j)])))
            assert e in big._edge_set
        missing = []
        rb = {v: k for k, v in bk.items()}
        for i, j in big.edges:
            if rb[i] in sk and rb[j] in sk:
                si, sj = sk[rb[i]], sk[rb[j]]
                if (min(si, sj), max(si, sj)) not in small._edge_set:
                    missing.append((si, sj))
                    assert not (si in small.inner and sj in small.inner)
        assert len(missing) == late


def test_coxeter_complex_frozen_shapes():
    cc2 = cpx.build_coxeter_complex(A2)
    assert (len(cc2.vertices), len(cc2.edges)) == (6, 6)
    deg = {}
    for i, j in cc2.edges:
        deg[i] = deg.get(i, 0) + 1
        deg[j] = deg.get(j, 0) + 1
    assert set(deg.values()) == {2}  # hexagon
    assert cc2.euler_characteristic == 0

    cc3 = cpx.build_coxeter_complex(A3)
    assert (len(cc3.vertices), len(cc3.edges)) == (14, 36)
    assert cc3.euler_characteristic == 2
    # vertex count per type matches |W| / |W_parabolic|
    by_type = {}
    for _, s, _ in cc3.vertices:
        by_type[s] = by_type.get(s, 0) + 1
    assert by_type == {"a": 4, "b": 6, "c": 4}

    ccb = cpx.build_coxeter_complex(B3)
    assert (len(ccb.vertices), len(ccb.edges)) == (26, 72)
    assert ccb.euler_characteristic == 2

    d1 = dynkin.DynkinDiagram(("a",), ())
    cc1 = cpx.build_coxeter_complex(d1)
    assert (len(cc1.vertices), len(cc1.edges)) == (2, 0)
    assert cc1.euler_characteristic == 2


def test_coxeter_complex_dihedral_cycle():
    for m in (3, 4, 5, 6):
        d = path("ab", [m])
        cc = cpx.build_coxeter_complex(d)
        assert len(cc.vertices) == 2 * m
        assert len(cc.edges) == 2 * m
        deg = {}
        for i, j in cc.edges:
            deg[i] = deg.get(i, 0) + 1
            deg[j] = deg.get(j, 0) + 1
        assert set(deg.values()) == {2}


def test_coxeter_complex_rejects_affine():
    aff = dynkin.DynkinDiagram(
        ("a", "b", "c"), (("a", "b", 3), ("b", "c", 3), ("a", "c", 3)))
    with pytest.raises(NotSpherical):
        cpx.build_coxeter_complex(aff)


def test_apartment_hexagon_through_identity():
    ap = cpx.apartment_cycle(A2)
    assert (len(ap.vertices), len(ap.edges)) == (6, 6)
    assert sum(1 for _, w in ap.vertices if w.is_identity()) == 2
    deg = {}
    for i, j in ap.edges:
        deg[i] = deg.get(i, 0) + 1
        deg[j] = deg.get(j, 0) + 1
    assert set(deg.values()) == {2}


def test_apartment_dihedral_embeds_in_ball():
    d = I24
    ap = cpx.apartment_cycle(d)
    assert (len(ap.vertices), len(ap.edges)) == (8, 8)
    b = cpx.build_ball(d, ["a", "b"], 3)
    loc = cpx.locate_apartment(ap, b)
    assert all(v is not None for v in loc)
    assert len(set(loc)) == len(loc)
    for i, j in ap.edges:
        e = (min(loc[i], loc[j]), max(loc[i], loc[j]))
        assert e in b._edge_set


def test_apartment_translated_by_base():
    base = ga.from_letters(I24, "ab")
    ap = cpx.apartment_cycle(I24, base=base)
    assert len(ap.vertices) == 8
    b = cpx.build_ball(I24, ["a", "b"], 4)
    loc = cpx.locate_apartment(ap, b)
    assert all(v is not None for v in loc)
    assert len(set(loc)) == 8


def test_apartment_a3_ac_has_alternating_4cycles():
    ap = cpx.apartment_cycle(A3, ["a", "c"])
    assert (len(ap.vertices), len(ap.edges)) == (8, 12)
    adj = {i: set() for i in range(len(ap.vertices))}
    for i, j in ap.edges:
        adj[i].add(j)
        adj[j].add(i)
    cycles = []
    for quad in combinations(range(len(ap.vertices)), 4):
        for (p, q, r, s) in [(quad[0], quad[1], quad[2], quad[3]),
                             (quad[0], quad[1], quad[3], quad[2]),
                             (quad[0], quad[2], quad[1], quad[3])]:
            if (q in adj[p] and r in adj[q] and s in adj[r] and p in adj[s]
                    and r not in adj[p] and s not in adj[q]):
                cycles.append((p, q, r, s))
    assert len(cycles) == 6
    for c in cycles:
        t = [ap.vertices[v][0] for v in c]
        assert t[0] == t[2] and t[1] == t[3] and t[0] != t[1]


def test_link_requires_inner_vertex():
    b = cpx.build_ball(A2, ["a", "b"], 3)
    boundary = max(
        (v for v in b.vertices if v.id not in b.inner),
        key=lambda v: v.witness.size,
    )
    with pytest.raises(VertexNotInner):
        cpx.vertex_link(b, boundary.id)


def test_link_in_dihedral_ball_is_discrete():
    b = cpx.build_ball(A2, ["a", "b"], 3)
    v0 = b.locate(ga.identity(A2), "a")
    lk = cpx.vertex_link(b, v0)
    assert lk.vertices
    assert all(v.type == "b" for v in lk.vertices)
    assert lk.edges == ()


def test_link_a3_bhat_is_join_of_two_discrete_sets():
    b = cpx.build_ball(A3, ["a", "b", "c"], 5)
    v0 = b.locate(ga.identity(A3), "b")
    assert v0 in b.inner
    lk = cpx.vertex_link(b, v0)
    a_nb = [v for v in lk.vertices if v.type == "a"]
    c_nb = [v for v in lk.vertices if v.type == "c"]
    assert (len(a_nb), len(c_nb), len(lk.edges)) == (7, 7, 37)
    es = set(lk.edges)
    for i, j in lk.edges:
        assert b.vertex(i).type != b.vertex(j).type
    # complete bipartite on the inner part of the link
    a_in = [v for v in a_nb if v.id in b.inner]
    c_in = [v for v in c_nb if v.id in b.inner]
    assert len(a_in) == 4 and len(c_in) == 4
    for u in a_in:
        for w in c_in:
            assert (min(u.id, w.id), max(u.id, w.id)) in es


def test_link_a3_ahat_matches_a2_subball():
    # neighbors of the identity a-hat vertex, compared against the coset
    # graph that the same chambers generate inside the {b,c} subgroup
    b = cpx.build_ball(A3, ["a", "b", "c"], 5)
    va = b.locate(ga.identity(A3), "a")
    lk = cpx.vertex_link(b, va)
    t = ga.table(A3)
    d2 = path("bc", [3])
    t2 = ga.table(d2)
    pair_of = {}
    sub_v = {}
    sub_edges = set()
    link_pairs = set()
    for raw in cpx._chambers(t, b.effective_bound):
        g = ga._wrap(t, raw)
        if b.locate(g, "a") != va:
            continue
        link_pair = (b.locate(g, "b"), b.locate(g, "c"))
        link_pairs.add(link_pair)
        h = ga.restrict(g, {"b", "c"})
        raw2 = ga._raw(t2, h)
        row = []
        for s in ("b", "c"):
            X = frozenset({"b", "c"}) - {s}
            key = t2.coset_key(raw2, X, b.effective_bound + 2)
            vid = sub_v.setdefault((s, key), len(sub_v))
            row.append(vid)
        sub_edges.add(tuple(row))
        prev = pair_of.get(link_pair)
        assert prev is None or prev == tuple(row)
        pair_of[link_pair] = tuple(row)
    link_vs = {v.id for v in lk.vertices}
    assert len(sub_v) == len(link_vs) == 86
    assert len(sub_edges) == len(lk.edges) == 151
    # chamber-wise correspondence is a bijection on vertices
    fwd = {}
    for (lb, lc), (sb, sc) in pair_of.items():
        for lv, sv in ((lb, sb), (lc, sc)):
            assert fwd.setdefault(lv, sv) == sv
    assert len(fwd) == 86 and len(set(fwd.values())) == 86
    # and sends link edges onto sub-ball edges exactly
    mapped = {tuple(sorted((fwd[i], fwd[j]))) for i, j in lk.edges}
    assert mapped == {tuple(sorted(e)) for e in sub_edges}


def test_folded_identity_matches_plain_ball():
    ident = dynkin.identity_folding(A3)
    plain = cpx.build_ball(A3, ["a", "b", "c"], 3)
    folded = cpx.build_folded_ball(ident, ["a", "b", "c"], 3)
    assert plain.to_json_str() == folded.to_json_str()


def test_folded_outer_merge_ball():
    q = dynkin.quotient_folding(A3, [("a", "c")])
    assert dynkin.validate_folding(q)
    fb = cpx.build_folded_ball(q, list(q.target.vertices), 3)
    assert (len(fb.vertices), len(fb.edges)) == (788, 1591)
    assert fb.type_parabolic["a+c"] == frozenset({"b"})
    assert fb.type_parabolic["b"] == frozenset({"a", "c"})
    plain = cpx.build_ball(A3, ["a", "b", "c"], 3)
    comp = cpx.folded_comparison(fb, q, plain)
    assert len(comp) == len(fb.vertices)
    for v in fb.vertices:
        want = 2 if v.type == "a+c" else 1
        assert len(comp[v.id]) == want
    # folded edges land on joined simplices in the plain ball
    rng = random.Random(20240819)
    sample = rng.sample(list(fb.edges), 200)
    for i, j in sample:
        g = fb.edge_witness(i, j)
        cells = []
        for v in (i, j):
            fiber = q.fiber(fb.vertex(v).type)
            cells.append([plain.locate(g, s) for s in fiber])
        flat = [x for cell in cells for x in cell]
        assert all(x is not None for x in flat)
        for x, y in combinations(flat, 2):
            if x != y:
                assert (min(x, y), max(x, y)) in plain._edge_set


def test_folded_ball_rejects_invalid_folding():
    bad = dynkin.SpecialFolding(
        source=A3,
        target=dynkin.DynkinDiagram(("x", "c"), (("x", "c", 3),)),
        vertex_map=(("a", "x"), ("b", "x"), ("c", "c")),
    )
    with pytest.raises(InvalidFolding):
        cpx.build_folded_ball(bad, ["x", "c"], 3)


def test_json_export_shape_and_roundtrip():
    b = cpx.build_ball(A2, ["a", "b"], 3)
    blob = b.to_json()
    assert set(blob) == {"vertices", "edges", "inner", "bound"}
    assert blob["bound"] == 3
    assert all(set(v) == {"id", "type", "witness"} for v in blob["vertices"])
    back = cpx.ball_from_json(A2, json.dumps(blob))
    assert [(v.id, v.type, ga.serialize(v.witness)) for v in back.vertices] \
        == [(v.id, v.type, ga.serialize(v.witness)) for v in b.vertices]
    assert back.edges == b.edges
    assert back.inner == b.inner


def test_dot_export_mentions_every_vertex_and_edge():
    b = cpx.build_ball(A2, ["a", "b"], 2)
    dot = b.to_dot()
    assert dot.startswith("graph ball {")
    for v in b.vertices:
        assert f"v{v.id} [label=" in dot
    assert dot.count(" -- ") == len(b.edges)
