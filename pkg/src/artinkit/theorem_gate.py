"""Applicability gates for the diagram-level contractibility criteria.

Each gate inspects a Dynkin diagram and reports whether one of the
implemented sufficient criteria applies, together with a certificate that
can be re-validated independently (`revalidate`). Verdicts are one-sided:
applicable=False means the gate could not establish its hypotheses, never
a refutation of the underlying conjecture.

Gates:
  - gate_tree: cut every edge of label >= 6 in a tree; all components must
    be spherical, locally reducible, or a two-4-ended chain (AffC).
  - gate_tree_conditional: as gate_tree but affine components are allowed;
    affine families whose coset complexes lack a verified local structure
    theory contribute explicit conditional assumptions.
  - gate_cycle: some induced cycle whose per-vertex complement components
    are trees of spherical / locally reducible (unconditional) or affine
    (conditional) type.
  - gate_folded: bounded search over vertex-identifying quotients composed
    with gate_cycle-style link conditions; all branches unconditional.
  - gate_all: every gate, plus the spherical base case and the reduction
    of a disconnected diagram to its components.
"""

from collections import deque
from dataclasses import dataclass
from itertools import combinations
import json

from . import dynkin
from .dynkin import INFINITY
from .errors import InvalidFolding, SearchBudgetExceeded

TREE_CUT = "TreeCut"
SINGLE_CYCLE = "SingleCycle"
FOLDED_CYCLE = "FoldedCycle"
SPHERICAL_BASE = "SphericalBase"
FC_REDUCTION = "FCReduction"

DEFAULT_FOLDING_BUDGET = 10_000

# Affine families whose coset complexes have no verified local structure
# theory; admitting such a component makes the verdict conditional on the
# two group-theoretic hypotheses below.
CONDITIONAL_AFFINE_FAMILIES = ("AffB", "AffD", "AffE", "AffF")

_ASSUMPTION_TEMPLATES = (
    "{}: the intersection of any two parabolic subgroups is a parabolic subgroup",
    "{}: commuting central elements of two parabolic subgroups admit a common"
    " conjugate into a single subgroup of any admissible chain containing both",
)


def assumption_pair(type_name):
    """The two unproven group-theoretic hypotheses, tagged with the type."""
    return tuple(t.format(type_name) for t in _ASSUMPTION_TEMPLATES)


@dataclass(frozen=True)
class GateVerdict:
    theorem: str
    applicable: bool
    certificate: dict | None = None
    conditional_assumptions: tuple = ()
    failure_reason: str | None = None

    def to_json(self):
        return {
            "theorem": self.theorem,
            "applicable": self.applicable,
            "certificate": self.certificate,
            "conditional": list(self.conditional_assumptions),
            "reason": self.failure_reason,
        }

    def to_json_str(self):
        return json.dumps(
            self.to_json(), ensure_ascii=False, sort_keys=True, indent=2
        )

    def render(self):
        head = "applicable" if self.applicable else "not applicable"
        if self.applicable and self.conditional_assumptions:
            head += f" (conditional, {len(self.conditional_assumptions)} assumptions)"
        line = f"{self.theorem}: {head}"
        if self.failure_reason:
            line += f" [{self.failure_reason}]"
        return line


def overall(verdicts):
    """Summary over gate_all output: applicable | conditional | none."""
    if any(v.applicable and not v.conditional_assumptions for v in verdicts):
        return "applicable"
    if any(v.applicable for v in verdicts):
        return "conditional"
    return "none"


# -- shared component admission ----------------------------------------------


def _reject(d):
    """Reason string when the diagram is outside gate scope, else None."""
    if d.rank == 0:
        return "empty diagram"
    if any(m == INFINITY for (_, _, m) in d.edges):
        return "diagram has an infinite label"
    return None


def _admit_one(comp, tag, folding):
    """Try a single branch predicate on a connected component.

    Returns (type_name, assumptions) on success, None on failure.
    """
    cls = dynkin.classify(comp)
    if tag == "spherical":
        return (cls.name, ()) if cls.is_spherical else None
    if tag == "locally_reducible":
        if comp.is_tree() and dynkin.is_locally_reducible(comp):
            return (cls.name, ())
        return None
    if tag == "affine_chain":
        if cls.is_affine and cls.name.startswith("AffC("):
            return (cls.name, ())
        return None
    if tag == "affine":
        if comp.is_tree() and cls.is_affine:
            family = cls.name.split("(")[0]
            if family in CONDITIONAL_AFFINE_FAMILIES:
                return (cls.name, assumption_pair(cls.name))
            return (cls.name, ())
        return None
    if tag == "folded_cycle":
        if (
            cls.is_affine
            and cls.name.startswith("AffA(")
            and folding is not None
            and dynkin.is_folded_subgraph(folding, comp.vertices)
        ):
            return (cls.name, ())
        return None
    raise ValueError(f"unknown branch tag {tag!r}")


def _admit(comp, branches, folding=None):
    """First branch in `branches` that admits the component, or None."""
    for tag in branches:
        hit = _admit_one(comp, tag, folding)
        if hit is not None:
            name, assumptions = hit
            return (tag, name, assumptions)
    return None


def _describe(comp):
    cls = dynkin.classify(comp)
    return f"component [{', '.join(comp.vertices)}] is {cls}"


# -- tree gates ---------------------------------------------------------------

_TREE_BRANCHES = ("spherical", "locally_reducible", "affine_chain")
_TREE_COND_BRANCHES = _TREE_BRANCHES + ("affine",)


def _tree_verdict(d, cut_edges, branches):
    bad = _reject(d)
    if bad:
        return GateVerdict(TREE_CUT, False, failure_reason=bad)
    if not d.is_tree():
        return GateVerdict(TREE_CUT, False, failure_reason="NotATree")
    if cut_edges is None:
        cut = [e for e in d.edges if e[2] >= 6]
    else:
        keys = {frozenset((u, v)) for (u, v, *_) in cut_edges}
        cut = [e for e in d.edges if frozenset((e[0], e[1])) in keys]
        if len(cut) != len(keys):
            raise ValueError("cut edge not in diagram")
        if any(m < 6 for (_, _, m) in cut):
            raise ValueError("cut edges must have label >= 6")
    comps = dynkin.cut_components(d, [(u, v) for (u, v, _) in cut])
    entries = []
    assumptions = []
    for comp in comps:
        hit = _admit(comp, branches)
        if hit is None:
            allowed = ", ".join(branches).replace("_", " ")
            return GateVerdict(
                TREE_CUT,
                False,
                failure_reason=f"{_describe(comp)}; allowed: {allowed}",
            )
        tag, name, extra = hit
        entries.append(
            {"vertices": list(comp.vertices), "branch": tag, "type": name}
        )
        assumptions.extend(extra)
    certificate = {
        "cut_edges": [[u, v, m] for (u, v, m) in cut],
        "components": entries,
    }
    return GateVerdict(
        TREE_CUT, True, certificate, tuple(dict.fromkeys(assumptions))
    )


def gate_tree(d, *, cut_edges=None):
    """Cut all label >= 6 edges of a tree; components must be spherical,
    locally reducible, or AffC chains. `cut_edges` overrides the cut set
    (any subset of the label >= 6 edges), for soundness experiments."""
    return _tree_verdict(d, cut_edges, _TREE_BRANCHES)


def gate_tree_conditional(d, *, cut_edges=None):
    """As gate_tree but affine components are allowed; affine families
    without a verified local structure theory contribute two conditional
    assumptions each."""
    return _tree_verdict(d, cut_edges, _TREE_COND_BRANCHES)


# -- induced cycles -----------------------------------------------------------


def _has_cycle(d):
    return len(d.edges) > d.rank - len(d.components())


def _cycle_order(sub):
    """Walk an induced cycle into a deterministic vertex order."""
    start = sub.vertices[0]
    nbrs = sub.neighbors(start)
    order = [start, nbrs[0]]
    prev, cur = start, nbrs[0]
    while True:
        nxt = [w for w in sub.neighbors(cur) if w != prev]
        if nxt[0] == start:
            return tuple(order)
        order.append(nxt[0])
        prev, cur = cur, nxt[0]


def induced_cycles(d):
    """All induced cycles, smallest first, each as an ordered vertex tuple."""
    out = []
    if not _has_cycle(d):
        return out
    for k in range(3, d.rank + 1):
        for sub in combinations(d.vertices, k):
            s = d.induced(sub)
            if len(s.edges) != k:
                continue
            if any(s.degree(v) != 2 for v in sub):
                continue
            if not s.is_connected():
                continue
            out.append(_cycle_order(s))
    return out


def _link_component(source, removed, anchor):
    """Component of the diagram minus `removed`, as an induced subdiagram
    containing `anchor`."""
    removed = set(removed)
    seen = {anchor}
    stack = [anchor]
    while stack:
        x = stack.pop()
        for y in source.neighbors(x):
            if y not in removed and y not in seen:
                seen.add(y)
                stack.append(y)
    return source.induced([v for v in source.vertices if v in seen])


def _cycle_links(source, cycle, branches, folding):
    """Per-vertex link components of a cycle, admitted branch-wise.

    `cycle` lives in the folding target when `folding` is given, else in
    `source` itself. Returns (entries, assumptions, failure_reason).
    """
    entries = []
    assumptions = []
    for s in cycle:
        fiber = folding.fiber(s) if folding is not None else (s,)
        rest = [t for t in cycle if t != s]
        if folding is not None:
            anchors = [v for t in rest for v in folding.fiber(t)]
        else:
            anchors = rest
        comp = _link_component(source, fiber, anchors[0])
        # consecutive cycle fibers are fully adjacent, so one component
        # carries all remaining fiber vertices
        assert all(comp.has_vertex(v) for v in anchors)
        hit = _admit(comp, branches, folding)
        if hit is None:
            allowed = ", ".join(branches).replace("_", " ")
            reason = (
                f"cycle [{', '.join(cycle)}], vertex {s}: {_describe(comp)};"
                f" allowed: {allowed}"
            )
            return None, None, reason
        tag, name, extra = hit
        entry = {
            "vertex": s,
            "component": list(comp.vertices),
            "branch": tag,
            "type": name,
        }
        if folding is not None:
            entry["fiber"] = list(fiber)
        entries.append(entry)
        assumptions.extend(extra)
    return entries, tuple(dict.fromkeys(assumptions)), None


_CYCLE_BRANCHES = ("spherical", "locally_reducible", "affine_chain", "affine")


def gate_cycle(d):
    """Search induced cycles whose per-vertex complement components are
    trees of spherical / locally reducible (unconditional) or affine
    (conditional) type."""
    bad = _reject(d)
    if bad:
        return GateVerdict(SINGLE_CYCLE, False, failure_reason=bad)
    if not d.is_connected():
        # a cycle in one component says nothing about the others; the
        # componentwise reduction gate handles disconnected diagrams
        return GateVerdict(
            SINGLE_CYCLE, False, failure_reason="diagram is not connected"
        )
    cycles = induced_cycles(d)
    if not cycles:
        return GateVerdict(SINGLE_CYCLE, False, failure_reason="NoInducedCycle")
    first_fail = None
    conditional = None
    for cycle in cycles:
        entries, assumptions, fail = _cycle_links(d, cycle, _CYCLE_BRANCHES, None)
        if fail is not None:
            if first_fail is None:
                first_fail = fail
            continue
        verdict = GateVerdict(
            SINGLE_CYCLE,
            True,
            {"cycle": list(cycle), "links": entries},
            assumptions,
        )
        if not assumptions:
            return verdict
        if conditional is None:
            conditional = verdict
    if conditional is not None:
        return conditional
    return GateVerdict(SINGLE_CYCLE, False, failure_reason=first_fail)


# -- folded search ------------------------------------------------------------

_FOLDED_BRANCHES = (
    "spherical",
    "folded_cycle",
    "affine_chain",
    "locally_reducible",
)


def _labeled_neighborhood(t, v):
    return frozenset((w, t.label(v, w)) for w in t.neighbors(v))


def _merge_candidates(t):
    """Vertex pairs of the target mergeable into a coarser special folding:
    non-adjacent with equal nonempty labeled neighborhoods (which forces
    distance exactly 2)."""
    out = []
    for x, y in combinations(sorted(t.vertices), 2):
        if t.has_edge(x, y):
            continue
        nx = _labeled_neighborhood(t, x)
        if nx and nx == _labeled_neighborhood(t, y):
            out.append((x, y))
    return out


def _partition_key(groups):
    return frozenset(frozenset(g) for g in groups)


def _folding_json(f):
    return {
        "fibers": [list(f.fiber(w)) for w in f.target.vertices],
        "target": {
            "vertices": list(f.target.vertices),
            "edges": [[u, v, m] for (u, v, m) in f.target.edges],
        },
    }


def gate_folded(d, *, max_candidates=DEFAULT_FOLDING_BUDGET):
    """Bounded search over vertex-identifying quotients and induced cycles
    of their targets; every admitted branch is unconditional.

    Raises SearchBudgetExceeded when the candidate cap cuts the search off
    before exhaustion without finding an applicable pair, so "not found"
    is never silently conflated with "refuted".
    """
    bad = _reject(d)
    if bad:
        return GateVerdict(FOLDED_CYCLE, False, failure_reason=bad)
    if not d.is_connected():
        return GateVerdict(
            FOLDED_CYCLE, False, failure_reason="diagram is not connected"
        )
    identity = dynkin.identity_folding(d)
    seen = {_partition_key([(v,) for v in d.vertices])}
    queue = deque([identity])
    produced = 1
    truncated = False
    first_fail = None
    saw_cycle = False
    while queue:
        f = queue.popleft()
        target = f.target
        if _has_cycle(target):
            for cycle in induced_cycles(target):
                saw_cycle = True
                entries, assumptions, fail = _cycle_links(
                    d, cycle, _FOLDED_BRANCHES, f
                )
                if fail is not None:
                    if first_fail is None:
                        first_fail = fail
                    continue
                assert not assumptions
                certificate = {
                    "folding": _folding_json(f),
                    "cycle": list(cycle),
                    "links": entries,
                }
                return GateVerdict(FOLDED_CYCLE, True, certificate)
        for x, y in _merge_candidates(target):
            groups = []
            merged = f.fiber(x) + f.fiber(y)
            for w in target.vertices:
                if w == x:
                    groups.append(merged)
                elif w != y:
                    groups.append(f.fiber(w))
            key = _partition_key(groups)
            if key in seen:
                continue
            if produced >= max_candidates:
                truncated = True
                continue
            try:
                g = dynkin.quotient_folding(d, groups)
            except InvalidFolding:
                continue
            seen.add(key)
            produced += 1
            queue.append(g)
    if truncated:
        raise SearchBudgetExceeded(max_candidates)
    if first_fail is not None:
        reason = f"exhausted {produced} candidate foldings; {first_fail}"
    elif saw_cycle:
        reason = f"exhausted {produced} candidate foldings"
    else:
        reason = (
            f"exhausted {produced} candidate foldings;"
            " NoInducedCycle in any quotient"
        )
    return GateVerdict(FOLDED_CYCLE, False, failure_reason=reason)


# -- base case and componentwise reduction -------------------------------------


def gate_spherical(d):
    """Base case: a connected diagram of spherical type."""
    bad = _reject(d)
    if bad:
        return GateVerdict(SPHERICAL_BASE, False, failure_reason=bad)
    if not d.is_connected():
        return GateVerdict(
            SPHERICAL_BASE, False, failure_reason="diagram is not connected"
        )
    cls = dynkin.classify(d)
    if cls.is_spherical:
        return GateVerdict(SPHERICAL_BASE, True, {"type": cls.name})
    return GateVerdict(SPHERICAL_BASE, False, failure_reason=f"classified {cls}")


def _pick(verdicts):
    """Preferred applicable verdict: unconditional first, else conditional."""
    for v in verdicts:
        if v.applicable and not v.conditional_assumptions:
            return v
    for v in verdicts:
        if v.applicable:
            return v
    return None


def gate_fc_reduction(d):
    """Reduce a disconnected diagram componentwise: applicable when every
    component admits some applicable gate (absent edges commute, so the
    group splits as a direct product over components)."""
    bad = _reject(d)
    if bad:
        return GateVerdict(FC_REDUCTION, False, failure_reason=bad)
    comps = d.components()
    if len(comps) < 2:
        return GateVerdict(
            FC_REDUCTION, False, failure_reason="diagram is connected"
        )
    entries = []
    assumptions = []
    for verts in comps:
        comp = d.induced(verts)
        pick = _pick(gate_all(comp))
        if pick is None:
            return GateVerdict(
                FC_REDUCTION,
                False,
                failure_reason=(
                    f"component [{', '.join(verts)}] admits no applicable gate"
                ),
            )
        entries.append(
            {
                "vertices": list(verts),
                "theorem": pick.theorem,
                "conditional": list(pick.conditional_assumptions),
            }
        )
        assumptions.extend(pick.conditional_assumptions)
    return GateVerdict(
        FC_REDUCTION,
        True,
        {"components": entries},
        tuple(dict.fromkeys(assumptions)),
    )


def gate_all(d):
    """Every gate in a stable order; the tree slot reports the plain gate
    when it applies and the conditional variant otherwise."""
    out = [gate_spherical(d)]
    tree = gate_tree(d)
    if not tree.applicable:
        cond = gate_tree_conditional(d)
        if cond.applicable:
            tree = cond
    out.append(tree)
    out.append(gate_cycle(d))
    try:
        out.append(gate_folded(d))
    except SearchBudgetExceeded as exc:
        out.append(
            GateVerdict(
                FOLDED_CYCLE,
                False,
                failure_reason=(
                    f"search budget exceeded ({exc.budget} candidate foldings)"
                ),
            )
        )
    out.append(gate_fc_reduction(d))
    return out


# -- certificate re-validation --------------------------------------------------


def _is_induced_cycle(d, cycle):
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        return False
    if not all(d.has_vertex(v) for v in cycle):
        return False
    n = len(cycle)
    for i, u in enumerate(cycle):
        for j in range(i + 1, n):
            v = cycle[j]
            adjacent = j - i == 1 or (i == 0 and j == n - 1)
            if d.has_edge(u, v) != adjacent:
                return False
    return True


def revalidate(d, verdict):
    """Re-run the hypothesis checks recorded in an applicable certificate."""
    if not verdict.applicable or verdict.certificate is None:
        return False
    cert = verdict.certificate
    if verdict.theorem == SPHERICAL_BASE:
        if not d.is_connected():
            return False
        cls = dynkin.classify(d)
        return cls.is_spherical and cls.name == cert["type"]
    if verdict.theorem == TREE_CUT:
        if not d.is_tree():
            return False
        cut = cert["cut_edges"]
        if any(
            not d.has_edge(u, v) or d.label(u, v) != m or m < 6
            for (u, v, m) in cut
        ):
            return False
        comps = dynkin.cut_components(d, [(u, v) for (u, v, _) in cut])
        if len(comps) != len(cert["components"]):
            return False
        assumptions = []
        for comp, entry in zip(comps, cert["components"]):
            if list(comp.vertices) != entry["vertices"]:
                return False
            hit = _admit_one(comp, entry["branch"], None)
            if hit is None or hit[0] != entry["type"]:
                return False
            assumptions.extend(hit[1])
        return tuple(dict.fromkeys(assumptions)) == verdict.conditional_assumptions
    if verdict.theorem == SINGLE_CYCLE:
        cycle = tuple(cert["cycle"])
        if not d.is_connected() or not _is_induced_cycle(d, cycle):
            return False
        entries, assumptions, fail = _cycle_links(d, cycle, _CYCLE_BRANCHES, None)
        if fail is not None:
            return False
        for got, want in zip(entries, cert["links"]):
            if got != want:
                return False
        return assumptions == verdict.conditional_assumptions
    if verdict.theorem == FOLDED_CYCLE:
        if not d.is_connected():
            return False
        fibers = [tuple(g) for g in cert["folding"]["fibers"]]
        try:
            f = dynkin.quotient_folding(d, fibers)
        except InvalidFolding:
            return False
        if _folding_json(f) != cert["folding"]:
            return False
        cycle = tuple(cert["cycle"])
        if not _is_induced_cycle(f.target, cycle):
            return False
        entries, assumptions, fail = _cycle_links(d, cycle, _FOLDED_BRANCHES, f)
        if fail is not None or assumptions:
            return False
        return entries == cert["links"]
    if verdict.theorem == FC_REDUCTION:
        comps = d.components()
        if len(comps) != len(cert["components"]) or len(comps) < 2:
            return False
        gates = {
            SPHERICAL_BASE: gate_spherical,
            TREE_CUT: gate_tree_conditional,
            SINGLE_CYCLE: gate_cycle,
            FOLDED_CYCLE: gate_folded,
        }
        for verts, entry in zip(comps, cert["components"]):
            if list(verts) != entry["vertices"]:
                return False
            sub = gates[entry["theorem"]](d.induced(verts))
            if not sub.applicable:
                return False
            if list(sub.conditional_assumptions) != entry["conditional"]:
                return False
        return True
    return False
