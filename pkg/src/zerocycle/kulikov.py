"""Degeneration combinatorics for semistable K3-type fibers.

Classifies a reduced fiber into the smooth / chain / sphere trichotomy,
recognizes the 2-sphere among dual complexes, audits the Euler count
sum(6 - n_i) = 12, the minus-one-form condition, and the triple point
formula, and certifies by explicit constraint propagation that every
lambda-assignment killed by the restriction maps is constant.

The solver is symbolic: it maintains equality classes of components in a
disjoint-set structure and never needs a modulus, so one certificate covers
all primes at once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CertificateReplayError,
    MinusOneFormViolation,
    MissingCycleData,
    NoAnchor,
    NonSemistable,
    NoSeed,
    NotKulikov,
    Stuck,
)
from .fiber import ComponentData, DualComplex, SpecialFiber, branch_self_intersection, dual_complex


@dataclass(frozen=True)
class KulikovType:
    kind: str  # "I" | "II" | "III"
    reasons: tuple[str, ...]

    def __str__(self) -> str:
        return f"type {self.kind}"


@dataclass(frozen=True)
class SphereCheck:
    is_sphere: bool
    diagnostics: str | None = None


@dataclass(frozen=True)
class EulerCheck:
    value: int
    passed: bool
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class MinusOneFormIssue:
    component: str
    branch: int
    message: str

    def __str__(self) -> str:
        return f"{self.component}[branch {self.branch}]: {self.message}"


@dataclass(frozen=True)
class TriplePointResult:
    label: str
    left_self: int
    right_self: int
    triple_count: int
    passed: bool


# --------------------------------------------------------------------------
# classification


def _path_order(fiber: SpecialFiber) -> list[str] | None:
    """Component ids in path order if the dual graph is a simple path with at
    least two vertices, else None."""
    ids = fiber.component_ids()
    if len(ids) < 2:
        return None
    degree = {i: 0 for i in ids}
    pair_seen = set()
    for d in fiber.double_curves:
        key = frozenset(d.sides())
        if key in pair_seen:
            return None  # parallel edges: not a simple path
        pair_seen.add(key)
        degree[d.left] += 1
        degree[d.right] += 1
    ends = sorted(i for i in ids if degree[i] == 1)
    if len(ends) != 2 or any(degree[i] != 2 for i in ids if i not in ends):
        return None
    order = [ends[0]]
    prev = None
    while len(order) < len(ids):
        cur = order[-1]
        nxt = [n for n in fiber.neighbours(cur) if n != prev]
        if len(nxt) != 1:
            return None
        prev = cur
        order.append(nxt[0])
    return order if order[-1] == ends[1] else None


def classify_kulikov(fiber: SpecialFiber) -> KulikovType:
    """Smooth K3 (I), chain with rational ends (II), or all-rational sphere
    configuration (III).  Requires a semistable (reduced) fiber."""
    heavy = [c.id for c in fiber.components if c.multiplicity > 1]
    if heavy:
        raise NonSemistable(
            f"component {heavy[0]!r} has multiplicity "
            f"{fiber.component(heavy[0]).multiplicity}; the fiber is not semistable"
        )

    if len(fiber.components) == 1:
        only = fiber.components[0]
        if only.kind != "k3":
            raise NotKulikov(
                f"a single-component fiber must be a smooth K3 surface; {only.id!r} has kind {only.kind!r}"
            )
        return KulikovType("I", (f"single component {only.id!r} of kind k3",))

    if fiber.triple_points:
        not_rational = [c.id for c in fiber.components if c.kind != "rational"]
        if not_rational:
            raise NotKulikov(
                f"component {not_rational[0]!r} is not rational in a configuration with triple points"
            )
        sphere = is_sphere(dual_complex(fiber))
        if not sphere.is_sphere:
            raise NotKulikov(f"dual complex is not a 2-sphere: {sphere.diagnostics}")
        return KulikovType(
            "III",
            (
                "triple points present",
                "all components rational",
                "dual complex is a 2-sphere",
            ),
        )

    order = _path_order(fiber)
    if order is None:
        raise NotKulikov(
            "without triple points the dual complex must be a simple path of >= 2 "
            "components meeting along single double curves"
        )
    for end in (order[0], order[-1]):
        if fiber.component(end).kind != "rational":
            raise NotKulikov(f"end component {end!r} must be rational, has kind "
                             f"{fiber.component(end).kind!r}")
    for mid in order[1:-1]:
        if fiber.component(mid).kind != "ruled-over-elliptic":
            raise NotKulikov(
                f"interior component {mid!r} must be ruled over an elliptic curve, "
                f"has kind {fiber.component(mid).kind!r}"
            )
    return KulikovType(
        "II",
        (
            f"chain {' - '.join(order)}",
            "rational ends, elliptic-ruled interior",
            "no triple points",
        ),
    )


# --------------------------------------------------------------------------
# sphere recognition and Euler count


def is_sphere(complex_: DualComplex) -> SphereCheck:
    """A connected closed-surface complex with Euler characteristic 2 is the
    2-sphere; full PL-homeomorphism testing is unnecessary for that."""
    if not complex_.faces:
        return SphereCheck(False, "complex has no faces")

    edge_face_count = {label: 0 for label, _, _ in complex_.edges}
    for _, face_edges in complex_.faces:
        for e in face_edges:
            edge_face_count[e] += 1
    bad = sorted(label for label, n in edge_face_count.items() if n != 2)
    if bad:
        return SphereCheck(
            False,
            f"edge {bad[0]!r} lies on {edge_face_count[bad[0]]} faces (closed surface needs 2)",
        )

    for v in complex_.vertices:
        incident_edges = [label for label, a, b in complex_.edges if v in (a, b)]
        # each face through v joins its two edges at v; the link must be one cycle
        link_degree = {e: 0 for e in incident_edges}
        link_edges = 0
        for face_comps, face_edges in complex_.faces:
            if v not in face_comps:
                continue
            at_v = [e for e in face_edges if v in complex_.edge_endpoints(e)]
            if len(at_v) != 2:
                return SphereCheck(False, f"face at vertex {v!r} has {len(at_v)} edges through it")
            link_degree[at_v[0]] += 1
            link_degree[at_v[1]] += 1
            link_edges += 1
        if any(d != 2 for d in link_degree.values()):
            return SphereCheck(False, f"link of vertex {v!r} is not 2-regular")
        # 2-regular with #nodes == #edges and connected <=> single cycle
        if link_edges != len(incident_edges):
            return SphereCheck(False, f"link of vertex {v!r} is not a single cycle")
        if not _link_connected(v, incident_edges, complex_):
            return SphereCheck(False, f"link of vertex {v!r} is disconnected")

    chi = len(complex_.vertices) - len(complex_.edges) + len(complex_.faces)
    if chi != 2:
        return SphereCheck(False, f"Euler characteristic is {chi}, not 2")
    return SphereCheck(True, None)


def _link_connected(v: str, incident_edges: list[str], complex_: DualComplex) -> bool:
    if not incident_edges:
        return True
    adjacency = {e: set() for e in incident_edges}
    for face_comps, face_edges in complex_.faces:
        if v not in face_comps:
            continue
        at_v = [e for e in face_edges if v in complex_.edge_endpoints(e)]
        adjacency[at_v[0]].add(at_v[1])
        adjacency[at_v[1]].add(at_v[0])
    seen = {incident_edges[0]}
    frontier = [incident_edges[0]]
    while frontier:
        cur = frontier.pop()
        for nxt in adjacency[cur]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen) == len(incident_edges)


def euler_check(fiber: SpecialFiber) -> EulerCheck:
    """sum over components of (6 - n_i), which equals 12 exactly on a sphere
    complex.  When the complex is a sphere, n_i is cross-checked against the
    vertex degree in the dual complex."""
    total = 0
    lengths: dict[str, int] = {}
    for comp in fiber.components:
        if comp.anticanonical_cycle is None:
            raise MissingCycleData(comp.id)
        n = len(comp.anticanonical_cycle)
        lengths[comp.id] = n
        total += 6 - n
    warnings = []
    complex_ = dual_complex(fiber)
    if complex_.faces and is_sphere(complex_).is_sphere:
        for comp_id, n in lengths.items():
            degree = complex_.vertex_degree(comp_id)
            if degree != n:
                warnings.append(
                    f"component {comp_id!r}: cycle length {n} differs from dual-complex degree {degree}"
                )
    return EulerCheck(value=total, passed=(total == 12), warnings=tuple(warnings))


# --------------------------------------------------------------------------
# minus-one-form and triple point formula


def minus_one_form_check(fiber: SpecialFiber) -> tuple[MinusOneFormIssue, ...]:
    """Every smooth boundary branch must have self-intersection -1 on the
    normalization (+1 for the nodal length-1 case), and no component may have
    more than 6 branches."""
    issues = []
    for comp in fiber.components:
        if comp.anticanonical_cycle is None:
            raise MissingCycleData(comp.id)
        n = len(comp.anticanonical_cycle)
        if n > 6:
            issues.append(
                MinusOneFormIssue(
                    comp.id,
                    -1,
                    f"cycle has {n} branches; an anticanonical cycle of (-1)-curves "
                    "on a rational surface has at most 6",
                )
            )
        for idx, branch in enumerate(comp.anticanonical_cycle.branches):
            self_int = branch_self_intersection(fiber, comp, branch)
            want = 1 if branch.nodal else -1
            if self_int != want:
                issues.append(
                    MinusOneFormIssue(
                        comp.id,
                        idx,
                        f"self-intersection {self_int}, expected {want}"
                        f" ({'nodal' if branch.nodal else 'smooth'} branch)",
                    )
                )
    return tuple(issues)


def triple_point_check(fiber: SpecialFiber) -> tuple[TriplePointResult, ...]:
    """Per double curve C: (C^2)_left + (C^2)_right + #(triple points on C)
    must vanish for a semistable normal-crossing degeneration."""
    results = []
    for d in fiber.double_curves:
        left = fiber.component(d.left)
        right = fiber.component(d.right)
        ls = _self_int(left, d.class_in_left)
        rs = _self_int(right, d.class_in_right)
        tau = sum(1 for t in fiber.triple_points if d.label in t.edges)
        results.append(
            TriplePointResult(
                label=d.label,
                left_self=ls,
                right_self=rs,
                triple_count=tau,
                passed=(ls + rs + tau == 0),
            )
        )
    return tuple(results)


def _self_int(comp: ComponentData, cls: tuple[int, ...]) -> int:
    return sum(
        cls[i] * comp.gram.entry(i, j) * cls[j]
        for i in range(comp.lattice_rank)
        for j in range(comp.lattice_rank)
    )


# --------------------------------------------------------------------------
# consonance propagation


@dataclass(frozen=True)
class CertificateStep:
    """One deduction.  ``kind`` is one of seed-by-small-n, anchor,
    chain-recurrence, polygon-propagation, neighbour-propagation."""

    kind: str
    component: str
    target: str | None = None
    note: str = ""

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind, "component": self.component}
        if self.target is not None:
            out["target"] = self.target
        if self.note:
            out["note"] = self.note
        return out

    def __str__(self) -> str:
        arrow = f" -> {self.target}" if self.target else ""
        note = f" ({self.note})" if self.note else ""
        return f"{self.kind}: {self.component}{arrow}{note}"


@dataclass(frozen=True)
class ConsonanceCertificate:
    fiber_name: str
    kulikov_kind: str
    seed: str
    steps: tuple[CertificateStep, ...]
    conclusion: str  # "all-equal" | "stuck"
    witness: tuple[tuple[str, ...], ...] = ()  # partition when stuck

    @property
    def all_equal(self) -> bool:
        return self.conclusion == "all-equal"

    def to_json_dict(self) -> dict:
        out = {
            "fiber": self.fiber_name,
            "kulikov_type": self.kulikov_kind,
            "seed": self.seed,
            "steps": [s.to_json_dict() for s in self.steps],
            "conclusion": self.conclusion,
        }
        if self.witness:
            out["witness"] = [list(cls) for cls in self.witness]
        return out

    def to_text(self) -> str:
        lines = [
            f"fiber: {self.fiber_name}",
            f"kulikov type: {self.kulikov_kind}",
            f"seed: {self.seed}",
            "steps:",
        ]
        lines.extend(f"  {k + 1}. {s}" for k, s in enumerate(self.steps))
        lines.append(f"conclusion: {self.conclusion}")
        if self.witness:
            lines.append("witness classes:")
            lines.extend("  {" + ", ".join(cls) + "}" for cls in self.witness)
        return "\n".join(lines)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def classes(self) -> tuple[tuple[str, ...], ...]:
        groups: dict[str, list[str]] = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=lambda g: sorted(g)[0]))


def _branch_opposites(fiber: SpecialFiber, comp: ComponentData) -> list[str | None]:
    """Per branch, the component on the other side of its double curve, or
    None for branches inside the singular locus (their mu is 0 by fiat)."""
    out = []
    for branch in comp.anticanonical_cycle.branches:
        if branch.edge is None:
            out.append(None)
        else:
            out.append(fiber.double_curve(branch.edge).other_side(comp.id))
    return out


def _is_consonant(fiber: SpecialFiber, uf: _UnionFind, comp_id: str) -> bool:
    root = uf.find(comp_id)
    return all(uf.find(n) == root for n in fiber.neighbours(comp_id))


def _mu_zero(uf: _UnionFind, comp_id: str, opposite: str | None) -> bool:
    return opposite is None or uf.find(opposite) == uf.find(comp_id)


def _unify_component(fiber: SpecialFiber, uf: _UnionFind, comp_id: str) -> None:
    for n in fiber.neighbours(comp_id):
        uf.union(comp_id, n)


def consonance_solve(fiber: SpecialFiber) -> ConsonanceCertificate:
    """Certify that every restriction-killed assignment of values to the
    components is constant, by explicit equality propagation.

    Chain fibers propagate from the declared non-minimal end: an exceptional
    curve there pairs 1 with the first double curve, forcing the first
    equality, and pairing the ruling fiber (degree 1 on each section) against
    the interior components turns one equality into the next.  Sphere fibers
    seed at a component with fewer than 6 boundary branches, where per-branch
    exceptional curves of the anticanonical pair kill every mu, and close up
    under the polygon recurrence and neighbour propagation.
    """
    kind = classify_kulikov(fiber)
    if kind.kind == "I":
        only = fiber.components[0].id
        return ConsonanceCertificate(
            fiber_name=fiber.name,
            kulikov_kind="I",
            seed=only,
            steps=(),
            conclusion="all-equal",
        )
    if kind.kind == "II":
        order = _path_order(fiber)
        anchors = [c.id for c in fiber.components if c.anchored_end]
        if len(anchors) != 1:
            raise NoAnchor(
                "a chain fiber needs exactly one anchored (non-minimal) end, "
                f"found {len(anchors)}"
            )
        if anchors[0] not in (order[0], order[-1]):
            raise NoAnchor(f"anchored component {anchors[0]!r} is not an end of the chain")
        if order[-1] == anchors[0]:
            order.reverse()
        return _solve_type_ii(fiber, order, anchored=True)
    return _solve_type_iii(fiber)


def _solve_type_ii(
    fiber: SpecialFiber, order: list[str], anchored: bool
) -> ConsonanceCertificate:
    """Propagation along a chain, starting from the anchored end.  Without the
    anchor the recurrence alone admits non-constant (arithmetic-progression)
    solutions, so nothing propagates and the solver reports stuck."""
    uf = _UnionFind(order)
    steps: list[CertificateStep] = []
    if anchored:
        uf.union(order[0], order[1])
        steps.append(
            CertificateStep(
                kind="anchor",
                component=order[0],
                target=order[1],
                note="non-minimal end: an exceptional curve pairs 1 with the double curve",
            )
        )
    for i in range(1, len(order) - 1):
        if uf.find(order[i - 1]) != uf.find(order[i]):
            break
        uf.union(order[i], order[i + 1])
        steps.append(
            CertificateStep(
                kind="chain-recurrence",
                component=order[i],
                target=order[i + 1],
                note="ruling fiber pairs 1 with both sections",
            )
        )
    classes = uf.classes()
    if len(classes) == 1:
        return ConsonanceCertificate(
            fiber_name=fiber.name,
            kulikov_kind="II",
            seed=order[0],
            steps=tuple(steps),
            conclusion="all-equal",
        )
    frontier = tuple(c for c in order if not _is_consonant(fiber, uf, c))
    certificate = ConsonanceCertificate(
        fiber_name=fiber.name,
        kulikov_kind="II",
        seed=order[0],
        steps=tuple(steps),
        conclusion="stuck",
        witness=classes,
    )
    raise Stuck(frontier, certificate)


def _solve_type_iii(fiber: SpecialFiber) -> ConsonanceCertificate:
    for comp in fiber.components:
        if comp.anticanonical_cycle is None:
            raise MissingCycleData(comp.id)
    issues = minus_one_form_check(fiber)
    if issues:
        raise MinusOneFormViolation(issues)

    ids = sorted(fiber.component_ids())
    eligible = [i for i in ids if len(fiber.component(i).anticanonical_cycle) < 6]
    if not eligible:
        raise NoSeed(
            "every component has a 6-branch cycle; the Euler count rules this out "
            "on a sphere complex"
        )
    seed = eligible[0]

    uf = _UnionFind(ids)
    steps = [
        CertificateStep(
            kind="seed-by-small-n",
            component=seed,
            note=(
                f"cycle length {len(fiber.component(seed).anticanonical_cycle)} < 6: "
                "per-branch exceptional curves pair 1 with one branch and 0 with the "
                "rest, killing every mu"
            ),
        )
    ]
    _unify_component(fiber, uf, seed)

    changed = True
    while changed and len(uf.classes()) > 1:
        changed = False
        for i in ids:
            comp = fiber.component(i)
            if _is_consonant(fiber, uf, i):
                for j in sorted(fiber.neighbours(i)):
                    if _is_consonant(fiber, uf, j):
                        continue
                    if not _shares_branch(fiber, j, i):
                        continue
                    _unify_component(fiber, uf, j)
                    steps.append(
                        CertificateStep(
                            kind="neighbour-propagation",
                            component=i,
                            target=j,
                            note="a consonant component makes each neighbour consonant",
                        )
                    )
                    changed = True
            else:
                opposites = _branch_opposites(fiber, comp)
                if _adjacent_zero_pair(uf, i, opposites):
                    _unify_component(fiber, uf, i)
                    steps.append(
                        CertificateStep(
                            kind="polygon-propagation",
                            component=i,
                            note="two adjacent branches with mu = 0 zero out the whole cycle",
                        )
                    )
                    changed = True

    classes = uf.classes()
    if len(classes) == 1:
        return ConsonanceCertificate(
            fiber_name=fiber.name,
            kulikov_kind="III",
            seed=seed,
            steps=tuple(steps),
            conclusion="all-equal",
        )
    frontier = tuple(i for i in ids if not _is_consonant(fiber, uf, i))
    certificate = ConsonanceCertificate(
        fiber_name=fiber.name,
        kulikov_kind="III",
        seed=seed,
        steps=tuple(steps),
        conclusion="stuck",
        witness=classes,
    )
    raise Stuck(frontier, certificate)


def _shares_branch(fiber: SpecialFiber, comp_id: str, other_id: str) -> bool:
    comp = fiber.component(comp_id)
    if comp.anticanonical_cycle is None:
        return False
    for branch in comp.anticanonical_cycle.branches:
        if branch.edge is None:
            continue
        if fiber.double_curve(branch.edge).other_side(comp_id) == other_id:
            return True
    return False


def _adjacent_zero_pair(uf: _UnionFind, comp_id: str, opposites: list[str | None]) -> bool:
    n = len(opposites)
    if n < 2:
        return False
    for k in range(n):
        a = opposites[k]
        b = opposites[(k + 1) % n]
        if _mu_zero(uf, comp_id, a) and _mu_zero(uf, comp_id, b):
            return True
    return False


def replay_certificate(fiber: SpecialFiber, certificate: ConsonanceCertificate) -> str:
    """Mechanically re-execute a certificate: verify each step's precondition
    and apply its unions.  Returns the re-derived conclusion ("all-equal" or
    "stuck"); a precondition failure raises CertificateReplayError."""
    ids = sorted(fiber.component_ids())
    uf = _UnionFind(ids)

    if certificate.kulikov_kind == "II":
        order = _path_order(fiber)
        if order is None:
            raise CertificateReplayError("fiber is not a chain")
        if order[0] != certificate.seed:
            order.reverse()
        if order[0] != certificate.seed:
            raise CertificateReplayError(f"seed {certificate.seed!r} is not an end of the chain")

    for step in certificate.steps:
        comp = fiber.component(step.component)
        if step.kind == "anchor":
            if not comp.anchored_end:
                raise CertificateReplayError(f"{step.component!r} is not an anchored end")
            if step.target not in fiber.neighbours(step.component):
                raise CertificateReplayError("anchor target is not adjacent")
            uf.union(step.component, step.target)
        elif step.kind == "chain-recurrence":
            prevs = [n for n in fiber.neighbours(step.component) if n != step.target]
            if len(prevs) != 1 or step.target not in fiber.neighbours(step.component):
                raise CertificateReplayError("chain step is not at an interior component")
            if uf.find(prevs[0]) != uf.find(step.component):
                raise CertificateReplayError(
                    f"chain step at {step.component!r} fires before the incoming equality is known"
                )
            uf.union(step.component, step.target)
        elif step.kind == "seed-by-small-n":
            if comp.anticanonical_cycle is None:
                raise CertificateReplayError(f"{step.component!r} has no cycle data")
            if len(comp.anticanonical_cycle) >= 6:
                raise CertificateReplayError(f"{step.component!r} has >= 6 branches; not a seed")
            _unify_component(fiber, uf, step.component)
        elif step.kind == "polygon-propagation":
            if comp.anticanonical_cycle is None:
                raise CertificateReplayError(f"{step.component!r} has no cycle data")
            if not _adjacent_zero_pair(uf, step.component, _branch_opposites(fiber, comp)):
                raise CertificateReplayError(
                    f"polygon step at {step.component!r} lacks two adjacent zero branches"
                )
            _unify_component(fiber, uf, step.component)
        elif step.kind == "neighbour-propagation":
            if not _is_consonant(fiber, uf, step.component):
                raise CertificateReplayError(
                    f"neighbour step from {step.component!r} fires before it is consonant"
                )
            if step.target not in fiber.neighbours(step.component):
                raise CertificateReplayError("neighbour step target is not adjacent")
            if not _shares_branch(fiber, step.target, step.component):
                raise CertificateReplayError("target has no branch along the shared double curve")
            _unify_component(fiber, uf, step.target)
        else:
            raise CertificateReplayError(f"unknown step kind {step.kind!r}")

    return "all-equal" if len(uf.classes()) == 1 else "stuck"
