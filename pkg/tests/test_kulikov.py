"""Degeneration-type classification, sphere recognition, the Euler and
minus-one-form audits, the triple point formula, and consonance certificates."""

import json

import pytest

from zerocycle import corpus
from zerocycle.errors import (
    CertificateReplayError,
    MinusOneFormViolation,
    MissingCycleData,
    NoAnchor,
    NonSemistable,
    NoSeed,
    NotKulikov,
    Stuck,
)
from zerocycle.fiber import dual_complex, fiber_from_document, load_special_fiber
from zerocycle.kulikov import (
    _path_order,
    _solve_type_ii,
    _solve_type_iii,
    classify_kulikov,
    consonance_solve,
    euler_check,
    is_sphere,
    minus_one_form_check,
    replay_certificate,
    triple_point_check,
)


def _fiber(name):
    return load_special_fiber(corpus.fixture_text(name))


def _doc(name):
    return json.loads(corpus.fixture_text(name))


# --- classification -----------------------------------------------------------


def test_classify_good_reduction_is_type_i():
    assert classify_kulikov(_fiber("good_reduction")).kind == "I"


def test_classify_chain_is_type_ii():
    kind = classify_kulikov(_fiber("typeII_chain"))
    assert kind.kind == "II"
    assert any("A0 - A1 - A2" in r for r in kind.reasons)


def test_classify_tetrahedron_is_type_iii():
    assert classify_kulikov(_fiber("tetrahedron_typeIII")).kind == "III"


def test_classify_quartic_is_non_semistable():
    with pytest.raises(NonSemistable):
        classify_kulikov(_fiber("quartic_k3"))


def test_classify_persson_fails_on_kind():
    with pytest.raises(NotKulikov) as err:
        classify_kulikov(_fiber("persson"))
    assert "rational" in str(err.value)


def test_classify_torus_fails_on_sphere():
    with pytest.raises(NotKulikov) as err:
        classify_kulikov(_fiber("hexagon_torus"))
    assert "sphere" in str(err.value)


def test_classify_interior_kind_enforced():
    doc = _doc("typeII_chain")
    doc["components"][1]["kind"] = "rational"
    with pytest.raises(NotKulikov) as err:
        classify_kulikov(fiber_from_document(doc))
    assert "interior" in str(err.value)


def test_classify_single_non_k3_fails():
    doc = _doc("good_reduction")
    doc["components"][0]["kind"] = "rational"
    with pytest.raises(NotKulikov):
        classify_kulikov(fiber_from_document(doc))


# --- sphere recognition ---------------------------------------------------------


def test_tetrahedron_and_octahedron_are_spheres():
    assert is_sphere(dual_complex(_fiber("tetrahedron_typeIII"))).is_sphere
    assert is_sphere(dual_complex(_fiber("octahedron"))).is_sphere


def test_torus_is_not_a_sphere():
    check = is_sphere(dual_complex(_fiber("hexagon_torus")))
    assert not check.is_sphere
    assert "Euler characteristic is 0" in check.diagnostics


def test_open_complex_is_not_a_sphere():
    # one face removed from the tetrahedron: some edges lie on a single face
    doc = _doc("tetrahedron_typeIII")
    doc["triple_points"] = doc["triple_points"][:-1]
    for comp in doc["components"]:
        comp.pop("anticanonical_cycle")
    complex_ = dual_complex(fiber_from_document(doc))
    check = is_sphere(complex_)
    assert not check.is_sphere


def test_no_faces_is_not_a_sphere():
    check = is_sphere(dual_complex(_fiber("typeII_chain")))
    assert not check.is_sphere
    assert "no faces" in check.diagnostics


# --- Euler count -----------------------------------------------------------------


def test_euler_tetrahedron():
    check = euler_check(_fiber("tetrahedron_typeIII"))
    assert check.value == 12 and check.passed
    assert check.warnings == ()


def test_euler_octahedron():
    check = euler_check(_fiber("octahedron"))
    assert check.value == 12 and check.passed


def test_euler_all_hexagon_fails():
    check = euler_check(_fiber("hexagon_torus"))
    assert check.value == 0 and not check.passed


def test_euler_missing_cycle_data():
    doc = _doc("tetrahedron_typeIII")
    doc["components"][2].pop("anticanonical_cycle")
    with pytest.raises(MissingCycleData) as err:
        euler_check(fiber_from_document(doc))
    assert err.value.component == "T2"


def test_euler_count_equals_degree_sum_on_spheres():
    # on any closed triangulated surface sum(6 - deg) = 6V - 2E = 6*chi
    for name, chi in (("tetrahedron_typeIII", 2), ("octahedron", 2), ("hexagon_torus", 0)):
        fiber = _fiber(name)
        complex_ = dual_complex(fiber)
        total = sum(
            6 - complex_.vertex_degree(v) for v in complex_.vertices
        )
        assert total == 6 * chi
        assert euler_check(fiber).value == total


# --- minus-one-form ----------------------------------------------------------------


def test_tetrahedron_is_in_minus_one_form():
    assert minus_one_form_check(_fiber("tetrahedron_typeIII")) == ()


def test_branch_with_wrong_self_intersection():
    doc = _doc("octahedron")
    doc["components"][0]["gram"] = [[-2]]  # all four branches of F0 become -2
    issues = minus_one_form_check(fiber_from_document(doc))
    assert len(issues) == 4
    assert all(i.component == "F0" for i in issues)
    assert "-2" in issues[0].message


def test_seven_branch_cycle_is_flagged():
    # a wheel: center C with 7 nodal-leaf neighbours, 7-branch cycle at C
    leaves = [f"L{i}" for i in range(7)]
    doc = {
        "name": "wheel7",
        "h1_geometric_vanishes": False,
        "components": [
            {
                "id": "C",
                "multiplicity": 1,
                "lattice_rank": 1,
                "gram": [[-1]],
                "curves": [[1]],
                "kind": "rational",
                "anticanonical_cycle": {
                    "branches": [{"edge": f"E{i}", "nodal": False} for i in range(7)]
                },
            }
        ]
        + [
            {
                "id": leaf,
                "multiplicity": 1,
                "lattice_rank": 1,
                "gram": [[1]],
                "curves": [[1]],
                "kind": "rational",
                "anticanonical_cycle": {
                    "branches": [{"edge": f"E{i}", "nodal": True}]
                },
            }
            for i, leaf in enumerate(leaves)
        ],
        "double_curves": [
            {"label": f"E{i}", "left": "C", "right": leaf,
             "class_in_left": [1], "class_in_right": [1]}
            for i, leaf in enumerate(leaves)
        ],
        "triple_points": [],
    }
    issues = minus_one_form_check(fiber_from_document(doc))
    assert len(issues) == 1
    assert issues[0].component == "C" and "at most 6" in issues[0].message


def test_nodal_branch_wants_plus_one():
    doc = {
        "name": "nodal_pair",
        "h1_geometric_vanishes": False,
        "components": [
            {"id": "A", "multiplicity": 1, "lattice_rank": 1, "gram": [[-1]],
             "curves": [[1]], "kind": "rational",
             "anticanonical_cycle": {"branches": [{"edge": "D", "nodal": True}]}},
            {"id": "B", "multiplicity": 1, "lattice_rank": 1, "gram": [[1]],
             "curves": [[1]], "kind": "rational",
             "anticanonical_cycle": {"branches": [{"edge": "D", "nodal": True}]}},
        ],
        "double_curves": [
            {"label": "D", "left": "A", "right": "B",
             "class_in_left": [1], "class_in_right": [1]},
        ],
        "triple_points": [],
    }
    issues = minus_one_form_check(fiber_from_document(doc))
    assert len(issues) == 1
    assert issues[0].component == "A"
    assert "expected 1" in issues[0].message


def test_minus_one_form_missing_cycle():
    doc = _doc("octahedron")
    doc["components"][3].pop("anticanonical_cycle")
    with pytest.raises(MissingCycleData):
        minus_one_form_check(fiber_from_document(doc))


# --- triple point formula ------------------------------------------------------------


def test_type_ii_double_curves_pass():
    results = triple_point_check(_fiber("typeII_chain"))
    assert all(r.passed for r in results)
    assert all(r.triple_count == 0 for r in results)
    # opposite self-intersections (k, -k) on the two-component fixture
    results = triple_point_check(fiber_from_document(corpus.two_component_document((2, 6), (2, 6))))
    assert results[0].left_self == -2 and results[0].right_self == 2 and results[0].passed


def test_type_iii_edges_pass_with_two_faces():
    for r in triple_point_check(_fiber("tetrahedron_typeIII")):
        assert (r.left_self, r.right_self, r.triple_count) == (-1, -1, 2)
        assert r.passed


def test_triple_point_failure_case():
    # triangle with one face and flat (0,0) classes: 0 + 0 + 1 != 0
    doc = {
        "name": "flat_triangle",
        "h1_geometric_vanishes": False,
        "components": [
            {"id": x, "multiplicity": 1, "lattice_rank": 1, "gram": [[0]],
             "curves": [[1]], "kind": "rational"}
            for x in ("A", "B", "C")
        ],
        "double_curves": [
            {"label": "AB", "left": "A", "right": "B", "class_in_left": [1], "class_in_right": [1]},
            {"label": "AC", "left": "A", "right": "C", "class_in_left": [1], "class_in_right": [1]},
            {"label": "BC", "left": "B", "right": "C", "class_in_left": [1], "class_in_right": [1]},
        ],
        "triple_points": [{"components": ["A", "B", "C"], "edges": ["AB", "AC", "BC"]}],
    }
    results = triple_point_check(fiber_from_document(doc))
    for r in results:
        assert (r.left_self, r.right_self, r.triple_count) == (0, 0, 1)
        assert not r.passed


# --- consonance --------------------------------------------------------------------


def test_type_ii_certificate():
    cert = consonance_solve(_fiber("typeII_chain"))
    assert cert.all_equal
    assert cert.seed == "A0"
    assert [s.kind for s in cert.steps] == ["anchor", "chain-recurrence"]


def test_type_iii_certificate_seeds_smallest():
    cert = consonance_solve(_fiber("tetrahedron_typeIII"))
    assert cert.all_equal
    assert cert.seed == "T0"
    assert cert.steps[0].kind == "seed-by-small-n"


def test_octahedron_certificate():
    cert = consonance_solve(_fiber("octahedron"))
    assert cert.all_equal
    assert cert.seed == "F0"


def test_type_i_certificate_is_vacuous():
    cert = consonance_solve(_fiber("good_reduction"))
    assert cert.all_equal and cert.steps == ()


def test_no_anchor_raised():
    doc = _doc("typeII_chain")
    doc["components"][0].pop("anchored_end")
    with pytest.raises(NoAnchor):
        consonance_solve(fiber_from_document(doc))


def test_two_anchors_rejected():
    doc = _doc("typeII_chain")
    doc["components"][2]["anchored_end"] = True
    with pytest.raises(NoAnchor):
        consonance_solve(fiber_from_document(doc))


def test_anchor_must_be_an_end():
    doc = _doc("typeII_chain")
    doc["components"][0].pop("anchored_end")
    doc["components"][1]["anchored_end"] = True
    with pytest.raises(NoAnchor):
        consonance_solve(fiber_from_document(doc))


def test_suppressed_anchor_sticks_never_all_equal():
    # the recurrence alone admits arithmetic-progression solutions, so the
    # solver must get stuck, never conclude all-equal
    fiber = _fiber("typeII_chain")
    order = _path_order(fiber)
    with pytest.raises(Stuck) as err:
        _solve_type_ii(fiber, order, anchored=False)
    assert err.value.certificate.conclusion == "stuck"
    assert len(err.value.certificate.witness) == 3
    assert set(err.value.frontier) == {"A0", "A1", "A2"}


def test_no_seed_on_all_hexagon_complex():
    with pytest.raises(NoSeed):
        _solve_type_iii(_fiber("hexagon_torus"))


def test_missing_cycle_data_surfaces():
    doc = _doc("tetrahedron_typeIII")
    doc["components"][1].pop("anticanonical_cycle")
    with pytest.raises(MissingCycleData):
        consonance_solve(fiber_from_document(doc))


def test_minus_one_form_gate():
    doc = _doc("octahedron")
    doc["components"][0]["gram"] = [[-2]]
    with pytest.raises(MinusOneFormViolation):
        consonance_solve(fiber_from_document(doc))


def test_certificate_replay():
    for name in ("typeII_chain", "tetrahedron_typeIII", "octahedron"):
        fiber = _fiber(name)
        cert = consonance_solve(fiber)
        assert replay_certificate(fiber, cert) == cert.conclusion


def test_replay_validates_preconditions():
    from zerocycle.kulikov import ConsonanceCertificate

    fiber = _fiber("typeII_chain")
    cert = consonance_solve(fiber)
    # drop the anchor step: the chain step then fires too early
    broken = ConsonanceCertificate(
        fiber_name=cert.fiber_name,
        kulikov_kind=cert.kulikov_kind,
        seed=cert.seed,
        steps=cert.steps[1:],
        conclusion=cert.conclusion,
    )
    with pytest.raises(CertificateReplayError):
        replay_certificate(fiber, broken)


def test_replay_polygon_step():
    from zerocycle.kulikov import CertificateStep, ConsonanceCertificate

    fiber = _fiber("tetrahedron_typeIII")
    base = consonance_solve(fiber)
    # after the seed every mu at T1 is zero, so a polygon step there is legal
    extended = ConsonanceCertificate(
        fiber_name=base.fiber_name,
        kulikov_kind=base.kulikov_kind,
        seed=base.seed,
        steps=base.steps + (CertificateStep(kind="polygon-propagation", component="T1"),),
        conclusion="all-equal",
    )
    assert replay_certificate(fiber, extended) == "all-equal"


def test_polygon_recurrence_closure():
    # mu_{j+1} = mu_j - mu_{j-1} with two adjacent zeros kills every cycle;
    # symbolically: track coefficients in the starting pair (a, b)
    for n in range(2, 7):
        coeffs = [(0, 0), (0, 0)]  # mu_1 = mu_2 = 0 expressed in (a, b)
        for _ in range(n - 2):
            prev, cur = coeffs[-2], coeffs[-1]
            coeffs.append((cur[0] - prev[0], cur[1] - prev[1]))
        assert all(c == (0, 0) for c in coeffs)
    # without the zero seed the length-6 recurrence closes up on nonzero data:
    # this is why 6-branch components cannot start the propagation
    a, b = (1, 0), (0, 1)
    seq = [a, b]
    for _ in range(6):
        prev, cur = seq[-2], seq[-1]
        seq.append((cur[0] - prev[0], cur[1] - prev[1]))
    assert seq[6] == seq[0] and seq[7] == seq[1]  # period 6, no contradiction


def test_parallel_edges_are_not_a_chain():
    doc = {
        "name": "parallel",
        "h1_geometric_vanishes": True,
        "components": [
            {"id": "A", "multiplicity": 1, "lattice_rank": 1,
             "gram": [[0]], "curves": [[1]], "kind": "rational"},
            {"id": "B", "multiplicity": 1, "lattice_rank": 1,
             "gram": [[0]], "curves": [[1]], "kind": "rational"},
        ],
        "double_curves": [
            {"label": "D1", "left": "A", "right": "B",
             "class_in_left": [1], "class_in_right": [1]},
            {"label": "D2", "left": "A", "right": "B",
             "class_in_left": [1], "class_in_right": [1]},
        ],
        "triple_points": [],
    }
    with pytest.raises(NotKulikov) as err:
        classify_kulikov(fiber_from_document(doc))
    assert "single double curve" in str(err.value)


def test_missing_self_intersection_on_interior_branch():
    from zerocycle.errors import MissingSelfIntersection
    from zerocycle.fiber import branch_self_intersection

    doc = _doc("tetrahedron_typeIII")
    doc["components"][0]["anticanonical_cycle"]["branches"].append(
        {"edge": None, "nodal": False}
    )
    fiber = fiber_from_document(doc)
    comp = fiber.component("T0")
    with pytest.raises(MissingSelfIntersection):
        branch_self_intersection(fiber, comp, comp.anticanonical_cycle.branches[-1])


def test_euler_cross_check_warns_on_degree_mismatch():
    # an extra branch inside the singular locus makes the cycle longer than
    # the dual-complex degree; the sphere cross-check reports it
    doc = _doc("tetrahedron_typeIII")
    doc["components"][0]["anticanonical_cycle"]["branches"].append(
        {"edge": None, "self_intersection": -1, "nodal": False}
    )
    check = euler_check(fiber_from_document(doc))
    assert check.value == 11 and not check.passed
    assert any("T0" in w for w in check.warnings)


def test_sphere_rejects_disconnected_vertex_link():
    # two tetrahedra sharing a single vertex: every edge lies on 2 faces but
    # the shared vertex's link is two disjoint triangles
    from zerocycle.fiber import DualComplex

    def tetra_edges(tag, verts):
        out = []
        for i in range(4):
            for j in range(i + 1, 4):
                out.append((f"{tag}{i}{j}", verts[i], verts[j]))
        return out

    averts = ["v", "a1", "a2", "a3"]
    bverts = ["v", "b1", "b2", "b3"]
    edges = tetra_edges("A", averts) + tetra_edges("B", bverts)
    label = {frozenset((x, y)): lab for lab, x, y in edges}

    def faces_of(verts):
        out = []
        for i in range(4):
            tri = [verts[k] for k in range(4) if k != i]
            out.append(
                (
                    tuple(tri),
                    tuple(
                        label[frozenset((tri[a], tri[b]))]
                        for a, b in ((0, 1), (0, 2), (1, 2))
                    ),
                )
            )
        return out

    complex_ = DualComplex(
        vertices=tuple(averts + bverts[1:]),
        edges=tuple(edges),
        faces=tuple(faces_of(averts) + faces_of(bverts)),
    )
    check = is_sphere(complex_)
    assert not check.is_sphere
    assert "link" in check.diagnostics
