import json

import pytest

from heartknit.arquiver import (FieldTooSmall, almost_split_conflation, decompose, emit_dot,
                                emit_json, end_algebra, iso_test, is_indecomposable, knit,
                                label_string, primitive_idempotents, verify_almost_split,
                                verify_quiver)
from heartknit.exactla import GF

import reference_values as pv
from conftest import kronecker, module_M


def by_label(q):
    return {label_string(x): x for x in q.objects()}


def test_end_of_m_is_local(M):
    E = end_algebra(M)
    assert E.dim == 1 and E.is_local


def test_decompose_direct_sum(H2, M):
    X = H2.direct_sum([M, H2.simple("2", 1), M, H2.projective("1")])
    parts = decompose(X)
    got = {label_string(y): k for y, k in parts}
    assert got == {pv.M: 2, pv.S2_1: 1, pv.E1A: 1}
    assert all(is_indecomposable(y) for y, _ in parts)
    assert not is_indecomposable(X)


def test_small_characteristic_is_refused():
    from heartknit.heart import Heart
    H = Heart(kronecker(GF(3)), 2)
    X = H.direct_sum([H.simple("1")] * 2)
    with pytest.raises(FieldTooSmall):
        decompose(X)
    H5 = Heart(kronecker(GF(5)), 2)
    X5 = H5.direct_sum([H5.simple("1")] * 2)
    assert [(label_string(y), k) for y, k in decompose(X5)] == [(pv.S1, 2)]


def test_iso_test_distinguishes(H2, M):
    assert iso_test(M, M)
    assert not iso_test(M, H2.simple("1"))
    assert iso_test(H2.simple("2", 1), H2.tau(M))


def _check_conflation(H, left, mid, right, corpus):
    c = almost_split_conflation(right)
    assert label_string(c.left) == left
    assert sorted(label_string(y) for y, k in decompose(c.middle) for _ in range(k)) == sorted(mid)
    rep = verify_almost_split(c, corpus)
    assert rep.ok, rep.failures
    assert H.is_inflation(c.inflation) and H.is_deflation(c.deflation)


@pytest.mark.parametrize("left,mid,right", [
    (pv.S2, [pv.E1A], pv.TOP1_RED2),
    (pv.S1, [pv.S2_1], pv.P1_1),
    (pv.S2_1, [pv.P1_1, pv.E1A], pv.M),
])
def test_golden_conflations(quiver_h2, left, mid, right):
    objs = by_label(quiver_h2)
    _check_conflation(quiver_h2.heart, left, mid, objs[right], quiver_h2.objects())


def test_almost_split_of_projective_rejected(H2):
    from heartknit.arquiver import Projective
    with pytest.raises(Projective):
        almost_split_conflation(H2.projective("1"))


def test_h2_quiver_matches_figure(quiver_h2):
    q = quiver_h2
    ids = q.ids()
    lab = {i: label_string(it.obj) for i, it in enumerate(q.vertices)}
    assert q.status == "complete"
    assert set(lab.values()) == pv.H2_VERTICES and len(lab) == 10
    assert {(lab[a], lab[b]) for (a, b) in q.arrows} == pv.H2_ARROWS
    assert {(lab[a], lab[b]) for (a, b) in q.tau_edges} == pv.H2_TAU
    assert {lab[i] for i, it in enumerate(q.vertices) if it.projective} == pv.H2_PROJECTIVE
    assert {lab[i] for i, it in enumerate(q.vertices) if it.injective} == pv.H2_INJECTIVE
    assert all(m == (1, 1) for m in q.arrows.values())


def test_h3_and_d4_vertex_sets(quiver_h3, quiver_d4):
    assert quiver_h3.status == quiver_d4.status == "complete"
    assert {label_string(x) for x in quiver_h3.objects()} == pv.H3_VERTICES
    assert len(quiver_h3.vertices) == 21
    assert {label_string(x) for x in quiver_d4.objects()} == pv.D4_VERTICES
    assert len(quiver_d4.vertices) == 19


@pytest.mark.parametrize("name", ["quiver_h2", "quiver_h3", "quiver_d4"])
def test_invariant_report(request, name):
    q = request.getfixturevalue(name)
    rep = verify_quiver(q)
    assert rep == {k: [] for k in rep}
    assert set(rep) == {"mesh_symmetry", "middle_terms", "ars", "tau_roundtrip"}


def test_budget(kron):
    q = knit(kron, 2, max_objects=4)
    assert q.status == "budget_exhausted" and len(q.vertices) == 4
    data = json.loads(emit_json(q))
    ids = {v["id"] for v in data["vertices"]}
    assert all(a["from"] in ids and a["to"] in ids for a in data["arrows"])


def test_json_schema_and_dot(quiver_h2):
    data = json.loads(emit_json(quiver_h2))
    assert sorted(data) == ["algebra_hash", "arrows", "d", "field", "status", "tau", "vertices"]
    v = data["vertices"][0]
    assert sorted(v) == ["graded_dims", "id", "injective", "label", "projective"]
    assert sorted(data["arrows"][0]) == ["d", "d_prime", "from", "to"]
    assert len(data["tau"]) == 8
    dot = emit_dot(quiver_h2).decode()
    assert dot.count("style=dashed") == 8


def test_empty_quiver_payload(kron):
    q = knit(kron, 2, max_objects=0)
    data = json.loads(emit_json(q))
    assert data["vertices"] == [] and data["arrows"] == [] and data["tau"] == []


def test_deterministic_output(kron):
    a = emit_json(knit(kron, 2))
    b = emit_json(knit(kron, 2))
    c = emit_json(knit(kron, 2, workers=4))
    assert a == b == c
    assert emit_dot(knit(kron, 2)) == emit_dot(knit(kron, 2, workers=3))
