from heartknit.arquiver import decompose, iso_test, label_string
from heartknit.sigma import sigma_modules, sigma_one, sigma_route

import reference_values as pv


def test_sigma_one_of_m(H2, M):
    s = sigma_one(H2, M)
    assert sorted(label_string(y) for y, k in decompose(s) for _ in range(k)) == pv.SIGMA1_SUMMANDS


def test_sigma_trace_of_m(H2, M):
    trace = []
    out = sigma_route(H2, M, trace)
    kinds = [(k, i) for k, i, _ in trace]
    assert kinds == [("I", 0), ("I", 1), ("Sigma", 1), ("I", 2), ("Sigma", 2)]
    I2 = trace[3][2]
    # nu_2(e2A): 1 and red 1 over red 2
    assert I2.graded_dims() == {"1": {0: 1, -1: 1}, "2": {-1: 1}}
    assert label_string(out) == pv.TAU_M


def test_sigma_of_projective(H2):
    z = sigma_route(H2, H2.projective("1"))
    assert z.is_zero and z.flags.get("from_projective")


def _agree(q):
    H = q.heart
    n = 0
    for it in q.vertices:
        if it.projective:
            continue
        s = sigma_route(H, it.obj)
        assert iso_test(s, q.vertices[it.tau].obj), label_string(it.obj)
        n += 1
    return n


def test_sigma_agrees_with_tau_h2(quiver_h2):
    assert _agree(quiver_h2) == 8


def test_sigma_agrees_with_tau_h3(quiver_h3):
    assert _agree(quiver_h3) == 19


def test_sigma_agrees_with_tau_d4(quiver_d4):
    assert _agree(quiver_d4) == 15
