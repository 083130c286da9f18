"""Acceptance gate: ten end-to-end checks with stated tolerances.

Each test prints exactly one PASS/FAIL line (visible with pytest -v -s or in
captured output), so the gate can be audited from the test log alone.
"""

import math
import time
from itertools import product

import numpy as np
import pytest

from rodlab.errors import NonGenericProjection
from rodlab.families import (
    CriticalParams,
    FamilyParams,
    family,
    family_params_to_critical,
    make_critical,
    normal_form,
    q1_pattern,
    singular_u,
)
from rodlab.fourier import FourierSeries
from rodlab.framed import QuatPath, hopf, invariants
from rodlab.knots import (
    alexander_from_crossings,
    detect_singular_u,
    determinant_value,
    diagram,
    identify_torus,
    linking,
    lookup,
    torus_alexander,
)
from rodlab.variational import (
    StiefelPoint,
    energy,
    flow,
    gradient,
    project_tangent,
    re_inner,
    retract,
    u2_apply,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)




def e(k, c=1.0):
    return FourierSeries.basis(k, c)


class _Gate:
    """Context manager printing one PASS/FAIL line per criterion."""

    def __init__(self, num, name, capsys):
        self.num, self.name, self.capsys = num, name, capsys
        self.t0 = time.time()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        line = (f"ACCEPTANCE {self.num:2d} [{self.name}]: {status} "
                f"({time.time() - self.t0:.1f}s)")
        with self.capsys.disabled():
            print(line)
        return False


@pytest.fixture
def gate(capsys):
    # the PASS/FAIL lines should reach the terminal even without -s
    return lambda num, name: _Gate(num, name, capsys)


def rand_path(rng, parity="even", max_k=5):
    start = 0 if parity == "even" else 1
    ks = [k for k in range(-max_k, max_k + 1) if (k - start) % 2 == 0]

    def draw():
        return FourierSeries({k: complex(rng.normal(), rng.normal()) for k in ks})

    return QuatPath(draw(), draw())


def test_01_closure_exactness(gate):
    with gate(1, "closure exactness"):
        q = QuatPath(e(1, INV_SQRT2), e(-1, INV_SQRT2))
        fc = hopf(q, grid_size=1024)
        assert np.linalg.norm(fc.gamma[-1] - fc.gamma[0]) < 1e-10
        assert np.linalg.norm(fc.frame[-1] - fc.frame[0]) < 1e-10


def test_02_isolated_critical_points(gate):
    with gate(2, "round-circle invariants"):
        for c in (1, 2, 3):
            tr = invariants(q1_pattern(c, stiefel_scaled=False), grid_size=1024)
            assert np.max(np.abs(tr.kappa1 - math.pi * c / 2)) < 1e-10
            assert np.max(np.abs(tr.kappa2)) < 1e-10
            assert np.max(np.abs(tr.tw)) < 1e-10
            assert np.max(np.abs(tr.st)) < 1e-10


def test_03_gradient_correctness(gate):
    with gate(3, "gradient finite differences"):
        rng = np.random.default_rng(2024)
        for trial in range(100):
            q = rand_path(rng, parity=("even", "odd")[trial % 2], max_k=4)
            d = rand_path(rng, parity=q.parity, max_k=4)
            h = 1e-5
            fd = (energy(q + d.scale(h)) - energy(q + d.scale(-h))) / (2 * h)
            an = re_inner(gradient(q), d)
            assert abs(fd - an) <= 1e-6 * max(1.0, abs(an))


def _random_normal_params(rng, c_max=7):
    while True:
        c = int(rng.integers(1, c_max + 1))
        d = int(rng.integers(0, c + 1))
        if (c - d) % 2 == 0:
            break
    if c == d:
        return CriticalParams(c, d, 1.0, 0.0, 0.0, 1.0)
    phi1, phi2 = rng.uniform(0, 2 * np.pi, size=2)
    x1 = rng.uniform(0.05, 0.95)
    if d == 0:
        return CriticalParams(
            c, d, x1, math.sqrt(1 - x1 * x1) * np.exp(1j * phi1), 1.0, 0.0
        )
    z1 = rng.uniform(0.05, 0.95)
    return CriticalParams(
        c, d, x1, math.sqrt(1 - x1 * x1) * np.exp(1j * phi1),
        z1, math.sqrt(1 - z1 * z1) * np.exp(1j * phi2),
    )


def test_04_criticality_of_explicit_set(gate):
    with gate(4, "explicit critical set"):
        rng = np.random.default_rng(4)
        for _ in range(50):
            point = make_critical(_random_normal_params(rng))
            g = project_tangent(point, gradient(point.q))
            assert math.sqrt(re_inner(g, g)) < 1e-9


def test_05_energy_quantization(gate):
    with gate(5, "energy quantization under flow"):
        rng = np.random.default_rng(5)
        converged = 0
        for trial in range(100):
            q0 = retract(rand_path(rng, parity=("even", "odd")[trial % 2]))
            res = flow(q0, record_every=10**9)
            if not res.converged:
                continue
            converged += 1
            ev = energy(res.limit.q)
            level = ev / math.pi**2
            assert abs(level - round(level)) < 1e-4 * max(level, 1.0)
        assert converged >= 95


def test_06_normal_form_invariance(gate):
    with gate(6, "normal form U(2) invariance"):
        rng = np.random.default_rng(6)
        for _ in range(20):
            cp = _random_normal_params(rng)
            base = make_critical(cp)
            ref = normal_form(base)
            for _ in range(100):
                g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                a, _ = np.linalg.qr(g)
                nf = normal_form(StiefelPoint(u2_apply(base.q, a).chop(1e-15)))
                assert (nf.c, nf.d) == (ref.c, ref.d)
                for x, y in [
                    (nf.xi1, ref.xi1), (nf.xi2, ref.xi2),
                    (nf.zeta1, ref.zeta1), (nf.zeta2, ref.zeta2),
                ]:
                    assert abs(complex(x) - complex(y)) < 1e-8


def test_07_singular_u_prediction(gate):
    with gate(7, "singular u detection"):
        for h, k in [(2, 1), (3, 2), (2, -5)]:
            u, _, _ = detect_singular_u(h, k)
            assert abs(u - math.sqrt(k * k / (h * h + k * k))) < 1e-6
        assert f"{singular_u(2, -5):.3f}" == "0.928"


def _pipeline_poly(h, k, u):
    _, fc = family(FamilyParams(h, k, u))
    dg = diagram(fc, check_embedded=False)
    return alexander_from_crossings(dg.crossing_data(), max(dg.n_arcs, 1))


def test_08_family_knot_concordance(gate):
    with gate(8, "family knot types"):
        p = _pipeline_poly(2, 1, 0.2)
        assert p.unit_equal(torus_alexander(2, 3))
        assert determinant_value(p) == 3
        p = _pipeline_poly(2, 1, 0.9)
        assert p.span == 0 and determinant_value(p) == 1  # unknot
        ustar = singular_u(2, -5)
        p = _pipeline_poly(2, -5, 0.5 * ustar)
        assert identify_torus(p) == (2, 3)
        p = _pipeline_poly(2, -5, 0.95)
        assert identify_torus(p) == (3, 5)
        assert determinant_value(p) == 1


def test_09_linking_endpoints(gate):
    with gate(9, "frame linking at endpoints"):
        for h, k in [(2, 1), (2, -5)]:
            _, fc0 = family(FamilyParams(h, k, 0.0))
            _, fc1 = family(FamilyParams(h, k, 1.0))
            vals0 = {linking(fc0, eps) for eps in (1e-2, 1e-3, 1e-4)}
            vals1 = {linking(fc1, eps) for eps in (1e-2, 1e-3, 1e-4)}
            assert len(vals0) == 1 and len(vals1) == 1
            assert abs(vals0.pop()) == abs(k)
            assert abs(vals1.pop()) == abs(h)


def _example_poly(c, d, xi1, xi2, zeta1, zeta2):
    s_xi = math.sqrt(abs(xi1) ** 2 + abs(xi2) ** 2)
    s_ze = math.sqrt(abs(zeta1) ** 2 + abs(zeta2) ** 2)
    cp = CriticalParams(c, d, xi1 / s_xi, xi2 / s_xi, zeta1 / s_ze, zeta2 / s_ze)
    fc = hopf(make_critical(cp).q)
    dg = diagram(fc, check_embedded=False)
    return alexander_from_crossings(dg.crossing_data(), max(dg.n_arcs, 1))


def test_10_nontorus_examples(gate):
    with gate(10, "non-torus example knots"):
        p = _example_poly(-3, 5, 0.09, math.sqrt(1 - 0.09**2) * 1j,
                          0.15, math.sqrt(1 - 0.15**2) * 1j)
        assert p.unit_equal(lookup("10_139").alexander)
        assert identify_torus(p) is None

        p = _example_poly(-3, 5, 0.16, math.sqrt(1 - 0.16**2) * 1j,
                          -0.23, math.sqrt(1 - 0.23**2) * 1j)
        granny = torus_alexander(2, 3) * torus_alexander(2, 3)
        assert p.unit_equal(granny)
        assert identify_torus(p) is None

        # attempted at printed 3-digit precision; a non-generic diagram is an
        # acceptable outcome provided it is reported as such
        try:
            p = _example_poly(5, 7, 0.986, 0.167j, 0.1 - 0.11j, -0.855 + 0.497j)
        except NonGenericProjection as exc:
            print(f"ACCEPTANCE 10 note: 10_152 diagram non-generic: {exc}")
        else:
            assert p.unit_equal(lookup("10_152").alexander)
            assert identify_torus(p) is None
