import numpy as np
import pytest

import ncgeom as ng
from ncgeom.fuzzy_sphere import CalibrationError, h0_dimension, verify_structure
from ncgeom.linalg import adjoint, anticommutator, hs_norm


def test_dimensions(sphere1):
    assert sphere1.data.hilbert_dim == 40
    assert sphere1.data.algebra.shape[0] == 25
    assert h0_dimension(1) == 5
    assert h0_dimension(2) == 14
    m2 = ng.build_sphere(2)
    assert m2.data.hilbert_dim == 112


def test_build_rejects_level_zero():
    with pytest.raises(ValueError):
        ng.build_sphere(0)


def test_axioms(sphere1):
    rep = ng.check_axioms(sphere1.data)
    assert max(rep.values()) <= 1e-10


def test_identity_table(sphere1, sphere1_report):
    res = verify_structure(sphere1, sphere1_report["complex"])
    assert max(res.values()) <= 1e-10


def test_report_all_assertions(sphere1_report):
    rep = sphere1_report["report"]
    failed = [a["name"] for a in rep["assertions"] if not a["passed"]]
    assert not failed, failed
    assert rep["betti"] == [5, 0, 0, 5, 0]
    assert rep["dims"]["canon"] == [25, 75, 75, 25, 0]
    assert rep["dims"]["junk"] == [0, 0, 25, 75, 100]
    assert rep["scalar_curvature"] == pytest.approx(-1.5, abs=1e-9)


def test_report_runtime_budget(sphere1_report):
    assert sphere1_report["seconds"] <= 300  # criterion budget: five minutes


def test_brst_relations(brst1):
    checks = brst1["checks"]
    assert checks["Q nilpotent"] <= 1e-12
    assert checks["star^2 = -I"] <= 1e-12
    assert checks["star Q = Q^adj star"] <= 1e-12
    rep = ng.check_axioms(brst1["data"])
    assert max(rep.values()) <= 1e-10


def test_brst_complex(brst1_complex):
    assert brst1_complex.dims("canon") == (25, 75, 75, 25, 0)
    assert brst1_complex.module_ranks() == (1, 3, 3, 1, 0)
    assert brst1_complex.betti[:4] == [5, 0, 0, 5]
    assert max(d for d in brst1_complex.dims("junk")) == 0  # differential ideal


def test_broken_susy(susy1):
    rep = susy1["report"]
    assert max(rep["residuals"].values()) <= 1e-10
    assert rep["min_laplacian_eigenvalue"] == pytest.approx(0.125, abs=1e-9)
    assert rep["kernel_dimension"] == 0
    # the deformed differential anticommutes with nothing it shouldn't:
    d, dbar = susy1["D"], susy1["Dbar"]
    assert np.linalg.norm(anticommutator(d, dbar)) <= 1e-10
    assert np.linalg.norm(d @ d - dbar @ dbar) <= 1e-10


def test_susy_gamma_grading(sphere1, susy1):
    # the (both-copies) grading anticommutes with both Dirac operators
    gam = sphere1.data.ops["gamma"]
    for op in (susy1["D"], susy1["Dbar"]):
        assert np.linalg.norm(anticommutator(gam, op)) <= 1e-10


def test_deformed_complex_reported_not_asserted(susy1):
    # the deformed-differential cohomology on the operator complex is trivial
    # (strictly positive Laplacian); reported as computed
    assert susy1["report"]["kernel_dimension"] == 0
