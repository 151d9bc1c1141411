import time

import numpy as np
import pytest

import ncgeom as ng


@pytest.fixture(scope="session")
def sphere1():
    return ng.build_sphere(1)


@pytest.fixture(scope="session")
def sphere1_report(sphere1):
    t0 = time.time()
    report, cx = ng.sphere_report(sphere1)
    return {"report": report, "complex": cx, "seconds": time.time() - t0}


@pytest.fixture(scope="session")
def sphere1_basis(sphere1, sphere1_report):
    return ng.build_cotangent_basis(sphere1_report["complex"], sphere1.e)


@pytest.fixture(scope="session")
def torus15():
    return ng.build_torus(1, 5)


@pytest.fixture(scope="session")
def torus15_report(torus15):
    t0 = time.time()
    report, cx, ref = ng.torus_report(torus15)
    return {"report": report, "complex": cx, "reference": ref,
            "seconds": time.time() - t0}


@pytest.fixture(scope="session")
def brst1():
    data, forms, checks = ng.build_brst(1)
    return {"data": data, "forms": forms, "checks": checks}


@pytest.fixture(scope="session")
def brst1_complex(brst1):
    return ng.build_form_complex(brst1["data"], kmax=4, full_depth=2)


@pytest.fixture(scope="session")
def susy1():
    d, dbar, dtil, report = ng.build_broken_susy(1)
    return {"D": d, "Dbar": dbar, "dtil": dtil, "report": report}


@pytest.fixture(scope="session")
def doubled15(torus15):
    return ng.build_doubled(torus15)


@pytest.fixture(scope="session")
def kahler15(doubled15):
    data, extras = ng.build_kahler(doubled15)
    return {"data": data, "extras": extras}


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240810)
