"""Acceptance criteria 1-11, one battery each; a PASS/FAIL line per criterion is printed at the end."""
from math import comb

import pytest

from conftest import ACCEPTANCE_LINES
from spincoh.clifford import bilinear, build_even_rep
from spincoh.cohomology import PreconditionError, spencer_cohomology
from spincoh.fiber import FiberAlgebra
from spincoh.fierz import DEFAULT_SEED
from spincoh.holonomy import annihilator_space
from spincoh.multilinear import ONE
from spincoh.verification import run_battery

CRITERIA = [
    (1, "signs"),
    (2, "fierz"),
    (3, "stabilizers"),
    (4, "nilpotency"),
    (5, "curvature"),
    (6, "torus"),
    (7, "identifications"),
    (8, "spencer"),
    (9, "spectral"),
    (10, "cy3"),
    (11, "laplacian"),
]


def _record(label: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_LINES.append(f"{label}: {'PASS' if passed else 'FAIL'}" + (f" ({detail})" if detail else ""))


@pytest.mark.slow
@pytest.mark.parametrize("number,key", CRITERIA, ids=[f"criterion_{n}_{k}" for n, k in CRITERIA])
def test_criterion(number, key):
    battery = run_battery(key, seed=DEFAULT_SEED)
    detail = f"{len(battery.checks)} checks, {battery.seconds:.1f} s"
    if battery.notes:
        detail += "; " + "; ".join(battery.notes)
    _record(f"criterion {number:2d} {battery.title}", battery.passed, detail)
    assert battery.passed, battery.failures


# sub-claims of criterion 8 that were measured false; kept as strict expected failures

@pytest.mark.xfail(strict=True, reason="H^(0,q) vanishes for q >= 1: D-hat maps Sym^1 (x) C^(q-1) onto C^q")
@pytest.mark.parametrize("kind", ["A", "B"])
def test_criterion_8_h0q_is_whole_fibre_degree(kind):
    c = bilinear(build_even_rep(1), kind)
    r = spencer_cohomology(c, {0: ONE, 1: ONE}, qmax=3)
    h0 = [r.dims[(0, q)] for q in range(3)]
    stated = [comb(FiberAlgebra(c, "full").k, q) for q in range(3)]
    _record(f"criterion  8 sub-claim H^(0,q) = C^q at n=2 {kind}", h0 == stated, f"measured {h0}, stated {stated}")
    assert h0 == stated


@pytest.mark.xfail(strict=True, reason="at n=4 every spinor has a nonzero annihilator, so C_zeta is never invertible")
def test_criterion_8_n4_instance():
    rep = build_even_rep(2)
    zeta = {0: ONE, 1: ONE, 2: ONE, 3: ONE}
    found = True
    try:
        spencer_cohomology(bilinear(rep, "A"), zeta, qmax=1)
    except PreconditionError:
        found = False
    _record("criterion  8 sub-claim n=4 Spencer instance", found,
            f"annihilator dim {annihilator_space(rep, zeta).dim}")
    assert found
