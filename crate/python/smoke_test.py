"""Smoke test for the pylfunlab extension module.

Build and install it first:

    pip install --no-build-isolation ./crates/python
    python python/smoke_test.py
"""

import json
import math
import os
import sys
import tempfile

import pylfunlab as lf


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    chi4 = lf.Instance("chi4")
    assert chi4.degree == 1 and chi4.kappa == 1 and chi4.real_coefficients
    assert close(chi4.l_value(1 + 0j), math.pi / 4, 1e-12)
    # L(2, chi_-4) is Catalan's constant.
    assert close(chi4.l_value(2 + 0j), 0.915965594177219015, 1e-12)
    assert chi4.coefficient(3) == -1 and chi4.coefficient(5) == 1

    zeros = lf.find_zeros(chi4, 30.0)
    assert zeros.certified and len(zeros) == zeros.argument_count == 10
    assert close(zeros.ordinates[0], 6.020948904697597, 1e-9)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "zeros.json")
        zeros.save(path)
        assert lf.ZeroSet.load(path).ordinates == zeros.ordinates

    r = lf.plancherel_check(chi4, 0.0, 0.05, 1.0)
    assert r.passed and r.residual < 1e-10, r

    reports = lf.euler_hadamard(chi4, zeros, [1.05 + 5j], 20.0, tail_height=20.0, big_k=[8.0])
    assert [x.op for x in reports] == ["euler-hadamard-full", "euler-hadamard-truncated"]
    assert all(x.passed for x in reports)

    m, t_star = lf.halasz_m(chi4, 1e4)
    assert m > -0.5 and t_star >= 0.0
    assert lf.halasz_ratio(chi4, 1e4).passed

    tw = lf.twist_phi(chi4, 10.0)
    assert close(tw["n"], math.exp(10.0), 1e-12)
    try:
        lf.twist_phi(chi4, 8.0)
    except lf.LfunlabError as e:
        assert "undefined" in str(e)
    else:
        raise AssertionError("S(e^8) = 0 for chi4, so N is undefined")

    records, summary = lf.repulsion_scan(chi4, 0.5, [6.0, 8.0, 10.0], [0.02, 0.05], zeros)
    assert len(records) == summary["records"] == 6
    assert summary["small_discs_empty"]
    json.dumps(records)

    try:
        lf.plancherel_check(chi4, 0.0, 0.05, 1.0, constants={"no_such_constant": 1.0})
    except lf.LfunlabError:
        pass
    else:
        raise AssertionError("unknown constant accepted")

    delta = lf.Instance("delta", delta_cache=5000)
    # Coefficients are normalised: tau(n) / n^(11/2).
    assert close(delta.coefficient(2).real, -24 / 2**5.5, 1e-14)
    assert close(delta.root_number.real, 1.0, 1e-12)

    print("pylfunlab smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
