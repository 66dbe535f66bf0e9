"""Smoke test for the nrep Python extension.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import json
import math

import nrep


def close(a, b, tol):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def main():
    lambdas = [0.8, 0.7, 0.6, 0.4, 0.3, 0.2]
    report = nrep.check_bd(lambdas)
    assert report["pass"] and report["check"] == "bd", report

    bad = nrep.check_bd([0.95, 0.95, 0.55, 0.45, 0.05, 0.05])
    assert not bad["pass"] and math.isclose(bad["slack"], -0.35, abs_tol=1e-12), bad

    coeffs, psi = nrep.construct_bd_preimage(lambdas)
    assert math.isclose(coeffs["a2"] + coeffs["b2"], 0.8, abs_tol=1e-12)
    assert close(psi.spectrum(), lambdas, 1e-10), psi.spectrum()

    again = nrep.FermionState.from_json(psi.to_json())
    assert close(again.amplitudes, psi.amplitudes, 0.0)

    rnd = nrep.FermionState.random(3, 6, 7)
    assert (rnd.n, rnd.r, rnd.dim) == (3, 6, 20)
    spec = rnd.spectrum()
    assert all(abs(spec[k] + spec[5 - k] - 1) < 1e-8 for k in range(3))
    gamma = rnd.one_rdm()
    assert math.isclose(sum(gamma[i][i].real for i in range(6)), 3.0, abs_tol=1e-12)

    nf = nrep.natural_form(rnd)
    assert nf["leakage"] < 1e-8
    w = nrep.weyl_blocks(nf["coefficients"])
    assert close(w["implied_lambdas"], nf["lambdas"], 1e-9)

    split = nrep.coleman_split(rnd)
    assert split["reconstruction_residual"] < 1e-9
    assert max(split["strong_orth_residuals"]) < 1e-8

    assert nrep.check_weyl_2x2([0.7, 0.3], [0.6, 0.4], [1.2, 0.8])["pass"]

    camp = nrep.run_campaign("bd", 3, 6, 200, 42)
    assert camp["violations"] == 0 and camp["campaign"] == "bd_necessity"
    assert camp == nrep.run_campaign("bd", 3, 6, 200, 42)

    try:
        nrep.check_bd([0.5] * 5)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print(json.dumps({"nrep": nrep.__version__, "smoke_test": "ok", "bd_worst": camp["worst_residual"]}))


if __name__ == "__main__":
    main()
