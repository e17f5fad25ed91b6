"""Smoke tests for the roughflow python module (run under ctest)."""

import math
import sys

import numpy as np

import roughflow as rf


def check(cond, label):
    if not cond:
        print(f"FAIL: {label}")
        sys.exit(1)
    print(f"ok: {label}")


def main():
    # group algebra: geometric elements need Sym(level2) = outer(a, a)/2
    a1 = np.array([1.0, 0.0])
    a2 = np.array([0.0, 1.0])
    g = rf.GroupElement(a1, 0.5 * np.outer(a1, a1))
    h = rf.GroupElement(a2, 0.5 * np.outer(a2, a2))
    gh = rf.chen_mul(g, h)
    check(abs(gh.level2[0, 1] - 1.0) < 1e-15, "chen cross term")
    check(rf.homogeneous_norm(rf.chen_mul(g, rf.inverse(g))) < 1e-15, "inverse cancels")
    check(rf.is_geometric(gh), "products stay geometric")
    check(abs(rf.homogeneous_norm(rf.dilate_element(gh, 2.0)) -
              2.0 * rf.homogeneous_norm(gh)) < 1e-12, "dilation homogeneity")

    # lift + variation
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    x = rf.lift_piecewise_linear(pts, [0.0, 0.25, 0.5, 0.75])
    check(len(x) == 4 and x.dim == 2, "lift shape")
    check(rf.pvar_norm(x, 2.5) > 0.0, "pvar positive")
    check(abs(rf.distance(x.value(0), x.value(3)) -
              rf.homogeneous_norm(rf.chen_mul(rf.inverse(x.value(0)), x.value(3)))) <
          1e-15, "distance definition")

    # gaussian driver determinism
    a = rf.sample_fbm(d=2, hurst=0.4, n=32, seed=9)
    b = rf.sample_fbm(d=2, hurst=0.4, n=32, seed=9)
    check(np.array_equal(a.level1(), b.level1()), "fbm seed determinism")
    check(a.level1().shape == (33, 2), "fbm sample shape")

    # driftless solve against the exact constant-fields answer
    sigma = rf.sigma_preset("constant_fields", matrix=np.array([[1.0, 2.0],
                                                                [0.0, 1.0]]))
    traj = rf.solve_driftless(sigma, a, np.zeros(2), 0.0, 1.0)
    endpoint = np.asarray(traj["values"])[-1]
    expect = np.array([[1.0, 2.0], [0.0, 1.0]]) @ a.level1()[-1]
    check(np.linalg.norm(endpoint - expect) < 1e-10, "constant fields exact")

    # full flow with drift; dilate the driver so single grid cells pass the
    # partition probes (they cannot be split further)
    drift = rf.drift_preset("cubic_inward", m=2)
    check(not drift.is_zero, "drift preset wiring")
    res = rf.flow(drift, rf.sigma_preset("sin_rotation"), a.dilate(0.4), 0.0, 1.0,
                  np.array([0.5, -0.2]))
    check(res["budget"] > 0.0, "flow budget positive")
    check(len(res["partition"]) >= 2, "flow partition present")
    values = np.asarray(res["values"])
    check(values.shape[1] == 2 and np.isfinite(values).all(), "flow values finite")
    check(abs(res["sup_norm"] - np.linalg.norm(values, axis=1).max()) < 1e-12,
          "sup norm consistent")

    # growth-constant fit helper
    c = rf.fit_sup_constant(res["sup_norm"], math.hypot(0.5, -0.2), 1.0)
    check(c >= 0.0, "fit constant nonnegative")

    print("python smoke: all checks passed")


if __name__ == "__main__":
    main()
