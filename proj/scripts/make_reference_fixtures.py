#!/usr/bin/env python3
"""Regenerate tests/fixtures/certification_reference.json.

Computes the convergence-certification constants for a batch of moduli sets
with 60-digit arithmetic, then stores the nearest-double values. The C++
implementation must reproduce them to 1e-10 relative. Inputs are rounded to
6 decimals so both sides parse bit-identical doubles; lambda and the probe
rho are pinned in the fixture, so no RNG or line-search has to be replicated
on the C++ side.

Run from the repository root:  python3 scripts/make_reference_fixtures.py
"""

import json
import pathlib
import random

from mpmath import mp, mpf, sqrt

mp.dps = 60

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "certification_reference.json"


def draw_moduli(rng, arg, ratio_rng=(0.90, 0.99), coup_rng=(0.0, 0.12), scale_rng=(0.5, 2.0)):
    scale = round(rng.uniform(*scale_rng), 6)
    ratio = round(rng.uniform(*ratio_rng), 6)
    coup = round(rng.uniform(*coup_rng), 6)
    lip_own = scale
    strong = round(ratio * scale, 6)
    lip_cross = round(coup * scale, 6)
    return {
        "strong": strong,
        "lip_first": lip_own,   # coefficient of the monotone argument
        "lip_second": lip_cross,
        "monotone_arg": arg,
    }


def constants(case):
    m = case["moduli"]
    lam = mpf(case["lambda"])
    a1 = mpf(m["vi_first"]["strong"])
    b1 = mpf(m["vi_first"]["lip_first"])
    eps1 = mpf(m["vi_first"]["lip_second"])
    a2 = mpf(m["vi_second"]["strong"])
    b2 = mpf(m["vi_second"]["lip_first"])
    eps2 = mpf(m["vi_second"]["lip_second"])
    s1 = mpf(m["image_first"]["strong"])
    mu1 = mpf(m["image_first"]["lip_first"])
    nu1 = mpf(m["image_first"]["lip_second"])
    s2 = mpf(m["image_second"]["strong"])
    mu2 = mpf(m["image_second"]["lip_first"])
    nu2 = mpf(m["image_second"]["lip_second"])
    na = mpf(m["norm_a"])
    nb = mpf(m["norm_b"])

    theta3 = sqrt(1 - 2 * lam * s1 + lam**2 * mu1**2)
    theta4 = sqrt(1 - 2 * lam * s2 + lam**2 * mu2**2)
    d1 = 1 + 2 * theta3
    d2 = 1 + 2 * theta4
    e1 = d1 + 2 * lam * nu2
    e2 = d2 + 2 * lam * nu1
    e3 = d2 * eps2 + 2 * lam * nu1 * eps2
    e4 = d1 * eps1 + 2 * lam * nu2 * eps1

    exp = {
        "theta3": float(theta3), "theta4": float(theta4),
        "delta1": float(d1), "delta2": float(d2),
        "e1": float(e1), "e2": float(e2), "e3": float(e3), "e4": float(e4),
    }

    def index(alpha, beta, p, q):
        beta_ok = beta > p
        q_ok = q < 1
        # The margin condition alpha > pq + sqrt((beta^2-p^2)(1-q^2)) only
        # makes sense once beta > p and q < 1 hold.
        alpha_ok = False
        out = {"p": float(p), "q": float(q)}
        if beta_ok and q_ok:
            head = alpha - p * q
            disc = head**2 - (beta**2 - p**2) * (1 - q**2)
            alpha_ok = bool(head > 0 and disc > 0)
            if disc >= 0:
                denom = beta**2 - p**2
                out["center"] = float(head / denom)
                out["radius"] = float(sqrt(disc) / denom)
        out.update({"alpha_ok": alpha_ok, "beta_ok": bool(beta_ok), "q_ok": bool(q_ok)})
        return out, (alpha_ok and beta_ok and q_ok)

    i1, ok1 = index(a1, b1, e3 / e1, 1 / e1)
    i2, ok2 = index(a2, b2, e4 / e2, 1 / e2)
    exp["index1"] = i1
    exp["index2"] = i2

    feasible = ok1 and ok2
    if feasible:
        c1, r1 = mpf(i1["center"]), mpf(i1["radius"])
        c2, r2 = mpf(i2["center"]), mpf(i2["radius"])
        # Recompute at full precision to avoid double rounding in endpoints.
        def cr(alpha, beta, p, q):
            head = alpha - p * q
            denom = beta**2 - p**2
            return head / denom, sqrt(head**2 - denom * (1 - q**2)) / denom
        c1, r1 = cr(a1, b1, e3 / e1, 1 / e1)
        c2, r2 = cr(a2, b2, e4 / e2, 1 / e2)
        lo = max(c1 - r1, c2 - r2, mpf(0))
        hi = min(c1 + r1, c2 + r2)
        feasible = bool(lo < hi)
        if feasible:
            exp["rho_lo"] = float(lo)
            exp["rho_hi"] = float(hi)
    exp["feasible"] = bool(feasible)

    gam_candidates = [2 / na**2 for _ in [0] if na > 0] + [2 / nb**2 for _ in [0] if nb > 0]
    exp["gamma_hi"] = float(min(gam_candidates)) if gam_candidates else None

    if feasible:
        rho = round((exp["rho_lo"] + exp["rho_hi"]) / 2, 6)
        if not (exp["rho_lo"] < rho < exp["rho_hi"]):
            rho = (exp["rho_lo"] + exp["rho_hi"]) / 2
        rho_mp = mpf(rho)
        theta1 = sqrt(1 - 2 * rho_mp * a1 + rho_mp**2 * b1**2)
        theta2 = sqrt(1 - 2 * rho_mp * a2 + rho_mp**2 * b2**2)
        k1 = e1 * theta1 + rho_mp * e3
        k2 = e2 * theta2 + rho_mp * e4
        exp["rho"] = rho
        exp["theta1"] = float(theta1)
        exp["theta2"] = float(theta2)
        exp["k1"] = float(k1)
        exp["k2"] = float(k2)
        exp["theta"] = float(max(k1, k2))
    return exp


def main():
    rng = random.Random(7)
    cases = []

    for i in range(12):
        moduli = {
            "vi_first": draw_moduli(rng, "first"),
            "vi_second": draw_moduli(rng, "second"),
            "image_first": draw_moduli(rng, "first"),
            "image_second": draw_moduli(rng, "second"),
            "norm_a": round(rng.uniform(0.7, 1.5), 6),
            "norm_b": round(rng.uniform(0.7, 1.5), 6),
        }
        if i % 2 == 0:
            # Near the per-map optimum sigma/mu^2, where theta_{3,4} bottom out.
            opts = [moduli[k]["strong"] / moduli[k]["lip_first"] ** 2
                    for k in ("image_first", "image_second")]
            lam = round(min(3.0, max(0.05, sum(opts) / 2)), 6)
        else:
            lam = round(rng.uniform(0.4, 1.2), 6)
        cases.append({"name": f"random-{i:02d}", "moduli": moduli, "lambda": lam})

    # Fully symmetric moduli: both index constants must coincide.
    sym_vi = {"strong": 0.95, "lip_first": 1.0, "lip_second": 0.05}
    sym_im = {"strong": 0.9, "lip_first": 1.0, "lip_second": 0.04}
    cases.append({
        "name": "symmetric",
        "moduli": {
            "vi_first": dict(sym_vi, monotone_arg="first"),
            "vi_second": dict(sym_vi, monotone_arg="second"),
            "image_first": dict(sym_im, monotone_arg="first"),
            "image_second": dict(sym_im, monotone_arg="second"),
            "norm_a": 1.0, "norm_b": 1.0,
        },
        "lambda": 0.8,
    })

    # Vacuous image maps: theta_{3,4} collapse to 1, delta to 3, q to 1/3.
    # Feasibility then needs roughly alpha > beta*sqrt(8)/3 ~ 0.9428*beta.
    zero_im = {"strong": 0.0, "lip_first": 0.0, "lip_second": 0.0}
    cases.append({
        "name": "zero-image",
        "moduli": {
            "vi_first": {"strong": 0.97, "lip_first": 1.0, "lip_second": 0.02,
                         "monotone_arg": "first"},
            "vi_second": {"strong": 0.96, "lip_first": 1.0, "lip_second": 0.03,
                          "monotone_arg": "second"},
            "image_first": dict(zero_im, monotone_arg="first"),
            "image_second": dict(zero_im, monotone_arg="second"),
            "norm_a": 1.2, "norm_b": 0.9,
        },
        "lambda": 0.5,
    })

    # Heavy coupling. The interval hypotheses still hold here, but the
    # contraction factor at the midpoint lands far above 1: the interval
    # formula alone is not a certificate in this regime, which is exactly
    # why certification also checks theta < 1 directly.
    cases.append({
        "name": "heavy-coupling",
        "moduli": {
            "vi_first": {"strong": 0.95, "lip_first": 1.0, "lip_second": 0.9,
                         "monotone_arg": "first"},
            "vi_second": {"strong": 0.95, "lip_first": 1.0, "lip_second": 0.9,
                          "monotone_arg": "second"},
            "image_first": dict(sym_im, monotone_arg="first"),
            "image_second": dict(sym_im, monotone_arg="second"),
            "norm_a": 1.0, "norm_b": 1.0,
        },
        "lambda": 0.8,
    })

    # Cross terms dominating the own-argument Lipschitz bound: beta > p fails.
    cases.append({
        "name": "cross-dominated",
        "moduli": {
            "vi_first": {"strong": 0.95, "lip_first": 1.0, "lip_second": 1.3,
                         "monotone_arg": "first"},
            "vi_second": {"strong": 0.95, "lip_first": 1.0, "lip_second": 1.3,
                          "monotone_arg": "second"},
            "image_first": dict(sym_im, monotone_arg="first"),
            "image_second": dict(sym_im, monotone_arg="second"),
            "norm_a": 1.0, "norm_b": 1.0,
        },
        "lambda": 0.8,
    })

    for case in cases:
        case["expected"] = constants(case)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"version": "sspvip-certification-reference-v1",
                               "cases": cases}, indent=1) + "\n")
    feasible = sum(1 for c in cases if c["expected"]["feasible"])
    print(f"wrote {OUT} ({len(cases)} cases, {feasible} feasible)")


if __name__ == "__main__":
    main()
