"""Command-line entry point: ``greybdg <command> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import io, oracle, verify
from .backgrounds import SolitonParams, grey_soliton
from .dynamics import CanonicalState, evolve as evolve_state, hamiltonian, reconstruct, soliton_track
from .grid import DomainSpec, blank, write_field_csv
from .modes import continuum_mode, dispersion, factorization_check, mode_table_rows, uv_functions
from .spectrum import mode_set, quantize
from .zeromodes import (
    limitk_modes,
    mixing_amplitudes,
    ring_zero_modes,
    translation_mode,
    zero_mode_mixing,
)

log = logging.getLogger("greybdg")

DEFAULTS = {
    "mu": 1.0,
    "beta": 0.4,
    "L": 40.0,
    "m": 0,
    "N": 1024,
    "n": 16,
    "seed": 0,
    "out": ".",
    "t": None,
    "dt": None,
    "k0": None,
    "theta": 0.7,
    "pou_L": 10.0,
    "pou_N": 512,
    "pou_n": 64,
    "n_pairs": 20,
}
TYPES = {"m": int, "N": int, "n": int, "seed": int, "pou_N": int, "pou_n": int, "n_pairs": int, "out": str}


class UsageError(Exception):
    pass


def read_config(path):
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    cfg = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"bad config line: {raw!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        cfg[k] = v
    return cfg


def settings(args):
    s = dict(DEFAULTS)
    if args.config:
        for k, v in read_config(args.config).items():
            if k not in DEFAULTS:
                raise UsageError(f"unknown config key {k!r}")
            s[k] = v
    for k in DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            s[k] = v
    for k, v in s.items():
        if v is None or isinstance(v, (int, float)) and not isinstance(v, bool):
            continue
        s[k] = TYPES.get(k, float)(v)
    return s


def ring_params(s):
    try:
        return SolitonParams.on_ring(s["mu"], s["beta"], s["L"], s["m"])
    except ValueError as e:
        raise UsageError(str(e)) from e


def line_params(s):
    try:
        return SolitonParams(s["mu"], s["beta"])
    except ValueError as e:
        raise UsageError(str(e)) from e


def _out(s, name):
    d = Path(s["out"])
    d.mkdir(parents=True, exist_ok=True)
    return d / name


def _emit(s, name, doc):
    path = _out(s, name)
    io.write_json(path, doc)
    failed = [c["check_name"] for c in doc["checks"] if not c["pass"]]
    for c in doc["checks"]:
        print(f"{'PASS' if c['pass'] else 'FAIL'} {c['check_name']}: measured {c['measured']:.3g} (tol {c['tolerance']:.3g})")
    print(f"report written to {path}")
    return 1 if failed else 0


def _echo(p):
    return {"mu": p.mu, "beta": p.beta, "v": p.v, "kappa": p.kappa, "c": p.c}


# ------------------------------------------------------------------ commands

def cmd_soliton(s):
    p = ring_params(s)
    f = blank(p.domain, s["N"])
    psi = grey_soliton(p, f.x)
    path = _out(s, "soliton.csv")
    io.write_csv(path, ["x", "re_psi", "im_psi", "density"], [[x, z.real, z.imag, abs(z) ** 2] for x, z in zip(f.x, psi)])
    print(json.dumps(_echo(p), sort_keys=True))
    return 0


def cmd_spectrum(s):
    p = ring_params(s)
    spec = quantize(p, p.domain.L, s["n"])
    io.write_csv(_out(s, "spectrum.csv"), ["index", "k", "omega", "N", "residual"], spec.rows())
    print(f"{spec.roots.size} roots written; skipped intervals {spec.skipped}")
    return 0


def cmd_modes(s, k_list):
    p = ring_params(s)
    roots = quantize(p, p.domain.L, s["n"]).roots
    if k_list:
        want = [float(k) for k in k_list.split(",")]
        roots = np.array([roots[np.argmin(np.abs(roots - k))] for k in want])
    modes = [continuum_mode(p, k) for k in roots]
    x = blank(p.domain, s["N"]).x
    io.write_csv(_out(s, "modes.csv"), ["k", "omega", "N", "x", "re_R", "im_R", "re_S", "im_S"], mode_table_rows(modes, x))
    print(f"{len(modes)} mode profiles written")
    return 0


def suite_ortho(s):
    p = ring_params(s)
    g = blank(p.domain, s["N"])
    G = verify.gram_matrices(mode_set(p, s["n"]), g)
    prm = {"mu": p.mu, "beta": p.beta, "L": p.domain.L, "n": s["n"], "N": s["N"]}
    return [
        verify.check("M_RS_identity", prm, 1e-6, G["rs_minus_identity"]),
        verify.check("M_RR_zero", prm, 1e-6, G["rr_max"]),
        verify.check("M_SS_zero", prm, 1e-6, G["ss_max"]),
        verify.check("switching_symmetry", prm, 1e-8, G["switch_asym"]),
    ]


def suite_complete(s):
    pl = line_params(s)
    kap = pl.kappa
    K = verify.completeness_kernels(pl, 1 / kap, -1 / kap, 40 * kap)
    prm = {"mu": pl.mu, "beta": pl.beta, "x": 1 / kap, "y": -1 / kap, "k_max": 40 * kap}
    out = [
        verify.check("K2_zero", prm, 1e-8, abs(K["K2"])),
        verify.check("K1_regular_part", prm, 0.02, abs(K["K1"] / K["K1_target"] - 1)),
        verify.check("K3_corrected", prm, 1e-3, abs(K["K3"] - K["K3_target"])),
    ]
    try:
        pr = SolitonParams.on_ring(pl.mu, pl.beta, s["pou_L"])
    except ValueError as e:
        raise UsageError(str(e)) from e
    g = blank(pr.domain, s["pou_N"])
    ms = mode_set(pr, s["pou_n"], k_max=(s["pou_n"] + 2) * np.pi / pr.domain.L)
    full = verify.partition_of_unity_ring(ms, g)
    nz = verify.partition_of_unity_ring(ms[:-1], g)
    sech2 = 1 / np.cosh(pr.kappa * (g.x - pr.x0)) ** 2
    prm2 = {"mu": pr.mu, "beta": pr.beta, "L": pr.domain.L, "n": s["pou_n"], "N": s["pou_N"]}
    corr = abs(verify.profile_correlation(nz["deficit"], sech2))
    ratio = nz["max_deficit"] / full["max_deficit"]
    out += [
        verify.check("deficit_sech2_correlation", prm2, 0.99, corr, corr > 0.99),
        verify.check("deficit_drop_with_translation_mode", prm2, 10.0, ratio, ratio >= 10),
        verify.check("probe_defect", prm2, 1e-6, full["probe_defect"]),
    ]
    return out


def suite_residual(s):
    p = ring_params(s)
    g = blank(p.domain, s["N"])
    prm = {"mu": p.mu, "beta": p.beta, "L": p.domain.L, "n": s["n"], "N": s["N"]}
    worst = max(max(verify.bdg_residual(p, m, g)) for m in mode_set(p, s["n"]))
    return [verify.check("bdg_residual_ring_modes", prm, 1e-8, worst)]


def suite_factorize(s):
    pl = line_params(s)
    kap = pl.kappa
    dom = DomainSpec.line(12 / kap)
    g = blank(dom, 2401)
    out = []
    for k in (0.3 * kap, -kap, 2.5 * kap):
        f = factorization_check(pl, k, g)
        prm = {"mu": pl.mu, "beta": pl.beta, "k": k}
        out += [
            verify.check("Qdag_sigma_equals_s", prm, 1e-8, f["Qdag_sigma"]),
            verify.check("first_order_relation", prm, 1e-8, f["first_order"]),
            verify.check("quartic_relation", prm, 1e-5, f["quartic"]),
            verify.check("quartic_detuned_fails", prm, 1e-3, f["quartic_detuned"], f["quartic_detuned"] > 1e-3),
        ]
    return out


def suite_zero(s):
    p = ring_params(s)
    g = blank(p.domain, s["N"])
    ms = mode_set(p, s["n"])
    prm = {"mu": p.mu, "beta": p.beta, "L": p.domain.L, "n": s["n"], "theta": s["theta"]}
    neg = [m for m in ms if m.mass < 0]
    phase, trans = ring_zero_modes(p)
    res = max(max(verify.bdg_residual(p, m, g)) for m in (phase, trans))
    G = verify.gram_matrices([phase, trans], g)
    rng = np.random.default_rng(s["seed"])
    q0, p0, qz, pz = rng.standard_normal(4)
    x = g.x
    a0, az = phase.sample(x), trans.sample(x)
    before = a0[0] * q0 + 1j * a0[1] * p0 + az[0] * qz + 1j * az[1] * pz
    n0, nz = zero_mode_mixing(s["theta"], phase, trans)
    b0, bz = n0.sample(x), nz.sample(x)
    Q0, P0, QZ, PZ = mixing_amplitudes(s["theta"], q0, p0, qz, pz)
    after = b0[0] * Q0 + 1j * b0[1] * P0 + bz[0] * QZ + 1j * bz[1] * PZ
    mix = float(np.abs(after - before).max())
    Gm = verify.gram_matrices([n0, nz], g)
    pline = line_params(s)
    lg = blank(DomainSpec.line(12 / pline.kappa), 2401)
    lres = max(max(verify.bdg_residual(pline, m, lg, interior=16)) for m in limitk_modes(pline) + (translation_mode(pline),))
    return [
        verify.check("unique_negative_mass", prm, 0.5, float(len(neg) != 1), len(neg) == 1 and neg[0].eta == "z"),
        verify.check("ring_zero_mode_residual", prm, 1e-8, res),
        verify.check("ring_zero_mode_gram", prm, 1e-6, G["rs_minus_identity"]),
        verify.check("mixing_invariance", prm, 1e-10, mix),
        verify.check("mixing_mass_pair", prm, 1e-6, abs(Gm["M_RS"][0, 0] - 1) + abs(Gm["M_RS"][1, 1] - 1)),
        verify.check("line_zero_mode_residual", {"mu": pline.mu, "beta": pline.beta}, 1e-8, lres),
    ]


SUITES = {
    "ortho": suite_ortho,
    "complete": suite_complete,
    "residual": suite_residual,
    "factorize": suite_factorize,
    "zero": suite_zero,
}


def cmd_verify(s, suite):
    checks = SUITES[suite](s)
    return _emit(s, f"verify_{suite}.json", io.report_document(f"verify/{suite}", checks, {"suite": suite}))


def _initial_state(p, ms, init, rng):
    kind, _, arg = init.partition(":")
    n = len(ms)
    q, pp = np.zeros(n), np.zeros(n)
    ks = np.array([m.eta if not m.is_zero else np.nan for m in ms], dtype=float)
    if kind == "mode":
        q[np.nanargmin(np.abs(ks - float(arg)))] = 1.0
    elif kind == "packet":
        k0, sigma = (float(v) for v in arg.split(","))
        env = np.exp(-((ks - k0) ** 2) / (2 * sigma**2))
        env = np.nan_to_num(env)
        q = env * rng.standard_normal(n)
        pp = env * rng.standard_normal(n)
    elif kind == "shift":
        iz = [i for i, m in enumerate(ms) if m.eta == "z"][0]
        q[iz] = 2 * np.sqrt(p.kappa) * float(arg)
    else:
        raise UsageError("--init must be mode:k, packet:k0,sigma or shift:eps")
    return CanonicalState(ms, q, pp)


def cmd_evolve(s, init):
    p = ring_params(s)
    rng = np.random.default_rng(s["seed"])
    ms = mode_set(p, s["n"])
    g = blank(p.domain, s["N"])
    try:
        st = _initial_state(p, ms, init, rng)
    except (ValueError, IndexError) as e:
        raise UsageError(f"bad --init {init!r}: {e}") from e
    t_end = s["t"] if s["t"] is not None else 10 / p.c
    dt = s["dt"] if s["dt"] is not None else t_end / 100
    nsteps = max(1, int(round(t_end / dt)))
    dt = t_end / nsteps
    rows, states = [], [st]
    for _ in range(nsteps):
        states.append(evolve_state(states[-1], dt))
    track = soliton_track(p, states, g)
    for stt, x0 in zip(states, track):
        rows.append([stt.t, *stt.q, *stt.p, hamiltonian(stt), x0])
    labels = [str(m.eta) for m in ms]
    header = ["t"] + [f"q_{e}" for e in labels] + [f"p_{e}" for e in labels] + ["H2", "x0_track"]
    io.write_csv(_out(s, "timeseries.csv"), header, rows)
    write_field_csv(_out(s, "final_field.csv"), reconstruct(states[-1], g))
    print(f"{nsteps} steps to t={t_end:.6g}; H2 drift {abs(hamiltonian(states[-1]) - hamiltonian(st)):.3g}")
    return 0


def _linear_check(p, s):
    g = blank(p.domain, s["N"])
    ms = mode_set(p, s["n"])
    i = min(range(len(ms) - 2), key=lambda j: abs(ms[j].eta - p.kappa))
    st = CanonicalState(ms, np.eye(len(ms))[i], np.zeros(len(ms)))
    t = s["t"] if s["t"] is not None else 10 / p.c
    num = oracle.linear_propagate(p, reconstruct(st, g), t, s["dt"])
    ex = reconstruct(evolve_state(st, t), g)
    err = float(np.linalg.norm(num.values - ex.values) / np.linalg.norm(ex.values))
    return verify.check("linear_vs_exact", {"k": ms[i].eta, "t": t, "N": s["N"]}, 1e-5, err)


def cmd_oracle(s, task):
    if task == "eig":
        p = ring_params(s)
        r = oracle.bdg_eigensolve(p, blank(p.domain, s["N"]), s["n_pairs"], vectors=True)
        prm = {"mu": p.mu, "beta": p.beta, "L": p.domain.L, "N": s["N"]}
        checks = [
            verify.check("no_complex_eigenvalues", prm, 0.5, float(r.flagged.size), r.flagged.size == 0),
            verify.check("zero_cluster_rank_2", prm, 0.5, float(r.zero_rank), r.zero_rank == 2),
            verify.check("zero_cluster_small", prm, 1e-6 * p.mu, float(np.abs(r.zero_eigenvalues).max())),
            verify.check("biorthonormality", prm, 1e-8, r.biorthogonality_error),
        ]
        meta = {"omegas": r.omegas, "signs": r.signs}
    elif task == "linear":
        p = ring_params(s)
        checks, meta = [_linear_check(p, s)], {}
    elif task == "nlse":
        p = ring_params(s)
        g = blank(p.domain, s["N"])
        psi0 = grey_soliton(p, g)
        t = s["t"] if s["t"] is not None else 20 / p.c
        dt = s["dt"] if s["dt"] is not None else 2e-3
        out = oracle.nlse_propagate(p, psi0, t, dt)
        drift = float(np.abs(np.abs(out.values) ** 2 - np.abs(psi0.values) ** 2).max())
        norm = float(abs(np.sum(np.abs(out.values) ** 2) / np.sum(np.abs(psi0.values) ** 2) - 1))
        prm = {"mu": p.mu, "beta": p.beta, "t": t, "dt": dt, "N": s["N"]}
        checks = [
            verify.check("stationary_density", prm, 1e-6, drift),
            verify.check("norm_conservation", prm, 1e-10, norm),
        ]
        meta = {}
    elif task == "transmission":
        pl = line_params(s)
        k0 = s["k0"] if s["k0"] is not None else pl.kappa
        checks = []
        for direction in (1, -1):
            for control in (False, True):
                r = oracle.transmission_probe(pl, k0, direction, control)
                prm = {"mu": pl.mu, "beta": pl.beta, "k0": k0, "direction": direction, "control": control}
                tol = 1e-6 if control else 1e-4
                checks += [
                    verify.check("reflected_fraction", prm, tol, r.R),
                    verify.check("T_plus_R", prm, 1e-6, abs(r.total - 1)),
                ]
        meta = {}
    else:
        raise UsageError(f"unknown task {task}")
    return _emit(s, f"oracle_{task}.json", io.report_document(f"oracle/{task}", checks, meta))


def eigenvector_agreement(p, r, ms, grid):
    """Distance of each analytic (u, v) pair from the oracle eigenspace at its frequency."""
    om_or = r.omegas
    n = grid.n_points
    worst = 0.0
    for m in ms:
        if m.is_zero:
            continue
        j = np.where(np.abs(om_or - m.omega) < 1e-6 * max(1.0, m.omega))[0]
        if j.size == 0:
            continue
        u, vst = uv_functions(m, grid.x)
        a = np.concatenate([u, np.conj(vst)])
        B = r.vectors[:, j]
        coef, *_ = np.linalg.lstsq(B, a, rcond=None)
        worst = max(worst, float(np.linalg.norm(B @ coef - a) / np.linalg.norm(a)))
    return worst


def cmd_compare(s, analytic_path, oracle_path):
    p = ring_params(s)
    g = blank(p.domain, s["N"])
    prm = {"mu": p.mu, "beta": p.beta, "L": p.domain.L, "N": s["N"]}
    npairs = s["n_pairs"]
    spec = quantize(p, p.domain.L, max(s["n"], npairs + 8))
    an = np.sort(dispersion(p, spec.roots))[:npairs]
    if analytic_path:
        _, data = io.read_csv(analytic_path)
        an = np.sort(data[:, 2])[:npairs]
    if oracle_path:
        doc = json.loads(Path(oracle_path).read_text())
        om = np.sort(np.asarray(doc["meta"]["omegas"], dtype=float))[:npairs]
        vec_err = None
    else:
        r = oracle.bdg_eigensolve(p, g, npairs, vectors=True)
        om = r.omegas
        ms = [continuum_mode(p, k) for k in spec.roots]
        vec_err = eigenvector_agreement(p, r, ms, g)
    m = min(an.size, om.size)
    disp = float(np.max(np.abs(om[:m] / an[:m] - 1)))
    checks = [verify.check("dispersion_rel_error", prm, 1e-6, disp)]
    if vec_err is not None:
        checks.append(verify.check("eigenvector_subspace_error", prm, 1e-6, vec_err))
    rng = np.random.default_rng(s["seed"])
    ms = mode_set(p, s["n"])
    kap = p.kappa
    w = np.array([0.0 if mm.is_zero else np.exp(-(mm.eta / kap) ** 2) for mm in ms])
    st = CanonicalState(ms, w * rng.standard_normal(len(ms)), w * rng.standard_normal(len(ms)))
    t = s["t"] if s["t"] is not None else 10 / p.c
    num = oracle.linear_propagate(p, reconstruct(st, g), t, s["dt"])
    ex = reconstruct(evolve_state(st, t), g)
    err = float(np.linalg.norm(num.values - ex.values) / np.linalg.norm(ex.values))
    checks.append(verify.check("propagation_rel_error", dict(prm, t=t), 1e-5, err))
    return _emit(s, "compare.json", io.report_document("compare", checks, {"n_pairs": npairs}))


# ------------------------------------------------------------------ parser

def _common(sp):
    sp.add_argument("--mu", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--L", type=float)
    sp.add_argument("--m", type=int)
    sp.add_argument("--N", type=int, help="grid points")
    sp.add_argument("--n", type=int, help="modes per sign")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", help="output directory")
    sp.add_argument("--config", help="key=value configuration file")


def build_parser():
    ap = argparse.ArgumentParser(prog="greybdg", description="Exact BdG modes around grey solitons, with numerical checks.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("soliton", "spectrum"):
        _common(sub.add_parser(name))
    sp = sub.add_parser("modes")
    _common(sp)
    sp.add_argument("--k-list", dest="k_list", help="comma-separated k values (nearest roots are used)")
    sp = sub.add_parser("verify")
    _common(sp)
    sp.add_argument("--suite", choices=sorted(SUITES), required=True)
    sp.add_argument("--theta", type=float)
    sp = sub.add_parser("evolve")
    _common(sp)
    sp.add_argument("--init", required=True, help="mode:k | packet:k0,sigma | shift:eps")
    sp.add_argument("--t", type=float)
    sp.add_argument("--dt", type=float)
    sp = sub.add_parser("oracle")
    _common(sp)
    sp.add_argument("--task", choices=["eig", "linear", "nlse", "transmission"], required=True)
    sp.add_argument("--t", type=float)
    sp.add_argument("--dt", type=float)
    sp.add_argument("--k0", type=float)
    sp.add_argument("--n-pairs", dest="n_pairs", type=int)
    sp = sub.add_parser("compare")
    _common(sp)
    sp.add_argument("--analytic", help="spectrum CSV to use instead of recomputing")
    sp.add_argument("--oracle", dest="oracle_report", help="oracle eig JSON to use instead of recomputing")
    sp.add_argument("--t", type=float)
    sp.add_argument("--dt", type=float)
    sp.add_argument("--n-pairs", dest="n_pairs", type=int)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        s = settings(args)
        if args.command == "soliton":
            return cmd_soliton(s)
        if args.command == "spectrum":
            return cmd_spectrum(s)
        if args.command == "modes":
            return cmd_modes(s, args.k_list)
        if args.command == "verify":
            return cmd_verify(s, args.suite)
        if args.command == "evolve":
            return cmd_evolve(s, args.init)
        if args.command == "oracle":
            return cmd_oracle(s, args.task)
        return cmd_compare(s, args.analytic, args.oracle_report)
    except UsageError as e:
        print(f"greybdg: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
