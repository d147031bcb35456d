"""Verification suites run by the command line tool.

Each suite takes a :class:`~bergman_qha.config.RunConfig` and returns a
:class:`SuiteResult`: one data table plus a list of pass/fail checks.  A
suite passes iff every check passes; informational rows carry
``contract=False`` and never affect the outcome.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .bergman import (
    Symbol, TruncatedSpace, op_norm, phi_operator, rank_one, toeplitz_matrix,
)
from .config import RunConfig
from .convolution import (
    conv_symbol_op, push_through_error, random_group_function, random_symbol,
    symbol_battery, young_report,
)
from .localization import (
    BOUND_SLACK, continuity_modulus_check, convergence_experiment, haar_measure_of_ball,
    localization_profile, s_br, s_br_complement, s_br_via_convolutions, s_g,
)
from .quadrature import DiskQuadrature, GroupQuadrature
from .representation import (
    column_zero_target, homomorphism_defect, pi_matrix, pi_matrix_series, schur_pairing,
    unitarity_defect,
)

GEOMETRY_SAMPLES = 1000
COLUMN_SAMPLES = 50
DEFECT_SAMPLES = 10
PUSH_THROUGH_SAMPLES = 5
YOUNG_SAMPLES = 50
DEFECT_BLOCK = 5


@dataclass
class Check:
    name: str
    value: float
    threshold: float
    contract: bool = True

    @property
    def ok(self):
        return bool(self.value <= self.threshold)


@dataclass
class SuiteResult:
    name: str
    header: list
    rows: list
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.ok for c in self.checks if c.contract)

    @property
    def failures(self):
        return [c for c in self.checks if c.contract and not c.ok]


def _rules(cfg):
    q = DiskQuadrature(cfg.radial_order, cfg.angular_order)
    return q, GroupQuadrature(q, cfg.circle_order)


def _rel(a, b):
    """Error of ``a`` against ``b`` relative to ``max(1, |b|)``."""
    return np.abs(a - b) / np.maximum(1.0, np.abs(b))


def geometry_errors(rng, samples=GEOMETRY_SAMPLES):
    """Max errors of the exact geometric identities over seeded samples."""
    g = geo.random_group_elements(rng, samples)
    h = geo.random_group_elements(rng, samples)
    z = geo.random_disk_points(rng, samples)
    w = geo.random_disk_points(rng, samples)
    lw = geo.lift_tau(w)
    g0 = geo.act(g, 0.0)
    zd, k = geo.decompose(g)
    rebuilt = geo.lift_tau(zd) @ geo.embed(k)
    return {
        "cocycle_multiplicativity": float(np.max(_rel(
            geo.cocycle(g @ h, z), geo.cocycle(g, geo.act(h, z)) * geo.cocycle(h, z)))),
        "cocycle_zero": float(np.max(np.abs(np.abs(geo.cocycle(g, 0.0)) - (1.0 - np.abs(g0) ** 2)))),
        "involution": float(np.max(np.abs(geo.act(lw, geo.act(lw, z)) - z))),
        "abs_value_identity": float(np.max(geo.abs_value_identity_check(g, h))),
        "pseudo_dist_invariance": float(np.max(np.abs(
            geo.pseudo_dist(geo.act(g, z), geo.act(g, w)) - geo.pseudo_dist(z, w)))),
        "decompose_roundtrip": float(np.max(np.abs(geo.act(rebuilt, z) - geo.act(g, z)))),
    }


def column_identity_errors(rng, space, q, samples=COLUMN_SAMPLES, max_radius=0.9):
    """``||pi_matrix(g) e_0 - conj(j(g,0)) K_{g.0}||`` for seeded ``g``."""
    g = geo.random_group_elements(rng, samples, max_radius)
    return np.array([
        np.linalg.norm(pi_matrix(g[i], space, q)[:, 0] - column_zero_target(g[i], space))
        for i in range(samples)
    ])


def defect_table(rng, degrees=(8, 16, 32), samples=DEFECT_SAMPLES, max_radius=0.5, block=DEFECT_BLOCK):
    """Unitarity and homomorphism defects of the truncated ``pi`` across ``degrees``.

    Returns ``{name: array(samples, len(degrees))}`` for the full operator-norm
    defects and for their restriction to the leading ``block`` indices.
    """
    g = geo.random_group_elements(rng, samples, max_radius)
    h = geo.random_group_elements(rng, samples, max_radius)
    out = {k: np.empty((samples, len(degrees)))
           for k in ("unitarity", "unitarity_block", "homomorphism", "homomorphism_block")}
    for j, n in enumerate(degrees):
        space = TruncatedSpace(n)
        for i in range(samples):
            M = pi_matrix_series(g[i], space)
            out["unitarity"][i, j] = unitarity_defect(M)
            out["unitarity_block"][i, j] = unitarity_defect(M, block)
            out["homomorphism"][i, j] = homomorphism_defect(g[i], h[i], space)
            out["homomorphism_block"][i, j] = homomorphism_defect(g[i], h[i], space, block)
    return out


def run_identities(cfg: RunConfig):
    rng = np.random.default_rng(cfg.seed)
    q, _ = _rules(cfg)
    space = TruncatedSpace(cfg.truncation_degree)
    checks = [Check(k, v, 1e-12) for k, v in geometry_errors(rng).items()]
    col = column_identity_errors(rng, space, q)
    checks.append(Check("column_identity", float(col.max()), 1e-8))

    degrees = (8, 16, 32)
    defects = defect_table(rng, degrees)
    rows = []
    for name, table in defects.items():
        for i, vals in enumerate(table):
            rows.append([name, i, *vals])
    # the full-norm defects do not shrink with N (the truncated matrices lose
    # norm near the top indices); the leading block is what converges
    checks += [
        Check("unitarity_decay_full", float(np.sum(defects["unitarity"][:, -1] >= defects["unitarity"][:, 0])), 0.0),
        Check("homomorphism_decay_full", float(np.sum(defects["homomorphism"][:, -1] >= defects["homomorphism"][:, 0])), 0.0),
        Check("unitarity_decay_block", float(np.sum(defects["unitarity_block"][:, -1] >= defects["unitarity_block"][:, 0])), 0.0),
        Check("homomorphism_decay_block", float(np.sum(defects["homomorphism_block"][:, -1] >= defects["homomorphism_block"][:, 0])), 0.0),
    ]
    header = ["quantity", "sample", *[f"degree_{n}" for n in degrees]]
    return SuiteResult("identities", header, rows, checks)


SCHUR_INDEX_SETS = ((0, 0, 0, 0), (0, 0, 1, 1), (1, 0, 1, 0), (0, 1, 0, 1), (1, 1, 1, 1),
                    (2, 1, 2, 1), (1, 2, 0, 1), (2, 2, 2, 2))


def run_schur(cfg: RunConfig):
    _, gq = _rules(cfg)
    space = TruncatedSpace(max(cfg.truncation_degree, 2))
    rows, checks = [], []
    for idx in SCHUR_INDEX_SETS:
        f = [space.unit(i) for i in idx]
        expected = float(idx[0] == idx[2] and idx[1] == idx[3])
        val = schur_pairing(*f, gq, cfg.cutoff)
        raw = schur_pairing(*f, gq, cfg.cutoff, tail_correction=False)
        err = abs(val - expected)
        rows.append(["e%d,e%d,e%d,e%d" % idx, val.real, val.imag, raw.real, expected, err])
        checks.append(Check("schur_%d%d%d%d" % idx, err, 1e-3))
    d = 1.0 / rows[0][1]
    rows.append(["formal_dimension", d, 0.0, 1.0 / rows[0][3], 1.0, abs(d - 1.0)])
    checks.append(Check("formal_dimension", abs(d - 1.0), 1e-3))
    header = ["pairing", "value_re", "value_im", "value_without_tail", "expected", "abs_error"]
    return SuiteResult("schur", header, rows, checks)


def run_toeplitz_identity(cfg: RunConfig):
    q, gq = _rules(cfg)
    space = TruncatedSpace(cfg.truncation_degree)
    phi = phi_operator(space)
    rows, checks = [], []
    for name, a in symbol_battery().items():
        err = float(np.max(np.abs(toeplitz_matrix(a, space, q) - conv_symbol_op(a, phi, gq))))
        rows.append(["toeplitz_as_convolution", name, err])
        checks.append(Check(f"toeplitz_{name}", err, 1e-6))
    rng = np.random.default_rng(cfg.seed)
    coarse = GroupQuadrature(DiskQuadrature(8, 16), 4)
    for i in range(PUSH_THROUGH_SAMPLES):
        psi, a = random_group_function(rng), random_symbol(rng)
        err = push_through_error(psi, a, cfg.truncation_degree, q, coarse)
        rows.append(["push_through", f"sample_{i}", err])
        checks.append(Check(f"push_through_{i}", err, 1e-5))
    return SuiteResult("toeplitz-identity", ["identity", "case", "error"], rows, checks)


def run_young(cfg: RunConfig, samples=YOUNG_SAMPLES):
    _, gq = _rules(cfg)
    rows = young_report(samples, gq, cfg.cutoff, TruncatedSpace(cfg.truncation_degree), seed=cfg.seed)
    table = [[r["sample"], r["inequality"], r["lhs"], r["rhs"], int(r["ok"])] for r in rows]
    violations = sum(not r["ok"] for r in rows)
    checks = [Check("young_violations", float(violations), 0.0)]
    return SuiteResult("young", ["sample", "inequality", "lhs", "rhs", "ok"], table, checks)


def operator_battery(space, q, rng):
    """The operators on which weak localization is exercised."""
    sym = symbol_battery()
    f = rng.normal(size=(2, space.dim)) + 1j * rng.normal(size=(2, space.dim))
    f *= (0.6 ** np.arange(space.dim))  # decaying coefficients
    finite_rank = rank_one(f[0], f[1]) / (np.linalg.norm(f[0]) * np.linalg.norm(f[1]))
    return {
        "phi": phi_operator(space),
        "toeplitz_abs_sq": toeplitz_matrix(sym["abs_sq"], space, q),
        "toeplitz_re_w": toeplitz_matrix(sym["w"], space, q) + toeplitz_matrix(sym["conj_w"], space, q),
        "finite_rank": finite_rank,
    }


def run_localization(cfg: RunConfig):
    q, gq = _rules(cfg)
    space = TruncatedSpace(cfg.truncation_degree)
    rng = np.random.default_rng(cfg.seed)
    rows, checks = [], []
    r_mid = cfg.r_grid[len(cfg.r_grid) // 2]
    battery = operator_battery(space, q, rng)
    for name, S in battery.items():
        prof = localization_profile(S, cfg.r_grid, q, cfg.beta)
        SG = s_g(S, q, cfg.cutoff)
        for r, i_s, i_a, bound in zip(prof.r_grid, prof.i_values, prof.i_adjoint_values, prof.bound_values):
            SB = s_br(S, r, q, cfg.cutoff)
            gap = op_norm(SG - SB)
            norm_br, mass_bound = op_norm(SB), op_norm(S) * haar_measure_of_ball(r)
            rows.append([name, r, i_s, i_a, bound, gap, norm_br, mass_bound])
            checks.append(Check(f"{name}_bound_r{r:g}", gap, bound + BOUND_SLACK))
            checks.append(Check(f"{name}_finite_measure_r{r:g}", norm_br, mass_bound * (1 + 1e-9)))
        vals = np.array(prof.i_values + prof.i_adjoint_values)
        checks.append(Check(f"{name}_i_nonnegative", float(-vals.min()), 0.0))
        checks.append(Check(f"{name}_i_nonincreasing", float(max(
            np.max(np.diff(prof.i_values), initial=0.0), np.max(np.diff(prof.i_adjoint_values), initial=0.0))), 1e-9))
        split = s_br(S, r_mid, q, cfg.cutoff, region="filtered") + s_br_complement(S, r_mid, q, cfg.cutoff)
        checks.append(Check(f"{name}_additivity", op_norm(SG - split), 1e-10))

    phi = phi_operator(space)
    dual = op_norm(s_br(phi, r_mid, q, cfg.cutoff) - s_br_via_convolutions(phi, r_mid, gq, cfg.cutoff))
    checks.append(Check("dual_representation_phi", dual, 1e-4))

    g = geo.random_group_elements(rng, 5, 0.5)
    h = g @ geo.random_group_elements(rng, 5, 0.05)
    for name in ("phi", "finite_rank"):
        S = battery[name]
        for i in range(g.shape[0]):
            lhs, rhs = continuity_modulus_check(S, g[i], h[i], gq, cfg.cutoff)
            checks.append(Check(f"continuity_{name}_{i}", lhs, rhs + 1e-5))
    header = ["operator", "r", "i_s", "i_sstar", "bound", "sg_minus_sbr_opnorm", "sbr_opnorm", "mass_bound"]
    return SuiteResult("localization", header, rows, checks)


def convergence_operator(space, q):
    """``T_{|w|^2}``, the operator of the convergence experiment."""
    return toeplitz_matrix(Symbol(lambda w: np.abs(w) ** 2 + 0j, 1.0), space, q)


def run_convergence(cfg: RunConfig):
    q, _ = _rules(cfg)
    S = convergence_operator(TruncatedSpace(cfg.truncation_degree), q)
    prof = localization_profile(S, cfg.r_grid, q, cfg.beta)
    table = convergence_experiment(S, prof, q, cfg.cutoff)
    header = ["r", "err_opnorm", "i_s", "i_sstar", "bound", "bound_ok"]
    rows = [[t["r"], t["err_opnorm"], t["i_s"], t["i_sstar"], t["bound"], int(t["bound_ok"])] for t in table]
    checks = [Check(f"bound_r{t['r']:g}", t["err_opnorm"], t["bound"] + BOUND_SLACK) for t in table]
    errs = [t["err_opnorm"] for t in table]
    increase = max((b - a for a, b in zip(errs, errs[1:])), default=-1.0)
    # strictly decreasing <=> every step is negative
    checks.append(Check("err_strictly_decreasing", float(increase >= 0.0), 0.0))
    return SuiteResult("convergence", header, rows, checks)


SUITES = {
    "identities": run_identities,
    "schur": run_schur,
    "toeplitz-identity": run_toeplitz_identity,
    "young": run_young,
    "localization": run_localization,
    "convergence": run_convergence,
}
