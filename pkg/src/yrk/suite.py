"""The acceptance battery: fifteen criteria, each returning a :class:`Report`."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import mpmath
import numpy as np

from . import linalg
from .cartan import CartanData, LaurentPoly
from .drinfeld import drinfeld_tensor
from .ratfun import RatFun
from .ratmat import RatMat, kron as rkron
from .report import Report, residual_norm
from .repn import (Representation, evaluation_rep_sl2, sample_points, standard_tensor,
                   verify_relations)
from .rfull import (MeromorphicRMatrix, asymptotic_report, check_full_cabling_unitarity, check_one_jet,
                    check_qybe, check_shift_covariance)
from .rminus import (check_cocycle, check_intertwine_minus, rminus_recursive, rminus_sl2_closed_form)
from .rzero import (abelian_A, check_difference_and_unitarity, g_series, monodromy_eta0, rzero_formal,
                    rzero_updown, shift_scalar_series)
from .scalars import QI

F = Fraction


def c2(a) -> Representation:
    return evaluation_rep_sl2(a, 1)


def base_fixtures() -> list[Representation]:
    return [c2(0), c2(1), c2(QI(-2, 1))]


def qybe_triple() -> list[Representation]:
    return [c2(0), c2(F(2, 5)), c2(F(-9, 10))]


def corrupted(V: Representation) -> Representation:
    """``V`` with ``x^-_{i,0}`` doubled: no longer a representation."""
    return Representation(V.cartan, V.hbar, V.xi0, V.xp0, [m * 2 for m in V.xm0], V.t1,
                          V.declared_poles, {"kind": "corrupted"})


def tensor_fixtures(s=F(1, 2)) -> list[tuple[str, Representation]]:
    """All two-fold tensors of the base fixtures and the dimension-8 triples."""
    reps = base_fixtures()
    out = []
    for mode, fn in (("drinfeld", drinfeld_tensor), ("standard", standard_tensor)):
        for i, V in enumerate(reps):
            for j, W in enumerate(reps):
                out.append((f"{mode}[{i}{j}]", fn(V, W, s)))
        V1, V2, V3 = reps
        out.append((f"{mode}[(01)2]", fn(fn(V1, V2, s), V3, s)))
        out.append((f"{mode}[0(12)]", fn(V1, fn(V2, V3, s), s)))
    return out


def _fold(rep: Report, sub: Report, label: str) -> None:
    for c in sub.checks:
        rep.add(f"{label}.{c.check_id}", c.anchor, c.residual, c.tol, c.samples, c.detail, c.passed)


# ---------------------------------------------------------------------------


def criterion_relations(seed: int = 0) -> Report:
    rep = Report("C01 relations", seed=seed)
    fixtures = [(f"C2[{k}]", V) for k, V in enumerate(base_fixtures())] + tensor_fixtures()
    for label, V in fixtures:
        _fold(rep, verify_relations(V, samples=3, seed=seed), label)
    return rep.finish()


def criterion_rminus_oracle(seed: int = 0) -> Report:
    rep = Report("C02 rminus oracle", seed=seed)
    V = c2(0)
    cases = [("C2(1.3)", c2(F(13, 10)))]
    for name, fn in (("drinfeld", drinfeld_tensor), ("standard", standard_tensor)):
        cases.append((f"C2(0.7)x{name}C2(-2.1)", fn(c2(F(7, 10)), c2(F(-21, 10)), 0)))
    for label, W in cases:
        diff = rminus_recursive(V, W) - rminus_sl2_closed_form(V, W)
        rep.add(f"closed_form.{label}", "recursion equals the resummed ω-product", residual_norm(diff), 0.0)
    return rep.finish()


def criterion_c2_factor(seed: int = 0) -> Report:
    rep = Report("C03 C2 factor", seed=seed)
    V = c2(0)
    b, c = F(13, 10), F(-7, 10)
    cases = [("C2(b)", c2(b))]
    for name, fn in (("drinfeld", drinfeld_tensor), ("standard", standard_tensor)):
        cases.append((f"C2(b)x{name}C2(c)", fn(c2(b), c2(c), 0)))
    for label, W in cases:
        expected = RatMat.identity(2 * W.dim) + rkron(RatMat.const(V.xm0[0]), W.currents(0).xp)
        rep.add(f"c2_factor.{label}", "R⁻_{C²,V}(s) = 1 + x⁻ ⊗ x⁺(s)",
                residual_norm(rminus_recursive(V, W) - expected), 0.0)
    return rep.finish()


def criterion_one_jets(seed: int = 0) -> Report:
    rep = Report("C04 one-jets", seed=seed)
    reps = base_fixtures()
    pairs = [(reps[0], reps[1]), (reps[1], reps[2]),
             (reps[0], drinfeld_tensor(reps[1], reps[2], F(1, 2)))]
    for k, (V, W) in enumerate(pairs):
        sub = check_intertwine_minus(V, W)
        c = next(c for c in sub.checks if c.check_id == "one_jet")
        rep.add(f"rminus_one_jet[{k}]", c.anchor, c.residual, c.tol)
        _fold(rep, check_one_jet(V, W), f"pair[{k}]")
    return rep.finish()


def rank_one_pairs() -> list[tuple[str, Representation, Representation]]:
    reps = base_fixtures()
    out = []
    for i, V in enumerate(reps):
        for j, W in enumerate(reps):
            if i != j:
                out.append((f"C2[{i}]xC2[{j}]", V, W))
    s = F(1, 2)
    for name, fn in (("drinfeld", drinfeld_tensor), ("standard", standard_tensor)):
        out.append((f"C2[0]x{name}[12]", reps[0], fn(reps[1], reps[2], s)))
        out.append((f"{name}[01]xC2[2]", fn(reps[0], reps[1], s), reps[2]))
    return out


def criterion_intertwining(seed: int = 0) -> Report:
    rep = Report("C05 intertwining", seed=seed)
    for label, V, W in rank_one_pairs():
        sub = check_intertwine_minus(V, W)
        for c in sub.checks:
            if c.check_id.startswith("intertwine"):
                rep.add(f"{label}.{c.check_id}", c.anchor, c.residual, c.tol)
    return rep.finish()


def criterion_cocycle(seed: int = 0) -> Report:
    rep = Report("C06 cocycle", seed=seed)
    V1, V2, V3 = base_fixtures()
    _fold(rep, check_cocycle(V1, V2, V3, samples=10, seed=seed), "triple")
    return rep.finish()


def criterion_abelian(seed: int = 0) -> Report:
    rep = Report("C07 abelian closed form", seed=seed)
    V = c2(0)
    A = abelian_A(V, V)
    s = RatFun.x()
    oracle = s * (s + 2) / ((s + 1) * (s + 1))
    block = next(b for b in A.blocks if b.projector[0, 0])
    diff = block.value() - oracle
    rep.add("A_eigenvalue", "A(s) on v₊⊗v₊ equals s(s+2)/(s+1)²",
            0.0 if diff.is_zero() else 1.0, 0.0)
    val = rzero_updown(A, 5, "up").matrix[0, 0]
    gamma = complex(mpmath.gamma(2.5) * mpmath.gamma(3.5) / mpmath.gamma(3) ** 2)
    rep.add("gamma_oracle", "R^{0,↑}(5) on v₊⊗v₊ equals Γ(5/2)Γ(7/2)/Γ(3)²", abs(val - gamma), 1e-8, [5])
    return rep.finish()


def _seeded_complex(count: int, seed: int, avoid=()) -> list[complex]:
    return [complex(p) for p in sample_points(count, avoid, seed, radius=5)]


def criterion_difference_unitarity(seed: int = 0) -> Report:
    rep = Report("C08 difference equation and unitarity", seed=seed)
    pts = _seeded_complex(5, seed, [0, 1, -1, 2, -2, 3, -3])
    for label, (V, W) in {"C2(0)xC2(0)": (c2(0), c2(0)), "C2(0)xC2(2/5)": (c2(0), c2(F(2, 5)))}.items():
        _fold(rep, check_difference_and_unitarity(V, W, pts), label)
    return rep.finish()


def criterion_asymptotics(seed: int = 0) -> Report:
    rep = Report("C09 asymptotics", seed=seed)
    V = c2(0)
    s = 50 * complex(V.hbar)
    val = rzero_updown(abelian_A(V, V), s, "up").matrix
    ser = rzero_formal(V, V, 4)
    errs = [linalg.max_abs(val - ser.partial_sum(s, k)) for k in range(5)]
    mono = all(errs[k + 1] < errs[k] for k in range(4))
    rep.add("rzero_partial_sums", "R^{0,↑}(s) ~ formal R⁰(s) at s = 50ħ", errs[4], 1e-6, [s],
            detail="errors=" + ", ".join(f"{e:.3e}" for e in errs), passed=mono and errs[4] <= 1e-6)
    return rep.finish()


def criterion_qybe(seed: int = 0) -> Report:
    rep = Report("C10 QYBE", seed=seed)
    V1, V2, V3 = qybe_triple()
    _fold(rep, check_qybe(V1, V2, V3, "up", count=5, seed=seed), "up")
    return rep.finish()


def criterion_cabling(seed: int = 0) -> Report:
    rep = Report("C11 cabling and shift covariance", seed=seed)
    V1, V2, V3 = qybe_triple()
    _fold(rep, check_full_cabling_unitarity(V1, V2, V3, "up", count=3, seed=seed, tol=1e-7), "up")
    pts = _seeded_complex(3, seed + 1, [0, F(2, 5), F(-9, 10)])
    _fold(rep, check_shift_covariance(V1, V2, F(1, 3), F(-1, 2), pts, "up", tol=1e-7), "up")
    return rep.finish()


def criterion_monodromy(seed: int = 0) -> Report:
    rep = Report("C12 monodromy", seed=seed)
    V = c2(0)
    base = [0.3, 0.7, 1.1]
    periodic = monodromy_eta0(V, V, base + _seeded_complex(2, seed, [0, 1, -1, 2, -2]))
    c = next(c for c in periodic.checks if c.check_id == "eta_periodic")
    rep.add(c.check_id, c.anchor, c.residual, c.tol, c.samples)
    c = next(c for c in monodromy_eta0(V, V, base).checks if c.check_id == "eta_nonconstant")
    rep.add(c.check_id, c.anchor, c.residual, c.tol, c.samples, c.detail, c.passed)
    return rep.finish()


def criterion_coupling(seed: int = 0) -> Report:
    rep = Report("C13 coupling matrix", seed=seed)
    q = LaurentPoly.qnum(2)
    one = LaurentPoly.const(1)
    a1 = CartanData.of_type("A1").q_coupling_matrix()
    rep.add("A1", "c(q) = 1 for sl2", 0.0 if a1 == [[one]] else 1.0)
    a2 = CartanData.of_type("A2").q_coupling_matrix()
    rep.add("A2", "c(q) = [[q+q⁻¹, 1], [1, q+q⁻¹]] for sl3", 0.0 if a2 == [[q, one], [one, q]] else 1.0)
    for name in ("A1", "A2", "B2", "C2"):
        cd = CartanData.of_type(name)
        c = cd.q_coupling_matrix()
        n = cd.rank
        ok = True
        for i in range(n):
            for j in range(n):
                acc = LaurentPoly()
                for k in range(n):
                    acc = acc + c[i][k] * LaurentPoly.qnum(cd.B[k][j])
                target = LaurentPoly.qnum(cd.ell) if i == j else LaurentPoly()
                ok = ok and acc == target
        rep.add(f"{name}.identity", "sum_k c_ik(q) [d_k a_kj]_q = δ_ij [ℓ]_q", 0.0 if ok else 1.0)
        nonneg = all(c[i][j].has_nonneg_integer_coeffs() for i in range(n) for j in range(n))
        rep.add(f"{name}.nonnegative", "c_ij(q) has nonnegative integer coefficients", 0.0 if nonneg else 1.0)
    return rep.finish()


def criterion_g_series(seed: int = 0) -> Report:
    rep = Report("C14 g-series", seed=seed)
    g = g_series(9)
    expected = [F(1), F(1, 2), F(1, 6), F(0), F(-1, 30)]
    rep.add("first_coefficients", "g = 1/x + 1/(2x²) + 1/(6x³) + 0/x⁴ - 1/(30x⁵) + ...",
            max(abs(float(a - b)) for a, b in zip(g[1:6], expected)), 0.0)
    centered = shift_scalar_series(g, F(1, 2))
    even = [abs(float(centered[k])) for k in range(2, 9, 2)]
    rep.add("antisymmetry", "g(1/2 + x) = -g(1/2 - x) through x⁻⁸", max(even), 0.0)
    return rep.finish()


def criterion_negative_control(seed: int = 0) -> Report:
    """Passes when the corrupted fixture is rejected by both checks."""
    rep = Report("C15 negative control", seed=seed)
    V1, V2, V3 = qybe_triple()
    bad = corrupted(V2)
    rel = verify_relations(bad, samples=3, seed=seed)
    worst = max(c.residual for c in rel.checks)
    rep.add("relations_rejected", "a corrupted fixture fails the relation suite", worst, 1e-2,
            detail="failing: " + ",".join(c.check_id for c in rel.failures()), passed=worst > 1e-2)
    q = check_qybe(V1, bad, V3, "up", count=3, seed=seed)
    res = q.checks[0].residual
    rep.add("qybe_rejected", "a corrupted fixture fails the QYBE", res, 1e-2, q.checks[0].samples,
            passed=res > 1e-2)
    return rep.finish()


CRITERIA = [
    ("C01", "relation suite", criterion_relations),
    ("C02", "R⁻ recursion equals the sl2 closed form", criterion_rminus_oracle),
    ("C03", "R⁻_{C²,V} = 1 + x⁻⊗x⁺(s)", criterion_c2_factor),
    ("C04", "1-jets of R⁻ and of the composed series", criterion_one_jets),
    ("C05", "intertwining of R⁻", criterion_intertwining),
    ("C06", "cocycle equations", criterion_cocycle),
    ("C07", "abelian factor closed form and Γ oracle", criterion_abelian),
    ("C08", "difference equation and unitarity", criterion_difference_unitarity),
    ("C09", "asymptotic expansion", criterion_asymptotics),
    ("C10", "QYBE", criterion_qybe),
    ("C11", "cabling and shift covariance", criterion_cabling),
    ("C12", "monodromy", criterion_monodromy),
    ("C13", "coupling matrix c_ij(q)", criterion_coupling),
    ("C14", "g-series", criterion_g_series),
    ("C15", "negative control", criterion_negative_control),
]


def _run_one(args) -> Report:
    idx, seed = args
    return CRITERIA[idx][2](seed)


def run_acceptance(seed: int = 0, workers: int = 1, only=None) -> tuple[Report, list[tuple[str, str, bool]]]:
    """Run the battery; returns the merged report and ``(id, title, passed)`` per criterion."""
    chosen = [k for k, (cid, _, _) in enumerate(CRITERIA) if only is None or cid in only]
    jobs = [(k, seed) for k in chosen]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            reports = list(pool.map(_run_one, jobs))
    else:
        reports = [_run_one(j) for j in jobs]
    merged = Report("acceptance", seed=seed)
    verdicts = []
    for k, sub in zip(chosen, reports):
        cid, title, _ = CRITERIA[k]
        merged.extend(sub, prefix=f"{cid}.")
        verdicts.append((cid, title, sub.passed))
    return merged.finish(), verdicts
