"""Executable laws: each encodes one provable statement about splitting
behaviour as a predicate over generated instances.

A law check returns PASS when the statement's hypotheses held and its
conclusion was verified, VACUOUS when the hypotheses did not apply to the
instance (wrong characteristic, dimension too small, no isotropy to work
with), FAIL with a full reproducer record otherwise, and SKIP when a
resource cap interrupted the computation.  FUNCTORIALITY at p > 3 runs in
exploration mode: the statement is open there, so violations are recorded
as candidate findings instead of failures.

Generation is deterministic: every sampled object is a function of
(seed, law, trial), so any failure replays from its report line.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from .errors import ResourceCap
from .fieldtower import FieldTower, is_pth_power
from .forms import (QuasilinearForm, anisotropic_part, defect_index,
                    divisibility_extract, is_subform, norm_degree, norm_form,
                    pinsep_index, scale)
from .polyring import Polynomial, RationalFunction
from .splitting import (DEFAULT_CAPS, ResourceCaps, first_index,
                        function_field, max_splitting_test, qpn_test,
                        splitting_tower)

VAR_NAMES = ("t", "u", "v", "w", "y", "z")


class LawId(str, Enum):
    HOFFMANN_BOUND = "HOFFMANN_BOUND"
    I1_DICHOTOMY = "I1_DICHOTOMY"
    OUTER_EXCELLENT = "OUTER_EXCELLENT"
    MONOTONE_INDICES = "MONOTONE_INDICES"
    PFISTER_SP = "PFISTER_SP"
    QPN_EQUIV = "QPN_EQUIV"
    NEIGHBOUR_SSP = "NEIGHBOUR_SSP"
    SUBFORM_TRICHOTOMY = "SUBFORM_TRICHOTOMY"
    FIRST_COMPARISON = "FIRST_COMPARISON"
    SECOND_COMPARISON = "SECOND_COMPARISON"
    I2_GE_MIN = "I2_GE_MIN"
    I1_COMPARISON = "I1_COMPARISON"
    DIVISIBILITY_EQUIV = "DIVISIBILITY_EQUIV"
    MULT_INDEX_CONSISTENCY = "MULT_INDEX_CONSISTENCY"
    SCALAR_INVARIANCE = "SCALAR_INVARIANCE"
    TRANSCENDENTAL_STABILITY = "TRANSCENDENTAL_STABILITY"
    COMPRESSIBILITY = "COMPRESSIBILITY"
    FUNCTORIALITY = "FUNCTORIALITY"
    MAX_SPLITTING_QPN = "MAX_SPLITTING_QPN"
    NDEG_FUNCTORIALITY = "NDEG_FUNCTORIALITY"


class Outcome(Enum):
    PASS = "pass"
    VACUOUS = "vacuous"
    FAIL = "fail"
    SKIP = "skip"


@dataclass(frozen=True)
class GenConfig:
    p: int
    nvars: int
    dim_range: tuple
    max_degree: int = 2
    max_terms: int = 3
    seed: int = 0

    def tower(self) -> FieldTower:
        return FieldTower.rational(self.p, VAR_NAMES[:self.nvars])


@dataclass
class LawReport:
    law: LawId
    trials: int = 0
    passes: int = 0
    vacuous: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)
    findings: list = field(default_factory=list)  # exploration candidates

    def to_json_dict(self) -> dict:
        return {
            "law": self.law.value,
            "trials": self.trials,
            "passes": self.passes,
            "vacuous": self.vacuous,
            "skipped": self.skipped,
            "failures": self.failures,
            "findings": self.findings,
        }

    @property
    def ok(self) -> bool:
        return not self.failures


def _rng(config: GenConfig, label: str, trial: int) -> random.Random:
    return random.Random(f"{config.seed}:{label}:{trial}")


def random_polynomial(rng: random.Random, config: GenConfig) -> Polynomial:
    """Uniformly shaped nonzero polynomial within the configured bounds."""
    modulus = config.tower().modulus
    while True:
        f = Polynomial.zero(modulus)
        for _ in range(rng.randint(1, config.max_terms)):
            mono = [0] * config.nvars
            if config.nvars:
                for _ in range(rng.randint(0, config.max_degree)):
                    mono[rng.randrange(config.nvars)] += 1
            f = f + Polynomial.term(modulus, tuple(mono),
                                    rng.randint(1, config.p - 1))
        if not f.is_zero():
            return f


def gen_random_form(config: GenConfig, trial: int) -> QuasilinearForm:
    """Deterministic pseudorandom form for (config, trial)."""
    rng = _rng(config, "form", trial)
    tower = config.tower()
    dim = rng.randint(config.dim_range[0], config.dim_range[1])
    coeffs = [tower.from_rational(RationalFunction.from_poly(
        random_polynomial(rng, config))) for _ in range(dim)]
    return QuasilinearForm.of(tower, coeffs)


def _random_element(rng, config, tower):
    return tower.from_rational(RationalFunction.from_poly(
        random_polynomial(rng, config)))


def _random_non_pth_power(rng, config, tower):
    if config.nvars == 0:
        return None
    for _ in range(20):
        a = _random_element(rng, config, tower)
        if not is_pth_power(a):
            return a
    return tower.var(tower.vars[0])


def _hoffmann_m(p: int, d: int) -> int:
    """m in the decomposition d = p^n + m with m in [1, p^(n+1) - p^n]."""
    n = 0
    while p ** (n + 1) < d:
        n += 1
    return d - p ** n


def _pattern_tail(report) -> tuple:
    return report.pattern[1:]


def _geometric(p: int, h: int) -> tuple:
    return tuple(p ** k for k in range(h, -1, -1))


def describe_instance(phi: QuasilinearForm, aux=None) -> dict:
    out = {
        "p": phi.tower.p,
        "vars": list(phi.tower.vars),
        "roots": [{"name": n, "radicand": phi.tower.radicand(i + 1).render()}
                  for i, (n, _) in enumerate(phi.tower.roots)],
        "coeffs": [c.render() for c in phi.coeffs],
    }
    if aux:
        rendered = {}
        for k, v in aux.items():
            if isinstance(v, QuasilinearForm):
                rendered[k] = [c.render() for c in v.coeffs]
            elif hasattr(v, "render"):
                rendered[k] = v.render()
            else:
                rendered[k] = v
        out["aux"] = rendered
    return out


def make_aux(law: LawId, config: GenConfig, trial: int,
             phi: QuasilinearForm) -> dict:
    """Deterministic auxiliary data for the laws that need it."""
    rng = _rng(config, law.value, trial)
    tower = phi.tower
    aux = {}
    if law in (LawId.OUTER_EXCELLENT, LawId.SECOND_COMPARISON,
               LawId.I1_COMPARISON, LawId.DIVISIBILITY_EQUIV,
               LawId.MULT_INDEX_CONSISTENCY):
        aux["a"] = _random_non_pth_power(rng, config, tower)
    if law is LawId.OUTER_EXCELLENT:
        aux["extra_a"] = [_random_non_pth_power(rng, config, tower)
                          for _ in range(2)]
        aux["psi"] = gen_random_form(
            GenConfig(config.p, config.nvars, (2, 4), config.max_degree,
                      config.max_terms, config.seed), trial + 10_000)
    if law is LawId.SCALAR_INVARIANCE:
        aux["scalar"] = _random_element(rng, config, tower)
    if law in (LawId.NEIGHBOUR_SSP, LawId.SUBFORM_TRICHOTOMY,
               LawId.FUNCTORIALITY, LawId.NDEG_FUNCTORIALITY):
        aux["scalar"] = _random_element(rng, config, tower)
        aux["pick"] = rng.random()
    if law is LawId.COMPRESSIBILITY:
        aux["psi"] = gen_random_form(
            GenConfig(config.p, config.nvars, (2, max(2, phi.dim)),
                      config.max_degree, config.max_terms, config.seed),
            trial + 20_000)
    if law in (LawId.FUNCTORIALITY, LawId.NDEG_FUNCTORIALITY):
        aux["psi_independent"] = gen_random_form(
            GenConfig(config.p, config.nvars, (2, max(2, phi.dim)),
                      config.max_degree, config.max_terms, config.seed),
            trial + 30_000)
    return aux


def check_law(law: LawId, phi: QuasilinearForm, aux=None,
              caps: ResourceCaps = DEFAULT_CAPS):
    """Evaluate one law on one instance: (Outcome, detail dict or None)."""
    aux = aux or {}
    try:
        return _CHECKERS[law](phi, aux, caps)
    except ResourceCap as exc:
        return Outcome.SKIP, {"cap": exc.cap, "limit": exc.limit,
                              "needed": exc.needed}


def _need_dim2(phi):
    an = anisotropic_part(phi)
    return an if an.dim >= 2 else None


def _check_hoffmann(phi, aux, caps):
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    i1 = first_index(an, caps)
    m = _hoffmann_m(phi.tower.p, an.dim)
    if i1 <= m:
        return Outcome.PASS, None
    return Outcome.FAIL, {"i1": i1, "m": m}


def _check_i1_dichotomy(phi, aux, caps):
    if phi.tower.p != 2:
        return Outcome.VACUOUS, None
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    i1 = first_index(an, caps)
    m = _hoffmann_m(2, an.dim)
    if i1 == m or 2 * i1 <= m:
        return Outcome.PASS, None
    return Outcome.FAIL, {"i1": i1, "m": m}


def _check_outer_excellent(phi, aux, caps):
    if phi.tower.p != 2:
        return Outcome.VACUOUS, None
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    m = _hoffmann_m(2, an.dim)
    i1 = first_index(an, caps)
    defects = []
    radicands = [a for a in [aux.get("a"), *aux.get("extra_a", [])]
                 if a is not None and not is_pth_power(a)]
    for a in radicands:
        defects.append(("K(%s^(1/2))" % a.render(), pinsep_index(an, a)))
    psi = aux.get("psi")
    if psi is not None:
        psi_an = anisotropic_part(psi)
        if psi_an.dim >= 2:
            levels, _ = splitting_tower(psi_an, caps)
            for lvl in levels[1:3]:
                defects.append((repr(lvl.field),
                                defect_index(an.lift_to(lvl.field))))
    applicable = False
    for label, i0 in defects:
        if i0 < m:
            applicable = True
            if i0 > m - i1:
                return Outcome.FAIL, {"field": label, "i0": i0, "m": m,
                                      "i1": i1}
    return (Outcome.PASS if applicable else Outcome.VACUOUS), None


def _check_monotone(phi, aux, caps):
    if phi.tower.p != 2:
        return Outcome.VACUOUS, None
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    _, report = splitting_tower(an, caps)
    if report.hqp is None or report.hqp < 2:
        return Outcome.VACUOUS, None
    chain = report.indices[:report.hqp]
    if all(a <= b for a, b in zip(chain, chain[1:])):
        return Outcome.PASS, {"indices": list(chain)}
    return Outcome.FAIL, {"indices": list(chain)}


def _check_pfister_sp(phi, aux, caps):
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    p = phi.tower.p
    _, report = splitting_tower(an, caps)
    minimal_drop = (p * report.pattern[1] == report.pattern[0])
    geometric = (report.pattern == _geometric(p, report.height))
    intrinsic = (report.pattern[0] == report.ndeg)
    if minimal_drop == geometric == intrinsic:
        return Outcome.PASS, None
    return Outcome.FAIL, {"pattern": list(report.pattern),
                          "ndeg": report.ndeg,
                          "minimal_drop": minimal_drop,
                          "geometric": geometric,
                          "intrinsic": intrinsic}


def _check_qpn_equiv(phi, aux, caps):
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    p = phi.tower.p
    _, report = splitting_tower(an, caps)
    n = 0
    while p ** (n + 1) < an.dim:
        n += 1
    smallest_height = (report.height == n + 1)
    tail_geometric = (_pattern_tail(report) == _geometric(p, n))
    level1_pfister = (report.pattern[1] == report.ndeg // p)
    if smallest_height == tail_geometric == level1_pfister:
        return Outcome.PASS, None
    return Outcome.FAIL, {"pattern": list(report.pattern),
                          "ndeg": report.ndeg, "n": n,
                          "smallest_height": smallest_height,
                          "tail_geometric": tail_geometric,
                          "level1_pfister": level1_pfister}


def _check_neighbour_ssp(phi, aux, caps):
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    _, report = splitting_tower(an, caps)
    i1 = report.indices[0]
    drop = int(aux.get("pick", 0.0) * i1) % max(i1, 1)
    psi = QuasilinearForm.of(phi.tower, an.coeffs[:an.dim - drop])
    c = aux.get("scalar")
    if c is not None and not c.is_zero():
        psi = scale(c, psi)
    _, report_psi = splitting_tower(psi, caps)
    if _pattern_tail(report_psi) == _pattern_tail(report):
        return Outcome.PASS, None
    return Outcome.FAIL, {"phi_pattern": list(report.pattern),
                          "psi_pattern": list(report_psi.pattern),
                          "dropped": drop}


def _check_subform_trichotomy(phi, aux, caps):
    an = _need_dim2(phi)
    if an is None or an.dim < 3:
        return Outcome.VACUOUS, None
    psi = QuasilinearForm.of(phi.tower, an.coeffs[:-1])
    c = aux.get("scalar")
    if c is not None and not c.is_zero():
        psi = scale(c, psi)
    _, rp = splitting_tower(an, caps)
    _, rq = splitting_tower(psi, caps)
    i1 = rp.indices[0]
    tail_phi = _pattern_tail(rp)
    detail = {"phi_pattern": list(rp.pattern), "psi_pattern": list(rq.pattern),
              "i1": i1}
    if rp.height == rq.height + 1:
        ok = (i1 == 1 and tail_phi == rq.pattern)
    elif rp.height == rq.height:
        if i1 > 1:
            ok = tail_phi == _pattern_tail(rq)
        else:
            ok = any(tail_phi == rq.pattern[:s] + rq.pattern[s + 1:]
                     for s in range(1, rq.height))
    else:
        ok = False
    return (Outcome.PASS, None) if ok else (Outcome.FAIL, detail)


def _check_first_comparison(phi, aux, caps):
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    _, report = splitting_tower(an, caps)
    s = report.hqp
    if s == 0:
        return Outcome.VACUOUS, None
    nf = norm_form(an)
    extended, _ = function_field(nf, caps)
    lifted = an.lift_to(extended)
    _, over = splitting_tower(lifted, caps)
    expected = report.pattern[:s] + report.pattern[s + 1:]
    detail = {"pattern": list(report.pattern), "hqp": s,
              "pattern_over_norm_ff": list(over.pattern),
              "expected": list(expected), "hqp_over": over.hqp}
    if over.i0 != 0:
        return Outcome.FAIL, dict(detail, reason="became isotropic")
    if over.pattern != expected:
        return Outcome.FAIL, dict(detail, reason="pattern mismatch")
    if over.hqp is not None and over.hqp >= s:
        return Outcome.FAIL, dict(detail, reason="hqp did not drop")
    return Outcome.PASS, None


def _check_second_comparison(phi, aux, caps):
    an = _need_dim2(phi)
    a = aux.get("a")
    if an is None or a is None or is_pth_power(a):
        return Outcome.VACUOUS, None
    p = phi.tower.p
    _, report = splitting_tower(an, caps)
    i1 = report.indices[0]
    dim1 = report.pattern[1]
    ext = phi.tower.adjoin_pth_root(a, _fresh_root_name(phi.tower))
    phi_l = an.lift_to(ext)
    i0_l = defect_index(phi_l)
    an_l = anisotropic_part(phi_l)
    if an_l.dim < 2:
        return Outcome.VACUOUS, None
    over, _ = function_field(an_l, caps)
    i0_lphi = defect_index(an.lift_to(over))
    bound = min(i0_l, dim1 // p)
    if i0_lphi - i1 >= bound:
        return Outcome.PASS, None
    return Outcome.FAIL, {"i0_L": i0_l, "i0_Lphi": i0_lphi, "i1": i1,
                          "bound": bound}


def _check_i2_ge_min(phi, aux, caps):
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    p = phi.tower.p
    _, report = splitting_tower(an, caps)
    if report.height < 2:
        return Outcome.VACUOUS, None
    i1, i2 = report.indices[0], report.indices[1]
    bound = min(i1, report.pattern[1] // p)
    if i2 >= bound:
        return Outcome.PASS, None
    return Outcome.FAIL, {"i1": i1, "i2": i2, "bound": bound}


def _check_i1_comparison(phi, aux, caps):
    an = _need_dim2(phi)
    a = aux.get("a")
    if an is None or a is None or is_pth_power(a):
        return Outcome.VACUOUS, None
    p = phi.tower.p
    i1 = first_index(an, caps)
    dim1 = an.dim - i1
    i0_l = pinsep_index(an, a)
    if i0_l > dim1 // p:
        return Outcome.VACUOUS, None
    ext = phi.tower.adjoin_pth_root(a, _fresh_root_name(phi.tower))
    an_l = anisotropic_part(an.lift_to(ext))
    if an_l.dim < 2:
        return Outcome.VACUOUS, None
    i1_l = first_index(an_l, caps)
    if i1_l >= i1:
        return Outcome.PASS, None
    return Outcome.FAIL, {"i1": i1, "i1_over_L": i1_l, "i0_L": i0_l}


def _check_divisibility_equiv(phi, aux, caps):
    if phi.tower.p != 2:
        return Outcome.VACUOUS, None
    an = _need_dim2(phi)
    a = aux.get("a")
    if an is None or a is None or is_pth_power(a):
        return Outcome.VACUOUS, None
    index = pinsep_index(an, a)
    try:
        tau = divisibility_extract(an, a)
    except AssertionError as exc:
        return Outcome.FAIL, {"reason": str(exc), "index": index}
    if tau.dim != index:
        return Outcome.FAIL, {"index": index, "tau_dim": tau.dim}
    return Outcome.PASS, {"index": index}


def _check_mult_index(phi, aux, caps):
    a = aux.get("a")
    if a is None or is_pth_power(a):
        return Outcome.VACUOUS, None
    via_tensor = pinsep_index(phi, a)
    ext = phi.tower.adjoin_pth_root(a, _fresh_root_name(phi.tower))
    direct = defect_index(phi.lift_to(ext))
    if via_tensor == direct:
        return Outcome.PASS, {"i0": direct}
    return Outcome.FAIL, {"tensor_path": via_tensor, "adjunction_path": direct}


def _check_scalar_invariance(phi, aux, caps):
    if phi.is_zero_form():
        return Outcome.VACUOUS, None
    c = aux.get("scalar")
    if c is None or c.is_zero():
        return Outcome.VACUOUS, None
    _, before = splitting_tower(phi, caps)
    _, after = splitting_tower(scale(c, phi), caps)
    same = (before.pattern == after.pattern
            and before.indices == after.indices
            and before.i0 == after.i0
            and before.ndeg == after.ndeg
            and before.hqp == after.hqp
            and before.qpn_flags == after.qpn_flags
            and before.izh_dim == after.izh_dim
            and before.maximal == after.maximal)
    if same:
        return Outcome.PASS, None
    return Outcome.FAIL, {"before": before.to_json_dict(),
                          "after": after.to_json_dict(),
                          "scalar": c.render()}


def _check_transcendental_stability(phi, aux, caps):
    an = anisotropic_part(phi)
    if an.dim == 0:
        return Outcome.VACUOUS, None
    name = "w0"
    while name in phi.tower.all_names():
        name += "_"
    bigger = phi.tower.adjoin_transcendental(name)
    lifted = an.lift_to(bigger)
    still_anisotropic = defect_index(lifted) == 0
    same_ndeg = norm_degree(lifted) == norm_degree(an)
    if still_anisotropic and same_ndeg:
        return Outcome.PASS, None
    return Outcome.FAIL, {"anisotropic_preserved": still_anisotropic,
                          "ndeg_preserved": same_ndeg}


def _check_compressibility(phi, aux, caps):
    an = _need_dim2(phi)
    psi = aux.get("psi")
    if an is None or psi is None:
        return Outcome.VACUOUS, None
    psi_an = anisotropic_part(psi)
    if psi_an.dim < 2:
        return Outcome.VACUOUS, None
    over, _ = function_field(psi_an, caps)
    if defect_index(an.lift_to(over)) == 0:
        return Outcome.VACUOUS, None
    izh_psi = (psi_an.dim - first_index(psi_an, caps)) + 1
    if izh_psi <= an.dim:
        return Outcome.PASS, {"izh_psi": izh_psi, "dim_phi": an.dim}
    return Outcome.FAIL, {"izh_psi": izh_psi, "dim_phi": an.dim}


def _functoriality_psi(phi, an, aux):
    """A companion form; usually a scaled subform, so isotropy is built in."""
    pick = aux.get("pick", 0.0)
    if pick < 0.75 and an.dim >= 2:
        size = 2 + int(pick * 4 * (an.dim - 1)) % (an.dim - 1)
        psi = QuasilinearForm.of(phi.tower, an.coeffs[:size])
        c = aux.get("scalar")
        if c is not None and not c.is_zero():
            psi = scale(c, psi)
        return psi
    return aux.get("psi_independent")


def _check_functoriality(phi, aux, caps):
    p = phi.tower.p
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    psi = _functoriality_psi(phi, an, aux)
    if psi is None:
        return Outcome.VACUOUS, None
    psi_an = anisotropic_part(psi)
    if psi_an.dim < 2:
        return Outcome.VACUOUS, None
    over_psi, _ = function_field(psi_an, caps)
    if defect_index(an.lift_to(over_psi)) == 0:
        return Outcome.VACUOUS, None
    _, rp = splitting_tower(an, caps)
    _, rq = splitting_tower(psi_an, caps)
    tail_phi = _pattern_tail(rp)
    tail_psi = _pattern_tail(rq)
    dominated = (len(tail_psi) <= len(tail_phi)
                 and all(x <= y for x, y in zip(tail_psi, tail_phi)))
    over_phi, _ = function_field(an, caps)
    psi_iso = defect_index(psi_an.lift_to(over_phi)) > 0
    equality_criterion = (tail_psi == tail_phi) == psi_iso
    detail = {"sp_psi": list(rq.pattern), "sp_phi": list(rp.pattern),
              "psi_isotropic_over_F_phi": psi_iso}
    if dominated and equality_criterion:
        return Outcome.PASS, None
    if p > 3:
        # open territory: record, never fail
        return Outcome.VACUOUS, dict(detail, exploration_candidate=True)
    return Outcome.FAIL, detail


def _check_max_splitting_qpn(phi, aux, caps):
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    p = phi.tower.p
    d = an.dim
    in_window = False
    if p == 2:
        n = 2
        while 2 ** (n + 1) < d:
            n += 1
        in_window = d > 5 and (2 ** n + 2 ** (n - 2) < d <= 2 ** (n + 1))
    else:
        n = 1
        while p ** (n + 1) < d:
            n += 1
        in_window = p ** (n + 1) - p ** (n - 1) <= d <= p ** (n + 1)
    if not in_window:
        return Outcome.VACUOUS, None
    if not max_splitting_test(an, caps):
        return Outcome.VACUOUS, None
    if qpn_test(an):
        return Outcome.PASS, None
    return Outcome.FAIL, {"dim": d, "window_n": n}


def _check_ndeg_functoriality(phi, aux, caps):
    an = _need_dim2(phi)
    if an is None:
        return Outcome.VACUOUS, None
    psi = _functoriality_psi(phi, an, aux)
    if psi is None:
        return Outcome.VACUOUS, None
    psi_an = anisotropic_part(psi)
    if psi_an.dim < 2:
        return Outcome.VACUOUS, None
    over_psi, _ = function_field(psi_an, caps)
    if defect_index(an.lift_to(over_psi)) == 0:
        return Outcome.VACUOUS, None
    contained = is_subform(norm_form(psi_an), norm_form(an))
    if contained:
        return Outcome.PASS, None
    return Outcome.FAIL, {"ndeg_psi": norm_degree(psi_an),
                          "ndeg_phi": norm_degree(an)}


def _fresh_root_name(tower) -> str:
    name = f"s{len(tower.roots) + 1}"
    while name in tower.all_names():
        name += "_"
    return name


_CHECKERS = {
    LawId.HOFFMANN_BOUND: _check_hoffmann,
    LawId.I1_DICHOTOMY: _check_i1_dichotomy,
    LawId.OUTER_EXCELLENT: _check_outer_excellent,
    LawId.MONOTONE_INDICES: _check_monotone,
    LawId.PFISTER_SP: _check_pfister_sp,
    LawId.QPN_EQUIV: _check_qpn_equiv,
    LawId.NEIGHBOUR_SSP: _check_neighbour_ssp,
    LawId.SUBFORM_TRICHOTOMY: _check_subform_trichotomy,
    LawId.FIRST_COMPARISON: _check_first_comparison,
    LawId.SECOND_COMPARISON: _check_second_comparison,
    LawId.I2_GE_MIN: _check_i2_ge_min,
    LawId.I1_COMPARISON: _check_i1_comparison,
    LawId.DIVISIBILITY_EQUIV: _check_divisibility_equiv,
    LawId.MULT_INDEX_CONSISTENCY: _check_mult_index,
    LawId.SCALAR_INVARIANCE: _check_scalar_invariance,
    LawId.TRANSCENDENTAL_STABILITY: _check_transcendental_stability,
    LawId.COMPRESSIBILITY: _check_compressibility,
    LawId.FUNCTORIALITY: _check_functoriality,
    LawId.MAX_SPLITTING_QPN: _check_max_splitting_qpn,
    LawId.NDEG_FUNCTORIALITY: _check_ndeg_functoriality,
}


def run_law(law: LawId, config: GenConfig, trials: int,
            caps: ResourceCaps = DEFAULT_CAPS, emit=None) -> LawReport:
    report = LawReport(law=law)
    for trial in range(trials):
        phi = gen_random_form(config, trial)
        aux = make_aux(law, config, trial, phi)
        outcome, detail = check_law(law, phi, aux, caps)
        report.trials += 1
        record = {
            "law": law.value,
            "trial": trial,
            "seed": config.seed,
            "outcome": outcome.value,
        }
        if outcome is Outcome.PASS:
            report.passes += 1
        elif outcome is Outcome.VACUOUS:
            report.vacuous += 1
            if detail and detail.get("exploration_candidate"):
                finding = dict(record,
                               instance=describe_instance(phi, aux),
                               detail=detail)
                report.findings.append(finding)
        elif outcome is Outcome.SKIP:
            report.skipped += 1
            record["detail"] = detail
        else:
            failure = dict(record,
                           instance=describe_instance(phi, aux),
                           detail=detail)
            report.failures.append(failure)
        if emit is not None:
            emit(record)
    return report


def run_suite(laws, config: GenConfig, trials: int,
              caps: ResourceCaps = DEFAULT_CAPS, emit=None) -> list:
    """One LawReport per law; deterministic for a fixed config."""
    return [run_law(law, config, trials, caps, emit) for law in laws]
