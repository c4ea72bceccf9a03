"""Check orchestration: every verifier as a named check producing CheckReports."""

from __future__ import annotations

import json
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable

import numpy as np

from .algebra import (AlgebraElement, convolve, diagonal_basis, element, evaluate_j, involution,
                      is_intertwiner, is_normalizer, open_support, reduced_norm, sup_norm)
from .corpus import GERM_MODELS, Instance, default_corpus, load_instance
from .errors import GroupoidLabError, ParseError
from .galois import (cocycle_from_spectral, grading_invariants, image_subgroup_check,
                     kernel_is_minimal, spectral_grading_of_cocycle, verify_fourier,
                     verify_galois_bijection)
from .groupoid import (ArrowSet, FiniteGroupoid, find_isomorphism, generate_subgroupoid,
                       is_bisection, orbits, structure_report)
from .parsing import format_groupoid, parse_document, parse_expression
from .sampling import child_rng, random_bisection, random_element, random_normalizer, random_subset
from .scalars import QQi
from .semigroup import germ_groupoid
from .submodule import (algebra_to_subgroupoid, commutant_of_diagonal, diagonal_subspace,
                        generate_subalgebra, is_subalgebra, module_of_open_set,
                        normalizer_cutoff, verify_module_correspondence,
                        verify_psi_isomorphism)

__all__ = ["SuiteConfig", "CheckReport", "CHECKS", "VERBS", "run_checks", "run_suite",
           "emit_report", "exit_status", "jsonable"]

CUTOFF_EPSILONS = (0.01, 0.1, 1.0)


@dataclass
class SuiteConfig:
    instances: list[str] = field(default_factory=list)  # empty means the default corpus
    seed: int = 42
    trials: int = 25
    tolerance: float = 1e-9
    budget_lattice: int = 10_000
    budget_subset_bits: int = 12
    output_format: str = "text"
    timing: bool = True

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.budget_lattice < 1 or self.budget_subset_bits < 1:
            raise ValueError("budgets must be positive")
        if self.output_format not in ("text", "json-lines"):
            raise ValueError(f"unknown format {self.output_format!r}")


@dataclass
class CheckReport:
    check: str
    instance: str
    status: str  # pass | fail | skip | warn
    witness: Any = None
    elapsed_ms: float = 0.0

    def __post_init__(self):
        if self.status == "fail" and self.witness is None:
            raise ValueError("a failing report needs a witness")

    def as_dict(self) -> dict:
        return {"check": self.check, "instance": self.instance, "status": self.status,
                "witness": jsonable(self.witness), "elapsed_ms": self.elapsed_ms}


def jsonable(x):
    if isinstance(x, ArrowSet):
        return x.sorted()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (QQi, Fraction)):
        return str(x)
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, float):
        return round(x, 12)
    return x


class _Skip(Exception):
    pass


class _Warn(Exception):
    def __init__(self, witness):
        self.witness = witness


def _fail(witness):
    return "fail", witness


def _effective(g: FiniteGroupoid) -> bool:
    return structure_report(g).is_effective


def _require_effective(g: FiniteGroupoid):
    if not _effective(g):
        raise _Skip("groupoid is not effective")


# ---------------------------------------------------------------------------
# groupoid checks
# ---------------------------------------------------------------------------

def check_validate(inst: Instance, cfg: SuiteConfig):
    obj = inst.obj
    if inst.kind == "groupoid":
        again = parse_document(format_groupoid(obj, "roundtrip"))["roundtrip"]
        if again != obj:
            return _fail({"roundtrip": False})
        return "pass", {"arrows": len(obj), "units": len(obj.units)}
    if inst.kind == "cocycle":
        return "pass", {"arrows": len(obj.groupoid), "group_order": len(obj.group.elements),
                        "image_size": len(obj.image())}
    if inst.kind == "action":
        return "pass", {"semigroup_order": len(obj.semigroup.elements), "points": len(obj.space)}
    return "pass", {"kind": inst.kind}


def check_structure(inst: Instance, cfg: SuiteConfig):
    g = inst.obj
    rep = structure_report(g)
    orb = orbits(g)
    # principal: (r, d) is injective on arrows
    principal = len({(int(g.tgt_idx[i]), int(g.src_idx[i])) for i in range(len(g))}) == len(g)
    problems = []
    if rep.is_effective != principal:
        problems.append("effective != principal")
    if rep.is_minimal != (len(orb) == 1):
        problems.append("minimal != single orbit")
    if rep.is_topologically_transitive != rep.is_minimal:
        problems.append("transitive != minimal")
    witness = {"effective": rep.is_effective, "principal": principal,
               "minimal": rep.is_minimal, "orbits": len(orb)}
    if problems:
        witness["problems"] = problems
        return _fail(witness)
    return "pass", witness


def check_star_laws(inst: Instance, cfg: SuiteConfig):
    g = inst.obj
    rng = child_rng(cfg.seed, "star_laws", inst.name)
    tol = cfg.tolerance
    for trial in range(cfg.trials):
        f, h, k = (random_element(g, rng) for _ in range(3))
        lam = QQi(Fraction(int(rng.integers(-3, 4)), 2), Fraction(int(rng.integers(-3, 4)), 3))
        exact = {
            "associative": convolve(convolve(f, h), k) == convolve(f, convolve(h, k)),
            "distributive": convolve(f, h + k) == convolve(f, h) + convolve(f, k),
            "antimultiplicative": involution(convolve(f, h)) == convolve(involution(h),
                                                                          involution(f)),
            "involutive": involution(involution(f)) == f,
            "conjugate_linear": involution(f.scale(lam)) == involution(f).scale(lam.conjugate()),
            "evaluation": all(evaluate_j(f, a) == f[a] for a in g.arrows),
        }
        bad = [name for name, ok in exact.items() if not ok]
        nf, nh = reduced_norm(f), reduced_norm(h)
        if abs(reduced_norm(convolve(involution(f), f)) - nf * nf) > tol * max(1.0, nf * nf):
            bad.append("cstar_identity")
        if reduced_norm(convolve(f, h)) > nf * nh + tol * max(1.0, nf * nh):
            bad.append("submultiplicative")
        if bad:
            return _fail({"trial": trial, "laws": bad, "f": f.as_dict()})
    return "pass", {"trials": cfg.trials}


def check_normalizer_bisection(inst: Instance, cfg: SuiteConfig):
    g = inst.obj
    _require_effective(g)
    rng = child_rng(cfg.seed, "normalizer_bisection", inst.name)
    normalizers = 0
    for trial in range(cfg.trials * 2):
        f = random_normalizer(g, rng) if trial % 2 else random_element(g, rng)
        n_ok = is_normalizer(f)
        b_ok = is_bisection(open_support(f))
        if n_ok != b_ok:
            return _fail({"trial": trial, "element": f.as_dict(), "is_normalizer": n_ok,
                          "is_bisection": b_ok})
        if n_ok:
            normalizers += 1
            if not is_intertwiner(f):
                return _fail({"trial": trial, "element": f.as_dict(), "intertwiner": False})
    return "pass", {"elements": cfg.trials * 2, "normalizers": normalizers}


def check_norm_coincidence(inst: Instance, cfg: SuiteConfig):
    g = inst.obj
    rng = child_rng(cfg.seed, "norm_coincidence", inst.name)
    worst = 0.0
    for trial in range(cfg.trials):
        n = random_normalizer(g, rng)
        gap = abs(reduced_norm(n) - sup_norm(n))
        worst = max(worst, gap)
        if gap > cfg.tolerance:
            return _fail({"trial": trial, "element": n.as_dict(), "gap": gap})
        f = random_element(g, rng)
        if sup_norm(f) > reduced_norm(f) + cfg.tolerance:
            return _fail({"trial": trial, "element": f.as_dict(), "sup": sup_norm(f),
                          "reduced": reduced_norm(f)})
    return "pass", {"trials": cfg.trials, "max_gap": worst}


def check_normalizer_cutoff(inst: Instance, cfg: SuiteConfig):
    g = inst.obj
    _require_effective(g)
    rng = child_rng(cfg.seed, "normalizer_cutoff", inst.name)
    worst = -np.inf
    for trial in range(cfg.trials):
        m = random_normalizer(g, rng).scale(QQi(Fraction(1, 10 ** int(rng.integers(0, 3)))))
        for eps in CUTOFF_EPSILONS:
            fm = normalizer_cutoff(m, eps)
            err = reduced_norm(fm - m)
            worst = max(worst, err - eps)
            if err > eps + cfg.tolerance:
                return _fail({"trial": trial, "eps": eps, "error": err, "element": m.as_dict()})
            if not open_support(fm).issubset(open_support(m)):
                return _fail({"trial": trial, "eps": eps, "support": open_support(fm)})
    return "pass", {"trials": cfg.trials, "epsilons": list(CUTOFF_EPSILONS),
                    "max_excess": float(worst)}


def check_module_correspondence(inst: Instance, cfg: SuiteConfig):
    g = inst.obj
    _require_effective(g)
    rep = verify_module_correspondence(g, trials=cfg.trials, rng_seed=cfg.seed,
                                       instance=inst.name)
    return "pass", rep


def check_psi_iso(inst: Instance, cfg: SuiteConfig):
    g = inst.obj
    _require_effective(g)
    rep = verify_psi_isomorphism(g, max_bits=cfg.budget_subset_bits, samples=10,
                                 rng_seed=cfg.seed, sampled_trials=max(cfg.trials, 20))
    return "pass", rep


def check_masa(inst: Instance, cfg: SuiteConfig):
    g = inst.obj
    comm = commutant_of_diagonal(g)
    diag = diagonal_subspace(g)
    is_masa = comm == diag
    eff = _effective(g)
    witness = {"commutant_dim": comm.dim, "diagonal_dim": diag.dim, "masa": is_masa,
               "effective": eff}
    if is_masa != eff or not diag.issubspace(comm):
        return _fail(witness)
    return "pass", witness


def check_subalgebra(inst: Instance, cfg: SuiteConfig):
    g = inst.obj
    _require_effective(g)
    rng = child_rng(cfg.seed, "subalgebra", inst.name)
    for trial in range(cfg.trials):
        h = generate_subgroupoid(g, random_subset(g, rng, p=0.15), wide=True)
        b = module_of_open_set(h)
        if not is_subalgebra(b) or algebra_to_subgroupoid(b) != h:
            return _fail({"trial": trial, "subgroupoid": h})
        gens = [random_normalizer(g, rng) for _ in range(int(rng.integers(1, 3)))]
        generated = generate_subalgebra(gens, parent=g)
        want = generate_subgroupoid(g, ArrowSet(g, frozenset().union(
            *(open_support(n).members for n in gens))), wide=True)
        if algebra_to_subgroupoid(generated) != want:
            return _fail({"trial": trial, "generators": [n.as_dict() for n in gens],
                          "expected": want})
    return "pass", {"trials": cfg.trials}


# ---------------------------------------------------------------------------
# cocycle checks
# ---------------------------------------------------------------------------

def check_grading(inst: Instance, cfg: SuiteConfig):
    c = inst.obj
    grading = spectral_grading_of_cocycle(c)
    inv = grading_invariants(grading)
    if not all(inv.values()):
        return _fail({"invariants": inv})
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        back = cocycle_from_spectral(grading, name=c.name)
    if back.labels != c.labels:
        return _fail({"roundtrip": False})
    rng = child_rng(cfg.seed, "grading", inst.name)
    g = c.groupoid
    samples = [random_element(g, rng) if k % 2 else random_normalizer(g, rng)
               for k in range(min(cfg.trials, 10))]
    fourier = verify_fourier(grading, samples, cfg.tolerance)
    if fourier["failures"]:
        return _fail({"fourier": fourier})
    return "pass", {"dims": grading.dims(), "roundtrip": True,
                    "fourier_samples": fourier["elements"],
                    "notes": sorted({type(w.message).__name__ for w in caught})}


def check_galois(inst: Instance, cfg: SuiteConfig):
    c = inst.obj
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = verify_galois_bijection(c, budget=cfg.budget_lattice)
    if rep["surjective"] and rep["kernel_minimal"]:
        return ("pass" if rep["bijection"] else "fail"), rep
    raise _Warn(rep)


def check_counterexample(inst: Instance, cfg: SuiteConfig):
    c = inst.obj
    image, is_sub = image_subgroup_check(c, c.groupoid.everything())
    surjective = image == frozenset(c.group.elements)
    witness = {"image": image, "image_size": len(image), "is_subgroup": is_sub,
               "surjective": surjective, "kernel_minimal": kernel_is_minimal(c)}
    # an image that is not a subgroup is only consistent when the hypotheses fail
    if not is_sub and surjective and witness["kernel_minimal"]:
        return _fail(witness)
    return "pass", witness


# ---------------------------------------------------------------------------
# action checks
# ---------------------------------------------------------------------------

def check_germ(inst: Instance, cfg: SuiteConfig):
    act = inst.obj
    gg = germ_groupoid(act)
    witness: dict[str, Any] = {"arrows": len(gg), "units": len(gg.units)}
    model = GERM_MODELS.get(inst.name)
    if model is None:
        return "pass", witness
    target = parse_expression(model, "groupoid")
    iso = find_isomorphism(gg, target)
    witness["model"] = model
    witness["isomorphic"] = iso is not None
    return ("pass" if iso is not None else "fail"), witness


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

CHECKS: dict[str, tuple[Callable, tuple[str, ...]]] = {
    "validate": (check_validate, ("groupoid", "cocycle", "action", "group", "isgp", "element")),
    "structure": (check_structure, ("groupoid",)),
    "star_laws": (check_star_laws, ("groupoid",)),
    "normalizer_bisection": (check_normalizer_bisection, ("groupoid",)),
    "norm_coincidence": (check_norm_coincidence, ("groupoid",)),
    "normalizer_cutoff": (check_normalizer_cutoff, ("groupoid",)),
    "module_correspondence": (check_module_correspondence, ("groupoid",)),
    "psi_iso": (check_psi_iso, ("groupoid",)),
    "masa": (check_masa, ("groupoid",)),
    "subalgebra": (check_subalgebra, ("groupoid",)),
    "germ": (check_germ, ("action",)),
    "grading": (check_grading, ("cocycle",)),
    "galois": (check_galois, ("cocycle",)),
    "counterexample": (check_counterexample, ("cocycle",)),
}

VERBS: dict[str, tuple[str, ...]] = {
    "validate": ("validate",),
    "props": ("structure", "star_laws", "normalizer_bisection"),
    "norm": ("norm_coincidence", "normalizer_cutoff"),
    "theorem32": ("module_correspondence",),
    "psi-iso": ("psi_iso",),
    "masa": ("masa",),
    "subalgebra": ("subalgebra",),
    "germ": ("germ",),
    "grading": ("grading",),
    "galois": ("galois",),
    "counterexample": ("counterexample",),
    "suite": tuple(CHECKS),
}


def _error_witness(exc: BaseException) -> dict:
    w = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("axiom", "witness"):
        if hasattr(exc, attr):
            w[attr] = getattr(exc, attr)
    return w


def _run_one(name: str, inst: Instance, cfg: SuiteConfig) -> CheckReport | None:
    fn, kinds = CHECKS[name]
    if inst.kind not in kinds:
        return None
    t0 = time.perf_counter()
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            status, witness = fn(inst, cfg)
    except _Skip as exc:
        status, witness = "skip", {"reason": str(exc)}
    except _Warn as exc:
        status, witness = "warn", exc.witness
    except GroupoidLabError as exc:
        status, witness = "fail", _error_witness(exc)
    elapsed = round((time.perf_counter() - t0) * 1000, 1) if cfg.timing else 0.0
    return CheckReport(name, inst.name, status, witness, elapsed)


def load_instances(cfg: SuiteConfig) -> tuple[list[Instance], list[CheckReport]]:
    """Load configured instances; validation failures become ``validate`` fail reports.

    ParseError (malformed input) propagates to the caller.
    """
    if not cfg.instances:
        return default_corpus(), []
    loaded, failed = [], []
    for spec in cfg.instances:
        try:
            loaded.append(load_instance(spec))
        except ParseError:
            raise
        except GroupoidLabError as exc:
            failed.append(CheckReport("validate", spec, "fail", _error_witness(exc), 0.0))
    return loaded, failed


def run_checks(checks: Iterable[str], cfg: SuiteConfig) -> list[CheckReport]:
    instances, reports = load_instances(cfg)
    checks = list(checks)
    for inst in instances:
        for name in checks:
            rep = _run_one(name, inst, cfg)
            if rep is not None:
                reports.append(rep)
    return reports


def run_suite(cfg: SuiteConfig) -> tuple[list[CheckReport], int]:
    reports = run_checks(VERBS["suite"], cfg)
    return reports, exit_status(reports)


def exit_status(reports: Iterable[CheckReport]) -> int:
    return 1 if any(r.status == "fail" for r in reports) else 0


def emit_report(reports: list[CheckReport], fmt: str = "text") -> str:
    if not reports:
        return ""
    if fmt == "json-lines":
        return "".join(json.dumps(r.as_dict(), separators=(",", ":")) + "\n" for r in reports)
    rows = [("check", "instance", "status", "ms", "witness")]
    for r in reports:
        w = "" if r.witness is None else json.dumps(jsonable(r.witness), separators=(",", ":"))
        rows.append((r.check, r.instance, r.status, f"{r.elapsed_ms:.1f}", w))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ["  ".join(row[i].ljust(widths[i]) for i in range(4)) + "  " + row[4]
             for row in rows]
    return "\n".join(line.rstrip() for line in lines) + "\n"
