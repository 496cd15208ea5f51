"""Scenario files: JSON descriptions of verification runs, and their reports.

A scenario selects one mode (pullback, rigidity, levi, umehara, relatives,
suite), the space forms and maps involved, and sampling and tolerance
controls.  Running one produces a Report whose canonical JSON form is
deterministic for a fixed seed: per-check wall-clock timings are kept on the
Report object only and never serialized.

Scenario schema (all keys lowercase unless noted):

    {
      "mode": "pullback",
      "source": {"kind": "ball" | "projective" | "euclidean", "dim": 2, "sig": 2},
      "target": {...},                     # "targets": [t1, t2] for relatives
      "map": ["z1", "z2^2"],              # "maps": [[...], [...]] for relatives
      "p": 1,
      "r": 1.0,                            # levi mode only: bundle level set
      "series": {"name": "psi", "params": {"p": 1, "map": ["z1"]}},  # umehara
      "orders": [2, 4, 6],                 # umehara
      "sampling": {"count": 50, "seed": 42, "radius": null},
      "tolerances": {"proportionality": 1e-8, ...},
      "expect": {"signature": [3, 0, 0], "verdict": "growing", "lambdaHat": 2}
    }

"sig" defaults to dim (definite).  Report checks are sorted by name and
overall is the conjunction of the per-check verdicts.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import KformError, ScenarioError
from .expressions import MapExpr, parse_map
from .levi import levi_form, sample_bundle_points
from .ppforms import DEFAULT_TOL, proportionality_test, relatives_test
from .rigidity import (
    conclude_isometry_factor,
    eigen_products_check,
    profile_from_pullback,
    ricci_pullback_check,
)
from .spaceforms import SpaceForm, euclidean, sample_chart_points

__all__ = [
    "MODES",
    "CheckRecord",
    "Report",
    "Scenario",
    "parse_scenario",
    "run_scenario",
    "report_to_json",
]

MODES = ("levi", "pullback", "relatives", "rigidity", "suite", "umehara")

DEFAULT_SEED = 42
DEFAULT_COUNT = 50


@dataclass(frozen=True)
class CheckRecord:
    """One verification check: verdict plus whichever numbers it produced."""

    name: str
    verdict: str
    lambdaHat: float | None = None
    residual: float | None = None
    signature: tuple | None = None
    rankTable: tuple | None = None
    seconds: float = 0.0

    def to_json_dict(self) -> dict:
        out = {"name": self.name, "verdict": self.verdict}
        if self.lambdaHat is not None:
            out["lambdaHat"] = float(self.lambdaHat)
        if self.residual is not None:
            out["residual"] = float(self.residual)
        if self.signature is not None:
            out["signature"] = [int(v) for v in self.signature]
        if self.rankTable is not None:
            out["rankTable"] = [[int(n), int(r)] for n, r in self.rankTable]
        return out


@dataclass(frozen=True)
class Report:
    """Outcome of one scenario: echoed inputs, sorted checks, conjunction."""

    scenario: dict
    checks: tuple
    overall: str
    timings: dict = field(default_factory=dict)


def _assemble(echo: dict, records) -> Report:
    checks = tuple(sorted(records, key=lambda r: r.name))
    overall = "PASS" if all(r.verdict == "PASS" for r in checks) else "FAIL"
    timings = {r.name: r.seconds for r in checks}
    return Report(scenario=echo, checks=checks, overall=overall, timings=timings)


def report_to_json(report: Report) -> str:
    """Canonical JSON: sorted keys, two-space indent, no timing data."""
    payload = {
        "scenario": report.scenario,
        "checks": [r.to_json_dict() for r in report.checks],
        "overall": report.overall,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# parsing


def _space_from_json(obj, where: str) -> SpaceForm:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where} must be an object with kind and dim")
    kind = obj.get("kind")
    if kind not in ("euclidean", "ball", "projective"):
        raise ScenarioError(
            f"{where}.kind must be one of euclidean, ball, projective; got {kind!r}"
        )
    dim = obj.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ScenarioError(f"{where}.dim must be a positive integer, got {dim!r}")
    sig = obj.get("sig", dim)
    if not isinstance(sig, int) or isinstance(sig, bool) or not 0 <= sig <= dim:
        raise ScenarioError(f"{where}.sig must be an integer in [0, dim], got {sig!r}")
    return SpaceForm(kind, dim, sig)


def _space_echo(sf: SpaceForm) -> dict:
    return {"kind": sf.kind, "dim": sf.dim, "sig": sf.sig}


def _map_from_json(obj, arity: int, codim: int, where: str) -> MapExpr:
    if not isinstance(obj, list) or not all(isinstance(c, str) for c in obj):
        raise ScenarioError(f"{where} must be a list of expression strings")
    if len(obj) != codim:
        raise ScenarioError(
            f"{where} must have exactly {codim} components (the target dimension), got {len(obj)}"
        )
    try:
        return parse_map(obj, arity)
    except (KformError, IndexError) as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def _int_field(data: dict, key: str, lo: int, hi: int | None = None) -> int:
    value = data.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < lo:
        raise ScenarioError(f"{key} must be an integer >= {lo}, got {value!r}")
    if hi is not None and value > hi:
        raise ScenarioError(f"{key} must be at most {hi}, got {value}")
    return value


@dataclass(frozen=True)
class Scenario:
    """Validated scenario: normalized fields plus the canonical echo dict."""

    mode: str
    source: SpaceForm | None
    targets: tuple
    maps: tuple
    p: int | None
    r: float
    series: dict | None
    orders: tuple
    count: int
    seed: int
    radius: float | None
    tolerances: dict
    expect: dict
    echo: dict


def parse_scenario(data) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario root must be a JSON object")
    mode = data.get("mode")
    if mode not in MODES:
        raise ScenarioError(f"mode must be one of {', '.join(MODES)}; got {mode!r}")

    sampling = data.get("sampling", {})
    if not isinstance(sampling, dict):
        raise ScenarioError("sampling must be an object")
    count = sampling.get("count", DEFAULT_COUNT)
    if not isinstance(count, int) or isinstance(count, bool) or count < 1:
        raise ScenarioError(f"sampling.count must be a positive integer, got {count!r}")
    seed = sampling.get("seed", DEFAULT_SEED)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ScenarioError(f"sampling.seed must be an integer, got {seed!r}")
    radius = sampling.get("radius")
    if radius is not None:
        radius = float(radius)
        if not radius > 0:
            raise ScenarioError(f"sampling.radius must be positive, got {radius}")

    tolerances = data.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ScenarioError("tolerances must be an object of named floats")
    tolerances = {str(k): float(v) for k, v in tolerances.items()}
    expect = data.get("expect", {})
    if not isinstance(expect, dict):
        raise ScenarioError("expect must be an object")

    source = None
    targets: tuple = ()
    maps: tuple = ()
    p = None
    r = 1.0
    series = None
    orders: tuple = ()

    echo: dict = {"mode": mode, "sampling": {"count": count, "seed": seed, "radius": radius}}
    if tolerances:
        echo["tolerances"] = dict(sorted(tolerances.items()))
    if expect:
        echo["expect"] = {k: expect[k] for k in sorted(expect)}

    if mode in ("pullback", "rigidity"):
        source = _space_from_json(data.get("source"), "source")
        target = _space_from_json(data.get("target"), "target")
        targets = (target,)
        p = _int_field(data, "p", 1, min(source.dim, target.dim))
        maps = (_map_from_json(data.get("map"), source.dim, target.dim, "map"),)
        echo.update(
            source=_space_echo(source),
            target=_space_echo(target),
            map=list(data["map"]),
            p=p,
        )
    elif mode == "levi":
        source = _space_from_json(data.get("source"), "source")
        p = _int_field(data, "p", 1, source.dim)
        r = float(data.get("r", 1.0))
        if not r > 0:
            raise ScenarioError(f"r must be positive, got {r}")
        echo.update(source=_space_echo(source), p=p, r=r)
    elif mode == "relatives":
        source = _space_from_json(data.get("source"), "source")
        raw_targets = data.get("targets")
        if not isinstance(raw_targets, list) or len(raw_targets) != 2:
            raise ScenarioError("targets must be a list of exactly two space forms")
        targets = tuple(
            _space_from_json(t, f"targets[{i}]") for i, t in enumerate(raw_targets)
        )
        raw_maps = data.get("maps")
        if not isinstance(raw_maps, list) or len(raw_maps) != 2:
            raise ScenarioError("maps must be a list of exactly two component lists")
        maps = tuple(
            _map_from_json(mlist, source.dim, targets[i].dim, f"maps[{i}]")
            for i, mlist in enumerate(raw_maps)
        )
        p = _int_field(data, "p", 1, min(source.dim, targets[0].dim, targets[1].dim))
        echo.update(
            source=_space_echo(source),
            targets=[_space_echo(t) for t in targets],
            maps=[list(m) for m in raw_maps],
            p=p,
        )
    elif mode == "umehara":
        raw = data.get("series")
        if not isinstance(raw, dict) or not isinstance(raw.get("name"), str):
            raise ScenarioError("series must be an object with a name and params")
        params = raw.get("params", {})
        if not isinstance(params, dict):
            raise ScenarioError("series.params must be an object")
        series = {"name": raw["name"], "params": params}
        raw_orders = data.get("orders")
        if (
            not isinstance(raw_orders, list)
            or not raw_orders
            or not all(isinstance(n, int) and not isinstance(n, bool) for n in raw_orders)
        ):
            raise ScenarioError("orders must be a nonempty list of integers")
        orders = tuple(raw_orders)
        verdict = expect.get("verdict")
        if verdict not in ("bounded", "growing"):
            raise ScenarioError(
                "expect.verdict must be 'bounded' or 'growing' for umehara mode"
            )
        echo.update(series=series, orders=list(orders))
    # suite mode carries no further fields

    return Scenario(
        mode=mode,
        source=source,
        targets=targets,
        maps=maps,
        p=p,
        r=r,
        series=series,
        orders=orders,
        count=count,
        seed=seed,
        radius=radius,
        tolerances=tolerances,
        expect=expect,
        echo=echo,
    )


# ---------------------------------------------------------------------------
# mode handlers


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _run_pullback(sc: Scenario) -> list:
    src, tgt, F = sc.source, sc.targets[0], sc.maps[0]
    tol = sc.tolerances.get("proportionality", DEFAULT_TOL)
    points = sample_chart_points(src, sc.count, sc.seed, sc.radius)
    records = []
    degrees = [sc.p] if sc.p == 1 else [sc.p, 1]
    for deg in degrees:
        start = time.perf_counter()
        res = proportionality_test(F, src, tgt, deg, points, tol=tol)
        records.append(
            CheckRecord(
                name=f"pullback_p{deg}",
                verdict=_verdict(res.passed),
                lambdaHat=res.lambdaHat,
                residual=res.maxResidual,
                seconds=time.perf_counter() - start,
            )
        )
    return records


def _run_rigidity(sc: Scenario) -> list:
    src, tgt, F = sc.source, sc.targets[0], sc.maps[0]
    tol = sc.tolerances.get("rigidity", 1e-8)
    points = sample_chart_points(src, sc.count, sc.seed, sc.radius)
    records = []

    start = time.perf_counter()
    profiles = [profile_from_pullback(F, src, tgt, sc.p, w) for w in points]
    products_ok = all(eigen_products_check(prof, tol=tol) for prof in profiles)
    records.append(
        CheckRecord(
            name="eigen_products",
            verdict=_verdict(products_ok),
            seconds=time.perf_counter() - start,
        )
    )

    if sc.p < src.dim:
        start = time.perf_counter()
        factors = [conclude_isometry_factor(prof, tol=tol) for prof in profiles]
        spread_tol = sc.tolerances.get("factorSpread", 1e-6)
        if any(f is None for f in factors):
            records.append(
                CheckRecord(
                    name="isometry_factor",
                    verdict="FAIL",
                    seconds=time.perf_counter() - start,
                )
            )
        else:
            mean = float(np.mean(factors))
            spread = float(max(factors) - min(factors))
            ok = spread <= spread_tol * max(abs(mean), 1e-300)
            records.append(
                CheckRecord(
                    name="isometry_factor",
                    verdict=_verdict(ok),
                    lambdaHat=mean,
                    residual=spread,
                    seconds=time.perf_counter() - start,
                )
            )

    if src.dim == tgt.dim:
        start = time.perf_counter()
        ok, worst, _skipped = ricci_pullback_check(
            F, src, tgt, points, tol=sc.tolerances.get("ricci", 1e-8)
        )
        records.append(
            CheckRecord(
                name="ricci_pullback",
                verdict=_verdict(ok),
                residual=worst,
                seconds=time.perf_counter() - start,
            )
        )
    return records


def _run_levi(sc: Scenario) -> list:
    start = time.perf_counter()
    pts = sample_bundle_points(sc.source, sc.p, sc.r, sc.count, sc.seed, sc.radius)
    reports = [
        levi_form(sc.source, sc.p, sc.r, pt.base, pt.fiber) for pt in pts
    ]
    sigs = {(rep.nNeg, rep.nZero, rep.nPos) for rep in reports}
    ok = len(sigs) == 1
    expected = sc.expect.get("signature")
    if expected is not None:
        ok = ok and sigs == {tuple(int(v) for v in expected)}
    rep0 = reports[0]
    min_eig = min(float(np.abs(rep.eigenvalues).min()) for rep in reports)
    return [
        CheckRecord(
            name="levi_signature",
            verdict=_verdict(ok),
            signature=(rep0.nNeg, rep0.nZero, rep0.nPos),
            residual=min_eig,
            seconds=time.perf_counter() - start,
        )
    ]


def _run_umehara(sc: Scenario) -> list:
    from .umehara import rank_growth

    start = time.perf_counter()
    table, verdict = rank_growth(sc.series["name"], sc.series["params"], sc.orders)
    ok = verdict == sc.expect["verdict"]
    return [
        CheckRecord(
            name="rank_growth",
            verdict=_verdict(ok),
            rankTable=tuple((n, r) for n, r in table),
            seconds=time.perf_counter() - start,
        )
    ]


def _run_relatives(sc: Scenario) -> list:
    m = sc.source.dim
    t1, t2 = sc.targets
    radius = sc.radius
    if radius is None:
        radius = 0.9 if "ball" in (t1.kind, t2.kind) else 2.0
    points = sample_chart_points(euclidean(m), sc.count, sc.seed, radius)
    tol = sc.tolerances.get("proportionality", DEFAULT_TOL)
    start = time.perf_counter()
    res = relatives_test(sc.maps[0], sc.maps[1], t1, t2, m, sc.p, points, tol=tol)
    records = [
        CheckRecord(
            name=f"relatives_p{sc.p}",
            verdict=_verdict(res.passed),
            lambdaHat=res.lambdaHat,
            residual=res.maxResidual,
            seconds=time.perf_counter() - start,
        )
    ]
    expected = sc.expect.get("lambdaHat")
    if expected is not None:
        tol_l = sc.tolerances.get("lambdaMatch", 1e-8)
        dev = abs(res.lambdaHat - float(expected))
        records.append(
            CheckRecord(
                name="lambda_matches",
                verdict=_verdict(dev <= tol_l * max(1.0, abs(float(expected)))),
                lambdaHat=res.lambdaHat,
                residual=dev,
            )
        )
    return records


_HANDLERS = {
    "pullback": _run_pullback,
    "rigidity": _run_rigidity,
    "levi": _run_levi,
    "umehara": _run_umehara,
    "relatives": _run_relatives,
}


def run_scenario(source, seed: int | None = None, samples: int | None = None) -> Report:
    """Run a scenario given as a file path or an already-parsed dict.

    seed and samples override the scenario's sampling block (ignored by
    suite mode, which is pinned to its own defaults for reproducibility).
    """
    if isinstance(source, dict):
        data = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ScenarioError(f"scenario file is not valid JSON: {exc}") from exc
    sc = parse_scenario(data)
    if sc.mode == "suite":
        from .suite import run_paper_suite

        return run_paper_suite()
    if seed is not None or samples is not None:
        data = dict(data)
        sampling = dict(data.get("sampling", {}))
        if seed is not None:
            sampling["seed"] = int(seed)
        if samples is not None:
            sampling["count"] = int(samples)
        data["sampling"] = sampling
        sc = parse_scenario(data)
    return _assemble(sc.echo, _HANDLERS[sc.mode](sc))
