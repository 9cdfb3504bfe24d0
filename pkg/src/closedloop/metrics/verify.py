"""
Equilibrium verification.

Verification runs in two stages: `collect_*_evidence` measures the pair on
the dataset and stores plain numbers, then `judge` turns evidence plus
thresholds into per-class findings, named checks and a status. `judge` looks
at nothing else, so any stored report can be re-judged.

Multiple-subspace checks:
  injective       every FX_j has rank d_S_j and its top squared singular
                  values sit on one of the two admissible spectral shapes
  discriminative  normalized cross-class Grams below the orthogonality tol
  consistent      every f(x) lies (relatively) close to span F G F X_j

Single-subspace checks:
  injective       FX has rank d_S
  isometry        sigma_p(FX) / sigma_p(X) within tol for p <= d_S and the
                  pairwise distance ratios within tol for the required fraction
  consistent      as above
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import files
from ..errors import InvalidConfig
from . import env, measures


@dataclass(frozen=True)
class Thresholds:
    rank_rtol: float = env.RANK_RTOL
    spectral_tol: float = env.SPECTRAL_TOL
    orthogonality_tol: float = env.ORTHOGONALITY_TOL
    alignment_tol: float = env.ALIGNMENT_TOL
    isometry_tol: float = env.ISOMETRY_TOL
    isometry_fraction: float = env.ISOMETRY_FRACTION
    dominance_min: float = env.DOMINANCE_MIN
    mode: str = env.MODE_AUTO

    def __post_init__(self):
        for name in (
            "rank_rtol",
            "spectral_tol",
            "orthogonality_tol",
            "alignment_tol",
            "isometry_tol",
            "dominance_min",
        ):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidConfig(f"thresholds.{name}: must be a number")
            if not math.isfinite(value) or value <= 0:
                raise InvalidConfig(f"thresholds.{name}: must be positive")
        if isinstance(self.isometry_fraction, bool) or not (
            isinstance(self.isometry_fraction, (int, float))
            and 0 < self.isometry_fraction <= 1
        ):
            raise InvalidConfig("thresholds.isometry_fraction: must be in (0, 1]")
        if self.mode not in env.MODES:
            raise InvalidConfig(f"thresholds.mode: must be one of {list(env.MODES)}")

    @classmethod
    def oracle(cls, tol=env.ORACLE_TOL):
        return cls(
            spectral_tol=tol,
            orthogonality_tol=tol,
            alignment_tol=tol,
            isometry_tol=tol,
            isometry_fraction=1.0,
            mode=env.MODE_STRICT,
        )

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data, prefix="thresholds", path=None):
        return files.dataclass_from_dict(cls, data, prefix, path)


def resolve_mode(thresholds, ds):
    if thresholds.mode != env.MODE_AUTO:
        return thresholds.mode
    return env.MODE_RELAXED if ds.config.sigma_sq > 0 else env.MODE_STRICT


@dataclass
class EquilibriumReport:
    game: str
    mode: str
    status: str
    checks: dict
    classes: list
    evidence: dict
    thresholds: Thresholds
    extra: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == env.STATUS_PASS

    def to_dict(self):
        return _json_safe(
            {
                "game": self.game,
                "mode": self.mode,
                "status": self.status,
                "checks": self.checks,
                "classes": self.classes,
                "evidence": self.evidence,
                "thresholds": self.thresholds.to_dict(),
                **self.extra,
            }
        )


def _json_safe(obj):
    # JSON has no infinities
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def spectral_branch(s, d, n_j, tol):
    """
    Which admissible shape the top-d squared singular values take, or None:

      "equal"     all d values within tol of n_j / d
      "flat-top"  (d >= 2) the first d - 1 values agree within tol, their
                  mean lies in (n_j / d, n_j / (d - 1)) up to tol and the
                  last one is positive
    """
    if len(s) < d:
        return None
    sq = np.asarray(s[:d], dtype=np.float64) ** 2
    target = n_j / d
    if np.all(np.abs(sq - target) <= tol * target):
        return "equal"
    if d >= 2:
        top = sq[: d - 1]
        mean = float(np.mean(top))
        if (
            mean > 0
            and np.all(np.abs(top - mean) <= tol * mean)
            and target * (1 - tol) < mean < n_j / (d - 1) * (1 + tol)
            and sq[d - 1] > 0
        ):
            return "flat-top"
    return None


def literal_reading(s, d, n_j, tol):
    """
    Whether the top-d singular values themselves (not squared) equal n_j / d
    within tol. Recorded next to the squared reading; never decides a check.
    """
    if len(s) < d:
        return False
    target = n_j / d
    return bool(np.all(np.abs(np.asarray(s[:d]) - target) <= tol * target))


def _class_findings(evidence, t):
    findings = []
    spectra = evidence["spectra_rep"]
    dims = evidence["subspace_dims"]
    dominance = measures.spectral_dominance(spectra, dims)
    for j, (s, d, n_j) in enumerate(zip(spectra, dims, evidence["class_counts"])):
        s = np.asarray(s, dtype=np.float64)
        findings.append(
            {
                "class": j,
                "rank": measures.numerical_rank(s, t.rank_rtol),
                "subspace_dim": d,
                "target_squared": n_j / d,
                "branch": spectral_branch(s, d, n_j, t.spectral_tol),
                "literal_equal": literal_reading(s, d, n_j, t.spectral_tol),
                "dominance": dominance[j],
                "max_relative_residual": evidence["max_relative_residual"][j],
            }
        )
    return findings


def judge(evidence, thresholds):
    """
    Returns (status, checks, classes) computed from stored evidence only.
    """
    t = thresholds
    classes = _class_findings(evidence, t)
    rank_ok = all(c["rank"] == c["subspace_dim"] for c in classes)
    consistent = max(evidence["max_relative_residual"]) < t.alignment_tol
    dominant = all(c["dominance"] > t.dominance_min for c in classes)

    if evidence["game"] == "msp":
        cross = np.asarray(evidence["cross_gram"], dtype=np.float64)
        off = cross[~np.eye(cross.shape[0], dtype=bool)]
        checks = {
            "injective": rank_ok and all(c["branch"] is not None for c in classes),
            "discriminative": bool(off.size == 0 or off.max() < t.orthogonality_tol),
            "consistent": bool(consistent),
        }
    else:
        ratios = np.asarray(evidence["isometry_spectra_ratios"], dtype=np.float64)
        quantile = evidence["isometry_deviation_quantile"]
        # the stored quantile only answers for the fraction it was taken at
        pairs_ok = quantile is None or (
            quantile["fraction"] == t.isometry_fraction
            and quantile["value"] <= t.isometry_tol
        )
        checks = {
            "injective": rank_ok,
            "isometry": bool(np.all(np.abs(ratios - 1.0) <= t.isometry_tol) and pairs_ok),
            "consistent": bool(consistent),
        }
    checks["dominant"] = dominant

    core = [v for k, v in checks.items() if k != "dominant"]
    if evidence["mode"] == env.MODE_RELAXED:
        status = env.STATUS_PARTIAL if dominant else env.STATUS_FAIL
    else:
        status = env.STATUS_PASS if all(core) else env.STATUS_FAIL
    return status, checks, classes


def _common_evidence(enc, dec, ds, thresholds, game):
    X = ds.X
    Z = enc(X)
    Zhat = enc(dec(Z))
    part = ds.partition
    residuals = measures.alignment_residuals(Z, Zhat, part, thresholds.rank_rtol)
    relative = measures.relative_residuals(Z, residuals)
    evidence = {
        "game": game,
        "mode": resolve_mode(thresholds, ds),
        "subspace_dims": ds.subspace_dims,
        "class_counts": [int(c) for c in part.class_counts],
        "spectra_rep": [s.tolist() for s in measures.class_spectra(Z, part)],
        "spectra_data": [s.tolist() for s in measures.class_spectra(X, part)],
        "max_relative_residual": [
            float(relative[part.indices(j)].max()) for j in range(part.k)
        ],
    }
    return evidence, Z


def collect_msp_evidence(enc, dec, ds, thresholds):
    evidence, Z = _common_evidence(enc, dec, ds, thresholds, "msp")
    evidence["cross_gram"] = measures.cross_gram(Z, ds.partition).tolist()
    return evidence


def collect_ssp_evidence(enc, dec, ds, thresholds):
    evidence, Z = _common_evidence(enc, dec, ds, thresholds, "ssp")
    d = ds.subspace_dims[0]
    s_rep = np.asarray(evidence["spectra_rep"][0][:d])
    s_data = np.asarray(evidence["spectra_data"][0][:d])
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(s_data > 0, s_rep / np.where(s_data > 0, s_data, 1.0), 0.0)
    evidence["isometry_spectra_ratios"] = ratios.tolist()

    pair_ratios = measures.isometry_ratios(ds.X, Z)
    if pair_ratios.size:
        deviation = np.quantile(
            np.abs(pair_ratios - 1.0), thresholds.isometry_fraction, method="inverted_cdf"
        )
        evidence["isometry_deviation_quantile"] = {
            "fraction": thresholds.isometry_fraction,
            "value": float(deviation),
        }
    else:
        evidence["isometry_deviation_quantile"] = None
    evidence["isometry_pairs"] = int(pair_ratios.size)
    return evidence


def report_from_evidence(evidence, thresholds, extra=None):
    status, checks, classes = judge(evidence, thresholds)
    return EquilibriumReport(
        game=evidence["game"],
        mode=evidence["mode"],
        status=status,
        checks=checks,
        classes=classes,
        evidence=evidence,
        thresholds=thresholds,
        extra=extra or {},
    )


def verify_msp_equilibrium(enc, dec, ds, p, thresholds=None):
    thresholds = thresholds or Thresholds()
    evidence = collect_msp_evidence(enc, dec, ds, thresholds)
    return report_from_evidence(evidence, thresholds, {"eps_sq": p.eps_sq})


def verify_ssp_equilibrium(enc, dec, ds, thresholds=None):
    thresholds = thresholds or Thresholds()
    evidence = collect_ssp_evidence(enc, dec, ds, thresholds)
    return report_from_evidence(evidence, thresholds)
