"""Named, config-driven, seed-reproducible experiments.

Every experiment resolves its parameters against a declared schema (unknown
or ill-typed keys are rejected before any computation), runs from a single
seed, and writes canonical CSV files plus a manifest.  Identical resolved
configs produce byte-identical data files; the manifest records the config
hash, timestamps, and SHA-256 digests of every output.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from nisqlab import bitflip_code, boolfn, boson, circuit_stats, linalg, noisy_boson, qsim
from nisqlab.errors import ConfigError
from nisqlab.rng import RandomSource


def worker_cap() -> int:
    """Worker-count cap from LAB_THREADS; all engines here are sequential,
    so a single worker always satisfies it."""
    raw = os.environ.get("LAB_THREADS", "")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"LAB_THREADS must be an integer, got {raw!r}")


# ----------------------------------------------------------------------
# Registry machinery
# ----------------------------------------------------------------------

@dataclass
class ParamSpec:
    kind: str  # int | float | bool | str | list[int] | list[float] | list[str]
    default: object
    help: str = ""


@dataclass
class Experiment:
    name: str
    description: str
    anchor: str
    params: dict[str, ParamSpec]
    runner: object


REGISTRY: dict[str, Experiment] = {}


def _register(name, description, anchor, params):
    def deco(fn):
        REGISTRY[name] = Experiment(name, description, anchor, params, fn)
        return fn

    return deco


def list_experiments() -> list[tuple[str, str, str]]:
    """(name, one-line description, claim anchor) for every registered run."""
    return [(e.name, e.description, e.anchor) for e in REGISTRY.values()]


def _coerce(exp_name: str, key: str, spec: ParamSpec, value):
    path = f"{exp_name}.{key}"

    def fail(msg):
        raise ConfigError(f"parameter {path}: {msg}")

    kind = spec.kind
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            fail(f"expected an integer, got {value!r}")
        if isinstance(value, float) and not value.is_integer():
            fail(f"expected an integer, got {value!r}")
        return int(value)
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            fail(f"expected a number, got {value!r}")
        return float(value)
    if kind == "bool":
        if not isinstance(value, bool):
            fail(f"expected a boolean, got {value!r}")
        return value
    if kind == "str":
        if not isinstance(value, str):
            fail(f"expected a string, got {value!r}")
        return value
    if kind.startswith("list["):
        if not isinstance(value, (list, tuple)):
            fail(f"expected a list, got {value!r}")
        inner = kind[5:-1]
        out = []
        for i, v in enumerate(value):
            out.append(_coerce(exp_name, f"{key}[{i}]", ParamSpec(inner, None), v))
        return out
    fail(f"unhandled schema kind {kind!r}")


def resolve_params(exp: Experiment, overrides: dict) -> dict:
    resolved = {k: spec.default for k, spec in exp.params.items()}
    for key, value in overrides.items():
        if key not in exp.params:
            raise ConfigError(
                f'unknown parameter "{key}" for experiment {exp.name}; '
                f"known: {sorted(exp.params)}"
            )
        resolved[key] = _coerce(exp.name, key, exp.params[key], value)
    return resolved


def config_hash(name: str, resolved: dict) -> str:
    payload = json.dumps(
        {"experiment": name, "params": resolved}, sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    output_dir: str = "."


@dataclass
class RunManifest:
    experiment: str
    config: dict
    seed: int
    config_hash: str
    started: str
    finished: str
    outputs: list[dict]
    lab_threads: int

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


class RunContext:
    """Output helper handed to runners: seeded source + canonical CSV writer."""

    def __init__(self, name: str, params: dict, digest: str, outdir: Path):
        self.name = name
        self.params = params
        self.digest = digest
        self.outdir = outdir
        self.rng = RandomSource(params["seed"])

    def write_csv(self, filename: str, header: list[str], rows) -> Path:
        path = self.outdir / filename
        with open(path, "w", newline="") as fh:
            fh.write(
                f"# experiment={self.name} seed={self.params['seed']} "
                f"config_hash={self.digest}\n"
            )
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
        return path

    def write_text(self, filename: str, text: str) -> Path:
        path = self.outdir / filename
        path.write_text(text)
        return path


def run_experiment(cfg: ExperimentConfig, plot: bool = False) -> RunManifest:
    """Resolve, execute, and persist one experiment; returns the manifest."""
    if cfg.experiment not in REGISTRY:
        raise ConfigError(
            f"unknown experiment {cfg.experiment!r}; see `lab list` "
            f"(registered: {sorted(REGISTRY)})"
        )
    exp = REGISTRY[cfg.experiment]
    resolved = resolve_params(exp, cfg.params)
    digest = config_hash(exp.name, resolved)
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    ctx = RunContext(exp.name, resolved, digest, outdir)

    started = datetime.now(timezone.utc).isoformat()
    files = list(exp.runner(ctx))
    if plot:
        from nisqlab import plots

        files += plots.render(exp.name, outdir)
    finished = datetime.now(timezone.utc).isoformat()

    outputs = []
    for f in files:
        data = Path(f).read_bytes()
        outputs.append({"file": Path(f).name, "sha256": hashlib.sha256(data).hexdigest()})
    manifest = RunManifest(
        experiment=exp.name,
        config=resolved,
        seed=resolved["seed"],
        config_hash=digest,
        started=started,
        finished=finished,
        outputs=outputs,
        lab_threads=worker_cap(),
    )
    (outdir / "manifest.json").write_text(manifest.to_json())
    return manifest


def load_config(path) -> ExperimentConfig:
    obj = json.loads(Path(path).read_text())
    if "experiment" not in obj:
        raise ConfigError('config file must set "experiment"')
    extra = set(obj) - {"experiment", "params", "output_dir"}
    if extra:
        raise ConfigError(f"unknown config fields {sorted(extra)}")
    return ExperimentConfig(
        experiment=obj["experiment"],
        params=obj.get("params", {}),
        output_dir=obj.get("output_dir", "."),
    )


# ----------------------------------------------------------------------
# Boson-sampling experiments
# ----------------------------------------------------------------------

@_register(
    "boson-ideal",
    "exact boson and fermion sampling laws for one Haar input",
    "photon multisets occur with probability |permanent|^2 / prod(S!); "
    "fermion subsets with |determinant|^2",
    {
        "n": ParamSpec("int", 3, "particles"),
        "m": ParamSpec("int", 6, "modes"),
        "seed": ParamSpec("int", 7),
    },
)
def _run_boson_ideal(ctx: RunContext):
    n, m = ctx.params["n"], ctx.params["m"]
    a = linalg.haar_orthonormal_rows(n, m, ctx.rng)
    db = boson.boson_distribution(a)
    df = boson.fermion_distribution(a)
    files = [
        ctx.write_csv(
            "boson-ideal.csv",
            ["outcome", "probability"],
            [[boson.format_outcome(k), p] for k, p in zip(db.outcomes, db.probs)],
        ),
        ctx.write_csv(
            "boson-ideal-fermion.csv",
            ["outcome", "probability"],
            [[boson.format_outcome(k), p] for k, p in zip(df.outcomes, df.probs)],
        ),
        ctx.write_text(
            "boson-ideal-input.json", json.dumps(linalg.matrix_to_json(a))
        ),
    ]
    return files


@_register(
    "boson-noisy-decay",
    "ideal/noisy correlation across particle number and noise rate",
    "correlation between the noisy and ideal sampling laws falls off once "
    "the noise rate passes ~1/n",
    {
        "n_list": ParamSpec("list[int]", [2, 3, 4]),
        "t_list": ParamSpec("list[float]", [0.1, 0.3, 0.5, 0.8]),
        "m_list": ParamSpec("list[int]", [], "modes per n; empty means m = n^2"),
        "mc_samples": ParamSpec("int", 20000),
        "seed": ParamSpec("int", 7),
    },
)
def _run_boson_noisy_decay(ctx: RunContext):
    p = ctx.params
    m_list = p["m_list"]
    if m_list and len(m_list) != len(p["n_list"]):
        raise ConfigError("boson-noisy-decay.m_list must match n_list in length")
    if m_list:
        lookup = dict(zip(p["n_list"], m_list))
        m_rule = lookup.__getitem__
    else:
        m_rule = noisy_boson.default_mode_rule
    for n in p["n_list"]:
        boson.count_boson_outcomes(n, m_rule(n))  # cap check before the heavy loop
    rows = noisy_boson.correlation_decay_curve(
        p["n_list"], p["t_list"], p["mc_samples"], ctx.rng, m_rule=m_rule
    )
    return [
        ctx.write_csv(
            "boson-noisy-decay.csv",
            ["n", "m", "t", "corr", "std_err", "tvd"],
            [[r.n, r.m, r.t, r.corr, r.std_err, r.tvd] for r in rows],
        )
    ]


@_register(
    "boson-attenuation",
    "Monte Carlo mean of the mixed-input permanent vs its contraction law",
    "Gaussian mixing at rate t contracts the expected permanent by (1-t)^(n/2)",
    {
        "n": ParamSpec("int", 3),
        "m": ParamSpec("int", 9),
        "t_list": ParamSpec("list[float]", [0.1, 0.3, 0.7]),
        "mc_samples": ParamSpec("int", 100000),
        "pairs": ParamSpec("int", 5, "random (input, outcome) pairs"),
        "seed": ParamSpec("int", 11),
    },
)
def _run_boson_attenuation(ctx: RunContext):
    p = ctx.params
    n, m = p["n"], p["m"]
    outcomes = boson.enumerate_boson_outcomes(n, m)
    rows = []
    for pair_idx, src in enumerate(ctx.rng.split(p["pairs"])):
        rng_a, rng_s, rng_mc = src.split(3)
        a = linalg.haar_orthonormal_rows(n, m, rng_a)
        occ = outcomes[int(rng_s.generator.integers(len(outcomes)))]
        for t in p["t_list"]:
            est, target, se = noisy_boson.mean_attenuation_check(
                a, occ, t, p["mc_samples"], rng_mc
            )
            gap = abs(est - target)
            rows.append(
                [
                    pair_idx,
                    boson.format_outcome(occ),
                    t,
                    est.real,
                    est.imag,
                    target.real,
                    target.imag,
                    se,
                    gap,
                    gap / se if se > 0 else 0.0,
                ]
            )
    return [
        ctx.write_csv(
            "boson-attenuation.csv",
            [
                "pair",
                "outcome",
                "t",
                "est_re",
                "est_im",
                "target_re",
                "target_im",
                "std_err",
                "abs_gap",
                "gap_sigmas",
            ],
            rows,
        )
    ]


@_register(
    "boson-semigroup",
    "two-stage Gaussian mixing against one stage at the combined rate",
    "mixing at t1 then t2 equals one mix at 1-(1-t1)(1-t2) in distribution",
    {
        "n": ParamSpec("int", 2),
        "m": ParamSpec("int", 3),
        "t1": ParamSpec("float", 0.2),
        "t2": ParamSpec("float", 0.2),
        "mc_samples": ParamSpec("int", 100000),
        "seed": ParamSpec("int", 5),
    },
)
def _run_boson_semigroup(ctx: RunContext):
    p = ctx.params
    rng_a, rng_mc = ctx.rng.split(2)
    a = linalg.haar_orthonormal_rows(p["n"], p["m"], rng_a)
    cfg = noisy_boson.NoisyConfig(t=p["t1"], mc_samples=p["mc_samples"])
    two, one = noisy_boson.noise_semigroup_check(a, p["t1"], p["t2"], cfg, rng_mc)
    rows = []
    for k, p2, s2, p1, s1 in zip(two.outcomes, two.probs, two.std_errs, one.probs, one.std_errs):
        gap = abs(p2 - p1)
        comb = float(np.hypot(s2, s1))
        rows.append(
            [boson.format_outcome(k), p2, s2, p1, s1, gap, gap / comb if comb > 0 else 0.0]
        )
    return [
        ctx.write_csv(
            "boson-semigroup.csv",
            [
                "outcome",
                "p_two_stage",
                "se_two_stage",
                "p_one_stage",
                "se_one_stage",
                "gap",
                "gap_sigmas",
            ],
            rows,
        )
    ]


# ----------------------------------------------------------------------
# Boolean-function experiments
# ----------------------------------------------------------------------

def _parse_function_spec(spec: str) -> tuple[str, boolfn.BooleanFunction]:
    try:
        kind, _, arg = spec.partition(":")
        if kind == "majority":
            return spec, boolfn.make_majority(int(arg))
        if kind == "parity":
            return spec, boolfn.make_parity(int(arg))
        if kind == "tribes":
            w, _, s = arg.partition("x")
            return spec, boolfn.make_tribes(int(w), int(s))
    except (ValueError, TypeError):
        pass
    raise ConfigError(
        f'bad function spec {spec!r}: use "majority:N", "parity:N", or "tribes:WxS"'
    )


@_register(
    "bool-stability",
    "analytic vs Monte Carlo noise stability of standard Boolean functions",
    "stability under rho-correlated inputs separates majority-like "
    "(noise-stable) from parity-like (noise-sensitive) functions",
    {
        "functions": ParamSpec("list[str]", ["majority:5", "parity:5", "tribes:2x2"]),
        "rho_list": ParamSpec("list[float]", [0.3, 0.6, 0.9]),
        "shots": ParamSpec("int", 200000),
        "seed": ParamSpec("int", 3),
    },
)
def _run_bool_stability(ctx: RunContext):
    p = ctx.params
    rows = []
    for spec in p["functions"]:
        label, f = _parse_function_spec(spec)
        for rho in p["rho_list"]:
            exact = boolfn.noise_stability(f, rho)
            est, se = boolfn.empirical_stability(f, rho, p["shots"], ctx.rng)
            rows.append(
                [label, rho, exact, est, se, abs(est - exact) / se if se > 0 else 0.0]
            )
    return [
        ctx.write_csv(
            "bool-stability.csv",
            ["function", "rho", "stability", "empirical", "std_err", "gap_sigmas"],
            rows,
        )
    ]


@_register(
    "bool-degree-profile",
    "per-degree Walsh mass of standard Boolean functions",
    "robust functions concentrate spectral mass on low degrees; parity "
    "puts everything at the top",
    {
        "functions": ParamSpec("list[str]", ["majority:5", "parity:5", "tribes:2x2"]),
        "seed": ParamSpec("int", 3),
    },
)
def _run_bool_degree_profile(ctx: RunContext):
    rows = []
    for spec in ctx.params["functions"]:
        label, f = _parse_function_spec(spec)
        profile = boolfn.degree_profile(boolfn.walsh_transform(f))
        for d, mass in enumerate(profile.masses):
            rows.append([label, d, mass])
    return [
        ctx.write_csv("bool-degree-profile.csv", ["function", "degree", "mass"], rows)
    ]


@_register(
    "repetition-code-classical",
    "repetition-code majority decoding failure, exact and Monte Carlo",
    "encoding a bit by repetition and decoding by majority beats the bare "
    "bit whenever the flip rate is below one half",
    {
        "lengths": ParamSpec("list[int]", [3, 5, 7]),
        "p_list": ParamSpec("list[float]", [0.05, 0.1, 0.2]),
        "shots": ParamSpec("int", 1000000),
        "seed": ParamSpec("int", 13),
    },
)
def _run_repetition_classical(ctx: RunContext):
    p = ctx.params
    rows = []
    for length in p["lengths"]:
        for flip in p["p_list"]:
            exact = boolfn.repetition_majority_logical_error(length, flip)
            est, se = boolfn.repetition_majority_mc(length, flip, p["shots"], ctx.rng)
            rows.append([length, flip, exact, est, se, flip])
    return [
        ctx.write_csv(
            "repetition-code-classical.csv",
            ["length", "p", "exact", "mc_estimate", "mc_std_err", "physical"],
            rows,
        )
    ]


# ----------------------------------------------------------------------
# Circuit experiments
# ----------------------------------------------------------------------

@_register(
    "circuit-ideal-vs-noisy",
    "correlation and TVD between noiseless and noisy circuit outputs",
    "robust noisy outputs sit far from the ideal law once rates are "
    "appreciable",
    {
        "n": ParamSpec("int", 6),
        "depth": ParamSpec("int", 8),
        "t_list": ParamSpec("list[float]", [0.02, 0.05, 0.1, 0.2, 0.5]),
        "seed": ParamSpec("int", 23),
    },
)
def _run_circuit_ideal_vs_noisy(ctx: RunContext):
    p = ctx.params
    circ = qsim.random_circuit(p["n"], p["depth"], ctx.rng)
    rows = []
    for t in p["t_list"]:
        corr, tvd = circuit_stats.ideal_vs_noisy_correlation(
            circ, qsim.NoiseModel(t_qubit=t, t_gate=t)
        )
        rows.append([t, corr, tvd])
    return [
        ctx.write_csv("circuit-ideal-vs-noisy.csv", ["t", "corr", "tvd"], rows)
    ]


@_register(
    "circuit-chaos",
    "output sensitivity to lognormal jitter of the noise rates",
    "in the low-noise regime the output law depends sharply on fine noise "
    "parameters, so nominally identical runs decorrelate",
    {
        "n": ParamSpec("int", 6),
        "depth": ParamSpec("int", 28),
        "t": ParamSpec("float", 0.05),
        "jitter": ParamSpec("float", 0.5),
        "trials": ParamSpec("int", 20),
        "seed": ParamSpec("int", 4),
    },
)
def _run_circuit_chaos(ctx: RunContext):
    p = ctx.params
    rng_circ, rng_probe = ctx.rng.split(2)
    circ = qsim.random_circuit(p["n"], p["depth"], rng_circ)
    noise = qsim.NoiseModel(t_qubit=p["t"], t_gate=p["t"], jitter=p["jitter"])
    res = circuit_stats.chaos_probe(circ, noise, p["trials"], rng_probe)
    files = [
        ctx.write_csv(
            "circuit-chaos.csv",
            [
                "self_corr",
                "cross_corr_mean",
                "cross_corr_std",
                "cross_corr_spread",
                "trials",
                "t",
                "jitter",
            ],
            [
                [
                    res.self_corr,
                    res.cross_corr_mean,
                    res.cross_corr_std,
                    res.cross_corr_spread,
                    p["trials"],
                    p["t"],
                    p["jitter"],
                ]
            ],
        ),
        ctx.write_csv(
            "circuit-chaos-pairs.csv",
            ["pair", "corr"],
            [[i, c] for i, c in enumerate(res.pair_corrs)],
        ),
    ]
    return files


@_register(
    "circuit-fourier-profile",
    "Walsh degree profile of the circuit output law across noise rates",
    "growing noise concentrates the output's Walsh mass on low degrees",
    {
        "n": ParamSpec("int", 8),
        "depth": ParamSpec("int", 12),
        "t_list": ParamSpec("list[float]", [0.02, 0.2]),
        "cut_degree": ParamSpec("int", 4, "threshold for the high-degree mass summary"),
        "seed": ParamSpec("int", 15),
    },
)
def _run_circuit_fourier_profile(ctx: RunContext):
    p = ctx.params
    circ = qsim.random_circuit(p["n"], p["depth"], ctx.rng)
    rows, summary = [], []
    for t in p["t_list"]:
        _, out = qsim.run_circuit_density(circ, qsim.NoiseModel(t_qubit=t, t_gate=t))
        profile = circuit_stats.output_fourier_profile(out)
        for d, mass in enumerate(profile.masses):
            rows.append([t, d, mass])
        summary.append([t, profile.mass_above(p["cut_degree"]), profile.degenerate])
    return [
        ctx.write_csv("circuit-fourier-profile.csv", ["t", "degree", "mass"], rows),
        ctx.write_csv(
            "circuit-fourier-profile-summary.csv",
            ["t", f"mass_above_{p['cut_degree']}", "degenerate"],
            summary,
        ),
    ]


@_register(
    "cat-error-correlation",
    "per-shot error-indicator correlation of the two cat-state qubits",
    "qubits entangled by a gate see positively correlated errors",
    {
        "t_gate": ParamSpec("float", 0.1),
        "t_qubit": ParamSpec("float", 0.02),
        "shots": ParamSpec("int", 100000),
        "seed": ParamSpec("int", 21),
    },
)
def _run_cat_error_correlation(ctx: RunContext):
    p = ctx.params
    noise = qsim.NoiseModel(t_qubit=p["t_qubit"], t_gate=p["t_gate"])
    _, records = qsim.run_circuit_trajectories(
        qsim.cat_circuit(), noise, p["shots"], ctx.rng
    )
    r, (lo, hi) = circuit_stats.error_correlation(records, (0, 1))
    return [
        ctx.write_csv(
            "cat-error-correlation.csv",
            ["pearson", "ci_lo", "ci_hi", "events", "shots"],
            [[r, lo, hi, records.n_events, p["shots"]]],
        )
    ]


@_register(
    "error-synchronization",
    "per-shot error-count fluctuations vs the independent baseline",
    "jointly firing two-qubit gate errors push error-count fluctuations "
    "above the independent binomial scale",
    {
        "n": ParamSpec("int", 6),
        "depth": ParamSpec("int", 4),
        "t": ParamSpec("float", 0.1),
        "shots": ParamSpec("int", 100000),
        "seed": ParamSpec("int", 17),
    },
)
def _run_error_synchronization(ctx: RunContext):
    p = ctx.params
    circ = qsim.cz_brickwork(p["n"], p["depth"])
    rng_gate, rng_qubit, rng_boot = ctx.rng.split(3)
    regimes = [
        ("gate", qsim.NoiseModel(t_gate=p["t"]), rng_gate),
        ("qubit", qsim.NoiseModel(t_qubit=p["t"]), rng_qubit),
    ]
    stat_rows, tail_rows = [], []
    for label, noise, src in regimes:
        _, records = qsim.run_circuit_trajectories(circ, noise, p["shots"], src)
        s = circuit_stats.error_synchronization_stats(
            records, p["n"], rng=rng_boot.split(1)[0]
        )
        stat_rows.append(
            [label, s.mean, s.std, s.binomial_std, s.ratio, s.ratio_std_err]
        )
        for theta, frac in s.tail:
            tail_rows.append([label, theta, frac])
    return [
        ctx.write_csv(
            "error-synchronization.csv",
            ["regime", "mean", "std", "binomial_std", "ratio", "ratio_std_err"],
            stat_rows,
        ),
        ctx.write_csv(
            "error-synchronization-tails.csv",
            ["regime", "threshold", "p_ge"],
            tail_rows,
        ),
    ]


@_register(
    "bitflip-code",
    "three-qubit bit-flip code vs bare qubit across noise rates",
    "syndrome-corrected repetition suppresses memory errors quadratically, "
    "but with noisy extraction neither side is guaranteed to win; the "
    "experiment reports both",
    {
        "rates": ParamSpec(
            "list[float]", [0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3]
        ),
        "shots": ParamSpec("int", 200000),
        "memory_cycles": ParamSpec("int", 1),
        "noise_scope": ParamSpec("str", "all", '"all" or "memory-data"'),
        "seed": ParamSpec("int", 19),
    },
)
def _run_bitflip_code(ctx: RunContext):
    p = ctx.params
    rows = []
    for rate, src in zip(p["rates"], ctx.rng.split(len(p["rates"]))):
        res = bitflip_code.bitflip_code_experiment(
            rate,
            rate,
            p["shots"],
            src,
            memory_cycles=p["memory_cycles"],
            noise_scope=p["noise_scope"],
        )
        rows.append(
            [
                rate,
                res.logical_error,
                res.logical_ci[0],
                res.logical_ci[1],
                res.physical_error,
                res.physical_ci[0],
                res.physical_ci[1],
            ]
        )
    return [
        ctx.write_csv(
            "bitflip-code.csv",
            [
                "rate",
                "logical",
                "logical_lo",
                "logical_hi",
                "physical",
                "physical_lo",
                "physical_hi",
            ],
            rows,
        )
    ]
