"""Figure rendering for experiment outputs.

Each renderer reads the CSV files an experiment wrote into its output
directory and saves one PNG next to them.  Rendering is optional sugar on
top of the canonical CSV data; nothing downstream depends on it.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

plt.rcParams.update({"figure.figsize": (6.4, 4.2), "font.size": 9, "axes.grid": True})


def _read(path: Path):
    """Parse a lab CSV: skip the metadata comment, return {column: array}."""
    with open(path) as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, body = rows[0], rows[1:]
    cols = {}
    for i, name in enumerate(header):
        vals = [r[i] for r in body]
        try:
            cols[name] = np.array([float(v) for v in vals])
        except ValueError:
            cols[name] = np.array(vals)
    return cols


def _save(fig, outdir: Path, name: str) -> Path:
    path = outdir / f"{name}.png"
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _plot_boson_ideal(outdir: Path):
    db = _read(outdir / "boson-ideal.csv")
    df = _read(outdir / "boson-ideal-fermion.csv")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.6))
    order = np.argsort(db["probability"])[::-1][:25]
    ax1.bar(range(len(order)), db["probability"][order], color="tab:purple")
    ax1.set_xlabel("outcome rank")
    ax1.set_ylabel("probability")
    ax1.set_title("boson (top outcomes)")
    order = np.argsort(df["probability"])[::-1][:25]
    ax2.bar(range(len(order)), df["probability"][order], color="tab:green")
    ax2.set_xlabel("outcome rank")
    ax2.set_title("fermion (top outcomes)")
    return [_save(fig, outdir, "boson-ideal")]


def _plot_boson_noisy_decay(outdir: Path):
    d = _read(outdir / "boson-noisy-decay.csv")
    fig, ax = plt.subplots()
    for n in sorted(set(d["n"].astype(int))):
        sel = d["n"].astype(int) == n
        ax.errorbar(
            d["t"][sel], d["corr"][sel], yerr=3 * d["std_err"][sel],
            marker="o", capsize=3, label=f"n={n}",
        )
    ax.set_xlabel("noise rate t")
    ax.set_ylabel("corr(ideal, noisy)")
    ax.legend()
    return [_save(fig, outdir, "boson-noisy-decay")]


def _plot_boson_attenuation(outdir: Path):
    d = _read(outdir / "boson-attenuation.csv")
    fig, ax = plt.subplots()
    est = np.hypot(d["est_re"], d["est_im"])
    tgt = np.hypot(d["target_re"], d["target_im"])
    for t in sorted(set(d["t"])):
        sel = d["t"] == t
        ax.errorbar(tgt[sel], est[sel], yerr=3 * d["std_err"][sel],
                    fmt="o", capsize=3, label=f"t={t:g}")
    lim = max(float(tgt.max()), float(est.max())) * 1.1 or 1.0
    ax.plot([0, lim], [0, lim], "k--", lw=0.8)
    ax.set_xlabel("|(1-t)^(n/2) Per(A_S)|")
    ax.set_ylabel("|mean Per(M_S)| (MC)")
    ax.legend()
    return [_save(fig, outdir, "boson-attenuation")]


def _plot_boson_semigroup(outdir: Path):
    d = _read(outdir / "boson-semigroup.csv")
    x = np.arange(len(d["outcome"]))
    fig, ax = plt.subplots()
    ax.errorbar(x - 0.1, d["p_two_stage"], yerr=3 * d["se_two_stage"],
                fmt="o", capsize=3, label="two-stage")
    ax.errorbar(x + 0.1, d["p_one_stage"], yerr=3 * d["se_one_stage"],
                fmt="s", capsize=3, label="one-stage")
    ax.set_xticks(x, d["outcome"], rotation=45)
    ax.set_ylabel("probability")
    ax.legend()
    return [_save(fig, outdir, "boson-semigroup")]


def _plot_bool_stability(outdir: Path):
    d = _read(outdir / "bool-stability.csv")
    fig, ax = plt.subplots()
    for fn in dict.fromkeys(d["function"]):
        sel = d["function"] == fn
        line, = ax.plot(d["rho"][sel], d["stability"][sel], "-", label=fn)
        ax.errorbar(d["rho"][sel], d["empirical"][sel], yerr=3 * d["std_err"][sel],
                    fmt="o", capsize=3, color=line.get_color())
    ax.set_xlabel("correlation rho")
    ax.set_ylabel("noise stability")
    ax.legend()
    return [_save(fig, outdir, "bool-stability")]


def _plot_bool_degree_profile(outdir: Path):
    d = _read(outdir / "bool-degree-profile.csv")
    fig, ax = plt.subplots()
    fns = list(dict.fromkeys(d["function"]))
    width = 0.8 / len(fns)
    for i, fn in enumerate(fns):
        sel = d["function"] == fn
        ax.bar(d["degree"][sel] + (i - len(fns) / 2 + 0.5) * width,
               d["mass"][sel], width=width, label=fn)
    ax.set_xlabel("degree")
    ax.set_ylabel("spectral mass")
    ax.legend()
    return [_save(fig, outdir, "bool-degree-profile")]


def _plot_repetition(outdir: Path):
    d = _read(outdir / "repetition-code-classical.csv")
    fig, ax = plt.subplots()
    for length in sorted(set(d["length"].astype(int))):
        sel = d["length"].astype(int) == length
        ax.plot(d["p"][sel], d["exact"][sel], "-o", label=f"L={length}")
    ps = np.array(sorted(set(d["p"])))
    ax.plot(ps, ps, "k--", label="bare bit")
    ax.set_yscale("log")
    ax.set_xlabel("flip probability p")
    ax.set_ylabel("decoding failure")
    ax.legend()
    return [_save(fig, outdir, "repetition-code-classical")]


def _plot_circuit_ideal_vs_noisy(outdir: Path):
    d = _read(outdir / "circuit-ideal-vs-noisy.csv")
    fig, ax = plt.subplots()
    ax.plot(d["t"], d["corr"], "-o", label="corr(ideal, noisy)")
    ax.plot(d["t"], d["tvd"], "-s", label="TVD")
    ax.set_xlabel("noise rate t")
    ax.legend()
    return [_save(fig, outdir, "circuit-ideal-vs-noisy")]


def _plot_circuit_chaos(outdir: Path):
    pairs = _read(outdir / "circuit-chaos-pairs.csv")
    summary = _read(outdir / "circuit-chaos.csv")
    fig, ax = plt.subplots()
    ax.hist(pairs["corr"], bins=24, color="tab:orange")
    mean = float(summary["cross_corr_mean"][0])
    ax.axvline(1.0, color="k", ls="--", label="self correlation")
    ax.axvline(mean, color="tab:red", label=f"pair mean {mean:.3f}")
    ax.set_xlabel("pairwise output correlation")
    ax.set_ylabel("pairs")
    ax.legend()
    return [_save(fig, outdir, "circuit-chaos")]


def _plot_circuit_fourier_profile(outdir: Path):
    d = _read(outdir / "circuit-fourier-profile.csv")
    fig, ax = plt.subplots()
    for t in sorted(set(d["t"])):
        sel = d["t"] == t
        ax.plot(d["degree"][sel], d["mass"][sel], "-o", label=f"t={t:g}")
    ax.set_xlabel("degree")
    ax.set_ylabel("normalized Walsh mass")
    ax.legend()
    return [_save(fig, outdir, "circuit-fourier-profile")]


def _plot_cat_error_correlation(outdir: Path):
    d = _read(outdir / "cat-error-correlation.csv")
    fig, ax = plt.subplots(figsize=(4, 4))
    r = float(d["pearson"][0])
    ax.bar([0], [r], yerr=[[r - d["ci_lo"][0]], [d["ci_hi"][0] - r]],
           capsize=6, width=0.4, color="tab:blue")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xticks([0], ["cat qubits (0, 1)"])
    ax.set_ylabel("error-indicator correlation")
    return [_save(fig, outdir, "cat-error-correlation")]


def _plot_error_synchronization(outdir: Path):
    tails = _read(outdir / "error-synchronization-tails.csv")
    stats = _read(outdir / "error-synchronization.csv")
    fig, ax = plt.subplots()
    for regime in dict.fromkeys(tails["regime"]):
        sel = tails["regime"] == regime
        idx = list(stats["regime"]).index(regime)
        ratio = stats["ratio"][idx]
        ax.semilogy(tails["threshold"][sel], np.maximum(tails["p_ge"][sel], 1e-7),
                    "-o", label=f"{regime} noise (std ratio {ratio:.2f})")
    ax.set_xlabel("errors per shot >= threshold")
    ax.set_ylabel("frequency")
    ax.legend()
    return [_save(fig, outdir, "error-synchronization")]


def _plot_bitflip_code(outdir: Path):
    d = _read(outdir / "bitflip-code.csv")
    fig, ax = plt.subplots()
    floor = 1e-7
    ax.errorbar(d["rate"], np.maximum(d["logical"], floor),
                yerr=[np.maximum(d["logical"] - d["logical_lo"], 0),
                      np.maximum(d["logical_hi"] - d["logical"], 0)],
                fmt="-o", capsize=3, label="encoded (3-qubit code)")
    ax.errorbar(d["rate"], np.maximum(d["physical"], floor),
                yerr=[np.maximum(d["physical"] - d["physical_lo"], 0),
                      np.maximum(d["physical_hi"] - d["physical"], 0)],
                fmt="-s", capsize=3, label="bare qubit")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("depolarizing rate")
    ax.set_ylabel("error probability")
    ax.legend()
    return [_save(fig, outdir, "bitflip-code")]


_RENDERERS = {
    "boson-ideal": _plot_boson_ideal,
    "boson-noisy-decay": _plot_boson_noisy_decay,
    "boson-attenuation": _plot_boson_attenuation,
    "boson-semigroup": _plot_boson_semigroup,
    "bool-stability": _plot_bool_stability,
    "bool-degree-profile": _plot_bool_degree_profile,
    "repetition-code-classical": _plot_repetition,
    "circuit-ideal-vs-noisy": _plot_circuit_ideal_vs_noisy,
    "circuit-chaos": _plot_circuit_chaos,
    "circuit-fourier-profile": _plot_circuit_fourier_profile,
    "cat-error-correlation": _plot_cat_error_correlation,
    "error-synchronization": _plot_error_synchronization,
    "bitflip-code": _plot_bitflip_code,
}


def render(name: str, outdir) -> list[Path]:
    """Render the figure(s) for one experiment from its CSV outputs."""
    if name not in _RENDERERS:
        return []
    return _RENDERERS[name](Path(outdir))
