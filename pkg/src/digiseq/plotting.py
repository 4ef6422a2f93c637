"""Matplotlib figures for the recipe tables, written as SVG/PNG files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed ids and no timestamp so reruns give byte-identical SVG
plt.rcParams["svg.hashsalt"] = "digiseq"
plt.rcParams["svg.fonttype"] = "none"

_META = {"svg": {"Date": None, "Creator": "digiseq"}, "png": {"Software": "digiseq"}}


def _save(fig, path):
    ext = str(path).rsplit(".", 1)[-1].lower()
    fig.savefig(path, metadata=_META.get(ext))
    plt.close(fig)
    return str(path)


def figure1_plot(rows, path):
    """N D*_N of van der Corput against the Bejian-Faure line, N = 2..32."""
    N = [r["N"] for r in rows]
    nd = [float(r["N_Dstar"]) for r in rows]
    bf = [r["bejian_faure"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(N, bf, color="red", lw=1.5, label=r"$\log N/(3\log 2)+1$")
    ax.plot(N, nd, "o", color="black", ms=4, label=r"$N D^*_N$")
    pow2 = [(n, v) for n, v in zip(N, nd) if n & (n - 1) == 0]
    ax.plot(*zip(*pow2), "s", mfc="none", color="tab:blue", ms=8, label="N a power of two")
    ax.set_xlabel("N")
    ax.set_ylabel(r"$N D^*_N$")
    ax.set_xlim(1, max(N) + 1)
    ax.set_ylim(0, max(bf) * 1.1)
    ax.legend(loc="upper left", frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def limsup_plot(N, scaled, running, constant, path, p=2.0):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.semilogx(N, scaled, lw=0.5, color="0.6", label=rf"$N L_{{{p:g},N}}/\log N$")
    ax.semilogx(N, running, lw=1.2, color="black", label="running max")
    ax.axhline(constant, color="red", ls="--", label=r"$1/(6\log 2)$")
    ax.set_xlabel("N")
    ax.set_ylim(0, min(max(running) * 1.05, 4 * constant))
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def interlaced_plot(N, scaled_il, scaled_vdc, path):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.semilogx(N, scaled_il, "o-", base=2, label="interlaced order 2")
    ax.semilogx(N, scaled_vdc, "s--", base=2, label="van der Corput")
    ax.set_xlabel("N")
    ax.set_ylabel(r"$N L_{2,N}/(\log N)^{s/2}$")
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def quantile_plot(N, quantiles, labels, path, ylabel):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for q, lab in zip(quantiles, labels):
        ax.semilogx(N, q, "o-", base=2, ms=3, label=lab)
    ax.set_xlabel("N")
    ax.set_ylabel(ylabel)
    ax.legend(frameon=False, fontsize="small")
    fig.tight_layout()
    return _save(fig, path)
