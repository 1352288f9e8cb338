"""Optional figures written next to CLI reports (``--figures DIR``).

matplotlib is imported lazily with the non-interactive Agg backend so the
numeric paths never pay for it.
"""

import os

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, directory, name):
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    return path


def spectrum_figure(spectra, labels, directory, name="spectrum.png"):
    """One row of markers per method plus a row for the labels.

    ``spectra`` maps method names to eigenvalue lists.
    """
    plt = _pyplot()
    rows = [("labels", np.asarray(labels, dtype=float))]
    rows += [(m, np.asarray(v, dtype=float)) for m, v in spectra.items()]
    fig, ax = plt.subplots(figsize=(7, 0.6 * len(rows) + 1.2))
    for y, (name_, vals) in enumerate(rows):
        marker = "x" if name_ == "labels" else "o"
        ax.scatter(vals, np.full(vals.size, y), marker=marker, s=40, facecolors="none" if marker == "o" else None,
                   edgecolors="C%d" % y if marker == "o" else None, color="C%d" % y)
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels([r[0] for r in rows])
    ax.set_xlabel("value")
    ax.set_title("labels and spectrum of H")
    ax.grid(axis="x", alpha=0.3)
    path = _save(fig, directory, name)
    plt.close(fig)
    return path


def kernel_figure(kernel, lambdas, labels, directory, name="kernel.png"):
    """Heat map of ``mu_{E_j}(lambda_i)``."""
    plt = _pyplot()
    kernel = np.asarray(kernel, dtype=float)
    fig, ax = plt.subplots(figsize=(1 + 0.6 * kernel.shape[1], 1 + 0.6 * kernel.shape[0]))
    im = ax.imshow(kernel, vmin=0.0, vmax=1.0, cmap="viridis")
    ax.set_xticks(range(kernel.shape[1]))
    ax.set_xticklabels([f"{x:.3g}" for x in labels], rotation=45)
    ax.set_yticks(range(kernel.shape[0]))
    ax.set_yticklabels([f"{x:.3g}" for x in lambdas])
    ax.set_xlabel("label E_j")
    ax.set_ylabel("lambda_i")
    for i in range(kernel.shape[0]):
        for j in range(kernel.shape[1]):
            if kernel[i, j]:
                ax.text(j, i, f"{kernel[i, j]:.3f}", ha="center", va="center", color="w", fontsize=8)
    fig.colorbar(im, ax=ax)
    path = _save(fig, directory, name)
    plt.close(fig)
    return path


def checks_figure(report, directory, name=None):
    """Bar chart of ``log10(violation / tol)`` for every check of a verification report."""
    plt = _pyplot()
    checks = report["details"]["checks"]
    ratio = np.array([max(c["violation"], 1e-300) / c["tol"] for c in checks])
    vals = np.log10(np.maximum(ratio, 1e-18))
    fig, ax = plt.subplots(figsize=(7, 0.35 * len(checks) + 1.2))
    colors = ["C2" if c["pass"] else "C3" for c in checks]
    ax.barh(range(len(checks)), vals + 18, left=-18, color=colors)
    ax.axvline(0.0, color="k", lw=1)
    ax.set_yticks(range(len(checks)))
    ax.set_yticklabels([c["name"] for c in checks])
    ax.set_xlabel("log10(violation / tolerance)")
    ax.set_title(f"verify {report['name']}")
    path = _save(fig, directory, name or f"verify_{report['name']}.png")
    plt.close(fig)
    return path
