"""Figures written next to the CLI's delimited output.

matplotlib is imported lazily so the data paths never depend on it.
"""

import math


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _finish(fig, path):
    fig.tight_layout()
    # fixed metadata keeps repeated renders byte-stable for PNG output
    fig.savefig(path, dpi=120, metadata={"Software": None} if str(path).endswith(".png") else None)


def plot_loxodrome(path, curve, projected=None):
    """Curve in its own chart, plus its projected image when given."""
    plt = _pyplot()
    ncols = 2 if projected is not None else 1
    fig, axes = plt.subplots(1, ncols, figsize=(4.5 * ncols, 4.0), squeeze=False)
    names = curve.chart.coordinate_names
    ax = axes[0, 0]
    ax.plot(curve.points[:, 0], curve.points[:, 1], lw=1.5)
    ax.set_xlabel(names[0])
    ax.set_ylabel(names[1])
    ax.set_title(f"{curve.chart.value} ({curve.generator})", fontsize=10)
    if projected is not None:
        pnames = projected.chart.coordinate_names
        ax = axes[0, 1]
        ax.plot(projected.points[:, 0], projected.points[:, 1], lw=1.5, color="C1")
        ax.set_xlabel(pnames[0])
        ax.set_ylabel(pnames[1])
        ax.set_title(f"{projected.chart.value} image", fontsize=10)
        ax.set_aspect("equal", adjustable="datalim")
    _finish(fig, path)
    plt.close(fig)


def plot_gauss_path(path, gauss_path):
    """Normal family along a loxodrome: (mu, sigma) track and the flattened line."""
    plt = _pyplot()
    fig, (left, right) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    mu = [p.mu for p in gauss_path.params]
    sigma = [p.sigma for p in gauss_path.params]
    left.plot(mu, sigma, marker=".", ms=3, lw=1)
    left.set_xlabel("mu")
    left.set_ylabel("sigma")
    left.set_title("Gaussians along the path", fontsize=10)
    xf = [p.a for p in gauss_path.flattened]
    yf = [p.b for p in gauss_path.flattened]
    right.plot(xf, yf, color="C1", lw=1.5)
    right.axhline(math.sqrt(2.0), color="0.6", lw=0.8, ls="--")
    right.set_xlabel("x~ = mu~")
    right.set_ylabel("y~ = sqrt(2) sigma~")
    right.set_title("flattened plane", fontsize=10)
    _finish(fig, path)
    plt.close(fig)
