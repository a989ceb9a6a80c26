import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_STYLE = {
    "full": dict(color="black", lw=0.7, label="numerical (full rho)"),
    "fock": dict(color="tab:green", lw=0.6, label="numerical, Fock fields"),
    "xseries": dict(color="tab:red", lw=0.6, label="X-state series"),
    "approx": dict(color="tab:blue", lw=0.6, label="large-nbar approximation"),
}


def write_overlay_svg(path, gts, columns: dict, title: str = "") -> None:
    """Static overlay of all concurrence curves; time axis in units of pi/g."""
    plt.rcParams["svg.hashsalt"] = "remotejc"
    fig, ax = plt.subplots(figsize=(9, 4))
    x = np.asarray(gts) / np.pi
    for mode, values in columns.items():
        ax.plot(x, values, **_STYLE.get(mode, dict(lw=0.6, label=mode)))
    ax.set_xlabel(r"$t$ [$\pi/g$]")
    ax.set_ylabel("concurrence")
    ax.set_xlim(x[0], x[-1] if x.size > 1 else 1.0)
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize="small")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
