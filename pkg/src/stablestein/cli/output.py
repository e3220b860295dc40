#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
CSV and plot-script output of the command-line experiments
"""

import os

__all__ = [
    "write_csv",
    "write_plot_script",
]

_PLOT_TEMPLATE = '''#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
{title}

Generated alongside {csv_name}; needs pandas and matplotlib.
"""

import os

import matplotlib.pyplot as plt
import pandas as pd

here = os.path.dirname(os.path.abspath(__file__))
df = pd.read_csv(os.path.join(here, "{csv_name}"), comment="#")

fig, ax = plt.subplots(figsize=(7, 4.5))
for column in {columns!r}:
    ax.plot(df["{x}"], df[column], marker="{marker}", label=column)
ax.set_xscale("{xscale}")
ax.set_yscale("{yscale}")
ax.set_xlabel("{x}")
ax.legend()
ax.set_title("{title}")
fig.tight_layout()
fig.savefig(os.path.join(here, "{png_name}"), dpi=300)
'''


def _write_atomic(path, text, overwrite):
    """Write text to path via a temporary file and os.replace"""
    if os.path.isfile(path):
        if overwrite:
            print("Overwriting existing file")
        else:
            print("File exists and will not be overwritten. Moving to next file")
            return False
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)
    print("File saved to " + str(path))
    return True


def write_csv(df, path, config=None, overwrite=False):
    """Write a DataFrame with the resolved configuration as a '#' header

    Floats are written with 17 significant digits, so reruns with the same
    configuration and seed are byte-identical.

    Parameters
    ----------
    df : pandas.DataFrame
        Table
    path : str
        Output file
    config : ExperimentConfig, optional
        Configuration embedded in the header
    overwrite : bool
        Flag to overwrite an existing file

    Returns
    -------
    bool
        True when the file was written
    """
    header = [] if config is None else config.header_lines()
    body = df.to_csv(index=False, float_format="%.17g", lineterminator="\n")
    text = "".join(line + "\n" for line in header) + body
    return _write_atomic(path, text, overwrite)


def write_plot_script(csv_path, x, columns, title, logx=False, logy=False, overwrite=False):
    """Write plot_<name>.py next to csv_path, plotting columns against x"""
    folder, csv_name = os.path.split(csv_path)
    stem = os.path.splitext(csv_name)[0]
    script = _PLOT_TEMPLATE.format(title=title, csv_name=csv_name, columns=list(columns), x=x,
                                   marker="o" if logx else "", png_name=f"{stem}.png",
                                   xscale="log" if logx else "linear",
                                   yscale="log" if logy else "linear")
    path = os.path.join(folder, f"plot_{stem}.py")
    _write_atomic(path, script, overwrite)
    return path
