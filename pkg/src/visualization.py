# src/visualization.py

import os
from typing import Dict, List, Sequence

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import seaborn as sns
import logging

from .reports import InequalityReport

class ReportVisualizer:
    """Static PNG figures for harness reports"""

    def __init__(self):
        sns.set_style("darkgrid")
        self.colors = {
            'pass': '#2ca02c',     # Green
            'fail': '#d62728',     # Red
            'flagged': '#7f7f7f',  # Grey
            'series': '#1f77b4',   # Blue
            'bound': '#ff7f0e'     # Orange
        }

        plt.rcParams.update({
            'figure.figsize': (10, 6),
            'axes.titlesize': 14,
            'axes.labelsize': 12,
            'xtick.labelsize': 10,
            'ytick.labelsize': 10,
            'legend.fontsize': 11,
            'lines.linewidth': 2
        })

    def plot_ratios(self, report: InequalityReport, filename: str) -> bool:
        """Bar chart of lhs/rhs per test function with the declared bound"""
        try:
            fig, ax = plt.subplots()
            labels = [row.function_id for row in report.rows]
            ratios = [0.0 if row.flagged or not np.isfinite(row.ratio) else row.ratio for row in report.rows]
            colors = [self.colors['flagged'] if row.flagged
                      else self.colors['pass'] if row.ratio <= report.bound else self.colors['fail']
                      for row in report.rows]
            ax.bar(range(len(labels)), ratios, color=colors)
            ax.set_xticks(range(len(labels)))
            ax.set_xticklabels(labels, rotation=45, ha='right')
            if np.isfinite(report.bound):
                ax.axhline(report.bound, color=self.colors['bound'], linestyle='--', label='bound')
                ax.legend(loc='upper right')
            ax.set_ylabel('lhs / rhs')
            ax.set_title(f"{report.suite_id or report.inequality_id}", fontweight='bold')
            return self._save(fig, filename)
        except Exception as e:
            logging.error(f"Ratio plot failed: {str(e)}")
            plt.close('all')
            return False

    def plot_series(self, x: Sequence[float], y: Sequence[float], filename: str,
                    x_name: str = "xi", y_name: str = "value", title: str = "",
                    log_x: bool = False, log_y: bool = True) -> bool:
        """Line plot of a plot-data series such as |F f|(xi) or a weak-type profile"""
        try:
            fig, ax = plt.subplots()
            y = np.asarray(y, dtype=float)
            ax.plot(x, np.where(y > 0, y, np.nan) if log_y else y, color=self.colors['series'])
            if log_x:
                ax.set_xscale('log')
            if log_y:
                ax.set_yscale('log')
            ax.set_xlabel(x_name)
            ax.set_ylabel(y_name)
            ax.set_title(title, fontweight='bold')
            return self._save(fig, filename)
        except Exception as e:
            logging.error(f"Series plot failed: {str(e)}")
            plt.close('all')
            return False

    def plot_contraction(self, study: Dict, filename: str) -> bool:
        """Sup error of the contracted kernel against eps on log-log axes"""
        return self.plot_series(study["eps"], study["errors"], filename, "eps", "sup error",
                                f"contraction at xi={study['xi']:g}, rate {study['rate']:.2f}",
                                log_x=True, log_y=True)

    def plot_report(self, report: InequalityReport, directory: str) -> List[str]:
        """Ratio chart plus one figure per plot series; returns the written paths"""
        os.makedirs(directory, exist_ok=True)
        name = report.suite_id or report.inequality_id
        written = []
        path = os.path.join(directory, f"{name}_ratios.png")
        if report.rows and self.plot_ratios(report, path):
            written.append(path)
        for series, data in report.plots.items():
            path = os.path.join(directory, f"{name}_{series}.png")
            if self.plot_series(data["x"], data["y"], path, data["x_name"], data["y_name"],
                                f"{name}: {series}", log_x=data["x_name"] in ("t", "eps")):
                written.append(path)
        return written

    def _save(self, fig, filename: str) -> bool:
        fig.tight_layout()
        fig.savefig(filename, dpi=100)
        plt.close(fig)
        logging.info(f"Figure written to {filename}")
        return True
