"""Human-readable run summary: areas per level, system make-up, and the test metric table."""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

import pandas as pd

from connectome import DataError
from trunks import TrunkHierarchy, read_hierarchy

from .ablation import ABLATION_JSON, AblationDocument, read_ablation
from .config import VARIANTS
from .stages import COMPOSITION, EVAL, HIERARCHY


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

REPORT_TXT = "report.txt"
REPORT_PNG = "report.png"
NO_RUNS = "No runs recorded; the metric table is empty."

VARIANT_LABELS = {"hemon": "HEmoN", "ea1": "HEmoN-EA1", "dft": "HEmoN-DFT", "fnn": "FNN"}


def area_lines(h: TrunkHierarchy) -> List[str]:
    lines = [f"Hierarchy: {h.level_count} levels over {h.node_count} nodes"]
    for level, (trunks, area) in enumerate(zip(h.levels, h.areas), start=1):
        lengths = ", ".join(str(t.path.length) for t in trunks)
        lines.append(f"L{level} {len(area)} nodes in {len(trunks)} trunk(s) of length {lengths}")
    return lines


def composition_lines(path: Path) -> List[str]:
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise DataError(f"{path}: {exc}") from exc
    if list(frame.columns) != ["level", "system", "count"]:
        raise DataError(f"{path} must have columns level,system,count; got {','.join(map(str, frame.columns))}")
    lines = ["System composition:"]
    for level, group in frame.sort_values(["level", "system"]).groupby("level", sort=True):
        parts = ", ".join(f"{system}={int(count)}" for system, count in zip(group["system"], group["count"]))
        lines.append(f"L{int(level)} {parts}")
    return lines


def metric_lines(ablation: Optional[AblationDocument], single: Optional[dict]) -> List[str]:
    if ablation is not None and ablation.variants:
        lines = [f"Test {ablation.metric} over {len(ablation.variants[0].seeds)} seed(s) (mean, std, 95% CI):"]
        for variant in VARIANTS:
            entry = ablation.summary(variant)
            if entry is None:
                continue
            lines.append(
                f"{VARIANT_LABELS[variant]:<10} {entry.mean:10.4f} {entry.std:10.4f}  +/-{entry.ci95:.4f}"
            )
        for pair, count in sorted(ablation.wins.items()):
            lines.append(f"{pair}: {count}/{len(ablation.variants[0].seeds)} seeds")
        return lines
    if single is not None:
        label = VARIANT_LABELS.get(single.get("variant", ""), single.get("variant", "?"))
        metrics = ", ".join(f"{k}={v:.4f}" for k, v in sorted(single["metrics"].items()))
        return [f"Test metrics for {label} (seed {single.get('seed')}, {single.get('n_test')} stimuli): {metrics}"]
    return [NO_RUNS]


def plot_ablation(ablation: AblationDocument, path: Path) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    entries = [e for v in VARIANTS for e in [ablation.summary(v)] if e is not None]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar(
        [VARIANT_LABELS[e.variant] for e in entries],
        [e.mean for e in entries],
        yerr=[e.ci95 for e in entries],
        capsize=4,
        color="#4c72b0",
    )
    ax.set_ylabel(f"test {ablation.metric}")
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def build_report(artifacts: PathLike, plot: bool = False) -> Tuple[str, List[Path]]:
    """Summarize the artifacts in ``artifacts``; writes ``report.txt`` and optionally ``report.png``."""
    root = Path(artifacts)
    hierarchy = read_hierarchy(root / HIERARCHY)
    sections = [area_lines(hierarchy)]
    if (root / COMPOSITION).exists():
        sections.append(composition_lines(root / COMPOSITION))

    ablation = read_ablation(root / ABLATION_JSON) if (root / ABLATION_JSON).exists() else None
    single = None
    if (root / EVAL).exists():
        try:
            single = json.loads((root / EVAL).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DataError(f"{root / EVAL}:{exc.lineno}: {exc.msg}") from exc
        if not isinstance(single, dict) or "metrics" not in single:
            raise DataError(f"{root / EVAL} is missing the metrics table")
    sections.append(metric_lines(ablation, single))

    text = "\n\n".join("\n".join(section) for section in sections) + "\n"
    written = [root / REPORT_TXT]
    written[0].write_text(text, encoding="utf-8")
    if plot:
        if ablation is None or not ablation.variants:
            logger.warning("No ablation results under %s; skipping the plot", root)
        else:
            written.append(plot_ablation(ablation, root / REPORT_PNG))
    return text, written
