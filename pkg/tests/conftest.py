from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from dashmine.geometry import build_graphs
from dashmine.model import (
    ActionRecord,
    Block,
    BlockType,
    ChartProps,
    Dashboard,
    DashboardGraphs,
    FilterProps,
    LegendProps,
    MultimediaProps,
    TextProps,
    dashboard_from_dict,
    infer_vis_type,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name: str) -> Dashboard:
    return dashboard_from_dict(json.loads((FIXTURES / f"{name}.json").read_text()))


@pytest.fixture(scope="session")
def fig_a() -> Dashboard:
    return load_fixture("fig_a")


@pytest.fixture(scope="session")
def fig_b() -> Dashboard:
    return load_fixture("fig_b")


@pytest.fixture(scope="session")
def fig_c() -> Dashboard:
    return load_fixture("fig_c")


@pytest.fixture(scope="session")
def fig_graphs(fig_a, fig_b, fig_c) -> dict[str, DashboardGraphs]:
    return {d.id: build_graphs(d) for d in (fig_a, fig_b, fig_c)}


# --- synthetic dashboards -----------------------------------------------------

_MARK_POOL = (["bar"], ["line"], ["pie"], ["area"], ["circle"], ["polygon"], ["square"])


def make_block(block_id: str, block_type: BlockType, x: int, y: int, w: int, h: int, rng=None) -> Block:
    if block_type is BlockType.CHART:
        marks = list(_MARK_POOL[int(rng.integers(len(_MARK_POOL)))]) if rng is not None else ["bar"]
        encodings = (("column", "f1"), ("row", "f2"))
        props = ChartProps(
            vis_type=infer_vis_type(marks, encodings), marks=tuple(marks), encodings=encodings
        )
    elif block_type is BlockType.TEXT:
        props = TextProps(content="t")
    elif block_type is BlockType.FILTER:
        props = FilterProps(field="f")
    elif block_type is BlockType.LEGEND:
        props = LegendProps()
    else:
        props = MultimediaProps()
    return Block(id=block_id, block_type=block_type, x=x, y=y, w=w, h=h, props=props)


def random_dashboard(rng: np.random.Generator, dash_id: str = "synth") -> Dashboard:
    """A random dashboard with mixed block types and noisy action records
    (duplicates, self-loops and unsupported endpoint pairs included)."""
    n = int(rng.integers(1, 13))
    types = list(BlockType)
    blocks = []
    for i in range(n):
        block_type = types[int(rng.integers(len(types)))]
        blocks.append(
            make_block(
                f"b{i}",
                block_type,
                x=int(rng.integers(0, 300)),
                y=int(rng.integers(0, 300)),
                w=int(rng.integers(1, 150)),
                h=int(rng.integers(1, 150)),
                rng=rng,
            )
        )
    ids = [b.id for b in blocks]
    actions = []
    for _ in range(int(rng.integers(0, 3 * n))):
        source = ids[int(rng.integers(n))]
        target = ids[int(rng.integers(n))]
        itype = "filter" if rng.random() < 0.7 else "highlight"
        actions.append(ActionRecord(source=source, target=target, action_type=itype))
    return Dashboard(id=dash_id, blocks=tuple(blocks), declared_interactions=tuple(actions))


def blob_matrix(
    seed: int,
    centers,
    per_blob: int = 100,
    std: float = 1.0,
    background: int = 0,
    background_box: tuple[float, float] = (-150.0, 210.0),
):
    """Gaussian blobs (plus optional uniform background) with ground truth.

    Returns (matrix, truth) where truth holds the blob index per row and
    -1 for background rows.
    """
    rng = np.random.default_rng(seed)
    centers = np.asarray(centers, dtype=float)
    parts = [rng.normal(c, std, size=(per_blob, centers.shape[1])) for c in centers]
    truth = np.repeat(np.arange(len(centers)), per_blob)
    if background:
        lo, hi = background_box
        parts.append(rng.uniform(lo, hi, size=(background, centers.shape[1])))
        truth = np.concatenate([truth, np.full(background, -1)])
    return np.vstack(parts), truth


def canonical_partition(labels) -> list[int]:
    """Relabel clusters by first appearance so partitions compare up to
    label permutation; noise (-1) is preserved."""
    mapping: dict[int, int] = {}
    out = []
    for label in labels:
        label = int(label)
        if label == -1:
            out.append(-1)
            continue
        if label not in mapping:
            mapping[label] = len(mapping)
        out.append(mapping[label])
    return out
