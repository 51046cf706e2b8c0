"""Benchmark metadata: per-graph greedy weights, published results, file-name conventions."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .greedy import GreedyWeights

DATASET1 = ("Buxey", "Sawyer", "Lutz1", "Gunther", "Kilbridge", "Tonge", "Arcus1", "Lutz2", "Arcus2")
DATASET2 = ("Hahn", "Warnecke", "Wee-Mag", "Lutz3", "Mukherje", "Barthold", "Barthol2", "Scholl")

# file stems used by the public collection, plus spelled-out aliases
FILE_STEMS = {
    "Arcus1": ("ARC83", "ARCUS1"),
    "Arcus2": ("ARC111", "ARCUS2"),
    "Barthol2": ("BARTHOL2",),
    "Barthold": ("BARTHOLD",),
    "Buxey": ("BUXEY",),
    "Gunther": ("GUNTHER",),
    "Hahn": ("HAHN",),
    "Kilbridge": ("KILBRID", "KILBRIDGE"),
    "Lutz1": ("LUTZ1",),
    "Lutz2": ("LUTZ2",),
    "Lutz3": ("LUTZ3",),
    "Mukherje": ("MUKHERJE",),
    "Sawyer": ("SAWYER30", "SAWYER"),
    "Scholl": ("SCHOLL",),
    "Tonge": ("TONGE70", "TONGE"),
    "Warnecke": ("WARNECKE",),
    "Wee-Mag": ("WEE-MAG", "WEEMAG"),
}


@dataclass(frozen=True)
class ReferenceRow:
    graph: str
    n: int
    m: int
    bks: int
    optimal: bool
    best: int
    avg: float
    std: float
    time_avg: float
    time_std: float
    flag: str


def dataset_of(graph: str) -> str:
    if graph in DATASET1:
        return "Dataset1"
    if graph in DATASET2:
        return "Dataset2"
    return "other"


def _data_text(name: str) -> str:
    return resources.files("salbp_ibs").joinpath("data", name).read_text(encoding="ascii")


def parse_kappa_table(text: str) -> dict[str, GreedyWeights]:
    table = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"kappa table line {lineno}: expected 'graph kappa1 kappa2', got {line!r}")
        table[parts[0]] = GreedyWeights(float(parts[1]), float(parts[2]))
    return table


@lru_cache(maxsize=None)
def kappa_table() -> dict[str, GreedyWeights]:
    return parse_kappa_table(_data_text("kappa.txt"))


@lru_cache(maxsize=None)
def reference_results() -> tuple[ReferenceRow, ...]:
    rows = []
    for r in csv.DictReader(io.StringIO(_data_text("reference_results.csv"))):
        rows.append(ReferenceRow(
            r["graph"], int(r["n"]), int(r["m"]), int(r["bks"]), r["optimal"] == "1",
            int(r["best"]), float(r["avg"]), float(r["std"]),
            float(r["time_avg"]), float(r["time_std"]), r["flag"],
        ))
    return tuple(rows)


def graph_from_filename(path: str | Path) -> str | None:
    stem = Path(path).stem.upper()
    for graph, stems in FILE_STEMS.items():
        if stem in stems:
            return graph
    return None


def find_instance_file(data_dir: str | Path, graph: str) -> Path | None:
    """Locate a graph's instance file in ``data_dir`` (case-insensitive stem match, any suffix)."""
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        return None
    stems = FILE_STEMS.get(graph, (graph.upper(),))
    for p in sorted(data_dir.iterdir()):
        if p.is_file() and p.stem.upper() in stems:
            return p
    return None
