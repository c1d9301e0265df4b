"""Class-overlap complexity from pure-ball covers (ONB_avg).

Every instance owns a ball whose radius is the Euclidean distance to its
nearest instance of the other class, so the ball holds only its own class.
Each class is covered greedily by such balls, and the score averages, over
the classes, the ratio of balls used to class size. Values range over
(0, 1]; higher means more overlap.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mgru._backend import kernels
from mgru.dataset import Dataset


@dataclass(frozen=True, eq=False)
class ClassCover:
    class_id: int
    label: str
    balls: int
    size: int
    centers: np.ndarray  # row indices into the dataset, in selection order

    @property
    def ratio(self) -> float:
        return self.balls / self.size


@dataclass(frozen=True, eq=False)
class BallCoverResult:
    per_class: tuple[ClassCover, ...]
    onb_avg: float

    def to_record(self) -> dict:
        return {
            "onb_avg": self.onb_avg,
            "per_class": [
                {"class": c.label, "balls": c.balls, "size": c.size}
                for c in self.per_class
            ],
        }


def pure_radius(ds: Dataset, i: int) -> float:
    """Distance from instance ``i`` to its nearest opposite-class instance."""
    enemies = ds.features[ds.y != ds.y[i]]
    return float(np.sqrt(kernels.min_sq_dist(ds.features[i : i + 1], enemies)[0]))


def class_cover(ds: Dataset, class_id: int) -> ClassCover:
    rows = np.flatnonzero(ds.y == class_id)
    Xc = ds.features[rows]
    enemy_sq = kernels.min_sq_dist(Xc, ds.features[ds.y != class_id])
    cover = kernels.ball_cover(Xc, enemy_sq)
    # ties on coverage: smaller radius, then smaller row index
    priority = np.lexsort((np.arange(rows.size), enemy_sq))
    centers = kernels.greedy_cover(cover, priority)
    return ClassCover(
        class_id=class_id,
        label=ds.class_names[class_id],
        balls=int(centers.size),
        size=int(rows.size),
        centers=rows[centers],
    )


def onb_avg(ds: Dataset) -> BallCoverResult:
    covers = tuple(class_cover(ds, c) for c in (0, 1))
    score = sum(c.ratio for c in covers) / len(covers)
    return BallCoverResult(covers, float(score))
