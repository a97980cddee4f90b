"""
CSV ingestion and binarization.

Numeric columns stay numeric until the learner picks thresholds; non-numeric columns are
expanded into one indicator column per category. A Boolean feature is always one
Predicate over one source column.
"""
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from modules.pipeline.download import fetch_text, is_url
from modules.reasoning.errors import IngestionError

logger = logging.getLogger(__name__)

# header is line 1 of the file
FIRST_DATA_LINE = 2


@dataclass(frozen=True)
class Predicate:
    """x = 1 iff value > threshold (numeric) or value == category (categorical)"""

    column: str
    threshold: Optional[float] = None
    category: Optional[str] = None

    def __post_init__(self):
        if (self.threshold is None) == (self.category is None):
            raise IngestionError("a predicate needs exactly one of threshold and category", column=self.column)

    def evaluate(self, values: pd.Series) -> np.ndarray:
        if self.category is not None:
            return (values.astype(str) == self.category).to_numpy(dtype=np.int8)
        numeric = pd.to_numeric(values, errors="coerce")
        if numeric.isna().any():
            row = int(np.flatnonzero(numeric.isna().to_numpy())[0]) + FIRST_DATA_LINE
            raise IngestionError("value is not numeric", row=row, column=self.column)
        return (numeric.to_numpy(dtype=np.float64) > self.threshold).astype(np.int8)

    def to_dict(self) -> dict:
        if self.category is not None:
            return {"column": self.column, "category": self.category}
        return {"column": self.column, "threshold": self.threshold}

    @classmethod
    def from_dict(cls, data: dict) -> "Predicate":
        if "category" in data:
            return cls(str(data["column"]), category=str(data["category"]))
        return cls(str(data["column"]), threshold=float(data["threshold"]))

    def __str__(self) -> str:
        if self.category is not None:
            return f"{self.column} == {self.category}"
        return f"{self.column} > {self.threshold:g}"


class FeatureMap:
    """Boolean variables of one tree, in registration order"""

    def __init__(self, predicates: Sequence[Predicate] = ()):
        self._predicates: List[Predicate] = []
        self._index: Dict[Predicate, int] = {}
        for predicate in predicates:
            self.register(predicate)

    def register(self, predicate: Predicate) -> int:
        if predicate not in self._index:
            self._index[predicate] = len(self._predicates)
            self._predicates.append(predicate)
        return self._index[predicate]

    def __len__(self) -> int:
        return len(self._predicates)

    def __getitem__(self, variable: int) -> Predicate:
        return self._predicates[variable]

    @property
    def predicates(self) -> Tuple[Predicate, ...]:
        return tuple(self._predicates)

    def to_dicts(self) -> Tuple[dict, ...]:
        return tuple(p.to_dict() for p in self._predicates)

    @classmethod
    def from_dicts(cls, data: Sequence[dict]) -> "FeatureMap":
        return cls([Predicate.from_dict(d) for d in data])


@dataclass(frozen=True)
class Column:
    """A split candidate: a numeric source column or one category indicator"""

    name: str
    category: Optional[str] = None

    def predicate(self, threshold: float) -> Predicate:
        if self.category is not None:
            return Predicate(self.name, category=self.category)
        return Predicate(self.name, threshold=float(threshold))


@dataclass
class BinarizedDataset:
    frame: pd.DataFrame
    columns: List[Column]
    values: np.ndarray
    labels: np.ndarray
    label_column: str
    target_class: Optional[str] = None
    source: str = ""
    categories: Dict[str, List[str]] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    def subset(self, rows: np.ndarray) -> "BinarizedDataset":
        rows = np.asarray(rows)
        return BinarizedDataset(
            self.frame.iloc[rows].reset_index(drop=True),
            self.columns,
            self.values[rows],
            self.labels[rows],
            self.label_column,
            self.target_class,
            self.source,
            self.categories,
        )

    def binarize(self, predicates: Sequence[Predicate]) -> np.ndarray:
        return binarize_frame(self.frame, predicates)


def binarize_frame(frame: pd.DataFrame, predicates: Sequence[Predicate]) -> np.ndarray:
    """Boolean matrix of the predicates over the raw rows, one column per predicate"""
    matrix = np.zeros((len(frame), len(predicates)), dtype=np.int8)
    for j, predicate in enumerate(predicates):
        if predicate.column not in frame.columns:
            raise IngestionError("column required by the tree is missing", column=predicate.column)
        matrix[:, j] = predicate.evaluate(frame[predicate.column])
    return matrix


def read_frame(path: Union[str, Path]) -> Tuple[pd.DataFrame, str]:
    source = str(path)
    try:
        if is_url(source):
            text = fetch_text(source)
            frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False, skipinitialspace=True)
        else:
            frame = pd.read_csv(source, dtype=str, keep_default_na=False, skipinitialspace=True)
    except FileNotFoundError:
        raise IngestionError(f"dataset {source} does not exist") from None
    except pd.errors.EmptyDataError:
        raise IngestionError(f"dataset {source} is empty") from None
    except pd.errors.ParserError as e:
        raise IngestionError(f"dataset {source} is not a well-formed CSV: {e}") from None
    except (OSError, UnicodeDecodeError) as e:
        raise IngestionError(f"cannot read dataset {source}: {e}") from None
    frame.columns = [str(c).strip() for c in frame.columns]
    return frame, source


def _check_missing(frame: pd.DataFrame):
    for column in frame.columns:
        blank = frame[column].str.strip() == ""
        if blank.any():
            row = int(np.flatnonzero(blank.to_numpy())[0]) + FIRST_DATA_LINE
            raise IngestionError("missing value", row=row, column=column)


def _labels(raw: pd.Series, label_column: str, target_class) -> np.ndarray:
    raw = raw.str.strip()
    if target_class is not None:
        target = str(target_class)
        if not (raw == target).any():
            raise IngestionError(f"target class '{target}' never occurs", column=label_column)
        return (raw == target).to_numpy(dtype=np.int8)
    classes = sorted(raw.unique())
    if not set(classes) <= {"0", "1"}:
        raise IngestionError(
            f"labels {classes[:5]} are not binary 0/1; pass a target class for one-vs-all",
            column=label_column,
        )
    return (raw == "1").to_numpy(dtype=np.int8)


def ingest_csv(path: Union[str, Path], label_column: str, target_class=None) -> BinarizedDataset:
    frame, source = read_frame(path)
    if label_column not in frame.columns:
        raise IngestionError("label column not found in header", column=label_column)
    if frame.empty:
        raise IngestionError(f"dataset {source} has no rows")
    _check_missing(frame)

    labels = _labels(frame[label_column], label_column, target_class)
    features = frame.drop(columns=[label_column])

    columns: List[Column] = []
    blocks: List[np.ndarray] = []
    categories: Dict[str, List[str]] = {}
    for name in features.columns:
        raw = features[name].str.strip()
        numeric = pd.to_numeric(raw, errors="coerce")
        bad = numeric.isna().to_numpy()
        if not bad.any():
            columns.append(Column(name))
            blocks.append(numeric.to_numpy(dtype=np.float64)[:, None])
        elif bad.all():
            values = sorted(raw.unique())
            categories[name] = values
            for category in values:
                columns.append(Column(name, category))
                blocks.append((raw == category).to_numpy(dtype=np.float64)[:, None])
        else:
            row = int(np.flatnonzero(bad)[0]) + FIRST_DATA_LINE
            raise IngestionError(f"unparsable cell '{raw.iloc[row - FIRST_DATA_LINE]}' in a numeric column", row=row, column=name)

    values = np.hstack(blocks) if blocks else np.zeros((len(frame), 0))
    features = features.apply(lambda s: s.str.strip())
    logger.info(
        f"Ingested {source}: {len(frame)} rows, {len(features.columns)} columns "
        f"({len(categories)} categorical), {int(labels.sum())} positive"
    )
    return BinarizedDataset(
        features.reset_index(drop=True),
        columns,
        values,
        labels,
        label_column,
        None if target_class is None else str(target_class),
        source,
        categories,
    )
