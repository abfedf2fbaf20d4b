from dataclasses import dataclass, field
from typing import Any

import pandas as pd


@dataclass
class RunResult:
    """Records of one experiment plus the aggregates reported with them."""

    name: str
    records: pd.DataFrame
    aggregates: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class OverheadReport:
    mode: str
    L: int
    scalars_shared_per_symbol: int
    scalars_shared_per_coherence_interval: int
