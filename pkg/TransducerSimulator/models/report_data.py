"""
Derived-parameter report rows.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import pandas as pd

REPORT_COLUMNS = ("quantity", "unit", "computed", "table_value", "relative_deviation", "note")


@dataclass(frozen=True)
class ReportRow:
    """One derived quantity next to its tabulated value, if the table has one."""
    quantity: str
    unit: str
    computed: float
    table_value: Optional[float] = None
    note: Optional[str] = None

    @property
    def relative_deviation(self) -> Optional[float]:
        if self.table_value is None or self.table_value == 0.0:
            return None
        return (self.computed - self.table_value) / self.table_value

    def to_dict(self) -> dict:
        row = {
            "quantity": self.quantity,
            "unit": self.unit,
            "computed": self.computed,
            "table_value": self.table_value,
            "relative_deviation": self.relative_deviation,
            "note": self.note,
        }
        return {k: v for k, v in row.items() if v is not None}


@dataclass
class Report:
    title: str
    rows: List[ReportRow] = field(default_factory=list)

    def add(self, quantity: str, unit: str, computed: float, table_value: Optional[float] = None,
            note: Optional[str] = None) -> None:
        self.rows.append(ReportRow(quantity, unit, float(computed), table_value, note))

    def row(self, quantity: str) -> ReportRow:
        for row in self.rows:
            if row.quantity == quantity:
                return row
        raise KeyError(quantity)

    def values(self) -> Dict[str, float]:
        return {row.quantity: row.computed for row in self.rows}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([{column: getattr(row, column) for column in REPORT_COLUMNS} for row in self.rows],
                            columns=list(REPORT_COLUMNS))
