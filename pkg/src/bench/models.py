from typing import Literal

from pydantic import BaseModel, Field

Aggregate = Literal["sum", "max", "mean"]


class Microbenchmark(BaseModel):
    key: str = Field(..., min_length=1, description="Commit hash (rolling mode) or file path (split mode)")
    seconds: float = Field(..., gt=0, description="Functional-test execution time")
    source: Literal["surefire-xml", "csv"] = Field("csv", description="Where the time was read from")


class SuiteTime(BaseModel):
    report: str = Field(..., description="Report file name")
    name: str = Field(..., description="Test-suite name")
    seconds: float = Field(..., ge=0)
    tests: int = Field(0, ge=0)


class SurefireTotals(BaseModel):
    total_seconds: float = Field(..., ge=0, description="Aggregated suite time")
    aggregate: Aggregate = "sum"
    suites: list[SuiteTime] = Field(default_factory=list, description="Per-suite breakdown, report order")
