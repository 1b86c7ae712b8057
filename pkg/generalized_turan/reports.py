"""The JSON report every command emits."""

import time
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from generalized_turan.__version__ import __version__

SCHEMA_VERSION = 1


class Provenance(BaseModel):
    version: str = Field(default=__version__, description="Version of the toolkit that produced the report")
    cache_hits: int = 0
    cache_misses: int = 0
    seed: int | None = None


class ResultRecord(BaseModel):
    name: str
    data: dict[str, Any] = Field(default_factory=dict)


class SuiteItem(BaseModel):
    """One acceptance item: observed against expected, with hard or soft weight."""

    name: str
    passed: bool
    hard: bool = True
    observed: Any = None
    expected: Any = None
    note: str = ""


class Report(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    command: str
    params: dict[str, Any] = Field(default_factory=dict)
    results: list[ResultRecord] = Field(default_factory=list)
    provenance: Provenance = Field(default_factory=Provenance)
    timing: dict[str, float] = Field(default_factory=dict, description="Wall seconds per step")

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)

    def hard_failures(self) -> list[ResultRecord]:
        return [r for r in self.results if r.data.get("hard", False) and not r.data.get("passed", True)]


class ReportBuilder:
    """Accumulates records and step timings for one command run."""

    def __init__(self, command: str, params: dict[str, Any] | None = None, seed: int | None = None):
        self.report = Report(command=command, params=params or {}, provenance=Provenance(seed=seed))

    @contextmanager
    def step(self, name: str) -> Iterator[None]:
        started = time.perf_counter()
        try:
            yield
        finally:
            self.report.timing[name] = round(time.perf_counter() - started, 6)

    def add(self, name: str, data: BaseModel | dict[str, Any]) -> None:
        if isinstance(data, BaseModel):
            data = data.model_dump(mode="json", by_alias=True)
        self.report.results.append(ResultRecord(name=name, data=data))

    def add_item(self, item: SuiteItem) -> None:
        self.add(item.name, item)

    def record_cache(self, hits: int, misses: int) -> None:
        self.report.provenance.cache_hits += hits
        self.report.provenance.cache_misses += misses

    def build(self) -> Report:
        return self.report
