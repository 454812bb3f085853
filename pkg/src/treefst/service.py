"""HTTP service wrapping the compiler.

Forests are uploaded as text (tree file plus symbol and class files,
with the tree file referencing them as "symbols.txt" and "classes.txt")
and kept in memory under a content-hash id, so repeated uploads of the
same forest share one compiled machine.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import fsa, rulecompile, treemodel
from .errors import TreefstError


class ForestUpload(BaseModel):
    trees: str = Field(description="Tree file text")
    symbols: str = Field(description="Symbol file text, served as symbols.txt")
    classes: str = Field(default="", description="Class file text, served as classes.txt")


class ForestInfo(BaseModel):
    forest_id: str
    phones: list[str]
    num_symbols: int
    num_pairs: int


class ApplyRequest(BaseModel):
    input: str = Field(description="Space-separated input symbols")
    n: int = Field(default=1, ge=1, le=100)


class ApplyResult(BaseModel):
    output: str
    weight: float


class ApplyResponse(BaseModel):
    results: list[ApplyResult]


class InterpretPosition(BaseModel):
    symbol: str
    outputs: dict[str, float]


class InterpretResponse(BaseModel):
    positions: list[InterpretPosition]


class ValidateResponse(BaseModel):
    ok: bool
    issues: list[str]


class TreeStats(BaseModel):
    phone: str
    leaves: int
    states: int
    arcs: int
    seconds: float


class StatsResponse(BaseModel):
    trees: list[TreeStats]
    forest_states: int
    forest_arcs: int


@dataclass
class _Entry:
    forest: treemodel.Forest
    report: rulecompile.CompiledForest | None = None
    files: dict[str, str] = field(default_factory=dict)

    def compiled(self) -> rulecompile.CompiledForest:
        if self.report is None:
            self.report = rulecompile.compile_report(self.forest)
        return self.report


def create_app() -> FastAPI:
    app = FastAPI(title="treefst", description=__doc__)
    store: dict[str, _Entry] = {}

    def entry(forest_id: str) -> _Entry:
        e = store.get(forest_id)
        if e is None:
            raise HTTPException(status_code=404, detail=f"unknown forest id {forest_id!r}")
        return e

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/forests", response_model=ForestInfo)
    def upload(req: ForestUpload) -> ForestInfo:
        files = {"symbols.txt": req.symbols, "classes.txt": req.classes}
        digest = hashlib.sha256(
            (req.trees + "\0" + req.symbols + "\0" + req.classes).encode()).hexdigest()[:12]
        if digest not in store:
            try:
                forest = treemodel.parse_tree_file(req.trees, loader=files.__getitem__)
            except (TreefstError, KeyError) as e:
                raise HTTPException(status_code=400, detail=str(e))
            store[digest] = _Entry(forest, files=files)
        forest = store[digest].forest
        return ForestInfo(
            forest_id=digest,
            phones=sorted(forest.tree_for),
            num_symbols=len(forest.table),
            num_pairs=len(forest.alphabet),
        )

    @app.post("/forests/{forest_id}/apply", response_model=ApplyResponse)
    def apply(forest_id: str, req: ApplyRequest) -> ApplyResponse:
        e = entry(forest_id)
        table = e.forest.table
        try:
            machine = e.compiled().forest
            restricted = fsa.apply_to_string(machine, req.input.split())
            best = fsa.shortest_path(restricted, req.n)
        except TreefstError as err:
            raise HTTPException(status_code=400, detail=str(err))
        return ApplyResponse(results=[
            ApplyResult(output=" ".join(table.name(p.out) for p in pairs[1:-1]),
                        weight=weight)
            for pairs, weight in best
        ])

    @app.post("/forests/{forest_id}/interpret", response_model=InterpretResponse)
    def interpret(forest_id: str, req: ApplyRequest) -> InterpretResponse:
        e = entry(forest_id)
        word = req.input.split()
        try:
            dists = treemodel.interpret_forest(e.forest, word)
        except TreefstError as err:
            raise HTTPException(status_code=400, detail=str(err))
        return InterpretResponse(positions=[
            InterpretPosition(symbol=sym, outputs=dist)
            for sym, dist in zip(word, dists)
        ])

    @app.post("/forests/{forest_id}/validate", response_model=ValidateResponse)
    def validate(forest_id: str) -> ValidateResponse:
        e = entry(forest_id)
        issues = treemodel.validate_forest(e.forest)
        return ValidateResponse(ok=not issues, issues=[str(i) for i in issues])

    @app.get("/forests/{forest_id}/stats", response_model=StatsResponse)
    def stats(forest_id: str) -> StatsResponse:
        e = entry(forest_id)
        try:
            report = e.compiled()
        except TreefstError as err:
            raise HTTPException(status_code=400, detail=str(err))
        return StatsResponse(
            trees=[TreeStats(phone=r.phone, leaves=r.leaves, states=r.states,
                             arcs=r.arcs, seconds=r.seconds) for r in report.rows],
            forest_states=report.forest.num_states,
            forest_arcs=report.forest.num_arcs,
        )

    return app


app = create_app()
