"""Request and response bodies for the HTTP service.

The wire format mirrors the core domain types one to one; every model
carries converters so endpoint code stays a thin translation layer.
Results travel as their conventional strings ("1-0", "0-1", "1/2-1/2").
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field

from ..core import Course, GameResult, PairedGame, Player, Round
from ..harness import ExperimentConfig


class PlayerModel(BaseModel):
    id: int
    elo: int


class GameModel(BaseModel):
    white: int
    black: int
    result: Optional[str] = None

    @classmethod
    def from_core(cls, game: PairedGame) -> "GameModel":
        return cls(
            white=game.white,
            black=game.black,
            result=game.result.value if game.result else None,
        )

    def to_core(self) -> PairedGame:
        result = GameResult(self.result) if self.result is not None else None
        return PairedGame(self.white, self.black, result)


class RoundModel(BaseModel):
    index: int
    games: list[GameModel]
    bye: Optional[int] = None

    @classmethod
    def from_core(cls, rnd: Round) -> "RoundModel":
        return cls(
            index=rnd.index,
            games=[GameModel.from_core(g) for g in rnd.games],
            bye=rnd.bye,
        )

    def to_core(self) -> Round:
        return Round(self.index, tuple(g.to_core() for g in self.games), self.bye)


class CourseModel(BaseModel):
    players: list[PlayerModel]
    rounds: list[RoundModel] = Field(default_factory=list)
    total_rounds: int

    @classmethod
    def from_core(cls, course: Course) -> "CourseModel":
        return cls(
            players=[PlayerModel(id=p.id, elo=p.elo) for p in course.players],
            rounds=[RoundModel.from_core(r) for r in course.rounds],
            total_rounds=course.total_rounds,
        )

    def to_core(self) -> Course:
        return Course(
            players=tuple(Player(p.id, p.elo) for p in self.players),
            rounds=tuple(r.to_core() for r in self.rounds),
            total_rounds=self.total_rounds,
        )


class ConfigModel(BaseModel):
    """ExperimentConfig on the wire; defaults match the library's."""

    players: int = 32
    rounds: int = 5
    tournaments: int = 1000
    sample_size: int = 200
    strength_range: tuple[int, int] = (1000, 2600)
    model: str = "deterministic"
    heuristic: str = "optimal-det"
    pairing_system: str = "dutch"
    master_seed: int = 0
    workers: int = 1
    alpha: float = 0.05

    @classmethod
    def from_core(cls, config: ExperimentConfig) -> "ConfigModel":
        return cls(**{name: getattr(config, name) for name in cls.model_fields})

    def to_core(self) -> ExperimentConfig:
        return ExperimentConfig(**self.model_dump())


class ConfigOverrides(BaseModel):
    """Sparse configuration: only the supplied fields override."""

    players: Optional[int] = None
    rounds: Optional[int] = None
    tournaments: Optional[int] = None
    sample_size: Optional[int] = None
    strength_range: Optional[tuple[int, int]] = None
    model: Optional[str] = None
    heuristic: Optional[str] = None
    pairing_system: Optional[str] = None
    master_seed: Optional[int] = None
    workers: Optional[int] = None
    alpha: Optional[float] = None

    def as_dict(self) -> dict:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class HealthResponse(BaseModel):
    status: str
    version: str


class PresetCampaign(BaseModel):
    label: str
    config: ConfigModel


class PresetInfo(BaseModel):
    name: str
    description: str
    campaigns: list[PresetCampaign]


class CalibrateResponse(BaseModel):
    sigma: float
    c0: float
    c1: float
    d0: float
    d1: float
    max_table_residual: float


class SimulateRequest(BaseModel):
    config: ConfigModel = Field(default_factory=ConfigModel)
    tournament_index: int = 0
    seed: Optional[int] = None  # overrides the derived tournament seed


class SimulateResponse(BaseModel):
    seed: int
    course: CourseModel
    ranking: list[int]


class CampaignRequest(BaseModel):
    """One campaign: a full config plus sparse overrides on top.

    ``out_dir`` makes the server write gambits.csv / tournaments.csv /
    summary.json there; omit it for an in-memory run.
    """

    config: ConfigModel = Field(default_factory=ConfigModel)
    overrides: ConfigOverrides = Field(default_factory=ConfigOverrides)
    out_dir: Optional[str] = None


class TournamentRowsModel(BaseModel):
    columns: list[str]
    rows: list[list]


class CampaignResponse(BaseModel):
    summary: dict
    tournaments: TournamentRowsModel
    out_dir: Optional[str] = None


class PairRequest(BaseModel):
    course: CourseModel
    system: str = "dutch"


class PairResponse(BaseModel):
    round: RoundModel


class TrfExportRequest(BaseModel):
    course: CourseModel


class TrfExportResponse(BaseModel):
    trf: str


class TrfImportRequest(BaseModel):
    trf: str


class TrfImportResponse(BaseModel):
    course: CourseModel
