"""Pitch-level CSV ingestion and preprocessing.

Raw tracking exports are filtered and normalized into a clean stream of
:class:`PitchRecord` values: rare experimental pitch types are dropped,
legacy labels renamed, release angles derived from the velocity vector,
landing coordinates moved into feet from home plate, and spray angles
signed so that negative always means the pull side regardless of batter
handedness.  Every input row is accounted for in the ingest report:
``accepted + removed + rejected == rows``; flags mark accepted records with
a quirk (clamped spray angle, in-play outcome without coordinates).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd

__all__ = [
    "Outcome",
    "OUTCOME_CODE",
    "PitchRecord",
    "IngestReport",
    "IngestResult",
    "ColumnMap",
    "CoordinateTransform",
    "DEFAULT_TRANSFORM",
    "UnknownPitchTypeError",
    "filter_and_rename",
    "classify_event",
    "pitch_launch_angles",
    "adjust_coordinates",
    "spray_angle",
    "ingest_csv",
]


class Outcome(str, Enum):
    OUT = "out"
    SINGLE = "single"
    DOUBLE = "double"
    TRIPLE = "triple"
    HOME_RUN = "home_run"
    NOT_IN_PLAY = "not_in_play"


# Position in the (out, single, double, triple, home_run) probability vector.
OUTCOME_CODE = {
    Outcome.OUT: 0,
    Outcome.SINGLE: 1,
    Outcome.DOUBLE: 2,
    Outcome.TRIPLE: 3,
    Outcome.HOME_RUN: 4,
}

_HIT_EVENTS = {
    "single": Outcome.SINGLE,
    "double": Outcome.DOUBLE,
    "triple": Outcome.TRIPLE,
    "home_run": Outcome.HOME_RUN,
}

_OUT_EVENTS = frozenset(
    {
        "field_out",
        "grounded_into_double_play",
        "force_out",
        "sac_fly",
        "sac_bunt",
        "field_error",
        "fielders_choice",
        "fielders_choice_out",
        "double_play",
        "triple_play",
        "sac_fly_double_play",
        "sac_bunt_double_play",
    }
)

# Rare or experimental pitch types are dropped outright; a couple of legacy
# labels fold into their modern families.  Raw files may carry either the
# two-letter codes or the spelled-out labels.
_REMOVED_PITCH_TYPES = frozenset({"EP", "Eephus", "KN", "Knuckleball", "SC", "Screwball"})
_PITCH_TYPE_RENAMES = {
    "KC": "CU",
    "Knuckle-Curve": "CU",
    "FO": "FS",
    "Forkball": "FS",
}
_KNOWN_PITCH_TYPES = frozenset(
    {"FF", "FA", "FT", "SI", "FC", "SL", "ST", "SV", "CU", "CS", "CH", "FS"}
)

# Landing points farther than this from home plate are tracking glitches.
MAX_LANDING_DISTANCE = 1000.0


class UnknownPitchTypeError(ValueError):
    """Pitch-type label not in the known tracking vocabulary."""


def filter_and_rename(raw_pitch_type: str) -> Optional[str]:
    """Canonical pitch-type code, or None when the pitch is dropped."""
    label = (raw_pitch_type or "").strip()
    if label in _REMOVED_PITCH_TYPES:
        return None
    if label in _PITCH_TYPE_RENAMES:
        return _PITCH_TYPE_RENAMES[label]
    if label in _KNOWN_PITCH_TYPES:
        return label
    raise UnknownPitchTypeError(f"unknown pitch type label: {raw_pitch_type!r}")


def classify_event(event: Optional[str]) -> Outcome:
    """Map a plate-appearance event string to a ball-in-play outcome."""
    if not event:
        return Outcome.NOT_IN_PLAY
    if event in _HIT_EVENTS:
        return _HIT_EVENTS[event]
    if event in _OUT_EVENTS:
        return Outcome.OUT
    return Outcome.NOT_IN_PLAY


def pitch_launch_angles(vx0: float, vy0: float, vz0: float) -> tuple[float, float]:
    """Horizontal and vertical release angles (radians) of the pitch.

    The horizontal angle is ``atan(vx0 / vy0)`` and the vertical angle is
    ``atan(vz0 / hypot(vx0, vy0))``; both land strictly inside
    (-pi/2, pi/2).  Sign conventions come straight from the velocity
    components, raw handedness asymmetries included.
    """
    if vy0 == 0.0:
        raise ValueError("degenerate release trajectory: vy0 is zero")
    return math.atan(vx0 / vy0), math.atan(vz0 / math.hypot(vx0, vy0))


@dataclass(frozen=True)
class CoordinateTransform:
    """Raw hit-coordinate units to feet from home plate.

    x grows toward right field and y toward center field: the raw origin is
    translated to home plate, the y axis flipped, and both axes scaled.
    """

    origin_x: float = 125.42
    origin_y: float = 198.27
    scale: float = 2.5

    def __call__(self, hc_x: float, hc_y: float) -> tuple[float, float]:
        return ((hc_x - self.origin_x) * self.scale, (self.origin_y - hc_y) * self.scale)


DEFAULT_TRANSFORM = CoordinateTransform()


def adjust_coordinates(
    hc_x: float, hc_y: float, transform: CoordinateTransform = DEFAULT_TRANSFORM
) -> tuple[float, float]:
    """Landing point in feet from home plate."""
    return transform(hc_x, hc_y)


def spray_angle(landing_x: float, landing_y: float, bat_side: str) -> tuple[float, bool]:
    """Signed spray angle in radians; negative always means pulled.

    The base angle is ``atan(x / y)``, negated for left-handed batters so
    the pull side is negative for everyone.  Landings at or behind the
    plate line (y <= 0) clamp to +-pi/2 and are flagged.
    """
    if landing_y <= 0.0:
        base = math.copysign(math.pi / 2.0, landing_x) if landing_x != 0.0 else 0.0
        clamped = True
    else:
        base = math.atan(landing_x / landing_y)
        clamped = False
    if bat_side == "L":
        base = -base
    return base, clamped


@dataclass(frozen=True, slots=True)
class PitchRecord:
    """One retained pitch after preprocessing.  Angles are radians except
    ``launch_angle`` (batted-ball loft), which stays in degrees as reported."""

    season: int
    pitcher_id: str
    batter_id: str
    pitch_type: str
    bat_side: str
    throw_side: str
    velocity: Optional[float]
    spin: Optional[float]
    break_h: Optional[float]  # inches
    break_v: Optional[float]  # inches
    release_x: Optional[float]
    release_z: Optional[float]
    extension: Optional[float]
    vx0: Optional[float]
    vy0: Optional[float]
    vz0: Optional[float]
    launch_h: Optional[float]
    launch_v: Optional[float]
    exit_velocity: Optional[float]
    launch_angle: Optional[float]
    landing_x: Optional[float]
    landing_y: Optional[float]
    spray_angle: Optional[float]
    outcome: Outcome

    @property
    def in_play(self) -> bool:
        return self.outcome is not Outcome.NOT_IN_PLAY


@dataclass
class IngestReport:
    """Row accounting for one ingest run: every input row lands in exactly
    one of accepted / removed / rejected; flags annotate accepted rows."""

    accepted: int = 0
    removed: int = 0
    rejected: int = 0
    flagged: int = 0
    rejected_reasons: dict = field(default_factory=dict)
    flagged_reasons: dict = field(default_factory=dict)

    def reject(self, reason: str) -> None:
        self.rejected += 1
        self.rejected_reasons[reason] = self.rejected_reasons.get(reason, 0) + 1

    def flag(self, reason: str) -> None:
        self.flagged += 1
        self.flagged_reasons[reason] = self.flagged_reasons.get(reason, 0) + 1

    @property
    def total(self) -> int:
        return self.accepted + self.removed + self.rejected

    def to_payload(self) -> dict:
        return {
            "accepted": self.accepted,
            "removed": self.removed,
            "rejected": self.rejected,
            "flagged": self.flagged,
            "rejected_reasons": dict(sorted(self.rejected_reasons.items())),
            "flagged_reasons": dict(sorted(self.flagged_reasons.items())),
        }


@dataclass(frozen=True)
class ColumnMap:
    """CSV column names; defaults match the standard tracking export."""

    season: str = "game_year"
    pitcher: str = "pitcher"
    batter: str = "batter"
    pitch_type: str = "pitch_type"
    bat_side: str = "stand"
    throw_side: str = "p_throws"
    velocity: str = "release_speed"
    spin: str = "release_spin_rate"
    pfx_x: str = "pfx_x"
    pfx_z: str = "pfx_z"
    release_x: str = "release_pos_x"
    release_z: str = "release_pos_z"
    extension: str = "release_extension"
    vx0: str = "vx0"
    vy0: str = "vy0"
    vz0: str = "vz0"
    hc_x: str = "hc_x"
    hc_y: str = "hc_y"
    exit_velocity: str = "launch_speed"
    launch_angle: str = "launch_angle"
    events: str = "events"
    pitcher_name: str = "player_name"
    batter_name: str = "batter_name"  # nonstandard; used when present


DEFAULT_COLUMNS = ColumnMap()


@dataclass
class IngestResult:
    records: list
    report: IngestReport
    pitcher_names: dict
    batter_names: dict


def _column(frame: pd.DataFrame, name: str):
    return frame[name].to_numpy() if name in frame.columns else None


def _num(arr, i) -> Optional[float]:
    if arr is None:
        return None
    try:
        v = float(arr[i])
    except (TypeError, ValueError):
        return None
    return v if math.isfinite(v) else None


def _text(arr, i) -> Optional[str]:
    if arr is None:
        return None
    v = arr[i]
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return None
    s = str(v).strip()
    return s or None


def _ident(arr, i) -> Optional[str]:
    # Player ids arrive as ints, floats (when the column holds NaNs), or
    # strings; normalize the numeric forms so "607192.0" == "607192".
    s = _text(arr, i)
    if s is None:
        return None
    try:
        f = float(s)
    except ValueError:
        return s
    if not math.isfinite(f):
        return None
    return str(int(f)) if f == int(f) else s


def ingest_csv(
    source,
    columns: ColumnMap = DEFAULT_COLUMNS,
    transform: CoordinateTransform = DEFAULT_TRANSFORM,
) -> IngestResult:
    """Read a tracking CSV into clean records plus a full accounting report.

    Row handling, in order: unknown or missing pitch-type labels reject the
    row; dropped types count as removed; missing identity fields reject;
    a zero ``vy0`` rejects (the release angles are undefined); landing
    points beyond 1000 ft reject.  In-play rows missing hit coordinates are
    kept but flagged and demoted to NOT_IN_PLAY so they never reach density
    estimation.  Iteration order is the file order, so the same file always
    produces the same record stream.
    """
    frame = pd.read_csv(source)
    report = IngestReport()
    records: list[PitchRecord] = []
    pitcher_names: dict[str, str] = {}
    batter_names: dict[str, str] = {}

    c_season = _column(frame, columns.season)
    c_pitcher = _column(frame, columns.pitcher)
    c_batter = _column(frame, columns.batter)
    c_ptype = _column(frame, columns.pitch_type)
    c_bat_side = _column(frame, columns.bat_side)
    c_throw_side = _column(frame, columns.throw_side)
    c_velocity = _column(frame, columns.velocity)
    c_spin = _column(frame, columns.spin)
    c_pfx_x = _column(frame, columns.pfx_x)
    c_pfx_z = _column(frame, columns.pfx_z)
    c_release_x = _column(frame, columns.release_x)
    c_release_z = _column(frame, columns.release_z)
    c_extension = _column(frame, columns.extension)
    c_vx0 = _column(frame, columns.vx0)
    c_vy0 = _column(frame, columns.vy0)
    c_vz0 = _column(frame, columns.vz0)
    c_hc_x = _column(frame, columns.hc_x)
    c_hc_y = _column(frame, columns.hc_y)
    c_ev = _column(frame, columns.exit_velocity)
    c_la = _column(frame, columns.launch_angle)
    c_events = _column(frame, columns.events)
    c_pname = _column(frame, columns.pitcher_name)
    c_bname = _column(frame, columns.batter_name)

    for i in range(len(frame)):
        raw_type = _text(c_ptype, i)
        if raw_type is None:
            report.reject("missing_pitch_type")
            continue
        try:
            ptype = filter_and_rename(raw_type)
        except UnknownPitchTypeError:
            report.reject("unknown_pitch_type")
            continue
        if ptype is None:
            report.removed += 1
            continue

        season = _num(c_season, i)
        pitcher_id = _ident(c_pitcher, i)
        batter_id = _ident(c_batter, i)
        bat_side = _text(c_bat_side, i)
        throw_side = _text(c_throw_side, i)
        if (
            season is None
            or pitcher_id is None
            or batter_id is None
            or bat_side not in ("L", "R")
            or throw_side not in ("L", "R")
        ):
            report.reject("missing_identity")
            continue

        vx0 = _num(c_vx0, i)
        vy0 = _num(c_vy0, i)
        vz0 = _num(c_vz0, i)
        launch_h = launch_v = None
        if vx0 is not None and vy0 is not None and vz0 is not None:
            if vy0 == 0.0:
                report.reject("degenerate_trajectory")
                continue
            launch_h, launch_v = pitch_launch_angles(vx0, vy0, vz0)

        outcome = classify_event(_text(c_events, i))
        landing_x = landing_y = spray = None
        exit_velocity = launch_angle = None
        if outcome is not Outcome.NOT_IN_PLAY:
            hc_x = _num(c_hc_x, i)
            hc_y = _num(c_hc_y, i)
            if hc_x is None or hc_y is None:
                # A hit into play with no landing point cannot feed the
                # densities; keep the pitch for usage counts only.
                report.flag("missing_coordinates")
                outcome = Outcome.NOT_IN_PLAY
            else:
                x, y = transform(hc_x, hc_y)
                if math.hypot(x, y) > MAX_LANDING_DISTANCE:
                    report.reject("landing_out_of_range")
                    continue
                spray, was_clamped = spray_angle(x, y, bat_side)
                if was_clamped:
                    report.flag("spray_angle_clamped")
                landing_x, landing_y = x, y
                exit_velocity = _num(c_ev, i)
                launch_angle = _num(c_la, i)

        pfx_x = _num(c_pfx_x, i)
        pfx_z = _num(c_pfx_z, i)
        records.append(
            PitchRecord(
                season=int(season),
                pitcher_id=pitcher_id,
                batter_id=batter_id,
                pitch_type=ptype,
                bat_side=bat_side,
                throw_side=throw_side,
                velocity=_num(c_velocity, i),
                spin=_num(c_spin, i),
                break_h=None if pfx_x is None else 12.0 * pfx_x,
                break_v=None if pfx_z is None else 12.0 * pfx_z,
                release_x=_num(c_release_x, i),
                release_z=_num(c_release_z, i),
                extension=_num(c_extension, i),
                vx0=vx0,
                vy0=vy0,
                vz0=vz0,
                launch_h=launch_h,
                launch_v=launch_v,
                exit_velocity=exit_velocity,
                launch_angle=launch_angle,
                landing_x=landing_x,
                landing_y=landing_y,
                spray_angle=spray,
                outcome=outcome,
            )
        )
        report.accepted += 1
        pname = _text(c_pname, i)
        if pname and pitcher_id not in pitcher_names:
            pitcher_names[pitcher_id] = pname
        bname = _text(c_bname, i)
        if bname and batter_id not in batter_names:
            batter_names[batter_id] = bname

    return IngestResult(records, report, pitcher_names, batter_names)
