"""Deterministic synthetic tracking-data generator.

Produces a schema-faithful pitch-level CSV for tests and demos: realistic
pitcher arsenals with per-type usage, batter spray tendencies, plausible
landing coordinates (already in raw tracking units so ingest has to undo
them), and a sprinkle of messy rows that exercise every ingest path
(dropped pitch types, unknown labels, missing coordinates, zero-velocity
glitches).  Everything flows from one seeded generator, so a given call
signature always yields the identical file.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

__all__ = ["make_dataset", "write_dataset"]

_PITCH_BASE = {
    # type: (velocity, spin, pfx_x, pfx_z)
    "FF": (94.5, 2300.0, -0.55, 1.35),
    "SI": (93.0, 2150.0, -1.15, 0.70),
    "FC": (89.5, 2350.0, 0.20, 0.85),
    "SL": (85.5, 2450.0, 0.50, 0.15),
    "CU": (79.0, 2550.0, 0.70, -0.80),
    "CH": (86.0, 1750.0, -1.00, 0.45),
    "FS": (86.5, 1500.0, -0.70, 0.15),
    "ST": (83.0, 2500.0, 1.10, 0.05),
}

_SURNAMES = (
    "Alvarez", "Barton", "Calloway", "Delgado", "Eastman", "Fontaine", "Garza",
    "Holloway", "Ibarra", "Jenkins", "Kovacs", "Lindqvist", "Moreno", "Novak",
    "Okafor", "Petrov", "Quintana", "Rosales", "Sutton", "Tanaka", "Urbina",
    "Vance", "Whitfield", "Xiong", "Yarborough", "Zamora", "Ashworth", "Briggs",
    "Castellanos", "Dufour", "Ellsworth", "Fairbanks", "Granderson", "Hathaway",
    "Irving", "Jimenez", "Keller", "Lombardi", "Maldonado", "Northcutt",
    "Oyelaran", "Pemberton", "Quigley", "Ramsey", "Silva", "Thibodeaux",
    "Umana", "Villareal", "Winslow", "Yoshida",
)
_FIRST = ("A.", "B.", "C.", "D.", "E.", "F.", "G.", "H.", "J.", "K.", "L.", "M.")


def _name(i: int) -> str:
    return f"{_SURNAMES[i % len(_SURNAMES)]}, {_FIRST[(i // len(_SURNAMES)) % len(_FIRST)]}"


def make_dataset(
    n_pitches: int = 10_000,
    n_pitchers: int = 12,
    n_batters: int = 16,
    seasons: tuple[int, ...] = (2024,),
    seed: int = 7,
    two_way: bool = False,
    exclude_pairs: tuple[tuple[str, str], ...] = (),
    messy_fraction: float = 0.02,
) -> pd.DataFrame:
    """Synthetic pitch table in the raw tracking schema.

    ``exclude_pairs`` lists (batter_id, pitcher_id) matchups that must never
    occur, which guarantees never-faced fixtures.  ``two_way=True`` reuses
    the first pitcher's id as the first batter's id so self-matchups exist.
    Ids are stable: pitchers count up from 600001, batters from 500001.
    """
    rng = np.random.default_rng(seed)
    types = list(_PITCH_BASE.keys())

    pitcher_ids = [str(600001 + i) for i in range(n_pitchers)]
    batter_ids = [str(500001 + i) for i in range(n_batters)]
    if two_way:
        batter_ids[0] = pitcher_ids[0]

    # --- pitcher archetypes -------------------------------------------------
    p_throws = rng.choice(["R", "L"], size=n_pitchers, p=[0.72, 0.28])
    arsenal_sizes = rng.integers(2, 6, size=n_pitchers)
    arsenals = []
    usages = []
    for i in range(n_pitchers):
        others = rng.choice(types[1:], size=arsenal_sizes[i] - 1, replace=False)
        arsenal = ["FF"] + list(others)
        weights = rng.dirichlet(np.full(len(arsenal), 3.0))
        # keep the fastball primary so every arsenal has a sturdy anchor
        weights = weights * 0.6
        weights[0] += 0.4
        arsenals.append(arsenal)
        usages.append(weights / weights.sum())
    p_velo_off = rng.normal(0.0, 1.6, size=n_pitchers)
    p_spin_off = rng.normal(0.0, 110.0, size=n_pitchers)
    p_pfx_off = rng.normal(0.0, 0.22, size=(n_pitchers, 2))
    p_rel_x = np.where(p_throws == "R", -1.0, 1.0) * rng.normal(1.7, 0.45, size=n_pitchers)
    p_rel_z = rng.normal(5.8, 0.35, size=n_pitchers)
    p_ext = rng.normal(6.3, 0.35, size=n_pitchers)

    # --- batter archetypes --------------------------------------------------
    b_stand = rng.choice(["R", "L"], size=n_batters, p=[0.58, 0.42])
    b_ev = rng.normal(88.5, 2.4, size=n_batters)
    b_la = rng.normal(12.0, 3.5, size=n_batters)
    b_pull = np.abs(rng.normal(0.16, 0.07, size=n_batters))  # radians of pull bias

    # --- schedule -----------------------------------------------------------
    pit_mix = rng.dirichlet(np.full(n_pitchers, 9.0))
    bat_mix = rng.dirichlet(np.full(n_batters, 9.0))
    pit_idx = rng.choice(n_pitchers, size=n_pitches, p=pit_mix)
    bat_idx = rng.choice(n_batters, size=n_pitches, p=bat_mix)
    if exclude_pairs:
        excluded = {(b, p) for b, p in exclude_pairs}
        for row in range(n_pitches):
            bumped = 0
            while (batter_ids[bat_idx[row]], pitcher_ids[pit_idx[row]]) in excluded:
                bat_idx[row] = (bat_idx[row] + 1) % n_batters
                bumped += 1
                if bumped > n_batters:
                    raise ValueError("exclude_pairs leaves no batter for some pitcher")
    season = rng.choice(np.asarray(seasons), size=n_pitches)

    # --- per-pitch type and kinematics --------------------------------------
    ptype = np.empty(n_pitches, dtype=object)
    velo = np.empty(n_pitches)
    spin = np.empty(n_pitches)
    pfx_x = np.empty(n_pitches)
    pfx_z = np.empty(n_pitches)
    for i in range(n_pitchers):
        rows = np.where(pit_idx == i)[0]
        if rows.size == 0:
            continue
        choice = rng.choice(len(arsenals[i]), size=rows.size, p=usages[i])
        for k, t in enumerate(arsenals[i]):
            sel = rows[choice == k]
            base = _PITCH_BASE[t]
            ptype[sel] = t
            velo[sel] = base[0] + p_velo_off[i] + rng.normal(0.0, 0.9, size=sel.size)
            spin[sel] = base[1] + p_spin_off[i] + rng.normal(0.0, 70.0, size=sel.size)
            sign = 1.0 if p_throws[i] == "R" else -1.0
            pfx_x[sel] = sign * base[2] + p_pfx_off[i, 0] + rng.normal(0.0, 0.16, size=sel.size)
            pfx_z[sel] = base[3] + p_pfx_off[i, 1] + rng.normal(0.0, 0.16, size=sel.size)

    release_x = p_rel_x[pit_idx] + rng.normal(0.0, 0.12, size=n_pitches)
    release_z = p_rel_z[pit_idx] + rng.normal(0.0, 0.12, size=n_pitches)
    extension = p_ext[pit_idx] + rng.normal(0.0, 0.15, size=n_pitches)
    speed_fps = velo * 1.467
    vy0 = -0.97 * speed_fps + rng.normal(0.0, 1.5, size=n_pitches)
    vx0 = -2.2 * release_x + rng.normal(0.0, 2.2, size=n_pitches)
    vz0 = rng.normal(-4.8, 2.0, size=n_pitches)

    # --- plate outcomes ------------------------------------------------------
    in_play = rng.random(n_pitches) < 0.175
    events = np.full(n_pitches, "", dtype=object)
    not_ip = ~in_play
    enders = rng.random(n_pitches)
    events[not_ip & (enders < 0.12)] = "strikeout"
    events[not_ip & (enders >= 0.12) & (enders < 0.18)] = "walk"

    stand_row = b_stand[bat_idx]
    ev = b_ev[bat_idx] + 0.18 * (velo - 88.0) + rng.normal(0.0, 6.5, size=n_pitches)
    la = b_la[bat_idx] + rng.normal(0.0, 13.0, size=n_pitches)
    spray_signed = rng.normal(-b_pull[bat_idx], 0.24, size=n_pitches)
    spray_signed = np.clip(spray_signed, -0.75, 0.75)
    phi = np.where(stand_row == "L", -spray_signed, spray_signed)
    la_rad = np.radians(np.maximum(la, 3.0))
    carry = np.exp(-(((la - 26.0) / 19.0) ** 2))
    dist = (ev - 55.0) * 5.1 * (0.34 + 0.66 * carry) + rng.normal(0.0, 16.0, size=n_pitches)
    dist = np.clip(dist, 6.0, 462.0)
    x_land = dist * np.sin(phi)
    y_land = dist * np.cos(phi)

    fence = 330.0 + 70.0 * np.cos(2.0 * phi)
    hr = in_play & (dist > fence)
    u = rng.random(n_pitches)
    single = in_play & ~hr & (
        ((dist >= 90.0) & (dist < 205.0) & (u < 0.42)) | ((dist < 90.0) & (u < 0.12))
    )
    double = in_play & ~hr & ~single & (dist >= 205.0) & (dist < 330.0) & (u < 0.28)
    triple = in_play & ~hr & ~single & ~double & (dist >= 240.0) & (np.abs(phi) > 0.45) & (u < 0.18)
    events[hr] = "home_run"
    events[single] = "single"
    events[double] = "double"
    events[triple] = "triple"
    leftover = in_play & ~hr & ~single & ~double & ~triple
    out_kinds = np.array(["field_out", "field_out", "field_out", "grounded_into_double_play", "force_out", "sac_fly"])
    events[leftover] = out_kinds[rng.integers(0, len(out_kinds), size=int(leftover.sum()))]

    hc_x = np.where(in_play, x_land / 2.5 + 125.42, np.nan)
    hc_y = np.where(in_play, 198.27 - y_land / 2.5, np.nan)
    launch_speed = np.where(in_play, np.round(ev, 1), np.nan)
    launch_angle = np.where(in_play, np.round(la, 1), np.nan)

    frame = pd.DataFrame(
        {
            "game_year": season,
            "pitcher": np.array(pitcher_ids, dtype=object)[pit_idx],
            "batter": np.array(batter_ids, dtype=object)[bat_idx],
            "player_name": [_name(i) for i in pit_idx],
            "batter_name": [_name(100 + i) for i in bat_idx],
            "pitch_type": ptype,
            "stand": stand_row,
            "p_throws": p_throws[pit_idx],
            "release_speed": np.round(velo, 1),
            "release_spin_rate": np.round(spin, 0),
            "pfx_x": np.round(pfx_x, 3),
            "pfx_z": np.round(pfx_z, 3),
            "release_pos_x": np.round(release_x, 2),
            "release_pos_z": np.round(release_z, 2),
            "release_extension": np.round(extension, 2),
            "vx0": np.round(vx0, 2),
            "vy0": np.round(vy0, 2),
            "vz0": np.round(vz0, 2),
            "hc_x": np.round(hc_x, 2),
            "hc_y": np.round(hc_y, 2),
            "launch_speed": launch_speed,
            "launch_angle": launch_angle,
            "events": events,
        }
    )

    # --- messy rows: exercise removal, rejection, and flagging paths --------
    n_messy = int(round(messy_fraction * n_pitches))
    if n_messy:
        messy_rows = rng.choice(n_pitches, size=n_messy, replace=False)
        kinds = rng.integers(0, 4, size=n_messy)
        removed = messy_rows[kinds == 0]
        frame.loc[removed, "pitch_type"] = rng.choice(["EP", "KN", "SC"], size=removed.size)
        unknown = messy_rows[kinds == 1]
        frame.loc[unknown, "pitch_type"] = "XX"
        legacy = messy_rows[kinds == 2]
        frame.loc[legacy, "pitch_type"] = rng.choice(["KC", "FO"], size=legacy.size)
        lost = messy_rows[kinds == 3]
        frame.loc[lost, ["hc_x", "hc_y"]] = np.nan

    return frame


def write_dataset(path, **kwargs) -> pd.DataFrame:
    """Generate and write a dataset CSV; returns the frame for inspection."""
    frame = make_dataset(**kwargs)
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False)
    return frame
