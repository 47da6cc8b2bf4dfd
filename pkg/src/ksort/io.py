"""Vote logs (JSONL), state snapshots (JSON) and leaderboard export (CSV/JSON)."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from datetime import datetime
from typing import IO, Iterable, Sequence

from .arena import BEST, RANK, TIE, ArenaConfig, ArenaState, Battle, LeaderboardEntry, Vote
from .errors import KSortError, ParseError
from .matchmaking import ComparisonLedger
from .rating import Rating

SCHEMA_VERSION = 1
LEADERBOARD_COLUMNS = ("rank", "name", "mu", "sigma", "score", "comparisons")


@dataclass(frozen=True)
class VoteRecord:
    battle_id: str
    timestamp: str
    participants: tuple[str, ...]
    mode: str
    payload: object

    def to_json(self) -> str:
        rec = asdict(self)
        rec["participants"] = list(self.participants)
        return json.dumps(rec, ensure_ascii=False)


def _check_timestamp(value: str) -> None:
    text = value[:-1] + "+00:00" if value.endswith("Z") else value
    datetime.fromisoformat(text)


def _record_from_obj(obj, lineno: int) -> VoteRecord:
    if not isinstance(obj, dict):
        raise ParseError("record must be a JSON object", lineno)
    for key in ("battle_id", "timestamp", "participants", "mode", "payload"):
        if key not in obj:
            raise ParseError("missing field", lineno, key)
    bid = obj["battle_id"]
    if not isinstance(bid, str) or not bid:
        raise ParseError("battle_id must be a nonempty string", lineno, "battle_id")
    ts = obj["timestamp"]
    try:
        if not isinstance(ts, str):
            raise ValueError
        _check_timestamp(ts)
    except ValueError:
        raise ParseError(f"not an ISO-8601 timestamp: {ts!r}", lineno, "timestamp") from None
    parts = obj["participants"]
    if (not isinstance(parts, list) or len(parts) < 2
            or not all(isinstance(p, str) and p for p in parts)):
        raise ParseError("participants must be a list of at least two names", lineno, "participants")
    if len(set(parts)) != len(parts):
        raise ParseError("participants must be distinct", lineno, "participants")
    if TIE in parts:
        raise ParseError(f"{TIE!r} is reserved and cannot name a model", lineno, "participants")
    mode = obj["mode"]
    payload = obj["payload"]
    if mode == BEST:
        if not isinstance(payload, str) or (payload != TIE and payload not in parts):
            raise ParseError(f"best-mode payload must be a participant or {TIE!r}, got {payload!r}",
                             lineno, "payload")
    elif mode == RANK:
        if not isinstance(payload, dict):
            raise ParseError("rank-mode payload must be an object", lineno, "payload")
        extra = sorted(set(payload) - set(parts))
        if extra:
            raise ParseError(f"payload names non-participants {extra!r}", lineno, "payload")
        missing = sorted(set(parts) - set(payload))
        if missing:
            raise ParseError(f"payload misses participants {missing!r}", lineno, "payload")
        for name, r in payload.items():
            if isinstance(r, bool) or not isinstance(r, int) or r < 1:
                raise ParseError(f"rank of {name!r} must be a positive integer", lineno, "payload")
        payload = dict(payload)
    else:
        raise ParseError(f"mode must be {BEST!r} or {RANK!r}, got {mode!r}", lineno, "mode")
    return VoteRecord(bid, ts, tuple(parts), mode, payload)


def parse_vote_log(stream: IO[str] | Iterable[str]) -> list[VoteRecord]:
    """Parse a whole JSONL log or raise on the first bad line (blank lines are skipped)."""
    out = []
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
        out.append(_record_from_obj(obj, lineno))
    return out


def write_vote_log(records: Sequence[VoteRecord], stream: IO[str]) -> None:
    for rec in records:
        stream.write(rec.to_json())
        stream.write("\n")


def replay(records: Sequence[VoteRecord], state: ArenaState | None = None,
           cfg: ArenaConfig | None = None) -> ArenaState:
    """Apply a vote log in order; unseen names are registered on first appearance."""
    out = state.copy() if state is not None else ArenaState(cfg=cfg or ArenaConfig())
    names = {name: ident for ident, name in out.models.items()}
    for n, rec in enumerate(records, start=1):
        for name in rec.participants:
            if name not in names:
                names[name] = out.register(name)
        ids = tuple(names[p] for p in rec.participants)
        if rec.mode == BEST:
            payload = TIE if rec.payload == TIE else names[rec.payload]
        else:
            payload = {names[k]: v for k, v in rec.payload.items()}
        try:
            out.apply(Battle(rec.battle_id, ids), Vote(rec.mode, payload))
        except KSortError as exc:
            raise type(exc)(f"record {n} ({rec.battle_id}): {exc}") from None
    return out


# -- snapshots ------------------------------------------------------------

def snapshot_dict(state: ArenaState) -> dict:
    sums = state.ledger.n_pair.sum(axis=1)
    models = []
    for ident in state.ledger.ids:
        r = state.ratings[ident]
        models.append({"id": ident, "name": state.models[ident], "mu": r.mu, "sigma": r.sigma,
                       "beta": r.beta, "comparisons": int(sums[state.ledger.pos(ident)])})
    return {
        "schema_version": SCHEMA_VERSION,
        "config": asdict(state.cfg),
        "models": models,
        "ledger": state.ledger.n_pair.tolist(),
        "n_total": state.ledger.n_total,
        "next_id": state.next_id,
        "applied_battles": list(state.applied),
    }


def dump_snapshot(state: ArenaState) -> str:
    return json.dumps(snapshot_dict(state), indent=2, ensure_ascii=False) + "\n"


def load_snapshot(text: str) -> ArenaState:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"snapshot is not valid JSON: {exc.msg}", exc.lineno) from None
    try:
        version = obj["schema_version"]
        if version != SCHEMA_VERSION:
            raise ParseError(f"unsupported schema_version {version!r}")
        cfg_obj = dict(obj["config"])
        for key in ("mu0", "sigma0", "beta", "eta", "sigma_min", "alpha"):
            cfg_obj[key] = float(cfg_obj[key])
        cfg = ArenaConfig(**cfg_obj)
        ids = [int(m["id"]) for m in obj["models"]]
        ledger = ComparisonLedger(ids, obj["ledger"] if ids else None, int(obj["n_total"]))
        state = ArenaState(cfg=cfg, ledger=ledger, next_id=int(obj["next_id"]),
                           applied=[str(b) for b in obj.get("applied_battles", [])])
        for m in obj["models"]:
            ident = int(m["id"])
            state.models[ident] = str(m["name"])
            state.ratings[ident] = Rating(float(m["mu"]), float(m["sigma"]), float(m["beta"]))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed snapshot: {exc}") from None
    if len(set(state.models.values())) != len(state.models):
        raise ParseError("snapshot has duplicate model names")
    if state.next_id <= max(ids, default=-1):
        raise ParseError("next_id must exceed every model id")
    return state


# -- leaderboard export ---------------------------------------------------

def _fmt(x: float) -> str:
    s = f"{x:.4f}"
    return "0.0000" if s == "-0.0000" else s


def export_leaderboard(entries: Sequence[LeaderboardEntry], fmt: str = "csv") -> bytes:
    """Sorted entries as CSV (fixed header) or a JSON array; reals to 4 places."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(LEADERBOARD_COLUMNS)
        for rank, e in enumerate(entries, start=1):
            w.writerow([rank, e.name, _fmt(e.mu), _fmt(e.sigma), _fmt(e.score), e.comparisons])
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        # numbers printed as fixed-point literals so the JSON matches the CSV exactly
        rows = []
        for rank, e in enumerate(entries, start=1):
            rows.append("  {" + ", ".join([
                f'"rank": {rank}',
                f'"name": {json.dumps(e.name, ensure_ascii=False)}',
                f'"mu": {_fmt(e.mu)}',
                f'"sigma": {_fmt(e.sigma)}',
                f'"score": {_fmt(e.score)}',
                f'"comparisons": {e.comparisons}',
            ]) + "}")
        body = "[\n" + ",\n".join(rows) + "\n]\n" if rows else "[]\n"
        return body.encode("utf-8")
    raise KSortError(f"unknown format {fmt!r}")


def parse_leaderboard_json(data: bytes) -> list[dict]:
    return json.loads(data.decode("utf-8"))
