"""Issue data model, CSV ingestion, and the synthetic corpus generator.

Ingestion applies the production filtering rules (drop issues that are not
closed, are duplicates, or have no assignee/sub-team) and reports what it
removed. The synthetic generator produces a corpus with a prescribed
per-sub-team distribution, topic vocabularies, and weekly arrival
seasonality; it exists so the whole pipeline can run at desk scale on data
with known structure.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Iterable, Optional, Sequence

SUBTEAMS = ("ST1", "ST2", "ST3", "ST4", "ST5", "ST6")
TEAMS = ("T_A", "T_B")
PRIORITIES = ("P0", "P1", "P2", "P3")

CSV_HEADER = [
    "key", "summary", "assignee", "reporter", "components", "priority",
    "attach#", "created", "updated", "duedate", "labels", "description",
    "status", "duplicate", "subteam",
]


class CorpusError(ValueError):
    pass


class IngestError(CorpusError):
    pass


@dataclass(frozen=True)
class Taxonomy:
    """Two teams partitioning the six sub-teams."""

    teams: dict[str, tuple[str, ...]]

    def __post_init__(self):
        if len(self.teams) != 2:
            raise CorpusError("taxonomy must have exactly two teams")
        seen: list[str] = []
        for subs in self.teams.values():
            seen.extend(subs)
        if sorted(seen) != sorted(set(seen)) or set(seen) != set(SUBTEAMS):
            raise CorpusError("sub-teams must partition ST1..ST6 with no overlap")

    def team_of(self, subteam: str) -> str:
        for team, subs in self.teams.items():
            if subteam in subs:
                return team
        raise CorpusError(f"unknown sub-team {subteam!r}")

    def subteams_of(self, team: str) -> tuple[str, ...]:
        return self.teams[team]

    @property
    def team_names(self) -> tuple[str, ...]:
        return tuple(self.teams)


DEFAULT_TAXONOMY = Taxonomy({"T_A": ("ST1", "ST2", "ST3"), "T_B": ("ST4", "ST5", "ST6")})


@dataclass(frozen=True)
class IssueRecord:
    key: str
    summary: str
    description: str
    reporter: str
    created: datetime
    updated: datetime
    assignee: Optional[str] = None
    components: tuple[str, ...] = ()
    priority: str = "P2"
    attach_count: int = 0
    due_date: Optional[datetime] = None
    labels: tuple[str, ...] = ()
    status: str = "open"
    duplicate: bool = False
    subteam: Optional[str] = None

    def __post_init__(self):
        if not self.key:
            raise CorpusError("issue key must be non-empty")
        if self.updated < self.created:
            raise CorpusError(f"{self.key}: updated precedes created")
        if self.priority not in PRIORITIES:
            raise CorpusError(f"{self.key}: bad priority {self.priority!r}")
        if self.attach_count < 0:
            raise CorpusError(f"{self.key}: negative attach count")
        if self.status not in ("open", "closed"):
            raise CorpusError(f"{self.key}: bad status {self.status!r}")
        if self.subteam is not None and self.subteam not in SUBTEAMS:
            raise CorpusError(f"{self.key}: unknown sub-team {self.subteam!r}")


@dataclass(frozen=True)
class IssueCorpus:
    """Chronologically ordered, immutable collection of issues."""

    issues: tuple[IssueRecord, ...]

    def __post_init__(self):
        keys = [i.key for i in self.issues]
        if len(keys) != len(set(keys)):
            raise CorpusError("duplicate issue keys in corpus")
        created = [i.created for i in self.issues]
        if created != sorted(created):
            raise CorpusError("corpus issues must be sorted by creation time")

    def __len__(self) -> int:
        return len(self.issues)

    def __iter__(self):
        return iter(self.issues)

    @property
    def span(self) -> Optional[tuple[datetime, datetime]]:
        if not self.issues:
            return None
        return (self.issues[0].created, self.issues[-1].created)

    def label_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for issue in self.issues:
            if issue.subteam:
                counts[issue.subteam] = counts.get(issue.subteam, 0) + 1
        return counts

    @staticmethod
    def from_issues(issues: Iterable[IssueRecord]) -> "IssueCorpus":
        ordered = sorted(issues, key=lambda i: i.created)
        return IssueCorpus(tuple(ordered))


# --------------------------------------------------------------------------
# Ingestion
# --------------------------------------------------------------------------

@dataclass
class IngestReport:
    total_rows: int = 0
    retained: int = 0
    removed_not_closed: int = 0
    removed_duplicate: int = 0
    removed_unassigned: int = 0
    row_errors: list[tuple[int, str]] = field(default_factory=list)

    def removed_total(self) -> int:
        return self.removed_not_closed + self.removed_duplicate + self.removed_unassigned


def _parse_dt(value: str) -> Optional[datetime]:
    value = (value or "").strip()
    if not value:
        return None
    try:
        return datetime.fromisoformat(value)
    except ValueError:
        return None


def _parse_list(value: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in (value or "").split(";") if p.strip())


def _parse_bool(value: str) -> bool:
    return (value or "").strip().lower() in ("true", "1", "yes", "y")


def parse_row(row: dict) -> IssueRecord:
    """Build an IssueRecord from one raw CSV row (missing optionals default)."""
    key = (row.get("key") or "").strip()
    if not key:
        raise IngestError("missing key")
    created = _parse_dt(row.get("created", ""))
    if created is None:
        raise IngestError("missing or unparsable created timestamp")
    updated = _parse_dt(row.get("updated", "")) or created
    if updated < created:
        updated = created
    priority = (row.get("priority") or "").strip() or "P2"
    if priority not in PRIORITIES:
        priority = "P2"
    try:
        attach = max(0, int((row.get("attach#") or "0").strip() or "0"))
    except ValueError:
        attach = 0
    status = (row.get("status") or "").strip().lower()
    status = status if status in ("open", "closed") else "open"
    subteam = (row.get("subteam") or "").strip() or None
    if subteam is not None and subteam not in SUBTEAMS:
        subteam = None
    assignee = (row.get("assignee") or "").strip() or None
    return IssueRecord(
        key=key,
        summary=row.get("summary") or "",
        description=row.get("description") or "",
        reporter=(row.get("reporter") or "").strip(),
        created=created,
        updated=updated,
        assignee=assignee,
        components=_parse_list(row.get("components", "")),
        priority=priority,
        attach_count=attach,
        due_date=_parse_dt(row.get("duedate", "")),
        labels=_parse_list(row.get("labels", "")),
        status=status,
        duplicate=_parse_bool(row.get("duplicate", "")),
        subteam=subteam,
    )


def ingest(rows: Iterable[dict]) -> tuple[IssueCorpus, IngestReport]:
    """Filter raw rows down to the usable training corpus.

    Keeps only closed, non-duplicate issues that have both an assignee and a
    sub-team label. Rows failing to parse are recorded and skipped; an input
    where every row fails is an ingestion failure.
    """
    report = IngestReport()
    kept: list[IssueRecord] = []
    for n, row in enumerate(rows, start=1):
        report.total_rows += 1
        try:
            issue = parse_row(row)
        except (IngestError, CorpusError) as exc:
            report.row_errors.append((n, str(exc)))
            continue
        # Rule precedence: status, then duplicate flag, then assignment.
        if issue.status != "closed":
            report.removed_not_closed += 1
            continue
        if issue.duplicate:
            report.removed_duplicate += 1
            continue
        if issue.assignee is None or issue.subteam is None:
            report.removed_unassigned += 1
            continue
        kept.append(issue)
    if report.total_rows > 0 and len(report.row_errors) == report.total_rows:
        raise IngestError("no row of the input could be parsed")
    report.retained = len(kept)
    corpus = IssueCorpus.from_issues(kept)
    return corpus, report


def read_csv(stream) -> tuple[IssueCorpus, IngestReport]:
    reader = csv.DictReader(stream)
    if reader.fieldnames is None:
        raise IngestError("empty input: missing CSV header")
    missing = {"key", "created"} - set(reader.fieldnames)
    if missing:
        raise IngestError(f"CSV header missing required columns: {sorted(missing)}")
    return ingest(reader)


def load_csv(path) -> tuple[IssueCorpus, IngestReport]:
    with open(path, newline="", encoding="utf-8", errors="replace") as fh:
        return read_csv(fh)


def issue_to_row(issue: IssueRecord) -> dict:
    return {
        "key": issue.key,
        "summary": issue.summary,
        "assignee": issue.assignee or "",
        "reporter": issue.reporter,
        "components": ";".join(issue.components),
        "priority": issue.priority,
        "attach#": str(issue.attach_count),
        "created": issue.created.isoformat(),
        "updated": issue.updated.isoformat(),
        "duedate": issue.due_date.isoformat() if issue.due_date else "",
        "labels": ";".join(issue.labels),
        "description": issue.description,
        "status": issue.status,
        "duplicate": "true" if issue.duplicate else "false",
        "subteam": issue.subteam or "",
    }


def corpus_to_csv(corpus: IssueCorpus) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    for issue in corpus:
        writer.writerow(issue_to_row(issue))
    return out.getvalue()


# --------------------------------------------------------------------------
# Synthetic corpus
# --------------------------------------------------------------------------

# Per-sub-team core topic vocabularies. Disjoint by construction; a test
# asserts they stay disjoint after stemming, which the classifiers rely on
# in the noise-free setting.
DEFAULT_VOCAB = {
    "ST1": ("network", "signal", "antenna", "roaming", "handover",
            "modem", "carrier", "bearer", "packet", "gateway"),
    "ST2": ("audio", "speaker", "microphone", "volume", "ringtone",
            "echo", "headset", "codec", "playback", "muted"),
    "ST3": ("bluetooth", "wifi", "tethering", "hotspot", "pairing",
            "wireless", "router", "bandwidth", "nfc", "beacon"),
    "ST4": ("display", "screen", "touch", "gesture", "wallpaper",
            "brightness", "rotation", "layout", "icon", "render"),
    "ST5": ("camera", "photo", "zoom", "flash", "gallery",
            "shutter", "focus", "exposure", "lens", "timelapse"),
    "ST6": ("battery", "charging", "thermal", "reboot", "firmware",
            "kernel", "storage", "upgrade", "bootloader", "drain"),
}

# Vocabulary shared by every sub-team; injected at the spec's noise rate.
DEFAULT_NOISE_TERMS = (
    "device", "crash", "error", "restart", "intermittent", "customer",
    "model", "production", "field", "report", "reproduce", "random",
    "behavior", "observed", "started", "stopped", "failure", "unit",
)

# Weekly arrival-rate weights, cycled over the corpus span. The two teams
# peak in different weeks, which gives the drift experiments something to
# find.
DEFAULT_SEASONALITY = {
    "T_A": (4.0, 3.0, 2.0, 1.0, 1.0, 1.0, 2.0, 3.0),
    "T_B": (1.0, 1.0, 2.0, 3.0, 4.0, 3.0, 2.0, 1.0),
}

# Default per-sub-team instance counts for the bundled synthetic corpus.
DEFAULT_COUNTS = {"ST1": 1160, "ST2": 752, "ST3": 310,
                  "ST4": 1691, "ST5": 1363, "ST6": 408}

_REPORTERS = ("qa.silva", "qa.santos", "field.costa", "field.lima",
              "lab.pereira", "lab.souza", "cs.ferreira", "cs.almeida")


@dataclass(frozen=True)
class SyntheticSpec:
    counts: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_COUNTS))
    vocab: dict[str, tuple[str, ...]] = field(default_factory=lambda: dict(DEFAULT_VOCAB))
    noise_terms: tuple[str, ...] = DEFAULT_NOISE_TERMS
    seasonality: dict[str, tuple[float, ...]] = field(
        default_factory=lambda: dict(DEFAULT_SEASONALITY))
    span_start: datetime = datetime(2018, 1, 1)
    span_end: datetime = datetime(2020, 8, 31)
    noise_rate: float = 0.15
    taxonomy: Taxonomy = DEFAULT_TAXONOMY

    def __post_init__(self):
        for st, n in self.counts.items():
            if st not in SUBTEAMS:
                raise CorpusError(f"unknown sub-team in counts: {st!r}")
            if n < 0:
                raise CorpusError(f"negative count for {st}")
        if not 0.0 <= self.noise_rate <= 1.0:
            raise CorpusError("noise rate must be within [0, 1]")
        if self.span_end <= self.span_start:
            raise CorpusError("span end must follow span start")

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def to_dict(self) -> dict:
        return {
            "counts": dict(self.counts),
            "vocab": {k: list(v) for k, v in self.vocab.items()},
            "noise_terms": list(self.noise_terms),
            "seasonality": {k: list(v) for k, v in self.seasonality.items()},
            "span_start": self.span_start.isoformat(),
            "span_end": self.span_end.isoformat(),
            "noise_rate": self.noise_rate,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SyntheticSpec":
        kwargs = {}
        if "counts" in data:
            kwargs["counts"] = {k: int(v) for k, v in data["counts"].items()}
        if "vocab" in data:
            kwargs["vocab"] = {k: tuple(v) for k, v in data["vocab"].items()}
        if "noise_terms" in data:
            kwargs["noise_terms"] = tuple(data["noise_terms"])
        if "seasonality" in data:
            kwargs["seasonality"] = {k: tuple(float(x) for x in v)
                                     for k, v in data["seasonality"].items()}
        if "span_start" in data:
            kwargs["span_start"] = datetime.fromisoformat(data["span_start"])
        if "span_end" in data:
            kwargs["span_end"] = datetime.fromisoformat(data["span_end"])
        if "noise_rate" in data:
            kwargs["noise_rate"] = float(data["noise_rate"])
        return cls(**kwargs)


def default_spec() -> SyntheticSpec:
    return SyntheticSpec()


def noise_free_spec(scale: int = 8) -> SyntheticSpec:
    """Smaller, noise-free variant: disjoint vocabularies, zero shared terms."""
    counts = {st: max(20, n // scale) for st, n in DEFAULT_COUNTS.items()}
    return SyntheticSpec(counts=counts, noise_rate=0.0)


# Connectives in these shapes are all Rainbow stopwords, so after
# preprocessing a noise-free document contains nothing but core-term stems.
_SUMMARY_SHAPES = (
    "{0} {1} after {2}",
    "{0} with {1} and {2}",
    "{0} {1} during {2}",
    "no {0} when {1} {2}",
    "{0} {1} between {2}",
)

_FILLERS = ("after", "with", "and", "during", "when", "between",
            "still", "under", "again", "while")


def _pick_words(rng: random.Random, core: Sequence[str], noise: Sequence[str],
                noise_rate: float, n: int) -> list[str]:
    words = []
    for _ in range(n):
        if noise and noise_rate > 0 and rng.random() < noise_rate:
            words.append(rng.choice(noise))
        else:
            words.append(rng.choice(core))
    return words


def generate_synthetic(spec: SyntheticSpec, seed: int) -> IssueCorpus:
    """Deterministic synthetic corpus: same (spec, seed) in, same bytes out."""
    rng = random.Random(seed)
    span_seconds = (spec.span_end - spec.span_start).total_seconds()
    n_weeks = max(1, int(span_seconds // (7 * 24 * 3600)))
    issues: list[IssueRecord] = []
    serial = 0
    for st in SUBTEAMS:
        count = spec.counts.get(st, 0)
        if count == 0:
            continue
        core = spec.vocab[st]
        team = spec.taxonomy.team_of(st)
        weights_cycle = spec.seasonality.get(team, (1.0,))
        week_weights = [weights_cycle[w % len(weights_cycle)] for w in range(n_weeks)]
        weeks = rng.choices(range(n_weeks), weights=week_weights, k=count)
        for week in weeks:
            serial += 1
            offset = timedelta(weeks=week, seconds=rng.uniform(0, 7 * 24 * 3600 - 1))
            created = spec.span_start + offset
            if created > spec.span_end:
                created = spec.span_end
            shape = rng.choice(_SUMMARY_SHAPES)
            summary = shape.format(*_pick_words(rng, core, spec.noise_terms,
                                                spec.noise_rate, 3))
            body_words = _pick_words(rng, core, spec.noise_terms, spec.noise_rate,
                                     rng.randint(8, 20))
            for pos in range(4, len(body_words), 5):
                body_words[pos] = rng.choice(_FILLERS)
            description = " ".join(body_words)
            updated = created + timedelta(hours=rng.randint(4, 24 * 30))
            issues.append(IssueRecord(
                key=f"SYN-{serial:06d}",
                summary=summary,
                description=description,
                reporter=rng.choice(_REPORTERS),
                created=created,
                updated=updated,
                assignee=f"lead.{st.lower()}",
                components=(st.lower() + "-stack",),
                priority=rng.choices(PRIORITIES, weights=(1, 3, 5, 3))[0],
                attach_count=rng.randint(0, 4),
                labels=(),
                status="closed",
                duplicate=False,
                subteam=st,
            ))
    return IssueCorpus.from_issues(issues)
