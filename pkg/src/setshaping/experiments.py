"""Exhaustive and sampled measurement of plain vs shaped compression cost.

Every quantity that can be accumulated exactly is: bit counts and
distinct-symbol counts are integer sums, and weighted-entropy sums are
kept as integer coefficients of ln(v) terms (N*H0 = N*ln N - sum n*ln n,
all integer-weighted), evaluated to float once at the end in a fixed
order.  Merging partial tallies is therefore commutative and exact, so
results are bit-identical regardless of worker count or chunking.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .coding import (
    CONTAINER_HEADER_BYTES,
    SchemeFormat,
    build_code,
    payload_bit_count,
    scheme_bit_count,
)
from .combinatorics import (
    DEFAULT_CLASS_CAP,
    composition_count,
    enumerate_compositions,
    multinomial,
    rank_sequence,
    unrank_sequence,
)
from .core import Alphabet, Composition, Sequence, format_sequence, weighted_entropy
from .errors import BadDistributionError, TooLargeError
from .shaping import (
    ShapingParams,
    shaped_subset_stats,
    shared_ordering,
    transform,
)

__all__ = [
    "SourceSpec",
    "ExperimentConfig",
    "ExperimentReport",
    "CensusReport",
    "TableRow",
    "source_entropy",
    "run",
    "run_exhaustive",
    "run_sampled",
    "reproduce_table",
    "type_class_census",
    "table_to_csv",
]

DEFAULT_EXHAUSTIVE_CAP = 10_000_000


@dataclass(frozen=True)
class SourceSpec:
    """An i.i.d. symbol source with a known distribution."""

    alphabet: Alphabet
    pmf: tuple[float, ...] | None = None  # None = uniform
    seed: int = 0

    def probabilities(self) -> tuple[float, ...]:
        if self.pmf is None:
            return tuple(1.0 / self.alphabet.size for _ in range(self.alphabet.size))
        return self.pmf

    def __post_init__(self):
        if self.seed < 0:
            raise BadDistributionError(f"seed must be non-negative, got {self.seed}")
        if self.pmf is None:
            return
        if len(self.pmf) != self.alphabet.size:
            raise BadDistributionError(
                f"{len(self.pmf)} probabilities for alphabet of size {self.alphabet.size}"
            )
        if any(p < 0 for p in self.pmf):
            raise BadDistributionError(f"negative probability in {self.pmf}")
        total = math.fsum(self.pmf)
        if abs(total - 1.0) > 1e-12:
            raise BadDistributionError(f"probabilities sum to {total!r}, not 1")


def source_entropy(spec: SourceSpec, base: float = 2.0) -> float:
    """Entropy of the source distribution: -sum p log(p)."""
    if base <= 1.0:
        raise ValueError(f"entropy base must be > 1, got {base}")
    return -math.fsum(
        p * math.log(p, base) for p in spec.probabilities() if p > 0.0
    ) + 0.0


@dataclass(frozen=True)
class ExperimentConfig:
    length: int
    alphabet_size: int
    extra_length: int = 1
    base: float = 2.0
    mode: str = "exhaustive"  # "exhaustive" | "sampled"
    scheme_formats: tuple[SchemeFormat, ...] = (
        SchemeFormat.LENGTH_LIST,
        SchemeFormat.COUNT_TABLE,
    )
    sample_count: int = 100_000
    seed: int = 0
    charge_framing: bool = False
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP
    max_classes: int = DEFAULT_CLASS_CAP
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {self.jobs}")

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.alphabet_size)

    @property
    def shaping(self) -> ShapingParams:
        return ShapingParams(
            length=self.length,
            alphabet=self.alphabet,
            extra_length=self.extra_length,
            base=self.base,
        )


class _LogSum:
    """Exact sum of integer-weighted ln(v) terms.

    add_weighted_entropy accumulates N*ln N - sum n_i*ln n_i for one
    composition; value() converts to float (in the requested log base)
    only once, iterating terms in sorted order.
    """

    __slots__ = ("coef",)

    def __init__(self):
        self.coef: Counter[int] = Counter()

    def add_weighted_entropy(self, counts, total: int) -> None:
        if total > 1:
            self.coef[total] += total
        for c in counts:
            if c > 1:
                self.coef[c] -= c

    def merge(self, other: "_LogSum") -> None:
        for v, a in other.coef.items():
            self.coef[v] += a

    def value(self, base: float) -> float:
        terms = [a * math.log(v) for v, a in sorted(self.coef.items()) if a]
        return math.fsum(terms) / math.log(base)


@dataclass
class _SideTally:
    """Exact per-population-side (plain or shaped) accumulator."""

    formats: tuple[SchemeFormat, ...]
    entropy: _LogSum = field(default_factory=_LogSum)
    distinct: int = 0
    payload_bits: int = 0
    scheme_bits: dict[SchemeFormat, int] = field(default_factory=dict)
    framing_bits: dict[SchemeFormat, int] = field(default_factory=dict)

    def __post_init__(self):
        for fmt in self.formats:
            self.scheme_bits.setdefault(fmt, 0)
            self.framing_bits.setdefault(fmt, 0)

    def add(self, seq: Sequence) -> None:
        counts = [0] * seq.alphabet.size
        for s in seq.symbols:
            counts[s] += 1
        comp = Composition(tuple(counts))
        self.entropy.add_weighted_entropy(counts, seq.length)
        self.distinct += sum(1 for c in counts if c)
        table = build_code(comp)
        payload = payload_bit_count(comp, table)
        self.payload_bits += payload
        for fmt in self.formats:
            scheme = scheme_bit_count(comp, fmt, table)
            self.scheme_bits[fmt] += scheme
            self.framing_bits[fmt] += (
                8 * CONTAINER_HEADER_BYTES + (-scheme) % 8 + (-payload) % 8
            )

    def merge(self, other: "_SideTally") -> None:
        self.entropy.merge(other.entropy)
        self.distinct += other.distinct
        self.payload_bits += other.payload_bits
        for fmt in self.formats:
            self.scheme_bits[fmt] += other.scheme_bits[fmt]
            self.framing_bits[fmt] += other.framing_bits[fmt]


@dataclass
class _Tally:
    formats: tuple[SchemeFormat, ...]
    population: int = 0
    plain: _SideTally = None  # type: ignore[assignment]
    shaped: _SideTally = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.plain is None:
            self.plain = _SideTally(self.formats)
        if self.shaped is None:
            self.shaped = _SideTally(self.formats)

    def add_pair(self, plain_seq: Sequence, shaped_seq: Sequence) -> None:
        self.population += 1
        self.plain.add(plain_seq)
        self.shaped.add(shaped_seq)

    def merge(self, other: "_Tally") -> None:
        self.population += other.population
        self.plain.merge(other.plain)
        self.shaped.merge(other.shaped)


def _exhaustive_chunk(args) -> _Tally:
    config, lo, hi = args
    alphabet = config.alphabet
    plain_ordering = shared_ordering(config.length, alphabet, config.max_classes)
    target_len = config.length + config.extra_length
    shaped_ordering = shared_ordering(target_len, alphabet, config.max_classes)
    tally = _Tally(config.scheme_formats)
    for r in range(lo, hi):
        plain_seq = unrank_sequence(config.length, alphabet, r, plain_ordering)
        shaped_seq = unrank_sequence(target_len, alphabet, r, shaped_ordering)
        tally.add_pair(plain_seq, shaped_seq)
    return tally


def _sampled_chunk(args) -> _Tally:
    config, pmf, seed, lo, hi = args
    alphabet = config.alphabet
    plain_ordering = shared_ordering(config.length, alphabet, config.max_classes)
    target_len = config.length + config.extra_length
    shaped_ordering = shared_ordering(target_len, alphabet, config.max_classes)
    p = np.asarray(pmf, dtype=np.float64)
    p = p / p.sum()
    tally = _Tally(config.scheme_formats)
    for i in range(lo, hi):
        # one generator per sample keyed by (seed, index): chunking cannot
        # change the stream any sample sees
        rng = np.random.default_rng([seed, i])
        symbols = tuple(int(s) for s in rng.choice(alphabet.size, size=config.length, p=p))
        plain_seq = Sequence(alphabet, symbols)
        r = rank_sequence(plain_seq, plain_ordering)
        shaped_seq = unrank_sequence(target_len, alphabet, r, shaped_ordering)
        tally.add_pair(plain_seq, shaped_seq)
    return tally


def _run_chunks(worker, tasks, jobs: int) -> _Tally:
    if jobs <= 1 or len(tasks) <= 1:
        results = [worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, tasks))
    merged = results[0]
    for t in results[1:]:
        merged.merge(t)
    return merged


def _split_ranges(total: int, chunks: int):
    if total <= 0:
        return [(0, 0)]
    chunks = max(1, min(chunks, total))
    step = (total + chunks - 1) // chunks
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def run_exhaustive(config: ExperimentConfig) -> "ExperimentReport":
    """Measure every length-N message (by rank, via unrank) and its image."""
    config.shaping  # validate alphabet/length/extra_length up front
    population = config.alphabet_size**config.length
    if population > config.exhaustive_cap:
        raise TooLargeError(
            f"{population} messages exceed the exhaustive cap of "
            f"{config.exhaustive_cap}; use sampled mode"
        )
    tasks = [
        (config, lo, hi)
        for lo, hi in _split_ranges(population, config.jobs * 4)
    ]
    tally = _run_chunks(_exhaustive_chunk, tasks, config.jobs)
    return _build_report(replace(config, mode="exhaustive"), tally, source=None)


def run_sampled(config: ExperimentConfig, spec: SourceSpec) -> "ExperimentReport":
    """Draw sample_count i.i.d. messages from the source and measure them."""
    if spec.alphabet.size != config.alphabet_size:
        raise BadDistributionError(
            f"source alphabet {spec.alphabet.size} != config alphabet "
            f"{config.alphabet_size}"
        )
    if config.sample_count < 1:
        raise ValueError(f"sample_count must be >= 1, got {config.sample_count}")
    config.shaping
    pmf = spec.probabilities()
    tasks = [
        (config, pmf, spec.seed, lo, hi)
        for lo, hi in _split_ranges(config.sample_count, config.jobs * 4)
    ]
    tally = _run_chunks(_sampled_chunk, tasks, config.jobs)
    return _build_report(replace(config, mode="sampled", seed=spec.seed), tally, source=spec)


def run(config: ExperimentConfig, source: SourceSpec | None = None) -> "ExperimentReport":
    """Dispatch on config.mode."""
    if config.mode == "sampled":
        if source is None:
            source = SourceSpec(config.alphabet, None, config.seed)
        return run_sampled(config, source)
    return run_exhaustive(config)


@dataclass(frozen=True)
class CensusReport:
    """How many type classes (and sequences) use fewer than |A| symbols,
    for the plain set of length-N sequences vs the shaped subset."""

    length: int
    alphabet_size: int
    extra_length: int
    plain_classes_total: int
    plain_classes_below_full: int
    plain_sequences_total: int
    plain_sequences_below_full: int
    shaped_classes_total: int
    shaped_classes_below_full: int
    shaped_sequences_total: int
    shaped_sequences_below_full: int

    @property
    def plain_sequence_fraction(self) -> float:
        return self.plain_sequences_below_full / self.plain_sequences_total

    @property
    def shaped_sequence_fraction(self) -> float:
        return self.shaped_sequences_below_full / self.shaped_sequences_total

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @classmethod
    def from_dict(cls, d: dict) -> "CensusReport":
        return cls(**d)


def type_class_census(
    n: int,
    alphabet: Alphabet,
    extra_length: int = 1,
    base: float = 2.0,
    max_classes: int = DEFAULT_CLASS_CAP,
) -> CensusReport:
    """Census of sub-alphabet type classes, plain set vs shaped subset."""
    params = ShapingParams(n, alphabet, extra_length, base)
    size = alphabet.size

    plain_classes = plain_classes_below = 0
    plain_seqs_below = 0
    if composition_count(n, alphabet) > max_classes:
        raise TooLargeError(
            f"composition census for length {n} exceeds cap {max_classes}"
        )
    for comp in enumerate_compositions(n, alphabet):
        plain_classes += 1
        if sum(1 for c in comp.counts if c) < size:
            plain_classes_below += 1
            plain_seqs_below += multinomial(comp)

    stats = shaped_subset_stats(params)
    shaped_classes = len(stats.class_census)
    shaped_classes_below = 0
    shaped_seqs_below = 0
    for comp, included in stats.class_census:
        if sum(1 for c in comp.counts if c) < size:
            shaped_classes_below += 1
            shaped_seqs_below += included

    return CensusReport(
        length=n,
        alphabet_size=size,
        extra_length=extra_length,
        plain_classes_total=plain_classes,
        plain_classes_below_full=plain_classes_below,
        plain_sequences_total=size**n,
        plain_sequences_below_full=plain_seqs_below,
        shaped_classes_total=shaped_classes,
        shaped_classes_below_full=shaped_classes_below,
        shaped_sequences_total=size**n,
        shaped_sequences_below_full=shaped_seqs_below,
    )


@dataclass(frozen=True)
class TableRow:
    message: str
    weighted_entropy: float
    transformed: str
    transformed_weighted_entropy: float


def reproduce_table(base: float = 2.0) -> list[TableRow]:
    """The canonical worked example: all 27 ternary length-3 messages and
    their length-4 images, with weighted entropies, in entropy-rank order."""
    alphabet = Alphabet(3)
    params = ShapingParams(length=3, alphabet=alphabet, extra_length=1, base=base)
    ordering = shared_ordering(3, alphabet)
    rows = []
    for r in range(27):
        m = unrank_sequence(3, alphabet, r, ordering)
        fm = transform(m, params)
        rows.append(
            TableRow(
                message=format_sequence(m),
                weighted_entropy=weighted_entropy(m, base),
                transformed=format_sequence(fm),
                transformed_weighted_entropy=weighted_entropy(fm, base),
            )
        )
    return rows


def table_to_csv(rows: list[TableRow]) -> str:
    lines = ["message,weighted_entropy,transformed,transformed_weighted_entropy"]
    for row in rows:
        lines.append(
            f"{row.message},{row.weighted_entropy:.3f},"
            f"{row.transformed},{row.transformed_weighted_entropy:.3f}"
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ExperimentReport:
    """Aggregate averages for the plain and shaped message populations.

    Exact integer totals are kept alongside the derived float averages so
    rational quantities (distinct-symbol averages, bit counts) stay exact
    and serialization round-trips losslessly.
    """

    mode: str
    length: int
    extra_length: int
    alphabet_size: int
    base: float
    population: int
    seed: int | None
    sample_count: int | None
    charge_framing: bool
    scheme_formats: tuple[str, ...]

    distinct_total_plain: int
    distinct_total_shaped: int
    payload_bits_total_plain: int
    payload_bits_total_shaped: int
    scheme_bits_total_plain: dict[str, int]
    scheme_bits_total_shaped: dict[str, int]
    framing_bits_total_plain: dict[str, int]
    framing_bits_total_shaped: dict[str, int]

    avg_weighted_entropy_plain: float
    avg_weighted_entropy_shaped: float
    avg_distinct_symbols_plain: float
    avg_distinct_symbols_shaped: float
    avg_payload_bits_plain: float
    avg_payload_bits_shaped: float
    avg_scheme_bits_plain: dict[str, float]
    avg_scheme_bits_shaped: dict[str, float]
    avg_framing_bits_plain: dict[str, float]
    avg_framing_bits_shaped: dict[str, float]
    avg_total_bits_plain: dict[str, float]
    avg_total_bits_shaped: dict[str, float]
    total_bits_delta: dict[str, float]

    source_entropy_reference: float | None
    random_limit_symbols: float
    random_limit_bits: float
    below_random_limit: dict[str, bool]

    census: CensusReport | None

    def to_dict(self) -> dict:
        d = {}
        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            if isinstance(value, CensusReport):
                value = value.to_dict()
            elif isinstance(value, tuple):
                value = list(value)
            d[name] = value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentReport":
        d = dict(d)
        if d.get("census") is not None:
            d["census"] = CensusReport.from_dict(d["census"])
        d["scheme_formats"] = tuple(d["scheme_formats"])
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        lines = ["metric,value"]

        def emit(name, value):
            if isinstance(value, dict):
                for k in sorted(value):
                    emit(f"{name}.{k}", value[k])
            elif value is None:
                lines.append(f"{name},not computable")
            else:
                lines.append(f"{name},{value!r}" if isinstance(value, float) else f"{name},{value}")

        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            if isinstance(value, CensusReport):
                emit("census", value.to_dict())
            elif isinstance(value, tuple):
                emit(name, "+".join(value))
            else:
                emit(name, value)
        return "\n".join(lines) + "\n"


def _build_report(
    config: ExperimentConfig, tally: _Tally, source: SourceSpec | None
) -> ExperimentReport:
    pop = tally.population
    fmt_names = tuple(f.value for f in config.scheme_formats)

    def per_fmt(d: dict[SchemeFormat, int]) -> dict[str, int]:
        return {f.value: d[f] for f in config.scheme_formats}

    scheme_plain = per_fmt(tally.plain.scheme_bits)
    scheme_shaped = per_fmt(tally.shaped.scheme_bits)
    framing_plain = per_fmt(tally.plain.framing_bits)
    framing_shaped = per_fmt(tally.shaped.framing_bits)

    def averages(scheme: dict[str, int], payload: int, framing: dict[str, int]):
        avg_scheme = {name: scheme[name] / pop for name in fmt_names}
        avg_payload = payload / pop
        avg_framing = {name: framing[name] / pop for name in fmt_names}
        # total built from the per-part floats so that
        # avg_total == avg_scheme + avg_payload holds exactly
        avg_total = {}
        for name in fmt_names:
            avg_total[name] = avg_scheme[name] + avg_payload
            if config.charge_framing:
                avg_total[name] += avg_framing[name]
        return avg_scheme, avg_payload, avg_framing, avg_total

    (
        avg_scheme_plain,
        avg_payload_plain,
        avg_framing_plain,
        avg_total_plain,
    ) = averages(scheme_plain, tally.plain.payload_bits, framing_plain)
    (
        avg_scheme_shaped,
        avg_payload_shaped,
        avg_framing_shaped,
        avg_total_shaped,
    ) = averages(scheme_shaped, tally.shaped.payload_bits, framing_shaped)

    random_limit_bits = config.length * math.log2(config.alphabet_size)
    census = type_class_census(
        config.length,
        config.alphabet,
        config.extra_length,
        config.base,
        config.max_classes,
    )

    return ExperimentReport(
        mode=config.mode,
        length=config.length,
        extra_length=config.extra_length,
        alphabet_size=config.alphabet_size,
        base=config.base,
        population=pop,
        seed=config.seed if config.mode == "sampled" else None,
        sample_count=config.sample_count if config.mode == "sampled" else None,
        charge_framing=config.charge_framing,
        scheme_formats=fmt_names,
        distinct_total_plain=tally.plain.distinct,
        distinct_total_shaped=tally.shaped.distinct,
        payload_bits_total_plain=tally.plain.payload_bits,
        payload_bits_total_shaped=tally.shaped.payload_bits,
        scheme_bits_total_plain=scheme_plain,
        scheme_bits_total_shaped=scheme_shaped,
        framing_bits_total_plain=framing_plain,
        framing_bits_total_shaped=framing_shaped,
        avg_weighted_entropy_plain=tally.plain.entropy.value(config.base) / pop,
        avg_weighted_entropy_shaped=tally.shaped.entropy.value(config.base) / pop,
        avg_distinct_symbols_plain=tally.plain.distinct / pop,
        avg_distinct_symbols_shaped=tally.shaped.distinct / pop,
        avg_payload_bits_plain=avg_payload_plain,
        avg_payload_bits_shaped=avg_payload_shaped,
        avg_scheme_bits_plain=avg_scheme_plain,
        avg_scheme_bits_shaped=avg_scheme_shaped,
        avg_framing_bits_plain=avg_framing_plain,
        avg_framing_bits_shaped=avg_framing_shaped,
        avg_total_bits_plain=avg_total_plain,
        avg_total_bits_shaped=avg_total_shaped,
        total_bits_delta={
            name: avg_total_shaped[name] - avg_total_plain[name] for name in fmt_names
        },
        source_entropy_reference=(
            config.length * source_entropy(source, config.base)
            if source is not None
            else None
        ),
        random_limit_symbols=float(config.length),
        random_limit_bits=random_limit_bits,
        below_random_limit={
            name: avg_total_shaped[name] < random_limit_bits for name in fmt_names
        },
        census=census,
    )
