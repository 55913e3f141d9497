"""Patient-cohort analytics: profile distances, grouping, survival bands,
maximal coexisting-mutation sets, and the frequency/co-mutation tables.

Percentages are carried as exact Fractions and rounded half-up to one
decimal only when rendered, so table comparisons are reproducible.
"""

from __future__ import annotations

import decimal
import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import errors
from .graph import KnowledgeGraph, MutationKey, downgrade_to_gene


@dataclass(frozen=True)
class MutationProfile:
    """A patient's green neighborhood as a set of mutation items.

    Items are MutationKey at mutation granularity or gene symbols after a
    gene-level downgrade.
    """

    patient_id: str
    mutations: frozenset


@dataclass(frozen=True)
class SurvivalPartition:
    long_survivors: frozenset[str]
    short_deceased: frozenset[str]
    rest: frozenset[str]


@dataclass(frozen=True)
class CoexistenceSet:
    mutations: frozenset
    support_percent: Fraction
    supporting_patients: frozenset[str]


class FrequencyMode(enum.Enum):
    MUTATION = "mutation"
    GENE_WITH_MULTIPLICITY = "gene_with_multiplicity"
    GENE_WITHOUT_MULTIPLICITY = "gene_without_multiplicity"


@dataclass(frozen=True)
class FrequencyTable:
    mode: FrequencyMode
    population: str
    rows: tuple[tuple[str, Fraction], ...]  # (item id, percent) sorted


def format_percent(value: Fraction) -> str:
    """Render an exact percentage with one decimal, rounding half-up."""
    d = decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator)
    return str(d.quantize(decimal.Decimal("0.1"), rounding=decimal.ROUND_HALF_UP))


def item_id(item) -> str:
    return item.display() if isinstance(item, MutationKey) else str(item)


def profiles_from_graph(
    graph: KnowledgeGraph,
    patient_ids=None,
    gene_level: bool = False,
) -> list[MutationProfile]:
    """Extract mutation profiles, optionally downgraded to gene symbols."""
    if patient_ids is None:
        patient_ids = graph.patients.keys()
    out = []
    for pid in sorted(patient_ids):
        muts = graph.mutations_of_patient(pid)
        if gene_level:
            items = frozenset(downgrade_to_gene(m) for m in muts)
        else:
            items = frozenset(muts)
        out.append(MutationProfile(pid, items))
    return out


def hamming_distance(a: MutationProfile, b: MutationProfile) -> int:
    """Number of mutations affecting exactly one of the two patients."""
    return len(a.mutations ^ b.mutations)


def jaccard_distance(a: MutationProfile, b: MutationProfile) -> Fraction:
    """Symmetric difference over union; two empty profiles are at distance 0."""
    union = a.mutations | b.mutations
    if not union:
        return Fraction(0)
    return Fraction(len(a.mutations ^ b.mutations), len(union))


_METRICS = {"hamming": hamming_distance, "jaccard": jaccard_distance}


def group_by_threshold(
    profiles: list[MutationProfile],
    metric="hamming",
    k=0,
    strategy: str = "components",
) -> list[list[str]]:
    """Group patients whose profiles are within distance k of each other.

    ``strategy="components"`` (default) takes connected components of the
    k-threshold graph (distance chains allowed); ``"cliques"`` returns the
    maximal cliques instead (every pair within k; exact enumeration, meant
    for desk-scale inputs). Groups and their members are ordered by
    patient id.
    """
    if k < 0:
        raise errors.InvalidThresholds("k must be >= 0")
    dist = _METRICS[metric] if isinstance(metric, str) else metric
    ids = [p.patient_id for p in profiles]
    adj: dict[str, set[str]] = {pid: set() for pid in ids}
    for a, b in combinations(profiles, 2):
        if dist(a, b) <= k:
            adj[a.patient_id].add(b.patient_id)
            adj[b.patient_id].add(a.patient_id)

    if strategy == "components":
        groups = []
        seen: set[str] = set()
        for pid in sorted(ids):
            if pid in seen:
                continue
            stack, comp = [pid], set()
            while stack:
                cur = stack.pop()
                if cur in comp:
                    continue
                comp.add(cur)
                stack.extend(adj[cur] - comp)
            seen |= comp
            groups.append(sorted(comp))
    elif strategy == "cliques":
        groups = [sorted(c) for c in _maximal_cliques(adj)]
        groups.sort(key=lambda g: g[0])
    else:
        raise ValueError(f"unknown strategy '{strategy}'")
    return sorted(groups, key=lambda g: g[0])


def _maximal_cliques(adj: dict[str, set[str]]):
    """Bron-Kerbosch with pivoting over the threshold graph."""
    cliques: list[set[str]] = []

    def expand(r: set[str], p: set[str], x: set[str]) -> None:
        if not p and not x:
            cliques.append(set(r))
            return
        pivot = max(p | x, key=lambda v: len(adj[v]))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(adj), set())
    return cliques


def survival_partition(
    graph: KnowledgeGraph, t_long: int = 36, t_short: int = 6
) -> SurvivalPartition:
    """Split patients into long survivors, short-lived deceased, and the rest.

    Long: survival >= t_long months (regardless of vital status).
    Short: survival <= t_short months AND deceased.
    """
    if t_short >= t_long:
        raise errors.InvalidThresholds(f"t_short {t_short} must be < t_long {t_long}")
    long_s, short_d, rest = set(), set(), set()
    for p in graph.patients.values():
        if p.survival_months >= t_long:
            long_s.add(p.patient_id)
        elif p.survival_months <= t_short and not p.alive:
            short_d.add(p.patient_id)
        else:
            rest.add(p.patient_id)
    return SurvivalPartition(frozenset(long_s), frozenset(short_d), frozenset(rest))


def coexisting_mutation_sets(
    profiles: list[MutationProfile], k_percent
) -> list[CoexistenceSet]:
    """Maximal mutation sets carried simultaneously by >= k% of patients.

    Level-wise enumeration over tidsets with support-based pruning
    (anti-monotonicity), then an inclusion-maximality filter.
    """
    k = Fraction(k_percent)
    if not 0 < k <= 100:
        raise errors.InvalidPercent(f"k_percent {k_percent} outside (0, 100]")
    n = len(profiles)
    if n == 0:
        return []
    by_pid = {p.patient_id: p.mutations for p in profiles}

    # Smallest patient count whose percentage reaches k.
    min_count = -(-(k * n) // 100)  # ceil(k*n/100)

    tidsets: dict[frozenset, frozenset[str]] = {}
    for pid, items in by_pid.items():
        for item in items:
            key = frozenset([item])
            tidsets[key] = tidsets.get(key, frozenset()) | {pid}
    level = {s: t for s, t in tidsets.items() if len(t) >= min_count}
    frequent: dict[frozenset, frozenset[str]] = dict(level)
    while level:
        nxt: dict[frozenset, frozenset[str]] = {}
        keys = sorted(level, key=lambda s: sorted(item_id(i) for i in s))
        for i, s1 in enumerate(keys):
            for s2 in keys[i + 1 :]:
                union = s1 | s2
                if len(union) != len(s1) + 1 or union in nxt:
                    continue
                # Anti-monotone prune: every subset one smaller must be frequent.
                if any(union - {it} not in level for it in union):
                    continue
                supp = level[s1] & level[s2]
                if len(supp) >= min_count:
                    nxt[union] = supp
        frequent.update(nxt)
        level = nxt

    maximal = [
        s for s in frequent
        if not any(s < other for other in frequent)
    ]
    out = [
        CoexistenceSet(
            mutations=s,
            support_percent=Fraction(100 * len(frequent[s]), n),
            supporting_patients=frequent[s],
        )
        for s in maximal
    ]
    out.sort(key=lambda c: (-c.support_percent, sorted(item_id(i) for i in c.mutations)))
    return out


def frequency_table(
    profiles: list[MutationProfile],
    mode: FrequencyMode = FrequencyMode.MUTATION,
    top_n: int | None = 10,
    population: str = "all",
) -> FrequencyTable:
    """Most frequent mutations or genes with exact percentages.

    mutation: per-mutation occurrences over total occurrences.
    gene_with_multiplicity: per-gene occurrences (every mutation instance
    counted) over total occurrences.
    gene_without_multiplicity: patients with >= 1 mutation on the gene over
    the patient count.
    """
    if not profiles:
        raise errors.EmptyPopulation("no profiles")
    counts: dict[str, int] = {}
    if mode is FrequencyMode.GENE_WITHOUT_MULTIPLICITY:
        denominator = len(profiles)
        for p in profiles:
            for gene in {_gene_of(item) for item in p.mutations}:
                counts[gene] = counts.get(gene, 0) + 1
    else:
        denominator = sum(len(p.mutations) for p in profiles)
        if denominator == 0:
            raise errors.EmptyPopulation("profiles carry no mutations")
        for p in profiles:
            for item in p.mutations:
                key = item_id(item) if mode is FrequencyMode.MUTATION else _gene_of(item)
                counts[key] = counts.get(key, 0) + 1
    rows = sorted(
        ((name, Fraction(100 * c, denominator)) for name, c in counts.items()),
        key=lambda r: (-r[1], r[0]),
    )
    if top_n is not None:
        rows = rows[:top_n]
    return FrequencyTable(mode=mode, population=population, rows=tuple(rows))


def _gene_of(item) -> str:
    return downgrade_to_gene(item) if isinstance(item, MutationKey) else str(item)


@dataclass(frozen=True)
class CoMutationRow:
    gene: str
    pct_patients: Fraction
    pct_living: Fraction
    pct_deceased: Fraction


def co_mutation_survival_table(
    graph: KnowledgeGraph,
    gene_pair: tuple[str, str],
    top_n: int | None = 10,
) -> list[CoMutationRow]:
    """Survival breakdown of genes mutated alongside a fixed gene pair.

    Restricted to patients carrying at least one mutation on EACH gene of
    the pair; for every gene mutated in that sub-population, reports the
    percentage of carriers and, among carriers, the living/deceased split.
    """
    for gene in gene_pair:
        if not graph.mutations_of_gene(gene):
            raise errors.UnknownGene(gene)
    gene_sets: dict[str, set[str]] = {}
    for pid in graph.patients:
        genes = {downgrade_to_gene(m) for m in graph.mutations_of_patient(pid)}
        gene_sets[pid] = genes
    cohort = sorted(
        pid for pid, genes in gene_sets.items()
        if gene_pair[0] in genes and gene_pair[1] in genes
    )
    if not cohort:
        raise errors.EmptyPopulation(
            f"no patient has both {gene_pair[0]} and {gene_pair[1]} mutated"
        )
    carriers: dict[str, list[str]] = {}
    for pid in cohort:
        for gene in gene_sets[pid]:
            carriers.setdefault(gene, []).append(pid)
    rows = []
    for gene in carriers:
        pids = carriers[gene]
        living = sum(1 for pid in pids if graph.patient(pid).alive)
        rows.append(
            CoMutationRow(
                gene=gene,
                pct_patients=Fraction(100 * len(pids), len(cohort)),
                pct_living=Fraction(100 * living, len(pids)),
                pct_deceased=Fraction(100 * (len(pids) - living), len(pids)),
            )
        )
    rows.sort(key=lambda r: (-r.pct_patients, r.gene))
    if top_n is not None:
        rows = rows[:top_n]
    return rows
