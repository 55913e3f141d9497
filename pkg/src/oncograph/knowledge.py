"""Knowledge-vs-evidence consistency checking per disease.

For a disease d the data evidence is the union and intersection of the
mutation sets of its diagnosed patients; the curated knowledge is the set
of mutations associated with d above a score threshold. Comparing the
intersection against the knowledge set classifies the disease into one of
four consistency statuses.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import errors
from .graph import KnowledgeGraph, MutationKey, downgrade_to_gene

DEFAULT_GDA_THRESHOLD = 0.8


class Granularity(enum.Enum):
    MUTATION = "mutation"
    GENE = "gene"


class ConsistencyStatus(enum.Enum):
    PERFECT_MATCH = "perfect_match"
    INCOMPLETE_KNOWLEDGE = "incomplete_knowledge"
    INCONSISTENT_EVIDENCE = "inconsistent_evidence"
    COMBINATION = "combination"


@dataclass(frozen=True)
class DiseaseEvidence:
    disease_id: str
    patients: frozenset[str]
    union_mutations: frozenset
    common_mutations: frozenset
    known_mutations: frozenset
    gda_threshold: float
    granularity: Granularity


@dataclass(frozen=True)
class ConsistencyVerdict:
    status: ConsistencyStatus
    missing_from_knowledge: frozenset  # in common evidence but not known
    unsupported_knowledge: frozenset   # known but not common in evidence
    coverage_violations: frozenset     # known but absent even from the union


def patients_of(graph: KnowledgeGraph, disease_id: str) -> set[str]:
    """Patients diagnosed with the disease (red neighborhood in Pa)."""
    return graph.patients_of_disease(disease_id)


def mutation_union(graph: KnowledgeGraph, disease_id: str) -> set[MutationKey]:
    """Mutations affecting at least one diagnosed patient; empty cohort -> empty."""
    out: set[MutationKey] = set()
    for pid in graph.patients_of_disease(disease_id):
        out |= graph.mutations_of_patient(pid)
    return out


def mutation_intersection(graph: KnowledgeGraph, disease_id: str) -> set[MutationKey]:
    """Mutations affecting every diagnosed patient; empty cohort -> empty."""
    cohort = graph.patients_of_disease(disease_id)
    common: set[MutationKey] | None = None
    for pid in cohort:
        muts = graph.mutations_of_patient(pid)
        common = muts if common is None else common & muts
        if not common:
            break
    return common or set()


def known_mutations(
    graph: KnowledgeGraph, disease_id: str, gda_threshold: float = DEFAULT_GDA_THRESHOLD
) -> set[MutationKey]:
    """Mutations associated with the disease at score >= threshold."""
    if not 0.0 <= gda_threshold <= 1.0:
        raise errors.InvalidLabel(f"gda_threshold {gda_threshold} outside [0, 1]")
    return {
        m for m, s in graph.gda_scores(disease_id).items() if s >= gda_threshold
    }


def classify(missing: frozenset, unsupported: frozenset) -> ConsistencyStatus:
    """Status as a pure function of the two difference sets."""
    if missing and unsupported:
        return ConsistencyStatus.COMBINATION
    if missing:
        return ConsistencyStatus.INCOMPLETE_KNOWLEDGE
    if unsupported:
        return ConsistencyStatus.INCONSISTENT_EVIDENCE
    return ConsistencyStatus.PERFECT_MATCH


def check_consistency(
    graph: KnowledgeGraph,
    disease_id: str,
    gda_threshold: float = DEFAULT_GDA_THRESHOLD,
    granularity: Granularity = Granularity.GENE,
) -> tuple[DiseaseEvidence, ConsistencyVerdict]:
    """Compare curated knowledge against evidence for one disease.

    At gene granularity every patient profile and the knowledge set are
    downgraded to gene symbols before the union/intersection is taken
    (curated sources record genes, not loci), so two patients carrying
    different mutations of the same gene still share that gene.
    """
    cohort = frozenset(graph.patients_of_disease(disease_id))
    known = known_mutations(graph, disease_id, gda_threshold)
    if granularity is Granularity.GENE:
        profiles = [
            {downgrade_to_gene(m) for m in graph.mutations_of_patient(pid)}
            for pid in cohort
        ]
        known = {downgrade_to_gene(m) for m in known}
    else:
        profiles = [graph.mutations_of_patient(pid) for pid in cohort]
    union: set = set()
    common: set = set()
    for i, items in enumerate(profiles):
        union |= items
        common = set(items) if i == 0 else common & items
    evidence = DiseaseEvidence(
        disease_id=disease_id,
        patients=cohort,
        union_mutations=frozenset(union),
        common_mutations=frozenset(common),
        known_mutations=frozenset(known),
        gda_threshold=gda_threshold,
        granularity=granularity,
    )
    missing = frozenset(common - known)
    unsupported = frozenset(known - common)
    verdict = ConsistencyVerdict(
        status=classify(missing, unsupported),
        missing_from_knowledge=missing,
        unsupported_knowledge=unsupported,
        coverage_violations=frozenset(known - union),
    )
    return evidence, verdict
