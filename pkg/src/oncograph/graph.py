"""In-memory 4-partite medical knowledge graph.

Node partitions: patients, gene mutations, diseases, drugs. Three colored
edge sets join them: green (patient-mutation, labeled with VAF), red
(disease-patient diagnoses and patient-drug treatments), magenta
(disease-mutation associations scored in [0,1] and mutation-drug targets).
No edge joins two nodes of the same partition and the colored sets are
pairwise disjoint; ``validate`` reports every violation of these rules.

The build phase is single-writer; once constructed, all queries are pure
reads and safe for concurrent use.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from . import errors


class Partition(enum.Enum):
    PATIENT = "patient"
    MUTATION = "mutation"
    DISEASE = "disease"
    DRUG = "drug"


class EdgeColor(enum.Enum):
    GREEN = "green"
    RED = "red"
    MAGENTA = "magenta"


class Effectiveness(enum.Enum):
    """Outcome label on a treatment edge."""

    POSITIVE = "p"
    UNALTERED = "u"
    REDUCED = "r"
    NEGATIVE = "n"


@dataclass(frozen=True)
class PatientRecord:
    """A pseudonymized patient with survival period in whole months."""

    patient_id: str
    survival_months: int
    alive: bool


@dataclass(frozen=True, order=True)
class MutationKey:
    """Structured identity of a gene mutation.

    The underscore-joined form (e.g. ``KRAS_12_25398284_25398284``) is a
    rendering only; identity is the 4-field tuple.
    """

    gene: str
    chromosome: str
    start: int
    end: int

    def display(self) -> str:
        return f"{self.gene}_{self.chromosome}_{self.start}_{self.end}"


@dataclass(frozen=True)
class DiseaseNode:
    disease_id: str
    display_name: str = ""


@dataclass(frozen=True)
class DrugNode:
    drug_id: str
    adverse_effects: str | None = None
    toxicity_weight: Fraction = Fraction(1)


@dataclass(frozen=True)
class GeneticEdge:
    """Green patient-mutation edge; vaf is None when the export lacked it."""

    patient_id: str
    mutation: MutationKey
    vaf: float | None = None


@dataclass(frozen=True)
class DiagnosisEdge:
    disease_id: str
    patient_id: str


@dataclass(frozen=True)
class TreatmentEdge:
    """Red patient-drug edge; drugs in a cocktail share the same order."""

    patient_id: str
    drug_id: str
    order: int
    effectiveness: Effectiveness


@dataclass(frozen=True)
class GdaAssociation:
    disease_id: str
    mutation: MutationKey
    gda_score: float


@dataclass(frozen=True)
class TargetEdge:
    mutation: MutationKey
    drug_id: str


Edge = GeneticEdge | DiagnosisEdge | TreatmentEdge | GdaAssociation | TargetEdge

# A node reference is (partition, key); keys are patient/disease/drug id
# strings or MutationKey instances.
NodeRef = tuple[Partition, object]


@dataclass(frozen=True)
class Violation:
    category: str
    message: str


# Violation categories emitted by validate().
PARTITION_VIOLATION = "partition_violation"
DANGLING_ENDPOINT = "dangling_endpoint"
LABEL_OUT_OF_RANGE = "label_out_of_range"
DUPLICATE_EDGE = "duplicate_edge"
EDGE_SET_OVERLAP = "edge_set_overlap"
NODE_INVARIANT = "node_invariant"


@dataclass
class _EdgeRecord:
    """Raw stored edge: declared endpoint refs plus the typed edge object.

    Kept as plain mutable records so validate() can detect forged or
    corrupted entries that bypassed add_edge.
    """

    a: NodeRef
    b: NodeRef
    edge: Edge


# Allowed (ordered) partition pairs per color.
_ALLOWED_PAIRS = {
    EdgeColor.GREEN: {(Partition.PATIENT, Partition.MUTATION)},
    EdgeColor.RED: {
        (Partition.DISEASE, Partition.PATIENT),
        (Partition.PATIENT, Partition.DRUG),
    },
    EdgeColor.MAGENTA: {
        (Partition.DISEASE, Partition.MUTATION),
        (Partition.MUTATION, Partition.DRUG),
    },
}

# Edge types for which at most one edge per endpoint pair may exist.
_PAIRWISE_UNIQUE = (GeneticEdge, DiagnosisEdge, GdaAssociation, TargetEdge)


class KnowledgeGraph:
    """The union graph H over the four partitions and three edge colors."""

    def __init__(self) -> None:
        self._patients: dict[str, PatientRecord] = {}
        self._mutations: dict[MutationKey, MutationKey] = {}
        self._diseases: dict[str, DiseaseNode] = {}
        self._drugs: dict[str, DrugNode] = {}
        self._by_gene: dict[str, set[MutationKey]] = {}
        self._records: dict[EdgeColor, list[_EdgeRecord]] = {
            c: [] for c in EdgeColor
        }
        self._adj: dict[EdgeColor, dict[NodeRef, set[NodeRef]]] = {
            c: {} for c in EdgeColor
        }
        self._vaf: dict[tuple[str, MutationKey], float | None] = {}
        self._gda: dict[tuple[str, MutationKey], float] = {}

    # ------------------------------------------------------------------
    # Nodes

    def add_node(self, node) -> NodeRef:
        """Insert a node into its partition; raises DuplicateNode on id reuse."""
        if isinstance(node, PatientRecord):
            if node.patient_id in self._patients:
                raise errors.DuplicateNode(f"patient {node.patient_id}")
            if node.survival_months < 0:
                raise errors.InvalidLabel("survival_months must be >= 0")
            self._patients[node.patient_id] = node
            return (Partition.PATIENT, node.patient_id)
        if isinstance(node, MutationKey):
            if node in self._mutations:
                raise errors.DuplicateNode(f"mutation {node.display()}")
            if not node.gene:
                raise errors.InvalidLabel("mutation gene must be non-empty")
            if node.start > node.end:
                raise errors.InvalidLabel("mutation start must be <= end")
            if node.start < 0:
                raise errors.InvalidLabel("mutation locus must be >= 0")
            self._mutations[node] = node
            self._by_gene.setdefault(node.gene, set()).add(node)
            return (Partition.MUTATION, node)
        if isinstance(node, DiseaseNode):
            if node.disease_id in self._diseases:
                raise errors.DuplicateNode(f"disease {node.disease_id}")
            self._diseases[node.disease_id] = node
            return (Partition.DISEASE, node.disease_id)
        if isinstance(node, DrugNode):
            if node.drug_id in self._drugs:
                raise errors.DuplicateNode(f"drug {node.drug_id}")
            if node.toxicity_weight < 0:
                raise errors.InvalidLabel("toxicity_weight must be >= 0")
            self._drugs[node.drug_id] = node
            return (Partition.DRUG, node.drug_id)
        raise TypeError(f"unsupported node type {type(node).__name__}")

    def patient(self, patient_id: str) -> PatientRecord:
        try:
            return self._patients[patient_id]
        except KeyError:
            raise errors.UnknownNode(f"patient {patient_id}") from None

    def disease(self, disease_id: str) -> DiseaseNode:
        try:
            return self._diseases[disease_id]
        except KeyError:
            raise errors.UnknownDisease(disease_id) from None

    def drug(self, drug_id: str) -> DrugNode:
        try:
            return self._drugs[drug_id]
        except KeyError:
            raise errors.UnknownNode(f"drug {drug_id}") from None

    @property
    def patients(self) -> dict[str, PatientRecord]:
        return self._patients

    @property
    def mutations(self) -> set[MutationKey]:
        return set(self._mutations)

    @property
    def diseases(self) -> dict[str, DiseaseNode]:
        return self._diseases

    @property
    def drugs(self) -> dict[str, DrugNode]:
        return self._drugs

    def mutations_of_gene(self, gene: str) -> set[MutationKey]:
        return set(self._by_gene.get(gene, ()))

    def mutation_by_display(self, text: str) -> MutationKey:
        for m in self._mutations:
            if m.display() == text:
                return m
        raise errors.UnknownMutation(text)

    def partition_sizes(self) -> dict[str, int]:
        return {
            "Pa": len(self._patients),
            "Mu": len(self._mutations),
            "Di": len(self._diseases),
            "Dr": len(self._drugs),
        }

    # ------------------------------------------------------------------
    # Edges

    def add_edge(self, edge: Edge) -> Edge:
        """Insert a typed edge into its colored set.

        Raises MissingEndpoint if an endpoint node is absent, InvalidLabel
        for out-of-range labels, DuplicateEdge for pairwise-unique types.
        """
        if isinstance(edge, GeneticEdge):
            self._require_patient(edge.patient_id)
            self._require_mutation(edge.mutation)
            if edge.vaf is not None and not 0.0 <= edge.vaf <= 1.0:
                raise errors.InvalidLabel(f"vaf {edge.vaf} outside [0, 1]")
            key = (edge.patient_id, edge.mutation)
            if key in self._vaf:
                raise errors.DuplicateEdge(
                    f"genetic edge {edge.patient_id}-{edge.mutation.display()}"
                )
            self._vaf[key] = edge.vaf
            self._store(
                EdgeColor.GREEN,
                (Partition.PATIENT, edge.patient_id),
                (Partition.MUTATION, edge.mutation),
                edge,
            )
        elif isinstance(edge, DiagnosisEdge):
            self._require_disease(edge.disease_id)
            self._require_patient(edge.patient_id)
            a = (Partition.DISEASE, edge.disease_id)
            b = (Partition.PATIENT, edge.patient_id)
            if b in self._adj[EdgeColor.RED].get(a, ()):
                raise errors.DuplicateEdge(
                    f"diagnosis {edge.disease_id}-{edge.patient_id}"
                )
            self._store(EdgeColor.RED, a, b, edge)
        elif isinstance(edge, TreatmentEdge):
            self._require_patient(edge.patient_id)
            self._require_drug(edge.drug_id)
            if edge.order < 0:
                raise errors.InvalidLabel("treatment order must be >= 0")
            if not isinstance(edge.effectiveness, Effectiveness):
                raise errors.InvalidLabel(f"effectiveness {edge.effectiveness!r}")
            self._store(
                EdgeColor.RED,
                (Partition.PATIENT, edge.patient_id),
                (Partition.DRUG, edge.drug_id),
                edge,
            )
        elif isinstance(edge, GdaAssociation):
            self._require_disease(edge.disease_id)
            self._require_mutation(edge.mutation)
            if not 0.0 <= edge.gda_score <= 1.0:
                raise errors.InvalidLabel(f"gda_score {edge.gda_score} outside [0, 1]")
            key = (edge.disease_id, edge.mutation)
            if key in self._gda:
                raise errors.DuplicateEdge(
                    f"gda {edge.disease_id}-{edge.mutation.display()}"
                )
            self._gda[key] = edge.gda_score
            self._store(
                EdgeColor.MAGENTA,
                (Partition.DISEASE, edge.disease_id),
                (Partition.MUTATION, edge.mutation),
                edge,
            )
        elif isinstance(edge, TargetEdge):
            self._require_mutation(edge.mutation)
            self._require_drug(edge.drug_id)
            a = (Partition.MUTATION, edge.mutation)
            b = (Partition.DRUG, edge.drug_id)
            if b in self._adj[EdgeColor.MAGENTA].get(a, ()):
                raise errors.DuplicateEdge(
                    f"target {edge.mutation.display()}-{edge.drug_id}"
                )
            self._store(EdgeColor.MAGENTA, a, b, edge)
        else:
            raise TypeError(f"unsupported edge type {type(edge).__name__}")
        return edge

    def _store(self, color: EdgeColor, a: NodeRef, b: NodeRef, edge: Edge) -> None:
        self._records[color].append(_EdgeRecord(a, b, edge))
        self._adj[color].setdefault(a, set()).add(b)
        self._adj[color].setdefault(b, set()).add(a)

    def _require_patient(self, pid: str) -> None:
        if pid not in self._patients:
            raise errors.MissingEndpoint(f"patient {pid}")

    def _require_mutation(self, m: MutationKey) -> None:
        if m not in self._mutations:
            raise errors.MissingEndpoint(f"mutation {m.display()}")

    def _require_disease(self, did: str) -> None:
        if did not in self._diseases:
            raise errors.MissingEndpoint(f"disease {did}")

    def _require_drug(self, did: str) -> None:
        if did not in self._drugs:
            raise errors.MissingEndpoint(f"drug {did}")

    def edge_records(self, color: EdgeColor) -> list[_EdgeRecord]:
        """Raw colored edge records (used by validate and audit code)."""
        return self._records[color]

    def edge_counts(self) -> dict[str, int]:
        return {c.value: len(self._records[c]) for c in EdgeColor}

    # ------------------------------------------------------------------
    # Queries

    def has_node(self, ref: NodeRef) -> bool:
        part, key = ref
        if part is Partition.PATIENT:
            return key in self._patients
        if part is Partition.MUTATION:
            return key in self._mutations
        if part is Partition.DISEASE:
            return key in self._diseases
        if part is Partition.DRUG:
            return key in self._drugs
        return False

    def neighbors(
        self, ref: NodeRef, colors: EdgeColor | tuple[EdgeColor, ...] | None = None
    ) -> set[NodeRef]:
        """Nodes adjacent to ``ref`` via edges of the requested color(s)."""
        if not self.has_node(ref):
            raise errors.UnknownNode(str(ref))
        if colors is None:
            colors = tuple(EdgeColor)
        elif isinstance(colors, EdgeColor):
            colors = (colors,)
        out: set[NodeRef] = set()
        for c in colors:
            out |= self._adj[c].get(ref, set())
        return out

    def mutations_of_patient(self, patient_id: str) -> set[MutationKey]:
        refs = self.neighbors((Partition.PATIENT, patient_id), EdgeColor.GREEN)
        return {key for part, key in refs if part is Partition.MUTATION}

    def patients_with_mutation(self, mutation: MutationKey) -> set[str]:
        if mutation not in self._mutations:
            raise errors.UnknownMutation(mutation.display())
        refs = self.neighbors((Partition.MUTATION, mutation), EdgeColor.GREEN)
        return {key for part, key in refs if part is Partition.PATIENT}

    def patients_of_disease(self, disease_id: str) -> set[str]:
        self.disease(disease_id)
        refs = self.neighbors((Partition.DISEASE, disease_id), EdgeColor.RED)
        return {key for part, key in refs if part is Partition.PATIENT}

    def gda_scores(self, disease_id: str) -> dict[MutationKey, float]:
        """Magenta disease-mutation neighbors of d with their scores."""
        self.disease(disease_id)
        return {
            m: s for (d, m), s in self._gda.items() if d == disease_id
        }

    def target_drugs(self, mutation: MutationKey) -> set[str]:
        """Drugs with a known effect on the mutation (magenta neighbors)."""
        if mutation not in self._mutations:
            raise errors.UnknownMutation(mutation.display())
        refs = self.neighbors((Partition.MUTATION, mutation), EdgeColor.MAGENTA)
        return {key for part, key in refs if part is Partition.DRUG}

    def vaf(self, patient_id: str, mutation: MutationKey) -> float | None:
        return self._vaf[(patient_id, mutation)]


def downgrade_to_gene(mutation: MutationKey) -> str:
    """Project a specific mutation down to its mutated gene symbol."""
    return mutation.gene


def validate(graph: KnowledgeGraph) -> list[Violation]:
    """Check every structural invariant; returns one entry per violation.

    Each edge record yields at most one entry: partition check first, then
    endpoint existence, then label ranges. Duplicate-pair and cross-color
    overlap checks run over structurally sound records only.
    """
    out: list[Violation] = []

    for p in graph._patients.values():
        if p.survival_months < 0:
            out.append(
                Violation(NODE_INVARIANT, f"patient {p.patient_id}: negative survival")
            )
    for m in graph._mutations:
        if not m.gene:
            out.append(Violation(NODE_INVARIANT, f"mutation {m}: empty gene"))
        elif m.start > m.end or m.start < 0:
            out.append(
                Violation(NODE_INVARIANT, f"mutation {m.display()}: bad locus range")
            )
    for dr in graph._drugs.values():
        if dr.toxicity_weight < 0:
            out.append(
                Violation(NODE_INVARIANT, f"drug {dr.drug_id}: negative weight")
            )

    sound: list[tuple[EdgeColor, _EdgeRecord]] = []
    for color in EdgeColor:
        for rec in graph.edge_records(color):
            pa, pb = rec.a[0], rec.b[0]
            if pa == pb:
                out.append(
                    Violation(
                        PARTITION_VIOLATION,
                        f"{color.value} edge joins two {pa.value} nodes",
                    )
                )
                continue
            if (pa, pb) not in _ALLOWED_PAIRS[color] and (pb, pa) not in _ALLOWED_PAIRS[
                color
            ]:
                out.append(
                    Violation(
                        PARTITION_VIOLATION,
                        f"{color.value} edge joins {pa.value} and {pb.value}",
                    )
                )
                continue
            if not graph.has_node(rec.a) or not graph.has_node(rec.b):
                out.append(
                    Violation(
                        DANGLING_ENDPOINT,
                        f"{color.value} edge references a missing node",
                    )
                )
                continue
            label_issue = _label_issue(rec.edge)
            if label_issue:
                out.append(Violation(LABEL_OUT_OF_RANGE, label_issue))
                continue
            sound.append((color, rec))

    seen_pairs: dict[frozenset, EdgeColor] = {}
    for color, rec in sound:
        pair = frozenset((rec.a, rec.b))
        prev = seen_pairs.get(pair)
        if prev is None:
            seen_pairs[pair] = color
        elif prev != color:
            out.append(
                Violation(
                    EDGE_SET_OVERLAP,
                    f"pair {_pair_text(rec)} appears in both {prev.value} and {color.value}",
                )
            )
        elif isinstance(rec.edge, _PAIRWISE_UNIQUE):
            out.append(
                Violation(DUPLICATE_EDGE, f"duplicate {color.value} edge {_pair_text(rec)}")
            )
    return out


def _pair_text(rec: _EdgeRecord) -> str:
    def fmt(ref: NodeRef) -> str:
        key = ref[1]
        return key.display() if isinstance(key, MutationKey) else str(key)

    return f"{fmt(rec.a)}-{fmt(rec.b)}"


def _label_issue(edge: Edge) -> str | None:
    if isinstance(edge, GeneticEdge):
        if edge.vaf is not None and not 0.0 <= edge.vaf <= 1.0:
            return f"vaf {edge.vaf} outside [0, 1]"
    elif isinstance(edge, GdaAssociation):
        if not 0.0 <= edge.gda_score <= 1.0:
            return f"gda_score {edge.gda_score} outside [0, 1]"
    elif isinstance(edge, TreatmentEdge):
        if edge.order < 0:
            return "treatment order < 0"
        if not isinstance(edge.effectiveness, Effectiveness):
            return f"bad effectiveness {edge.effectiveness!r}"
    return None
