"""Tabular ingestion: TSV parsers and graph construction.

Inputs are tab-separated UTF-8 files with '#'-prefixed comment lines and a
header row; logical columns are mapped to header names through a schema
config so exports with different column spellings can be ingested without
editing them. Malformed rows are collected into a report with line numbers,
never silently dropped.
"""

from __future__ import annotations


import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, TextIO

from . import errors
from .graph import (
    DiagnosisEdge,
    DiseaseNode,
    DrugNode,
    Effectiveness,
    GdaAssociation,
    GeneticEdge,
    KnowledgeGraph,
    MutationKey,
    PatientRecord,
    TargetEdge,
    TreatmentEdge,
)

# Default logical-column -> header-name mappings.
MUTATION_COLUMNS = {
    "sample_id": "sample_id",
    "gene": "gene",
    "chromosome": "chromosome",
    "start": "start_position",
    "end": "end_position",
    "vaf": "vaf",  # optional
}
CLINICAL_COLUMNS = {
    "sample_id": "sample_id",
    "cancer_type": "cancer_type",
    "os_months": "os_months",
    "os_status": "os_status",
}
GDA_COLUMNS = {"gene": "gene", "disease": "disease", "gda_score": "gda_score"}
DRUG_COLUMNS = {
    "drug_id": "drug",
    "gene": "gene",
    "weight": "weight",  # optional
    "adverse_effects": "adverse_effects",  # optional
}
TREATMENT_COLUMNS = {
    "sample_id": "sample_id",
    "drug_id": "drug_id",
    "order": "order",
    "effectiveness": "effectiveness",
}

_OPTIONAL = {
    "mutation": {"vaf"},
    "clinical": set(),
    "gda": set(),
    "drug": {"weight", "adverse_effects"},
    "treatment": set(),
}

_VAF_SENTINELS = {"", "na", "nan", "n/a", "unknown", "."}


@dataclass(frozen=True)
class ReportEntry:
    file: str
    line: int
    severity: str  # "error" | "warning" | "info"
    message: str


@dataclass(frozen=True)
class MutationTableRow:
    sample_id: str
    gene: str
    chromosome: str
    start: int
    end: int
    vaf: float | None = None


@dataclass(frozen=True)
class ClinicalTableRow:
    sample_id: str
    cancer_type: str
    overall_survival_months: float
    vital_status: str  # "living" | "deceased"


@dataclass(frozen=True)
class GdaTableRow:
    gene: str
    disease: str
    gda_score: float


@dataclass(frozen=True)
class DrugTargetTableRow:
    drug_id: str
    gene: str
    toxicity_weight: Fraction | None = None
    adverse_effects: str | None = None


@dataclass(frozen=True)
class TreatmentTableRow:
    sample_id: str
    drug_id: str
    order: int
    effectiveness: Effectiveness


@dataclass
class ParseResult:
    rows: list
    issues: list[ReportEntry] = field(default_factory=list)
    data_lines: int = 0


def _open(source) -> tuple[TextIO, str]:
    if hasattr(source, "read"):
        return source, getattr(source, "name", "<stream>")
    return open(source, "r", encoding="utf-8"), str(source)


def _parse_table(source, columns: Mapping[str, str], kind: str, row_fn) -> ParseResult:
    """Shared TSV scaffolding: comments, header mapping, per-row conversion.

    ``row_fn(values: dict[str, str | None]) -> row`` raises ValueError with a
    message for malformed rows.
    """
    stream, name = _open(source)
    close = not hasattr(source, "read")
    result = ParseResult(rows=[])
    optional = _OPTIONAL[kind]
    try:
        header: list[str] | None = None
        index: dict[str, int] = {}
        for lineno, raw in enumerate(stream, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if header is None:
                header = [h.strip() for h in fields]
                for logical, colname in columns.items():
                    if colname in header:
                        index[logical] = header.index(colname)
                    elif logical not in optional:
                        raise errors.MissingColumn(
                            f"{name}: header lacks column '{colname}' ({logical})"
                        )
                continue
            result.data_lines += 1
            values: dict[str, str | None] = {}
            missing = [
                logical
                for logical, i in index.items()
                if logical not in optional and (i >= len(fields) or not fields[i].strip())
            ]
            if missing:
                result.issues.append(
                    ReportEntry(
                        name, lineno, "error", f"missing required field(s): {', '.join(missing)}"
                    )
                )
                continue
            for logical, i in index.items():
                values[logical] = fields[i].strip() if i < len(fields) else None
            try:
                result.rows.append(row_fn(values))
            except ValueError as exc:
                result.issues.append(ReportEntry(name, lineno, "error", str(exc)))
    finally:
        if close:
            stream.close()
    return result


def _parse_vaf(text: str | None) -> float | None:
    if text is None or text.lower() in _VAF_SENTINELS:
        return None
    try:
        vaf = float(text)
    except ValueError:
        raise ValueError(f"non-numeric vaf '{text}'") from None
    if not 0.0 <= vaf <= 1.0:
        raise ValueError(f"vaf {vaf} outside [0, 1]")
    return vaf


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"non-integer {what} '{text}'") from None


def parse_mutation_table(source, columns: Mapping[str, str] | None = None) -> ParseResult:
    def row_fn(v):
        start = _parse_int(v["start"], "start_position")
        end = _parse_int(v["end"], "end_position")
        if start < 0 or start > end:
            raise ValueError(f"bad locus range {start}..{end}")
        return MutationTableRow(
            sample_id=v["sample_id"],
            gene=v["gene"],
            chromosome=v["chromosome"],
            start=start,
            end=end,
            vaf=_parse_vaf(v.get("vaf")),
        )

    return _parse_table(source, columns or MUTATION_COLUMNS, "mutation", row_fn)


_LIVING = {"living", "alive", "0:living"}
_DECEASED = {"deceased", "dead", "1:deceased"}


def parse_clinical_table(source, columns: Mapping[str, str] | None = None) -> ParseResult:
    def row_fn(v):
        try:
            months = float(v["os_months"])
        except ValueError:
            raise ValueError(f"non-numeric os_months '{v['os_months']}'") from None
        if months < 0:
            raise ValueError(f"negative os_months {months}")
        status = v["os_status"].lower()
        if status in _LIVING:
            status = "living"
        elif status in _DECEASED:
            status = "deceased"
        else:
            raise ValueError(f"unrecognized os_status '{v['os_status']}'")
        return ClinicalTableRow(
            sample_id=v["sample_id"],
            cancer_type=v["cancer_type"].strip(),
            overall_survival_months=months,
            vital_status=status,
        )

    return _parse_table(source, columns or CLINICAL_COLUMNS, "clinical", row_fn)


def parse_gda_table(source, columns: Mapping[str, str] | None = None) -> ParseResult:
    def row_fn(v):
        try:
            score = float(v["gda_score"])
        except ValueError:
            raise ValueError(f"non-numeric gda_score '{v['gda_score']}'") from None
        if not 0.0 <= score <= 1.0:
            raise ValueError(f"gda_score {score} outside [0, 1]")
        return GdaTableRow(gene=v["gene"], disease=v["disease"].strip(), gda_score=score)

    return _parse_table(source, columns or GDA_COLUMNS, "gda", row_fn)


def parse_drug_target_table(source, columns: Mapping[str, str] | None = None) -> ParseResult:
    def row_fn(v):
        weight = None
        wtext = v.get("weight")
        if wtext not in (None, ""):
            try:
                weight = Fraction(wtext)
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"non-numeric weight '{wtext}'") from None
            if weight < 0:
                raise ValueError(f"negative weight {wtext}")
        return DrugTargetTableRow(
            drug_id=v["drug_id"],
            gene=v["gene"],
            toxicity_weight=weight,
            adverse_effects=v.get("adverse_effects") or None,
        )

    return _parse_table(source, columns or DRUG_COLUMNS, "drug", row_fn)


def parse_treatment_table(source, columns: Mapping[str, str] | None = None) -> ParseResult:
    codes = {e.value: e for e in Effectiveness}

    def row_fn(v):
        order = _parse_int(v["order"], "order")
        if order < 0:
            raise ValueError(f"negative order {order}")
        eff = codes.get(v["effectiveness"].lower())
        if eff is None:
            raise ValueError(f"unrecognized effectiveness '{v['effectiveness']}'")
        return TreatmentTableRow(
            sample_id=v["sample_id"], drug_id=v["drug_id"], order=order, effectiveness=eff
        )

    return _parse_table(source, columns or TREATMENT_COLUMNS, "treatment", row_fn)


def build_graph(
    mutation_rows: Iterable[MutationTableRow],
    clinical_rows: Iterable[ClinicalTableRow],
    gda_rows: Iterable[GdaTableRow],
    drug_rows: Iterable[DrugTargetTableRow],
    treatment_rows: Iterable[TreatmentTableRow] | None = None,
    expand_gene_associations: bool = True,
) -> tuple[KnowledgeGraph, list[ReportEntry]]:
    """Assemble a validated knowledge graph from parsed rows.

    Clinical rows become patients and diagnosis edges (disease nodes are
    auto-created from the verbatim cancer type). Mutation rows matched to a
    known patient become mutation nodes plus green edges; duplicates of the
    same (patient, mutation) pair collapse keeping the maximum VAF; rows for
    unknown samples are reported as orphans. Gene-level association and drug
    target rows fan out to every mutation node on the matching gene.
    """
    graph = KnowledgeGraph()
    report: list[ReportEntry] = []

    def note(severity: str, message: str) -> None:
        report.append(ReportEntry("build", 0, severity, message))

    for row in sorted(clinical_rows, key=lambda r: r.sample_id):
        if row.sample_id in graph.patients:
            note("warning", f"duplicate clinical row for {row.sample_id}; first kept")
            continue
        graph.add_node(
            PatientRecord(
                patient_id=row.sample_id,
                survival_months=math.floor(row.overall_survival_months),
                alive=row.vital_status == "living",
            )
        )
        if row.cancer_type not in graph.diseases:
            graph.add_node(DiseaseNode(row.cancer_type, row.cancer_type))
        graph.add_edge(DiagnosisEdge(row.cancer_type, row.sample_id))

    # Collapse duplicate (patient, mutation) rows keeping the max VAF
    # (None sorts below any number).
    best: dict[tuple[str, MutationKey], float | None] = {}
    orphans = 0
    for row in mutation_rows:
        if row.sample_id not in graph.patients:
            orphans += 1
            note("warning", f"orphan mutation row: unknown sample {row.sample_id}")
            continue
        key = (row.sample_id, MutationKey(row.gene, row.chromosome, row.start, row.end))
        if key in best:
            note(
                "info",
                f"duplicate mutation row for {row.sample_id}/{key[1].display()}; max VAF kept",
            )
            prev = best[key]
            if prev is None or (row.vaf is not None and row.vaf > prev):
                best[key] = row.vaf
        else:
            best[key] = row.vaf
    for (sample_id, mutation), vaf in sorted(
        best.items(), key=lambda kv: (kv[0][0], kv[0][1])
    ):
        if mutation not in graph.mutations:
            graph.add_node(mutation)
        graph.add_edge(GeneticEdge(sample_id, mutation, vaf))

    gda_best: dict[tuple[str, str], float] = {}
    for row in gda_rows:
        key = (row.disease, row.gene)
        if key in gda_best:
            note("warning", f"duplicate gda row {row.gene}/{row.disease}; max score kept")
            gda_best[key] = max(gda_best[key], row.gda_score)
        else:
            gda_best[key] = row.gda_score
    for (disease, gene), score in sorted(gda_best.items()):
        if disease not in graph.diseases:
            graph.add_node(DiseaseNode(disease, disease))
        if not expand_gene_associations:
            note("info", f"gene association {gene}/{disease} not expanded (flag off)")
            continue
        matches = graph.mutations_of_gene(gene)
        if not matches:
            note("info", f"gda row {gene}/{disease}: no mutation node on gene {gene}")
            continue
        for mutation in sorted(matches):
            graph.add_edge(GdaAssociation(disease, mutation, score))

    drug_specs: dict[str, DrugTargetTableRow] = {}
    drug_genes: dict[str, list[str]] = {}
    for row in drug_rows:
        if row.drug_id in drug_specs:
            prev = drug_specs[row.drug_id]
            if row.toxicity_weight is not None and row.toxicity_weight != (
                prev.toxicity_weight
            ):
                note(
                    "warning",
                    f"conflicting weight for drug {row.drug_id}; first kept",
                )
        else:
            drug_specs[row.drug_id] = row
        drug_genes.setdefault(row.drug_id, []).append(row.gene)
    for drug_id in sorted(drug_specs):
        spec = drug_specs[drug_id]
        graph.add_node(
            DrugNode(
                drug_id=drug_id,
                adverse_effects=spec.adverse_effects,
                toxicity_weight=(
                    spec.toxicity_weight if spec.toxicity_weight is not None else Fraction(1)
                ),
            )
        )
        if not expand_gene_associations:
            continue
        targeted = set()
        for gene in drug_genes[drug_id]:
            matches = graph.mutations_of_gene(gene)
            if not matches:
                note("info", f"drug row {drug_id}/{gene}: no mutation node on gene {gene}")
            targeted |= matches
        for mutation in sorted(targeted):
            graph.add_edge(TargetEdge(mutation, drug_id))

    if treatment_rows:
        for row in sorted(
            treatment_rows, key=lambda r: (r.sample_id, r.order, r.drug_id)
        ):
            if row.sample_id not in graph.patients:
                note("warning", f"treatment row for unknown sample {row.sample_id}")
                continue
            if row.drug_id not in graph.drugs:
                note("warning", f"treatment row for unknown drug {row.drug_id}")
                continue
            graph.add_edge(
                TreatmentEdge(row.sample_id, row.drug_id, row.order, row.effectiveness)
            )

    if orphans:
        note("warning", f"{orphans} orphan mutation row(s) excluded")
    return graph, report


def write_report(entries: Iterable[ReportEntry], stream: TextIO) -> None:
    """Serialize a build/parse report as TSV (file, line, severity, message)."""
    stream.write("file\tline\tseverity\tmessage\n")
    for e in entries:
        stream.write(f"{e.file}\t{e.line}\t{e.severity}\t{e.message}\n")
