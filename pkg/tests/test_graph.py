import random

import pytest

from oncograph import (
    DiagnosisEdge,
    DiseaseNode,
    DrugNode,
    EdgeColor,
    GdaAssociation,
    GeneticEdge,
    KnowledgeGraph,
    MutationKey,
    Partition,
    PatientRecord,
    TargetEdge,
    downgrade_to_gene,
    errors,
    validate,
)
from oncograph.graph import PARTITION_VIOLATION, LABEL_OUT_OF_RANGE, _EdgeRecord

from conftest import random_graph

KRAS_MUT = MutationKey("KRAS", "12", 25398284, 25398284)
TERT_MUT = MutationKey("TERT", "5", 1295228, 1295228)


def small_graph():
    g = KnowledgeGraph()
    g.add_node(PatientRecord("P1", 40, True))
    g.add_node(PatientRecord("P2", 10, False))
    g.add_node(PatientRecord("P3", 5, False))
    g.add_node(KRAS_MUT)
    g.add_node(TERT_MUT)
    g.add_node(DiseaseNode("D1", "disease one"))
    g.add_node(DrugNode("drugA"))
    return g


class TestAddNode:
    def test_single_insert(self):
        g = KnowledgeGraph()
        g.add_node(PatientRecord("P1", 40, True))
        assert g.partition_sizes()["Pa"] == 1

    def test_duplicate_patient_rejected(self):
        g = KnowledgeGraph()
        g.add_node(PatientRecord("P1", 40, True))
        with pytest.raises(errors.DuplicateNode):
            g.add_node(PatientRecord("P1", 12, False))

    def test_partition_sizes(self):
        g = small_graph()
        assert g.partition_sizes() == {"Pa": 3, "Mu": 2, "Di": 1, "Dr": 1}

    def test_bad_mutation_locus(self):
        g = KnowledgeGraph()
        with pytest.raises(errors.InvalidLabel):
            g.add_node(MutationKey("KRAS", "12", 10, 5))


class TestAddEdge:
    def test_valid_genetic_edge(self):
        g = small_graph()
        g.add_edge(GeneticEdge("P1", KRAS_MUT, 0.3))
        assert g.mutations_of_patient("P1") == {KRAS_MUT}

    def test_vaf_out_of_range(self):
        g = small_graph()
        with pytest.raises(errors.InvalidLabel):
            g.add_edge(GeneticEdge("P1", KRAS_MUT, 1.5))

    def test_unknown_disease_endpoint(self):
        g = small_graph()
        with pytest.raises(errors.MissingEndpoint):
            g.add_edge(DiagnosisEdge("NOPE", "P1"))

    def test_duplicate_genetic_edge(self):
        g = small_graph()
        g.add_edge(GeneticEdge("P1", KRAS_MUT, 0.3))
        with pytest.raises(errors.DuplicateEdge):
            g.add_edge(GeneticEdge("P1", KRAS_MUT, 0.4))


class TestNeighbors:
    def test_empty_neighborhood(self):
        g = small_graph()
        assert g.neighbors((Partition.DISEASE, "D1"), EdgeColor.RED) == set()

    def test_diagnosis_fixture(self):
        g = small_graph()
        g.add_node(DiseaseNode("D2", "disease two"))
        g.add_edge(DiagnosisEdge("D1", "P1"))
        g.add_edge(DiagnosisEdge("D1", "P2"))
        g.add_edge(DiagnosisEdge("D2", "P3"))
        assert g.patients_of_disease("D1") == {"P1", "P2"}

    def test_target_drugs_is_magenta_drug_neighborhood(self):
        g = small_graph()
        g.add_node(DrugNode("drugB"))
        g.add_edge(TargetEdge(KRAS_MUT, "drugA"))
        g.add_edge(TargetEdge(KRAS_MUT, "drugB"))
        assert g.target_drugs(KRAS_MUT) == {"drugA", "drugB"}

    def test_unknown_node(self):
        g = small_graph()
        with pytest.raises(errors.UnknownNode):
            g.neighbors((Partition.PATIENT, "NOPE"))

    def test_symmetry(self):
        rng = random.Random(7)
        for _ in range(20):
            g = random_graph(rng, max_nodes=24)
            for color in EdgeColor:
                for rec in g.edge_records(color):
                    assert rec.b in g.neighbors(rec.a, color)
                    assert rec.a in g.neighbors(rec.b, color)


class TestValidate:
    def test_well_formed_fixture(self):
        g = small_graph()
        g.add_edge(GeneticEdge("P1", KRAS_MUT, 0.3))
        g.add_edge(DiagnosisEdge("D1", "P1"))
        assert validate(g) == []

    def test_forged_same_partition_edge(self):
        g = small_graph()
        g.edge_records(EdgeColor.GREEN).append(
            _EdgeRecord(
                (Partition.PATIENT, "P1"),
                (Partition.PATIENT, "P2"),
                GeneticEdge("P1", KRAS_MUT, 0.3),
            )
        )
        report = validate(g)
        assert len(report) == 1
        assert report[0].category == PARTITION_VIOLATION

    def test_gda_score_injected_out_of_range(self):
        g = small_graph()
        g.edge_records(EdgeColor.MAGENTA).append(
            _EdgeRecord(
                (Partition.DISEASE, "D1"),
                (Partition.MUTATION, KRAS_MUT),
                GdaAssociation("D1", KRAS_MUT, 1.2),
            )
        )
        report = validate(g)
        assert len(report) == 1
        assert report[0].category == LABEL_OUT_OF_RANGE

    def test_randomized_construction_always_clean(self):
        rng = random.Random(11)
        for _ in range(25):
            assert validate(random_graph(rng, max_nodes=30)) == []


class TestDowngrade:
    def test_kras(self):
        assert downgrade_to_gene(KRAS_MUT) == "KRAS"

    def test_tert(self):
        assert downgrade_to_gene(TERT_MUT) == "TERT"

    def test_two_tp53_mutations_share_symbol(self):
        a = MutationKey("TP53", "17", 7578406, 7578406)
        b = MutationKey("TP53", "17", 7577120, 7577120)
        assert downgrade_to_gene(a) == downgrade_to_gene(b) == "TP53"
