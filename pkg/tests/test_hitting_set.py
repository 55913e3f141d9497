import random
from fractions import Fraction

import pytest

from oncograph import (
    DiseaseNode,
    DrugNode,
    GeneticEdge,
    KnowledgeGraph,
    PatientRecord,
    TargetEdge,
    errors,
    hitting_set as hs,
)

from conftest import make_mutation

M1 = make_mutation("KRAS", 100)
M2 = make_mutation("EGFR", 200)
M3 = make_mutation("BRAF", 300)


def target_graph():
    g = KnowledgeGraph()
    g.add_node(PatientRecord("P1", 20, True))
    for m in (M1, M2, M3):
        g.add_node(m)
    for d in ("d1", "d2", "d3"):
        g.add_node(DrugNode(d))
    g.add_edge(GeneticEdge("P1", M1, 0.4))
    g.add_edge(GeneticEdge("P1", M2, 0.3))
    g.add_edge(GeneticEdge("P1", M3, 0.2))
    g.add_edge(TargetEdge(M1, "d1"))
    g.add_edge(TargetEdge(M1, "d2"))
    g.add_edge(TargetEdge(M2, "d2"))
    g.add_edge(TargetEdge(M2, "d3"))
    return g


class TestInstanceConstruction:
    def test_drugs_for_mutation(self):
        g = target_graph()
        assert hs.drugs_for_mutation(g, M1) == {"d1", "d2"}

    def test_drugs_for_untargeted_mutation(self):
        g = target_graph()
        assert hs.drugs_for_mutation(g, M3) == set()

    def test_build_instance_shape(self):
        g = target_graph()
        inst = hs.build_instance(g, "P1", [M1, M2])
        assert set(inst.universe) == {"d1", "d2", "d3"}
        assert sorted(map(sorted, inst.family)) == [["d1", "d2"], ["d2", "d3"]]

    def test_empty_targets(self):
        g = target_graph()
        inst = hs.build_instance(g, "P1", [])
        assert inst.family == ()
        assert hs.solve_min_cardinality(inst).drugs == frozenset()

    def test_untargetable_names_mutation(self):
        g = target_graph()
        with pytest.raises(errors.Untargetable) as exc:
            hs.build_instance(g, "P1", [M3])
        assert M3.display() in str(exc.value)

    def test_not_patient_mutation(self):
        g = target_graph()
        g.add_node(PatientRecord("P2", 5, False))
        with pytest.raises(errors.NotPatientMutation):
            hs.build_instance(g, "P2", [M1])


class TestSolvers:
    def test_common_element_wins(self):
        inst = hs.make_instance([{"d1", "d2"}, {"d2", "d3"}])
        assert hs.solve_min_cardinality(inst).drugs == {"d2"}
        assert hs.oracle_solve(inst, "cardinality").drugs == {"d2"}

    def test_disjoint_singletons_force_all(self):
        inst = hs.make_instance([{"d1"}, {"d2"}, {"d3"}])
        sol = hs.solve_min_cardinality(inst)
        assert sol.drugs == {"d1", "d2", "d3"}

    def test_weighted_avoids_heavy_drug(self):
        inst = hs.make_instance(
            [{"d1", "d2"}, {"d2", "d3"}], weights={"d2": 5, "d1": 1, "d3": 1}
        )
        sol = hs.solve_min_weight(inst)
        assert sol.drugs == {"d1", "d3"}
        assert sol.total_weight == 2

    def test_zero_weight_forced_single(self):
        inst = hs.make_instance([{"d1"}], weights={"d1": 0})
        sol = hs.solve_min_weight(inst)
        assert sol.drugs == {"d1"}
        assert sol.total_weight == 0

    def test_empty_family(self):
        inst = hs.make_instance([])
        for solve in (hs.solve_min_cardinality, hs.solve_min_weight, hs.oracle_solve):
            sol = solve(inst)
            assert sol.drugs == frozenset()
            assert sol.total_weight == 0

    def test_hits_map(self):
        g = target_graph()
        inst = hs.build_instance(g, "P1", [M1, M2])
        sol = hs.solve_min_cardinality(inst)
        assert sol.drugs == {"d2"}
        assert sol.hits[M1] == {"d2"}
        assert sol.hits[M2] == {"d2"}


def random_instance(rng, max_universe=12, max_family=8, weighted=True):
    n = rng.randint(1, max_universe)
    drugs = [f"d{i:02d}" for i in range(n)]
    family = []
    for _ in range(rng.randint(1, max_family)):
        family.append(set(rng.sample(drugs, rng.randint(1, n))))
    weights = (
        {d: Fraction(rng.randint(0, 20), rng.randint(1, 4)) for d in drugs}
        if weighted
        else None
    )
    return hs.make_instance(family, weights)


class TestOracleAgreement:
    def test_weighted_matches_oracle(self):
        rng = random.Random(71)
        for _ in range(120):
            inst = random_instance(rng)
            assert (
                hs.solve_min_weight(inst).total_weight
                == hs.oracle_solve(inst, "weight").total_weight
            )

    def test_unit_weight_cardinality_matches(self):
        rng = random.Random(73)
        for _ in range(120):
            inst = random_instance(rng, weighted=False)
            sol = hs.solve_min_cardinality(inst)
            oracle = hs.oracle_solve(inst, "cardinality")
            assert len(sol.drugs) == len(oracle.drugs)
            assert sol.drugs == oracle.drugs  # identical under fixed tie-breaking

    def test_unit_weight_solvers_coincide(self):
        rng = random.Random(79)
        for _ in range(50):
            inst = random_instance(rng, weighted=False)
            a = hs.solve_min_cardinality(inst)
            b = hs.solve_min_weight(inst)
            assert len(a.drugs) == len(b.drugs)
            assert a.total_weight == b.total_weight


class TestProperties:
    def test_soundness_checked(self):
        rng = random.Random(83)
        for _ in range(50):
            inst = random_instance(rng)
            sol = hs.solve_min_weight(inst)
            for s in inst.family:
                assert s & sol.drugs

    def test_monotone_in_family(self):
        rng = random.Random(89)
        for _ in range(40):
            inst = random_instance(rng, max_universe=8, max_family=5)
            base = hs.solve_min_weight(inst).total_weight
            extra = set(rng.sample(inst.universe, rng.randint(1, len(inst.universe))))
            bigger = hs.make_instance(list(inst.family) + [extra], dict(inst.weights))
            assert hs.solve_min_weight(bigger).total_weight >= base

    def test_weight_scaling(self):
        rng = random.Random(97)
        for _ in range(30):
            inst = random_instance(rng, max_universe=8, max_family=5)
            c = Fraction(rng.randint(1, 5), rng.randint(1, 3))
            scaled = hs.make_instance(
                inst.family, {d: w * c for d, w in inst.weights.items()}
            )
            sol = hs.solve_min_weight(inst)
            sol_scaled = hs.solve_min_weight(scaled)
            assert sol_scaled.total_weight == sol.total_weight * c
            # the chosen set remains an optimum of the scaled instance
            chosen_cost = sum(scaled.weights[d] for d in sol.drugs)
            assert chosen_cost == sol_scaled.total_weight

    def test_determinism(self):
        rng = random.Random(101)
        for _ in range(20):
            inst = random_instance(rng)
            first = hs.solve_min_weight(inst).drugs
            for _ in range(3):
                assert hs.solve_min_weight(inst).drugs == first

    def test_universe_limit(self):
        inst = hs.make_instance([{f"d{i}" for i in range(21)}])
        with pytest.raises(errors.UniverseTooLarge):
            hs.oracle_solve(inst)


class TestTextFormat:
    def test_roundtrip(self, tmp_path):
        inst = hs.make_instance(
            [{"d1", "d2"}, {"d2", "d3"}], weights={"d2": Fraction(5, 2)}
        )
        path = tmp_path / "instance.txt"
        with open(path, "w") as fh:
            hs.write_instance(inst, fh)
        with open(path) as fh:
            back = hs.read_instance(fh)
        assert back.family == inst.family
        assert back.weights == inst.weights
        assert back.universe == inst.universe
