import random
from itertools import combinations
from pathlib import Path

import numpy as np
import pytest

from latgal import closure as cl
from latgal import fca, galois
from latgal import lattice as lat
from latgal.errors import MissingCell, NotBinary, NotComplete, ParseError, UnmappedToken
from latgal.fca import ManyValuedContext
from latgal.maps import LatticeMap

from conftest import fca_instances, random_context
from oracles import concept_oracle

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
INSTANCES = fca_instances()


@pytest.mark.parametrize("ctx,fam", INSTANCES, ids=[f"i{i}" for i in range(len(INSTANCES))])
def test_generators_match_fixed_point_scan(ctx, fam):
    got = fca.concepts(ctx, fam)
    want = concept_oracle(ctx, fam)
    assert {(c.extent, c.intent) for c in got} == want
    assert {(c.extent, c.intent) for c in fca.brute_force_concepts(ctx, fam)} == want


@pytest.mark.parametrize("ctx,fam", INSTANCES[::3], ids=[f"i{i}" for i in range(0, len(INSTANCES), 3)])
def test_ranges_are_closure_and_interior_systems(ctx, fam):
    L = fam.lattice
    nb, na = ctx.shape
    PB, cb = lat.product([L] * nb)
    PA, ca = lat.product([L] * na)
    cs = fca.concepts(ctx, fam)
    cl.validate_closure_system(PB, [cb.encode(c.extent) for c in cs])
    cl.validate_interior_system(PA, [ca.encode(c.intent) for c in cs])
    lattice = fca.concept_lattice(cs, L)
    assert len(lattice) == len(cs)


def test_operators_form_a_galois_connection():
    """F(x) <= y iff x <= G(y) over all vectors of a small instance."""
    rng = random.Random(1)
    fam = fca.residuated_chain_family(3)
    ctx = random_context(3, 2, list(fam.tokens), rng)
    ops = fca.ConceptOperators(ctx, fam)
    L = fam.lattice
    PB, cb = lat.product([L] * 3)
    PA, ca = lat.product([L] * 2)
    F = LatticeMap(PB, PA, tuple(ca.encode(ops.F(cb.decode(x))) for x in PB))
    G = LatticeMap(PA, PB, tuple(cb.encode(ops.G(ca.decode(y))) for y in PA))
    assert galois.verify_adjunction(F, G)
    assert galois.upper_adjoint(F) == G


class TestGodel:
    @pytest.mark.parametrize("k", range(2, 11))
    def test_adjoint_property(self, k):
        for x in range(k):
            for a in range(k):
                for y in range(k):
                    assert (fca.godel_conjunction(x, a) <= y) == (x <= fca.godel_implication(a, y, k))

    @pytest.mark.parametrize("k", [2, 5, 10])
    def test_family_maps_preserve_joins(self, k):
        fam = fca.residuated_chain_family(k)
        assert all(galois.is_sup_preserving(f) for f in fam.maps.values())
        assert len(fam.tokens) == k

    def test_k_too_small(self):
        with pytest.raises(ValueError):
            fca.residuated_chain_family(1)


class TestRatings:
    def setup_method(self):
        self.ctx = fca.load_context(FIXTURES / "ratings.csv")
        self.fam = fca.residuated_chain_family(3)

    def test_shape(self):
        assert self.ctx.shape == (3, 3)
        assert self.ctx.value(0, 0) == "2"

    def test_top_concept(self):
        assert fca.top_concept_check(self.ctx, self.fam)
        cs = fca.concepts(self.ctx, self.fam)
        assert cs[-1].extent == (2, 2, 2)

    def test_concept_lattice_and_dot(self):
        cs = fca.concepts(self.ctx, self.fam)
        lattice = fca.concept_lattice(cs, self.fam.lattice)
        dot = fca.concept_lattice_dot(lattice, self.ctx)
        assert dot.count("->") == len(lattice.covers)
        assert dot.startswith("digraph concepts {")

    def test_column_aggregations(self):
        cols = fca.column_aggregations(self.ctx, self.fam)
        ops = fca.ConceptOperators(self.ctx, self.fam)
        for x in [(0, 1, 2), (2, 2, 0), (1, 0, 1)]:
            assert tuple(c(x) for c in cols) == ops.F(x)
        # each column has a 2 somewhere, so f(1,1,1) = 1
        assert all(c.is_aggregation for c in cols)
        assert cols[0].table().arity == 3

    def test_unmapped_token(self):
        fam = fca.residuated_chain_family(2)
        with pytest.raises(UnmappedToken):
            fca.concepts(self.ctx, fam)


def test_non_aggregation_column():
    fam = fca.residuated_chain_family(3)
    ctx = ManyValuedContext(("b",), ("a",), [["1"]])
    col = fca.column_aggregations(ctx, fam)[0]
    assert not col.is_aggregation
    assert not fca.top_concept_check(ctx, fam)


class TestParsing:
    def test_ragged(self):
        with pytest.raises(ParseError):
            fca.parse_context(",a,b\nx,1\n")

    def test_empty_cell(self):
        with pytest.raises(MissingCell) as exc:
            fca.parse_context(",a,b\nx,1,\n")
        assert exc.value.witness == ["x", "b"]

    def test_duplicate_object(self):
        with pytest.raises(ParseError):
            fca.parse_context(",a\nx,1\nx,0\n")

    def test_alphabet(self):
        with pytest.raises(ParseError):
            fca.parse_context(",a\nx,7\n", alphabet=["0", "1"])

    def test_header_must_start_blank(self):
        with pytest.raises(ParseError):
            fca.parse_context("o,a\nx,1\n")


def brute_crisp(ctx):
    nb, na = ctx.shape
    inc = {(b, a) for b in range(nb) for a in range(na) if ctx.table[b][a] == "1"}
    out = set()
    for r in range(nb + 1):
        for X in combinations(range(nb), r):
            Y = {a for a in range(na) if all((b, a) in inc for b in X)}
            Xc = {b for b in range(nb) if all((b, a) in inc for a in Y)}
            out.add((frozenset(ctx.objects[b] for b in Xc), frozenset(ctx.attributes[a] for a in Y)))
    return out


class TestCrisp:
    def test_sample_matches_brute_force(self):
        ctx = fca.load_context(FIXTURES / "crisp_sample.csv")
        got = fca.crisp_concepts(ctx)
        assert set(got) == brute_crisp(ctx)
        assert len(got) == len(set(got))

    def test_single_cell(self):
        ctx = fca.load_context(FIXTURES / "crisp_1x1.csv")
        got = fca.crisp_concepts(ctx)
        assert set(got) == brute_crisp(ctx)

    def test_random_contexts(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            nb, na = rng.integers(1, 6, size=2)
            t = rng.integers(0, 2, size=(nb, na)).astype(str).tolist()
            ctx = ManyValuedContext(tuple(f"o{i}" for i in range(nb)), tuple(f"m{j}" for j in range(na)), t)
            assert set(fca.crisp_concepts(ctx)) == brute_crisp(ctx)

    def test_non_binary(self):
        with pytest.raises(NotBinary):
            fca.crisp_concepts(fca.load_context(FIXTURES / "ratings.csv"))


def test_incomplete_concept_set_rejected():
    fam = fca.residuated_chain_family(3)
    ctx = fca.load_context(FIXTURES / "ratings.csv")
    cs = fca.concepts(ctx, fam)
    with pytest.raises(NotComplete):
        fca.concept_lattice(cs[1:], fam.lattice)
