#include <starlat/lattice.hpp>
#include <starlat/ring_lattice.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace starlat;

namespace {

using Elem = FiniteLattice::Elem;

TableRing m2_gf3() {
    return TableRing::materialize(MatrixStarRing::transpose_ring(Field::gf(3), 2));
}

std::vector<Elem> all_elems(const FiniteLattice& l) {
    std::vector<Elem> v(l.size());
    std::iota(v.begin(), v.end(), 0);
    return v;
}

bool item_ok(const Report& rep, const std::string& prefix) {
    for (const auto& i : rep.items)
        if (i.name.rfind(prefix, 0) == 0) return i.ok;
    throw std::runtime_error("no report item named " + prefix);
}

}  // namespace

TEST_CASE("chains and Boolean lattices") {
    FiniteLattice c3 = FiniteLattice::chain(3);
    CHECK(c3.height() == 2);
    CHECK(c3.meet(0, 2) == 0);
    CHECK(c3.join(1, 2) == 2);
    CHECK(verify_lattice_axioms(c3, all_elems(c3)).ok() == false);  // 3-chain: 1 lacks complement
    FiniteLattice c2 = FiniteLattice::chain(2);
    CHECK(verify_lattice_axioms(c2, all_elems(c2)).ok());
    CHECK(verify_mol(c2, all_elems(c2)).ok());  // swap ortho

    FiniteLattice b2 = FiniteLattice::boolean(2);
    CHECK(b2.size() == 4);
    CHECK(b2.height() == 2);
    CHECK(verify_lattice_axioms(b2, all_elems(b2)).ok());
    CHECK(verify_mol(b2, all_elems(b2)).ok());
    CHECK(independent(b2, {1, 2}));        // the two atoms
    CHECK_FALSE(independent(b2, {1, 1}));  // repeated atom
}

TEST_CASE("the pentagon fails the modular law with a witness") {
    FiniteLattice n5 = FiniteLattice::pentagon();
    Report rep = verify_lattice_axioms(n5, all_elems(n5));
    CHECK(item_ok(rep, "meet/join commutative"));
    CHECK(item_ok(rep, "absorption"));
    CHECK_FALSE(item_ok(rep, "modular law"));
    for (const auto& i : rep.items)
        if (i.name.rfind("modular law", 0) == 0) CHECK_FALSE(i.witness.empty());
}

TEST_CASE("malformed orders are rejected") {
    std::vector<Bits> not_refl(2, Bits(2));
    not_refl[0].set(1);
    CHECK_THROWS_AS(FiniteLattice::from_leq(not_refl), NotALattice);
    // two maximal elements: pair lacks a lub
    std::vector<Bits> no_lub(2, Bits(2));
    no_lub[0].set(0);
    no_lub[1].set(1);
    CHECK_THROWS_AS(FiniteLattice::from_leq(no_lub), NotALattice);
}

TEST_CASE("principal right ideal lattices of the small catalog rings") {
    // GF(3): a two-element chain
    TableRing f3 = TableRing::materialize(MatrixStarRing::transpose_ring(Field::gf(3), 1));
    IdealLattice l3 = principal_right_ideal_lattice(f3);
    CHECK(l3.lattice.size() == 2);
    CHECK(l3.lattice.height() == 1);

    // GF(3) x GF(3): the Boolean lattice 2^2
    TableRing p = TableRing::product(f3, f3);
    IdealLattice lp = principal_right_ideal_lattice(p);
    CHECK(lp.lattice.size() == 4);
    CHECK(lp.lattice.atoms().size() == 2);
    CHECK(verify_mol(lp.lattice, all_elems(lp.lattice)).ok());
    CHECK_FALSE(lp.lattice.is_simple());
    CHECK(lp.lattice.all_congruences().size() == 4);

    // M_2(GF(3)): 0, four atoms (the lines of GF(3)^2), 1
    IdealLattice lm = principal_right_ideal_lattice(m2_gf3());
    CHECK(lm.lattice.size() == 6);
    CHECK(lm.lattice.atoms().size() == 4);
    CHECK(lm.lattice.height() == 2);
    CHECK(verify_lattice_axioms(lm.lattice, all_elems(lm.lattice)).ok());
    REQUIRE(lm.lattice.has_ortho());
    CHECK(verify_mol(lm.lattice, all_elems(lm.lattice)).ok());
    CHECK(lm.lattice.is_simple());
    // each element is generated by a projection e, with ortho (1-e)R
    const TableRing r = m2_gf3();
    for (Elem i = 0; i < lm.lattice.size(); ++i) {
        REQUIRE(lm.projection[i].has_value());
        TableRing::Elem e = *lm.projection[i];
        CHECK(r.right_set(e) == lm.sets[i]);
        CHECK(lm.sets[lm.lattice.ortho(i)] == r.right_set(r.sub(r.one(), e)));
    }
}

TEST_CASE("height of the ideal lattice of full matrix rings equals n") {
    IdealLattice l2 = principal_right_ideal_lattice(m2_gf3());
    CHECK(l2.lattice.height() == 2);
    TableRing m3 = TableRing::materialize(MatrixStarRing::transpose_ring(Field::gf(2), 3));
    IdealLattice l3 = principal_right_ideal_lattice(m3);
    CHECK(l3.lattice.height() == 3);
    // oracle: principal right ideals of M_3(GF(2)) match the subspaces of
    // GF(2)^3 (column spaces): 1 + 7 + 7 + 1 of dimensions 0..3
    CHECK(l3.lattice.size() == 16);
    CHECK(l3.lattice.atoms().size() == 7);
}

TEST_CASE("perspectivity on the M_2(GF(3)) ideal lattice") {
    IdealLattice lm = principal_right_ideal_lattice(m2_gf3());
    const FiniteLattice& L = lm.lattice;
    auto atoms = L.atoms();
    REQUIRE(atoms.size() == 4);
    // two distinct atoms are perspective via a third atom
    auto c = L.perspectivity(atoms[0], atoms[1]);
    REQUIRE(c.has_value());
    CHECK(std::find(atoms.begin(), atoms.end(), *c) != atoms.end());
    CHECK(L.meet(atoms[0], *c) == L.bottom());
    CHECK(L.join(atoms[0], *c) == L.join(atoms[1], *c));

    // reflexivity and symmetry, exhaustively
    for (Elem a = 0; a < L.size(); ++a) {
        CHECK(L.perspectivity(a, a).has_value());
        for (Elem b = 0; b < L.size(); ++b)
            CHECK(L.perspectivity(a, b).has_value() == L.perspectivity(b, a).has_value());
    }

    // subperspectivity: reflexive, 0 below anything with d = 0, transitive
    for (Elem a = 0; a < L.size(); ++a) {
        CHECK(L.subperspective(a, a).has_value());
        auto z = L.subperspective(L.bottom(), a);
        REQUIRE(z.has_value());
        CHECK(z->image == L.bottom());
    }
    for (Elem a = 0; a < L.size(); ++a)
        for (Elem b = 0; b < L.size(); ++b)
            for (Elem d = 0; d < L.size(); ++d)
                if (L.subperspective(a, b) && L.subperspective(b, d))
                    CHECK(L.subperspective(a, d).has_value());
}

TEST_CASE("corner rings coordinate intervals") {
    TableRing r = m2_gf3();
    auto f3 = Field::gf(3);
    MatrixStarRing m = MatrixStarRing::transpose_ring(f3, 2);
    auto idx = [&](std::vector<std::vector<long long>> rows) {
        return static_cast<TableRing::Elem>(m.index(Matrix::from_ints(f3, rows)));
    };
    CHECK(interval_and_corner_iso(r, idx({{1, 0}, {0, 1}})).ok());
    CHECK(interval_and_corner_iso(r, idx({{0, 0}, {0, 0}})).ok());
    Report rep = interval_and_corner_iso(r, idx({{1, 0}, {0, 0}}));
    INFO(rep.to_text());
    CHECK(rep.ok());
    // the corner at diag(1,0) is a copy of GF(3), so [0, eR] is a 2-chain
    IdealLattice lm = principal_right_ideal_lattice(r);
    Elem e_ideal = lm.index_of(r.right_set(idx({{1, 0}, {0, 0}})));
    CHECK(lm.lattice.interval(lm.lattice.bottom(), e_ideal).size() == 2);
}

TEST_CASE("simplicity transfer and left/right duality") {
    Report rep = simplicity_and_duality(m2_gf3());
    INFO(rep.to_text());
    CHECK(rep.ok());

    TableRing f3 = TableRing::materialize(MatrixStarRing::transpose_ring(Field::gf(3), 1));
    Report prod = simplicity_and_duality(TableRing::product(f3, f3));
    CHECK_FALSE(item_ok(prod, "ring simple"));
    CHECK_FALSE(item_ok(prod, "right ideal lattice simple"));
    CHECK(item_ok(prod, "xR -> Rx* well defined"));
    CHECK(item_ok(prod, "eR -> R(1-e) order reversing"));
}

TEST_CASE("lattice homomorphisms and complement lifting") {
    FiniteLattice b4 = FiniteLattice::boolean(4);
    FiniteLattice b2 = FiniteLattice::boolean(2);
    // collapse the two high factors: mask & 3
    LatticeHom f{&b4, &b2, {}};
    f.map.resize(b4.size());
    for (Elem x = 0; x < b4.size(); ++x) f.map[x] = x & 3;
    Report rep = f.verify();
    INFO(rep.to_text());
    CHECK(rep.ok());
    CHECK(f.surjective());

    // identity hom: the lift of c is c itself
    LatticeHom id{&b2, &b2, {0, 1, 2, 3}};
    CHECK(lift_complement(id, b2.top(), 1, 2) == 2);
    // b = a, c = 0 forces d = 0
    CHECK(lift_complement(f, 5, 5, b2.bottom()) == b4.bottom());
    // a complement of f(b) in the image lifts to a complement of b in [0, a]
    Elem a = b4.top(), b = 5;  // mask {0,2}; f(b) = 1
    Elem c = 2;                // complement of 1 in 2^2
    Elem d = lift_complement(f, a, b, c);
    CHECK(b4.meet(b, d) == b4.bottom());
    CHECK(b4.join(b, d) == a);
    CHECK(f(d) == c);
    // contract violation: c not a complement of f(b) in f(a)
    CHECK_THROWS_AS(lift_complement(f, a, b, 1), NoLift);
}

TEST_CASE("DOT export renders covers and ortho edges") {
    FiniteLattice c3 = FiniteLattice::chain(3);
    std::string dot = c3.to_dot("c3");
    CHECK(dot.find("n0 -- n1") != std::string::npos);
    CHECK(dot.find("n1 -- n2") != std::string::npos);
    CHECK(dot.find("n0 -- n2;") == std::string::npos);  // not a cover
    CHECK(dot.find("style=dashed") != std::string::npos);
}
