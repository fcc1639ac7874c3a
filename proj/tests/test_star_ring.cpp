#include <starlat/rng.hpp>
#include <starlat/star_ring.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace starlat;

namespace {

TableRing m2_gf3() {
    auto f = Field::gf(3);
    return TableRing::materialize(MatrixStarRing::transpose_ring(f, 2));
}

TableRing m3_gf2() {
    auto f = Field::gf(2);
    return TableRing::materialize(MatrixStarRing::transpose_ring(f, 3));
}

// GF(p) as a 1x1 matrix ring with identity involution
TableRing gfp_ring(unsigned p) {
    return TableRing::materialize(MatrixStarRing::transpose_ring(Field::gf(p), 1));
}

}  // namespace

TEST_CASE("table ring axioms on 2x2 matrices over GF(3)") {
    TableRing r = m2_gf3();
    REQUIRE(r.size() == 81);
    REQUIRE(r.unital());
    Report rep = r.verify_star_ring();
    INFO(rep.to_text());
    CHECK(rep.ok());
}

TEST_CASE("Z/4 with the identity involution is not regular") {
    std::vector<std::vector<TableRing::Elem>> add(4, std::vector<TableRing::Elem>(4));
    std::vector<std::vector<TableRing::Elem>> mul(4, std::vector<TableRing::Elem>(4));
    std::vector<TableRing::Elem> star{0, 1, 2, 3};
    for (TableRing::Elem a = 0; a < 4; ++a)
        for (TableRing::Elem b = 0; b < 4; ++b) {
            add[a][b] = (a + b) % 4;
            mul[a][b] = (a * b) % 4;
        }
    TableRing z4 = TableRing::from_tables(add, mul, star, 0, 1);
    CHECK(z4.verify_star_ring().ok());
    auto v = z4.is_star_regular();
    CHECK_FALSE(v.star_regular);
    CHECK_FALSE(v.positivity_clause);  // 2 * 2 = 0 with 2 nonzero
    CHECK(v.witness == "#2");
    CHECK_THROWS_AS(z4.quasi_inverse(2), NotRegularAt);  // 2 y 2 = 0 for every y
}

TEST_CASE("Rickart calculus is exhaustive on 2x2 matrices over GF(3)") {
    TableRing r = m2_gf3();
    REQUIRE(r.is_star_regular().star_regular);
    for (TableRing::Elem a = 0; a < r.size(); ++a) {
        TableRing::Elem l = r.left_proj(a), rr = r.right_proj(a);
        CHECK(r.is_projection(l));
        CHECK(r.is_projection(rr));
        CHECK(r.mul(l, a) == a);
        CHECK(r.mul(a, rr) == a);

        TableRing::Elem q = r.rickart_q(a);
        CHECK(r.mul(a, q) == l);
        CHECK(r.mul(q, a) == rr);
        CHECK(r.mul(rr, q) == q);
        CHECK(r.mul(q, l) == q);
        // q is involutive
        CHECK(r.rickart_q(q) == a);
        // oracle: q is the unique element meeting the four conditions
        std::size_t solutions = 0;
        for (TableRing::Elem y = 0; y < r.size(); ++y)
            if (r.mul(a, y) == l && r.mul(y, a) == rr && r.mul(rr, y) == y && r.mul(y, l) == y)
                ++solutions;
        CHECK(solutions == 1);
    }
}

TEST_CASE("covering projection is the least projection fixing the element") {
    TableRing r = m2_gf3();
    for (TableRing::Elem x = 0; x < r.size(); ++x) {
        TableRing::Elem e = r.covering_projection(x);
        CHECK(r.is_projection(e));
        CHECK(r.mul(e, x) == x);
        CHECK(r.mul(x, e) == x);
        for (TableRing::Elem f : r.projections())
            if (r.mul(f, x) == x && r.mul(x, f) == x) CHECK(r.mul(e, f) == e);
    }
}

TEST_CASE("3x3 matrices over GF(2) with transposition are regular but not *-regular") {
    auto f2 = Field::gf(2);
    MatrixStarRing m = MatrixStarRing::transpose_ring(f2, 3);
    auto v = m.is_star_regular();
    CHECK_FALSE(v.star_regular);
    CHECK(v.regular_clause);  // full matrix rings over a field are regular
    CHECK_FALSE(v.positivity_clause);

    // the isotropic vector (1,1,0) yields xx* = 0 with x nonzero
    Vec iso = {f2->one(), f2->one(), f2->zero()};
    CHECK(f2->is_zero(HermitianForm::dot(f2, 3).value(iso, iso)));
    Matrix x = Matrix::from_ints(f2, {{1, 1, 0}, {0, 0, 0}, {0, 0, 0}});
    CHECK_FALSE(x.is_zero());
    CHECK((x * m.star(x)).is_zero());

    // the table backend agrees
    TableRing t = m3_gf2();
    REQUIRE(t.size() == 512);
    auto tv = t.is_star_regular();
    CHECK_FALSE(tv.star_regular);
    CHECK_FALSE(tv.positivity_clause);
    CHECK(t.verify_star_ring().ok());
}

TEST_CASE("3x3 matrices over GF(3) with transposition are not *-regular") {
    auto f3 = Field::gf(3);
    MatrixStarRing m = MatrixStarRing::transpose_ring(f3, 3);
    auto v = m.is_star_regular();
    CHECK_FALSE(v.star_regular);  // (1,1,1) is isotropic: 1+1+1 = 0 mod 3
    auto iso = m.isotropic_vector();
    REQUIRE(iso.has_value());
    CHECK(f3->is_zero(m.form().value(*iso, *iso)));
}

TEST_CASE("matrix quasi-inverse identities, randomized") {
    Rng rng(17);
    for (auto f : {Field::gf(2), Field::gf(5), Field::rationals()}) {
        MatrixStarRing m = MatrixStarRing::transpose_ring(f, 3);
        for (int t = 0; t < 40; ++t) {
            Matrix x = rng.matrix(f, 3, 3);
            Matrix y = m.quasi_inverse(x);
            CHECK(x * y * x == x);
            CHECK((x * y) * (x * y) == x * y);
        }
        CHECK(m.quasi_inverse(m.zero()) == m.zero());
        CHECK(m.quasi_inverse(m.one()) == m.one());
    }
}

TEST_CASE("rational matrix rings with definite and indefinite forms") {
    auto q = Field::rationals();
    MatrixStarRing dot = MatrixStarRing::transpose_ring(q, 3);
    CHECK(dot.is_star_regular().star_regular);  // identity Gram is definite

    HermitianForm mink(Matrix::from_ints(q, {{1, 0}, {0, -1}}));
    MatrixStarRing ind(q, 2, mink);
    auto v = ind.is_star_regular();
    CHECK_FALSE(v.star_regular);  // (1,1) is isotropic

    auto qi = Field::quadratic(-1);
    MatrixStarRing herm = MatrixStarRing::transpose_ring(qi, 2);
    CHECK(herm.is_star_regular().star_regular);  // sums of norms vanish only at 0
    CHECK(herm.verify_star_ring(100, 1).ok());
}

TEST_CASE("corner ring at diag(1,0) in 2x2 over GF(3)") {
    TableRing r = m2_gf3();
    auto f3 = Field::gf(3);
    MatrixStarRing m = MatrixStarRing::transpose_ring(f3, 2);
    auto e = static_cast<TableRing::Elem>(m.index(Matrix::from_ints(f3, {{1, 0}, {0, 0}})));
    REQUIRE(r.is_projection(e));
    auto corner = r.corner(e);
    CHECK(corner.ring.size() == 3);  // eRe is a copy of GF(3)
    CHECK(corner.ring.unital());
    CHECK(corner.ring.verify_star_ring().ok());
    CHECK(corner.ring.is_star_regular().star_regular);
    CHECK(corner.carrier[corner.ring.one()] == e);
    // commutative with involution trivial on the copy of the field
    for (TableRing::Elem a = 0; a < 3; ++a) {
        CHECK(corner.ring.star(a) == a);
        for (TableRing::Elem b = 0; b < 3; ++b)
            CHECK(corner.ring.mul(a, b) == corner.ring.mul(b, a));
    }
}

TEST_CASE("ideals, quotients and simplicity") {
    TableRing r = m2_gf3();
    auto ideals = r.all_star_ideals();
    REQUIRE(ideals.size() == 2);  // full matrix rings are simple
    CHECK(r.is_simple());
    CHECK(r.minimal_nonzero_ideals().size() == 1);

    TableRing p = TableRing::product(gfp_ring(3), gfp_ring(3));
    REQUIRE(p.size() == 9);
    CHECK(p.verify_star_ring().ok());
    auto pids = p.all_star_ideals();
    CHECK(pids.size() == 4);  // 0, A x 0, 0 x B, everything
    CHECK_FALSE(p.is_simple());
    auto mins = p.minimal_nonzero_ideals();
    REQUIRE(mins.size() == 2);  // subdirectly reducible

    auto quo = p.quotient(mins[0]);
    CHECK(quo.ring.size() == 3);
    CHECK(quo.ring.verify_star_ring().ok());
    CHECK(quo.ring.is_star_regular().star_regular);
    CHECK(quo.ring.is_simple());
    // the quotient map respects the operations
    for (TableRing::Elem a = 0; a < p.size(); ++a)
        for (TableRing::Elem b = 0; b < p.size(); ++b) {
            CHECK(quo.class_of[p.add(a, b)] == quo.ring.add(quo.class_of[a], quo.class_of[b]));
            CHECK(quo.class_of[p.mul(a, b)] == quo.ring.mul(quo.class_of[a], quo.class_of[b]));
        }
}

TEST_CASE("left multiplication is injective on large enough ideals") {
    TableRing r = m2_gf3();
    Bits full(r.size());
    full.set();
    CHECK(r.left_action_injective(full).injective);

    TableRing p = TableRing::product(gfp_ring(3), gfp_ring(3));
    auto mins = p.minimal_nonzero_ideals();
    auto v = p.left_action_injective(mins[0]);
    CHECK_FALSE(v.injective);  // the complementary factor annihilates
    for (std::size_t x = mins[0].find_first(); x != Bits::npos; x = mins[0].find_next(x))
        CHECK(p.is_zero(p.mul(v.witness, static_cast<TableRing::Elem>(x))));
}

TEST_CASE("operation closure in a *-regular ambient ring is closed under q") {
    TableRing r = m2_gf3();
    auto f3 = Field::gf(3);
    MatrixStarRing m = MatrixStarRing::transpose_ring(f3, 2);

    // the matrix unit E01 generates the full ring
    auto e01 = static_cast<TableRing::Elem>(m.index(Matrix::from_ints(f3, {{0, 1}, {0, 0}})));
    Bits c = r.closure({e01}, false);
    CHECK(c.count() == 81);
    CHECK(r.closed_under_q(c));

    // random generating sets: {+,*,-,involution}-closed forces q-closed here
    Rng rng(23);
    for (int t = 0; t < 25; ++t) {
        std::vector<TableRing::Elem> gens;
        std::size_t n = 1 + rng.next(3);
        for (std::size_t i = 0; i < n; ++i)
            gens.push_back(static_cast<TableRing::Elem>(rng.next(r.size())));
        Bits s = r.closure(gens, false);
        CHECK(r.closed_under_q(s));
        CHECK(r.closure(gens, true) == s);
        // the induced subring is itself a *-regular ring
        auto sub = r.subring(s);
        CHECK(sub.ring.verify_star_ring().ok());
        CHECK(sub.ring.is_star_regular().star_regular);
    }
}

TEST_CASE("closure without q can fail to be q-closed outside *-regular rings") {
    TableRing t = m3_gf2();
    Bits full(t.size());
    full.set();
    CHECK_FALSE(t.closed_under_q(full));  // some elements lack the relative inverse
}

TEST_CASE("closure budget is enforced") {
    TableRing r = m2_gf3();
    CHECK_THROWS_AS(r.closure({r.one()}, false, 2), ClosureBudgetExceeded);
}
