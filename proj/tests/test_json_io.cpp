#include <starlat/json_io.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace starlat;

namespace {

std::vector<FiniteLattice::Elem> all_elems(const FiniteLattice& l) {
    std::vector<FiniteLattice::Elem> out;
    for (FiniteLattice::Elem e = 0; e < l.size(); ++e) out.push_back(e);
    return out;
}

}  // namespace

TEST_CASE("field descriptors round trip", "[json]") {
    for (FieldPtr f : {Field::gf(3), Field::gf(3, 2, true), Field::rationals(),
                       Field::quadratic(-1)}) {
        FieldPtr g = field_from_json(field_to_json(f));
        CHECK(g->fingerprint() == f->fingerprint());
    }
    CHECK_THROWS_AS(field_from_json(Json{{"kind", "octonions"}}), BadDescriptor);
}

TEST_CASE("scalars round trip in every field kind", "[json]") {
    FieldPtr f3 = Field::gf(3);
    for (std::size_t i = 0; i < 3; ++i) {
        Scalar s = f3->element(i);
        CHECK(f3->index(scalar_from_json(f3, scalar_to_json(f3, s))) == i);
    }
    FieldPtr q = Field::rationals();
    Scalar half = q->from_rat(Rat(1, 2));
    CHECK(scalar_to_json(q, half) == Json("1/2"));
    CHECK(q->to_string(scalar_from_json(q, Json("-7/3"))) == "-7/3");
    // integers are accepted for rationals on input
    CHECK(q->to_string(scalar_from_json(q, Json(5))) == "5");
    FieldPtr qi = Field::quadratic(-1);
    Scalar z = qi->from_quad(Rat(2), Rat(-3));
    Scalar back = scalar_from_json(qi, scalar_to_json(qi, z));
    CHECK(qi->to_string(back) == qi->to_string(z));
}

TEST_CASE("matrices, forms and spaces round trip", "[json]") {
    FieldPtr q = Field::rationals();
    Matrix m = Matrix::from_ints(q, {{1, 2}, {3, 4}});
    CHECK(matrix_from_json(q, matrix_to_json(m)) == m);

    HermitianForm phi(Matrix::from_ints(q, {{2, 1}, {1, 2}}));
    HermitianForm psi = form_from_json(q, form_to_json(phi));
    CHECK(psi.gram() == phi.gram());

    InnerProductSpace sp(q, 2, phi);
    InnerProductSpace sp2 = space_from_json(space_to_json(sp));
    CHECK(sp2.dim() == 2);
    CHECK(sp2.form().gram() == phi.gram());
    CHECK(sp2.field()->fingerprint() == q->fingerprint());
}

TEST_CASE("subspaces round trip against a space hash", "[json]") {
    FieldPtr q = Field::rationals();
    InnerProductSpace sp(q, 3, HermitianForm::dot(q, 3));
    SubspaceContext ctx(sp);
    Subspace u = Subspace::span(Matrix::from_ints(q, {{1, 0, -1}, {0, 1, 1}}));
    Json j = subspace_to_json(u, space_to_json(sp));
    CHECK(j.at("space") == descriptor_hash(space_to_json(sp)));
    CHECK(subspace_from_json(ctx, j) == u);
    CHECK(subspace_from_json(ctx, j.at("basis")) == u);  // bare basis accepted
    CHECK(subspace_from_json(ctx, Json::array()) == ctx.bottom());
}

TEST_CASE("ring descriptors: matrix, table and product kinds", "[json]") {
    LoadedRing m2 = ring_from_json(matrix_ring_descriptor(3, 2));
    REQUIRE(m2.table.has_value());
    CHECK(m2.table->size() == 81);
    CHECK(m2.table->has_matrix_images());

    // table round trip preserves all operations
    Json tj = ring_to_json(*m2.table);
    LoadedRing back = ring_from_json(tj);
    REQUIRE(back.table.has_value());
    for (TableRing::Elem a = 0; a < 81; a += 7)
        for (TableRing::Elem b = 0; b < 81; b += 11) {
            CHECK(back.table->add(a, b) == m2.table->add(a, b));
            CHECK(back.table->mul(a, b) == m2.table->mul(a, b));
        }
    for (TableRing::Elem a = 0; a < 81; ++a) CHECK(back.table->star(a) == m2.table->star(a));
    CHECK(back.table->one() == m2.table->one());

    Json pj{{"kind", "product"},
            {"factors", Json::array({matrix_ring_descriptor(3, 1), matrix_ring_descriptor(3, 2)})}};
    LoadedRing prod = ring_from_json(pj);
    REQUIRE(prod.table.has_value());
    CHECK(prod.table->size() == 243);
    CHECK(prod.table->is_star_regular().star_regular);

    // a carrier past the bound keeps only the matrix backend
    LoadedRing big = ring_from_json(matrix_ring_descriptor(11, 2));
    CHECK(big.matrix.has_value());
    CHECK_FALSE(big.table.has_value());
    CHECK_THROWS_AS(big.require_table(), BadDescriptor);
}

TEST_CASE("lattices round trip including the orthocomplement", "[json]") {
    LoadedRing m2 = ring_from_json(matrix_ring_descriptor(3, 2));
    IdealLattice il = principal_right_ideal_lattice(*m2.table);
    FiniteLattice back = lattice_from_json(lattice_to_json(il.lattice));
    REQUIRE(back.size() == il.lattice.size());
    for (FiniteLattice::Elem a = 0; a < back.size(); ++a) {
        CHECK(back.label(a) == il.lattice.label(a));
        CHECK(back.ortho(a) == il.lattice.ortho(a));
        for (FiniteLattice::Elem b = 0; b < back.size(); ++b)
            CHECK(back.leq(a, b) == il.lattice.leq(a, b));
    }
}

TEST_CASE("frames round trip in both backends", "[json]") {
    // lattice backend
    LoadedRing m2 = ring_from_json(matrix_ring_descriptor(3, 2));
    IdealLattice il = principal_right_ideal_lattice(*m2.table);
    auto fr = find_frame(il.lattice, all_elems(il.lattice), 2, 0);
    REQUIRE(fr.has_value());
    Frame<FiniteLattice> st = stabilize_frame(il.lattice, *fr);
    Json ctxj{{"kind", "ideal-lattice"}, {"ring", matrix_ring_descriptor(3, 2)}};
    Frame<FiniteLattice> st2 = frame_from_json_lattice(frame_to_json(st, ctxj));
    CHECK(st2.a == st.a);
    CHECK(st2.a0 == st.a0);
    CHECK(st2.axes == st.axes);
    CHECK(st2.z == st.z);
    CHECK(verify_frame(il.lattice, st2, FrameLevel::Stable).ok());

    // subspace backend
    FieldPtr q = Field::rationals();
    InnerProductSpace sp(q, 3, HermitianForm::dot(q, 3));
    SubspaceContext ctx(sp);
    Frame<SubspaceContext> cf = stabilize_frame(ctx, canonical_frame(ctx, 3));
    Json sctxj{{"kind", "subspace"}, {"space", space_to_json(sp)}};
    Json j = frame_to_json(ctx, cf, sctxj);
    CHECK(j.at("format") == Json::array({3, 0}));
    CHECK(j.at("a0").at(0).is_null());
    Frame<SubspaceContext> cf2 = frame_from_json_subspace(ctx, j);
    CHECK(verify_frame(ctx, cf2, FrameLevel::StableOrthogonal).ok());
    for (std::size_t i = 0; i < 3; ++i) CHECK(cf2.a[i] == cf.a[i]);
}

TEST_CASE("reports serialize with schema v1 and a seed", "[json]") {
    Report rep;
    rep.subject = "demo";
    rep.check("first", true);
    rep.check("second", false, "witness text");
    Json j = report_to_json(rep, 42);
    CHECK(j.at("schema") == kSchemaVersion);
    CHECK(j.at("seed") == 42);
    CHECK(j.at("ok") == false);
    CHECK(j.at("items").size() == 2);
    CHECK(j.at("items").at(1).at("witness") == "witness text");
    // deterministic dumps
    CHECK(j.dump(2) == report_to_json(rep, 42).dump(2));
}

TEST_CASE("catalog flags are honest", "[json]") {
    CHECK(catalog().size() >= 8);
    CHECK(catalog_find("m2_gf3_transpose") != nullptr);
    CHECK(catalog_find("no_such_ring") == nullptr);
    for (const auto& e : catalog()) {
        LoadedRing r = ring_from_json(e.descriptor);
        StarRegVerdict v = r.table ? r.table->is_star_regular() : r.matrix->is_star_regular();
        CHECK(v.star_regular == e.expect_star_regular);
    }
}
