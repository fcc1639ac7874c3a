#include <starlat/coord.hpp>
#include <starlat/rng.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace starlat;

namespace {

bool item_ok(const Report& rep, const std::string& prefix) {
    for (const auto& i : rep.items)
        if (i.name.rfind(prefix, 0) == 0) return i.ok;
    throw std::runtime_error("no report item named " + prefix);
}

Vec iv(const FieldPtr& f, std::vector<long long> xs) {
    Vec v;
    for (long long x : xs) v.push_back(f->from_int(x));
    return v;
}

std::vector<FiniteLattice::Elem> all_elems(const FiniteLattice& l) {
    std::vector<FiniteLattice::Elem> out;
    for (FiniteLattice::Elem e = 0; e < l.size(); ++e) out.push_back(e);
    return out;
}

TableRing matrix_table_ring(long long p, std::size_t n) {
    return TableRing::materialize(MatrixStarRing::transpose_ring(Field::gf(p), n));
}

/// Column space of the matrix image, the canonical labeling eR -> eV.
Subspace colspace(const FieldPtr& f, const Matrix& m) {
    return Subspace::span(m.transpose());
}

TableRing::Elem elem_of_matrix(const TableRing& r, const Matrix& m) {
    for (TableRing::Elem e = 0; e < r.size(); ++e)
        if (r.matrix_image(e) == m) return e;
    throw std::runtime_error("matrix not in the ring");
}

}  // namespace

TEST_CASE("graphs of subspace morphisms and their inverses") {
    auto q = Field::rationals();
    SubspaceContext ctx(InnerProductSpace::dot(q, 3));
    Subspace ui = Subspace::span(q, 3, {iv(q, {1, 0, 0})});
    Subspace uj = Subspace::span(q, 3, {iv(q, {0, 1, 0})});
    Subspace rest = Subspace::span(q, 3, {iv(q, {0, 1, 0}), iv(q, {0, 0, 1})});

    // phi: e0 -> 2 e1, as a total matrix
    Matrix F = Matrix::from_ints(q, {{0, 0, 0}, {2, 0, 0}, {0, 0, 0}});
    Subspace g = graph_of(ctx, ui, F);
    CHECK(g == Subspace::span(q, 3, {iv(q, {1, -2, 0})}));

    Matrix back = morphism_from_graph(ctx, ui, uj, g, rest);
    CHECK(back == F);

    // the zero morphism has graph U_i itself
    Matrix Z(q, 3, 3);
    CHECK(graph_of(ctx, ui, Z) == ui);
    CHECK(morphism_from_graph(ctx, ui, uj, ui, rest) == Z);

    // U_j is never a graph over U_i
    CHECK_THROWS_AS(morphism_from_graph(ctx, ui, uj, uj, rest), NotAComplement);
}

TEST_CASE("decomposition system of the canonical rational frame") {
    auto q = Field::rationals();
    SubspaceContext ctx(InnerProductSpace::dot(q, 3));
    Frame<SubspaceContext> fr = stabilize_frame(ctx, canonical_frame(ctx, 3));
    SubDS ds = decomposition_system_of_frame(ctx, fr);

    Report rep = verify_decomposition_system(ds);
    INFO(rep.to_text());
    CHECK(rep.ok());

    // for the dot form the Gram-Schmidt basis is the standard basis and
    // eps_ji sends b_i to b_j
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i) {
            Vec bi(3, q->zero()), bj(3, q->zero());
            bi[i] = q->one();
            bj[j] = q->one();
            CHECK(ds.eps(j, i).apply(bi) == bj);
        }

    // projections decompose the identity
    Matrix sum = ds.proj(0) + ds.proj(1) + ds.proj(2);
    CHECK(sum == Matrix::identity(q, 3));

    Report adj = verify_epsilon_adjoints(ds);
    INFO(adj.to_text());
    CHECK(adj.ok());
}

TEST_CASE("degenerate decomposition system of a (1,0)-frame") {
    auto q = Field::rationals();
    SubspaceContext ctx(InnerProductSpace::dot(q, 2));
    Frame<SubspaceContext> fr;
    fr.n = 1;
    fr.k = 0;
    fr.a.push_back(ctx.top());
    fr.a0.push_back(ctx.bottom());
    SubDS ds = decomposition_system_of_frame(ctx, fr);
    CHECK(ds.proj(0) == Matrix::identity(q, 2));
    Report rep = verify_decomposition_system(ds);
    INFO(rep.to_text());
    CHECK(rep.ok());
    CHECK_THROWS_AS(coefficient_ring(ds), FormatTooSmall);
}

TEST_CASE("ring decomposition system and graphs over M_2(GF(3))") {
    TableRing r = matrix_table_ring(3, 2);
    IdealLattice il = principal_right_ideal_lattice(r);
    auto fr = find_frame(il.lattice, all_elems(il.lattice), 2, 0);
    REQUIRE(fr.has_value());
    Frame<FiniteLattice> st = stabilize_frame(il.lattice, *fr);
    RingDS ds = decomposition_system_of_frame(r, il, st);

    Report rep = verify_decomposition_system(ds);
    INFO(rep.to_text());
    CHECK(rep.ok());
    CHECK_THROWS_AS(coefficient_ring(ds), FormatTooSmall);

    // graph round trip on the corner x_1 R x_0
    std::size_t corner = 0;
    for (TableRing::Elem s = 0; s < r.size(); ++s) {
        if (r.mul(r.mul(ds.x(1), s), ds.x(0)) != s) continue;
        ++corner;
        FiniteLattice::Elem g = graph_of(r, il, ds.x(0), s);
        CHECK(morphism_from_graph(r, il, ds.x(0), st.a[1], g) == s);
    }
    CHECK(corner == 3);  // x_1 R x_0 is a line over GF(3)
}

TEST_CASE("theta and the coefficient ring of M_3(GF(2))") {
    TableRing r = matrix_table_ring(2, 3);
    IdealLattice il = principal_right_ideal_lattice(r);
    REQUIRE(il.lattice.size() == 16);
    auto fr = find_frame(il.lattice, all_elems(il.lattice), 3, 0);
    REQUIRE(fr.has_value());
    Frame<FiniteLattice> st = stabilize_frame(il.lattice, *fr);
    RingDS ds = decomposition_system_of_frame(r, il, st);

    Report dsrep = verify_decomposition_system(ds);
    INFO(dsrep.to_text());
    CHECK(dsrep.ok());

    RingCoefficientRing C = coefficient_ring(ds);
    auto carrier = C.carrier();
    CHECK(carrier.size() == 2);  // x_0 R x_0 is isomorphic to GF(2)
    CHECK(C.member(r.zero()));
    CHECK(C.member(ds.x(0)));

    Theta th = theta(ds);
    Report threp = verify_theta(th);
    INFO(threp.to_text());
    CHECK(threp.ok());

    // the identity has diagonal components, a corner element a single one
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(th.component(r.one(), j, i) == (i == j ? ds.x(i) : r.zero()));
    TableRing::Elem corner = r.mul(r.mul(ds.x(0), ds.eps(0, 1)), ds.x(1));
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t i = 0; i < 3; ++i)
            CHECK((th.component(corner, j, i) == corner) == (j == 0 && i == 1));
}

TEST_CASE("eta transports M_3(GF(2)) onto its matrices and rho preserves *") {
    auto f2 = Field::gf(2);
    TableRing r = matrix_table_ring(2, 3);
    IdealLattice il = principal_right_ideal_lattice(r);
    auto fr = find_frame(il.lattice, all_elems(il.lattice), 3, 0);
    REQUIRE(fr.has_value());
    Frame<FiniteLattice> st = stabilize_frame(il.lattice, *fr);
    RingDS ds = decomposition_system_of_frame(r, il, st);

    // canonical labeling eR -> eV = column space of e
    std::vector<Subspace> iota;
    for (std::size_t e = 0; e < il.lattice.size(); ++e)
        iota.push_back(colspace(f2, r.matrix_image(il.generator[e])));

    SubspaceContext ctx(InnerProductSpace::dot(f2, 3));
    Frame<SubspaceContext> fr2;
    fr2.n = 3;
    fr2.k = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        fr2.a.push_back(iota[st.a[i]]);
        fr2.a0.push_back(i == 0 ? ctx.bottom() : iota[st.a0[i]]);
    }
    for (const auto& [key, ax] : st.axes) fr2.axes.insert_or_assign(key, iota[ax]);
    SubDS tgt = decomposition_system_of_frame(ctx, fr2);

    Eta eta(ds, iota, tgt);
    Report rep = verify_eta(eta);
    INFO(rep.to_text());
    CHECK(rep.ok());

    // the canonical labeling reproduces each element's own matrix
    bool canonical = true;
    for (TableRing::Elem x = 0; x < r.size(); ++x)
        canonical = canonical && eta(x) == r.matrix_image(x);
    CHECK(canonical);

    // the matrix ring contains every transported element
    RingCoefficientRing C = coefficient_ring(ds);
    CHECK(matrix_ring_member(ds, C, r.one()));

    // rho = eta with the dot form: the transpose involution is preserved
    RepresentationMap rm = rho(eta, InnerProductSpace::dot(f2, 3));
    CHECK(rm.faithful());
    Report vrep = verify_representation(rm, true);
    INFO(vrep.to_text());
    CHECK(vrep.ok());

    // a form that does not mirror the involution is rejected with a witness
    HermitianForm swapped(Matrix::from_ints(f2, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}));
    CHECK_THROWS_AS(rho(eta, InnerProductSpace(f2, 3, swapped)), StarPreservationFailed);

    // a mislabeled frame image is rejected up front
    std::vector<Subspace> bad_iota = iota;
    std::swap(bad_iota[st.a[1]], bad_iota[st.a[2]]);
    CHECK_THROWS_AS(Eta(ds, bad_iota, tgt), FrameImageNotStable);
}

TEST_CASE("rho over the rational matrix ring is the identity") {
    auto q = Field::rationals();
    SubspaceContext ctx(InnerProductSpace::dot(q, 3));
    Frame<SubspaceContext> fr = stabilize_frame(ctx, canonical_frame(ctx, 3));
    SubDS ds = decomposition_system_of_frame(ctx, fr);
    CoefficientRing C = coefficient_ring(ds);

    const HermitianForm& form = ctx.space().form();
    Rng rng(97);
    for (int t = 0; t < 256; ++t) {
        Matrix m = rng.matrix(q, 3, 3);
        Matrix img = rho_via_graphs(ds, m);
        REQUIRE(img == m);
        CHECK(rho_via_graphs(ds, form.adjoint(m)) == form.adjoint(img));
        CHECK(matrix_ring_member(ds, C, m));
    }
    CHECK(C.member(ds.proj(0)));
}

TEST_CASE("adjointness agrees with graph orthogonality") {
    auto q = Field::rationals();
    SubspaceContext ctx(InnerProductSpace::dot(q, 4));
    Subspace ui = Subspace::span(q, 4, {iv(q, {1, 0, 0, 0}), iv(q, {0, 1, 0, 0})});
    Subspace uj = Subspace::span(q, 4, {iv(q, {0, 0, 1, 0}), iv(q, {0, 0, 0, 1})});

    // f: e0 -> e2, e1 -> e2 + e3; its dot adjoint is the transpose
    Matrix F = Matrix::from_ints(q, {{0, 0, 0, 0}, {0, 0, 0, 0}, {1, 1, 0, 0}, {0, 1, 0, 0}});
    Matrix G = Matrix::from_ints(q, {{0, 0, 1, 0}, {0, 0, 1, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}});
    AdjointVerdicts v = adjoint_checks(ctx, ui, uj, F, G);
    CHECK(v.pointwise);
    CHECK(v.graph_test);
    CHECK(v.agree);

    // perturbing one entry breaks both tests simultaneously
    Matrix G2 = G;
    G2.at(0, 3) = q->one();
    AdjointVerdicts v2 = adjoint_checks(ctx, ui, uj, F, G2);
    CHECK_FALSE(v2.pointwise);
    CHECK_FALSE(v2.graph_test);
    CHECK(v2.agree);

    Subspace skew = Subspace::span(q, 4, {iv(q, {0, 1, 1, 0})});
    CHECK_THROWS_AS(adjoint_checks(ctx, ui, skew, F, G), SummandsNotOrthogonal);
}

TEST_CASE("adjoints are unique, exhaustively over GF(3)") {
    auto f3 = Field::gf(3);
    // dims 1 and 2 with orthogonal coordinate summands
    for (std::size_t d : {std::size_t(1), std::size_t(2)}) {
        std::size_t m = 2 * d;
        SubspaceContext ctx(InnerProductSpace::dot(f3, m));
        std::vector<Vec> bi, bj;
        for (std::size_t t = 0; t < d; ++t) {
            Vec v(m, f3->zero()), w(m, f3->zero());
            v[t] = f3->one();
            w[d + t] = f3->one();
            bi.push_back(v);
            bj.push_back(w);
        }
        Subspace ui = Subspace::span(f3, m, bi);
        Subspace uj = Subspace::span(f3, m, bj);

        // all morphisms U_i -> U_j (resp. back), extended by zero
        auto all_maps = [&](bool forward) {
            std::vector<Matrix> out;
            std::size_t cells = d * d;
            for (std::size_t code = 0;; ++code) {
                std::size_t c = code;
                Matrix F(f3, m, m);
                for (std::size_t t = 0; t < cells; ++t) {
                    std::size_t row = t / d, col = t % d;
                    if (forward)
                        F.at(d + row, col) = f3->from_int(static_cast<long long>(c % 3));
                    else
                        F.at(row, d + col) = f3->from_int(static_cast<long long>(c % 3));
                    c /= 3;
                }
                out.push_back(F);
                std::size_t total = 1;
                for (std::size_t t = 0; t < cells; ++t) total *= 3;
                if (code + 1 == total) break;
            }
            return out;
        };
        auto fs = all_maps(true);
        auto gs = all_maps(false);
        for (const Matrix& F : fs) {
            std::size_t hits = 0;
            Matrix found(f3, m, m);
            for (const Matrix& G : gs) {
                AdjointVerdicts v = adjoint_checks(ctx, ui, uj, F, G);
                CHECK(v.agree);
                if (v.pointwise) {
                    ++hits;
                    found = G;
                }
            }
            CHECK(hits == 1);  // exactly one adjoint
            // for the dot form it is the transpose
            CHECK(found == F.transpose());
        }
    }
}

TEST_CASE("ring-side graph orthogonality characterizes the involution") {
    auto f3 = Field::gf(3);
    TableRing r = matrix_table_ring(3, 2);
    IdealLattice il = principal_right_ideal_lattice(r);
    REQUIRE(il.lattice.has_ortho());

    TableRing::Elem ei = elem_of_matrix(r, Matrix::from_ints(f3, {{1, 0}, {0, 0}}));
    TableRing::Elem ej = elem_of_matrix(r, Matrix::from_ints(f3, {{0, 0}, {0, 1}}));

    std::size_t pairs = 0;
    for (TableRing::Elem a = 0; a < r.size(); ++a) {
        if (r.mul(r.mul(ei, a), ej) != a) continue;  // a in e_i R e_j
        for (TableRing::Elem b = 0; b < r.size(); ++b) {
            if (r.mul(r.mul(ej, b), ei) != b) continue;  // b in e_j R e_i
            ++pairs;
            CHECK(graphs_orthogonal(r, il, ei, ej, a, b) == (a == r.star(b)));
        }
    }
    CHECK(pairs == 9);
}

TEST_CASE("representations extend from two-sided ideals") {
    auto f3 = Field::gf(3);
    TableRing m2 = matrix_table_ring(3, 2);
    InnerProductSpace sp = InnerProductSpace::dot(f3, 2);

    SECTION("the ideal I = R reproduces the representation") {
        Bits all(m2.size());
        all.set();
        auto vrho = [&](TableRing::Elem e) { return m2.matrix_image(e); };
        RepresentationMap rep = extend_ideal_representation(m2, all, vrho, sp);
        bool same = true;
        for (TableRing::Elem e = 0; e < m2.size(); ++e)
            same = same && rep.images[e] == m2.matrix_image(e);
        CHECK(same);
        CHECK(rep.faithful());
        Report vr = verify_representation(rep, true);
        INFO(vr.to_text());
        CHECK(vr.ok());
    }

    SECTION("a proper ideal of GF(3) x M_2(GF(3)) loses faithfulness") {
        TableRing g1 = matrix_table_ring(3, 1);
        TableRing prod = TableRing::product(g1, m2);
        REQUIRE(prod.size() == 3 * m2.size());
        Bits ideal(prod.size());
        for (TableRing::Elem y = 0; y < m2.size(); ++y) ideal.set(y);  // (0, y)
        auto vrho = [&](TableRing::Elem e) { return m2.matrix_image(e % m2.size()); };
        RepresentationMap rep = extend_ideal_representation(prod, ideal, vrho, sp);
        CHECK_FALSE(rep.faithful());
        REQUIRE(rep.kernel_witness.has_value());
        CHECK(*rep.kernel_witness == static_cast<TableRing::Elem>(m2.size()));  // (1, 0)
        CHECK(prod.label(*rep.kernel_witness) == "([[1]],[[0,0];[0,0]])");
        auto verdict = prod.left_action_injective(ideal);
        CHECK_FALSE(verdict.injective);
        CHECK(verdict.witness == *rep.kernel_witness);
        Report vr = verify_representation(rep, false);
        INFO(vr.to_text());
        CHECK(vr.ok());

        // a form that breaks the *-condition on I is rejected
        HermitianForm swapped(Matrix::from_ints(f3, {{0, 1}, {1, 0}}));
        CHECK_THROWS_AS(
            extend_ideal_representation(prod, ideal, vrho, InnerProductSpace(f3, 2, swapped)),
            IncompatibleRestrictions);
    }
}
