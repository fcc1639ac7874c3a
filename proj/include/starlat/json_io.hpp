// JSON descriptors (schema "v1") for fields, forms, rings, lattices,
// subspaces, frames, reports and representations, plus the built-in
// catalog of reference rings. Serialization is deterministic: nlohmann
// objects keep keys sorted, scalars are written in canonical form.
#pragma once

#include <starlat/coord.hpp>
#include <starlat/frames.hpp>
#include <starlat/ring_lattice.hpp>
#include <starlat/star_ring.hpp>
#include <starlat/subspace.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace starlat {

using Json = nlohmann::json;

struct BadDescriptor : std::runtime_error {
    explicit BadDescriptor(const std::string& w) : std::runtime_error("bad descriptor: " + w) {}
};

inline const char* kSchemaVersion = "v1";

// ---------------------------------------------------------------------------
// Fields and scalars.
// ---------------------------------------------------------------------------

inline Json field_to_json(const FieldPtr& f) {
    switch (f->kind()) {
        case FieldKind::Finite:
            return Json{{"kind", "gf"},
                        {"p", f->char_p()},
                        {"k", f->ext_degree()},
                        {"conj", f->involution() == InvolutionKind::Frobenius ? "frobenius" : "id"}};
        case FieldKind::Rationals: return Json{{"kind", "q"}};
        case FieldKind::QuadExt:
            return Json{{"kind", "q_sqrt"},
                        {"d", f->quad_d()},
                        {"conj",
                         f->involution() == InvolutionKind::Conjugation ? "conj" : "id"}};
    }
    throw BadDescriptor("unknown field kind");
}

inline FieldPtr field_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "gf")
        return Field::gf(j.at("p").get<unsigned>(), j.value("k", 1u),
                         j.value("conj", std::string("id")) == "frobenius");
    if (kind == "q") return Field::rationals();
    if (kind == "q_sqrt")
        return Field::quadratic(j.at("d").get<long long>(),
                                j.value("conj", std::string("conj")) == "conj");
    throw BadDescriptor("unknown field kind '" + kind + "'");
}

/// Finite fields: carrier index. Q: canonical "p/q" string. Q(sqrt d):
/// pair of such strings.
inline Json scalar_to_json(const FieldPtr& f, const Scalar& s) {
    switch (f->kind()) {
        case FieldKind::Finite: return static_cast<std::uint64_t>(f->index(s));
        case FieldKind::Rationals: return f->rat_value(s).str();
        case FieldKind::QuadExt: {
            const QuadScalar& q = f->quad_value(s);
            return Json::array({q.a.str(), q.b.str()});
        }
    }
    throw BadDescriptor("unknown field kind");
}

inline Scalar scalar_from_json(const FieldPtr& f, const Json& j) {
    switch (f->kind()) {
        case FieldKind::Finite:
            if (j.is_number_integer()) return f->element(j.get<std::uint64_t>());
            throw BadDescriptor("finite scalar must be a carrier index");
        case FieldKind::Rationals:
            if (j.is_string()) return f->from_rat(Rat(j.get<std::string>()));
            if (j.is_number_integer()) return f->from_int(j.get<long long>());
            throw BadDescriptor("rational scalar must be a string or integer");
        case FieldKind::QuadExt:
            if (j.is_array() && j.size() == 2)
                return f->from_quad(Rat(j.at(0).get<std::string>()),
                                    Rat(j.at(1).get<std::string>()));
            if (j.is_number_integer()) return f->from_int(j.get<long long>());
            throw BadDescriptor("quadratic scalar must be a pair of strings");
    }
    throw BadDescriptor("unknown field kind");
}

inline Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m.field(), m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const FieldPtr& f, const Json& j) {
    if (!j.is_array()) throw BadDescriptor("matrix must be an array of rows");
    std::size_t r = j.size(), c = r ? j.at(0).size() : 0;
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (j.at(i).size() != c) throw BadDescriptor("ragged matrix rows");
        for (std::size_t k = 0; k < c; ++k) m.at(i, k) = scalar_from_json(f, j.at(i).at(k));
    }
    return m;
}

inline Json form_to_json(const HermitianForm& phi) {
    return Json{{"dim", phi.dim()}, {"gram", matrix_to_json(phi.gram())}};
}

inline HermitianForm form_from_json(const FieldPtr& f, const Json& j) {
    Matrix g = matrix_from_json(f, j.at("gram"));
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != g.rows())
        throw BadDescriptor("form dim does not match its Gram matrix");
    return HermitianForm(std::move(g));
}

// ---------------------------------------------------------------------------
// Inner-product spaces and subspaces.
// ---------------------------------------------------------------------------

inline Json space_to_json(const InnerProductSpace& sp) {
    return Json{{"field", field_to_json(sp.field())},
                {"dim", sp.dim()},
                {"form", form_to_json(sp.form())}};
}

inline InnerProductSpace space_from_json(const Json& j, bool assume_anisotropic = false) {
    FieldPtr f = field_from_json(j.at("field"));
    std::size_t m = j.at("dim").get<std::size_t>();
    if (!j.contains("form")) return InnerProductSpace::dot(f, m);
    return InnerProductSpace(f, m, form_from_json(f, j.at("form")),
                             assume_anisotropic || j.value("assume_anisotropic", false));
}

/// FNV hash of the canonical dump, rendered as hex; used as the space
/// reference in frame and representation files.
inline std::string descriptor_hash(const Json& j) {
    std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline Json subspace_to_json(const Subspace& s, const Json& space) {
    return Json{{"space", descriptor_hash(space)}, {"basis", matrix_to_json(s.basis())}};
}

inline Subspace subspace_from_json(const SubspaceContext& ctx, const Json& j) {
    const Json& basis = j.is_object() ? j.at("basis") : j;
    if (basis.empty()) return ctx.bottom();
    return Subspace::span(matrix_from_json(ctx.field(), basis));
}

// ---------------------------------------------------------------------------
// Rings.
// ---------------------------------------------------------------------------

/// A loaded ring descriptor: the matrix backend where one exists, the table
/// backend whenever the carrier fits the bound.
struct LoadedRing {
    Json descriptor;
    std::optional<MatrixStarRing> matrix;
    std::optional<TableRing> table;

    const TableRing& require_table() const {
        if (!table) throw BadDescriptor("ring carrier exceeds the table bound");
        return *table;
    }
};

inline LoadedRing ring_from_json(const Json& j,
                                 std::size_t bound = TableRing::kDefaultCarrierBound) {
    LoadedRing out;
    out.descriptor = j;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "matrix") {
        FieldPtr f = field_from_json(j.at("field"));
        std::size_t n = j.at("n").get<std::size_t>();
        HermitianForm phi =
            j.contains("gram")
                ? HermitianForm(matrix_from_json(f, j.at("gram")))
                : HermitianForm::dot(f, n);
        out.matrix.emplace(f, n, std::move(phi));
        if (out.matrix->size() > 0 && out.matrix->size() <= bound)
            out.table = TableRing::materialize(*out.matrix, bound);
        return out;
    }
    if (kind == "table") {
        std::vector<std::vector<TableRing::Elem>> add, mul;
        for (const auto& row : j.at("add")) add.push_back(row.get<std::vector<TableRing::Elem>>());
        for (const auto& row : j.at("mul")) mul.push_back(row.get<std::vector<TableRing::Elem>>());
        std::optional<TableRing::Elem> one;
        if (j.contains("one") && !j.at("one").is_null()) one = j.at("one").get<TableRing::Elem>();
        std::vector<std::string> labels;
        if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
        out.table = TableRing::from_tables(std::move(add), std::move(mul),
                                           j.at("star").get<std::vector<TableRing::Elem>>(),
                                           j.at("zero").get<TableRing::Elem>(), one,
                                           std::move(labels));
        return out;
    }
    if (kind == "product") {
        const Json& factors = j.at("factors");
        if (factors.empty()) throw BadDescriptor("empty product");
        std::optional<TableRing> acc;
        for (const auto& fj : factors) {
            LoadedRing part = ring_from_json(fj, bound);
            const TableRing& t = part.require_table();
            acc = acc ? TableRing::product(*acc, t, bound) : t;
        }
        out.table = std::move(acc);
        return out;
    }
    throw BadDescriptor("unknown ring kind '" + kind + "'");
}

inline Json ring_to_json(const TableRing& r) {
    Json add = Json::array(), mul = Json::array(), star = Json::array(), labels = Json::array();
    for (TableRing::Elem a = 0; a < r.size(); ++a) {
        Json arow = Json::array(), mrow = Json::array();
        for (TableRing::Elem b = 0; b < r.size(); ++b) {
            arow.push_back(r.add(a, b));
            mrow.push_back(r.mul(a, b));
        }
        add.push_back(std::move(arow));
        mul.push_back(std::move(mrow));
        star.push_back(r.star(a));
        labels.push_back(r.label(a));
    }
    Json out{{"kind", "table"}, {"elements", r.size()}, {"add", add}, {"mul", mul},
             {"star", star},    {"zero", r.zero()},     {"labels", labels}};
    out["one"] = r.unital() ? Json(r.one()) : Json(nullptr);
    return out;
}

// ---------------------------------------------------------------------------
// Lattices.
// ---------------------------------------------------------------------------

inline Json lattice_to_json(const FiniteLattice& l) {
    Json leq = Json::array(), labels = Json::array();
    for (FiniteLattice::Elem a = 0; a < l.size(); ++a) {
        std::string row(l.size(), '0');
        for (FiniteLattice::Elem b = 0; b < l.size(); ++b)
            if (l.leq(a, b)) row[b] = '1';
        leq.push_back(row);
        labels.push_back(l.label(a));
    }
    Json out{{"elements", l.size()}, {"leq", leq}, {"labels", labels}};
    if (l.has_ortho()) {
        Json o = Json::array();
        for (FiniteLattice::Elem a = 0; a < l.size(); ++a) o.push_back(l.ortho(a));
        out["ortho"] = o;
    } else {
        out["ortho"] = nullptr;
    }
    return out;
}

inline FiniteLattice lattice_from_json(const Json& j) {
    std::size_t n = j.at("elements").get<std::size_t>();
    std::vector<Bits> leq;
    for (const auto& row : j.at("leq")) {
        std::string s = row.get<std::string>();
        if (s.size() != n) throw BadDescriptor("leq row has wrong length");
        Bits b(n);
        for (std::size_t i = 0; i < n; ++i)
            if (s[i] == '1') b.set(i);
        leq.push_back(std::move(b));
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    FiniteLattice l = FiniteLattice::from_leq(std::move(leq), std::move(labels));
    if (j.contains("ortho") && !j.at("ortho").is_null())
        l.set_ortho(j.at("ortho").get<std::vector<FiniteLattice::Elem>>());
    return l;
}

// ---------------------------------------------------------------------------
// Frames. Lattice-backed frames reference elements by index; subspace
// frames carry basis matrices and embed their space descriptor.
// ---------------------------------------------------------------------------

namespace detail {
inline std::pair<std::size_t, std::size_t> parse_axis_key(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw BadDescriptor("axis key must be 'j,i'");
    return {std::stoul(s.substr(0, comma)), std::stoul(s.substr(comma + 1))};
}
}  // namespace detail

inline Json frame_to_json(const Frame<FiniteLattice>& fr, const Json& context) {
    Json a = Json::array(), a0 = Json::array(), axes = Json::object(), z = Json::object();
    for (auto x : fr.a) a.push_back(x);
    for (std::size_t i = 0; i < fr.a0.size(); ++i) a0.push_back(i == 0 ? Json(nullptr) : Json(fr.a0[i]));
    for (const auto& [key, ax] : fr.axes)
        axes[std::to_string(key.first) + "," + std::to_string(key.second)] = ax;
    for (const auto& [key, zz] : fr.z)
        z[std::to_string(key.first) + "," + std::to_string(key.second)] = zz;
    return Json{{"schema", kSchemaVersion},
                {"context", context},
                {"format", Json::array({fr.n, fr.k})},
                {"a", a},
                {"a0", a0},
                {"axes", axes},
                {"z", z},
                {"level", fr.axes.empty() ? "basic" : "stable"}};
}

inline Frame<FiniteLattice> frame_from_json_lattice(const Json& j) {
    Frame<FiniteLattice> fr;
    fr.n = j.at("format").at(0).get<std::size_t>();
    fr.k = j.at("format").at(1).get<std::size_t>();
    for (const auto& x : j.at("a")) fr.a.push_back(x.get<FiniteLattice::Elem>());
    for (const auto& x : j.at("a0"))
        fr.a0.push_back(x.is_null() ? FiniteLattice::Elem(0) : x.get<FiniteLattice::Elem>());
    for (auto& [key, val] : j.at("axes").items())
        fr.axes.insert_or_assign(detail::parse_axis_key(key), val.get<FiniteLattice::Elem>());
    for (auto& [key, val] : j.at("z").items())
        fr.z.insert_or_assign(detail::parse_axis_key(key), val.get<FiniteLattice::Elem>());
    return fr;
}

inline Json frame_to_json(const SubspaceContext& ctx, const Frame<SubspaceContext>& fr,
                          const Json& context) {
    auto enc = [&](const Subspace& s) { return matrix_to_json(s.basis()); };
    Json a = Json::array(), a0 = Json::array(), axes = Json::object(), z = Json::object();
    for (const auto& x : fr.a) a.push_back(enc(x));
    for (std::size_t i = 0; i < fr.a0.size(); ++i) a0.push_back(i == 0 ? Json(nullptr) : enc(fr.a0[i]));
    for (const auto& [key, ax] : fr.axes)
        axes[std::to_string(key.first) + "," + std::to_string(key.second)] = enc(ax);
    for (const auto& [key, zz] : fr.z)
        z[std::to_string(key.first) + "," + std::to_string(key.second)] = enc(zz);
    return Json{{"schema", kSchemaVersion},
                {"context", context},
                {"format", Json::array({fr.n, fr.k})},
                {"a", a},
                {"a0", a0},
                {"axes", axes},
                {"z", z},
                {"level", fr.axes.empty() ? "basic" : "stable"}};
}

inline Frame<SubspaceContext> frame_from_json_subspace(const SubspaceContext& ctx, const Json& j) {
    auto dec = [&](const Json& b) {
        if (b.is_null() || b.empty()) return ctx.bottom();
        return Subspace::span(matrix_from_json(ctx.field(), b));
    };
    Frame<SubspaceContext> fr;
    fr.n = j.at("format").at(0).get<std::size_t>();
    fr.k = j.at("format").at(1).get<std::size_t>();
    for (const auto& x : j.at("a")) fr.a.push_back(dec(x));
    for (const auto& x : j.at("a0")) fr.a0.push_back(dec(x));
    for (auto& [key, val] : j.at("axes").items())
        fr.axes.insert_or_assign(detail::parse_axis_key(key), dec(val));
    for (auto& [key, val] : j.at("z").items())
        fr.z.insert_or_assign(detail::parse_axis_key(key), dec(val));
    return fr;
}

// ---------------------------------------------------------------------------
// Reports and representations.
// ---------------------------------------------------------------------------

inline Json report_to_json(const Report& rep, std::uint64_t seed) {
    Json items = Json::array();
    for (const auto& it : rep.items)
        items.push_back(Json{{"name", it.name}, {"ok", it.ok}, {"witness", it.witness}});
    return Json{{"schema", kSchemaVersion},
                {"subject", rep.subject},
                {"ok", rep.ok()},
                {"seed", seed},
                {"items", items}};
}

inline Json representation_to_json(const RepresentationMap& rep, const std::string& map_kind,
                                   std::size_t samples, std::uint64_t seed,
                                   const Json& verdicts) {
    Json out{{"schema", kSchemaVersion},
             {"ring", Json{{"kind", "table"}, {"elements", rep.ring->size()}}},
             {"space", space_to_json(rep.space)},
             {"map", map_kind},
             {"samples", samples},
             {"seed", seed},
             {"verdicts", verdicts}};
    out["faithful"] = rep.faithful();
    if (rep.kernel_witness) out["kernel_witness"] = rep.ring->label(*rep.kernel_witness);
    return out;
}

// ---------------------------------------------------------------------------
// Catalog. M_1 and M_2 with the transpose involution over p in {3, 7, 11}
// are *-regular; M_3 over GF(2) and GF(3) are shipped as flagged
// non-*-regular references. Flags are never trusted: callers re-verify
// through the witness search.
// ---------------------------------------------------------------------------

struct CatalogEntry {
    std::string name;
    std::string description;
    Json descriptor;
    bool expect_star_regular;
};

inline Json matrix_ring_descriptor(unsigned p, std::size_t n) {
    return Json{{"kind", "matrix"},
                {"field", Json{{"kind", "gf"}, {"p", p}, {"k", 1}, {"conj", "id"}}},
                {"n", n}};
}

inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> out;
        for (unsigned p : {3u, 7u, 11u}) {
            out.push_back({"m1_gf" + std::to_string(p) + "_transpose",
                           "GF(" + std::to_string(p) + ") with the identity involution",
                           matrix_ring_descriptor(p, 1), true});
            out.push_back({"m2_gf" + std::to_string(p) + "_transpose",
                           "M_2(GF(" + std::to_string(p) + ")) with transpose",
                           matrix_ring_descriptor(p, 2), true});
        }
        out.push_back({"m3_gf2_transpose", "M_3(GF(2)) with transpose (isotropic dot form)",
                       matrix_ring_descriptor(2, 3), false});
        out.push_back({"m3_gf3_transpose", "M_3(GF(3)) with transpose (isotropic dot form)",
                       matrix_ring_descriptor(3, 3), false});
        out.push_back({"gf3_x_m2_gf3", "GF(3) x M_2(GF(3)), componentwise involution",
                       Json{{"kind", "product"},
                            {"factors", Json::array({matrix_ring_descriptor(3, 1),
                                                     matrix_ring_descriptor(3, 2)})}},
                       true});
        out.push_back({"m2_gf3_x_gf3", "M_2(GF(3)) x GF(3), componentwise involution",
                       Json{{"kind", "product"},
                            {"factors", Json::array({matrix_ring_descriptor(3, 2),
                                                     matrix_ring_descriptor(3, 1)})}},
                       true});
        return out;
    }();
    return entries;
}

inline const CatalogEntry* catalog_find(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace starlat
