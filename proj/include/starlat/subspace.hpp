// Subspaces of an inner-product space over an exact field, stored as
// canonical rref bases. SubspaceContext is the infinite-but-computable
// lattice backend: meet by the kernel method, join by row stacking,
// orthocomplement through the form.
#pragma once

#include <starlat/lattice.hpp>
#include <starlat/matrix.hpp>
#include <starlat/report.hpp>
#include <starlat/rng.hpp>

#include <string>
#include <unordered_set>
#include <vector>

namespace starlat {

class Subspace {
public:
    /// Row space of the given vectors; the stored basis is the rref with
    /// zero rows dropped, so equality is structural.
    static Subspace span(const FieldPtr& f, std::size_t ambient, const std::vector<Vec>& rows) {
        if (rows.empty()) return zero(f, ambient);
        Matrix m = Matrix::from_rows(f, rows);
        if (m.cols() != ambient) throw DimensionMismatch();
        return Subspace(canonical(m));
    }
    static Subspace span(const Matrix& rows) { return Subspace(canonical(rows)); }
    static Subspace zero(const FieldPtr& f, std::size_t ambient) {
        return Subspace(Matrix(f, 0, ambient));
    }
    static Subspace full(const FieldPtr& f, std::size_t ambient) {
        return Subspace(Matrix::identity(f, ambient));
    }

    const Matrix& basis() const { return basis_; }
    std::size_t dim() const { return basis_.rows(); }
    std::size_t ambient() const { return basis_.cols(); }
    const FieldPtr& field() const { return basis_.field(); }

    bool contains(const Vec& v) const {
        Matrix stacked(field(), dim() + 1, ambient());
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < ambient(); ++j) stacked.at(i, j) = basis_.at(i, j);
        for (std::size_t j = 0; j < ambient(); ++j) stacked.at(dim(), j) = v[j];
        return rank(stacked) == dim();
    }
    bool contains(const Subspace& u) const {
        for (std::size_t i = 0; i < u.dim(); ++i)
            if (!contains(u.basis_.row(i))) return false;
        return true;
    }

    bool operator==(const Subspace& o) const { return basis_ == o.basis_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }
    std::size_t hash() const { return basis_.hash(); }
    std::string to_string() const { return dim() == 0 ? "span{}" : "span" + basis_.to_string(); }

private:
    explicit Subspace(Matrix b) : basis_(std::move(b)) {}
    static Matrix canonical(const Matrix& m) {
        RrefResult rr = rref(m);
        Matrix b(m.field(), rr.rank, m.cols());
        for (std::size_t i = 0; i < rr.rank; ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) b.at(i, j) = rr.R.at(i, j);
        return b;
    }
    Matrix basis_;
};

struct SubspaceHash {
    std::size_t operator()(const Subspace& s) const { return s.hash(); }
};

/// V = D^m with a nondegenerate Hermitian form; anisotropy is certified on
/// construction and recorded (it decides whether ortho is a complement).
class InnerProductSpace {
public:
    InnerProductSpace(FieldPtr field, std::size_t m, HermitianForm phi,
                      bool assume_anisotropic = false)
        : field_(std::move(field)),
          m_(m),
          phi_(std::move(phi)),
          cert_(certify_anisotropy(phi_, assume_anisotropic)) {
        if (phi_.dim() != m_) throw DimensionMismatch();
    }
    static InnerProductSpace dot(const FieldPtr& f, std::size_t m) {
        return InnerProductSpace(f, m, HermitianForm::dot(f, m));
    }

    const FieldPtr& field() const { return field_; }
    std::size_t dim() const { return m_; }
    const HermitianForm& form() const { return phi_; }
    const AnisotropyCertificate& anisotropy() const { return cert_; }

private:
    FieldPtr field_;
    std::size_t m_;
    HermitianForm phi_;
    AnisotropyCertificate cert_;
};

class SubspaceContext {
public:
    using Elem = Subspace;

    explicit SubspaceContext(InnerProductSpace space) : space_(std::move(space)) {}

    const InnerProductSpace& space() const { return space_; }
    const FieldPtr& field() const { return space_.field(); }
    std::size_t ambient() const { return space_.dim(); }

    Elem bottom() const { return Subspace::zero(field(), ambient()); }
    Elem top() const { return Subspace::full(field(), ambient()); }
    bool equal(const Elem& a, const Elem& b) const { return a == b; }
    bool leq(const Elem& a, const Elem& b) const { return b.contains(a); }

    Elem join(const Elem& a, const Elem& b) const {
        Matrix stacked(field(), a.dim() + b.dim(), ambient());
        for (std::size_t i = 0; i < a.dim(); ++i)
            for (std::size_t j = 0; j < ambient(); ++j) stacked.at(i, j) = a.basis().at(i, j);
        for (std::size_t i = 0; i < b.dim(); ++i)
            for (std::size_t j = 0; j < ambient(); ++j)
                stacked.at(a.dim() + i, j) = b.basis().at(i, j);
        return Subspace::span(stacked);
    }

    /// Kernel method: w in Row(A) ∩ Row(B) iff w = uA = vB, i.e. (u, v) is
    /// in the kernel of the m x (a+b) matrix [A^T | -B^T].
    Elem meet(const Elem& a, const Elem& b) const {
        std::size_t da = a.dim(), db = b.dim();
        if (da == 0 || db == 0) return bottom();
        Matrix m(field(), ambient(), da + db);
        for (std::size_t i = 0; i < ambient(); ++i) {
            for (std::size_t j = 0; j < da; ++j) m.at(i, j) = a.basis().at(j, i);
            for (std::size_t j = 0; j < db; ++j)
                m.at(i, da + j) = field()->neg(b.basis().at(j, i));
        }
        RrefResult rr = rref(m);
        std::vector<Vec> rows;
        for (std::size_t k = 0; k < rr.kernel.rows(); ++k) {
            Vec w(ambient(), field()->zero());
            for (std::size_t j = 0; j < da; ++j)
                for (std::size_t c = 0; c < ambient(); ++c)
                    w[c] = field()->add(w[c],
                                        field()->mul(rr.kernel.at(k, j), a.basis().at(j, c)));
            rows.push_back(std::move(w));
        }
        Elem out = Subspace::span(field(), ambient(), rows);
        // exact rank identity, checked on every call
        if (out.dim() + join(a, b).dim() != da + db)
            throw std::runtime_error("rank identity violated in meet");
        return out;
    }

    /// U⊥ = {w : <u,w> = 0 for all u in U} = kernel of conj(A) H.
    Elem ortho(const Elem& u) const {
        Matrix m = u.basis().conj() * space_.form().gram();
        RrefResult rr = rref(m);
        std::vector<Vec> rows;
        for (std::size_t k = 0; k < rr.kernel.rows(); ++k) rows.push_back(rr.kernel.row(k));
        return Subspace::span(field(), ambient(), rows);
    }
    bool has_ortho() const { return true; }

    /// Complement of b in [0, a]: relative orthocomplement b⊥ ∧ a on
    /// anisotropic spaces, pivot completion otherwise.
    Elem complement_in_interval(const Elem& b, const Elem& a) const {
        if (!leq(b, a)) throw std::runtime_error("complement_in_interval needs b <= a");
        if (space_.anisotropy().anisotropic) return meet(ortho(b), a);
        std::vector<Vec> ext;
        Matrix stacked(field(), b.dim() + a.dim(), ambient());
        std::size_t used = b.dim();
        for (std::size_t i = 0; i < b.dim(); ++i)
            for (std::size_t j = 0; j < ambient(); ++j) stacked.at(i, j) = b.basis().at(i, j);
        std::size_t cur = b.dim();
        for (std::size_t i = 0; i < a.dim(); ++i) {
            for (std::size_t j = 0; j < ambient(); ++j) stacked.at(used, j) = a.basis().at(i, j);
            Matrix head(field(), used + 1, ambient());
            for (std::size_t r = 0; r <= used; ++r)
                for (std::size_t j = 0; j < ambient(); ++j) head.at(r, j) = stacked.at(r, j);
            if (rank(head) > cur) {
                ext.push_back(a.basis().row(i));
                ++used;
                ++cur;
            }
        }
        return Subspace::span(field(), ambient(), ext);
    }

    Subspace random_subspace(Rng& rng, std::size_t max_gens) const {
        std::vector<Vec> rows;
        std::size_t n = rng.next(max_gens + 1);
        for (std::size_t i = 0; i < n; ++i) rows.push_back(rng.vector(field(), ambient()));
        return Subspace::span(field(), ambient(), rows);
    }

private:
    InnerProductSpace space_;
};

static_assert(LatticeContext<SubspaceContext>);

/// Every subspace of a finite-field space, found by closing the atoms under
/// join. Throws BackendTooLarge past the element budget.
inline std::vector<Subspace> all_subspaces(const SubspaceContext& ctx,
                                           std::size_t budget = 100000) {
    const FieldPtr& f = ctx.field();
    if (!f->finite()) throw std::runtime_error("enumeration needs a finite field");
    std::size_t q = f->size(), m = ctx.ambient(), total = 1;
    for (std::size_t i = 0; i < m; ++i) total *= q;
    std::vector<Subspace> lines;
    std::unordered_set<Subspace, SubspaceHash> seen;
    for (std::size_t idx = 1; idx < total; ++idx) {
        Vec v;
        std::size_t x = idx;
        for (std::size_t i = 0; i < m; ++i, x /= q) v.push_back(f->element(x % q));
        Subspace l = Subspace::span(f, m, {v});
        if (seen.insert(l).second) lines.push_back(l);
    }
    std::vector<Subspace> out{ctx.bottom()};
    seen.clear();
    seen.insert(ctx.bottom());
    std::vector<Subspace> work{ctx.bottom()};
    while (!work.empty()) {
        Subspace u = work.back();
        work.pop_back();
        for (const Subspace& l : lines) {
            Subspace j = ctx.join(u, l);
            if (seen.insert(j).second) {
                if (out.size() >= budget) throw BackendTooLarge();
                out.push_back(j);
                work.push_back(j);
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Subspace& a, const Subspace& b) { return a.dim() < b.dim(); });
    return out;
}

/// MOL laws of the subspace lattice on a random sample; records the
/// anisotropy certificate and a witness when the form is isotropic.
inline Report verify_mol_context(const SubspaceContext& ctx, std::size_t samples = 100,
                                 std::uint64_t seed = 0) {
    Report rep;
    rep.subject = "subspace lattice over " + std::to_string(ctx.ambient()) + " dims";
    const auto& cert = ctx.space().anisotropy();
    std::string w = cert.witness ? "isotropic " + Matrix::from_rows(ctx.field(), {*cert.witness}).to_string()
                                 : cert.method;
    rep.check("form anisotropic (" + cert.method + ")", cert.anisotropic, w);

    Rng rng(seed);
    bool double_ortho = true, de_morgan = true, compl_meet = true, compl_join = true,
         dim_sum = true, modular = true;
    for (std::size_t t = 0; t < samples; ++t) {
        Subspace u = ctx.random_subspace(rng, ctx.ambient());
        Subspace v = ctx.random_subspace(rng, ctx.ambient());
        Subspace uo = ctx.ortho(u);
        double_ortho = double_ortho && ctx.ortho(uo) == u;
        de_morgan = de_morgan && ctx.ortho(ctx.join(u, v)) == ctx.meet(uo, ctx.ortho(v));
        dim_sum = dim_sum && u.dim() + uo.dim() == ctx.ambient();
        if (cert.anisotropic) {
            compl_meet = compl_meet && ctx.meet(u, uo) == ctx.bottom();
            compl_join = compl_join && ctx.join(u, uo) == ctx.top();
        }
        Subspace x = ctx.random_subspace(rng, ctx.ambient());
        if (ctx.leq(x, v))
            modular = modular &&
                      ctx.join(x, ctx.meet(u, v)) == ctx.meet(ctx.join(x, u), v);
        Subspace xv = ctx.meet(x, v);  // force a comparable triple
        modular = modular &&
                  ctx.join(xv, ctx.meet(u, v)) == ctx.meet(ctx.join(xv, u), v);
    }
    rep.check("U⊥⊥ = U (sampled)", double_ortho);
    rep.check("(U v W)⊥ = U⊥ ∧ W⊥ (sampled)", de_morgan);
    rep.check("dim U + dim U⊥ = m (sampled)", dim_sum);
    if (cert.anisotropic) {
        rep.check("U ∧ U⊥ = 0 (sampled)", compl_meet);
        rep.check("U v U⊥ = V (sampled)", compl_join);
    }
    rep.check("modular law (sampled)", modular);
    return rep;
}

}  // namespace starlat
