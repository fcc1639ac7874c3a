// Involutive rings with exact arithmetic: a finite table backend and a
// matrix backend over an exact field with a Hermitian form. On top of both,
// the Rickart calculus (quasi-inverse, left/right projections, the relative
// inverse q), *-regularity verdicts, corners, ideals, quotients and closure.
#pragma once

#include <starlat/matrix.hpp>
#include <starlat/report.hpp>

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace starlat {

using Bits = boost::dynamic_bitset<>;

struct NotRegularAt : std::runtime_error {
    explicit NotRegularAt(const std::string& what)
        : std::runtime_error("no quasi-inverse exists at " + what) {}
};
struct NotAProjection : std::runtime_error {
    NotAProjection() : std::runtime_error("element is not a projection") {}
};
struct NotUnital : std::runtime_error {
    NotUnital() : std::runtime_error("operation requires a unital ring") {}
};
struct BackendTooLarge : std::runtime_error {
    BackendTooLarge() : std::runtime_error("carrier exceeds the configured bound") {}
};
struct ClosureBudgetExceeded : std::runtime_error {
    ClosureBudgetExceeded() : std::runtime_error("closure exceeded its element budget") {}
};

struct StarRegVerdict {
    bool star_regular = true;
    bool regular_clause = true;   // every element has a quasi-inverse
    bool positivity_clause = true;  // xx* = 0 implies x = 0
    std::string witness;
};

// ---------------------------------------------------------------------------
// Matrix backend: all n x n matrices over an exact field, involution given
// by the form-adjoint a -> H^{-1} conj(a)^T H.
// ---------------------------------------------------------------------------

class MatrixStarRing {
public:
    using Elem = Matrix;

    MatrixStarRing(FieldPtr field, std::size_t n, HermitianForm form)
        : field_(std::move(field)), n_(n), form_(std::move(form)) {
        if (form_.dim() != n_) throw DimensionMismatch();
    }
    static MatrixStarRing transpose_ring(const FieldPtr& f, std::size_t n) {
        return MatrixStarRing(f, n, HermitianForm::dot(f, n));
    }

    const FieldPtr& field() const { return field_; }
    std::size_t dim() const { return n_; }
    const HermitianForm& form() const { return form_; }

    Elem zero() const { return Matrix(field_, n_, n_); }
    Elem one() const { return Matrix::identity(field_, n_); }
    bool unital() const { return true; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem star(const Elem& a) const { return form_.adjoint(a); }
    bool equal(const Elem& a, const Elem& b) const { return a == b; }
    bool is_zero(const Elem& a) const { return a.is_zero(); }
    bool is_idempotent(const Elem& e) const { return e * e == e; }
    bool is_projection(const Elem& e) const { return is_idempotent(e) && star(e) == e; }
    std::string label(const Elem& a) const { return a.to_string(); }

    /// Number of elements when the base field is finite (0 otherwise).
    std::size_t size() const {
        if (!field_->finite()) return 0;
        std::size_t total = 1;
        for (std::size_t i = 0; i < n_ * n_; ++i) {
            total *= field_->size();
            if (total > (std::size_t(1) << 26)) return 0;  // effectively infinite
        }
        return total;
    }
    Elem element(std::size_t idx) const {
        Matrix m(field_, n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j, idx /= field_->size())
                m.at(i, j) = field_->element(idx % field_->size());
        return m;
    }
    std::size_t index(const Elem& m) const {
        std::size_t idx = 0;
        for (std::size_t i = n_; i-- > 0;)
            for (std::size_t j = n_; j-- > 0;)
                idx = idx * field_->size() + field_->index(m.at(i, j));
        return idx;
    }

    /// Deterministic quasi-inverse from the rank factorization x = P Q with
    /// P the pivot columns of x and Q the nonzero rows of rref(x).
    Elem quasi_inverse(const Elem& x) const {
        if (x.is_zero()) return zero();
        RrefResult rr = rref(x);
        std::size_t r = rr.rank;
        Matrix P(field_, n_, r), Q(field_, r, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t c = 0; c < r; ++c) P.at(i, c) = x.at(i, rr.pivots[c]);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < n_; ++j) Q.at(i, j) = rr.R.at(i, j);
        // right inverse of Q: identity rows at the pivot positions
        Matrix qri(field_, n_, r);
        for (std::size_t c = 0; c < r; ++c) qri.at(rr.pivots[c], c) = field_->one();
        // left inverse of P: invert an r x r block of independent rows
        RrefResult pt = rref(P.transpose());
        Matrix block(field_, r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) block.at(i, j) = P.at(pt.pivots[i], j);
        Matrix binv = inverse(block);
        Matrix pli(field_, r, n_);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) pli.at(i, pt.pivots[j]) = binv.at(i, j);
        Matrix y = qri * pli;
        if (x * y * x != x) throw NotRegularAt(label(x));  // cannot happen over a field
        return y;
    }

    /// Anisotropy-based verdict: the ring is *-regular iff the form admits
    /// no isotropic vector. Finite fields are scanned exhaustively; over the
    /// rationals positive definiteness of the Gram matrix certifies
    /// anisotropy (leading principal minors).
    StarRegVerdict is_star_regular() const {
        StarRegVerdict v;
        std::optional<Vec> iso = isotropic_vector();
        if (!iso) return v;
        // witness x = v * (conj(v)^T H): x x* = <v,v> v conj(v)^T H = 0
        Matrix x(field_, n_, n_);
        Vec u(n_, field_->zero());
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t i = 0; i < n_; ++i)
                u[j] = field_->add(u[j], field_->mul(field_->conj((*iso)[i]), form_.gram().at(i, j)));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) x.at(i, j) = field_->mul((*iso)[i], u[j]);
        if (x.is_zero() || !mul(x, star(x)).is_zero())
            throw std::runtime_error("internal: invalid isotropy witness");
        v.star_regular = false;
        v.positivity_clause = false;
        v.witness = label(x);
        return v;
    }

    /// A nonzero v with <v,v> = 0, or nullopt with anisotropy certified.
    std::optional<Vec> isotropic_vector() const {
        AnisotropyCertificate cert = certify_anisotropy(form_);
        if (cert.anisotropic) return std::nullopt;
        if (!cert.witness) throw std::runtime_error("cannot certify anisotropy of this form");
        return cert.witness;
    }

    Report verify_star_ring(std::size_t samples, std::uint64_t seed) const;

private:
    FieldPtr field_;
    std::size_t n_;
    HermitianForm form_;
};

// ---------------------------------------------------------------------------
// Table backend: a finite ring given by full operation tables. Elements are
// indices into the carrier; all structural questions are decided by
// exhaustion.
// ---------------------------------------------------------------------------

class TableRing {
public:
    using Elem = std::uint32_t;

    static constexpr std::size_t kDefaultCarrierBound = 6561;

    static TableRing from_tables(std::vector<std::vector<Elem>> add,
                                 std::vector<std::vector<Elem>> mul, std::vector<Elem> star,
                                 Elem zero, std::optional<Elem> one,
                                 std::vector<std::string> labels = {}) {
        TableRing r;
        r.k_ = add.size();
        r.add_.assign(r.k_ * r.k_, 0);
        r.mul_.assign(r.k_ * r.k_, 0);
        for (std::size_t i = 0; i < r.k_; ++i) {
            if (add[i].size() != r.k_ || mul[i].size() != r.k_)
                throw std::runtime_error("ragged ring tables");
            for (std::size_t j = 0; j < r.k_; ++j) {
                r.add_[i * r.k_ + j] = add[i][j];
                r.mul_[i * r.k_ + j] = mul[i][j];
            }
        }
        r.star_ = std::move(star);
        r.zero_ = zero;
        r.one_ = one;
        r.labels_ = std::move(labels);
        r.finish();
        return r;
    }

    /// Enumerate a finite matrix *-ring into a table ring, keeping the matrix
    /// image of every element (used for lattice labelings and embeddings).
    static TableRing materialize(const MatrixStarRing& m,
                                 std::size_t bound = kDefaultCarrierBound) {
        std::size_t k = m.size();
        if (k == 0 || k > bound) throw BackendTooLarge();
        TableRing r;
        r.k_ = k;
        r.add_.resize(k * k);
        r.mul_.resize(k * k);
        r.star_.resize(k);
        r.matrices_.reserve(k);
        for (std::size_t i = 0; i < k; ++i) r.matrices_.push_back(m.element(i));
        for (std::size_t i = 0; i < k; ++i) {
            r.star_[i] = static_cast<Elem>(m.index(m.star(r.matrices_[i])));
            for (std::size_t j = 0; j < k; ++j) {
                r.add_[i * k + j] = static_cast<Elem>(m.index(r.matrices_[i] + r.matrices_[j]));
                r.mul_[i * k + j] = static_cast<Elem>(m.index(r.matrices_[i] * r.matrices_[j]));
            }
        }
        r.zero_ = static_cast<Elem>(m.index(m.zero()));
        r.one_ = static_cast<Elem>(m.index(m.one()));
        r.finish();
        return r;
    }

    static TableRing product(const TableRing& a, const TableRing& b,
                             std::size_t bound = kDefaultCarrierBound) {
        std::size_t k = a.k_ * b.k_;
        if (k > bound) throw BackendTooLarge();
        TableRing r;
        r.k_ = k;
        r.add_.resize(k * k);
        r.mul_.resize(k * k);
        r.star_.resize(k);
        auto pack = [&](Elem x, Elem y) { return static_cast<Elem>(x * b.k_ + y); };
        for (Elem x1 = 0; x1 < a.k_; ++x1)
            for (Elem y1 = 0; y1 < b.k_; ++y1) {
                Elem e1 = pack(x1, y1);
                r.star_[e1] = pack(a.star_[x1], b.star_[y1]);
                r.labels_.push_back("(" + a.label(x1) + "," + b.label(y1) + ")");
                for (Elem x2 = 0; x2 < a.k_; ++x2)
                    for (Elem y2 = 0; y2 < b.k_; ++y2) {
                        Elem e2 = pack(x2, y2);
                        r.add_[e1 * k + e2] = pack(a.add(x1, x2), b.add(y1, y2));
                        r.mul_[e1 * k + e2] = pack(a.mul(x1, x2), b.mul(y1, y2));
                    }
            }
        r.zero_ = pack(a.zero_, b.zero_);
        if (a.one_ && b.one_) r.one_ = pack(*a.one_, *b.one_);
        r.finish();
        return r;
    }

    // --- basic ops ----------------------------------------------------------

    std::size_t size() const { return k_; }
    Elem zero() const { return zero_; }
    bool unital() const { return one_.has_value(); }
    Elem one() const {
        if (!one_) throw NotUnital();
        return *one_;
    }
    Elem add(Elem a, Elem b) const { return add_[a * k_ + b]; }
    Elem mul(Elem a, Elem b) const { return mul_[a * k_ + b]; }
    Elem neg(Elem a) const { return neg_[a]; }
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem star(Elem a) const { return star_[a]; }
    bool equal(Elem a, Elem b) const { return a == b; }
    bool is_zero(Elem a) const { return a == zero_; }
    bool is_idempotent(Elem e) const { return mul(e, e) == e; }
    bool is_projection(Elem e) const { return is_idempotent(e) && star(e) == e; }
    const std::vector<Elem>& projections() const { return projections_; }
    const std::vector<Elem>& idempotents() const { return idempotents_; }

    std::string label(Elem a) const {
        if (a < labels_.size() && !labels_[a].empty()) return labels_[a];
        if (a < matrices_.size()) return matrices_[a].to_string();
        return "#" + std::to_string(a);
    }
    bool has_matrix_images() const { return !matrices_.empty(); }
    const Matrix& matrix_image(Elem a) const { return matrices_.at(a); }

    // --- ideals as bitsets ---------------------------------------------------

    Bits right_set(Elem x) const {  // {x r : r in R}; the ideal xR for unital R
        Bits s(k_);
        for (Elem r = 0; r < k_; ++r) s.set(mul(x, r));
        return s;
    }
    Bits left_set(Elem x) const {
        Bits s(k_);
        for (Elem r = 0; r < k_; ++r) s.set(mul(r, x));
        return s;
    }

    /// Two-sided *-ideal generated by a set of elements.
    Bits star_ideal(const std::vector<Elem>& gens) const {
        Bits s(k_);
        s.set(zero_);
        std::vector<Elem> work(gens);
        for (Elem g : gens) s.set(g);
        // an ideal containing the unit is the whole ring; stop as soon as it
        // shows up instead of closing the full carrier element by element
        auto saturated = [&] { return one_.has_value() && s.test(*one_); };
        while (!work.empty() && !saturated()) {
            Elem x = work.back();
            work.pop_back();
            auto push = [&](Elem y) {
                if (!s.test(y)) {
                    s.set(y);
                    work.push_back(y);
                }
            };
            push(star(x));
            push(neg(x));
            for (Elem r = 0; r < k_; ++r) {
                push(mul(x, r));
                push(mul(r, x));
            }
            for (std::size_t y = s.find_first(); y != Bits::npos; y = s.find_next(y))
                push(add(x, static_cast<Elem>(y)));
        }
        if (saturated()) {
            s.set();
        }
        return s;
    }

    /// All two-sided *-ideals: principal closures, then closure under join.
    std::vector<Bits> all_star_ideals() const {
        std::vector<Bits> ideals;
        auto insert = [&](const Bits& b) {
            for (const auto& i : ideals)
                if (i == b) return false;
            ideals.push_back(b);
            return true;
        };
        for (Elem x = 0; x < k_; ++x) insert(star_ideal({x}));
        bool grew = true;
        while (grew) {
            grew = false;
            std::size_t n = ideals.size();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    // join of ideals: elementwise sums of the union
                    Bits u = ideals[i] | ideals[j];
                    Bits sum(k_);
                    for (std::size_t x = u.find_first(); x != Bits::npos; x = u.find_next(x))
                        for (std::size_t y = u.find_first(); y != Bits::npos; y = u.find_next(y))
                            sum.set(add(static_cast<Elem>(x), static_cast<Elem>(y)));
                    if (insert(sum)) grew = true;
                }
        }
        std::sort(ideals.begin(), ideals.end(),
                  [](const Bits& a, const Bits& b) { return a.count() < b.count(); });
        return ideals;
    }

    bool is_simple() const {
        for (const auto& i : all_star_ideals())
            if (i.count() > 1 && i.count() < k_) return false;
        return k_ > 1;
    }

    /// Minimal nonzero ideals; subdirectly irreducible iff exactly one.
    std::vector<Bits> minimal_nonzero_ideals() const {
        auto ideals = all_star_ideals();
        std::vector<Bits> mins;
        for (const auto& i : ideals) {
            if (i.count() <= 1) continue;
            bool minimal = true;
            for (const auto& j : ideals)
                if (j.count() > 1 && j != i && j.is_subset_of(i)) minimal = false;
            if (minimal) mins.push_back(i);
        }
        return mins;
    }

    struct Quotient;
    struct Subring;

    Quotient quotient(const Bits& ideal) const;

    /// Corner ring eRe with unit e. Requires e to be a projection.
    Subring corner(Elem e) const;

    /// Induced ring on a subset closed under +, *, - and the involution.
    Subring subring(const Bits& carrier) const;

    /// Smallest subset containing gens closed under {+, *, -, *-involution}
    /// and, when with_q is set, the relative inverse q.
    Bits closure(const std::vector<Elem>& gens, bool with_q,
                 std::size_t budget = kDefaultCarrierBound) const {
        Bits s(k_);
        s.set(zero_);
        std::vector<Elem> work{zero_};
        auto push = [&](Elem y) {
            if (!s.test(y)) {
                if (s.count() >= budget) throw ClosureBudgetExceeded();
                s.set(y);
                work.push_back(y);
            }
        };
        for (Elem g : gens) push(g);
        while (!work.empty()) {
            Elem x = work.back();
            work.pop_back();
            push(neg(x));
            push(star(x));
            if (with_q) push(rickart_q(x));
            for (std::size_t y = s.find_first(); y != Bits::npos; y = s.find_next(y)) {
                push(add(x, static_cast<Elem>(y)));
                push(mul(x, static_cast<Elem>(y)));
                push(mul(static_cast<Elem>(y), x));
            }
        }
        return s;
    }

    bool closed_under_q(const Bits& carrier) const {
        for (std::size_t x = carrier.find_first(); x != Bits::npos; x = carrier.find_next(x)) {
            try {
                Elem q = rickart_q(static_cast<Elem>(x));
                if (!carrier.test(q)) return false;
            } catch (const NotRegularAt&) {
                return false;
            }
        }
        return true;
    }

    // --- Rickart calculus ----------------------------------------------------

    /// First y in carrier order with x y x = x.
    Elem quasi_inverse(Elem x) const {
        for (Elem y = 0; y < k_; ++y)
            if (mul(mul(x, y), x) == x) return y;
        throw NotRegularAt(label(x));
    }

    Elem left_proj(Elem x) const {  // l(x) = x (x*x)' x*
        Elem q = quasi_inverse(mul(star(x), x));
        return mul(mul(x, q), star(x));
    }
    Elem right_proj(Elem x) const {  // r(x) = x* (xx*)' x
        Elem q = quasi_inverse(mul(x, star(x)));
        return mul(mul(star(x), q), x);
    }

    /// The relative inverse q(a) = r(a) a' l(a); postconditions are asserted.
    Elem rickart_q(Elem a) const {
        Elem l = left_proj(a), r = right_proj(a);
        Elem q = mul(mul(r, quasi_inverse(a)), l);
        bool ok = mul(a, q) == l && mul(q, a) == r && mul(r, q) == q && mul(q, l) == q;
        if (!ok) throw NotRegularAt(label(a));
        return q;
    }

    /// e_x = l(x) v r(x) in the projection order (join of generated ideals);
    /// asserts e_x x e_x = x.
    Elem covering_projection(Elem x) const {
        Elem l = left_proj(x), r = right_proj(x);
        Bits u = right_set(l) | right_set(r);
        Bits join(k_);
        for (std::size_t a = u.find_first(); a != Bits::npos; a = u.find_next(a))
            for (std::size_t b = u.find_first(); b != Bits::npos; b = u.find_next(b))
                join.set(add(static_cast<Elem>(a), static_cast<Elem>(b)));
        for (Elem e : projections_)
            if (right_set(e) == join) {
                if (mul(mul(e, x), e) != x)
                    throw std::runtime_error("covering projection failed: " + label(x));
                return e;
            }
        throw NotRegularAt(label(x));
    }

    // --- verdicts -------------------------------------------------------------

    StarRegVerdict is_star_regular() const {
        StarRegVerdict v;
        for (Elem x = 0; x < k_; ++x) {
            if (!is_zero(mul(x, star(x)))) continue;
            if (!is_zero(x)) {
                v.star_regular = v.positivity_clause = false;
                v.witness = label(x);
                return v;
            }
        }
        for (Elem x = 0; x < k_; ++x) {
            bool found = false;
            for (Elem y = 0; y < k_ && !found; ++y) found = mul(mul(x, y), x) == x;
            if (!found) {
                v.star_regular = v.regular_clause = false;
                v.witness = label(x);
                return v;
            }
        }
        return v;
    }

    Report verify_star_ring(std::size_t triple_budget = 2'000'000) const {
        Report rep;
        rep.subject = "table ring (" + std::to_string(k_) + " elements)";
        bool exhaustive = k_ * k_ * k_ <= triple_budget;
        auto fail_w = [&](Elem a, Elem b) { return label(a) + ", " + label(b); };

        bool add_comm = true, invol_add = true, invol_rev = true, invol_two = true;
        std::string w_comm, w_add, w_rev, w_two;
        for (Elem a = 0; a < k_ && (add_comm || invol_add || invol_rev || invol_two); ++a) {
            if (star(star(a)) != a && invol_two) {
                invol_two = false;
                w_two = label(a);
            }
            for (Elem b = 0; b < k_; ++b) {
                if (add(a, b) != add(b, a) && add_comm) {
                    add_comm = false;
                    w_comm = fail_w(a, b);
                }
                if (star(add(a, b)) != add(star(a), star(b)) && invol_add) {
                    invol_add = false;
                    w_add = fail_w(a, b);
                }
                if (star(mul(a, b)) != mul(star(b), star(a)) && invol_rev) {
                    invol_rev = false;
                    w_rev = fail_w(a, b);
                }
            }
        }
        rep.check("addition commutative", add_comm, w_comm);
        rep.check("involution additive", invol_add, w_add);
        rep.check("involution reverses products", invol_rev, w_rev);
        rep.check("involution has order two", invol_two, w_two);

        bool zero_ok = true;
        for (Elem a = 0; a < k_ && zero_ok; ++a)
            zero_ok = add(a, zero_) == a && is_zero(add(a, neg(a))) && is_zero(mul(a, zero_)) &&
                      is_zero(mul(zero_, a));
        rep.check("additive group with zero", zero_ok);
        if (one_) {
            bool unit_ok = true;
            for (Elem a = 0; a < k_ && unit_ok; ++a)
                unit_ok = mul(a, *one_) == a && mul(*one_, a) == a;
            rep.check("declared unit is two-sided", unit_ok);
        }

        bool assoc_a = true, assoc_m = true, distr = true;
        std::string w_aa, w_am, w_d;
        std::uint64_t state = 0x9e3779b97f4a7c15ull;
        std::size_t count = exhaustive ? k_ * k_ * k_ : triple_budget / 8;
        for (std::size_t t = 0; t < count; ++t) {
            Elem a, b, c;
            if (exhaustive) {
                a = static_cast<Elem>(t / (k_ * k_));
                b = static_cast<Elem>((t / k_) % k_);
                c = static_cast<Elem>(t % k_);
            } else {
                state = state * 6364136223846793005ull + 1442695040888963407ull;
                a = static_cast<Elem>((state >> 33) % k_);
                state = state * 6364136223846793005ull + 1442695040888963407ull;
                b = static_cast<Elem>((state >> 33) % k_);
                state = state * 6364136223846793005ull + 1442695040888963407ull;
                c = static_cast<Elem>((state >> 33) % k_);
            }
            if (add(add(a, b), c) != add(a, add(b, c)) && assoc_a) {
                assoc_a = false;
                w_aa = fail_w(a, b);
            }
            if (mul(mul(a, b), c) != mul(a, mul(b, c)) && assoc_m) {
                assoc_m = false;
                w_am = fail_w(a, b);
            }
            if ((mul(a, add(b, c)) != add(mul(a, b), mul(a, c)) ||
                 mul(add(a, b), c) != add(mul(a, c), mul(b, c))) &&
                distr) {
                distr = false;
                w_d = fail_w(a, b);
            }
        }
        std::string mode = exhaustive ? "" : " (sampled)";
        rep.check("addition associative" + mode, assoc_a, w_aa);
        rep.check("multiplication associative" + mode, assoc_m, w_am);
        rep.check("distributivity" + mode, distr, w_d);
        return rep;
    }

    /// True iff rx = 0 for all x in the ideal implies r = 0.
    struct InjectivityVerdict {
        bool injective = true;
        Elem witness = 0;
    };
    InjectivityVerdict left_action_injective(const Bits& ideal) const {
        for (Elem r = 0; r < k_; ++r) {
            if (is_zero(r)) continue;
            bool annihilates = true;
            for (std::size_t x = ideal.find_first(); x != Bits::npos && annihilates;
                 x = ideal.find_next(x))
                annihilates = is_zero(mul(r, static_cast<Elem>(x)));
            if (annihilates) return {false, r};
        }
        return {true, 0};
    }

private:
    TableRing() = default;

    void finish() {
        neg_.resize(k_);
        for (Elem a = 0; a < k_; ++a) {
            bool found = false;
            for (Elem b = 0; b < k_; ++b)
                if (add(a, b) == zero_) {
                    neg_[a] = b;
                    found = true;
                    break;
                }
            if (!found) throw std::runtime_error("carrier has no additive inverse for " + label(a));
        }
        for (Elem e = 0; e < k_; ++e) {
            if (is_idempotent(e)) {
                idempotents_.push_back(e);
                if (star(e) == e) projections_.push_back(e);
            }
        }
    }

    std::size_t k_ = 0;
    std::vector<Elem> add_, mul_, star_, neg_;
    Elem zero_ = 0;
    std::optional<Elem> one_;
    std::vector<std::string> labels_;
    std::vector<Matrix> matrices_;
    std::vector<Elem> projections_, idempotents_;
};

struct TableRing::Quotient {
    TableRing ring;
    std::vector<Elem> class_of;  // old element -> quotient element
    std::vector<Elem> rep_of;    // quotient element -> representative
};

struct TableRing::Subring {
    TableRing ring;
    std::vector<Elem> carrier;            // subring element -> ambient element
    std::unordered_map<Elem, Elem> back;  // ambient -> subring element
};

inline TableRing::Quotient TableRing::quotient(const Bits& ideal) const {
    std::vector<Elem> cls(k_, static_cast<Elem>(k_));
    std::vector<Elem> reps;
    for (Elem x = 0; x < k_; ++x) {
        if (cls[x] != k_) continue;
        Elem c = static_cast<Elem>(reps.size());
        reps.push_back(x);
        for (Elem y = x; y < k_; ++y)
            if (cls[y] == k_ && ideal.test(sub(x, y))) cls[y] = c;
    }
    std::size_t m = reps.size();
    TableRing q;
    q.k_ = m;
    q.add_.resize(m * m);
    q.mul_.resize(m * m);
    q.star_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        q.star_[i] = cls[star(reps[i])];
        q.labels_.push_back(label(reps[i]) + "+I");
        for (std::size_t j = 0; j < m; ++j) {
            q.add_[i * m + j] = cls[add(reps[i], reps[j])];
            q.mul_[i * m + j] = cls[mul(reps[i], reps[j])];
        }
    }
    q.zero_ = cls[zero_];
    if (one_) q.one_ = cls[*one_];
    q.finish();
    return {std::move(q), std::move(cls), std::move(reps)};
}

inline TableRing::Subring TableRing::corner(Elem e) const {
    if (!is_projection(e)) throw NotAProjection();
    Bits s(k_);
    for (Elem x = 0; x < k_; ++x) s.set(mul(mul(e, x), e));
    Subring out = subring(s);
    out.ring.one_ = out.back.at(e);
    return out;
}

inline TableRing::Subring TableRing::subring(const Bits& carrier) const {
    Subring out;
    for (std::size_t x = carrier.find_first(); x != Bits::npos; x = carrier.find_next(x)) {
        out.back[static_cast<Elem>(x)] = static_cast<Elem>(out.carrier.size());
        out.carrier.push_back(static_cast<Elem>(x));
    }
    std::size_t m = out.carrier.size();
    TableRing& r = out.ring;
    r.k_ = m;
    r.add_.resize(m * m);
    r.mul_.resize(m * m);
    r.star_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        r.star_[i] = out.back.at(star(out.carrier[i]));
        r.labels_.push_back(label(out.carrier[i]));
        for (std::size_t j = 0; j < m; ++j) {
            r.add_[i * m + j] = out.back.at(add(out.carrier[i], out.carrier[j]));
            r.mul_[i * m + j] = out.back.at(mul(out.carrier[i], out.carrier[j]));
        }
    }
    r.zero_ = out.back.at(zero_);
    if (one_ && carrier.test(*one_)) r.one_ = out.back.at(*one_);
    r.finish();
    return out;
}

inline Report MatrixStarRing::verify_star_ring(std::size_t samples, std::uint64_t seed) const {
    // sampled axioms plus the structural facts carried by the construction
    Report rep;
    rep.subject = "matrix *-ring";
    std::uint64_t state = seed * 2654435761u + 1;
    auto next_matrix = [&]() {
        Matrix m(field_, n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                state = state * 6364136223846793005ull + 1442695040888963407ull;
                if (field_->finite())
                    m.at(i, j) = field_->element((state >> 33) % field_->size());
                else
                    m.at(i, j) = field_->from_int(static_cast<long long>((state >> 33) % 31) - 15);
            }
        return m;
    };
    bool invol_rev = true, invol_two = true, invol_add = true;
    for (std::size_t t = 0; t < samples; ++t) {
        Matrix a = next_matrix(), b = next_matrix();
        invol_two = invol_two && star(star(a)) == a;
        invol_rev = invol_rev && star(a * b) == star(b) * star(a);
        invol_add = invol_add && star(a + b) == star(a) + star(b);
    }
    rep.check("involution has order two (sampled)", invol_two);
    rep.check("involution reverses products (sampled)", invol_rev);
    rep.check("involution additive (sampled)", invol_add);
    rep.check("Gram matrix Hermitian and nondegenerate", true);  // enforced on construction
    return rep;
}

}  // namespace starlat
