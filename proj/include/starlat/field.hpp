// Exact scalar arithmetic: prime fields, extension fields with a fixed
// modulus catalog, the rationals, and quadratic extensions Q(sqrt(d)),
// each with an optional involution (identity, Frobenius, conjugation).
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace starlat {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct FieldMismatch : std::runtime_error {
    FieldMismatch() : std::runtime_error("scalar does not belong to this field") {}
};
struct DivisionByZero : std::runtime_error {
    DivisionByZero() : std::runtime_error("inversion of zero") {}
};
struct BadFieldSpec : std::runtime_error {
    explicit BadFieldSpec(const std::string& what) : std::runtime_error("bad field spec: " + what) {}
};

enum class FieldKind { Finite, Rationals, QuadExt };
enum class InvolutionKind { Identity, Frobenius, Conjugation };

/// Element of a quadratic extension Q(sqrt(d)), stored as a reduced pair a + b*sqrt(d).
struct QuadScalar {
    Rat a, b;
    bool operator==(const QuadScalar& o) const { return a == o.a && b == o.b; }
};

namespace detail {
struct FiniteScalar {
    std::uint32_t idx;
    bool operator==(const FiniteScalar& o) const { return idx == o.idx; }
};
}  // namespace detail

/// A field element in canonical form. Structural equality is semantic equality.
class Scalar {
public:
    Scalar() : fp_(0), v_(detail::FiniteScalar{0}) {}

    bool operator==(const Scalar& o) const { return fp_ == o.fp_ && v_ == o.v_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

private:
    friend class Field;
    friend struct ScalarHash;
    Scalar(std::uint64_t fp, std::variant<detail::FiniteScalar, Rat, QuadScalar> v)
        : fp_(fp), v_(std::move(v)) {}

    std::uint64_t fp_;  // fingerprint of the owning field spec
    std::variant<detail::FiniteScalar, Rat, QuadScalar> v_;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// A concrete field with involution. Finite fields carry full operation
/// tables; element handles are indices into the carrier in a fixed order
/// (polynomials over GF(p) read low-degree-first, base p).
class Field {
public:
    // --- construction ------------------------------------------------------

    /// GF(p^k). The modulus is the lexicographically first monic irreducible
    /// of degree k over GF(p) (coefficients scanned low-degree-first), so
    /// tables are reproducible across runs. Frobenius requires k even.
    static FieldPtr gf(unsigned p, unsigned k = 1, bool frobenius = false) {
        return FieldPtr(new Field(p, k, frobenius));
    }
    static FieldPtr rationals() { return FieldPtr(new Field()); }
    /// Q(sqrt(d)) for square-free d not in {0,1}; involution maps sqrt(d) to -sqrt(d).
    static FieldPtr quadratic(long long d, bool conjugation = true) {
        return FieldPtr(new Field(d, conjugation));
    }

    // --- spec --------------------------------------------------------------

    FieldKind kind() const { return kind_; }
    InvolutionKind involution() const { return inv_; }
    unsigned char_p() const { return p_; }
    unsigned ext_degree() const { return k_; }
    long long quad_d() const { return d_; }
    bool finite() const { return kind_ == FieldKind::Finite; }
    std::size_t size() const { return finite() ? q_ : 0; }  // 0 = infinite
    bool has_nontrivial_involution() const { return inv_ != InvolutionKind::Identity; }
    /// Modulus coefficients c_0..c_k of the extension (monic; empty for k = 1).
    const std::vector<unsigned>& modulus() const { return modulus_; }
    std::uint64_t fingerprint() const { return fp_; }
    bool same_spec(const Field& o) const { return fp_ == o.fp_; }

    // --- element construction ----------------------------------------------

    Scalar zero() const { return make_int(0); }
    Scalar one() const { return make_int(1); }
    Scalar from_int(long long n) const { return make_int(n); }
    Scalar from_rat(const Rat& r) const {
        if (kind_ == FieldKind::Rationals) return Scalar(fp_, r);
        if (kind_ == FieldKind::QuadExt) return Scalar(fp_, QuadScalar{r, Rat(0)});
        throw BadFieldSpec("rational value in a finite field");
    }
    Scalar from_quad(const Rat& a, const Rat& b) const {
        if (kind_ != FieldKind::QuadExt) throw BadFieldSpec("quadratic value outside Q(sqrt d)");
        return Scalar(fp_, QuadScalar{a, b});
    }
    /// Finite fields only: the i-th carrier element.
    Scalar element(std::size_t i) const {
        check_finite();
        if (i >= q_) throw BadFieldSpec("element index out of range");
        return Scalar(fp_, detail::FiniteScalar{static_cast<std::uint32_t>(i)});
    }
    std::size_t index(const Scalar& s) const { return ff(s); }

    // --- arithmetic ---------------------------------------------------------

    Scalar add(const Scalar& a, const Scalar& b) const {
        switch (kind_) {
            case FieldKind::Finite: return el(add_tab_[ff(a) * q_ + ff(b)]);
            case FieldKind::Rationals: return Scalar(fp_, rat(a) + rat(b));
            case FieldKind::QuadExt: {
                const auto &x = quad(a), &y = quad(b);
                return Scalar(fp_, QuadScalar{x.a + y.a, x.b + y.b});
            }
        }
        throw BadFieldSpec("unreachable");
    }
    Scalar neg(const Scalar& a) const {
        switch (kind_) {
            case FieldKind::Finite: return el(neg_tab_[ff(a)]);
            case FieldKind::Rationals: return Scalar(fp_, -rat(a));
            case FieldKind::QuadExt: {
                const auto& x = quad(a);
                return Scalar(fp_, QuadScalar{-x.a, -x.b});
            }
        }
        throw BadFieldSpec("unreachable");
    }
    Scalar sub(const Scalar& a, const Scalar& b) const { return add(a, neg(b)); }
    Scalar mul(const Scalar& a, const Scalar& b) const {
        switch (kind_) {
            case FieldKind::Finite: return el(mul_tab_[ff(a) * q_ + ff(b)]);
            case FieldKind::Rationals: return Scalar(fp_, rat(a) * rat(b));
            case FieldKind::QuadExt: {
                const auto &x = quad(a), &y = quad(b);
                return Scalar(fp_, QuadScalar{x.a * y.a + Rat(d_) * x.b * y.b, x.a * y.b + x.b * y.a});
            }
        }
        throw BadFieldSpec("unreachable");
    }
    Scalar inv(const Scalar& a) const {
        if (is_zero(a)) throw DivisionByZero();
        switch (kind_) {
            case FieldKind::Finite: return el(inv_tab_[ff(a)]);
            case FieldKind::Rationals: return Scalar(fp_, Rat(1) / rat(a));
            case FieldKind::QuadExt: {
                const auto& x = quad(a);
                Rat nrm = x.a * x.a - Rat(d_) * x.b * x.b;  // nonzero: d is not a square in Q
                return Scalar(fp_, QuadScalar{x.a / nrm, -x.b / nrm});
            }
        }
        throw BadFieldSpec("unreachable");
    }
    Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }
    Scalar conj(const Scalar& a) const {
        switch (inv_) {
            case InvolutionKind::Identity: {
                (void)ff_checked(a);
                return a;
            }
            case InvolutionKind::Frobenius: return el(conj_tab_[ff(a)]);
            case InvolutionKind::Conjugation: {
                const auto& x = quad(a);
                return Scalar(fp_, QuadScalar{x.a, -x.b});
            }
        }
        throw BadFieldSpec("unreachable");
    }
    bool is_zero(const Scalar& a) const { return a == zero(); }
    bool is_one(const Scalar& a) const { return a == one(); }

    // --- rendering ----------------------------------------------------------

    std::string to_string(const Scalar& s) const {
        switch (kind_) {
            case FieldKind::Finite: {
                if (k_ == 1) return std::to_string(ff(s));
                std::string out;
                std::uint32_t v = ff(s);
                bool empty = true;
                for (unsigned i = 0; i < k_; ++i, v /= p_) {
                    unsigned c = v % p_;
                    if (!c) continue;
                    if (!empty) out += "+";
                    if (i == 0) out += std::to_string(c);
                    else {
                        if (c != 1) out += std::to_string(c) + "*";
                        out += (i == 1) ? "t" : "t^" + std::to_string(i);
                    }
                    empty = false;
                }
                return empty ? "0" : out;
            }
            case FieldKind::Rationals: return rat(s).str();
            case FieldKind::QuadExt: {
                const auto& x = quad(s);
                if (x.b == 0) return x.a.str();
                std::string out = (x.a == 0) ? "" : x.a.str();
                if (x.b > 0 && !out.empty()) out += "+";
                out += x.b.str() + "*s" + std::to_string(d_);
                return out;
            }
        }
        return "?";
    }

    /// Rational coordinates of a scalar (for hashing / serialization).
    std::vector<Rat> coords(const Scalar& s) const {
        switch (kind_) {
            case FieldKind::Finite: return {Rat(ff(s))};
            case FieldKind::Rationals: return {rat(s)};
            case FieldKind::QuadExt: {
                const auto& x = quad(s);
                return {x.a, x.b};
            }
        }
        return {};
    }

    const Rat& rat_value(const Scalar& s) const { return rat(s); }
    const QuadScalar& quad_value(const Scalar& s) const { return quad(s); }

private:
    Field() : kind_(FieldKind::Rationals), inv_(InvolutionKind::Identity) { fp_ = fingerprint_of(); }

    Field(long long d, bool conjugation)
        : kind_(FieldKind::QuadExt),
          inv_(conjugation ? InvolutionKind::Conjugation : InvolutionKind::Identity),
          d_(d) {
        if (d == 0 || d == 1) throw BadFieldSpec("d must be square-free and not 0 or 1");
        for (long long f = 2; f * f <= (d < 0 ? -d : d); ++f)
            if (d % (f * f) == 0) throw BadFieldSpec("d must be square-free");
        fp_ = fingerprint_of();
    }

    Field(unsigned p, unsigned k, bool frobenius)
        : kind_(FieldKind::Finite),
          inv_(frobenius ? InvolutionKind::Frobenius : InvolutionKind::Identity),
          p_(p),
          k_(k) {
        if (k == 0) throw BadFieldSpec("k must be positive");
        if (p < 2) throw BadFieldSpec("p must be prime");
        for (unsigned f = 2; f * f <= p; ++f)
            if (p % f == 0) throw BadFieldSpec("p must be prime");
        if (frobenius && k % 2) throw BadFieldSpec("Frobenius involution needs even k");
        std::uint64_t q = 1;
        for (unsigned i = 0; i < k; ++i) {
            q *= p;
            if (q > (1u << 20)) throw BadFieldSpec("field too large for table backend");
        }
        q_ = static_cast<std::uint32_t>(q);
        if (k_ > 1) modulus_ = first_irreducible();
        build_tables();
        fp_ = fingerprint_of();
    }

    // polynomial helpers, coefficients low-degree-first base-p digits of an index
    std::vector<unsigned> digits(std::uint32_t v, unsigned len) const {
        std::vector<unsigned> c(len);
        for (unsigned i = 0; i < len; ++i, v /= p_) c[i] = v % p_;
        return c;
    }
    std::uint32_t undigits(const std::vector<unsigned>& c) const {
        std::uint64_t v = 0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * p_ + c[i];
        return static_cast<std::uint32_t>(v);
    }

    std::uint32_t poly_mul_mod(std::uint32_t a, std::uint32_t b) const {
        auto ca = digits(a, k_), cb = digits(b, k_);
        std::vector<unsigned> prod(2 * k_ - 1, 0);
        for (unsigned i = 0; i < k_; ++i)
            for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p_;
        // reduce by the monic modulus
        for (std::size_t deg = prod.size(); deg-- > k_;) {
            unsigned c = prod[deg];
            if (!c) continue;
            prod[deg] = 0;
            for (unsigned i = 0; i < k_; ++i)
                prod[deg - k_ + i] = (prod[deg - k_ + i] + c * (p_ - modulus_[i] % p_)) % p_;
        }
        prod.resize(k_);
        return undigits(prod);
    }

    std::vector<unsigned> first_irreducible() const {
        // scan x^k + sum c_i x^i, candidates ordered by the base-p value of (c_0..c_{k-1})
        for (std::uint32_t m = 0; m < q_; ++m) {
            std::vector<unsigned> cand = digits(m, k_);
            cand.push_back(1);  // monic
            if (poly_irreducible(cand)) return cand;
        }
        throw BadFieldSpec("no irreducible modulus found");  // cannot happen
    }

    bool poly_irreducible(const std::vector<unsigned>& f) const {
        unsigned deg = static_cast<unsigned>(f.size()) - 1;
        // trial division by all monic polynomials of degree 1..deg/2
        for (unsigned d = 1; 2 * d <= deg; ++d) {
            std::uint64_t count = 1;
            for (unsigned i = 0; i < d; ++i) count *= p_;
            for (std::uint64_t m = 0; m < count; ++m) {
                std::vector<unsigned> g = digits(static_cast<std::uint32_t>(m), d);
                g.push_back(1);
                if (poly_divides(g, f)) return false;
            }
        }
        return true;
    }

    bool poly_divides(const std::vector<unsigned>& g, std::vector<unsigned> r) const {
        unsigned dg = static_cast<unsigned>(g.size()) - 1;
        for (std::size_t deg = r.size(); deg-- > dg;) {
            unsigned c = r[deg] % p_;
            if (!c) continue;
            for (unsigned i = 0; i <= dg; ++i)
                r[deg - dg + i] = (r[deg - dg + i] + c * (p_ - g[i] % p_)) % p_;
        }
        for (unsigned i = 0; i < dg; ++i)
            if (r[i] % p_) return false;
        return true;
    }

    void build_tables() {
        add_tab_.resize(std::size_t(q_) * q_);
        mul_tab_.resize(std::size_t(q_) * q_);
        neg_tab_.resize(q_);
        inv_tab_.resize(q_);
        for (std::uint32_t a = 0; a < q_; ++a) {
            auto ca = digits(a, k_);
            for (std::uint32_t b = 0; b < q_; ++b) {
                auto cb = digits(b, k_);
                std::vector<unsigned> s(k_);
                for (unsigned i = 0; i < k_; ++i) s[i] = (ca[i] + cb[i]) % p_;
                add_tab_[std::size_t(a) * q_ + b] = undigits(s);
                mul_tab_[std::size_t(a) * q_ + b] = (k_ == 1) ? (a * b) % p_ : poly_mul_mod(a, b);
            }
            std::vector<unsigned> n(k_);
            for (unsigned i = 0; i < k_; ++i) n[i] = (p_ - ca[i]) % p_;
            neg_tab_[a] = undigits(n);
        }
        inv_tab_[0] = 0;  // unused, guarded by DivisionByZero
        for (std::uint32_t a = 1; a < q_; ++a)
            for (std::uint32_t b = 1; b < q_; ++b)
                if (mul_tab_[std::size_t(a) * q_ + b] == 1) {
                    inv_tab_[a] = b;
                    break;
                }
        if (inv_ == InvolutionKind::Frobenius) {
            conj_tab_.resize(q_);
            std::uint64_t e = 1;
            for (unsigned i = 0; i < k_ / 2; ++i) e *= p_;  // x -> x^(p^(k/2))
            for (std::uint32_t a = 0; a < q_; ++a) {
                std::uint32_t r = 1;
                for (std::uint64_t i = 0; i < e; ++i) r = mul_tab_[std::size_t(r) * q_ + a];
                conj_tab_[a] = r;
            }
        }
    }

    Scalar make_int(long long n) const {
        switch (kind_) {
            case FieldKind::Finite: {
                long long m = n % static_cast<long long>(p_);
                if (m < 0) m += p_;
                return el(static_cast<std::uint32_t>(m));
            }
            case FieldKind::Rationals: return Scalar(fp_, Rat(n));
            case FieldKind::QuadExt: return Scalar(fp_, QuadScalar{Rat(n), Rat(0)});
        }
        throw BadFieldSpec("unreachable");
    }

    Scalar el(std::uint32_t i) const { return Scalar(fp_, detail::FiniteScalar{i}); }

    void check_finite() const {
        if (!finite()) throw BadFieldSpec("operation requires a finite field");
    }
    std::uint32_t ff(const Scalar& s) const {
        if (s.fp_ != fp_) throw FieldMismatch();
        return std::get<detail::FiniteScalar>(s.v_).idx;
    }
    const Scalar& ff_checked(const Scalar& s) const {
        if (s.fp_ != fp_) throw FieldMismatch();
        return s;
    }
    const Rat& rat(const Scalar& s) const {
        if (s.fp_ != fp_) throw FieldMismatch();
        return std::get<Rat>(s.v_);
    }
    const QuadScalar& quad(const Scalar& s) const {
        if (s.fp_ != fp_) throw FieldMismatch();
        return std::get<QuadScalar>(s.v_);
    }

    std::uint64_t fingerprint_of() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(static_cast<std::uint64_t>(kind_));
        mix(static_cast<std::uint64_t>(inv_));
        mix(p_);
        mix(k_);
        mix(static_cast<std::uint64_t>(d_));
        return h;
    }

    FieldKind kind_;
    InvolutionKind inv_;
    unsigned p_ = 0, k_ = 0;
    long long d_ = 0;
    std::uint32_t q_ = 0;
    std::uint64_t fp_ = 0;
    std::vector<unsigned> modulus_;
    std::vector<std::uint32_t> add_tab_, mul_tab_, neg_tab_, inv_tab_, conj_tab_;
};

struct ScalarHash {
    std::size_t operator()(const Scalar& s) const {
        std::size_t h = std::hash<std::uint64_t>()(s.fp_);
        if (auto* f = std::get_if<detail::FiniteScalar>(&s.v_)) {
            h = h * 31 + f->idx;
        } else if (auto* r = std::get_if<Rat>(&s.v_)) {
            h = h * 31 + std::hash<std::string>()(r->str());
        } else {
            const auto& q = std::get<QuadScalar>(s.v_);
            h = h * 31 + std::hash<std::string>()(q.a.str());
            h = h * 31 + std::hash<std::string>()(q.b.str());
        }
        return h;
    }
};

}  // namespace starlat
