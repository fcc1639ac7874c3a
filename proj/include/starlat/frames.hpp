// Large partial (n,k)-frames over a LatticeContext: verification at four
// levels, axis derivation, stabilization, orthogonalization, search,
// canonical frames of inner-product spaces, and lifting along surjective
// 0-1 homomorphisms of finite lattices.
//
// Format (n,k): spanning independent a_0..a_{n+k-1} with join 1; the first
// n are pairwise perspective to a_0 with axes a_0i, the k tail elements are
// subperspective to a_0. Stable frames carry all pairwise axes plus the
// relative complements z_ij; orthogonal frames satisfy a_i^perp = sum of
// the other a_j.
#pragma once

#include <starlat/lattice.hpp>
#include <starlat/subspace.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace starlat {

struct AxisVerificationFailed : std::runtime_error {
    explicit AxisVerificationFailed(const std::string& w)
        : std::runtime_error("axis verification failed: " + w) {}
};
struct ComplementNotFound : std::runtime_error {
    ComplementNotFound() : std::runtime_error("no complement available for stabilization") {}
};
struct HypothesisViolated : std::runtime_error {
    explicit HypothesisViolated(const std::string& w)
        : std::runtime_error("hypothesis violated: " + w) {}
};
struct LiftFailed : std::runtime_error {
    explicit LiftFailed(const std::string& w) : std::runtime_error("frame lift failed: " + w) {}
};

enum class FrameLevel { Basic, Stable, Orthogonal, StableOrthogonal };

inline std::string to_string(FrameLevel l) {
    switch (l) {
        case FrameLevel::Basic: return "basic";
        case FrameLevel::Stable: return "stable";
        case FrameLevel::Orthogonal: return "orthogonal";
        case FrameLevel::StableOrthogonal: return "stable-orthogonal";
    }
    return "?";
}
inline std::optional<FrameLevel> parse_frame_level(const std::string& s) {
    if (s == "basic") return FrameLevel::Basic;
    if (s == "stable") return FrameLevel::Stable;
    if (s == "orthogonal") return FrameLevel::Orthogonal;
    if (s == "stable-orthogonal") return FrameLevel::StableOrthogonal;
    return std::nullopt;
}

template <LatticeContext Ctx>
struct Frame {
    using E = typename Ctx::Elem;

    std::size_t n = 1, k = 0;
    std::vector<E> a;   // n+k spanning elements
    std::vector<E> a0;  // a0[i] axis between a_0 and a_i; a0[0] unused
    // axes[(j,i)] with j < n: axis between a_i and a_j (a_i maps into a_j
    // when i >= n); populated by derive_axes / stabilize_frame
    std::map<std::pair<std::size_t, std::size_t>, E> axes;
    // z[(i,j)] with j < n <= i: complement of the image b_ji in [0, a_j]
    std::map<std::pair<std::size_t, std::size_t>, E> z;

    std::size_t span_size() const { return n + k; }
};

/// Image of x in target through the axis: (x + axis) * target.
template <LatticeContext Ctx>
typename Ctx::Elem image_through(const Ctx& c, const typename Ctx::Elem& x,
                                 const typename Ctx::Elem& axis, const typename Ctx::Elem& tgt) {
    return c.meet(c.join(x, axis), tgt);
}

/// axis is a common complement of x and y inside [0, x + y].
template <LatticeContext Ctx>
bool is_relative_axis(const Ctx& c, const typename Ctx::Elem& x, const typename Ctx::Elem& y,
                      const typename Ctx::Elem& axis) {
    return c.equal(c.meet(x, axis), c.bottom()) && c.equal(c.meet(y, axis), c.bottom()) &&
           c.equal(c.join(x, axis), c.join(y, axis)) &&
           c.equal(c.join(x, axis), c.join(x, y));
}

// ---------------------------------------------------------------------------
// Axis customization points: exhaustive search on finite lattices,
// constructive difference bases on subspace contexts.
// ---------------------------------------------------------------------------

/// Common complement of a and b within [0, a+b], or none.
inline std::optional<FiniteLattice::Elem> frame_axis(const FiniteLattice& L, FiniteLattice::Elem a,
                                                     FiniteLattice::Elem b) {
    for (FiniteLattice::Elem c = 0; c < L.size(); ++c)
        if (is_relative_axis(L, a, b, c)) return c;
    return std::nullopt;
}

/// For subspaces of equal dimension: pick bases that agree on a ∧ b and
/// span the axis by the pairwise differences of the remaining vectors.
inline std::optional<Subspace> frame_axis(const SubspaceContext& ctx, const Subspace& a,
                                          const Subspace& b) {
    if (a.dim() != b.dim()) return std::nullopt;
    const FieldPtr& f = ctx.field();
    std::size_t m = ctx.ambient();
    Subspace n = ctx.meet(a, b);
    auto extras = [&](const Subspace& u) {
        std::vector<Vec> rows;
        for (std::size_t i = 0; i < n.dim(); ++i) rows.push_back(n.basis().row(i));
        std::size_t cur = n.dim();
        std::vector<Vec> out;
        for (std::size_t i = 0; i < u.dim(); ++i) {
            rows.push_back(u.basis().row(i));
            if (Subspace::span(f, m, rows).dim() > cur) {
                out.push_back(u.basis().row(i));
                ++cur;
            } else {
                rows.pop_back();
            }
        }
        return out;
    };
    std::vector<Vec> ea = extras(a), eb = extras(b);
    if (ea.size() != eb.size()) return std::nullopt;  // cannot happen for equal dims
    std::vector<Vec> diff;
    for (std::size_t i = 0; i < ea.size(); ++i) {
        Vec d(m, f->zero());
        for (std::size_t j = 0; j < m; ++j) d[j] = f->sub(ea[i][j], eb[i][j]);
        diff.push_back(std::move(d));
    }
    Subspace c = Subspace::span(f, m, diff);
    if (!is_relative_axis(ctx, a, b, c)) return std::nullopt;
    return c;
}

/// Subperspectivity certificate: a part d of target together with a
/// relative axis between x and d.
template <class E>
struct SubAxis {
    E part;
    E axis;
};

inline std::optional<SubAxis<FiniteLattice::Elem>> frame_subaxis(const FiniteLattice& L,
                                                                 FiniteLattice::Elem x,
                                                                 FiniteLattice::Elem target) {
    for (FiniteLattice::Elem d = 0; d < L.size(); ++d) {
        if (!L.leq(d, target)) continue;
        if (auto c = frame_axis(L, x, d)) return SubAxis<FiniteLattice::Elem>{d, *c};
    }
    return std::nullopt;
}

inline std::optional<SubAxis<Subspace>> frame_subaxis(const SubspaceContext& ctx,
                                                      const Subspace& x, const Subspace& target) {
    if (x.dim() > target.dim()) return std::nullopt;
    // prefer a part meeting x trivially so the difference basis is clean
    Subspace d = ctx.complement_in_interval(ctx.meet(x, target), target);
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < x.dim() && i < d.dim(); ++i) rows.push_back(d.basis().row(i));
    Subspace part = Subspace::span(ctx.field(), ctx.ambient(), rows);
    if (part.dim() < x.dim()) {  // fall back to the leading rows of target
        rows.clear();
        for (std::size_t i = 0; i < x.dim(); ++i) rows.push_back(target.basis().row(i));
        part = Subspace::span(ctx.field(), ctx.ambient(), rows);
    }
    if (auto c = frame_axis(ctx, x, part)) return SubAxis<Subspace>{part, *c};
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Verification.
// ---------------------------------------------------------------------------

template <LatticeContext Ctx>
Report verify_frame(const Ctx& c, const Frame<Ctx>& fr, FrameLevel level) {
    using E = typename Ctx::Elem;
    Report rep;
    rep.subject = "(" + std::to_string(fr.n) + "," + std::to_string(fr.k) + ")-frame, level " +
                  to_string(level);
    std::size_t nk = fr.span_size();
    if (fr.a.size() != nk || fr.a0.size() != nk || fr.n < 1) {
        rep.check("frame shape", false, "element counts do not match the format");
        return rep;
    }

    // (1) independence and span
    bool indep = independent(c, fr.a);
    E total = c.bottom();
    for (const E& x : fr.a) total = c.join(total, x);
    rep.check("clause 1: independence", indep);
    rep.check("clause 1: span", c.equal(total, c.top()));

    // (2) perspectivity of a_i to a_0 via a_0i, for 1 <= i < n
    bool ok2 = true;
    std::string w2;
    for (std::size_t i = 1; i < fr.n && ok2; ++i) {
        const E &ai = fr.a[i], &ax = fr.a0[i];
        ok2 = c.equal(c.meet(fr.a[0], ax), c.bottom()) && c.equal(c.meet(ai, ax), c.bottom()) &&
              c.equal(c.join(fr.a[0], ax), c.join(ai, ax)) &&
              c.equal(c.join(fr.a[0], ai), c.join(fr.a[0], ax));
        if (!ok2) w2 = "i = " + std::to_string(i);
    }
    rep.check("clause 2: perspectivity to a_0", ok2, w2);

    // (3) subperspectivity of the tail via a_0i: with p = a_0(a_i + a_0i),
    // p + a_i = a_i (+) a_0i = p (+) a_0i
    bool ok3 = true;
    std::string w3;
    for (std::size_t i = fr.n; i < nk && ok3; ++i) {
        const E &ai = fr.a[i], &ax = fr.a0[i];
        E p = c.meet(fr.a[0], c.join(ai, ax));
        ok3 = c.equal(c.meet(ai, ax), c.bottom()) && c.equal(c.meet(p, ax), c.bottom()) &&
              c.equal(c.join(p, ai), c.join(ai, ax)) && c.equal(c.join(p, ax), c.join(ai, ax));
        if (!ok3) w3 = "i = " + std::to_string(i);
    }
    rep.check("clause 3: subperspectivity of the tail", ok3, w3);

    if (level == FrameLevel::Orthogonal || level == FrameLevel::StableOrthogonal) {
        bool ortho_ok = c.has_ortho();
        std::string wo = "no orthocomplement";
        for (std::size_t i = 0; i < nk && ortho_ok; ++i) {
            E rest = c.bottom();
            for (std::size_t j = 0; j < nk; ++j)
                if (j != i) rest = c.join(rest, fr.a[j]);
            ortho_ok = c.equal(c.ortho(fr.a[i]), rest);
            if (!ortho_ok) wo = "i = " + std::to_string(i);
        }
        rep.check("orthogonality: a_i^perp = sum of the others", ortho_ok, wo);
    }

    if (level == FrameLevel::Stable || level == FrameLevel::StableOrthogonal) {
        bool axes_ok = true;
        std::string wa;
        for (std::size_t j = 0; j < fr.n && axes_ok; ++j)
            for (std::size_t i = 0; i < nk && axes_ok; ++i) {
                if (i == j) continue;
                auto it = fr.axes.find({j, i});
                if (it == fr.axes.end()) {
                    axes_ok = false;
                    wa = "missing axis (" + std::to_string(j) + "," + std::to_string(i) + ")";
                    break;
                }
                const E& ax = it->second;
                if (i < fr.n) {
                    axes_ok = is_relative_axis(c, fr.a[i], fr.a[j], ax);
                } else {
                    E b = image_through(c, fr.a[i], ax, fr.a[j]);
                    axes_ok = c.equal(c.meet(fr.a[i], ax), c.bottom()) &&
                              is_relative_axis(c, fr.a[i], b, ax);
                }
                if (!axes_ok)
                    wa = "axis (" + std::to_string(j) + "," + std::to_string(i) + ")";
            }
        rep.check("stability: all pairwise axes valid", axes_ok, wa);

        bool z_ok = true;
        std::string wz;
        for (std::size_t i = fr.n; i < nk && z_ok; ++i)
            for (std::size_t j = 0; j < fr.n && z_ok; ++j) {
                auto za = fr.z.find({i, j});
                auto ax = fr.axes.find({j, i});
                if (za == fr.z.end() || ax == fr.axes.end()) {
                    z_ok = false;
                    wz = "missing z(" + std::to_string(i) + "," + std::to_string(j) + ")";
                    break;
                }
                E b = image_through(c, fr.a[i], ax->second, fr.a[j]);
                z_ok = c.leq(za->second, fr.a[j]) &&
                       c.equal(c.meet(b, za->second), c.bottom()) &&
                       c.equal(c.join(b, za->second), fr.a[j]);
                if (z_ok && level == FrameLevel::StableOrthogonal)
                    z_ok = c.equal(za->second, c.meet(c.ortho(b), fr.a[j]));
                if (!z_ok) wz = "z(" + std::to_string(i) + "," + std::to_string(j) + ")";
            }
        rep.check(level == FrameLevel::StableOrthogonal
                      ? "stability: z are relative orthocomplements"
                      : "stability: z are relative complements",
                  z_ok, wz);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Axis derivation and stabilization.
// ---------------------------------------------------------------------------

/// Populate all pairwise axes from the primary ones: a_ji = [a_0j + a_0i]
/// * [a_j + a_i]; every derived axis is re-verified.
template <LatticeContext Ctx>
Frame<Ctx> derive_axes(const Ctx& c, Frame<Ctx> fr) {
    using E = typename Ctx::Elem;
    std::size_t nk = fr.span_size();
    for (std::size_t j = 0; j < fr.n; ++j)
        for (std::size_t i = 0; i < nk; ++i) {
            if (i == j) continue;
            E ax = j == 0   ? fr.a0[i]
                   : i == 0 ? fr.a0[j]
                            : c.meet(c.join(fr.a0[j], fr.a0[i]), c.join(fr.a[j], fr.a[i]));
            bool ok;
            if (i < fr.n) {
                ok = is_relative_axis(c, fr.a[i], fr.a[j], ax);
            } else {
                E b = image_through(c, fr.a[i], ax, fr.a[j]);
                ok = c.equal(c.meet(fr.a[i], ax), c.bottom()) &&
                     is_relative_axis(c, fr.a[i], b, ax);
            }
            if (!ok)
                throw AxisVerificationFailed("(" + std::to_string(j) + "," + std::to_string(i) +
                                             ")");
            fr.axes.insert_or_assign({j, i}, ax);
        }
    return fr;
}

/// Choose the z_ij with the deterministic complement chooser (relative
/// orthocomplements when the context has an ortho).
template <LatticeContext Ctx>
Frame<Ctx> stabilize_frame(const Ctx& c, Frame<Ctx> fr) {
    using E = typename Ctx::Elem;
    if (fr.axes.empty()) fr = derive_axes(c, fr);
    for (std::size_t i = fr.n; i < fr.span_size(); ++i)
        for (std::size_t j = 0; j < fr.n; ++j) {
            E b = image_through(c, fr.a[i], fr.axes.at({j, i}), fr.a[j]);
            try {
                fr.z.insert_or_assign({i, j}, c.complement_in_interval(b, fr.a[j]));
            } catch (const NoComplement&) {
                throw ComplementNotFound();
            }
        }
    return fr;
}

// ---------------------------------------------------------------------------
// Construction: canonical frames of inner-product spaces and search.
// ---------------------------------------------------------------------------

/// a_i = span(b_i) for the Gram-Schmidt orthogonalization (b_i) of the
/// standard basis, a_0i = span(b_0 - b_i); format (n, m-n).
inline Frame<SubspaceContext> canonical_frame(const SubspaceContext& ctx, std::size_t n) {
    const FieldPtr& f = ctx.field();
    std::size_t m = ctx.ambient();
    if (n < 1 || n > m) throw HypothesisViolated("need 1 <= n <= dim");
    const HermitianForm& phi = ctx.space().form();
    std::vector<Vec> b;
    for (std::size_t i = 0; i < m; ++i) {
        Vec v(m, f->zero());
        v[i] = f->one();
        for (std::size_t j = 0; j < b.size(); ++j) {
            Scalar nb = phi.value(b[j], b[j]);
            if (f->is_zero(nb)) throw HypothesisViolated("isotropic basis vector");
            Scalar coef = f->div(phi.value(b[j], v), nb);
            for (std::size_t t = 0; t < m; ++t)
                v[t] = f->sub(v[t], f->mul(b[j][t], coef));
        }
        b.push_back(std::move(v));
    }
    Frame<SubspaceContext> fr;
    fr.n = n;
    fr.k = m - n;
    for (std::size_t i = 0; i < m; ++i) {
        fr.a.push_back(Subspace::span(f, m, {b[i]}));
        Vec d(m, f->zero());
        for (std::size_t t = 0; t < m; ++t) d[t] = f->sub(b[0][t], b[i][t]);
        fr.a0.push_back(i == 0 ? ctx.bottom() : Subspace::span(f, m, {d}));
    }
    return fr;
}

/// Backtracking search over the given universe; uses the orthogonality
/// constraint a_m <= (sum of earlier)^perp when the context has an ortho.
template <LatticeContext Ctx>
std::optional<Frame<Ctx>> find_frame(const Ctx& c, const std::vector<typename Ctx::Elem>& universe,
                                     std::size_t n, std::size_t k, std::size_t budget = 100000) {
    using E = typename Ctx::Elem;
    std::size_t nk = n + k;
    std::vector<E> chosen;
    std::size_t nodes = 0;

    auto finish = [&](Frame<Ctx>& fr) -> bool {
        fr.n = n;
        fr.k = k;
        fr.a = chosen;
        fr.a0.assign(nk, c.bottom());
        for (std::size_t i = 1; i < nk; ++i) {
            if (i < n) {
                auto ax = frame_axis(c, fr.a[i], fr.a[0]);
                if (!ax) return false;
                fr.a0[i] = *ax;
            } else {
                std::optional<E> found;
                if (auto sub = frame_subaxis(c, fr.a[i], fr.a[0])) found = sub->axis;
                if (found) {
                    // accept only if clause (3) holds verbatim
                    E p = c.meet(fr.a[0], c.join(fr.a[i], *found));
                    bool ok = c.equal(c.meet(fr.a[i], *found), c.bottom()) &&
                              c.equal(c.meet(p, *found), c.bottom()) &&
                              c.equal(c.join(p, fr.a[i]), c.join(fr.a[i], *found)) &&
                              c.equal(c.join(p, *found), c.join(fr.a[i], *found));
                    if (!ok) found.reset();
                }
                if (!found)
                    for (const E& cand : universe) {
                        E p = c.meet(fr.a[0], c.join(fr.a[i], cand));
                        if (c.equal(c.meet(fr.a[i], cand), c.bottom()) &&
                            c.equal(c.meet(p, cand), c.bottom()) &&
                            c.equal(c.join(p, fr.a[i]), c.join(fr.a[i], cand)) &&
                            c.equal(c.join(p, cand), c.join(fr.a[i], cand))) {
                            found = cand;
                            break;
                        }
                    }
                if (!found) return false;
                fr.a0[i] = *found;
            }
        }
        return true;
    };

    std::function<std::optional<Frame<Ctx>>(E)> rec = [&](E acc) -> std::optional<Frame<Ctx>> {
        if (chosen.size() == nk) {
            if (!c.equal(acc, c.top())) return std::nullopt;
            Frame<Ctx> fr;
            if (finish(fr)) return fr;
            return std::nullopt;
        }
        for (const E& cand : universe) {
            if (++nodes > budget) return std::nullopt;
            if (c.equal(cand, c.bottom())) continue;
            if (!c.equal(c.meet(cand, acc), c.bottom())) continue;
            if (c.has_ortho() && !c.leq(cand, c.ortho(acc))) continue;
            chosen.push_back(cand);
            if (auto fr = rec(c.join(acc, cand))) return fr;
            chosen.pop_back();
        }
        return std::nullopt;
    };
    return rec(c.bottom());
}

// ---------------------------------------------------------------------------
// Orthogonal splitting.
// ---------------------------------------------------------------------------

template <class E>
struct SplitCertificate {
    E piece;  // a direct orthogonal summand of b
    E part;   // the part of a it is perspective to
    E axis;
};

/// b is cut into at most `max_pieces` pairwise orthogonal summands, each
/// perspective to a part of a, with axes as certificates.
template <LatticeContext Ctx>
std::vector<SplitCertificate<typename Ctx::Elem>> split_projective(
    const Ctx& c, const typename Ctx::Elem& a, const typename Ctx::Elem& b,
    std::size_t max_pieces = 4) {
    using E = typename Ctx::Elem;
    std::vector<SplitCertificate<E>> out;
    E rem = b;
    while (!c.equal(rem, c.bottom())) {
        if (out.size() == max_pieces)
            throw HypothesisViolated("more than " + std::to_string(max_pieces) +
                                     " pieces required");
        if (auto sub = frame_subaxis(c, rem, a)) {
            out.push_back({rem, sub->part, sub->axis});
            break;
        }
        // peel the largest part of rem that maps into a
        E piece = c.bottom();
        std::optional<SubAxis<E>> cert;
        if (auto back = frame_subaxis(c, a, rem)) {
            // a maps into rem: the image is a maximal piece
            piece = image_through(c, a, back->axis, rem);
            cert = frame_subaxis(c, piece, a);
        }
        if (!cert || c.equal(piece, c.bottom()))
            throw HypothesisViolated("no perspective part found");
        out.push_back({piece, cert->part, cert->axis});
        rem = c.complement_in_interval(c.meet(piece, rem), rem);  // relative orthocomplement
    }
    return out;
}

/// The five-way split: c := b * a^perp, d := relative orthocomplement of c
/// in [0, (a+b) * a^perp]; d splits against a_0 in at most four pieces.
template <LatticeContext Ctx>
std::vector<SplitCertificate<typename Ctx::Elem>> split_subperspective(
    const Ctx& ctx, const typename Ctx::Elem& a0, const typename Ctx::Elem& a,
    const typename Ctx::Elem& b) {
    using E = typename Ctx::Elem;
    if (!ctx.leq(a0, a) || !ctx.equal(ctx.meet(a, b), ctx.bottom()))
        throw HypothesisViolated("need a0 <= a and a * b = 0");
    E c = ctx.meet(b, ctx.ortho(a));
    E t = ctx.meet(ctx.join(a, b), ctx.ortho(a));
    E d = ctx.complement_in_interval(c, t);
    std::vector<SplitCertificate<E>> out;
    if (!ctx.equal(c, ctx.bottom())) {
        auto cert = frame_subaxis(ctx, c, a0);
        if (!cert) throw HypothesisViolated("c is not subperspective to a0");
        out.push_back({c, cert->part, cert->axis});
    }
    auto rest = split_projective(ctx, a0, d);
    out.insert(out.end(), rest.begin(), rest.end());
    if (out.size() > 5) throw HypothesisViolated("more than five pieces");
    return out;
}

// ---------------------------------------------------------------------------
// Orthogonalization.
// ---------------------------------------------------------------------------

/// Requires a_i <= (sum of earlier a_j)^perp for i < n. Each tail element
/// is replaced by at most five pairwise orthogonal pieces subperspective to
/// a_0; the result passes level orthogonal (verified).
template <LatticeContext Ctx>
Frame<Ctx> orthogonalize_frame(const Ctx& c, const Frame<Ctx>& fr) {
    using E = typename Ctx::Elem;
    E acc = c.bottom();
    for (std::size_t i = 0; i < fr.n; ++i) {
        if (c.has_ortho() && !c.leq(fr.a[i], c.ortho(acc)))
            throw HypothesisViolated("head elements are not orthogonal");
        acc = c.join(acc, fr.a[i]);
    }
    Frame<Ctx> out;
    out.n = fr.n;
    out.a.assign(fr.a.begin(), fr.a.begin() + static_cast<long>(fr.n));
    out.a0.assign(fr.a0.begin(), fr.a0.begin() + static_cast<long>(fr.n));

    for (std::size_t i = fr.n; i < fr.span_size(); ++i) {
        const E& b = fr.a[i];
        E bp = c.meet(b, c.ortho(acc));  // the part of b already orthogonal
        E t = c.meet(c.join(acc, b), c.ortho(acc));
        E d = c.complement_in_interval(bp, t);
        std::vector<E> pieces;
        if (!c.equal(bp, c.bottom())) pieces.push_back(bp);
        if (!c.equal(d, c.bottom())) {
            for (const auto& cert : split_projective(c, fr.a[0], d)) pieces.push_back(cert.piece);
        }
        for (const E& p : pieces) {
            auto cert = frame_subaxis(c, p, fr.a[0]);
            if (!cert) throw HypothesisViolated("piece not subperspective to a_0");
            // clause (3) must hold verbatim for the axis we record
            E px = c.meet(fr.a[0], c.join(p, cert->axis));
            bool ok = c.equal(c.meet(p, cert->axis), c.bottom()) &&
                      c.equal(c.meet(px, cert->axis), c.bottom()) &&
                      c.equal(c.join(px, p), c.join(p, cert->axis)) &&
                      c.equal(c.join(px, cert->axis), c.join(p, cert->axis));
            if (!ok) throw AxisVerificationFailed("orthogonalized tail piece");
            out.a.push_back(p);
            out.a0.push_back(cert->axis);
        }
        acc = c.join(acc, c.join(bp, d));  // = acc + b
    }
    out.k = out.a.size() - out.n;
    Report check = verify_frame(c, out, FrameLevel::Orthogonal);
    if (!check.ok()) throw AxisVerificationFailed(check.first_failure());
    return out;
}

// ---------------------------------------------------------------------------
// Lifting along surjective 0-1 homomorphisms of finite lattices.
// ---------------------------------------------------------------------------

/// The section [0, u] of a finite lattice with the sectional
/// orthocomplement x -> x^perp * u.
class SectionCtx {
public:
    using Elem = FiniteLattice::Elem;
    SectionCtx(const FiniteLattice& l, Elem u) : l_(&l), u_(u) {}

    Elem bottom() const { return l_->bottom(); }
    Elem top() const { return u_; }
    bool leq(Elem a, Elem b) const { return l_->leq(a, b); }
    bool equal(Elem a, Elem b) const { return a == b; }
    Elem meet(Elem a, Elem b) const { return l_->meet(a, b); }
    Elem join(Elem a, Elem b) const { return l_->join(a, b); }
    bool has_ortho() const { return l_->has_ortho(); }
    Elem ortho(Elem a) const { return l_->meet(l_->ortho(a), u_); }
    Elem complement_in_interval(Elem b, Elem a) const {
        if (has_ortho()) {
            Elem d = meet(a, ortho(b));
            if (meet(b, d) == bottom() && join(b, d) == a) return d;
        }
        return l_->complement_in_interval(b, a);
    }
    std::size_t size() const { return l_->size(); }

private:
    const FiniteLattice* l_;
    Elem u_;
};

static_assert(LatticeContext<SectionCtx>);

struct FrameLift {
    FiniteLattice::Elem section_top;
    Frame<SectionCtx> frame;
};

/// Lift Phi along f into a section M = [0, u] of the source; the result
/// has the same format, passes the requested level inside M (with the
/// sectional ortho) and maps elementwise onto Phi.
inline FrameLift lift_frame(const LatticeHom& f, const Frame<FiniteLattice>& phi,
                            FrameLevel level) {
    using Elem = FiniteLattice::Elem;
    const FiniteLattice& K = *f.source;
    const FiniteLattice& L = *f.target;
    std::size_t nk = phi.span_size();

    // lift the chain of partial joins, then carve out the spanning elements
    std::vector<Elem> abar;
    Elem t_prev = K.bottom(), s_prev = L.bottom();
    if (f(t_prev) != L.bottom()) throw LiftFailed("hom does not preserve 0");
    for (std::size_t i = 0; i < nk; ++i) {
        Elem s_i = L.join(s_prev, phi.a[i]);
        std::optional<Elem> t_i;
        for (Elem x = 0; x < K.size(); ++x)
            if (K.leq(t_prev, x) && f(x) == s_i) {
                t_i = x;
                break;
            }
        if (!t_i) throw LiftFailed("no preimage for a partial join");
        abar.push_back(lift_complement(f, *t_i, t_prev, phi.a[i]));
        t_prev = *t_i;
        s_prev = s_i;
    }
    Elem u = t_prev;
    SectionCtx M(K, u);

    Frame<SectionCtx> psi;
    psi.n = phi.n;
    psi.k = phi.k;
    psi.a = abar;
    psi.a0.assign(nk, K.bottom());
    // axes: first preimage below u satisfying the frame clause verbatim
    for (std::size_t i = 1; i < nk; ++i) {
        std::optional<Elem> found;
        for (Elem x = 0; x < K.size() && !found; ++x) {
            if (!K.leq(x, u) || f(x) != phi.a0[i]) continue;
            bool ok;
            if (i < phi.n) {
                ok = is_relative_axis(M, psi.a[i], psi.a[0], x);
            } else {
                Elem p = M.meet(psi.a[0], M.join(psi.a[i], x));
                ok = M.meet(psi.a[i], x) == M.bottom() && M.meet(p, x) == M.bottom() &&
                     M.join(p, psi.a[i]) == M.join(psi.a[i], x) &&
                     M.join(p, x) == M.join(psi.a[i], x);
            }
            if (ok) found = x;
        }
        if (!found) throw LiftFailed("no axis preimage at index " + std::to_string(i));
        psi.a0[i] = *found;
    }

    if (level == FrameLevel::Stable || level == FrameLevel::StableOrthogonal) {
        // all pairwise axes, searched the same way
        for (std::size_t j = 0; j < phi.n; ++j)
            for (std::size_t i = 0; i < nk; ++i) {
                if (i == j) continue;
                Elem target = phi.axes.count({j, i}) ? phi.axes.at({j, i}) : Elem(0);
                if (!phi.axes.count({j, i})) throw LiftFailed("input frame lacks axes");
                std::optional<Elem> found;
                for (Elem x = 0; x < K.size() && !found; ++x) {
                    if (!K.leq(x, u) || f(x) != target) continue;
                    bool ok;
                    if (i < phi.n) {
                        ok = is_relative_axis(M, psi.a[i], psi.a[j], x);
                    } else {
                        Elem b = image_through(M, psi.a[i], x, psi.a[j]);
                        ok = M.meet(psi.a[i], x) == M.bottom() &&
                             is_relative_axis(M, psi.a[i], b, x);
                    }
                    if (ok) found = x;
                }
                if (!found) throw LiftFailed("no pairwise axis preimage");
                psi.axes[{j, i}] = *found;
            }
        // z via the complement-lifting lemma
        for (std::size_t i = phi.n; i < nk; ++i)
            for (std::size_t j = 0; j < phi.n; ++j) {
                if (!phi.z.count({i, j})) throw LiftFailed("input frame lacks z");
                Elem b = image_through(M, psi.a[i], psi.axes.at({j, i}), psi.a[j]);
                psi.z[{i, j}] = lift_complement(f, psi.a[j], b, phi.z.at({i, j}));
            }
    }

    Report check = verify_frame(M, psi, level);
    if (!check.ok()) throw LiftFailed(check.first_failure());
    // elementwise image and surjectivity of the restriction
    for (std::size_t i = 0; i < nk; ++i)
        if (f(psi.a[i]) != phi.a[i] || (i > 0 && f(psi.a0[i]) != phi.a0[i]))
            throw LiftFailed("image mismatch");
    for (Elem y = 0; y < L.size(); ++y) {
        bool hit = false;
        for (Elem x = 0; x < K.size() && !hit; ++x) hit = K.leq(x, u) && f(x) == y;
        if (!hit) throw LiftFailed("restriction to the section is not surjective");
    }
    return {u, psi};
}

}  // namespace starlat
