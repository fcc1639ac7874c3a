// Principal one-sided ideal lattices of a finite ring, ordered by inclusion.
// For involutive regular rings the lattice carries the orthocomplement
// (1-e)R of eR; corners give intervals and the star map gives the
// left/right duality.
#pragma once

#include <starlat/lattice.hpp>
#include <starlat/star_ring.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace starlat {

struct IdealLattice {
    FiniteLattice lattice;
    std::vector<Bits> sets;                         // lattice element -> subset of R
    std::vector<TableRing::Elem> generator;         // some x generating the ideal
    std::vector<std::optional<TableRing::Elem>> projection;  // generating projection

    FiniteLattice::Elem index_of(const Bits& s) const {
        for (std::size_t i = 0; i < sets.size(); ++i)
            if (sets[i] == s) return static_cast<FiniteLattice::Elem>(i);
        throw std::runtime_error("set is not a principal ideal of this ring");
    }
};

namespace detail {

inline IdealLattice principal_ideal_lattice(const TableRing& r, bool right) {
    if (!r.unital()) throw NotUnital();
    IdealLattice out;
    std::map<std::vector<Bits::block_type>, std::size_t> seen;
    std::vector<std::string> labels;
    for (TableRing::Elem x = 0; x < r.size(); ++x) {
        Bits s = right ? r.right_set(x) : r.left_set(x);
        std::vector<Bits::block_type> key(s.num_blocks());
        boost::to_block_range(s, key.begin());
        if (seen.emplace(std::move(key), out.sets.size()).second) {
            out.sets.push_back(std::move(s));
            out.generator.push_back(x);
            labels.push_back(right ? r.label(x) + "R" : "R" + r.label(x));
        }
    }
    std::size_t n = out.sets.size();
    std::vector<Bits> leq(n, Bits(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (out.sets[i].is_subset_of(out.sets[j])) leq[i].set(j);
    // prefer a projection as the displayed generator where one exists
    for (std::size_t i = 0; i < n; ++i) {
        out.projection.emplace_back();
        for (TableRing::Elem e : r.projections()) {
            Bits s = right ? r.right_set(e) : r.left_set(e);
            if (s == out.sets[i]) {
                out.projection[i] = e;
                out.generator[i] = e;
                labels[i] = right ? r.label(e) + "R" : "R" + r.label(e);
                break;
            }
        }
    }
    out.lattice = FiniteLattice::from_leq(std::move(leq), std::move(labels));
    // orthocomplement eR -> (1-e)R when every ideal has a projection generator
    bool all_proj = true;
    for (const auto& p : out.projection) all_proj = all_proj && p.has_value();
    if (all_proj) {
        std::vector<FiniteLattice::Elem> ortho(n);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            TableRing::Elem c = r.sub(r.one(), *out.projection[i]);
            Bits s = right ? r.right_set(c) : r.left_set(c);
            try {
                ortho[i] = out.index_of(s);
            } catch (const std::runtime_error&) {
                ok = false;
            }
        }
        if (ok) {
            // admit only a genuine orthocomplementation
            for (std::size_t i = 0; i < n && ok; ++i)
                ok = ortho[ortho[i]] == i &&
                     out.lattice.meet(static_cast<FiniteLattice::Elem>(i), ortho[i]) ==
                         out.lattice.bottom() &&
                     out.lattice.join(static_cast<FiniteLattice::Elem>(i), ortho[i]) ==
                         out.lattice.top();
            if (ok) out.lattice.set_ortho(std::move(ortho));
        }
    }
    return out;
}

}  // namespace detail

inline IdealLattice principal_right_ideal_lattice(const TableRing& r) {
    return detail::principal_ideal_lattice(r, true);
}
inline IdealLattice principal_left_ideal_lattice(const TableRing& r) {
    return detail::principal_ideal_lattice(r, false);
}

/// L((eRe)_{eRe}) is isomorphic to the interval [0, eR] of L(R_R) via
/// x(eRe) -> xR; builds both sides and checks the map.
inline Report interval_and_corner_iso(const TableRing& r, TableRing::Elem e) {
    if (!r.is_projection(e)) throw NotAProjection();
    Report rep;
    rep.subject = "corner/interval isomorphism at " + r.label(e);

    TableRing::Subring corner = r.corner(e);
    IdealLattice cl = principal_right_ideal_lattice(corner.ring);
    IdealLattice rl = principal_right_ideal_lattice(r);

    FiniteLattice::Elem top = rl.index_of(r.right_set(e));
    FiniteLattice interval = rl.lattice.interval(rl.lattice.bottom(), top);
    // reindex: interval elements in rl order
    std::vector<FiniteLattice::Elem> ivl;
    for (FiniteLattice::Elem x = 0; x < rl.lattice.size(); ++x)
        if (rl.lattice.leq(x, top)) ivl.push_back(x);

    rep.check("equal cardinality", cl.lattice.size() == ivl.size(),
              std::to_string(cl.lattice.size()) + " vs " + std::to_string(ivl.size()));
    if (cl.lattice.size() != ivl.size()) return rep;

    // the map x(eRe) -> xR on representatives
    std::vector<FiniteLattice::Elem> img(cl.lattice.size());
    bool defined = true;
    for (FiniteLattice::Elem i = 0; i < cl.lattice.size() && defined; ++i) {
        TableRing::Elem ambient = corner.carrier[cl.generator[i]];
        Bits s = r.right_set(ambient);
        try {
            FiniteLattice::Elem t = rl.index_of(s);
            defined = rl.lattice.leq(t, top);
            img[i] = t;
        } catch (const std::runtime_error&) {
            defined = false;
        }
    }
    rep.check("map lands in the interval", defined);
    if (!defined) return rep;

    bool injective = true, order_iso = true;
    for (FiniteLattice::Elem i = 0; i < cl.lattice.size(); ++i)
        for (FiniteLattice::Elem j = 0; j < cl.lattice.size(); ++j) {
            if (i != j && img[i] == img[j]) injective = false;
            if (cl.lattice.leq(i, j) != rl.lattice.leq(img[i], img[j])) order_iso = false;
        }
    rep.check("bijective", injective);
    rep.check("order isomorphism (hence lattice isomorphism)", order_iso);
    return rep;
}

/// Congruence simplicity of L(R_R), simplicity of its intervals, and the
/// duality between left and right ideal lattices.
inline Report simplicity_and_duality(const TableRing& r) {
    Report rep;
    rep.subject = "simplicity and duality of the ideal lattices";
    IdealLattice right = principal_right_ideal_lattice(r);
    IdealLattice left = principal_left_ideal_lattice(r);

    rep.check("ring simple", r.is_simple());
    rep.check("right ideal lattice simple", right.lattice.is_simple());

    bool intervals_simple = true;
    std::string w;
    for (FiniteLattice::Elem a = 0; a < right.lattice.size() && intervals_simple; ++a) {
        if (a == right.lattice.bottom()) continue;
        FiniteLattice iv = right.lattice.interval(right.lattice.bottom(), a);
        if (iv.size() >= 2 && !iv.is_simple()) {
            intervals_simple = false;
            w = "interval [0, " + right.lattice.label(a) + "]";
        }
    }
    rep.check("all nontrivial intervals [0,a] simple", intervals_simple, w);

    // xR -> Rx* is an isomorphism onto the left ideal lattice
    bool iso_defined = true, iso_order = true, iso_bij = true;
    std::vector<FiniteLattice::Elem> iso(right.lattice.size());
    for (FiniteLattice::Elem i = 0; i < right.lattice.size() && iso_defined; ++i) {
        // well-definedness: every generator of the same right ideal must agree
        std::optional<Bits> target;
        for (TableRing::Elem x = 0; x < r.size(); ++x) {
            if (r.right_set(x) != right.sets[i]) continue;
            Bits s = r.left_set(r.star(x));
            if (!target)
                target = s;
            else if (*target != s)
                iso_defined = false;
        }
        try {
            iso[i] = left.index_of(*target);
        } catch (const std::runtime_error&) {
            iso_defined = false;
        }
    }
    rep.check("xR -> Rx* well defined", iso_defined);
    if (iso_defined) {
        Bits hit(left.lattice.size());
        for (FiniteLattice::Elem i = 0; i < right.lattice.size(); ++i) {
            hit.set(iso[i]);
            for (FiniteLattice::Elem j = 0; j < right.lattice.size(); ++j)
                if (right.lattice.leq(i, j) != left.lattice.leq(iso[i], iso[j])) iso_order = false;
        }
        iso_bij = hit.count() == left.lattice.size() &&
                  right.lattice.size() == left.lattice.size();
        rep.check("xR -> Rx* bijective", iso_bij);
        rep.check("xR -> Rx* order preserving", iso_order);
    }

    // eR -> R(1-e) reverses the order (anti-isomorphism), projections permitting
    bool anti_total = true, anti_order = true;
    for (FiniteLattice::Elem i = 0; i < right.lattice.size() && anti_total; ++i)
        anti_total = right.projection[i].has_value();
    if (anti_total && r.unital()) {
        std::vector<FiniteLattice::Elem> anti(right.lattice.size());
        for (FiniteLattice::Elem i = 0; i < right.lattice.size() && anti_total; ++i) {
            try {
                anti[i] = left.index_of(r.left_set(r.sub(r.one(), *right.projection[i])));
            } catch (const std::runtime_error&) {
                anti_total = false;
            }
        }
        if (anti_total)
            for (FiniteLattice::Elem i = 0; i < right.lattice.size(); ++i)
                for (FiniteLattice::Elem j = 0; j < right.lattice.size(); ++j)
                    if (right.lattice.leq(i, j) != left.lattice.leq(anti[j], anti[i]))
                        anti_order = false;
    }
    rep.check("eR -> R(1-e) defined on projection generators", anti_total);
    if (anti_total) rep.check("eR -> R(1-e) order reversing", anti_order);
    return rep;
}

}  // namespace starlat
