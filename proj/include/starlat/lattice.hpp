// Finite bounded lattices given by an order bitmatrix, with orthocomplement
// support, congruence computation, perspectivity, homomorphisms and
// complement lifting. FiniteLattice is the table-backed LatticeContext; the
// generic verifiers at the bottom work for any context.
#pragma once

#include <starlat/report.hpp>
#include <starlat/star_ring.hpp>

#include <boost/dynamic_bitset.hpp>

#include <concepts>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace starlat {

struct NotALattice : std::runtime_error {
    explicit NotALattice(const std::string& w) : std::runtime_error("not a lattice: " + w) {}
};
struct MissingOrthocomplement : std::runtime_error {
    MissingOrthocomplement() : std::runtime_error("context carries no orthocomplement") {}
};
struct NoComplement : std::runtime_error {
    NoComplement() : std::runtime_error("no complement exists in the interval") {}
};
struct NoLift : std::runtime_error {
    NoLift() : std::runtime_error("no complement lift exists (contract violation)") {}
};

/// Shared interface of the table and subspace lattice backends.
template <class C>
concept LatticeContext = requires(const C& c, const typename C::Elem& x) {
    { c.leq(x, x) } -> std::convertible_to<bool>;
    { c.equal(x, x) } -> std::convertible_to<bool>;
    { c.meet(x, x) } -> std::same_as<typename C::Elem>;
    { c.join(x, x) } -> std::same_as<typename C::Elem>;
    { c.bottom() } -> std::same_as<typename C::Elem>;
    { c.top() } -> std::same_as<typename C::Elem>;
    { c.has_ortho() } -> std::convertible_to<bool>;
    { c.ortho(x) } -> std::same_as<typename C::Elem>;
    { c.complement_in_interval(x, x) } -> std::same_as<typename C::Elem>;
};

class FiniteLattice {
public:
    using Elem = std::uint32_t;

    FiniteLattice() = default;  // empty; fill via the factories

    static constexpr std::size_t kCongruenceBound = 200;

    /// Build from the order relation; meet/join tables are derived. Throws
    /// NotALattice when some pair lacks a unique glb or lub.
    static FiniteLattice from_leq(std::vector<Bits> leq, std::vector<std::string> labels = {}) {
        FiniteLattice l;
        l.n_ = leq.size();
        l.leq_ = std::move(leq);
        l.labels_ = std::move(labels);
        for (const auto& row : l.leq_)
            if (row.size() != l.n_) throw NotALattice("ragged order matrix");
        for (Elem a = 0; a < l.n_; ++a) {
            if (!l.leq_[a].test(a)) throw NotALattice("order not reflexive");
            for (Elem b = 0; b < l.n_; ++b) {
                if (a != b && l.leq_[a].test(b) && l.leq_[b].test(a))
                    throw NotALattice("order not antisymmetric");
                if (l.leq_[a].test(b) && !l.leq_[b].is_subset_of(l.leq_[a]))
                    throw NotALattice("order not transitive");
            }
        }
        l.build_tables();
        return l;
    }

    static FiniteLattice chain(std::size_t n) {
        std::vector<Bits> leq(n, Bits(n));
        for (Elem a = 0; a < n; ++a)
            for (Elem b = a; b < n; ++b) leq[a].set(b);
        FiniteLattice l = from_leq(std::move(leq));
        if (n >= 1) {
            l.ortho_.emplace(n);
            for (Elem a = 0; a < n; ++a) (*l.ortho_)[a] = static_cast<Elem>(n - 1 - a);
        }
        return l;
    }

    /// Boolean lattice 2^k; elements are subset masks, ortho is complement.
    static FiniteLattice boolean(unsigned k) {
        std::size_t n = std::size_t(1) << k;
        std::vector<Bits> leq(n, Bits(n));
        for (Elem a = 0; a < n; ++a)
            for (Elem b = 0; b < n; ++b)
                if ((a & b) == a) leq[a].set(b);
        FiniteLattice l = from_leq(std::move(leq));
        l.ortho_.emplace(n);
        for (Elem a = 0; a < n; ++a) (*l.ortho_)[a] = static_cast<Elem>((n - 1) & ~a);
        return l;
    }

    /// The pentagon N5: 0 < x < y < 1, 0 < z < 1, z incomparable to x, y.
    static FiniteLattice pentagon() {
        std::size_t n = 5;  // 0, x, y, z, 1
        std::vector<Bits> leq(n, Bits(n));
        auto set = [&](Elem a, Elem b) { leq[a].set(b); };
        for (Elem a = 0; a < n; ++a) {
            set(a, a);
            set(0, a);
            set(a, 4);
        }
        set(1, 2);
        return from_leq(std::move(leq), {"0", "x", "y", "z", "1"});
    }

    std::size_t size() const { return n_; }
    Elem element(std::size_t i) const { return static_cast<Elem>(i); }
    bool leq(Elem a, Elem b) const { return leq_[a].test(b); }
    bool equal(Elem a, Elem b) const { return a == b; }
    Elem meet(Elem a, Elem b) const { return meet_[a * n_ + b]; }
    Elem join(Elem a, Elem b) const { return join_[a * n_ + b]; }
    Elem bottom() const { return bottom_; }
    Elem top() const { return top_; }

    bool has_ortho() const { return ortho_.has_value(); }
    Elem ortho(Elem a) const {
        if (!ortho_) throw MissingOrthocomplement();
        return (*ortho_)[a];
    }
    void set_ortho(std::vector<Elem> o) { ortho_ = std::move(o); }

    std::string label(Elem a) const {
        if (a < labels_.size() && !labels_[a].empty()) return labels_[a];
        return "#" + std::to_string(a);
    }
    void set_labels(std::vector<std::string> l) { labels_ = std::move(l); }

    /// Deterministic complement of b in [0, a] (requires b <= a): the
    /// relative orthocomplement a ∧ b⊥ when an ortho is present and works,
    /// else the first complement in carrier order.
    Elem complement_in_interval(Elem b, Elem a) const {
        if (!leq(b, a)) throw NotALattice("complement_in_interval needs b <= a");
        if (ortho_) {
            Elem d = meet(a, ortho(b));
            if (meet(b, d) == bottom_ && join(b, d) == a) return d;
        }
        for (Elem d = 0; d < n_; ++d)
            if (meet(b, d) == bottom_ && join(b, d) == a) return d;
        throw NoComplement();
    }

    /// Longest chain length from bottom to top (number of covers).
    std::size_t height() const {
        std::vector<Elem> order(n_);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](Elem a, Elem b) { return leq_[a].count() > leq_[b].count(); });
        std::vector<std::size_t> h(n_, 0);  // order[] is linearized bottom-up
        std::size_t best = 0;
        for (Elem a : order)
            for (Elem b : order)
                if (a != b && leq(a, b)) {
                    h[b] = std::max(h[b], h[a] + 1);
                    best = std::max(best, h[b]);
                }
        return best;
    }

    std::vector<Elem> atoms() const {
        std::vector<Elem> out;
        for (Elem a = 0; a < n_; ++a) {
            if (a == bottom_) continue;
            bool atom = true;
            for (Elem b = 0; b < n_ && atom; ++b)
                if (b != bottom_ && b != a && leq(b, a)) atom = false;
            if (atom) out.push_back(a);
        }
        return out;
    }

    // --- perspectivity --------------------------------------------------------

    /// Common complement of a and b in [0, a v b v c]: the smallest-index c
    /// with a ∧ c = b ∧ c = 0 and a v c = b v c.
    std::optional<Elem> perspectivity(Elem a, Elem b) const {
        for (Elem c = 0; c < n_; ++c)
            if (meet(a, c) == bottom_ && meet(b, c) == bottom_ && join(a, c) == join(b, c))
                return c;
        return std::nullopt;
    }

    struct SubPerspectivity {
        Elem image;  // d <= b with a ~ d
        Elem axis;
    };
    std::optional<SubPerspectivity> subperspective(Elem a, Elem b) const {
        for (Elem d = 0; d < n_; ++d) {
            if (!leq(d, b)) continue;
            if (auto c = perspectivity(a, d)) return SubPerspectivity{d, *c};
        }
        return std::nullopt;
    }

    // --- congruences -----------------------------------------------------------

    /// Principal congruence collapsing (a, b), as a class-id vector.
    std::vector<Elem> principal_congruence(Elem a, Elem b) const {
        if (n_ > kCongruenceBound) throw BackendTooLarge();
        std::vector<Elem> parent(n_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](Elem x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        std::vector<std::pair<Elem, Elem>> work{{a, b}};
        auto unite = [&](Elem x, Elem y) {
            x = find(x);
            y = find(y);
            if (x != y) {
                parent[x] = y;
                work.emplace_back(x, y);
            }
        };
        unite(a, b);
        while (!work.empty()) {
            auto [x, y] = work.back();
            work.pop_back();
            for (Elem z = 0; z < n_; ++z) {
                unite(meet(x, z), meet(y, z));
                unite(join(x, z), join(y, z));
            }
        }
        std::vector<Elem> cls(n_);
        for (Elem x = 0; x < n_; ++x) cls[x] = find(x);
        return cls;
    }

    bool is_simple() const {
        if (n_ < 2) return false;
        for (Elem a = 0; a < n_; ++a)
            for (Elem b = static_cast<Elem>(a + 1); b < n_; ++b) {
                std::vector<Elem> cls = principal_congruence(a, b);
                for (Elem x = 1; x < n_; ++x)
                    if (cls[x] != cls[0]) return false;
            }
        return true;
    }

    /// All congruences: principal ones closed under join of partitions.
    std::vector<std::vector<Elem>> all_congruences() const {
        auto canon = [&](std::vector<Elem> cls) {
            std::vector<Elem> remap(n_, n_ == 0 ? 0 : static_cast<Elem>(n_));
            Elem next = 0;
            for (Elem x = 0; x < n_; ++x) {
                if (remap[cls[x]] == static_cast<Elem>(n_)) remap[cls[x]] = next++;
                cls[x] = remap[cls[x]];
            }
            return cls;
        };
        std::vector<std::vector<Elem>> cons;
        auto insert = [&](std::vector<Elem> c) {
            c = canon(std::move(c));
            for (const auto& x : cons)
                if (x == c) return false;
            cons.push_back(std::move(c));
            return true;
        };
        std::vector<Elem> id(n_);
        std::iota(id.begin(), id.end(), 0);
        insert(id);
        for (Elem a = 0; a < n_; ++a)
            for (Elem b = static_cast<Elem>(a + 1); b < n_; ++b)
                insert(principal_congruence(a, b));
        bool grew = true;
        while (grew) {
            grew = false;
            std::size_t m = cons.size();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j) {
                    // join of congruences: transitive closure of the union
                    std::vector<Elem> parent(n_);
                    std::iota(parent.begin(), parent.end(), 0);
                    auto find = [&](Elem x) {
                        while (parent[x] != x) x = parent[x] = parent[parent[x]];
                        return x;
                    };
                    for (Elem x = 0; x < n_; ++x)
                        for (Elem y = static_cast<Elem>(x + 1); y < n_; ++y)
                            if (cons[i][x] == cons[i][y] || cons[j][x] == cons[j][y]) {
                                Elem fx = find(x), fy = find(y);
                                if (fx != fy) parent[fx] = fy;
                            }
                    std::vector<Elem> cls(n_);
                    for (Elem x = 0; x < n_; ++x) cls[x] = find(x);
                    if (insert(std::move(cls))) grew = true;
                }
        }
        return cons;
    }

    /// Sublattice on the interval [lo, hi], inheriting labels.
    FiniteLattice interval(Elem lo, Elem hi) const {
        std::vector<Elem> elems;
        for (Elem x = 0; x < n_; ++x)
            if (leq(lo, x) && leq(x, hi)) elems.push_back(x);
        std::vector<Bits> leq2(elems.size(), Bits(elems.size()));
        std::vector<std::string> lab;
        for (std::size_t i = 0; i < elems.size(); ++i) {
            lab.push_back(label(elems[i]));
            for (std::size_t j = 0; j < elems.size(); ++j)
                if (leq(elems[i], elems[j])) leq2[i].set(j);
        }
        return from_leq(std::move(leq2), std::move(lab));
    }

    /// Hasse diagram; orthocomplement as dashed undirected edges.
    std::string to_dot(const std::string& name = "lattice") const {
        std::string s = "graph \"" + name + "\" {\n  rankdir=BT;\n";
        for (Elem a = 0; a < n_; ++a)
            s += "  n" + std::to_string(a) + " [label=\"" + label(a) + "\"];\n";
        for (Elem a = 0; a < n_; ++a)
            for (Elem b = 0; b < n_; ++b) {
                if (a == b || !leq(a, b)) continue;
                bool cover = true;
                for (Elem c = 0; c < n_ && cover; ++c)
                    if (c != a && c != b && leq(a, c) && leq(c, b)) cover = false;
                if (cover) s += "  n" + std::to_string(a) + " -- n" + std::to_string(b) + ";\n";
            }
        if (ortho_)
            for (Elem a = 0; a < n_; ++a)
                if (a < (*ortho_)[a])
                    s += "  n" + std::to_string(a) + " -- n" + std::to_string((*ortho_)[a]) +
                         " [style=dashed, constraint=false];\n";
        s += "}\n";
        return s;
    }

private:
    void build_tables() {
        meet_.assign(n_ * n_, 0);
        join_.assign(n_ * n_, 0);
        for (Elem a = 0; a < n_; ++a)
            for (Elem b = 0; b < n_; ++b) {
                std::optional<Elem> glb, lub;
                for (Elem c = 0; c < n_; ++c) {
                    if (leq(c, a) && leq(c, b) && (!glb || leq(*glb, c))) glb = c;
                    if (leq(a, c) && leq(b, c) && (!lub || leq(c, *lub))) lub = c;
                }
                // the greatest lower bound must dominate every lower bound
                for (Elem c = 0; c < n_; ++c) {
                    if (leq(c, a) && leq(c, b) && (!glb || !leq(c, *glb))) glb.reset();
                    if (leq(a, c) && leq(b, c) && (!lub || !leq(*lub, c))) lub.reset();
                }
                if (!glb || !lub)
                    throw NotALattice("pair (" + std::to_string(a) + "," + std::to_string(b) +
                                      ") lacks a " + (glb ? "lub" : "glb"));
                meet_[a * n_ + b] = *glb;
                join_[a * n_ + b] = *lub;
            }
        std::optional<Elem> bot, top;
        for (Elem a = 0; a < n_; ++a) {
            if (leq_[a].count() == n_) bot = a;
            bool istop = true;
            for (Elem b = 0; b < n_ && istop; ++b) istop = leq(b, a);
            if (istop) top = a;
        }
        if (!bot || !top) throw NotALattice("missing bounds");
        bottom_ = *bot;
        top_ = *top;
    }

    std::size_t n_ = 0;
    std::vector<Bits> leq_;
    std::vector<Elem> meet_, join_;
    Elem bottom_ = 0, top_ = 0;
    std::optional<std::vector<Elem>> ortho_;
    std::vector<std::string> labels_;
};

static_assert(LatticeContext<FiniteLattice>);

// ---------------------------------------------------------------------------
// Generic verifiers over a LatticeContext and a supplied element sample.
// Passing every element of a finite backend makes them exhaustive.
// ---------------------------------------------------------------------------

template <LatticeContext Ctx>
Report verify_lattice_axioms(const Ctx& c, const std::vector<typename Ctx::Elem>& sample,
                             std::size_t triple_budget = 2'000'000) {
    using E = typename Ctx::Elem;
    Report rep;
    rep.subject = "lattice axioms";
    std::size_t n = sample.size();

    bool comm = true, absorb = true, order_ok = true;
    for (std::size_t i = 0; i < n && (comm || absorb || order_ok); ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const E &a = sample[i], &b = sample[j];
            comm = comm && c.equal(c.meet(a, b), c.meet(b, a)) &&
                   c.equal(c.join(a, b), c.join(b, a));
            absorb = absorb && c.equal(c.meet(a, c.join(a, b)), a) &&
                     c.equal(c.join(a, c.meet(a, b)), a);
            order_ok = order_ok && (c.leq(a, b) == c.equal(c.meet(a, b), a));
        }
    rep.check("meet/join commutative", comm);
    rep.check("absorption", absorb);
    rep.check("order matches meet", order_ok);

    bool bounds = true;
    for (std::size_t i = 0; i < n && bounds; ++i)
        bounds = c.leq(c.bottom(), sample[i]) && c.leq(sample[i], c.top());
    rep.check("bounds", bounds);

    bool assoc = true, modular = true;
    std::string w_mod;
    bool exhaustive = n * n * n <= triple_budget;
    std::uint64_t state = 0x2545f4914f6cdd1dull;
    std::size_t count = exhaustive ? n * n * n : triple_budget / 8;
    for (std::size_t t = 0; t < count && (assoc || modular); ++t) {
        std::size_t i, j, k;
        if (exhaustive) {
            i = t / (n * n);
            j = (t / n) % n;
            k = t % n;
        } else {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            i = (state >> 33) % n;
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            j = (state >> 33) % n;
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            k = (state >> 33) % n;
        }
        const E &a = sample[i], &b = sample[j], &x = sample[k];
        assoc = assoc && c.equal(c.meet(c.meet(a, b), x), c.meet(a, c.meet(b, x))) &&
                c.equal(c.join(c.join(a, b), x), c.join(a, c.join(b, x)));
        // modular law: x <= b implies x v (a ∧ b) = (x v a) ∧ b
        if (modular && c.leq(x, b) &&
            !c.equal(c.join(x, c.meet(a, b)), c.meet(c.join(x, a), b))) {
            modular = false;
            w_mod = "triple (" + std::to_string(k) + "," + std::to_string(i) + "," +
                    std::to_string(j) + ") in sample order";
        }
    }
    std::string mode = exhaustive ? "" : " (sampled)";
    rep.check("associativity" + mode, assoc);
    rep.check("modular law" + mode, modular, w_mod);

    bool complemented = true;
    std::string w_comp;
    for (std::size_t i = 0; i < n && complemented; ++i) {
        bool found = false;
        try {
            E d = c.complement_in_interval(sample[i], c.top());
            found = c.equal(c.meet(sample[i], d), c.bottom()) &&
                    c.equal(c.join(sample[i], d), c.top());
        } catch (const NoComplement&) {
        }
        if (!found) {
            complemented = false;
            w_comp = "sample index " + std::to_string(i);
        }
    }
    rep.check("complemented", complemented, w_comp);
    return rep;
}

template <LatticeContext Ctx>
Report verify_mol(const Ctx& c, const std::vector<typename Ctx::Elem>& sample) {
    Report rep;
    rep.subject = "MOL axioms";
    if (!c.has_ortho()) throw MissingOrthocomplement();
    bool invol = true, compl_meet = true, compl_join = true, antitone = true;
    std::string w_i, w_m, w_j, w_a;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto& a = sample[i];
        if (invol && !c.equal(c.ortho(c.ortho(a)), a)) {
            invol = false;
            w_i = std::to_string(i);
        }
        if (compl_meet && !c.equal(c.meet(a, c.ortho(a)), c.bottom())) {
            compl_meet = false;
            w_m = std::to_string(i);
        }
        if (compl_join && !c.equal(c.join(a, c.ortho(a)), c.top())) {
            compl_join = false;
            w_j = std::to_string(i);
        }
        for (std::size_t j = 0; j < sample.size() && antitone; ++j)
            if (c.leq(a, sample[j]) && !c.leq(c.ortho(sample[j]), c.ortho(a))) {
                antitone = false;
                w_a = std::to_string(i) + "," + std::to_string(j);
            }
    }
    rep.check("ortho involutive", invol, w_i);
    rep.check("x ∧ x⊥ = 0", compl_meet, w_m);
    rep.check("x ∨ x⊥ = 1", compl_join, w_j);
    rep.check("ortho antitone", antitone, w_a);
    return rep;
}

/// Sequential independence: x_i ∧ (x_0 v ... v x_{i-1}) = 0 for all i.
template <LatticeContext Ctx>
bool independent(const Ctx& c, const std::vector<typename Ctx::Elem>& xs) {
    typename Ctx::Elem acc = c.bottom();
    for (const auto& x : xs) {
        if (!c.equal(c.meet(x, acc), c.bottom())) return false;
        acc = c.join(acc, x);
    }
    return true;
}

// ---------------------------------------------------------------------------
// Homomorphisms between finite lattices.
// ---------------------------------------------------------------------------

struct LatticeHom {
    const FiniteLattice* source = nullptr;
    const FiniteLattice* target = nullptr;
    std::vector<FiniteLattice::Elem> map;

    FiniteLattice::Elem operator()(FiniteLattice::Elem x) const { return map[x]; }

    Report verify() const {
        using Elem = FiniteLattice::Elem;
        Report rep;
        rep.subject = "lattice homomorphism";
        bool ops = true, bounds = true;
        for (Elem a = 0; a < source->size() && ops; ++a)
            for (Elem b = 0; b < source->size() && ops; ++b)
                ops = map[source->meet(a, b)] == target->meet(map[a], map[b]) &&
                      map[source->join(a, b)] == target->join(map[a], map[b]);
        bounds = map[source->bottom()] == target->bottom() && map[source->top()] == target->top();
        rep.check("preserves meet and join", ops);
        rep.check("preserves 0 and 1", bounds);
        rep.check("surjective", surjective());
        return rep;
    }

    bool surjective() const {
        Bits hit(target->size());
        for (auto x : map) hit.set(x);
        return hit.count() == target->size();
    }
};

/// Given surjective f, b <= a in the source and f(b) ⊕ c = f(a) in the
/// target, produce d with b ⊕ d = a in [0, a] and f(d) = c.
inline FiniteLattice::Elem lift_complement(const LatticeHom& f, FiniteLattice::Elem a,
                                           FiniteLattice::Elem b, FiniteLattice::Elem c) {
    const FiniteLattice& L = *f.source;
    const FiniteLattice& K = *f.target;
    if (!L.leq(b, a)) throw NoLift();
    if (K.meet(f(b), c) != K.bottom() || K.join(f(b), c) != f(a)) throw NoLift();
    for (FiniteLattice::Elem d = 0; d < L.size(); ++d)
        if (L.meet(b, d) == L.bottom() && L.join(b, d) == a && f(d) == c) return d;
    throw NoLift();
}

}  // namespace starlat
