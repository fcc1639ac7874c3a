// Seeded sampling helpers. All randomized checks draw through this wrapper
// so that reports are reproducible from (inputs, seed).
#pragma once

#include <starlat/matrix.hpp>

#include <cstdint>
#include <random>

namespace starlat {

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : eng_(seed) {}

    std::uint64_t next(std::uint64_t bound) {  // uniform in [0, bound)
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(eng_);
    }
    long long next_int(long long lo, long long hi) {  // inclusive
        return std::uniform_int_distribution<long long>(lo, hi)(eng_);
    }

    /// Scalar with small coordinates: finite fields uniform; rationals and
    /// quadratic extensions with numerators/denominators bounded by 16.
    Scalar scalar(const FieldPtr& f) {
        switch (f->kind()) {
            case FieldKind::Finite: return f->element(next(f->size()));
            case FieldKind::Rationals: return f->from_rat(small_rat());
            case FieldKind::QuadExt: return f->from_quad(small_rat(), small_rat());
        }
        return f->zero();
    }

    Matrix matrix(const FieldPtr& f, std::size_t rows, std::size_t cols) {
        Matrix m(f, rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = scalar(f);
        return m;
    }

    Vec vector(const FieldPtr& f, std::size_t n) {
        Vec v;
        for (std::size_t i = 0; i < n; ++i) v.push_back(scalar(f));
        return v;
    }

private:
    Rat small_rat() {
        long long num = next_int(-16, 16);
        long long den = next_int(1, 16);
        return Rat(num) / Rat(den);
    }

    std::mt19937_64 eng_;
};

}  // namespace starlat
