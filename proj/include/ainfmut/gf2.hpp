#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ainfmut::gf2 {

constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) {
    return (bits + kWordBits - 1) / kWordBits;
}

/// Dense bit vector over GF(2).
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), w_(words_for(n), 0) {}

    std::size_t size() const { return n_; }

    bool get(std::size_t i) const {
        return (w_[i / kWordBits] >> (i % kWordBits)) & 1u;
    }
    void set(std::size_t i, bool v = true) {
        std::uint64_t mask = std::uint64_t(1) << (i % kWordBits);
        if (v)
            w_[i / kWordBits] |= mask;
        else
            w_[i / kWordBits] &= ~mask;
    }
    void flip(std::size_t i) { w_[i / kWordBits] ^= std::uint64_t(1) << (i % kWordBits); }

    BitVec& operator^=(const BitVec& o) {
        for (std::size_t j = 0; j < w_.size(); ++j)
            w_[j] ^= o.w_[j];
        return *this;
    }

    bool any() const {
        for (auto w : w_)
            if (w)
                return true;
        return false;
    }

    bool operator==(const BitVec&) const = default;

    template <class F>
    void for_each_set(F&& f) const {
        for (std::size_t j = 0; j < w_.size(); ++j) {
            std::uint64_t w = w_[j];
            while (w) {
                unsigned b = static_cast<unsigned>(__builtin_ctzll(w));
                f(j * kWordBits + b);
                w &= w - 1;
            }
        }
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

/// Dense bit matrix over GF(2), rows packed into 64-bit words.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), stride_(words_for(cols)), w_(rows * stride_, 0) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.set(i, i, true);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (w_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v = true) {
        std::uint64_t mask = std::uint64_t(1) << (c % kWordBits);
        if (v)
            w_[r * stride_ + c / kWordBits] |= mask;
        else
            w_[r * stride_ + c / kWordBits] &= ~mask;
    }
    void flip(std::size_t r, std::size_t c) {
        w_[r * stride_ + c / kWordBits] ^= std::uint64_t(1) << (c % kWordBits);
    }

    void xor_row_into(std::size_t src, std::size_t dst) {
        for (std::size_t j = 0; j < stride_; ++j)
            w_[dst * stride_ + j] ^= w_[src * stride_ + j];
    }

    bool row_empty(std::size_t r) const {
        for (std::size_t j = 0; j < stride_; ++j)
            if (w_[r * stride_ + j])
                return false;
        return true;
    }

    bool is_zero() const {
        for (auto w : w_)
            if (w)
                return false;
        return true;
    }

    BitMatrix transposed() const {
        BitMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t j = 0; j < stride_; ++j) {
                std::uint64_t w = w_[r * stride_ + j];
                while (w) {
                    unsigned b = static_cast<unsigned>(__builtin_ctzll(w));
                    t.set(j * kWordBits + b, r, true);
                    w &= w - 1;
                }
            }
        return t;
    }

    BitMatrix operator+(const BitMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("BitMatrix: shape mismatch in +");
        BitMatrix s = *this;
        for (std::size_t j = 0; j < w_.size(); ++j)
            s.w_[j] ^= o.w_[j];
        return s;
    }

    // this * o, composing as maps on column vectors.
    BitMatrix operator*(const BitMatrix& o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("BitMatrix: shape mismatch in *");
        BitMatrix p(rows_, o.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k)
                if (get(r, k))
                    for (std::size_t j = 0; j < o.stride_; ++j)
                        p.w_[r * p.stride_ + j] ^= o.w_[k * o.stride_ + j];
        return p;
    }

    BitVec apply(const BitVec& x) const {
        if (x.size() != cols_)
            throw std::invalid_argument("BitMatrix: vector length mismatch");
        BitVec y(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            std::uint64_t acc = 0;
            x.for_each_set([&](std::size_t c) { acc ^= get(r, c) ? 1u : 0u; });
            if (acc & 1u)
                y.set(r, true);
        }
        return y;
    }

    // Row reduction with deterministic pivoting: scan columns left to right,
    // pick the lowest-index unused row with a set bit.
    std::size_t rank() const {
        BitMatrix m = *this;
        std::vector<bool> used(m.rows_, false);
        std::size_t rk = 0;
        for (std::size_t c = 0; c < m.cols_; ++c) {
            std::size_t pivot = m.rows_;
            for (std::size_t r = 0; r < m.rows_; ++r)
                if (!used[r] && m.get(r, c)) {
                    pivot = r;
                    break;
                }
            if (pivot == m.rows_)
                continue;
            used[pivot] = true;
            ++rk;
            for (std::size_t r = 0; r < m.rows_; ++r)
                if (r != pivot && m.get(r, c))
                    m.xor_row_into(pivot, r);
        }
        return rk;
    }

    bool operator==(const BitMatrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<std::uint64_t> w_;
};

} // namespace ainfmut::gf2
