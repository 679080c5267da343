#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <vector>

namespace fbsim::gf2 {

// Dense bit vectors and GF(2) elimination. Sizes here are modest (a few
// thousand columns), so a simple word-packed representation is enough.

class BitVec {
public:
    BitVec() = default;
    explicit BitVec(size_t n_bits) : n_(n_bits), w_((n_bits + 63) / 64, 0) {}

    size_t size() const { return n_; }

    bool get(size_t i) const {
        assert(i < n_);
        return (w_[i >> 6] >> (i & 63)) & 1;
    }
    void set(size_t i, bool v = true) {
        assert(i < n_);
        if (v)
            w_[i >> 6] |= uint64_t(1) << (i & 63);
        else
            w_[i >> 6] &= ~(uint64_t(1) << (i & 63));
    }
    void flip(size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

    BitVec& operator^=(const BitVec& o) {
        assert(n_ == o.n_);
        for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

    bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }

    bool any() const {
        for (uint64_t w : w_)
            if (w) return true;
        return false;
    }
    size_t popcount() const {
        size_t c = 0;
        for (uint64_t w : w_) c += static_cast<size_t>(__builtin_popcountll(w));
        return c;
    }
    // Parity of the AND of two vectors; used for symplectic products.
    static bool dot(const BitVec& a, const BitVec& b) {
        assert(a.n_ == b.n_);
        uint64_t acc = 0;
        for (size_t i = 0; i < a.w_.size(); ++i) acc ^= a.w_[i] & b.w_[i];
        return __builtin_parityll(acc);
    }
    int lowest_set() const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return static_cast<int>(i * 64 + static_cast<size_t>(__builtin_ctzll(w_[i])));
        return -1;
    }
    std::vector<size_t> ones() const {
        std::vector<size_t> out;
        for (size_t i = 0; i < n_; ++i)
            if (get(i)) out.push_back(i);
        return out;
    }

private:
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

// Row-major bit matrix used as a list of generators.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

    size_t n_rows() const { return rows_.size(); }
    size_t n_cols() const { return cols_; }
    BitVec& row(size_t r) { return rows_[r]; }
    const BitVec& row(size_t r) const { return rows_[r]; }
    void add_row(BitVec v) {
        assert(cols_ == 0 || v.size() == cols_);
        cols_ = v.size();
        rows_.push_back(std::move(v));
    }

    // In-place row echelon form; returns rank. Pivot columns are chosen left
    // to right.
    size_t row_reduce() {
        size_t r = 0;
        for (size_t c = 0; c < cols_ && r < rows_.size(); ++c) {
            size_t pivot = r;
            while (pivot < rows_.size() && !rows_[pivot].get(c)) ++pivot;
            if (pivot == rows_.size()) continue;
            std::swap(rows_[r], rows_[pivot]);
            for (size_t i = 0; i < rows_.size(); ++i)
                if (i != r && rows_[i].get(c)) rows_[i] ^= rows_[r];
            ++r;
        }
        return r;
    }

    size_t rank() const {
        BitMatrix copy = *this;
        return copy.row_reduce();
    }

private:
    size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

// Basis of the intersection of the row spaces of A and B (Zassenhaus).
inline std::vector<BitVec> intersect_rowspaces(const BitMatrix& a, const BitMatrix& b) {
    assert(a.n_cols() == b.n_cols());
    const size_t n = a.n_cols();
    BitMatrix m(0, 0);
    for (size_t r = 0; r < a.n_rows(); ++r) {
        BitVec v(2 * n);
        for (size_t i = 0; i < n; ++i)
            if (a.row(r).get(i)) {
                v.set(i);
                v.set(n + i);
            }
        m.add_row(std::move(v));
    }
    for (size_t r = 0; r < b.n_rows(); ++r) {
        BitVec v(2 * n);
        for (size_t i = 0; i < n; ++i)
            if (b.row(r).get(i)) v.set(i);
        m.add_row(std::move(v));
    }
    m.row_reduce();
    std::vector<BitVec> out;
    for (size_t r = 0; r < m.n_rows(); ++r) {
        bool left_zero = true;
        for (size_t i = 0; i < n && left_zero; ++i) left_zero = !m.row(r).get(i);
        if (!left_zero) continue;
        BitVec right(n);
        for (size_t i = 0; i < n; ++i)
            if (m.row(r).get(n + i)) right.set(i);
        if (right.any()) out.push_back(std::move(right));
    }
    return out;
}

// Solves x * rows(gens) = target. Returns coefficient vector or nullopt.
inline std::optional<BitVec> solve_membership(const BitMatrix& gens, const BitVec& target) {
    const size_t n = gens.n_cols();
    const size_t k = gens.n_rows();
    // Augment each generator row with an identity tag tracking combinations.
    std::vector<BitVec> rows;
    rows.reserve(k);
    for (size_t r = 0; r < k; ++r) {
        BitVec v(n + k);
        for (size_t i = 0; i < n; ++i)
            if (gens.row(r).get(i)) v.set(i);
        v.set(n + r);
        rows.push_back(std::move(v));
    }
    BitVec t(n + k);
    for (size_t i = 0; i < n; ++i)
        if (target.get(i)) t.set(i);
    size_t r = 0;
    for (size_t c = 0; c < n && r < rows.size(); ++c) {
        size_t pivot = r;
        while (pivot < rows.size() && !rows[pivot].get(c)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        for (size_t i = 0; i < rows.size(); ++i)
            if (i != r && rows[i].get(c)) rows[i] ^= rows[r];
        if (t.get(c)) t ^= rows[r];
        ++r;
    }
    for (size_t i = 0; i < n; ++i)
        if (t.get(i)) return std::nullopt;
    BitVec coeff(k);
    for (size_t i = 0; i < k; ++i)
        if (t.get(n + i)) coeff.set(i);
    return coeff;
}

// Kernel basis of the linear map x -> x * rows(m) restricted to the given
// column subset, i.e. all combinations of rows of m that vanish on `cols`.
inline std::vector<BitVec> kernel_on_columns(const BitMatrix& m, const std::vector<size_t>& cols) {
    const size_t k = m.n_rows();
    // Build the k x |cols| matrix of the restricted rows, augmented with an
    // identity tag, and eliminate; rows whose restricted part becomes zero
    // give kernel combinations.
    std::vector<BitVec> rows;
    rows.reserve(k);
    for (size_t r = 0; r < k; ++r) {
        BitVec v(cols.size() + k);
        for (size_t i = 0; i < cols.size(); ++i)
            if (m.row(r).get(cols[i])) v.set(i);
        v.set(cols.size() + r);
        rows.push_back(std::move(v));
    }
    size_t r = 0;
    for (size_t c = 0; c < cols.size() && r < rows.size(); ++c) {
        size_t pivot = r;
        while (pivot < rows.size() && !rows[pivot].get(c)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        for (size_t i = 0; i < rows.size(); ++i)
            if (i != r && rows[i].get(c)) rows[i] ^= rows[r];
        ++r;
    }
    std::vector<BitVec> kernel;
    for (size_t i = r; i < rows.size(); ++i) {
        BitVec coeff(k);
        for (size_t j = 0; j < k; ++j)
            if (rows[i].get(cols.size() + j)) coeff.set(j);
        if (coeff.any()) kernel.push_back(std::move(coeff));
    }
    // Rows beyond the eliminated ones are exactly those with zero restriction.
    // Defensive: also catch reduced rows that ended up zero on the columns.
    for (size_t i = 0; i < r; ++i) {
        bool zero = true;
        for (size_t c = 0; c < cols.size() && zero; ++c) zero = !rows[i].get(c);
        if (zero) {
            BitVec coeff(k);
            for (size_t j = 0; j < k; ++j)
                if (rows[i].get(cols.size() + j)) coeff.set(j);
            if (coeff.any()) kernel.push_back(std::move(coeff));
        }
    }
    return kernel;
}

}  // namespace fbsim::gf2
