#pragma once

#include <cstdint>
#include <string>

#include "fbsim/gf2.hpp"

namespace fbsim {

// Phase-free Pauli operator on n qubits in binary symplectic form:
// bits [0, n) are the X part, bits [n, 2n) the Z part.
class PauliOp {
public:
    PauliOp() = default;
    explicit PauliOp(size_t n_qubits) : n_(n_qubits), bits_(2 * n_qubits) {}

    size_t n_qubits() const { return n_; }
    const gf2::BitVec& bits() const { return bits_; }
    gf2::BitVec& bits() { return bits_; }

    bool x(size_t q) const { return bits_.get(q); }
    bool z(size_t q) const { return bits_.get(n_ + q); }
    void set_x(size_t q, bool v = true) { bits_.set(q, v); }
    void set_z(size_t q, bool v = true) { bits_.set(n_ + q, v); }

    PauliOp& operator*=(const PauliOp& o) {
        bits_ ^= o.bits_;
        return *this;
    }
    friend PauliOp operator*(PauliOp a, const PauliOp& b) { return a *= b; }
    bool operator==(const PauliOp& o) const { return bits_ == o.bits_; }

    bool identity() const { return !bits_.any(); }

    size_t weight() const {
        size_t w = 0;
        for (size_t q = 0; q < n_; ++q)
            if (x(q) || z(q)) ++w;
        return w;
    }

    bool commutes_with(const PauliOp& o) const {
        bool acc = false;
        for (size_t q = 0; q < n_; ++q) {
            acc ^= (x(q) && o.z(q));
            acc ^= (z(q) && o.x(q));
        }
        return !acc;
    }

    char at(size_t q) const {
        bool xb = x(q), zb = z(q);
        if (xb && zb) return 'Y';
        if (xb) return 'X';
        if (zb) return 'Z';
        return 'I';
    }

    std::string to_string() const {
        std::string s(n_, 'I');
        for (size_t q = 0; q < n_; ++q) s[q] = at(q);
        return s;
    }

    static PauliOp single_x(size_t n, size_t q) {
        PauliOp p(n);
        p.set_x(q);
        return p;
    }
    static PauliOp single_z(size_t n, size_t q) {
        PauliOp p(n);
        p.set_z(q);
        return p;
    }
    static PauliOp two_qubit_xx(size_t n, size_t a, size_t b) {
        PauliOp p(n);
        p.set_x(a);
        p.set_x(b);
        return p;
    }
    static PauliOp two_qubit_zz(size_t n, size_t a, size_t b) {
        PauliOp p(n);
        p.set_z(a);
        p.set_z(b);
        return p;
    }

private:
    size_t n_ = 0;
    gf2::BitVec bits_;
};

}  // namespace fbsim
