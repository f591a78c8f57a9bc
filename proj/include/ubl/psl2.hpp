#ifndef UBL_PSL2_HPP
#define UBL_PSL2_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ubl/gf2m.hpp"

namespace ubl {

/// 2x2 matrix over GF(2^k) with determinant 1, row-major. In characteristic 2
/// the center of SL2 is trivial, so these are literally the elements of
/// PSL2(2^k). Built independently of the 3x3 unitary model so it can serve as
/// a recognition oracle.
struct P2Mat {
    std::array<std::uint8_t, 4> e{};
    friend bool operator==(const P2Mat& a, const P2Mat& b) { return a.e == b.e; }
    friend bool operator!=(const P2Mat& a, const P2Mat& b) { return !(a == b); }
    friend bool operator<(const P2Mat& a, const P2Mat& b) { return a.e < b.e; }
};

struct P2Hash {
    std::size_t operator()(const P2Mat& m) const {
        std::uint64_t x = std::uint64_t(m.e[0]) | (std::uint64_t(m.e[1]) << 8) |
                          (std::uint64_t(m.e[2]) << 16) | (std::uint64_t(m.e[3]) << 24);
        x *= 0x9E3779B97F4A7C15ull;
        x ^= x >> 29; x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 32;
        return static_cast<std::size_t>(x);
    }
};

class Psl2Ctx {
public:
    explicit Psl2Ctx(unsigned k) : F_(k), q_(1u << k) {
        if (k > 8) throw std::invalid_argument("Psl2Ctx: field degree above 8");
        elems_.reserve(std::size_t(q_) * (q_ * q_ - 1));
        for (std::uint32_t a = 0; a < q_; ++a)
            for (std::uint32_t b = 0; b < q_; ++b)
                for (std::uint32_t c = 0; c < q_; ++c)
                    for (std::uint32_t dd = 0; dd < q_; ++dd) {
                        felt det = F_.add(F_.mul(felt(a), felt(dd)), F_.mul(felt(b), felt(c)));
                        if (det == 1)
                            elems_.push_back(P2Mat{{std::uint8_t(a), std::uint8_t(b),
                                                    std::uint8_t(c), std::uint8_t(dd)}});
                    }
        std::sort(elems_.begin(), elems_.end());
        if (elems_.size() != std::size_t(q_) * (q_ * q_ - 1))
            throw std::logic_error("Psl2Ctx: order mismatch");
    }

    const Field& F() const { return F_; }
    unsigned q() const { return q_; }
    std::uint64_t order() const { return elems_.size(); }
    const std::vector<P2Mat>& elems() const { return elems_; }
    bool contains(const P2Mat& m) const {
        return std::binary_search(elems_.begin(), elems_.end(), m);
    }

    P2Mat identity() const { return P2Mat{{1, 0, 0, 1}}; }

    P2Mat mul(const P2Mat& x, const P2Mat& y) const {
        P2Mat r{};
        r.e[0] = std::uint8_t(F_.mul(x.e[0], y.e[0]) ^ F_.mul(x.e[1], y.e[2]));
        r.e[1] = std::uint8_t(F_.mul(x.e[0], y.e[1]) ^ F_.mul(x.e[1], y.e[3]));
        r.e[2] = std::uint8_t(F_.mul(x.e[2], y.e[0]) ^ F_.mul(x.e[3], y.e[2]));
        r.e[3] = std::uint8_t(F_.mul(x.e[2], y.e[1]) ^ F_.mul(x.e[3], y.e[3]));
        return r;
    }

    P2Mat inv(const P2Mat& x) const {
        // det = 1, char 2: [[d,b],[c,a]]
        return P2Mat{{x.e[3], x.e[1], x.e[2], x.e[0]}};
    }

    P2Mat unitriangular(felt b) const { return P2Mat{{1, std::uint8_t(b), 0, 1}}; }

    P2Mat torus(felt l) const {
        if (l == 0) throw std::invalid_argument("Psl2Ctx: torus(0)");
        return P2Mat{{std::uint8_t(l), 0, 0, std::uint8_t(F_.inv(l))}};
    }

    P2Mat weyl() const { return P2Mat{{0, 1, 1, 0}}; }

    unsigned elem_order(const P2Mat& m) const {
        P2Mat p = m;
        for (unsigned k = 1; k <= 2 * (q_ + 1); ++k) {
            if (p == identity()) return k;
            p = mul(p, m);
        }
        throw std::logic_error("Psl2Ctx: no period found");
    }

    static std::uint64_t order_formula(unsigned q) {
        return std::uint64_t(q) * (std::uint64_t(q) * q - 1);
    }

private:
    Field F_;
    unsigned q_;
    std::vector<P2Mat> elems_;
};

} // namespace ubl

#endif // UBL_PSL2_HPP
