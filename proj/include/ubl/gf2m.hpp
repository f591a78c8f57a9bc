#ifndef UBL_GF2M_HPP
#define UBL_GF2M_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ubl {

/// Field element of GF(2^m): bitmask, bit i = coefficient of x^i.
using felt = std::uint16_t;

namespace detail {

// Carry-less polynomial product over GF(2).
inline std::uint64_t clmul(std::uint32_t a, std::uint32_t b) {
    std::uint64_t r = 0;
    while (b) {
        if (b & 1u) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return r;
}

inline int poly_degree(std::uint64_t p) {
    int d = -1;
    while (p) { ++d; p >>= 1; }
    return d;
}

inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
    const int dm = poly_degree(m);
    for (int d = poly_degree(a); d >= dm; d = poly_degree(a))
        a ^= m << (d - dm);
    return a;
}

inline bool poly_irreducible(std::uint32_t p) {
    const int d = poly_degree(p);
    if (d < 1) return false;
    for (std::uint32_t f = 2; poly_degree(f) <= d / 2; ++f)
        if (poly_degree(f) >= 1 && poly_mod(p, f) == 0) return false;
    return true;
}

} // namespace detail

/// Arithmetic in GF(2^m), 1 <= m <= 16, with a fixed modulus per degree so that
/// every run constructs the identical field. The modulus table holds primitive
/// polynomials, hence x itself generates the multiplicative group; both facts
/// are re-verified at construction time.
class Field {
public:
    explicit Field(unsigned m) : m_(m) {
        static constexpr std::uint32_t kModulus[17] = {
            0,
            0x2,     // x            (GF(2) = GF(2)[x]/(x))
            0x7,     // x^2+x+1
            0xB,     // x^3+x+1
            0x13,    // x^4+x+1
            0x25,    // x^5+x^2+1
            0x43,    // x^6+x+1
            0x89,    // x^7+x^3+1
            0x11D,   // x^8+x^4+x^3+x^2+1
            0x211,   // x^9+x^4+1
            0x409,   // x^10+x^3+1
            0x805,   // x^11+x^2+1
            0x1053,  // x^12+x^6+x^4+x+1
            0x201B,  // x^13+x^4+x^3+x+1
            0x4443,  // x^14+x^10+x^6+x+1
            0x8003,  // x^15+x+1
            0x1100B, // x^16+x^12+x^3+x+1
        };
        if (m < 1 || m > 16)
            throw std::invalid_argument("Field: degree must be in [1,16], got " + std::to_string(m));
        mod_ = kModulus[m];
        size_ = 1u << m;
        units_ = size_ - 1;
        gen_ = (m == 1) ? 1 : 2;

        if (m > 1 && !detail::poly_irreducible(mod_))
            throw std::logic_error("Field: modulus table entry is reducible");

        // exp/log tables; filling all nonzero masks proves gen_ has order 2^m-1.
        exp_.assign(2 * units_, 0);
        log_.assign(size_, 0);
        std::vector<bool> seen(size_, false);
        felt b = 1;
        for (std::uint32_t i = 0; i < units_; ++i) {
            if (seen[b]) throw std::logic_error("Field: generator order < 2^m-1");
            seen[b] = true;
            exp_[i] = b;
            exp_[i + units_] = b;
            log_[b] = i;
            b = mul_x(b);
        }
        if (b != 1) throw std::logic_error("Field: generator cycle broken");

        if (m <= 8) {
            multab_.assign(size_ * size_, 0);
            for (std::uint32_t x = 1; x < size_; ++x)
                for (std::uint32_t y = 1; y < size_; ++y)
                    multab_[(x << m_) | y] =
                        static_cast<std::uint8_t>(exp_[log_[x] + log_[y]]);
        }
    }

    unsigned degree() const { return m_; }
    std::uint32_t modulus() const { return mod_; }
    felt generator() const { return gen_; }
    std::uint32_t order() const { return size_; }   // 2^m
    std::uint32_t units() const { return units_; }  // 2^m - 1

    static felt add(felt a, felt b) { return a ^ b; }

    felt mul(felt a, felt b) const {
        if (!multab_.empty()) return multab_[(std::uint32_t(a) << m_) | b];
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }

    felt inv(felt a) const {
        if (a == 0) throw std::domain_error("Field: inverse of zero");
        return exp_[units_ - log_[a]];
    }

    felt div(felt a, felt b) const { return mul(a, inv(b)); }

    felt pow(felt a, std::uint64_t e) const {
        if (a == 0) return e == 0 ? felt{1} : felt{0};
        return exp_[(std::uint64_t(log_[a]) * (e % units_)) % units_];
    }

    /// Frobenius x -> x^2.
    felt frob(felt a) const { return mul(a, a); }

    unsigned dlog(felt a) const {
        if (a == 0) throw std::domain_error("Field: dlog of zero");
        return log_[a];
    }

    felt exp(std::uint64_t i) const { return exp_[i % units_]; }

    // --- quadratic-extension structure (even degree only) ---------------
    // With m = 2n the map below is the order-2 automorphism x -> x^(2^n)
    // whose fixed field is the subfield of 2^n elements.

    unsigned half_degree() const {
        if (m_ % 2 != 0) throw std::domain_error("Field: odd degree has no sigma");
        return m_ / 2;
    }

    felt sigma(felt a) const {
        unsigned n = half_degree();
        felt r = a;
        for (unsigned i = 0; i < n; ++i) r = frob(r);
        return r;
    }

    bool sigma_fixed(felt a) const { return sigma(a) == a; }

    /// a^(2^n + 1); lands in the fixed field of sigma, multiplicative.
    felt norm(felt a) const { return mul(a, sigma(a)); }

    /// a + a^(2^n); lands in the fixed field of sigma, additive.
    felt trace(felt a) const { return add(a, sigma(a)); }

private:
    felt mul_x(felt a) const {
        std::uint32_t r = std::uint32_t(a) << 1;
        if (r & size_) r ^= mod_;
        return static_cast<felt>(r);
    }

    unsigned m_;
    std::uint32_t mod_, size_, units_;
    felt gen_;
    std::vector<felt> exp_, log_;
    std::vector<std::uint8_t> multab_;
};

/// Subfield embedding GF(2^a) -> GF(2^b), a | b. The source generator is sent
/// to the least power of the destination generator that is a root of the
/// source modulus; this is a ring homomorphism and deterministic.
class FieldEmbed {
public:
    FieldEmbed(const Field& src, const Field& dst) : src_(&src), dst_(&dst) {
        if (dst.degree() % src.degree() != 0)
            throw std::invalid_argument("FieldEmbed: source degree must divide destination degree");
        const std::uint32_t step = dst.units() / src.units();
        felt root = 0;
        for (std::uint32_t j = 1; j <= src.units(); ++j) {
            felt cand = dst.exp(std::uint64_t(step) * j);
            if (eval_src_modulus(cand) == 0) { root = cand; break; }
        }
        if (root == 0) throw std::logic_error("FieldEmbed: no root of source modulus found");
        map_.assign(src.order(), 0);
        for (std::uint32_t k = 0; k < src.units(); ++k)
            map_[src.exp(k)] = dst.pow(root, k);
        // additivity check makes the root choice self-validating
        for (std::uint32_t x = 0; x < src.order(); ++x)
            for (std::uint32_t y = 0; y < x; ++y)
                if (map_[x ^ y] != (map_[x] ^ map_[y]))
                    throw std::logic_error("FieldEmbed: map is not additive");
    }

    felt operator()(felt a) const { return map_[a]; }
    const Field& src() const { return *src_; }
    const Field& dst() const { return *dst_; }

private:
    felt eval_src_modulus(felt t) const {
        // modulus has degree m = src.degree(); evaluate sum of t^i over set bits
        felt acc = 0, p = 1;
        std::uint32_t mod = src_->modulus();
        for (unsigned i = 0; mod; ++i, mod >>= 1) {
            if (mod & 1u) acc ^= p;
            p = dst_->mul(p, t);
        }
        return acc;
    }

    const Field* src_;
    const Field* dst_;
    std::vector<felt> map_;
};

} // namespace ubl

#endif // UBL_GF2M_HPP
