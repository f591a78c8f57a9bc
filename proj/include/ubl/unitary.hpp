#ifndef UBL_UNITARY_HPP
#define UBL_UNITARY_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ubl/gf2m.hpp"

namespace ubl {

/// Projective unitary 3x3 matrix over GF(q^2), row-major entries, always kept
/// as the canonical representative (lexicographically least among the d unit
/// scalar multiples). Entries fit in a byte for every supported q.
struct Mat {
    std::array<std::uint8_t, 9> e{};

    friend bool operator==(const Mat& a, const Mat& b) { return a.e == b.e; }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }
    friend bool operator<(const Mat& a, const Mat& b) { return a.e < b.e; }
};

struct MatHash {
    std::size_t operator()(const Mat& m) const {
        std::uint64_t lo = 0;
        for (int i = 0; i < 8; ++i) lo |= std::uint64_t(m.e[i]) << (8 * i);
        std::uint64_t x = lo ^ (std::uint64_t(m.e[8]) * 0x9E3779B97F4A7C15ull);
        x ^= x >> 30; x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 27; x *= 0x94D049BB133111EBull;
        x ^= x >> 31;
        return static_cast<std::size_t>(x);
    }
};

/// Coordinates of the rank-1 Bruhat normal form. Triangular elements are
/// u(a1,b1)*h(lambda); the rest are h(lambda)*u(a1,b1)*v*u(a2,b2). The torus
/// coordinate is an index into the canonical transversal {g^i : i < |H|}.
struct Bruhat {
    bool borel = true;
    std::uint32_t hidx = 0;
    felt a1 = 0, b1 = 0;
    felt a2 = 0, b2 = 0;
};

/// Everything attached to one q = 2^n: the fields Q < P = GF(q^2), the
/// hermitian form (anti-diagonal), the named subgroups of the Borel subgroup
/// B = U x| H, the Weyl involution v and the structural involution u0 in Z.
///
/// Model: u(a,b) = [[1,a,b],[0,1,s(a)],[0,0,1]] with trace(b) = norm(a);
///        h(l)   = diag(l, l^(q-1), l^-q);  v = anti-diagonal permutation.
class UnitaryCtx {
public:
    explicit UnitaryCtx(unsigned n)
        : n_(n),
          P_((check_n(n), 2 * n)),
          Q_(n),
          qp_(Q_, P_),
          q_(1u << n) {
        d_ = (q_ + 1) % 3 == 0 ? 3 : 1;

        oU_ = std::uint64_t(q_) * q_ * q_;
        oZ_ = q_;
        oH_ = (std::uint64_t(q_) * q_ - 1) / d_;
        oH0_ = q_ - 1;
        oH1_ = (q_ + 1) / d_;
        oB_ = oU_ * oH_;
        oG_ = oB_ * (oU_ + 1);

        // unit scalars: the d cube roots of unity that fix the form
        scalars_.push_back(1);
        if (d_ == 3) {
            felt zeta = P_.exp(P_.units() / 3);
            scalars_.push_back(zeta);
            scalars_.push_back(P_.mul(zeta, zeta));
        }

        // kernel of trace = fixed field of sigma, sorted ascending
        kerT_idx_.assign(P_.order(), -1);
        for (std::uint32_t b = 0; b < P_.order(); ++b)
            if (P_.sigma_fixed(static_cast<felt>(b))) kerT_.push_back(static_cast<felt>(b));
        for (std::uint32_t i = 0; i < kerT_.size(); ++i) kerT_idx_[kerT_[i]] = static_cast<int>(i);
        if (kerT_.size() != q_) throw std::logic_error("UnitaryCtx: |ker T| != q");

        // least unitriangular b per a: trace(b) = norm(a)
        b0_.assign(P_.order(), 0);
        for (std::uint32_t a = 0; a < P_.order(); ++a) {
            felt target = P_.norm(static_cast<felt>(a));
            felt b = 0;
            while (b < P_.order() && P_.trace(b) != target) ++b;
            if (b >= P_.order()) throw std::logic_error("UnitaryCtx: trace not surjective");
            b0_[a] = b;
        }

        id_ = canon(raw_identity());
        v_ = canon(raw_v());

        // torus transversal {h(g^i)} and its index map
        Hmats_.reserve(oH_);
        for (std::uint32_t i = 0; i < oH_; ++i) {
            Mat h = h_elem(P_.exp(i));
            Hmats_.push_back(h);
            hidx_[h] = i;
        }
        if (hidx_.size() != oH_) throw std::logic_error("UnitaryCtx: torus transversal collides");

        build_named_sets();
        u0_ = solve_structural_involution();
        validate();
    }

    // --- constants -------------------------------------------------------
    unsigned n() const { return n_; }
    unsigned q() const { return q_; }
    unsigned d() const { return d_; }
    const Field& P() const { return P_; }
    const Field& Q() const { return Q_; }
    const FieldEmbed& embedQP() const { return qp_; }
    std::uint64_t order_G() const { return oG_; }
    std::uint64_t order_B() const { return oB_; }
    std::uint64_t order_U() const { return oU_; }
    std::uint64_t order_Z() const { return oZ_; }
    std::uint64_t order_H() const { return oH_; }
    std::uint64_t order_H0() const { return oH0_; }
    std::uint64_t order_H1() const { return oH1_; }

    // --- element constructors (canonical results) ------------------------
    Mat identity() const { return id_; }
    Mat v_elem() const { return v_; }
    Mat u0() const { return u0_; }

    Mat u_elem(felt a, felt b) const {
        if (P_.trace(b) != P_.norm(a))
            throw std::invalid_argument("u_elem: trace(b) != norm(a)");
        Mat m = raw_identity();
        m.e[1] = low(a);
        m.e[2] = low(b);
        m.e[5] = low(P_.sigma(a));
        return canon(m);
    }

    /// z(beta) for beta in the small field Q: the central involution layer.
    Mat z_elem(felt beta_q) const { return u_elem(0, qp_(beta_q)); }

    Mat h_elem(felt lambda) const {
        if (lambda == 0) throw std::invalid_argument("h_elem: lambda = 0");
        Mat m{};
        m.e[0] = low(lambda);
        m.e[4] = low(P_.pow(lambda, q_ - 1));
        m.e[8] = low(P_.inv(P_.pow(lambda, q_)));
        return canon(m);
    }

    // --- arithmetic -------------------------------------------------------
    Mat mul(const Mat& x, const Mat& y) const { return canon(raw_mul(x, y)); }

    Mat inv(const Mat& x) const {
        // from s(M)^T J M = J: M^-1 = J s(M)^T J, i.e. transpose of the
        // entrywise sigma image, reversed both ways
        Mat r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.e[3 * i + j] = low(P_.sigma(x.e[3 * (2 - j) + (2 - i)]));
        return canon(r);
    }

    /// x^g = g^-1 x g.
    Mat conj(const Mat& x, const Mat& g) const { return mul(mul(inv(g), x), g); }

    Mat commutator(const Mat& x, const Mat& y) const {
        return mul(mul(inv(x), inv(y)), mul(x, y));
    }

    Mat canon(Mat m) const {
        if (d_ == 1) return m;
        Mat best = m;
        for (std::size_t s = 1; s < scalars_.size(); ++s) {
            Mat c;
            for (int i = 0; i < 9; ++i) c.e[i] = low(P_.mul(scalars_[s], m.e[i]));
            if (c < best) best = c;
        }
        return best;
    }

    bool is_identity(const Mat& m) const { return m == id_; }

    felt det(const Mat& m) const {
        // char 2: determinant = permanent
        auto& e = m.e;
        felt r = 0;
        r ^= P_.mul(e[0], P_.mul(e[4], e[8]));
        r ^= P_.mul(e[0], P_.mul(e[5], e[7]));
        r ^= P_.mul(e[1], P_.mul(e[3], e[8]));
        r ^= P_.mul(e[1], P_.mul(e[5], e[6]));
        r ^= P_.mul(e[2], P_.mul(e[3], e[7]));
        r ^= P_.mul(e[2], P_.mul(e[4], e[6]));
        return r;
    }

    /// s(M)^T J M = J, entrywise.
    bool is_unitary(const Mat& m) const {
        Mat s{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                s.e[3 * i + j] = low(P_.sigma(m.e[3 * j + i]));
        Mat sj{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                sj.e[3 * i + j] = s.e[3 * i + (2 - j)];
        Mat prod = raw_mul(sj, m);
        return prod.e[0] == 0 && prod.e[1] == 0 && prod.e[2] == 1 &&
               prod.e[3] == 0 && prod.e[4] == 1 && prod.e[5] == 0 &&
               prod.e[6] == 1 && prod.e[7] == 0 && prod.e[8] == 0;
    }

    bool is_group_element(const Mat& m) const { return is_unitary(m) && det(m) == 1; }

    unsigned elem_order(const Mat& m) const {
        Mat p = m;
        for (unsigned k = 1; k <= 4 * oH_ * q_ + 8; ++k) {
            if (p == id_) return k;
            p = mul(p, m);
        }
        throw std::logic_error("elem_order: no period found");
    }

    // --- membership (scalar-invariant tests) ------------------------------
    bool in_B(const Mat& m) const { return m.e[3] == 0 && m.e[6] == 0 && m.e[7] == 0; }

    bool in_U(const Mat& m) const {
        return in_B(m) && m.e[0] == m.e[4] && m.e[4] == m.e[8];
    }

    bool in_Z(const Mat& m) const { return in_U(m) && m.e[1] == 0; }

    bool in_H(const Mat& m) const {
        return in_B(m) && m.e[1] == 0 && m.e[2] == 0 && m.e[5] == 0;
    }

    bool in_H0(const Mat& m) const {
        return std::binary_search(H0_sorted_.begin(), H0_sorted_.end(), m);
    }

    bool in_H1(const Mat& m) const {
        return std::binary_search(H1_sorted_.begin(), H1_sorted_.end(), m);
    }

    // --- named subgroups ---------------------------------------------------
    const std::vector<Mat>& U_elems() const { return U_; }
    const std::vector<Mat>& Z_elems() const { return Z_; }
    const std::vector<Mat>& H_elems() const { return Hsorted_; }
    const std::vector<Mat>& H0_elems() const { return H0_sorted_; }
    const std::vector<Mat>& H1_elems() const { return H1_sorted_; }

    /// Borel subgroup as a sorted list (built on first use; |B| = q^3(q^2-1)/d).
    const std::vector<Mat>& B_elems() const {
        if (B_.empty()) {
            B_.reserve(oB_);
            for (const Mat& u : U_)
                for (const Mat& h : Hmats_) B_.push_back(mul(u, h));
            std::sort(B_.begin(), B_.end());
            if (std::adjacent_find(B_.begin(), B_.end()) != B_.end() || B_.size() != oB_)
                throw std::logic_error("UnitaryCtx: Borel enumeration collides");
        }
        return B_;
    }

    std::vector<Mat> U_gens() const { return Ugens_; }
    std::vector<Mat> Z_gens() const { return Zgens_; }
    Mat H_gen() const { return Hmats_[oH_ > 1 ? 1 : 0]; }
    Mat H0_gen() const { return h0gen_; }
    Mat H1_gen() const { return h1gen_; }
    /// Generators of the whole group: the Borel generators plus v.
    std::vector<Mat> G_gens() const {
        std::vector<Mat> g = Ugens_;
        if (oH_ > 1) g.push_back(H_gen());
        g.push_back(v_);
        return g;
    }

    // --- Bruhat normal form ------------------------------------------------
    Bruhat decompose(const Mat& m) const {
        Bruhat c;
        if (in_B(m)) {
            c.borel = true;
            c.a1 = P_.div(m.e[1], m.e[4]);
            c.b1 = P_.div(m.e[2], m.e[8]);
            c.hidx = P_.dlog(m.e[0]) % oH_;
        } else {
            if (m.e[6] == 0) throw std::invalid_argument("decompose: not a group element");
            c.borel = false;
            c.a2 = P_.div(m.e[7], m.e[6]);
            c.b2 = P_.div(m.e[8], m.e[6]);
            Mat mp = raw_mul(m, raw_u_inv(c.a2, c.b2));
            c.a1 = P_.div(mp.e[1], mp.e[2]);
            c.b1 = P_.div(mp.e[0], mp.e[2]);
            c.hidx = P_.dlog(mp.e[2]) % oH_;
        }
        return c;
    }

    Mat recompose(const Bruhat& c) const {
        Mat h = Hmats_[c.hidx];
        Mat u1 = u_elem(c.a1, c.b1);
        if (c.borel) return mul(u1, h);
        return mul(mul(mul(h, u1), v_), u_elem(c.a2, c.b2));
    }

    // --- rank / unrank -----------------------------------------------------
    // Borel elements occupy [0, |B|) ordered by (hidx, u-index); the big cell
    // fills [|B|, |G|) ordered by (hidx, u1-index, u2-index).
    std::uint64_t u_index(felt a, felt b) const {
        int k = kerT_idx_[b ^ b0_[a]];
        if (k < 0) throw std::invalid_argument("u_index: invalid unitriangular pair");
        return std::uint64_t(a) * q_ + std::uint64_t(k);
    }

    std::uint64_t rank(const Mat& m) const {
        Bruhat c = decompose(m);
        if (c.borel) return std::uint64_t(c.hidx) * oU_ + u_index(c.a1, c.b1);
        return oB_ + (std::uint64_t(c.hidx) * oU_ + u_index(c.a1, c.b1)) * oU_ +
               u_index(c.a2, c.b2);
    }

    Mat unrank(std::uint64_t i) const {
        if (i >= oG_) throw std::out_of_range("unrank: index >= |G|");
        if (i < oB_) {
            auto [a, b] = u_from_index(i % oU_);
            return mul(u_elem(a, b), Hmats_[i / oU_]);
        }
        std::uint64_t j = i - oB_;
        auto [a2, b2] = u_from_index(j % oU_);
        j /= oU_;
        auto [a1, b1] = u_from_index(j % oU_);
        Mat h = Hmats_[j / oU_];
        return mul(mul(mul(h, u_elem(a1, b1)), v_), u_elem(a2, b2));
    }

    // --- cosets of B -------------------------------------------------------
    // Right cosets Bg, q^3 + 1 of them: label 0 is B itself, label 1+k the
    // coset B*v*u where u is the k-th unitriangular element.
    std::uint32_t coset_count() const { return static_cast<std::uint32_t>(oU_ + 1); }

    std::uint32_t coset_label(const Mat& m) const {
        Bruhat c = decompose(m);
        if (c.borel) return 0;
        return 1 + static_cast<std::uint32_t>(u_index(c.a2, c.b2));
    }

    Mat coset_rep(std::uint32_t label) const {
        if (label == 0) return id_;
        auto [a, b] = u_from_index(label - 1);
        return mul(v_, u_elem(a, b));
    }

    // --- involutions -------------------------------------------------------
    std::vector<Mat> involutions_of(const std::vector<Mat>& elems) const {
        std::vector<Mat> r;
        for (const Mat& m : elems)
            if (!is_identity(m) && is_identity(mul(m, m))) r.push_back(m);
        return r;
    }

    /// All involutions of the whole group by full Bruhat enumeration (q <= 8).
    const std::vector<Mat>& involutions_G() const {
        if (invG_.empty()) {
            if (oG_ > (1ull << 24))
                throw std::domain_error("involutions_G: group too large for full scan");
            for (std::uint64_t i = 0; i < oG_; ++i) {
                Mat m = unrank(i);
                if (!is_identity(m) && is_identity(mul(m, m))) invG_.push_back(m);
            }
            std::sort(invG_.begin(), invG_.end());
        }
        return invG_;
    }

    // --- serialization -----------------------------------------------------
    std::string to_hex(const Mat& m) const {
        std::ostringstream os;
        for (int i = 0; i < 9; ++i) {
            if (i) os << ':';
            os << std::hex << unsigned(m.e[i]);
        }
        return os.str();
    }

    Mat from_hex(const std::string& s) const {
        Mat m{};
        std::istringstream is(s);
        std::string tok;
        int i = 0;
        while (std::getline(is, tok, ':')) {
            if (i >= 9) throw std::invalid_argument("from_hex: too many entries");
            unsigned long v = std::stoul(tok, nullptr, 16);
            if (v >= P_.order()) throw std::invalid_argument("from_hex: entry out of field");
            m.e[i++] = static_cast<std::uint8_t>(v);
        }
        if (i != 9) throw std::invalid_argument("from_hex: expected 9 entries");
        if (!is_group_element(m)) throw std::invalid_argument("from_hex: not unitary with det 1");
        return canon(m);
    }

    std::pair<felt, felt> u_from_index(std::uint64_t k) const {
        felt a = static_cast<felt>(k / q_);
        felt b = static_cast<felt>(b0_[a] ^ kerT_[k % q_]);
        return {a, b};
    }

    const std::vector<Mat>& torus_transversal() const { return Hmats_; }

private:
    static unsigned check_n(unsigned n) {
        if (n < 1 || n > 4)
            throw std::invalid_argument("UnitaryCtx: n must be in [1,4], got " + std::to_string(n));
        return n;
    }

    std::uint8_t low(felt x) const { return static_cast<std::uint8_t>(x); }

    Mat raw_identity() const {
        Mat m{};
        m.e[0] = m.e[4] = m.e[8] = 1;
        return m;
    }

    Mat raw_v() const {
        Mat m{};
        m.e[2] = m.e[4] = m.e[6] = 1;
        return m;
    }

    Mat raw_mul(const Mat& x, const Mat& y) const {
        Mat r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                felt s = 0;
                for (int k = 0; k < 3; ++k)
                    s ^= P_.mul(x.e[3 * i + k], y.e[3 * k + j]);
                r.e[3 * i + j] = low(s);
            }
        return r;
    }

    Mat raw_u_inv(felt a, felt b) const {
        // u(a,b)^-1 = u(a, b + norm(a))
        Mat m = raw_identity();
        m.e[1] = low(a);
        m.e[2] = low(P_.add(b, P_.norm(a)));
        m.e[5] = low(P_.sigma(a));
        return m;
    }

    void build_named_sets() {
        U_.reserve(oU_);
        for (std::uint64_t k = 0; k < oU_; ++k) {
            auto [a, b] = u_from_index(k);
            U_.push_back(u_elem(a, b));
        }
        std::sort(U_.begin(), U_.end());

        Z_.reserve(q_);
        for (std::uint32_t bq = 0; bq < q_; ++bq) Z_.push_back(z_elem(static_cast<felt>(bq)));
        std::sort(Z_.begin(), Z_.end());

        Hsorted_ = Hmats_;
        std::sort(Hsorted_.begin(), Hsorted_.end());

        for (std::uint32_t k = 0; k < oH0_; ++k)
            H0_sorted_.push_back(h_elem(qp_(Q_.exp(k))));
        std::sort(H0_sorted_.begin(), H0_sorted_.end());
        H0_sorted_.erase(std::unique(H0_sorted_.begin(), H0_sorted_.end()), H0_sorted_.end());
        if (H0_sorted_.size() != oH0_) throw std::logic_error("UnitaryCtx: |H0| mismatch");

        for (std::uint32_t k = 0; k < oH1_; ++k)
            H1_sorted_.push_back(h_elem(P_.exp(std::uint64_t(q_ - 1) * k)));
        std::sort(H1_sorted_.begin(), H1_sorted_.end());
        H1_sorted_.erase(std::unique(H1_sorted_.begin(), H1_sorted_.end()), H1_sorted_.end());
        if (H1_sorted_.size() != oH1_) throw std::logic_error("UnitaryCtx: |H1| mismatch");

        // generators: a-parts spanning P over GF(2) generate U modulo Z,
        // and the commutators fill Z; Z generated by a Q-basis layer
        for (unsigned i = 0; i < 2 * n_; ++i) {
            felt a = P_.exp(i) /* g^i, a GF(2)-basis of P */;
            Ugens_.push_back(u_elem(a, b0_[a]));
        }
        for (unsigned i = 0; i < n_; ++i) Zgens_.push_back(z_elem(Q_.exp(i)));

        h0gen_ = oH0_ > 1 ? h_elem(qp_(Q_.generator())) : id_;
        h1gen_ = oH1_ > 1 ? h_elem(P_.exp(q_ - 1)) : id_;
    }

    Mat solve_structural_involution() const {
        // the unique z in Z# with (vz)^3 = 1
        std::vector<Mat> sols;
        for (const Mat& z : Z_) {
            if (is_identity(z)) continue;
            Mat vz = mul(v_, z);
            if (is_identity(mul(mul(vz, vz), vz))) sols.push_back(z);
        }
        if (sols.size() != 1)
            throw std::logic_error("UnitaryCtx: structural involution not unique in Z, found " +
                                   std::to_string(sols.size()));
        return sols[0];
    }

    void validate() const {
        auto check = [&](const Mat& m, const char* what) {
            if (!is_group_element(m))
                throw std::logic_error(std::string("UnitaryCtx: invalid generator ") + what);
        };
        for (const Mat& m : Ugens_) check(m, "U");
        for (const Mat& m : Zgens_) check(m, "Z");
        check(v_, "v");
        check(u0_, "u0");
        check(h0gen_, "H0");
        check(h1gen_, "H1");
        if (U_.size() != oU_ || std::adjacent_find(U_.begin(), U_.end()) != U_.end())
            throw std::logic_error("UnitaryCtx: |U| mismatch");
        if (Z_.size() != oZ_ || std::adjacent_find(Z_.begin(), Z_.end()) != Z_.end())
            throw std::logic_error("UnitaryCtx: |Z| mismatch");
        if (Hmats_.size() != oH_) throw std::logic_error("UnitaryCtx: |H| mismatch");
    }

    unsigned n_;
    Field P_, Q_;
    FieldEmbed qp_;
    unsigned q_, d_;
    std::uint64_t oG_, oB_, oU_, oZ_, oH_, oH0_, oH1_;

    std::vector<felt> scalars_;
    std::vector<felt> kerT_;
    std::vector<int> kerT_idx_;
    std::vector<felt> b0_;

    Mat id_, v_, u0_, h0gen_, h1gen_;
    std::vector<Mat> Hmats_, Hsorted_, H0_sorted_, H1_sorted_, U_, Z_, Ugens_, Zgens_;
    std::unordered_map<Mat, std::uint32_t, MatHash> hidx_;
    mutable std::vector<Mat> B_;
    mutable std::vector<Mat> invG_;
};

} // namespace ubl

#endif // UBL_UNITARY_HPP
