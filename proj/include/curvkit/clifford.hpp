#pragma once

// Arithmetic in the Clifford algebra C(n): generators e_1..e_n with
// e_j e_k = -e_k e_j (j != k) and e_j^2 = -1.

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "curvkit/errors.hpp"

namespace curvkit::clifford {

/// Largest supported number of generators (dense storage of 2^n coefficients).
inline constexpr int kMaxDim = 12;

/// Canonical basis element e_{j1} e_{j2} ... e_{jl}, j1 < ... < jl, stored as
/// a bitmask (bit j-1 set <=> e_j present). The empty mask is the identity 1.
struct BasisBlade {
    std::uint32_t mask = 0;

    constexpr BasisBlade() = default;
    constexpr explicit BasisBlade(std::uint32_t m) : mask(m) {}

    static BasisBlade generator(int j) {
        if (j < 1 || j > kMaxDim) throw DomainError("generator index out of range");
        return BasisBlade{std::uint32_t{1} << (j - 1)};
    }

    static BasisBlade from_indices(std::initializer_list<int> indices) {
        std::uint32_t m = 0;
        int prev = 0;
        for (int j : indices) {
            if (j <= prev) throw DomainError("blade indices must be strictly increasing");
            m |= generator(j).mask;
            prev = j;
        }
        return BasisBlade{m};
    }

    constexpr int grade() const { return std::popcount(mask); }
    constexpr bool fits(int dim) const { return dim >= 32 || (mask >> dim) == 0; }

    /// "1" for the identity, otherwise "e1e3"-style names.
    std::string name() const {
        if (mask == 0) return "1";
        std::string s;
        for (int j = 0; j < 32; ++j)
            if (mask & (std::uint32_t{1} << j)) s += "e" + std::to_string(j + 1);
        return s;
    }

    friend constexpr bool operator==(BasisBlade, BasisBlade) = default;
};

struct BladeProduct {
    BasisBlade blade;
    int sign;
};

namespace detail {

// Parity of the anticommutations needed to bring the concatenation a·b into
// increasing order: the number of pairs (i in a, j in b) with j < i.
constexpr int reorder_sign(std::uint32_t a, std::uint32_t b) {
    int swaps = 0;
    for (std::uint32_t x = a >> 1; x != 0; x >>= 1) swaps += std::popcount(x & b);
    return (swaps & 1) ? -1 : 1;
}

constexpr BladeProduct blade_product_unchecked(std::uint32_t a, std::uint32_t b) {
    int sign = reorder_sign(a, b);
    // each shared generator contracts with e_j^2 = -1
    if (std::popcount(a & b) & 1) sign = -sign;
    return {BasisBlade{a ^ b}, sign};
}

inline void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim)
        throw DomainError("Clifford dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                          std::to_string(dim));
}

}  // namespace detail

/// Product of two basis blades: canonical blade of the symmetric difference
/// plus the sign collected from anticommutations and contractions.
inline BladeProduct blade_product(BasisBlade a, BasisBlade b, int dim) {
    detail::check_dim(dim);
    if (!a.fits(dim) || !b.fits(dim)) throw DomainError("blade index exceeds algebra dimension");
    return detail::blade_product_unchecked(a.mask, b.mask);
}

/// Element of C(n) with a dense array of 2^n real coefficients indexed by blade mask.
class Multivector {
  public:
    explicit Multivector(int dim) : dim_(dim) {
        detail::check_dim(dim);
        coeffs_.assign(std::size_t{1} << dim, 0.0);
    }

    Multivector(int dim, std::vector<double> coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {
        detail::check_dim(dim);
        if (coeffs_.size() != (std::size_t{1} << dim))
            throw DomainError("coefficient array must have length 2^dim");
    }

    static Multivector scalar(int dim, double s) { return blade(dim, BasisBlade{}, s); }

    static Multivector blade(int dim, BasisBlade b, double coeff = 1.0) {
        Multivector m(dim);
        if (!b.fits(dim)) throw DomainError("blade index exceeds algebra dimension");
        m.coeffs_[b.mask] = coeff;
        return m;
    }

    static Multivector generator(int dim, int j) {
        if (j > dim) throw DomainError("generator index exceeds algebra dimension");
        return blade(dim, BasisBlade::generator(j));
    }

    int dim() const { return dim_; }
    std::size_t size() const { return coeffs_.size(); }
    std::span<const double> coeffs() const { return coeffs_; }

    double operator[](BasisBlade b) const {
        if (!b.fits(dim_)) throw DomainError("blade index exceeds algebra dimension");
        return coeffs_[b.mask];
    }

    double scalar_part() const { return coeffs_[0]; }

    Multivector grade_part(int k) const {
        Multivector out(dim_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (std::popcount(static_cast<std::uint32_t>(i)) == k) out.coeffs_[i] = coeffs_[i];
        return out;
    }

    /// Euclidean norm of the coefficient vector.
    double norm() const {
        double s = 0.0;
        for (double c : coeffs_) s += c * c;
        return std::sqrt(s);
    }

    /// Largest coefficient magnitude outside grade 0.
    double non_scalar_magnitude() const {
        double m = 0.0;
        for (std::size_t i = 1; i < coeffs_.size(); ++i) m = std::max(m, std::abs(coeffs_[i]));
        return m;
    }

    double max_abs_diff(const Multivector& other) const {
        require_same_dim(other);
        double m = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            m = std::max(m, std::abs(coeffs_[i] - other.coeffs_[i]));
        return m;
    }

    friend Multivector operator+(const Multivector& a, const Multivector& b) {
        a.require_same_dim(b);
        Multivector out = a;
        for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] += b.coeffs_[i];
        return out;
    }

    friend Multivector operator-(const Multivector& a, const Multivector& b) {
        a.require_same_dim(b);
        Multivector out = a;
        for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] -= b.coeffs_[i];
        return out;
    }

    friend Multivector operator-(const Multivector& a) { return a * -1.0; }

    friend Multivector operator*(const Multivector& a, double s) {
        Multivector out = a;
        for (double& c : out.coeffs_) c *= s;
        return out;
    }
    friend Multivector operator*(double s, const Multivector& a) { return a * s; }
    friend Multivector operator/(const Multivector& a, double s) { return a * (1.0 / s); }

    /// Geometric product: bilinear extension of blade_product.
    friend Multivector operator*(const Multivector& a, const Multivector& b) {
        a.require_same_dim(b);
        Multivector out(a.dim_);
        const std::size_t n = a.coeffs_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double ai = a.coeffs_[i];
            if (ai == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                const double bj = b.coeffs_[j];
                if (bj == 0.0) continue;
                auto [blade, sign] = detail::blade_product_unchecked(static_cast<std::uint32_t>(i),
                                                                     static_cast<std::uint32_t>(j));
                out.coeffs_[blade.mask] += sign * ai * bj;
            }
        }
        return out;
    }

    friend bool operator==(const Multivector&, const Multivector&) = default;

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0.0) continue;
            if (!first) os << " + ";
            os << coeffs_[i];
            if (i != 0) os << BasisBlade{static_cast<std::uint32_t>(i)}.name();
            first = false;
        }
        return first ? "0" : os.str();
    }

  private:
    void require_same_dim(const Multivector& other) const {
        if (dim_ != other.dim_) throw DomainError("multivector dimensions differ");
    }

    int dim_;
    std::vector<double> coeffs_;
};

/// mv_multiply: same as operator*, spelled out for call sites that read better as a function.
inline Multivector multiply(const Multivector& a, const Multivector& b) { return a * b; }

/// beta = sum_j beta_j e_j.
class CliffordVector {
  public:
    explicit CliffordVector(std::vector<double> components) : comps_(std::move(components)) {
        detail::check_dim(static_cast<int>(comps_.size()));
    }
    static CliffordVector zero(int dim) { return CliffordVector(std::vector<double>(dim, 0.0)); }

    int dim() const { return static_cast<int>(comps_.size()); }
    std::span<const double> components() const { return comps_; }
    /// 1-based, matching e_j.
    double component(int j) const { return comps_.at(j - 1); }

    double squared_norm() const {
        double s = 0.0;
        for (double c : comps_) s += c * c;
        return s;
    }
    double norm() const { return std::sqrt(squared_norm()); }
    bool is_zero() const { return squared_norm() == 0.0; }

    Multivector to_multivector() const {
        std::vector<double> c(std::size_t{1} << dim(), 0.0);
        for (int j = 0; j < dim(); ++j) c[std::size_t{1} << j] = comps_[j];
        return Multivector(dim(), std::move(c));
    }

    friend CliffordVector operator*(const CliffordVector& v, double s) {
        CliffordVector out = v;
        for (double& c : out.comps_) c *= s;
        return out;
    }
    friend CliffordVector operator*(double s, const CliffordVector& v) { return v * s; }
    friend CliffordVector operator+(const CliffordVector& a, const CliffordVector& b) {
        if (a.dim() != b.dim()) throw DomainError("vector dimensions differ");
        CliffordVector out = a;
        for (int j = 0; j < a.dim(); ++j) out.comps_[j] += b.comps_[j];
        return out;
    }
    friend CliffordVector operator-(const CliffordVector& a, const CliffordVector& b) { return a + b * -1.0; }
    friend bool operator==(const CliffordVector&, const CliffordVector&) = default;

  private:
    std::vector<double> comps_;
};

/// beta = beta_0 + sum_j beta_j e_j.
class Paravector {
  public:
    Paravector(double scalar, CliffordVector vec) : scalar_(scalar), vec_(std::move(vec)) {}
    static Paravector real(int dim, double s) { return Paravector(s, CliffordVector::zero(dim)); }

    int dim() const { return vec_.dim(); }
    double scalar() const { return scalar_; }
    const CliffordVector& vector_part() const { return vec_; }

    /// sum_{j=0..n} beta_j^2
    double squared_norm() const { return scalar_ * scalar_ + vec_.squared_norm(); }

    Multivector to_multivector() const { return vec_.to_multivector() + Multivector::scalar(dim(), scalar_); }

    friend Paravector operator*(const Paravector& p, double s) { return Paravector(p.scalar_ * s, p.vec_ * s); }
    friend bool operator==(const Paravector&, const Paravector&) = default;

  private:
    double scalar_;
    CliffordVector vec_;
};

/// beta^2 for a grade-1 element, which is always the real number -sum beta_j^2.
inline double vector_square(const CliffordVector& beta) { return -beta.squared_norm(); }

/// -(sum beta_j^2)^{-1} beta; nonzero vectors are always invertible.
inline CliffordVector invert_vector(const CliffordVector& beta) {
    const double s = beta.squared_norm();
    if (s == 0.0) throw NotInvertibleError("zero vector has no inverse");
    return beta * (-1.0 / s);
}

/// beta* = beta_0 - sum beta_j e_j.
inline Paravector conjugate(const Paravector& beta) {
    return Paravector(beta.scalar(), beta.vector_part() * -1.0);
}

/// (sum_{j=0..n} beta_j^2)^{-1} beta*.
inline Paravector invert_paravector(const Paravector& beta) {
    const double s = beta.squared_norm();
    if (s == 0.0) throw NotInvertibleError("zero paravector has no inverse");
    return conjugate(beta) * (1.0 / s);
}

}  // namespace curvkit::clifford
