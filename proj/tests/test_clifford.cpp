#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "curvkit/clifford.hpp"

using namespace curvkit;
using namespace curvkit::clifford;

namespace {

Multivector e(int dim, int j) { return Multivector::generator(dim, j); }
Multivector one(int dim) { return Multivector::scalar(dim, 1.0); }

Multivector random_mv(int dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> c(std::size_t{1} << dim);
    for (auto& x : c) x = u(rng);
    return Multivector(dim, c);
}

}  // namespace

TEST(BladeProduct, OrderedPairKeepsSign) {
    auto [blade, sign] = blade_product(BasisBlade::generator(1), BasisBlade::generator(2), 2);
    EXPECT_EQ(blade, BasisBlade::from_indices({1, 2}));
    EXPECT_EQ(sign, 1);
}

TEST(BladeProduct, SwappedPairAnticommutes) {
    auto [blade, sign] = blade_product(BasisBlade::generator(2), BasisBlade::generator(1), 2);
    EXPECT_EQ(blade, BasisBlade::from_indices({1, 2}));
    EXPECT_EQ(sign, -1);
}

TEST(BladeProduct, GeneratorSquaresToMinusOne) {
    auto [blade, sign] = blade_product(BasisBlade::generator(1), BasisBlade::generator(1), 1);
    EXPECT_EQ(blade, BasisBlade{});
    EXPECT_EQ(sign, -1);
}

TEST(BladeProduct, IndexBeyondDimensionIsDomainError) {
    EXPECT_THROW(blade_product(BasisBlade::generator(3), BasisBlade::generator(1), 2), DomainError);
    EXPECT_THROW(BasisBlade::from_indices({2, 1}), DomainError);
}

TEST(BladeProduct, Names) {
    EXPECT_EQ(BasisBlade{}.name(), "1");
    EXPECT_EQ(BasisBlade::from_indices({1, 3}).name(), "e1e3");
    EXPECT_EQ(BasisBlade::from_indices({1, 3}).grade(), 2);
}

TEST(Multivector, Examples) {
    EXPECT_EQ((one(1) + e(1, 1)) * (one(1) - e(1, 1)), Multivector::scalar(1, 2.0));
    const auto e12 = Multivector::blade(2, BasisBlade::from_indices({1, 2}));
    EXPECT_EQ(e12 * e12, Multivector::scalar(2, -1.0));
}

TEST(Multivector, MismatchedDimensionsThrow) {
    EXPECT_THROW(e(2, 1) * e(3, 1), DomainError);
    EXPECT_THROW(Multivector(0), DomainError);
    EXPECT_THROW(Multivector(kMaxDim + 1), DomainError);
    EXPECT_THROW(Multivector(2, {1.0, 2.0}), DomainError);
}

TEST(Multivector, RelationsHoldExactlyUpToDimFive) {
    for (int n = 1; n <= 5; ++n)
        for (int j = 1; j <= n; ++j) {
            EXPECT_EQ(e(n, j) * e(n, j), Multivector::scalar(n, -1.0));
            for (int k = 1; k <= n; ++k) {
                if (j == k) continue;
                EXPECT_EQ(e(n, j) * e(n, k), -(e(n, k) * e(n, j)));
            }
        }
}

TEST(Multivector, AssociativityAndDistributivityOnRandomTriples) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dim(1, 5);
    double assoc = 0, dist = 0;
    for (int t = 0; t < 1000; ++t) {
        const int n = dim(rng);
        auto a = random_mv(n, rng), b = random_mv(n, rng), c = random_mv(n, rng);
        assoc = std::max(assoc, ((a * b) * c).max_abs_diff(a * (b * c)));
        dist = std::max(dist, ((a + b) * c).max_abs_diff(a * c + b * c));
    }
    EXPECT_LE(assoc, 1e-12);
    EXPECT_LE(dist, 1e-12);
}

TEST(Multivector, DimOneIsTheComplexNumbers) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int t = 0; t < 100; ++t) {
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        const auto p = Multivector(1, {a, b}) * Multivector(1, {c, d});
        EXPECT_EQ(p.coeffs()[0], a * c - b * d);
        EXPECT_EQ(p.coeffs()[1], a * d + b * c);
    }
}

TEST(Multivector, DimTwoIsTheQuaternions) {
    const auto i = e(2, 1), j = e(2, 2), k = Multivector::blade(2, BasisBlade::from_indices({1, 2}));
    const auto minus_one = Multivector::scalar(2, -1.0);
    EXPECT_EQ(i * i, minus_one);
    EXPECT_EQ(j * j, minus_one);
    EXPECT_EQ(k * k, minus_one);
    EXPECT_EQ(i * j * k, minus_one);
    EXPECT_EQ(i * j, k);
    EXPECT_EQ(j * k, i);
    EXPECT_EQ(k * i, j);
    EXPECT_EQ(j * i, -k);
}

TEST(Multivector, GradePartsAndToString) {
    auto m = Multivector(2, {1.0, 2.0, 0.0, -3.0});
    EXPECT_EQ(m.grade_part(1), Multivector(2, {0.0, 2.0, 0.0, 0.0}));
    EXPECT_EQ(m.to_string(), "1 + 2e1 + -3e1e2");
    EXPECT_EQ(Multivector(3).to_string(), "0");
}

TEST(VectorSquare, Examples) {
    EXPECT_EQ(vector_square(CliffordVector({1.0})), -1.0);
    EXPECT_EQ(vector_square(CliffordVector({3.0, 4.0})), -25.0);
    EXPECT_EQ(vector_square(CliffordVector::zero(3)), 0.0);
}

TEST(VectorSquare, AgreesWithGeometricProduct) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + t % 5;
        std::vector<double> c(n);
        for (auto& x : c) x = u(rng);
        const CliffordVector v(c);
        const auto sq = v.to_multivector() * v.to_multivector();
        EXPECT_LE(sq.non_scalar_magnitude(), 1e-12);
        EXPECT_NEAR(sq.scalar_part(), vector_square(v), 1e-12);
    }
}

TEST(InvertVector, Examples) {
    EXPECT_EQ(invert_vector(CliffordVector({1.0})), CliffordVector({-1.0}));

    const CliffordVector v({3.0, 4.0});
    const auto inv = invert_vector(v);
    EXPECT_DOUBLE_EQ(inv.component(1), -3.0 / 25.0);
    EXPECT_DOUBLE_EQ(inv.component(2), -4.0 / 25.0);
    // (3e1 + 4e2)(-3e1 - 4e2)/25 = (9 + 16)/25 by hand
    EXPECT_LE((v.to_multivector() * inv.to_multivector()).max_abs_diff(Multivector::scalar(2, 1.0)), 1e-12);

    EXPECT_THROW(invert_vector(CliffordVector::zero(3)), NotInvertibleError);
}

TEST(Conjugate, Examples) {
    const Paravector p(2.0, CliffordVector({1.0}));
    EXPECT_EQ(conjugate(p), Paravector(2.0, CliffordVector({-1.0})));
    EXPECT_EQ(conjugate(Paravector::real(2, 5.0)), Paravector::real(2, 5.0));
    EXPECT_EQ(p.to_multivector() * conjugate(p).to_multivector(), Multivector::scalar(1, 5.0));
}

TEST(Conjugate, InvolutionAndNormProperty) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + t % 5;
        std::vector<double> c(n);
        for (auto& x : c) x = u(rng);
        const Paravector p(u(rng), CliffordVector(c));
        EXPECT_EQ(conjugate(conjugate(p)), p);
        const auto norm2 = Multivector::scalar(n, p.squared_norm());
        EXPECT_LE((p.to_multivector() * conjugate(p).to_multivector()).max_abs_diff(norm2), 1e-12);
        EXPECT_LE((conjugate(p).to_multivector() * p.to_multivector()).max_abs_diff(norm2), 1e-12);
    }
}

TEST(InvertParavector, Examples) {
    EXPECT_EQ(invert_paravector(Paravector::real(1, 1.0)), Paravector::real(1, 1.0));

    const Paravector p(2.0, CliffordVector({1.0}));
    const auto inv = invert_paravector(p);
    EXPECT_DOUBLE_EQ(inv.scalar(), 2.0 / 5.0);
    EXPECT_DOUBLE_EQ(inv.vector_part().component(1), -1.0 / 5.0);
    EXPECT_LE((p.to_multivector() * inv.to_multivector()).max_abs_diff(Multivector::scalar(1, 1.0)), 1e-12);

    const Paravector e2(0.0, CliffordVector({0.0, 1.0}));
    EXPECT_EQ(invert_paravector(e2).to_multivector(), -e(2, 2));

    EXPECT_THROW(invert_paravector(Paravector::real(3, 0.0)), NotInvertibleError);
}
