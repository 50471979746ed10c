#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "moduli/cmat.hpp"
#include "moduli/counterex.hpp"
#include "moduli/rng.hpp"
#include "moduli/spectral.hpp"

using namespace moduli;

namespace {

CMat random_hermitian(std::uint64_t seed, int n) {
    rng::Stream s = rng::make_stream(seed, 0);
    return rng::sample_matrix(s, n, n, rng::Ensemble::Hermitian);
}

CMat random_ginibre(std::uint64_t seed, int rows, int cols) {
    rng::Stream s = rng::make_stream(seed, 1);
    return rng::sample_matrix(s, rows, cols, rng::Ensemble::Ginibre);
}

CMat reconstruct_eig(const SpectralData& eg) {
    const int n = eg.left.rows();
    CMat d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = eg.values[static_cast<size_t>(i)];
    return eg.left * d * eg.left.adjoint();
}

CMat reconstruct_svd(const CMat& x, const SpectralData& sv) {
    const int k = static_cast<int>(sv.values.size());
    CMat d(k, k);
    for (int i = 0; i < k; ++i) d(i, i) = sv.values[static_cast<size_t>(i)];
    (void)x;
    return sv.left * d * sv.right.adjoint();
}

// scalar l_p oracle for diagonal matrices
double lp_of(const std::vector<double>& v, double p) {
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x), p);
    return std::pow(s, 1.0 / p);
}

}  // namespace

TEST_CASE("herm_eig: identity") {
    SpectralData eg = herm_eig(CMat::identity(3));
    for (double v : eg.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_abs(eg.left * eg.left.adjoint() - CMat::identity(3)) <= 1e-12);
}

TEST_CASE("herm_eig: sum of the two projections attached to a rotation column") {
    // |Z| and |Z*| of the rotation column are projections; their sum has
    // eigenvalues 1 +- cos(theta). At theta = pi/3 that is 3/2 and 1/2.
    const double theta = M_PI / 3.0;
    const CMat z = counterex::rotation_column(theta);
    const CMat p = abs_square(z);             // = diag(1, 0)
    const CMat q = abs_square(z.adjoint());   // rank-one projection
    SpectralData eg = herm_eig(hermitize(p + q));
    REQUIRE(eg.values.size() == 2);
    CHECK(eg.values[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(eg.values[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("herm_eig: random Hermitian reconstruction residual") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const CMat h = random_hermitian(seed, 5);
        SpectralData eg = herm_eig(h);
        CHECK(max_abs(h - reconstruct_eig(eg)) <= 1e-12 * std::max(1.0, max_abs(h)));
        CHECK(max_abs(eg.left.adjoint() * eg.left - CMat::identity(5)) <= 1e-12);
        for (size_t i = 1; i < eg.values.size(); ++i) CHECK(eg.values[i - 1] >= eg.values[i]);
    }
}

TEST_CASE("herm_eig: determinism and phase convention") {
    const CMat h = random_hermitian(99, 4);
    SpectralData a = herm_eig(h);
    SpectralData b = herm_eig(h);
    CHECK(max_abs(a.left - b.left) == 0.0);
    for (size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    // the largest-modulus entry of each column is real positive
    for (int c = 0; c < 4; ++c) {
        int best = 0;
        for (int r = 1; r < 4; ++r)
            if (std::abs(a.left(r, c)) > std::abs(a.left(best, c))) best = r;
        CHECK(a.left(best, c).imag() == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(a.left(best, c).real() > 0.0);
    }
}

TEST_CASE("herm_eig: errors") {
    CHECK_THROWS_AS(herm_eig(CMat(2, 3)), std::invalid_argument);
    CMat bad{{cx(0, 0), cx(1, 0)}, {cx(0, 0), cx(0, 0)}};
    CHECK_THROWS_AS(herm_eig(bad), std::invalid_argument);
}

TEST_CASE("svd: truncated shift has singular values (1, 1, 0)") {
    SpectralData sv = svd(counterex::truncated_shift3());
    REQUIRE(sv.values.size() == 3);
    CHECK(sv.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sv.values[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sv.values[2] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("svd: zero matrix") {
    SpectralData sv = svd(CMat(2, 3));
    REQUIRE(sv.values.size() == 2);
    CHECK(sv.values[0] == 0.0);
    CHECK(sv.values[1] == 0.0);
    CHECK(max_abs(sv.left.adjoint() * sv.left - CMat::identity(2)) <= 1e-12);
}

TEST_CASE("svd: values match sqrt of Gram eigenvalues") {
    const CMat x = random_ginibre(21, 4, 2);
    SpectralData sv = svd(x);
    SpectralData eg = herm_eig(abs_square(x));
    REQUIRE(sv.values.size() == 2);
    for (int i = 0; i < 2; ++i)
        CHECK(sv.values[static_cast<size_t>(i)] ==
              doctest::Approx(std::sqrt(std::max(0.0, eg.values[static_cast<size_t>(i)])))
                  .epsilon(1e-10));
}

TEST_CASE("svd: reconstruction and orthonormal factors on assorted shapes") {
    const int shapes[][2] = {{3, 3}, {5, 2}, {2, 5}, {4, 4}, {1, 1}, {6, 3}};
    for (const auto& sh : shapes) {
        const CMat x = random_ginibre(static_cast<std::uint64_t>(sh[0] * 10 + sh[1]), sh[0], sh[1]);
        SpectralData sv = svd(x);
        const int k = std::min(sh[0], sh[1]);
        CHECK(static_cast<int>(sv.values.size()) == k);
        CHECK(max_abs(x - reconstruct_svd(x, sv)) <= 1e-9 * std::max(1.0, max_abs(x)));
        CHECK(max_abs(sv.left.adjoint() * sv.left - CMat::identity(k)) <= 1e-10);
        CHECK(max_abs(sv.right.adjoint() * sv.right - CMat::identity(k)) <= 1e-10);
    }
}

TEST_CASE("svd: rank-deficient reconstruction") {
    const CMat a = random_ginibre(31, 5, 2);
    const CMat b = random_ginibre(32, 2, 4);
    const CMat x = a * b;  // rank <= 2 inside a 5x4 frame
    SpectralData sv = svd(x);
    CHECK(max_abs(x - reconstruct_svd(x, sv)) <= 1e-9 * std::max(1.0, max_abs(x)));
    CHECK(numeric_rank(sv.values, 5, 4, Tolerances{}) == 2);
}

TEST_CASE("psd_power: projections are fixed points for every exponent") {
    const CMat q = abs_square(counterex::rotation_column(0.7).adjoint());
    for (double r : {0.5, 1.0, 2.0, 3.7, 10.0})
        CHECK(max_abs(psd_power(q, r) - q) <= 1e-12);
}

TEST_CASE("psd_power: diagonal square root and product oracle") {
    CHECK(max_abs(psd_power(CMat::diag({4.0, 9.0}), 0.5) - CMat::diag({2.0, 3.0})) <= 1e-13);

    const CMat g = abs_square(random_ginibre(41, 3, 3));
    CHECK(max_abs(psd_power(g, 2.0) - g * g) <= 1e-10 * std::max(1.0, max_abs(g * g)));
    CHECK(max_abs(psd_power(g, 1.0) - g) <= 1e-12 * std::max(1.0, max_abs(g)));
}

TEST_CASE("psd_power: composition property and not-psd error") {
    const CMat g = abs_square(random_ginibre(42, 4, 4));
    for (double a : {0.5, 2.0})
        for (double b : {0.5, 2.0}) {
            const CMat lhs = psd_power(psd_power(g, a), b);
            const CMat rhs = psd_power(g, a * b);
            CHECK(max_abs(lhs - rhs) <= 1e-9 * std::max(1.0, max_abs(rhs)));
        }
    CHECK_THROWS_AS(psd_power(CMat::diag({1.0, -0.5}), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(psd_power(CMat::identity(2), 0.0), std::invalid_argument);
}

TEST_CASE("abs_modulus: truncated shift, psd fixed point, column stack") {
    CHECK(max_abs(abs_modulus(counterex::truncated_shift3()) - CMat::diag({1.0, 1.0, 0.0})) <=
          1e-13);

    const CMat h = abs_square(random_ginibre(51, 3, 3));
    CHECK(max_abs(abs_modulus(h) - h) <= 1e-10 * std::max(1.0, max_abs(h)));

    // |(Z; Z*)| = sqrt(2) |Z|_qsym
    const CMat z = random_ginibre(52, 3, 3);
    const CMat stacked = vstack(z, z.adjoint());
    CHECK(max_abs(abs_modulus(stacked) - std::sqrt(2.0) * qsym_modulus(z)) <=
          1e-10 * std::max(1.0, max_abs(z)));
}

TEST_CASE("abs_modulus squared equals the Gram matrix") {
    for (std::uint64_t seed : {61u, 62u}) {
        const CMat x = random_ginibre(seed, 4, 3);
        const CMat ax = abs_modulus(x);
        CHECK(max_abs(ax * ax - abs_square(x)) <= 1e-9 * std::max(1.0, max_abs(abs_square(x))));
    }
}

TEST_CASE("schatten_norm: homogeneity, diagonal oracle, operator norm") {
    const CMat a = random_ginibre(71, 3, 3);
    for (double p : {0.5, 1.0, 2.0, 3.0})
        CHECK(schatten_norm(2.0 * a, p) == doctest::Approx(2.0 * schatten_norm(a, p)).epsilon(1e-12));

    const std::vector<double> d = {3.0, -1.5, 0.25};
    CMat dm = CMat::diag(d);
    for (double p : {0.5, 1.0, 1.7, 2.0, 4.0})
        CHECK(schatten_norm(dm, p) == doctest::Approx(lp_of(d, p)).epsilon(1e-12));

    // arithmetic symmetric modulus of the counterexample pair: norm 3/sqrt(2)
    const CMat x{{cx(-1, 0), cx(-1, 0)}, {cx(0, 0), cx(-1, 0)}};
    const CMat y{{cx(0, 0), cx(-1, 0)}, {cx(0, 0), cx(0, 0)}};
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(schatten_norm(sym_modulus(x + y), inf) ==
          doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(schatten_norm(a, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(schatten_norm(a, -1.0), std::invalid_argument);
}

TEST_CASE("schatten 2-norm squared equals the entry sum of squares") {
    for (std::uint64_t seed : {81u, 82u, 83u}) {
        const CMat x = random_ginibre(seed, 4, 3);
        double entry_sum = 0.0;
        for (const cx& v : x.data()) entry_sum += std::norm(v);
        const double n2 = schatten_norm(x, 2.0);
        CHECK(n2 * n2 == doctest::Approx(entry_sum).epsilon(1e-10));
    }
}

TEST_CASE("singular values of a Hermitian matrix are its absolute eigenvalues") {
    const CMat h = random_hermitian(91, 5);
    SpectralData sv = svd(h);
    SpectralData eg = herm_eig(h);
    std::vector<double> abs_eigs;
    for (double v : eg.values) abs_eigs.push_back(std::abs(v));
    std::sort(abs_eigs.begin(), abs_eigs.end(), std::greater<double>());
    for (size_t i = 0; i < abs_eigs.size(); ++i)
        CHECK(sv.values[i] == doctest::Approx(abs_eigs[i]).epsilon(1e-10));
}

TEST_CASE("psd_leq: trivial, incomparable, and the 9P vs 4I obstruction") {
    const CMat g = abs_square(random_ginibre(101, 3, 3));
    CHECK(psd_leq(CMat(3, 3), g).holds);

    PsdVerdict v = psd_leq(CMat::diag({1.0, 0.0}), CMat::diag({0.0, 1.0}));
    CHECK_FALSE(v.holds);
    CHECK(v.margin == doctest::Approx(-1.0).epsilon(1e-12));

    // a scaled rank-one projection never sits below 4I
    CMat p(2, 2);
    p(0, 0) = 1.0;
    PsdVerdict w = psd_leq(9.0 * p, 4.0 * CMat::identity(2));
    CHECK_FALSE(w.holds);
    CHECK(w.margin == doctest::Approx(-5.0).epsilon(1e-12));
}

TEST_CASE("psd_leq: reflexive and antisymmetric within tolerance") {
    const CMat a = abs_square(random_ginibre(111, 3, 3));
    CHECK(psd_leq(a, a).holds);
    CHECK(std::abs(psd_leq(a, a).margin) <= 1e-12 * std::max(1.0, max_abs(a)));

    const CMat bump = abs_square(random_ginibre(112, 3, 3));
    const CMat b = a + 1e-13 * bump;
    CHECK(psd_leq(a, b).holds);
    CHECK(psd_leq(b, a).holds);  // within slack both ways => equal up to tolerance
    CHECK(max_abs(a - b) <= 1e-9);

    const CMat c = a + bump;
    CHECK(psd_leq(a, c).holds);
    CHECK_FALSE(psd_leq(c, a).holds);

    CHECK_THROWS_AS(psd_leq(CMat::identity(2), CMat::identity(3)), std::invalid_argument);
}

TEST_CASE("block ops: direct sum merges singular values") {
    const CMat a = random_ginibre(121, 2, 2);
    const CMat b = random_ginibre(122, 3, 3);
    SpectralData sa = svd(a);
    SpectralData sb = svd(b);
    std::vector<double> merged = sa.values;
    merged.insert(merged.end(), sb.values.begin(), sb.values.end());
    std::sort(merged.begin(), merged.end(), std::greater<double>());
    SpectralData sd = svd(direct_sum({a, b}));
    REQUIRE(sd.values.size() == merged.size());
    for (size_t i = 0; i < merged.size(); ++i)
        CHECK(sd.values[i] == doctest::Approx(merged[i]).epsilon(1e-10));
}

TEST_CASE("block ops: four-point Fourier kron identity is unitary") {
    CMat f4(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double ang = 2.0 * M_PI * i * j / 4.0;
            f4(i, j) = 0.5 * cx(std::cos(ang), std::sin(ang));
        }
    const CMat u = kron(f4, CMat::identity(2));
    CHECK(max_abs(u.adjoint() * u - CMat::identity(8)) <= 1e-14);
}

TEST_CASE("block ops: compose/extract round trip and kron product rule") {
    const CMat g00 = random_ginibre(131, 2, 2), g01 = random_ginibre(132, 2, 2);
    const CMat g10 = random_ginibre(133, 2, 2), g11 = random_ginibre(134, 2, 2);
    const CMat big = block_compose({{g00, g01}, {g10, g11}});
    CHECK(max_abs(block_extract(big, 0, 1, 2) - g01) == 0.0);
    CHECK(max_abs(block_extract(big, 1, 0, 2) - g10) == 0.0);

    const CMat a = random_ginibre(141, 2, 3), b = random_ginibre(142, 2, 2);
    const CMat c = random_ginibre(143, 3, 2), d = random_ginibre(144, 2, 2);
    CHECK(max_abs(kron(a, b) * kron(c, d) - kron(a * c, b * d)) <=
          1e-12 * std::max(1.0, max_abs(kron(a * c, b * d))));

    CHECK_THROWS_AS(block_compose({{g00, random_ginibre(135, 3, 2)}}), std::invalid_argument);
}

TEST_CASE("moduli helpers: Cartesian parts and symmetric moduli") {
    const CMat z = random_ginibre(151, 3, 3);
    CHECK(max_abs(re_part(z) + cx(0.0, 1.0) * im_part(z) - z) <= 1e-14 * std::max(1.0, max_abs(z)));
    CHECK(herm_defect(re_part(z)) <= 1e-15);
    CHECK(herm_defect(im_part(z)) <= 1e-15);

    // |Re Z|^2 + |Im Z|^2 = (|Z|^2 + |Z*|^2) / 2, so the qsym modulus squares back
    const CMat lhs = abs_square(re_part(z)) + abs_square(im_part(z));
    const CMat q = qsym_modulus(z);
    CHECK(max_abs(q * q - lhs) <= 1e-9 * std::max(1.0, max_abs(lhs)));
}
