#include "moduli/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace moduli::rng {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

std::uint64_t Stream::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double Stream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::next_gauss() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log is finite
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return r * std::cos(kTwoPi * u2);
}

cx Stream::next_cgauss() {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_unit();
    const double r = std::sqrt(-std::log(u1));  // = sqrt(-2 ln u1) / sqrt(2)
    return cx(r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2));
}

Stream Stream::child(std::uint64_t id) const {
    return Stream(mix64(key_ ^ (id + kGolden)));
}

Stream make_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return Stream(mix64(mix64(seed) ^ (stream_id + kGolden)));
}

const char* ensemble_name(Ensemble e) {
    switch (e) {
        case Ensemble::Ginibre: return "ginibre";
        case Ensemble::Hermitian: return "hermitian";
        case Ensemble::Psd: return "psd";
        case Ensemble::Diagonal: return "diagonal";
    }
    return "ginibre";
}

Ensemble parse_ensemble(const std::string& s) {
    if (s == "ginibre") return Ensemble::Ginibre;
    if (s == "hermitian") return Ensemble::Hermitian;
    if (s == "psd") return Ensemble::Psd;
    if (s == "diagonal") return Ensemble::Diagonal;
    throw std::invalid_argument("parameter error: unknown ensemble '" + s + "'");
}

CMat sample_matrix(Stream& s, int rows, int cols, Ensemble e) {
    switch (e) {
        case Ensemble::Ginibre: {
            CMat g(rows, cols);
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) g(i, j) = s.next_cgauss();
            return g;
        }
        case Ensemble::Hermitian: {
            if (rows != cols)
                throw std::invalid_argument("dimension error: Hermitian sample must be square");
            CMat g = sample_matrix(s, rows, cols, Ensemble::Ginibre);
            return hermitize(g);
        }
        case Ensemble::Psd: {
            if (rows != cols)
                throw std::invalid_argument("dimension error: psd sample must be square");
            CMat g = sample_matrix(s, rows, cols, Ensemble::Ginibre);
            return hermitize(g.adjoint() * g);
        }
        case Ensemble::Diagonal: {
            CMat d(rows, cols);
            const int k = std::min(rows, cols);
            for (int i = 0; i < k; ++i) d(i, i) = s.next_gauss();
            return d;
        }
    }
    throw std::invalid_argument("parameter error: unknown ensemble");
}

TupleSample make_tuple_sample(std::uint64_t seed, std::uint64_t trial, int n, int count,
                              Ensemble e) {
    TupleSample t;
    t.seed = seed;
    t.trial = trial;
    t.ensemble = e;
    Stream base = make_stream(seed, trial);
    t.matrices.reserve(static_cast<size_t>(count));
    for (int m = 0; m < count; ++m) {
        Stream ms = base.child(static_cast<std::uint64_t>(m));
        t.matrices.push_back(sample_matrix(ms, n, n, e));
    }
    return t;
}

}  // namespace moduli::rng
