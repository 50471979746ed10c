#pragma once

#include <cstdint>
#include <vector>

#include "moduli/cmat.hpp"

namespace moduli::rng {

/// SplitMix64 finalizer (Steele/Lea/Flood mixing constants).
std::uint64_t mix64(std::uint64_t z);

/// Counter-based stream: word k is the SplitMix64 output sequence seeded at
/// `key`, i.e. word(k) = mix64(key + (k+1) * 0x9E3779B97F4A7C15). Streams for
/// distinct (seed, id) pairs are derived by key = mix64(mix64(seed) ^ (id +
/// 0x9E3779B97F4A7C15)), so trials can be generated independently and in any
/// order (parallel sweeps stay deterministic).
class Stream {
public:
    explicit Stream(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64();
    /// uniform in [0, 1), 53-bit resolution
    double next_unit();
    /// standard normal via Box-Muller (consumes two words per pair, caches one)
    double next_gauss();
    /// standard complex Gaussian, E|z|^2 = 1 (real/imag parts N(0, 1/2))
    cx next_cgauss();
    /// derive an independent child stream, deterministic in (this key, id)
    Stream child(std::uint64_t id) const;

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

Stream make_stream(std::uint64_t seed, std::uint64_t stream_id);

enum class Ensemble { Ginibre, Hermitian, Psd, Diagonal };

const char* ensemble_name(Ensemble e);
Ensemble parse_ensemble(const std::string& s);

/// Draw a matrix from the ensemble. Entry order is row-major; Hermitian and
/// Psd are derived from a full Ginibre draw ((G+G*)/2 and G*G respectively);
/// Diagonal uses real Gaussians on the diagonal.
CMat sample_matrix(Stream& s, int rows, int cols, Ensemble e);

struct TupleSample {
    std::vector<CMat> matrices;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    Ensemble ensemble = Ensemble::Ginibre;
};

/// Tuple of `count` square n x n matrices for trial `trial` of a sweep seeded
/// by `seed`; each matrix gets its own child stream so draws never alias.
TupleSample make_tuple_sample(std::uint64_t seed, std::uint64_t trial, int n, int count,
                              Ensemble e);

}  // namespace moduli::rng
