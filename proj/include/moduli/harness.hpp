#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "moduli/ineq.hpp"
#include "moduli/orbit.hpp"
#include "moduli/rng.hpp"
#include "moduli/spectral.hpp"

namespace moduli::harness {

/// Run fn(trial) for trial in [0, trials) across `jobs` threads. Each trial
/// owns its RNG stream, so the schedule cannot change results; callers store
/// by index and merge in order.
void parallel_for(int trials, int jobs, const std::function<void(int)>& fn);

// ---------------------------------------------------------------------------
// Orbit certificate sweeps
// ---------------------------------------------------------------------------

/// Names accepted by run_orbit_sweep (also the CLI decompose ops).
const std::vector<std::string>& orbit_op_names();

struct OrbitSweepRow {
    std::string op;
    int n = 0;
    int trial = 0;
    bool domination = false;
    double residual = 0.0;     // equality residual, or max(0, -margin)
    double margin = 0.0;       // domination margin (lambda_min of rhs - target)
    double max_defect = 0.0;   // worst witness defect in the certificate
    double scale = 1.0;
    bool pass = false;
};

struct OrbitSweepOptions {
    std::vector<int> sizes = {1, 2, 3, 5};
    int instances = 100;
    std::uint64_t seed = 1729;
    int jobs = 1;
    Tolerances tol;
};

/// Seeded random instances for each op at each size; returns one row per
/// instance. Every certificate is re-verified from scratch.
std::vector<OrbitSweepRow> run_orbit_sweep(const std::vector<std::string>& ops,
                                           const OrbitSweepOptions& opt);

std::string orbit_rows_to_json_lines(const std::vector<OrbitSweepRow>& rows);

// ---------------------------------------------------------------------------
// Inequality family sweeps
// ---------------------------------------------------------------------------

/// Families accepted by run_family.
const std::vector<std::string>& family_names();

struct FamilyResult {
    std::string family;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<ineq::IneqReport> reports;
    int violated = 0;          // violations not marked expected
    int expected_violations = 0;
    double min_margin = 0.0;
    double max_ratio = 0.0;
};

/// 10^k seeded trials of one inequality family. Each trial draws its size and
/// exponent from fixed grids (restricted to the family's valid p-range) and an
/// independent stream keyed by (seed, family, trial). The weyl-qsym family
/// includes the truncated-shift core at p > 2, whose violations are expected
/// and counted separately. Nonempty `sizes` / `p_values` replace the default
/// grids (p_values is intersected with the family's valid range).
FamilyResult run_family(const std::string& family, int trials, std::uint64_t seed, int jobs,
                        const std::vector<int>& sizes = {},
                        const std::vector<double>& p_values = {});

std::string reports_to_json_lines(const std::vector<ineq::IneqReport>& reports);

struct CsvRow {
    std::string name;
    double p = 0.0;
    int n = 0;
    int trials = 0;
    double min_margin = 0.0;
    double max_ratio = 0.0;
    int holds = 0;
    int violated = 0;
    int equality = 0;
};

/// Aggregate per (name, p, n): trial counts, worst margin, largest ratio,
/// verdict tally. The n column comes from the instance digest.
std::vector<CsvRow> aggregate_reports(const std::vector<ineq::IneqReport>& reports);
std::string csv_to_string(const std::vector<CsvRow>& rows);

/// Residual sweep of the Euler operator identity over seeded random triples.
struct EulerIdentityRow {
    int n = 0;
    int trial = 0;
    double residual = 0.0;
    double scale = 1.0;
};
std::vector<EulerIdentityRow> run_euler_identity_sweep(const std::vector<int>& sizes,
                                                       int trials_per_size, std::uint64_t seed,
                                                       int jobs);

std::string instance_digest(std::uint64_t seed, std::uint64_t trial, int n, rng::Ensemble e);

}  // namespace moduli::harness
