#ifndef PINCHOPT_MC_HARNESS_HPP
#define PINCHOPT_MC_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pinchopt/ao_solver.hpp"
#include "pinchopt/model.hpp"
#include "pinchopt/rng.hpp"

namespace pinchopt {

enum class SweepKind { MaxPowerDbm, FixedPowerDbm, AreaLengthM };

std::string_view sweep_kind_name(SweepKind kind);

// One Monte Carlo experiment: a sweep over one parameter, a fixed number of
// trials, and a set of schemes. Trials are paired along both axes: every
// scheme and every sweep value of trial t runs on the same user drop.
struct ExperimentSpec {
    SweepKind sweep_kind = SweepKind::MaxPowerDbm;
    std::vector<double> sweep_values{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    int trials = 1000;
    Scenario base{};
    double max_power_dbm = 10.0;  // per-user cap unless swept
    int n_users = 5;
    std::vector<Scheme> schemes{
        {SchemeKind::NomaPso}, {SchemeKind::NomaExhaustive}, {SchemeKind::NomaRandomInit},
        {SchemeKind::NomaFixed}, {SchemeKind::Tdma}};
    std::uint64_t master_seed = 1;
    AoConfig ao{};
    // When sweeping the service-area length, the waveguide tracks it (L = D_x).
    bool couple_waveguide_to_area = true;
};

void validate_experiment_spec(const ExperimentSpec& spec);

// Aggregates for one (sweep value, scheme) pair. Per-trial EE values are
// retained in trial order so downstream checks can recompute statistics and
// run paired comparisons.
struct SweepCell {
    double sweep_value = 0.0;
    SchemeKind scheme = SchemeKind::NomaPso;
    double ee_mean = 0.0;
    double ee_std = 0.0;  // sample standard deviation over unflagged trials
    int trials = 0;
    int flagged = 0;
    std::vector<double> trial_ee;
    std::vector<bool> trial_flagged;
};

struct SweepResult {
    SweepKind sweep_kind = SweepKind::MaxPowerDbm;
    std::vector<double> sweep_values;
    std::vector<Scheme> schemes;
    std::vector<SweepCell> cells;  // ordered by (sweep index, scheme index)
    std::uint64_t master_seed = 0;
    std::uint64_t spec_hash = 0;

    const SweepCell& cell(std::size_t sweep_idx, std::size_t scheme_idx) const {
        return cells[sweep_idx * schemes.size() + scheme_idx];
    }
};

// Scenario and per-user cap after applying one sweep value to the template.
struct TrialParams {
    Scenario scenario;
    double cap_w = 0.0;
};
TrialParams apply_sweep_value(const ExperimentSpec& spec, double sweep_value);

// Users drawn uniformly over the service area, x ~ U[0, D_x],
// y ~ U[-D_y/2, D_y/2], every cap set to cap_w.
UserSet generate_users(const Scenario& scenario, int n, double cap_w, SplitMix64& rng);

// Stream key for one trial's user drop. Deliberately independent of the
// sweep point: trial t sees the same underlying randomness at every sweep
// value (common random numbers), so sweep curves are paired per trial and
// trend checks are not washed out by drop-sampling noise.
std::uint64_t trial_stream_seed(std::uint64_t master_seed, std::size_t trial_idx);
// Stream key for the solver randomness of one scheme on one trial. Keyed by
// (scheme, trial) but not the sweep point, so neighboring sweep values see
// identical search randomness and paired comparisons stay noise-free.
std::uint64_t scheme_stream_seed(std::uint64_t master_seed, SchemeKind scheme,
                                 std::size_t trial_idx);

// Invoked (on the orchestrating thread) as each sweep point starts.
using SweepProgressFn =
    std::function<void(std::size_t sweep_idx, std::size_t sweep_count, double sweep_value)>;

// Runs every scheme on every (sweep value, trial) drop and aggregates EE
// statistics. Trials execute on `workers` OpenMP threads (0 = runtime
// default); results are reduced in (sweep, trial) index order and are
// identical for any worker count. Throws if flagged solves reach 0.1% of the
// trials of any cell.
SweepResult run_experiment(const ExperimentSpec& spec, int workers = 0,
                           const SweepProgressFn& on_sweep = {});

// Plain-loop reference implementation, kept for testing the parallel path.
SweepResult run_experiment_serial(const ExperimentSpec& spec);

// Canonical flat-text form of a spec; hashed into SweepResult::spec_hash and
// written next to results for provenance.
std::string canonical_spec_text(const ExperimentSpec& spec);
std::uint64_t hash_spec(const ExperimentSpec& spec);

} // namespace pinchopt

#endif
