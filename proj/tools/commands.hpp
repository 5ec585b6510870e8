#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace vplk::cli {

enum ExitCode : int { ok = 0, config_error = 2, numerical_abort = 3 };

struct CommonOptions {
    std::filesystem::path output_dir;  // empty: use the config value (or "vplk_out")
    int threads = 1;
};

// Runs the configured driver to the horizon or to a blow-up trigger. Writes
// run_log.csv, conservation.csv, blowup_report.csv, snapshots and the
// effective configuration into the output directory.
int cmd_simulate(const std::filesystem::path& config, const CommonOptions& opt, std::ostream& out, std::ostream& err);

// Writes the initial state (init.bin) and the effective configuration.
int cmd_init(const std::filesystem::path& config, const CommonOptions& opt, std::ostream& out, std::ostream& err);

struct CorpusOptions {
    std::string corpus = "default";  // default | mu
    std::uint64_t seed = 20240917;
    int members = 12;
    int n_v = 32;
    double v_max = 6.0;
    int sample_dirs = 64;
    double m = 2.0;
    double r = 0.5;
};

// Sandwich bounds over a corpus: campaign.csv plus a summary; exit 3 if a
// directional ratio is not strictly positive.
int cmd_verify_bounds(const CorpusOptions& c, const CommonOptions& opt, std::ostream& out, std::ostream& err);
// Weighted commutator sides over a corpus: commutators.csv.
int cmd_commutators(const CorpusOptions& c, const CommonOptions& opt, std::ostream& out, std::ostream& err);

// NormReport of a distribution stored in a snapshot, as CSV on `out`.
int cmd_norms(const std::filesystem::path& snapshot, const std::string& field, const NormParams& p, std::ostream& out,
              std::ostream& err);

// Poisson-Boltzmann solve for the density stored in a snapshot (a spatial field
// "n", or the density of a distribution field). With an energy, solves the
// coupled problem for beta; otherwise uses the given beta. With an output
// directory, writes solve_pb.bin (n, phi, beta) and solve_pb_log.csv.
struct SolvePbOptions {
    std::filesystem::path snapshot;
    std::string field;  // empty: "n" if present, else "plus"
    std::optional<double> energy;
    std::optional<double> beta;
};
int cmd_solve_pb(const SolvePbOptions& o, const CommonOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace vplk::cli
