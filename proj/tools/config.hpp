#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vplk/integrator.hpp"
#include "vplk/norms.hpp"

namespace vplk::cli {

// Parse or validation failure; what() carries "<source>:<line>: message" when a
// line is known.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RunMode { step, picard };

struct RunConfig {
    // [grid]
    int dim_x = 1;
    int n_x = 32;
    int n_v = 32;
    double v_max = 6.0;
    // [norm]
    NormParams norm{};
    // [step]
    StepConfig step{};
    // [picard]
    PicardConfig picard{};
    // [run]
    Variant variant = Variant::two_species;
    RunMode mode = RunMode::step;
    double horizon = 0.1;
    // [species.plus], [species.minus]
    InitialSpec initial{};
    // [massless]
    std::optional<double> energy0;  // overrides the energy implied by beta_in
    // [output]
    std::string output_dir = "vplk_out";
    int snapshot_every = 0;  // steps; 0 writes only the first and last state
    int log_every = 1;
    // [ceilings]
    double ceiling_factor = 1e3;
    std::optional<double> e_norm_ceiling, inv_density_ceiling, ln_beta_ceiling;
    double guard_factor = 2.0;  // halt when ||1/n|| grows by this factor

    bool operator==(const RunConfig&) const;
};

RunConfig parse_config(std::istream& in, const std::string& source = "config");
RunConfig load_config(const std::filesystem::path& path);

// Effective configuration in the same format; parse_config(to_ini(c)) == c.
std::string to_ini(const RunConfig& c);

}  // namespace vplk::cli
