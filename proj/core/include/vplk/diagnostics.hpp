#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "vplk/integrator.hpp"
#include "vplk/landau_kernel.hpp"
#include "vplk/norms.hpp"

namespace vplk {

// Ceilings on the blow-up quantities; infinity disables a check.
struct Ceilings {
    double e_norm = std::numeric_limits<double>::infinity();
    double inv_density = std::numeric_limits<double>::infinity();
    double ln_beta = std::numeric_limits<double>::infinity();  // on |ln beta|
};

struct BlowupReport {
    double t = 0.0;
    double e_norm = 0.0;                   // sqrt of the sum over species of ||F_s||_E^2
    std::vector<double> inv_density_sup;   // ||1/n_s||_{L^inf_x}, inf if n_s vanishes somewhere
    double ln_beta = 0.0;                  // massless only
    bool triggered = false;
    std::vector<std::string> reasons;      // which ceilings were exceeded
};

// ||1/n||_{L^inf}; IEEE infinity when n <= 0 at some point.
double inv_density_sup(const DistField& F);

BlowupReport blowup_monitor(const PlasmaState& s, const Ceilings& ceilings, const NormParams& norm = {});

// Ceilings at `factor` times the values of the initial state.
Ceilings default_ceilings(const BlowupReport& initial, double factor = 1e3);

// sum F log F dv dx over F > 0
double entropy(const DistField& F);

struct LedgerRow {
    double t = 0.0;
    double mass_plus = 0.0, mass_minus = 0.0;
    std::array<double, 3> momentum{};  // total over species
    double energy = 0.0;               // total_energy(state)
    double entropy = 0.0;              // summed over species
    double min_f = 0.0;                // min over species of min F
    double max_f = 0.0;
};

class ConservationLedger {
public:
    void record(const PlasmaState& s);
    const std::vector<LedgerRow>& rows() const { return rows_; }
    void write_csv(std::ostream& out) const;

    static const std::vector<std::string>& columns();

private:
    std::vector<LedgerRow> rows_;
};

// ||(n_next - n_prev)/dt + div_x int v F_mid dv||_{L^2_x}, F_mid the average of the two
// states; summed in quadrature over species.
double continuity_residual(const PlasmaState& prev, const PlasmaState& next, double dt);
double continuity_residual(const DistField& prev, const DistField& next, double dt);

// ---------------------------------------------------------------------------
// Certification campaigns over seeded Gaussian-mixture corpora.

struct CorpusSpec {
    std::uint64_t seed = 20240917;
    int members = 12;
    int n_v = 32;
    double v_max = 6.0;
    int sample_dirs = 64;
    double commutator_m = 2.0;
    double commutator_r = 0.5;
};

struct CorpusMember {
    std::string label;
    std::vector<double> slice;  // n_v^3 velocity field
};

// `members` mixtures of 1-3 Maxwellians with seeded weights, means and temperatures.
std::vector<CorpusMember> make_corpus(const CorpusSpec& spec);
// A single standard Maxwellian.
std::vector<CorpusMember> mu_corpus(const CorpusSpec& spec);

struct CampaignRow {
    std::string label;
    BoundReport bounds;
    CommutatorSides commutator;  // member against the next member of the corpus
};

struct CampaignReport {
    std::vector<CampaignRow> rows;
    double worst_upper_constant = 0.0;  // max of c_upper / ||<v>^5 G||
    double worst_lower_constant = 0.0;  // min of c_lower / lower_bound_expression
    double min_ratio = 0.0;             // min directional ratio over the corpus
    double worst_commutator = 0.0;      // max lhs / (rhs1 + rhs2)
    bool sandwich_ok = false;           // every directional ratio strictly positive
};

CampaignReport campaign_verify(const CorpusSpec& spec, const std::vector<CorpusMember>& corpus);

// Columns: label, c_lower, c_upper, mass, weighted2_l2, weighted5_l2, lower_constant,
// upper_constant, comm_lhs, comm_rhs1, comm_rhs2
void write_campaign_csv(std::ostream& out, const CampaignReport& rep);

}  // namespace vplk
