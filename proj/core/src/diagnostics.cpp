#include "vplk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "vplk/errors.hpp"
#include "vplk/poisson.hpp"
#include "vplk/snapshot.hpp"

namespace vplk {

double inv_density_sup(const DistField& F) {
    const auto n = moments(F).mass;
    double m = 0.0;
    for (double x : n.values()) {
        if (!(x > 0.0)) return std::numeric_limits<double>::infinity();
        m = std::max(m, 1.0 / x);
    }
    return m;
}

BlowupReport blowup_monitor(const PlasmaState& s, const Ceilings& c, const NormParams& norm) {
    BlowupReport r;
    r.t = s.t;
    std::vector<const DistField*> species{&s.plus};
    if (s.variant == Variant::two_species) species.push_back(&s.minus);
    double e2 = 0.0;
    for (const auto* F : species) {
        const double e = F->all_finite() ? e_norm(*F, norm) : std::numeric_limits<double>::infinity();
        e2 += e * e;
        r.inv_density_sup.push_back(inv_density_sup(*F));
    }
    r.e_norm = std::sqrt(e2);
    if (s.variant == Variant::massless) r.ln_beta = std::log(s.beta);
    if (!(r.e_norm <= c.e_norm)) r.reasons.push_back("e_norm");
    for (std::size_t i = 0; i < r.inv_density_sup.size(); ++i)
        if (!(r.inv_density_sup[i] <= c.inv_density)) r.reasons.push_back(i == 0 ? "inv_density_plus" : "inv_density_minus");
    if (s.variant == Variant::massless && !(std::abs(r.ln_beta) <= c.ln_beta)) r.reasons.push_back("ln_beta");
    r.triggered = !r.reasons.empty();
    return r;
}

Ceilings default_ceilings(const BlowupReport& initial, double factor) {
    Ceilings c;
    c.e_norm = factor * initial.e_norm;
    double inv = 0.0;
    for (double x : initial.inv_density_sup) inv = std::max(inv, x);
    c.inv_density = factor * inv;
    // |ln beta| may start at zero; keep the ceiling meaningful.
    c.ln_beta = factor * std::max(std::abs(initial.ln_beta), 1.0);
    return c;
}

double entropy(const DistField& F) {
    double s = 0.0;
    for (double x : F.values())
        if (x > 0.0) s += x * std::log(x);
    return s * F.grid().wv() * F.grid().wx();
}

const std::vector<std::string>& ConservationLedger::columns() {
    static const std::vector<std::string> cols{"t",   "mass_plus", "mass_minus", "p1",    "p2",
                                               "p3",  "energy",    "entropy",    "min_f", "max_f"};
    return cols;
}

void ConservationLedger::record(const PlasmaState& s) {
    if (!rows_.empty() && s.t < rows_.back().t) throw PreconditionError("ledger: rows must be monotone in t");
    LedgerRow r;
    r.t = s.t;
    auto add = [&](const DistField& F, double& mass) {
        const auto m = moments(F);
        mass = m.mass.integral();
        for (std::size_t d = 0; d < 3; ++d) r.momentum[d] += m.momentum[d].integral();
        r.entropy += entropy(F);
        r.min_f = std::min(r.min_f, F.min());
        r.max_f = std::max(r.max_f, F.max());
    };
    r.min_f = std::numeric_limits<double>::infinity();
    r.max_f = -std::numeric_limits<double>::infinity();
    add(s.plus, r.mass_plus);
    if (s.variant == Variant::two_species) add(s.minus, r.mass_minus);
    r.energy = total_energy(s);
    rows_.push_back(r);
}

void ConservationLedger::write_csv(std::ostream& out) const {
    CsvWriter w(out, columns());
    for (const auto& r : rows_)
        w.row({r.t, r.mass_plus, r.mass_minus, r.momentum[0], r.momentum[1], r.momentum[2], r.energy, r.entropy, r.min_f,
               r.max_f});
}

double continuity_residual(const DistField& prev, const DistField& next, double dt) {
    require_same_grid(prev.grid(), next.grid(), "continuity_residual");
    if (!(dt > 0.0)) throw PreconditionError("continuity_residual: dt must be positive");
    const auto& g = prev.grid();
    const auto mid = 0.5 * (prev + next);
    const auto m = moments(mid);
    SpatialField r = moments(next).mass - moments(prev).mass;
    r *= 1.0 / dt;
    for (int d = 0; d < g.dim_x; ++d) r += gradient(m.momentum[static_cast<std::size_t>(d)])[static_cast<std::size_t>(d)];
    return l2_norm(r);
}

double continuity_residual(const PlasmaState& prev, const PlasmaState& next, double dt) {
    if (prev.variant != next.variant) throw PreconditionError("continuity_residual: variant mismatch");
    double r = continuity_residual(prev.plus, next.plus, dt);
    if (prev.variant == Variant::two_species) r = std::hypot(r, continuity_residual(prev.minus, next.minus, dt));
    return r;
}

// ---------------------------------------------------------------------------

namespace {

PhaseGrid corpus_grid(const CorpusSpec& spec) { return make_grid(1, 8, spec.n_v, spec.v_max); }

std::vector<double> mixture_slice(const PhaseGrid& g, const std::vector<std::array<double, 5>>& comps) {
    // comps: weight, mean x/y/z, temperature
    std::vector<double> out(g.nv_total(), 0.0);
    for (const auto& c : comps) {
        const Vec3 u(c[1], c[2], c[3]);
        const double T = c[4];
        const double norm = c[0] * std::pow(2.0 * M_PI * T, -1.5);
        for (std::size_t iv = 0; iv < out.size(); ++iv)
            out[iv] += norm * std::exp(-(g.v3(iv) - u).squaredNorm() / (2.0 * T));
    }
    return out;
}

}  // namespace

std::vector<CorpusMember> make_corpus(const CorpusSpec& spec) {
    if (spec.members <= 0) throw PreconditionError("corpus: at least one member required");
    const auto g = corpus_grid(spec);
    std::mt19937_64 rng(spec.seed);
    auto uniform = [&](double a, double b) { return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53); };
    std::vector<CorpusMember> out;
    for (int m = 0; m < spec.members; ++m) {
        const int k = 1 + static_cast<int>(rng() % 3);
        std::vector<std::array<double, 5>> comps;
        for (int c = 0; c < k; ++c)
            comps.push_back({uniform(0.2, 1.0), uniform(-1.5, 1.5), uniform(-1.5, 1.5), uniform(-1.5, 1.5),
                             uniform(0.5, 1.5)});
        out.push_back({"mixture_" + std::to_string(m), mixture_slice(g, comps)});
    }
    return out;
}

std::vector<CorpusMember> mu_corpus(const CorpusSpec& spec) {
    const auto g = corpus_grid(spec);
    return {{"mu", mixture_slice(g, {{1.0, 0.0, 0.0, 0.0, 1.0}})}};
}

CampaignReport campaign_verify(const CorpusSpec& spec, const std::vector<CorpusMember>& corpus) {
    if (corpus.empty()) throw PreconditionError("campaign: empty corpus");
    const auto g = corpus_grid(spec);
    CampaignReport rep;
    rep.worst_upper_constant = -std::numeric_limits<double>::infinity();
    rep.worst_lower_constant = std::numeric_limits<double>::infinity();
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& m = corpus[i];
        if (m.slice.size() != g.nv_total()) throw PreconditionError("campaign: member '" + m.label + "' has wrong size");
        DistField G(g);
        for (std::size_t ix = 0; ix < g.nx_total(); ++ix) std::copy(m.slice.begin(), m.slice.end(), G.slice(ix).begin());
        CampaignRow row;
        row.label = m.label;
        row.bounds = verify_bounds(G, spec.sample_dirs, true, spec.seed);
        const auto& other = corpus[(i + 1) % corpus.size()].slice;
        row.commutator = commutator_check(g, m.slice, other, spec.commutator_m, spec.commutator_r);
        rep.worst_upper_constant = std::max(rep.worst_upper_constant, row.bounds.upper_constant);
        rep.worst_lower_constant = std::min(rep.worst_lower_constant, row.bounds.lower_constant);
        rep.min_ratio = std::min(rep.min_ratio, row.bounds.c_lower);
        const double rhs = row.commutator.rhs1 + row.commutator.rhs2;
        rep.worst_commutator = std::max(rep.worst_commutator, rhs > 0.0 ? row.commutator.lhs / rhs : 0.0);
        rep.rows.push_back(std::move(row));
    }
    rep.sandwich_ok = rep.min_ratio > 0.0;
    return rep;
}

void write_campaign_csv(std::ostream& out, const CampaignReport& rep) {
    out << "label,c_lower,c_upper,mass,weighted2_l2,weighted5_l2,lower_constant,upper_constant,comm_lhs,comm_rhs1,"
           "comm_rhs2\n";
    for (const auto& r : rep.rows) {
        const auto& b = r.bounds;
        out << r.label;
        for (double x : {b.c_lower, b.c_upper, b.mass, b.weighted_l2, b.weighted5_l2, b.lower_constant, b.upper_constant,
                         r.commutator.lhs, r.commutator.rhs1, r.commutator.rhs2})
            out << ',' << format_number(x);
        out << '\n';
    }
}

}  // namespace vplk
