#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "vplk/diagnostics.hpp"
#include "vplk/errors.hpp"
#include "vplk/parallel.hpp"
#include "vplk/poisson.hpp"
#include "vplk/snapshot.hpp"

namespace vplk::cli {

namespace fs = std::filesystem;

namespace {

fs::path resolve_dir(const CommonOptions& opt, const std::string& fallback) {
    fs::path d = opt.output_dir.empty() ? fs::path(fallback) : opt.output_dir;
    fs::create_directories(d);
    return d;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p);
    if (!f) throw ConfigError("cannot write " + p.string());
    return f;
}

Snapshot state_snapshot(const PlasmaState& s) {
    Snapshot snap(s.plus.grid());
    snap.add("t", s.t);
    snap.add("plus", s.plus);
    if (s.variant == Variant::two_species) snap.add("minus", s.minus);
    snap.add("phi", s.phi);
    snap.add("n", moments(s.plus).mass);
    if (s.variant == Variant::massless) {
        snap.add("beta", s.beta);
        snap.add("energy0", s.energy0);
    }
    return snap;
}

std::string step_name(int n) {
    std::ostringstream os;
    os << "snapshot_" << std::setw(6) << std::setfill('0') << n << ".bin";
    return os.str();
}

struct Prepared {
    RunConfig cfg;
    fs::path dir;
    PlasmaState state;
};

// Loads, validates and builds the initial state. Returns an exit code on failure.
int prepare(const fs::path& config, const CommonOptions& opt, std::ostream& err, Prepared& p) {
    try {
        p.cfg = load_config(config);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    }
    if (opt.threads <= 0) {
        err << "config error: --threads must be positive\n";
        return config_error;
    }
    set_num_threads(opt.threads);
    p.dir = resolve_dir(opt, p.cfg.output_dir);
    {
        auto f = open_out(p.dir / "effective_config.ini");
        f << to_ini(p.cfg);
    }
    const auto grid = make_grid(p.cfg.dim_x, p.cfg.n_x, p.cfg.n_v, p.cfg.v_max);
    try {
        p.state = make_initial(grid, p.cfg.variant, p.cfg.initial);
    } catch (const PreconditionError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::runtime_error& e) {
        err << "numerical abort: " << e.what() << '\n';
        return numerical_abort;
    }
    if (p.cfg.energy0) p.state.energy0 = *p.cfg.energy0;
    try {
        check_cfl(p.state.phi, p.cfg.step, p.cfg.variant != Variant::landau_homogeneous);
    } catch (const PreconditionError& e) {
        err << "config error: " << config.string() << ": " << e.what() << '\n';
        return config_error;
    }
    return ok;
}

const std::vector<std::string> run_log_columns = {
    "t",       "mass_plus", "mass_minus", "p1",         "p2",          "p3",   "kinetic",     "field_energy", "energy",
    "e_norm",  "inv_n_plus", "inv_n_minus", "ln_beta", "min_f",       "entropy", "continuity"};

std::vector<double> log_row(const PlasmaState& s, const BlowupReport& rep, double continuity) {
    double mp = 0.0, mm = 0.0, kin = 0.0, ent = 0.0, minf = s.plus.min();
    std::array<double, 3> p{};
    auto add = [&](const DistField& F, double& mass) {
        const auto m = moments(F);
        mass = m.mass.integral();
        for (std::size_t d = 0; d < 3; ++d) p[d] += m.momentum[d].integral();
        kin += m.kinetic_energy;
        ent += entropy(F);
        minf = std::min(minf, F.min());
    };
    add(s.plus, mp);
    if (s.variant == Variant::two_species) add(s.minus, mm);
    const double field = dirichlet_energy(s.phi) / (8.0 * M_PI);
    const double inv_minus = rep.inv_density_sup.size() > 1 ? rep.inv_density_sup[1] : 0.0;
    return {s.t,        mp,  mm,   p[0], p[1], p[2], kin, field, total_energy(s), rep.e_norm, rep.inv_density_sup[0],
            inv_minus,  rep.ln_beta, minf, ent,  continuity};
}

void write_report(const fs::path& p, const BlowupReport& r, const Ceilings& c, bool guard = false) {
    auto f = open_out(p);
    f << "quantity,value,ceiling\n";
    f << "t," << format_number(r.t) << ",\n";
    f << "e_norm," << format_number(r.e_norm) << ',' << format_number(c.e_norm) << '\n';
    for (std::size_t i = 0; i < r.inv_density_sup.size(); ++i)
        f << (i == 0 ? "inv_density_plus," : "inv_density_minus,") << format_number(r.inv_density_sup[i]) << ','
          << format_number(c.inv_density) << '\n';
    f << "ln_beta," << format_number(r.ln_beta) << ',' << format_number(c.ln_beta) << '\n';
    f << "triggered," << (r.triggered ? 1 : 0) << ",\n";
    f << "guard," << (guard ? 1 : 0) << ",\n";
}

int run_picard(Prepared& p, std::ostream& out, std::ostream& err) {
    const auto& s = p.state;
    std::vector<DistField> F{s.plus};
    std::vector<double> q{1.0};
    FieldRule rule = FieldRule::none;
    if (s.variant == Variant::two_species) {
        F.push_back(s.minus);
        q.push_back(-1.0);
        rule = FieldRule::poisson;
    }
    PicardResult res;
    int code = ok;
    try {
        res = picard_solve(F, q, rule, p.cfg.picard, p.cfg.step);
    } catch (const std::runtime_error& e) {
        err << "numerical abort: " << e.what() << '\n';
        code = numerical_abort;
    }
    auto f = open_out(p.dir / "contraction.csv");
    f << "iteration,difference,ratio\n";
    for (std::size_t i = 0; i < res.log.differences.size(); ++i)
        f << i + 1 << ',' << format_number(res.log.differences[i]) << ','
          << (i ? format_number(res.log.ratios[i - 1]) : std::string("nan")) << '\n';
    if (code != ok) return code;
    PlasmaState fin = s;
    fin.t = p.cfg.horizon;
    fin.plus = res.F[0];
    if (s.variant == Variant::two_species) {
        fin.minus = res.F[1];
        SpatialField rho = moments(fin.plus).mass - moments(fin.minus).mass;
        const double mean = rho.integral();
        for (auto& x : rho.values()) x -= mean;
        fin.phi = solve_poisson(rho);
    }
    write_snapshot(p.dir / "final.bin", state_snapshot(fin));
    out << "picard: " << res.log.iterations << " iterations, last difference "
        << format_number(res.log.differences.back()) << '\n';
    return ok;
}

}  // namespace

int cmd_simulate(const fs::path& config, const CommonOptions& opt, std::ostream& out, std::ostream& err) {
    Prepared p;
    try {
        if (const int rc = prepare(config, opt, err, p); rc != ok) return rc;
        if (p.cfg.mode == RunMode::picard) return run_picard(p, out, err);

        const auto& cfg = p.cfg;
        PlasmaState state = p.state;
        const auto rep0 = blowup_monitor(state, Ceilings{}, cfg.norm);
        Ceilings ceil = default_ceilings(rep0, cfg.ceiling_factor);
        if (cfg.e_norm_ceiling) ceil.e_norm = *cfg.e_norm_ceiling;
        if (cfg.inv_density_ceiling) ceil.inv_density = *cfg.inv_density_ceiling;
        if (cfg.ln_beta_ceiling) ceil.ln_beta = *cfg.ln_beta_ceiling;
        double inv0 = 0.0;
        for (double x : rep0.inv_density_sup) inv0 = std::max(inv0, x);

        const int nsteps = std::max(1, static_cast<int>(std::ceil(cfg.horizon / cfg.step.dt - 1e-9)));
        StepConfig sc = cfg.step;
        sc.dt = cfg.horizon / nsteps;

        auto log_file = open_out(p.dir / "run_log.csv");
        CsvWriter log(log_file, run_log_columns);
        ConservationLedger ledger;
        ledger.record(state);
        log.row(log_row(state, blowup_monitor(state, ceil, cfg.norm), 0.0));
        write_snapshot(p.dir / step_name(0), state_snapshot(state));

        auto finish = [&](const BlowupReport& r, bool guard = false) {
            write_report(p.dir / "blowup_report.csv", r, ceil, guard);
            auto f = open_out(p.dir / "conservation.csv");
            ledger.write_csv(f);
        };

        BlowupReport last = blowup_monitor(state, ceil, cfg.norm);
        for (int n = 1; n <= nsteps; ++n) {
            PlasmaState next;
            try {
                next = step(state, sc);
            } catch (const PreconditionError& e) {
                err << "numerical abort at t = " << format_number(state.t) << ": " << e.what() << '\n';
                finish(last);
                return numerical_abort;
            } catch (const std::runtime_error& e) {
                err << "numerical abort at t = " << format_number(state.t) << ": " << e.what() << '\n';
                finish(last);
                return numerical_abort;
            } catch (const ConsistencyError& e) {
                err << "numerical abort at t = " << format_number(state.t) << ": " << e.what() << '\n';
                finish(last);
                return numerical_abort;
            }
            if (!next.plus.all_finite() || (next.variant == Variant::two_species && !next.minus.all_finite())) {
                err << "numerical abort at t = " << format_number(next.t) << ": non-finite distribution\n";
                finish(last);
                return numerical_abort;
            }
            const auto rep = blowup_monitor(next, ceil, cfg.norm);
            const double cont = continuity_residual(state, next, sc.dt);
            ledger.record(next);
            if (n % cfg.log_every == 0 || n == nsteps || rep.triggered) log.row(log_row(next, rep, cont));
            double inv = 0.0;
            for (double x : rep.inv_density_sup) inv = std::max(inv, x);
            if (!(inv <= cfg.guard_factor * inv0)) {
                err << "blow-up guard: ||1/n||_inf = " << format_number(inv) << " exceeds " << format_number(cfg.guard_factor)
                    << " x its initial value " << format_number(inv0) << " at t = " << format_number(next.t) << '\n';
                write_snapshot(p.dir / step_name(n), state_snapshot(next));
                finish(rep, true);
                return numerical_abort;
            }
            if (rep.triggered) {
                err << "blow-up ceiling exceeded at t = " << format_number(next.t) << ":";
                for (const auto& r : rep.reasons) err << ' ' << r;
                err << '\n';
                write_snapshot(p.dir / step_name(n), state_snapshot(next));
                finish(rep);
                return numerical_abort;
            }
            state = std::move(next);
            last = rep;
            if ((cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0) || n == nsteps)
                write_snapshot(p.dir / step_name(n), state_snapshot(state));
        }
        finish(last);
        out << "simulate: " << nsteps << " steps to t = " << format_number(state.t) << '\n';
        return ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const fs::filesystem_error& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    }
}

int cmd_init(const fs::path& config, const CommonOptions& opt, std::ostream& out, std::ostream& err) {
    Prepared p;
    try {
        if (const int rc = prepare(config, opt, err, p); rc != ok) return rc;
        write_snapshot(p.dir / "init.bin", state_snapshot(p.state));
        out << "init: wrote " << (p.dir / "init.bin").string() << '\n';
        return ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const fs::filesystem_error& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    }
}

namespace {

int run_campaign(const CorpusOptions& c, const CommonOptions& opt, std::ostream& out, std::ostream& err,
                 bool bounds_file) {
    CorpusSpec spec;
    spec.seed = c.seed;
    spec.members = c.members;
    spec.n_v = c.n_v;
    spec.v_max = c.v_max;
    spec.sample_dirs = c.sample_dirs;
    spec.commutator_m = c.m;
    spec.commutator_r = c.r;
    try {
        set_num_threads(opt.threads);
        std::vector<CorpusMember> corpus;
        if (c.corpus == "default")
            corpus = make_corpus(spec);
        else if (c.corpus == "mu")
            corpus = mu_corpus(spec);
        else {
            err << "config error: unknown corpus '" << c.corpus << "' (expected default or mu)\n";
            return config_error;
        }
        const auto rep = campaign_verify(spec, corpus);
        const auto dir = resolve_dir(opt, "vplk_out");
        if (bounds_file) {
            auto f = open_out(dir / "campaign.csv");
            write_campaign_csv(f, rep);
            out << "members " << rep.rows.size() << '\n'
                << "min_ratio " << format_number(rep.min_ratio) << '\n'
                << "upper_constant " << format_number(rep.worst_upper_constant) << '\n'
                << "lower_constant " << format_number(rep.worst_lower_constant) << '\n';
            if (!rep.sandwich_ok) {
                err << "sandwich violated: a directional ratio is not strictly positive\n";
                return numerical_abort;
            }
        } else {
            auto f = open_out(dir / "commutators.csv");
            f << "label,lhs,rhs1,rhs2\n";
            for (const auto& r : rep.rows)
                f << r.label << ',' << format_number(r.commutator.lhs) << ',' << format_number(r.commutator.rhs1) << ','
                  << format_number(r.commutator.rhs2) << '\n';
            out << "members " << rep.rows.size() << '\n'
                << "worst_commutator_ratio " << format_number(rep.worst_commutator) << '\n';
        }
        return ok;
    } catch (const PreconditionError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    }
}

SpatialField density_from(const Snapshot& snap, const std::string& field) {
    std::string name = field;
    if (name.empty()) name = snap.has("n") ? "n" : "plus";
    for (const auto& f : snap.fields())
        if (f.name == name) {
            if (f.kind == SnapshotField::Kind::spatial) return snap.spatial(name);
            if (f.kind == SnapshotField::Kind::dist) return moments(snap.dist(name)).mass;
        }
    throw PreconditionError("snapshot has no density field '" + name + "'");
}

}  // namespace

int cmd_verify_bounds(const CorpusOptions& c, const CommonOptions& opt, std::ostream& out, std::ostream& err) {
    return run_campaign(c, opt, out, err, true);
}

int cmd_commutators(const CorpusOptions& c, const CommonOptions& opt, std::ostream& out, std::ostream& err) {
    return run_campaign(c, opt, out, err, false);
}

int cmd_norms(const fs::path& snapshot, const std::string& field, const NormParams& p, std::ostream& out,
              std::ostream& err) {
    try {
        p.validate();
        const auto snap = read_snapshot(snapshot);
        const auto rep = norm_report(snap.dist(field.empty() ? "plus" : field), p);
        CsvWriter w(out, {"e", "d", "e_prime", "d_prime", "e_term0", "e_term1", "e_term2", "d_term0", "d_term1",
                          "d_term2", "e_prime_term0", "e_prime_term1", "d_prime_term0", "d_prime_term1"});
        w.row({rep.e, rep.d, rep.e_prime, rep.d_prime, rep.e_terms[0], rep.e_terms[1], rep.e_terms[2], rep.d_terms[0],
               rep.d_terms[1], rep.d_terms[2], rep.e_prime_terms[0], rep.e_prime_terms[1], rep.d_prime_terms[0],
               rep.d_prime_terms[1]});
        return ok;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::runtime_error& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    }
}

int cmd_solve_pb(const SolvePbOptions& o, const CommonOptions& opt, std::ostream& out, std::ostream& err) {
    SpatialField n;
    try {
        if (o.energy.has_value() == o.beta.has_value()) {
            err << "config error: give exactly one of --energy and --beta\n";
            return config_error;
        }
        n = density_from(read_snapshot(o.snapshot), o.field);
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::runtime_error& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    }
    try {
        double beta = 0.0;
        SpatialField phi;
        if (o.energy) {
            const auto s = solve_coupled(n, *o.energy);
            beta = s.beta;
            phi = s.phi;
        } else {
            beta = *o.beta;
        }
        // Newton history of the final Poisson-Boltzmann solve, from phi = 0
        const auto detailed = solve_pb_detailed(n, beta);
        if (!o.energy) phi = detailed.phi;
        double phimax = 0.0;
        for (double x : phi.values()) phimax = std::max(phimax, std::abs(x));
        out << "beta = " << format_number(beta) << '\n'
            << "max_abs_phi = " << format_number(phimax) << '\n'
            << "residual = " << format_number(pb_residual(n, beta, phi)) << '\n';
        if (!opt.output_dir.empty()) {
            fs::create_directories(opt.output_dir);
            Snapshot snap(n.grid());
            snap.add("n", n);
            snap.add("phi", phi);
            snap.add("beta", beta);
            write_snapshot(opt.output_dir / "solve_pb.bin", snap);
            auto f = open_out(opt.output_dir / "solve_pb_log.csv");
            CsvWriter log(f, {"iteration", "residual"});
            for (std::size_t k = 0; k < detailed.residuals.size(); ++k)
                log.row({static_cast<double>(k), detailed.residuals[k]});
        }
        return ok;
    } catch (const PreconditionError& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        err << "numerical abort: " << e.what() << '\n';
        return numerical_abort;
    }
}

}  // namespace vplk::cli
