#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "vplk/errors.hpp"

int main(int argc, char** argv) {
    using namespace vplk::cli;

    CLI::App app{"vplk: Vlasov-Poisson-Landau solver and verification tool"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string config;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output-dir", common.output_dir, "Directory for outputs");
        sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
    };

    auto* sim = app.add_subcommand("simulate", "Run the configured driver");
    sim->add_option("--config", config, "Run configuration")->required();
    add_common(sim);

    auto* init = app.add_subcommand("init", "Write the initial state");
    init->add_option("--config", config, "Run configuration")->required();
    add_common(init);

    CorpusOptions corpus;
    auto add_corpus = [&](CLI::App* sub) {
        sub->add_option("--corpus", corpus.corpus, "default or mu");
        sub->add_option("--seed", corpus.seed, "Corpus seed");
        sub->add_option("--members", corpus.members, "Corpus size");
        sub->add_option("--n-v", corpus.n_v, "Velocity points per axis");
        sub->add_option("--v-max", corpus.v_max, "Velocity box half-width");
        sub->add_option("--dirs", corpus.sample_dirs, "Random directions per point");
        sub->add_option("--m", corpus.m, "Commutator weight exponent");
        sub->add_option("--r", corpus.r, "Commutator regularity");
        add_common(sub);
    };
    auto* vb = app.add_subcommand("verify-bounds", "Kernel sandwich bounds over a corpus");
    add_corpus(vb);
    auto* comm = app.add_subcommand("commutators", "Weighted commutator estimate over a corpus");
    add_corpus(comm);

    std::string field;
    std::string snapshot;
    vplk::NormParams np;
    auto* norms = app.add_subcommand("norms", "Norm report of a stored distribution");
    norms->add_option("--field", snapshot, "Snapshot file")->required();
    norms->add_option("--name", field, "Distribution field name (default plus)");
    norms->add_option("--s", np.s);
    norms->add_option("--r", np.r);
    norms->add_option("--m0", np.m0);
    norms->add_option("--m1", np.m1);
    norms->add_option("--m2", np.m2);

    SolvePbOptions pb;
    double energy = 0.0, beta = 0.0;
    auto* spb = app.add_subcommand("solve-pb", "Poisson-Boltzmann / coupled solve for a stored density");
    spb->add_option("--n", pb.snapshot, "Snapshot holding the density")->required();
    spb->add_option("--name", pb.field, "Density field name");
    auto* e_opt = spb->add_option("--energy", energy, "Total energy E; solve for beta");
    auto* b_opt = spb->add_option("--beta", beta, "Fixed inverse temperature");
    add_common(spb);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : config_error;
    }

    vplk::set_warning_handler([](const std::string& m) { std::cerr << "warning: " << m << '\n'; });
    if (*sim) return cmd_simulate(config, common, std::cout, std::cerr);
    if (*init) return cmd_init(config, common, std::cout, std::cerr);
    if (*vb) return cmd_verify_bounds(corpus, common, std::cout, std::cerr);
    if (*comm) return cmd_commutators(corpus, common, std::cout, std::cerr);
    if (*norms) return cmd_norms(snapshot, field, np, std::cout, std::cerr);
    if (*spb) {
        if (*e_opt) pb.energy = energy;
        if (*b_opt) pb.beta = beta;
        return cmd_solve_pb(pb, common, std::cout, std::cerr);
    }
    return config_error;
}
