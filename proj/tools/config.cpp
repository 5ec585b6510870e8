#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "vplk/errors.hpp"
#include "vplk/snapshot.hpp"

namespace vplk::cli {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Reader {
public:
    Reader(std::istream& in, std::string source) : source_(std::move(source)) {
        std::string line, section;
        int ln = 0;
        while (std::getline(in, line)) {
            ++ln;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(ln, "unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (!known_section(section)) fail(ln, "unknown section [" + section + "]");
                sections_[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(ln, "expected 'key = value'");
            if (section.empty()) fail(ln, "key outside of any section");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty()) fail(ln, "empty key");
            auto& sec = sections_[section];
            if (sec.count(key)) fail(ln, "duplicate key '" + key + "' in [" + section + "]");
            sec[key] = {trim(line.substr(eq + 1)), ln, false};
        }
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        std::ostringstream os;
        os << source_ << ':' << line << ": " << msg;
        throw ConfigError(os.str());
    }
    [[noreturn]] void fail_at(const std::string& sec, const std::string& key, const std::string& msg) const {
        const Entry* e = find(sec, key);
        if (e) fail(e->line, msg);
        throw ConfigError(source_ + ": " + msg);
    }

    const Entry* find(const std::string& sec, const std::string& key) const {
        const auto s = sections_.find(sec);
        if (s == sections_.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    Entry* take(const std::string& sec, const std::string& key) {
        auto s = sections_.find(sec);
        if (s == sections_.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    void get(const std::string& sec, const std::string& key, double& out) {
        if (auto* e = take(sec, key)) out = to_double(*e, key);
    }
    void get(const std::string& sec, const std::string& key, int& out) {
        if (auto* e = take(sec, key)) out = to_int(*e, key);
    }
    void get(const std::string& sec, const std::string& key, std::string& out) {
        if (auto* e = take(sec, key)) out = e->value;
    }
    void get(const std::string& sec, const std::string& key, std::optional<double>& out) {
        if (auto* e = take(sec, key)) {
            if (e->value == "auto")
                out.reset();
            else
                out = to_double(*e, key);
        }
    }
    void get(const std::string& sec, const std::string& key, bool& out) {
        if (auto* e = take(sec, key)) {
            if (e->value == "true")
                out = true;
            else if (e->value == "false")
                out = false;
            else
                fail(e->line, "'" + key + "' expects true or false");
        }
    }
    void get(const std::string& sec, const std::string& key, Vec3& out) {
        if (auto* e = take(sec, key)) {
            std::stringstream ss(e->value);
            std::string part;
            int i = 0;
            while (std::getline(ss, part, ',')) {
                if (i == 3) fail(e->line, "'" + key + "' expects three comma-separated numbers");
                Entry tmp{trim(part), e->line, true};
                out[i++] = to_double(tmp, key);
            }
            if (i != 3) fail(e->line, "'" + key + "' expects three comma-separated numbers");
        }
    }

    // Keys of a section, in order.
    std::vector<std::string> keys(const std::string& sec) const {
        std::vector<std::string> k;
        const auto s = sections_.find(sec);
        if (s != sections_.end())
            for (const auto& [key, e] : s->second) k.push_back(key);
        return k;
    }

    void check_all_used() const {
        for (const auto& [sec, keys] : sections_)
            for (const auto& [key, e] : keys)
                if (!e.used) fail(e.line, "unknown key '" + key + "' in [" + sec + "]");
    }

    int line_of(const std::string& sec, const std::string& key) const {
        const Entry* e = find(sec, key);
        return e ? e->line : 0;
    }
    const std::string& source() const { return source_; }

private:
    static bool known_section(const std::string& s) {
        static const char* names[] = {"grid",    "norm",          "step",          "picard",   "run",
                                      "species.plus", "species.minus", "massless", "output", "ceilings"};
        for (const char* n : names)
            if (s == n) return true;
        return false;
    }

    double to_double(const Entry& e, const std::string& key) const {
        const std::string& v = e.value;
        if (v == "inf") return std::numeric_limits<double>::infinity();
        double x = 0.0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size()) fail(e.line, "'" + key + "' expects a number, got '" + v + "'");
        return x;
    }
    int to_int(const Entry& e, const std::string& key) const {
        const std::string& v = e.value;
        int x = 0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size()) fail(e.line, "'" + key + "' expects an integer, got '" + v + "'");
        return x;
    }

    std::string source_;
    std::map<std::string, Section> sections_;
};

std::vector<MaxwellianComponent> read_species(Reader& r, const std::string& sec) {
    std::map<int, MaxwellianComponent> comps;
    for (const auto& key : r.keys(sec)) {
        if (key.size() < 3 || key[0] != 'c') r.fail(r.line_of(sec, key), "unknown key '" + key + "' in [" + sec + "]");
        const auto dot = key.find('.');
        if (dot == std::string::npos) r.fail(r.line_of(sec, key), "species keys have the form c<k>.<field>");
        int idx = -1;
        const auto res = std::from_chars(key.data() + 1, key.data() + dot, idx);
        if (res.ec != std::errc() || res.ptr != key.data() + dot || idx < 0)
            r.fail(r.line_of(sec, key), "bad component index in '" + key + "'");
        comps[idx];
    }
    std::vector<MaxwellianComponent> out;
    int expect = 0;
    for (auto& [idx, c] : comps) {
        const std::string p = "c" + std::to_string(idx) + ".";
        if (idx != expect++) r.fail_at(sec, p + "density", "components must be numbered c0, c1, ... without gaps");
        r.get(sec, p + "density", c.density);
        r.get(sec, p + "amplitude", c.amplitude);
        r.get(sec, p + "mode", c.mode);
        r.get(sec, p + "mean", c.mean);
        r.get(sec, p + "temperature", c.temperature);
        r.get(sec, p + "drift_amplitude", c.drift_amplitude);
        if (!(c.density > 0.0)) r.fail_at(sec, p + "density", "density must be positive");
        if (!(c.temperature > 0.0)) r.fail_at(sec, p + "temperature", "temperature must be positive");
        if (c.mode < 0) r.fail_at(sec, p + "mode", "mode must be >= 0");
        out.push_back(c);
    }
    return out;
}

template <class F>
void checked(Reader& r, const std::string& sec, const std::string& key, F&& f) {
    try {
        f();
    } catch (const PreconditionError& e) {
        r.fail_at(sec, key, e.what());
    }
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
    return dim_x == o.dim_x && n_x == o.n_x && n_v == o.n_v && v_max == o.v_max && norm == o.norm && step == o.step &&
           picard == o.picard && variant == o.variant && mode == o.mode && horizon == o.horizon &&
           initial == o.initial && energy0 == o.energy0 && output_dir == o.output_dir &&
           snapshot_every == o.snapshot_every && log_every == o.log_every && ceiling_factor == o.ceiling_factor &&
           e_norm_ceiling == o.e_norm_ceiling && inv_density_ceiling == o.inv_density_ceiling &&
           ln_beta_ceiling == o.ln_beta_ceiling && guard_factor == o.guard_factor;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
    Reader r(in, source);
    RunConfig c;

    r.get("grid", "dim_x", c.dim_x);
    r.get("grid", "n_x", c.n_x);
    r.get("grid", "n_v", c.n_v);
    r.get("grid", "v_max", c.v_max);
    checked(r, "grid", "n_v", [&] { make_grid(c.dim_x, c.n_x, c.n_v, c.v_max); });

    r.get("norm", "s", c.norm.s);
    r.get("norm", "r", c.norm.r);
    r.get("norm", "m0", c.norm.m0);
    r.get("norm", "m1", c.norm.m1);
    r.get("norm", "m2", c.norm.m2);
    checked(r, "norm", "s", [&] { c.norm.validate(); });

    std::string scheme = to_string(c.step.transport_scheme), mode = to_string(c.step.collision_mode);
    r.get("step", "dt", c.step.dt);
    r.get("step", "lambda", c.step.lambda);
    r.get("step", "transport_scheme", scheme);
    r.get("step", "collision_mode", mode);
    r.get("step", "cfl_safety", c.step.cfl_safety);
    r.get("step", "cg_tol", c.step.cg_tol);
    r.get("step", "cg_max_iter", c.step.cg_max_iter);
    checked(r, "step", "transport_scheme", [&] { c.step.transport_scheme = parse_transport_scheme(scheme); });
    checked(r, "step", "collision_mode", [&] { c.step.collision_mode = parse_collision_mode(mode); });
    checked(r, "step", "dt", [&] { c.step.validate(); });

    r.get("picard", "max_iter", c.picard.max_iter);
    r.get("picard", "tol_e_prime", c.picard.tol_e_prime);
    r.get("picard", "checkpoints", c.picard.checkpoints);
    r.get("picard", "require_convergence", c.picard.require_convergence);

    std::string variant = to_string(c.variant), run_mode = c.mode == RunMode::step ? "step" : "picard";
    r.get("run", "variant", variant);
    r.get("run", "mode", run_mode);
    r.get("run", "horizon", c.horizon);
    checked(r, "run", "variant", [&] { c.variant = parse_variant(variant); });
    if (run_mode == "step")
        c.mode = RunMode::step;
    else if (run_mode == "picard")
        c.mode = RunMode::picard;
    else
        r.fail_at("run", "mode", "mode must be step or picard");
    if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) r.fail_at("run", "horizon", "horizon must be positive");
    c.picard.horizon = c.horizon;
    c.picard.norm = c.norm;
    checked(r, "picard", "max_iter", [&] { c.picard.validate(); });
    if (c.mode == RunMode::picard && c.variant == Variant::massless)
        r.fail_at("run", "mode", "picard mode supports two_species and landau_homogeneous only");

    c.initial.plus = read_species(r, "species.plus");
    c.initial.minus = read_species(r, "species.minus");
    if (c.initial.plus.empty()) c.initial.plus.push_back({});
    if (c.variant == Variant::two_species && c.initial.minus.empty()) c.initial.minus.push_back({});
    if (c.variant != Variant::two_species && !c.initial.minus.empty())
        r.fail_at("species.minus", "c0.density", "[species.minus] is only used by the two_species variant");
    if (c.variant == Variant::landau_homogeneous)
        for (const auto& comp : c.initial.plus)
            if (comp.amplitude != 0.0 || comp.drift_amplitude != 0.0)
                r.fail_at("species.plus", "c0.amplitude", "landau_homogeneous requires x-independent data");

    r.get("massless", "beta_in", c.initial.beta_in);
    r.get("massless", "energy0", c.energy0);
    if (!(c.initial.beta_in > 0.0)) r.fail_at("massless", "beta_in", "beta_in must be positive");

    r.get("output", "dir", c.output_dir);
    r.get("output", "snapshot_every", c.snapshot_every);
    r.get("output", "log_every", c.log_every);
    if (c.snapshot_every < 0) r.fail_at("output", "snapshot_every", "snapshot_every must be >= 0");
    if (c.log_every <= 0) r.fail_at("output", "log_every", "log_every must be positive");

    r.get("ceilings", "factor", c.ceiling_factor);
    r.get("ceilings", "e_norm", c.e_norm_ceiling);
    r.get("ceilings", "inv_density", c.inv_density_ceiling);
    r.get("ceilings", "ln_beta", c.ln_beta_ceiling);
    r.get("ceilings", "guard_factor", c.guard_factor);
    if (!(c.ceiling_factor > 1.0)) r.fail_at("ceilings", "factor", "factor must exceed 1");
    if (!(c.guard_factor > 1.0)) r.fail_at("ceilings", "guard_factor", "guard_factor must exceed 1");

    // x-part of the CFL bound; the force part needs the initial field.
    if (c.step.collision_mode == CollisionMode::explicit_euler && c.variant != Variant::landau_homogeneous) {
        const double lim = c.step.cfl_safety / (c.n_x * c.v_max);
        if (c.step.dt > lim) {
            std::ostringstream os;
            os << "dt = " << c.step.dt << " violates the CFL bound cfl_safety * dx / v_max = " << lim;
            r.fail_at("step", "dt", os.str());
        }
    }

    r.check_all_used();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in, path.string());
}

std::string to_ini(const RunConfig& c) {
    std::ostringstream os;
    auto num = [](double x) { return format_number(x); };
    auto opt = [&](const std::optional<double>& x) { return x ? num(*x) : std::string("auto"); };
    os << "# effective configuration\n";
    os << "[grid]\n"
       << "dim_x = " << c.dim_x << "\nn_x = " << c.n_x << "\nn_v = " << c.n_v << "\nv_max = " << num(c.v_max) << "\n\n";
    os << "[norm]\n"
       << "s = " << num(c.norm.s) << "\nr = " << num(c.norm.r) << "\nm0 = " << num(c.norm.m0) << "\nm1 = "
       << num(c.norm.m1) << "\nm2 = " << num(c.norm.m2) << "\n\n";
    os << "[step]\n"
       << "dt = " << num(c.step.dt) << "\nlambda = " << num(c.step.lambda)
       << "\ntransport_scheme = " << to_string(c.step.transport_scheme)
       << "\ncollision_mode = " << to_string(c.step.collision_mode) << "\ncfl_safety = " << num(c.step.cfl_safety)
       << "\ncg_tol = " << num(c.step.cg_tol) << "\ncg_max_iter = " << c.step.cg_max_iter << "\n\n";
    os << "[picard]\n"
       << "max_iter = " << c.picard.max_iter << "\ntol_e_prime = " << num(c.picard.tol_e_prime)
       << "\ncheckpoints = " << c.picard.checkpoints
       << "\nrequire_convergence = " << (c.picard.require_convergence ? "true" : "false") << "\n\n";
    os << "[run]\n"
       << "variant = " << to_string(c.variant) << "\nmode = " << (c.mode == RunMode::step ? "step" : "picard")
       << "\nhorizon = " << num(c.horizon) << "\n\n";
    auto species = [&](const char* name, const std::vector<MaxwellianComponent>& comps) {
        if (comps.empty()) return;
        os << "[species." << name << "]\n";
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const auto& m = comps[i];
            const std::string p = "c" + std::to_string(i) + ".";
            os << p << "density = " << num(m.density) << '\n'
               << p << "amplitude = " << num(m.amplitude) << '\n'
               << p << "mode = " << m.mode << '\n'
               << p << "mean = " << num(m.mean[0]) << ", " << num(m.mean[1]) << ", " << num(m.mean[2]) << '\n'
               << p << "temperature = " << num(m.temperature) << '\n'
               << p << "drift_amplitude = " << num(m.drift_amplitude) << '\n';
        }
        os << '\n';
    };
    species("plus", c.initial.plus);
    species("minus", c.initial.minus);
    os << "[massless]\n"
       << "beta_in = " << num(c.initial.beta_in) << "\nenergy0 = " << opt(c.energy0) << "\n\n";
    os << "[output]\n"
       << "dir = " << c.output_dir << "\nsnapshot_every = " << c.snapshot_every << "\nlog_every = " << c.log_every
       << "\n\n";
    os << "[ceilings]\n"
       << "factor = " << num(c.ceiling_factor) << "\ne_norm = " << opt(c.e_norm_ceiling)
       << "\ninv_density = " << opt(c.inv_density_ceiling) << "\nln_beta = " << opt(c.ln_beta_ceiling)
       << "\nguard_factor = " << num(c.guard_factor) << '\n';
    return os.str();
}

}  // namespace vplk::cli
