#include "ftl/csvio.hpp"

#include "ftl/errors.hpp"
#include "ftl/numerics.hpp"
#include "ftl/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ftl {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingInput("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FtlError("cannot write " + path.string());
    out << body;
    if (!out) throw FtlError("write failed for " + path.string());
}

struct KeyValue {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

/// Flat key = value store with line tracking for error messages.
class KvFile {
public:
    KvFile(const std::string& text, std::string origin) : origin_(std::move(origin)) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    fail(lineno, "", "expected `key = value`");
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) fail(lineno, "", "missing key before '='");
            if (entries_.count(key)) fail(lineno, key, "duplicate key");
            entries_[key] = {value, lineno, false};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get_string(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) fail(0, key, "required field missing");
        it->second.used = true;
        return it->second.value;
    }

    std::string get_string_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? get_string(key) : fallback;
    }

    double get_double(const std::string& key) const {
        return parse_double(get_string(key), key, line_of(key));
    }

    double get_double_or(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    int get_int(const std::string& key) const {
        const std::string s = get_string(key);
        try {
            std::size_t pos = 0;
            const int v = std::stoi(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            fail(line_of(key), key, "not an integer: '" + s + "'");
        }
        return 0;
    }

    std::vector<double> get_array(const std::string& key) const {
        const std::string s = get_string(key);
        std::istringstream in(s);
        std::vector<double> out;
        std::string tok;
        while (in >> tok) out.push_back(parse_double(tok, key, line_of(key)));
        if (out.empty()) fail(line_of(key), key, "empty array");
        return out;
    }

    std::vector<int> get_int_array(const std::string& key) const {
        const auto vals = get_array(key);
        std::vector<int> out;
        for (double v : vals) {
            if (v != std::floor(v)) fail(line_of(key), key, "expected integers");
            out.push_back(static_cast<int>(v));
        }
        return out;
    }

    /// Array whose entries are numbers or the token `auto`.
    std::vector<std::optional<double>> get_opt_array(const std::string& key) const {
        const std::string s = get_string(key);
        std::istringstream in(s);
        std::vector<std::optional<double>> out;
        std::string tok;
        while (in >> tok) {
            if (tok == "auto")
                out.emplace_back();
            else
                out.emplace_back(parse_double(tok, key, line_of(key)));
        }
        if (out.empty()) fail(line_of(key), key, "empty array");
        return out;
    }

    [[noreturn]] void fail(int line, const std::string& field, const std::string& msg) const {
        std::ostringstream ss;
        ss << origin_;
        if (line > 0) ss << ":" << line;
        if (!field.empty()) ss << ": field '" << field << "'";
        ss << ": " << msg;
        throw ConfigError(ss.str());
    }

    void warn_unused() const {} // reserved; unknown keys are tolerated

private:
    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    int line_of(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    double parse_double(const std::string& s, const std::string& key, int line) const {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            fail(line, key, "not a number: '" + s + "'");
        }
        return 0.0;
    }

    std::string origin_;
    std::map<std::string, KeyValue> entries_;
};

void emit_array(std::ostringstream& out, const char* key, const std::vector<double>& v) {
    out << key << " =";
    for (double x : v) out << " " << fmt17(x);
    out << "\n";
}

void emit_profile(std::ostringstream& out, const char* prefix, const NonlinearityProfile& p) {
    if (p.kind() == NonlinearityProfile::Kind::PowerLaw) {
        out << prefix << "_kind = power_law\n";
        out << prefix << "_alpha = " << fmt17(p.alpha()) << "\n";
        out << prefix << "_rho_bar = " << fmt17(p.threshold()) << "\n";
    } else {
        out << prefix << "_kind = tabulated\n";
        emit_array(out, (std::string(prefix) + "_breakpoints").c_str(), p.breakpoints());
        emit_array(out, (std::string(prefix) + "_values").c_str(), p.values());
    }
}

NonlinearityProfile parse_profile(const KvFile& kv, const std::string& prefix,
                                  ProfileRole role) {
    const std::string kind = kv.get_string(prefix + "_kind");
    if (kind == "power_law")
        return NonlinearityProfile::power_law(kv.get_double(prefix + "_alpha"),
                                              kv.get_double(prefix + "_rho_bar"), role);
    if (kind == "tabulated")
        return NonlinearityProfile::tabulated(kv.get_array(prefix + "_breakpoints"),
                                              kv.get_array(prefix + "_values"), role);
    kv.fail(0, prefix + "_kind", "unknown kind '" + kind + "'");
}

void emit_drift(std::ostringstream& out, const DriftField& d) {
    switch (d.kind()) {
    case DriftField::Kind::Constant:
        out << "drift_kind = constant\n";
        out << "drift_value = " << fmt17(d.constant_value()) << "\n";
        break;
    case DriftField::Kind::SeparableProduct:
        out << "drift_kind = separable\n";
        emit_array(out, "drift_time_abscissas", d.time_profile().abscissas);
        emit_array(out, "drift_time_values", d.time_profile().values);
        emit_array(out, "drift_space_abscissas", d.space_profile().abscissas);
        emit_array(out, "drift_space_values", d.space_profile().values);
        break;
    case DriftField::Kind::Tabulated2D: {
        out << "drift_kind = tabulated2d\n";
        emit_array(out, "drift_times", d.grid_times());
        emit_array(out, "drift_xs", d.grid_xs());
        std::vector<double> flat;
        for (const auto& row : d.grid_values())
            flat.insert(flat.end(), row.begin(), row.end());
        emit_array(out, "drift_values", flat);
        break;
    }
    }
}

DriftField parse_drift(const KvFile& kv) {
    const std::string kind = kv.get_string("drift_kind");
    if (kind == "constant") return DriftField::constant(kv.get_double("drift_value"));
    if (kind == "separable")
        return DriftField::separable(
            {kv.get_array("drift_time_abscissas"), kv.get_array("drift_time_values")},
            {kv.get_array("drift_space_abscissas"), kv.get_array("drift_space_values")});
    if (kind == "tabulated2d") {
        const auto times = kv.get_array("drift_times");
        const auto xs = kv.get_array("drift_xs");
        const auto flat = kv.get_array("drift_values");
        if (flat.size() != times.size() * xs.size())
            kv.fail(0, "drift_values",
                    "expected " + std::to_string(times.size() * xs.size()) + " entries");
        std::vector<std::vector<double>> rows(times.size());
        for (std::size_t i = 0; i < times.size(); ++i)
            rows[i].assign(flat.begin() + static_cast<long>(i * xs.size()),
                           flat.begin() + static_cast<long>((i + 1) * xs.size()));
        return DriftField::tabulated2d(times, xs, std::move(rows));
    }
    kv.fail(0, "drift_kind", "unknown kind '" + kind + "'");
}

void emit_leader(std::ostringstream& out, const LeaderTrajectory& l) {
    if (l.kind() == LeaderTrajectory::Kind::ConstantSpeed) {
        out << "leader_kind = constant_speed\n";
        out << "leader_x0 = " << fmt17(l.x0()) << "\n";
        out << "leader_speed = " << fmt17(l.speed()) << "\n";
    } else {
        out << "leader_kind = tabulated\n";
        emit_array(out, "leader_times", l.table_times());
        emit_array(out, "leader_positions", l.table_positions());
    }
}

LeaderTrajectory parse_leader(const KvFile& kv) {
    const std::string kind = kv.get_string("leader_kind");
    if (kind == "constant_speed")
        return LeaderTrajectory::constant_speed(kv.get_double("leader_x0"),
                                                kv.get_double("leader_speed"));
    if (kind == "tabulated")
        return LeaderTrajectory::tabulated(kv.get_array("leader_times"),
                                           kv.get_array("leader_positions"));
    kv.fail(0, "leader_kind", "unknown kind '" + kind + "'");
}

} // namespace

std::string serialize_config(const ParticleSystemConfig& cfg) {
    std::ostringstream out;
    out << "n_particles = " << cfg.n_particles << "\n";
    out << "epsilon = " << fmt17(cfg.epsilon) << "\n";
    out << "gamma = " << fmt17(cfg.gamma) << "\n";
    out << "horizon = " << fmt17(cfg.horizon) << "\n";
    if (cfg.delta > 0.0)
        out << "delta = " << fmt17(cfg.delta) << "\n";
    else
        out << "delta = auto\n";
    out << "saturated_start = "
        << (cfg.saturated_start == SaturatedStart::QuasiSteady ? "quasi_steady" : "zero")
        << "\n";
    emit_profile(out, "theta", cfg.theta);
    emit_profile(out, "zeta", cfg.zeta);
    emit_drift(out, cfg.drift);
    emit_leader(out, cfg.leader);
    emit_array(out, "initial_positions", cfg.initial_positions);
    out << "initial_velocities =";
    for (const auto& v : cfg.initial_velocities)
        out << " " << (v ? fmt17(*v) : std::string("auto"));
    out << "\n";
    return out.str();
}

ParticleSystemConfig parse_config_text(const std::string& text, const std::string& origin) {
    const KvFile kv(text, origin);
    ParticleSystemConfig cfg;
    cfg.n_particles = kv.get_int("n_particles");
    cfg.epsilon = kv.get_double("epsilon");
    cfg.gamma = kv.get_double("gamma");
    cfg.horizon = kv.get_double("horizon");
    const std::string delta = kv.get_string_or("delta", "auto");
    cfg.delta = (delta == "auto") ? 0.0 : kv.get_double("delta");
    const std::string sat = kv.get_string_or("saturated_start", "quasi_steady");
    if (sat == "quasi_steady")
        cfg.saturated_start = SaturatedStart::QuasiSteady;
    else if (sat == "zero")
        cfg.saturated_start = SaturatedStart::Zero;
    else
        kv.fail(0, "saturated_start", "expected quasi_steady or zero");
    cfg.theta = parse_profile(kv, "theta", ProfileRole::Congestion);
    if (kv.get_string_or("zeta_kind", "") == "same_as_theta") {
        cfg.zeta = parse_profile(kv, "theta", ProfileRole::Alertness);
    } else {
        cfg.zeta = parse_profile(kv, "zeta", ProfileRole::Alertness);
    }
    cfg.drift = parse_drift(kv);
    cfg.leader = parse_leader(kv);
    cfg.initial_positions = kv.get_array("initial_positions");
    if (kv.has("initial_velocities"))
        cfg.initial_velocities = kv.get_opt_array("initial_velocities");
    return cfg;
}

ParticleSystemConfig load_config_file(const std::filesystem::path& path) {
    return parse_config_text(read_file(path), path.string());
}

std::string config_hash_hex(const ParticleSystemConfig& cfg) {
    const std::string canon = serialize_config(cfg);
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canon)));
    return buf;
}

std::string serialize_plan(const SweepPlan& plan) {
    std::ostringstream out;
    out << "sweep_n =";
    for (int n : plan.n_values) out << " " << n;
    out << "\n";
    switch (plan.eps_rule) {
    case EpsRule::Fixed:
        out << "eps_rule = fixed\neps_value = " << fmt17(plan.eps_value) << "\n";
        break;
    case EpsRule::OneOverN:
        out << "eps_rule = one_over_n\n";
        break;
    case EpsRule::PowerOverN:
        out << "eps_rule = power_over_n\neps_c = " << fmt17(plan.eps_c)
            << "\neps_p = " << fmt17(plan.eps_p) << "\n";
        break;
    }
    const char* rk = plan.rho0.kind == DensityProfile::Kind::Uniform  ? "uniform"
                     : plan.rho0.kind == DensityProfile::Kind::Cosine ? "cosine"
                                                                      : "bump";
    out << "rho0_kind = " << rk << "\n";
    out << "rho0_left = " << fmt17(plan.rho0.left) << "\n";
    out << "rho0_right = " << fmt17(plan.rho0.right) << "\n";
    switch (plan.v0_rule) {
    case V0Rule::WellPrepared: out << "v0_rule = well_prepared\n"; break;
    case V0Rule::Constant:
        out << "v0_rule = constant\nv0_value = " << fmt17(plan.v0_value) << "\n";
        break;
    case V0Rule::Zero: out << "v0_rule = zero\n"; break;
    }
    out << "gamma = " << fmt17(plan.gamma) << "\n";
    out << "horizon = " << fmt17(plan.horizon) << "\n";
    out << "grid = " << plan.grid_m << "\n";
    out << "tol = " << fmt17(plan.tol) << "\n";
    emit_profile(out, "theta", plan.theta);
    emit_drift(out, plan.drift);
    emit_leader(out, plan.leader);
    return out.str();
}

SweepPlan parse_plan_text(const std::string& text, const std::string& origin) {
    const KvFile kv(text, origin);
    SweepPlan plan;
    plan.n_values = kv.get_int_array("sweep_n");
    const std::string rule = kv.get_string("eps_rule");
    if (rule == "fixed") {
        plan.eps_rule = EpsRule::Fixed;
        plan.eps_value = kv.get_double("eps_value");
    } else if (rule == "one_over_n") {
        plan.eps_rule = EpsRule::OneOverN;
    } else if (rule == "power_over_n") {
        plan.eps_rule = EpsRule::PowerOverN;
        plan.eps_c = kv.get_double("eps_c");
        plan.eps_p = kv.get_double("eps_p");
    } else {
        kv.fail(0, "eps_rule", "expected fixed, one_over_n or power_over_n");
    }
    const std::string rk = kv.get_string("rho0_kind");
    if (rk == "uniform")
        plan.rho0.kind = DensityProfile::Kind::Uniform;
    else if (rk == "cosine")
        plan.rho0.kind = DensityProfile::Kind::Cosine;
    else if (rk == "bump")
        plan.rho0.kind = DensityProfile::Kind::Bump;
    else
        kv.fail(0, "rho0_kind", "expected uniform, cosine or bump");
    plan.rho0.left = kv.get_double("rho0_left");
    plan.rho0.right = kv.get_double("rho0_right");
    const std::string vr = kv.get_string_or("v0_rule", "well_prepared");
    if (vr == "well_prepared") {
        plan.v0_rule = V0Rule::WellPrepared;
    } else if (vr == "constant") {
        plan.v0_rule = V0Rule::Constant;
        plan.v0_value = kv.get_double("v0_value");
    } else if (vr == "zero") {
        plan.v0_rule = V0Rule::Zero;
    } else {
        kv.fail(0, "v0_rule", "expected well_prepared, constant or zero");
    }
    plan.gamma = kv.get_double("gamma");
    plan.horizon = kv.get_double("horizon");
    plan.grid_m = kv.get_int("grid");
    plan.tol = kv.get_double_or("tol", 1e-9);
    plan.theta = parse_profile(kv, "theta", ProfileRole::Congestion);
    plan.drift = parse_drift(kv);
    plan.leader = parse_leader(kv);
    return plan;
}

SweepPlan load_plan_file(const std::filesystem::path& path) {
    return parse_plan_text(read_file(path), path.string());
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectorySet& traj) {
    std::ostringstream out;
    out << "t,i,x,v\n";
    for (std::size_t k = 0; k < traj.samples(); ++k)
        for (int i = 0; i <= traj.n(); ++i) {
            const auto ui = static_cast<std::size_t>(i);
            out << fmt17(traj.times[k]) << "," << i << "," << fmt17(traj.positions[ui][k])
                << "," << fmt17(traj.velocities[ui][k]) << "\n";
        }
    write_file(path, out.str());
}

TrajectorySet read_trajectory_csv(const std::filesystem::path& path,
                                  const ValidatedConfig& config) {
    std::ifstream in(path);
    if (!in) throw MissingInput("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "t,i,x,v")
        throw MissingInput(path.string() + ": unexpected trajectory header");
    TrajectorySet traj;
    traj.config = config;
    const auto rows = static_cast<std::size_t>(config.n()) + 1;
    traj.positions.assign(rows, {});
    traj.velocities.assign(rows, {});
    double last_t = -1.0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        double vals[4];
        for (int c = 0; c < 4; ++c) {
            if (!std::getline(ls, tok, c == 3 ? '\n' : ','))
                throw MissingInput(path.string() + ": short row '" + line + "'");
            vals[c] = std::stod(tok);
        }
        const auto i = static_cast<std::size_t>(vals[1]);
        if (i >= rows) throw MissingInput(path.string() + ": particle index out of range");
        if (i == 0) {
            if (vals[0] <= last_t)
                throw MissingInput(path.string() + ": times must increase");
            traj.times.push_back(vals[0]);
            last_t = vals[0];
        }
        traj.positions[i].push_back(vals[2]);
        traj.velocities[i].push_back(vals[3]);
    }
    for (std::size_t i = 0; i < rows; ++i)
        if (traj.positions[i].size() != traj.times.size())
            throw MissingInput(path.string() + ": incomplete trajectory rows");
    return traj;
}

void write_field_csv(const std::filesystem::path& path, const PiecewiseField& field) {
    std::ostringstream out;
    out << (field.affine ? "t,cell_index,x_left,x_right,value,slope\n"
                         : "t,cell_index,x_left,x_right,value\n");
    for (std::size_t k = 0; k < field.times.size(); ++k)
        for (std::size_t i = 0; i < field.values[k].size(); ++i) {
            out << fmt17(field.times[k]) << "," << i << ","
                << fmt17(field.breakpoints[k][i]) << "," << fmt17(field.breakpoints[k][i + 1])
                << "," << fmt17(field.values[k][i]);
            if (field.affine) out << "," << fmt17(field.slopes[k][i]);
            out << "\n";
        }
    write_file(path, out.str());
}

void write_residuals_csv(const std::filesystem::path& path,
                         const std::vector<ResidualReportRow>& rows) {
    std::ostringstream out;
    out << "phi_id,N,eps,lhs_cont,R_over_N,gap_cont,lhs_mom,S_over_N,gap_mom,"
           "boundR_slack,boundS_slack\n";
    for (const auto& r : rows) {
        out << r.phi_id << "," << r.n << "," << fmt17(r.eps) << ","
            << fmt17(r.continuity.lhs) << "," << fmt17(r.continuity.remainder_over_n) << ","
            << fmt17(r.continuity.gap) << "," << fmt17(r.momentum.lhs) << ","
            << fmt17(r.momentum.remainder_over_n) << "," << fmt17(r.momentum.gap) << ","
            << fmt17(r.bound_R.slack) << "," << fmt17(r.bound_S.slack) << "\n";
    }
    write_file(path, out.str());
}

void write_residuals_long_csv(const std::filesystem::path& path,
                              const std::vector<ResidualReportRow>& rows) {
    std::ostringstream out;
    out << "phi_id,identity,N,eps,lhs,remainder_over_N,gap,quad_tol,bound_slack\n";
    for (const auto& r : rows) {
        out << r.phi_id << ",continuity," << r.n << "," << fmt17(r.eps) << ","
            << fmt17(r.continuity.lhs) << "," << fmt17(r.continuity.remainder_over_n) << ","
            << fmt17(r.continuity.gap) << "," << fmt17(r.continuity.quad_tol) << ","
            << fmt17(r.bound_R.slack) << "\n";
        out << r.phi_id << ",momentum," << r.n << "," << fmt17(r.eps) << ","
            << fmt17(r.momentum.lhs) << "," << fmt17(r.momentum.remainder_over_n) << ","
            << fmt17(r.momentum.gap) << "," << fmt17(r.momentum.quad_tol) << ","
            << fmt17(r.bound_S.slack) << "\n";
    }
    write_file(path, out.str());
}

void write_sweep_csv(const std::filesystem::path& path, const ConvergenceReport& report) {
    std::ostringstream out;
    out << (report.vanishing
                ? "N,eps,phi_id,pairing_rho,pairing_e1,pairing_e2,pairing_lambda,g_gap,"
                  "cauchy_diff\n"
                : "N,eps,phi_id,pairing_rho,pairing_e1,pairing_e2,pairing_lambda,"
                  "cauchy_diff\n");
    for (std::size_t j = 0; j < report.entries.size(); ++j) {
        const auto& e = report.entries[j];
        for (std::size_t p = 0; p < e.pairings.size(); ++p) {
            const auto& pr = e.pairings[p];
            out << e.n << "," << fmt17(e.eps) << "," << pr.phi_id << "," << fmt17(pr.rho)
                << "," << fmt17(pr.e1) << "," << fmt17(pr.e2) << "," << fmt17(pr.lambda);
            if (report.vanishing) out << "," << fmt17(pr.g_gap);
            if (j == 0)
                out << ",";
            else
                out << "," << fmt17(report.pairing_cauchy[j - 1][p]);
            out << "\n";
        }
    }
    write_file(path, out.str());
}

void write_sweep_summary(const std::filesystem::path& path, const ConvergenceReport& report,
                         const SweepPlan& plan) {
    std::ostringstream out;
    out << "sweep mode: " << (report.vanishing ? "vanishing-inertia" : "many-particle")
        << "\n";
    out << "catalog version: " << kPhiCatalogVersion << "\n";
    out << "N sequence:";
    for (const auto& e : report.entries) out << " " << e.n;
    out << "\n\nper-entry diagnostics\n";
    for (const auto& e : report.entries) {
        out << "  N=" << e.n << " eps=" << fmt17(e.eps) << " mass_error="
            << fmt17(e.mass_error) << " min_gap=" << fmt17(e.min_gap)
            << " bound_constant=" << fmt17(e.remainder_constant) << "\n";
    }
    out << "\nfitted log-log slopes vs N (ignoring values at the noise floor)\n";
    for (std::size_t p = 0; p < report.phi_ids.size(); ++p) {
        auto one = [&](const DecayFit& f) {
            return f.at_floor ? std::string("at-floor") : fmt17(f.slope);
        };
        out << "  " << report.phi_ids[p] << ": R/N " << one(report.fit_R[p]) << ", S/N "
            << one(report.fit_S[p]);
        if (report.vanishing) out << ", g " << one(report.fit_g[p]);
        out << "\n";
    }
    out << "\nendpoint trajectory Cauchy differences (consecutive N)\n";
    for (std::size_t j = 0; j < report.x0_cauchy.size(); ++j)
        out << "  " << report.entries[j].n << "->" << report.entries[j + 1].n << ": x0 "
            << fmt17(report.x0_cauchy[j]) << ", xN " << fmt17(report.xn_cauchy[j]) << "\n";
    out << "\nplan\n" << serialize_plan(plan);
    write_file(path, out.str());
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
    for (const auto& f : manifest.outputs)
        if (!std::filesystem::exists(dir / f))
            throw FtlError("manifest lists missing output " + f);
    nlohmann::json j;
    j["subcommand"] = manifest.subcommand;
    j["version"] = kVersion;
    j["config_hash"] = manifest.config_hash;
    j["tolerances"] = manifest.tolerances;
    j["wall_time_s"] = manifest.wall_time_s;
    j["invariants"] = manifest.invariants;
    j["outputs"] = manifest.outputs;
    j["notes"] = manifest.notes;
    const auto tmp = dir / (manifest.subcommand + ".manifest.json.tmp");
    const auto final_path = dir / (manifest.subcommand + ".manifest.json");
    write_file(tmp, j.dump(2) + "\n");
    std::filesystem::rename(tmp, final_path);
}

} // namespace ftl
