#include "bifluid/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "bifluid/config.hpp"
#include "bifluid/errors.hpp"
#include "bifluid/reference.hpp"

namespace bifluid {

namespace {

using nlohmann::json;

json finite_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json extremum_json(const ExtremumReport& r)
{
    json j = {{"M", r.M},
              {"m", r.m},
              {"div_sup", r.div_sup},
              {"tol", r.tol},
              {"upper_bound", finite_or_null(r.upper_bound)},
              {"lower_bound", r.lower_bound},
              {"observed_max", r.observed_max},
              {"observed_min", r.observed_min},
              {"pass", r.ok()},
              {"needs_ub_term", r.needs_ub_term},
              {"first_violation", nullptr}};
    if (r.first_violation)
        j["first_violation"] = {{"t", r.first_violation->t},
                                {"x", r.first_violation->x},
                                {"value", r.first_violation->value},
                                {"bound", r.first_violation->upper ? "upper" : "lower"}};
    return j;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace(std::ostream& out, const Trajectory& traj)
{
    out << trace_version << '\n'
        << "t,mass_R,mass_Z,kinetic,helmholtz,dissipation_cum,residual_E7,min_R,max_R,min_Z,max_Z,"
           "cone_margin_low,cone_margin_high,picard_iters,rel_energy,residual_E7_aux\n";
    for (const auto& r : traj.records) {
        for (double v : {r.t, r.mass_R, r.mass_Z, r.kinetic, r.helmholtz, r.dissipation_cum, r.residual_E7, r.min_R,
                         r.max_R, r.min_Z, r.max_Z, r.cone_margin_low, r.cone_margin_high})
            out << format_double(v) << ',';
        out << r.picard_iters << ',';
        if (std::isfinite(r.rel_energy)) out << format_double(r.rel_energy);
        out << ',' << format_double(r.residual_E7_aux) << '\n';
    }
}

void write_snapshots(std::ostream& out, const std::vector<NodalSnapshot>& snaps)
{
    out << "t,x,R,Z,u\n";
    for (const auto& s : snaps) {
        const auto n = s.R.size();
        const double h = 1.0 / static_cast<double>(n);
        for (Eigen::Index j = 0; j < n; ++j)
            out << format_double(s.t) << ',' << format_double((static_cast<double>(j) + 0.5) * h) << ','
                << format_double(s.R(j)) << ',' << format_double(s.Z(j)) << ',' << format_double(s.u(j)) << '\n';
    }
}

std::vector<NodalSnapshot> read_snapshots(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,R,Z,u", 0) != 0)
        throw ConfigError("snapshots file: missing 't,x,R,Z,u' header");
    std::vector<NodalSnapshot> out;
    std::vector<std::array<double, 3>> rows;
    double current = NAN;
    auto flush = [&] {
        if (rows.empty()) return;
        NodalSnapshot s;
        s.t = current;
        const auto n = static_cast<Eigen::Index>(rows.size());
        s.R.resize(n);
        s.Z.resize(n);
        s.u.resize(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            s.R(j) = rows[j][0];
            s.Z(j) = rows[j][1];
            s.u(j) = rows[j][2];
        }
        out.push_back(std::move(s));
        rows.clear();
    };
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double v[5];
        std::istringstream ls(line);
        std::string cell;
        for (double& x : v) {
            if (!std::getline(ls, cell, ',')) throw ConfigError("snapshots file: short row at line " + std::to_string(lineno));
            x = std::strtod(cell.c_str(), nullptr);
        }
        if (!rows.empty() && v[0] != current) flush();
        current = v[0];
        rows.push_back({v[2], v[3], v[4]});
    }
    flush();
    return out;
}

json defect_summary(const std::vector<NodalSnapshot>& snaps, const EosParams& eos, int extra_k)
{
    const ConvexityReport conv = sample_convexity(eos, 1000);
    json out = json::object();
    if (snaps.empty()) return out;
    const auto n = static_cast<int>(snaps.front().R.size());
    std::vector<int> ks = {2, 4, 8};
    if (extra_k > 0 && extra_k != 2 && extra_k != 4 && extra_k != 8) ks.push_back(extra_k);
    for (int k : ks) {
        if (n % k != 0) continue;
        DefectProxy agg;
        agg.factor = k;
        agg.min_delta_p = agg.min_delta_h = agg.min_delta_kinetic = INFINITY;
        agg.max_delta_p = agg.max_delta_h = agg.max_delta_kinetic = -INFINITY;
        for (const auto& s : snaps) {
            const DefectProxy d = defect_proxy(s, k, eos, conv.a_low, conv.a_high);
            agg.blocks = d.blocks;
            agg.min_delta_p = std::min(agg.min_delta_p, d.min_delta_p);
            agg.max_delta_p = std::max(agg.max_delta_p, d.max_delta_p);
            agg.min_delta_h = std::min(agg.min_delta_h, d.min_delta_h);
            agg.max_delta_h = std::max(agg.max_delta_h, d.max_delta_h);
            agg.min_delta_kinetic = std::min(agg.min_delta_kinetic, d.min_delta_kinetic);
            agg.max_delta_kinetic = std::max(agg.max_delta_kinetic, d.max_delta_kinetic);
            agg.sandwich_low_violation = std::max(agg.sandwich_low_violation, d.sandwich_low_violation);
            agg.sandwich_high_violation = std::max(agg.sandwich_high_violation, d.sandwich_high_violation);
            agg.trace_ratio_low = std::min(agg.trace_ratio_low, d.trace_ratio_low);
            agg.trace_ratio_high = std::max(agg.trace_ratio_high, d.trace_ratio_high);
            agg.trace_low_violation = std::max(agg.trace_low_violation, d.trace_low_violation);
            agg.trace_high_violation = std::max(agg.trace_high_violation, d.trace_high_violation);
            agg.trace_high_violation_kinetic = std::max(agg.trace_high_violation_kinetic, d.trace_high_violation_kinetic);
            agg.jensen_violations += d.jensen_violations;
        }
        out[std::to_string(k)] = {
            {"blocks", agg.blocks},
            {"min_delta_p", agg.min_delta_p},
            {"max_delta_p", agg.max_delta_p},
            {"min_delta_h", agg.min_delta_h},
            {"max_delta_h", agg.max_delta_h},
            {"min_delta_kinetic", agg.min_delta_kinetic},
            {"max_delta_kinetic", agg.max_delta_kinetic},
            {"sandwich_low_violation", finite_or_null(agg.sandwich_low_violation)},
            {"sandwich_high_violation", finite_or_null(agg.sandwich_high_violation)},
            {"trace_ratio_low", finite_or_null(agg.trace_ratio_low)},
            {"trace_ratio_high", finite_or_null(agg.trace_ratio_high)},
            {"trace_low_violation", finite_or_null(agg.trace_low_violation)},
            {"trace_high_violation", finite_or_null(agg.trace_high_violation)},
            {"trace_high_violation_kinetic", finite_or_null(agg.trace_high_violation_kinetic)},
            {"jensen_violations", agg.jensen_violations},
        };
    }
    return out;
}

json summary_json(const Trajectory& traj)
{
    const auto& recs = traj.records;
    double max_res = -INFINITY, max_aux = -INFINITY, max_mass = 0.0, min_low = INFINITY, min_high = INFINITY;
    int max_iters = 0;
    long total_iters = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        min_low = std::min(min_low, r.cone_margin_low);
        min_high = std::min(min_high, r.cone_margin_high);
        if (i == 0) continue;
        max_res = std::max(max_res, r.residual_E7);
        max_aux = std::max(max_aux, r.residual_E7_aux);
        max_mass = std::max({max_mass, r.mass_residual_R, r.mass_residual_Z});
        max_iters = std::max(max_iters, r.picard_iters);
        total_iters += r.picard_iters;
    }
    const auto& last = recs.back();
    json j = {
        {"format", summary_format},
        {"status", "ok"},
        {"exit_code", 0},
        {"n_cells", traj.cfg.n_cells},
        {"n_modes", traj.cfg.n_modes},
        {"dt", traj.cfg.dt()},
        {"n_steps", static_cast<long>(recs.size()) - 1},
        {"final", {{"t", last.t}, {"kinetic", last.kinetic}, {"helmholtz", last.helmholtz}, {"mass_R", last.mass_R}, {"mass_Z", last.mass_Z}}},
        {"max_residual_E7", finite_or_null(max_res)},
        {"max_residual_E7_aux", finite_or_null(max_aux)},
        {"max_mass_residual", max_mass},
        {"max_picard_iters", max_iters},
        {"total_picard_iters", total_iters},
        {"min_cone_margin_low", min_low},
        {"min_cone_margin_high", min_high},
        {"extremum", {{"R", extremum_json(traj.extremum_R)}, {"Z", extremum_json(traj.extremum_Z)}}},
        {"gronwall", nullptr},
        {"defect_proxy", defect_summary(traj.snapshots, traj.cfg.eos)},
    };
    if (traj.has_reference) {
        double rel_max = 0.0;
        for (const auto& r : recs) rel_max = std::max(rel_max, r.rel_energy);
        j["gronwall"] = {{"c_fit", traj.gronwall.c_fit},
                         {"c_max", traj.cfg.gronwall_c_max},
                         {"pass", traj.gronwall.pass},
                         {"identical_start", traj.gronwall.identical_start},
                         {"rel_energy_0", recs.front().rel_energy},
                         {"rel_energy_max", rel_max}};
    }
    return j;
}

void write_run_outputs(const Trajectory& traj, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "trace.csv");
        write_trace(out, traj);
    }
    {
        std::ofstream out(dir / "summary.json");
        out << summary_json(traj).dump(2) << '\n';
    }
    {
        std::ofstream out(dir / "snapshots.csv");
        write_snapshots(out, traj.snapshots);
    }
    std::ofstream out(dir / "config.txt");
    out << dump_config(traj.cfg);
}

json compare_runs(const std::filesystem::path& coarse_dir, const std::filesystem::path& fine_dir)
{
    const RunConfig coarse_cfg = parse_config_text(read_file(coarse_dir / "config.txt"), (coarse_dir / "config.txt").string());
    std::ifstream cin(coarse_dir / "snapshots.csv"), fin(fine_dir / "snapshots.csv");
    if (!cin || !fin) throw ConfigError("compare: both directories must contain snapshots.csv");
    const auto coarse = read_snapshots(cin);
    const auto fine = read_snapshots(fin);
    if (coarse.empty() || fine.empty()) throw ConfigError("compare: empty snapshots file");
    const auto n = static_cast<int>(coarse.front().R.size());
    const auto nf = static_cast<int>(fine.front().R.size());
    if (nf % n != 0) throw ConfigError("compare: fine cell count is not a multiple of the coarse cell count");

    const Grid1D grid(n);
    const ReferenceProvider ref = trajectory_reference(fine);
    std::vector<RelEnergyRecord> series;
    json rows = json::array();
    for (const auto& s : coarse) {
        NodalSnapshot r;
        try {
            r = ref(s.t, grid);
        } catch (const DomainError&) {
            continue;
        }
        const double value = relative_energy(grid, s, r, coarse_cfg.eos);
        series.push_back({s.t, value, 0.0});
    }
    if (series.empty()) throw ConfigError("compare: the runs share no snapshot times");
    const GronwallFit fit = gronwall_check(series, coarse_cfg.gronwall_c_max);
    for (const auto& r : series) rows.push_back({{"t", r.t}, {"rel_energy", r.value}, {"gronwall_bound", r.gronwall_bound}});
    return {{"format", "bifluid-compare/1"},
            {"coarse_cells", n},
            {"fine_cells", nf},
            {"rel_energy", rows},
            {"gronwall", {{"c_fit", fit.c_fit}, {"c_max", coarse_cfg.gronwall_c_max}, {"pass", fit.pass}, {"identical_start", fit.identical_start}}},
            {"defect_proxy", defect_summary(fine, coarse_cfg.eos, nf / n)}};
}

} // namespace bifluid
