#include "bifluid/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "bifluid/errors.hpp"

namespace bifluid {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const ConfigEntry& e, const std::string& why)
{
    std::ostringstream msg;
    msg << "line " << e.line << ": key '" << e.key << "': " << why << " (got '" << e.value << "')";
    throw ConfigError(msg.str());
}

double to_double(const ConfigEntry& e)
{
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) bad_value(e, "expected a number");
    return v;
}

int to_int(const ConfigEntry& e)
{
    int v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) bad_value(e, "expected an integer");
    return v;
}

Expression to_expr(const ConfigEntry& e)
{
    try {
        return Expression::parse(e.value);
    } catch (const ConfigError& err) {
        bad_value(e, err.what());
    }
}

using Setter = std::function<void(RunConfig&, const ConfigEntry&)>;

const std::vector<std::pair<std::string, Setter>>& setters()
{
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"grid.n_cells", [](RunConfig& c, const ConfigEntry& e) { c.n_cells = to_int(e); }},
        {"galerkin.n_modes", [](RunConfig& c, const ConfigEntry& e) { c.n_modes = to_int(e); }},
        {"transport.epsilon", [](RunConfig& c, const ConfigEntry& e) { c.transport.epsilon = to_double(e); }},
        {"transport.theta", [](RunConfig& c, const ConfigEntry& e) { c.transport.theta = to_double(e); }},
        {"time.dt", [](RunConfig& c, const ConfigEntry& e) { c.transport.dt = to_double(e); }},
        {"time.horizon", [](RunConfig& c, const ConfigEntry& e) { c.horizon = to_double(e); }},
        {"fluid.mu", [](RunConfig& c, const ConfigEntry& e) { c.fluid.mu = to_double(e); }},
        {"fluid.lambda", [](RunConfig& c, const ConfigEntry& e) { c.fluid.lambda = to_double(e); }},
        {"eos.a1", [](RunConfig& c, const ConfigEntry& e) { c.eos.a1 = to_double(e); }},
        {"eos.a2", [](RunConfig& c, const ConfigEntry& e) { c.eos.a2 = to_double(e); }},
        {"eos.gamma", [](RunConfig& c, const ConfigEntry& e) { c.eos.gamma = to_double(e); }},
        {"eos.beta", [](RunConfig& c, const ConfigEntry& e) { c.eos.beta = to_double(e); }},
        {"eos.b_low", [](RunConfig& c, const ConfigEntry& e) { c.eos.b_low = to_double(e); }},
        {"eos.b_high", [](RunConfig& c, const ConfigEntry& e) { c.eos.b_high = to_double(e); }},
        {"eos.helmholtz_base",
         [](RunConfig& c, const ConfigEntry& e) {
             try {
                 c.eos.base = parse_helmholtz_base(e.value);
             } catch (const ConfigError& err) {
                 bad_value(e, err.what());
             }
         }},
        {"bc.u_b", [](RunConfig& c, const ConfigEntry& e) { c.bc.u_b = to_expr(e); }},
        {"bc.r_b", [](RunConfig& c, const ConfigEntry& e) { c.bc.r_b = to_double(e); }},
        {"bc.z_b", [](RunConfig& c, const ConfigEntry& e) { c.bc.z_b = to_double(e); }},
        {"init.r0", [](RunConfig& c, const ConfigEntry& e) { c.init.r0 = to_expr(e); }},
        {"init.z0", [](RunConfig& c, const ConfigEntry& e) { c.init.z0 = to_expr(e); }},
        {"init.u0",
         [](RunConfig& c, const ConfigEntry& e) {
             c.init.u0 = to_expr(e);
             c.init.u0_given = true;
         }},
        {"picard.tol", [](RunConfig& c, const ConfigEntry& e) { c.picard_tol = to_double(e); }},
        {"picard.max", [](RunConfig& c, const ConfigEntry& e) { c.picard_max = to_int(e); }},
        {"picard.relaxation", [](RunConfig& c, const ConfigEntry& e) { c.picard_relaxation = to_double(e); }},
        {"output.every_n_steps", [](RunConfig& c, const ConfigEntry& e) { c.every_n_steps = to_int(e); }},
        {"output.dir", [](RunConfig& c, const ConfigEntry& e) { c.output_dir = e.value; }},
        {"reference.kind",
         [](RunConfig& c, const ConfigEntry& e) {
             if (e.value == "none") c.reference.kind = ReferenceKind::none;
             else if (e.value == "uniform_steady") c.reference.kind = ReferenceKind::uniform_steady;
             else if (e.value == "fine_grid") c.reference.kind = ReferenceKind::fine_grid;
             else bad_value(e, "expected none, uniform_steady or fine_grid");
         }},
        {"reference.refine", [](RunConfig& c, const ConfigEntry& e) { c.reference.refine = to_int(e); }},
        {"reference.r", [](RunConfig& c, const ConfigEntry& e) { c.reference.r = to_double(e); }},
        {"reference.z", [](RunConfig& c, const ConfigEntry& e) { c.reference.z = to_double(e); }},
        {"reference.u", [](RunConfig& c, const ConfigEntry& e) { c.reference.u = to_double(e); }},
        {"gronwall.c_max", [](RunConfig& c, const ConfigEntry& e) { c.gronwall_c_max = to_double(e); }},
    };
    return table;
}

std::string fmt(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

const char* reference_name(ReferenceKind k)
{
    switch (k) {
    case ReferenceKind::uniform_steady: return "uniform_steady";
    case ReferenceKind::fine_grid: return "fine_grid";
    case ReferenceKind::none: break;
    }
    return "none";
}

} // namespace

std::vector<ConfigEntry> read_entries(const std::string& text, const std::string& origin)
{
    std::vector<ConfigEntry> out;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(std::string_view(raw).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << origin << ": line " << line << ": expected 'key = value'";
            throw ConfigError(msg.str());
        }
        ConfigEntry e{trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)), line};
        if (e.key.empty() || e.value.empty()) {
            std::ostringstream msg;
            msg << origin << ": line " << line << ": empty key or value";
            throw ConfigError(msg.str());
        }
        out.push_back(std::move(e));
    }
    return out;
}

void apply_entry(RunConfig& cfg, const ConfigEntry& e)
{
    for (const auto& [key, set] : setters())
        if (key == e.key) {
            set(cfg, e);
            return;
        }
    std::ostringstream msg;
    msg << "line " << e.line << ": unknown key '" << e.key << "'";
    throw ConfigError(msg.str());
}

RunConfig build_config(const std::vector<ConfigEntry>& entries, const std::string& origin)
{
    RunConfig cfg;
    std::map<std::string, int> seen;
    for (const auto& e : entries) {
        if (auto [it, fresh] = seen.emplace(e.key, e.line); !fresh) {
            std::ostringstream msg;
            msg << origin << ": line " << e.line << ": key '" << e.key << "' already set on line " << it->second;
            throw ConfigError(msg.str());
        }
        try {
            apply_entry(cfg, e);
        } catch (const ConfigError& err) {
            throw ConfigError(origin + ": " + err.what());
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin)
{
    return build_config(read_entries(text, origin), origin);
}

RunConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [key, set] : setters()) k.push_back(key);
        return k;
    }();
    return keys;
}

std::string dump_config(const RunConfig& c)
{
    std::ostringstream o;
    o << "grid.n_cells = " << c.n_cells << '\n'
      << "galerkin.n_modes = " << c.n_modes << '\n'
      << "transport.epsilon = " << fmt(c.transport.epsilon) << '\n'
      << "transport.theta = " << fmt(c.transport.theta) << '\n'
      << "time.dt = " << fmt(c.transport.dt) << '\n'
      << "time.horizon = " << fmt(c.horizon) << '\n'
      << "fluid.mu = " << fmt(c.fluid.mu) << '\n'
      << "fluid.lambda = " << fmt(c.fluid.lambda) << '\n'
      << "eos.a1 = " << fmt(c.eos.a1) << '\n'
      << "eos.a2 = " << fmt(c.eos.a2) << '\n'
      << "eos.gamma = " << fmt(c.eos.gamma) << '\n'
      << "eos.beta = " << fmt(c.eos.beta) << '\n'
      << "eos.b_low = " << fmt(c.eos.b_low) << '\n'
      << "eos.b_high = " << fmt(c.eos.b_high) << '\n'
      << "eos.helmholtz_base = " << to_string(c.eos.base) << '\n'
      << "bc.u_b = " << c.bc.u_b.source() << '\n'
      << "bc.r_b = " << fmt(c.bc.r_b) << '\n'
      << "bc.z_b = " << fmt(c.bc.z_b) << '\n'
      << "init.r0 = " << c.init.r0.source() << '\n'
      << "init.z0 = " << c.init.z0.source() << '\n';
    if (c.init.u0_given) o << "init.u0 = " << c.init.u0.source() << '\n';
    o << "picard.tol = " << fmt(c.picard_tol) << '\n'
      << "picard.max = " << c.picard_max << '\n'
      << "picard.relaxation = " << fmt(c.picard_relaxation) << '\n'
      << "output.every_n_steps = " << c.every_n_steps << '\n'
      << "output.dir = " << c.output_dir << '\n'
      << "reference.kind = " << reference_name(c.reference.kind) << '\n'
      << "reference.refine = " << c.reference.refine << '\n'
      << "reference.r = " << fmt(c.reference.r) << '\n'
      << "reference.z = " << fmt(c.reference.z) << '\n'
      << "reference.u = " << fmt(c.reference.u) << '\n'
      << "gronwall.c_max = " << fmt(c.gronwall_c_max) << '\n';
    return o.str();
}

} // namespace bifluid
