#include "ccrlink/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ccrlink::cli {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw config_error("cannot parse '" + v + "' as a number", line);
    }
}

std::uint64_t parse_u64(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing characters");
        return u;
    } catch (const std::exception&) {
        throw config_error("cannot parse '" + v + "' as an unsigned integer", line);
    }
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = v.find(',', start);
        const std::string item =
            trim(comma == std::string::npos ? v.substr(start) : v.substr(start, comma - start));
        if (item.empty())
            throw config_error("empty entry in value list", line);
        out.push_back(parse_double(item, line));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

struct Entry {
    std::string value;
    int line;
};

using Section = std::map<std::string, Entry>;

struct RawConfig {
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;
};

RawConfig read_raw(std::istream& in) {
    RawConfig raw;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw config_error("empty section name", line_no);
            raw.section_lines.emplace(section, line_no);
            raw.sections[section]; // create
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("expected 'key = value'", line_no);
        if (section.empty())
            throw config_error("key outside of any [section]", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error("expected 'key = value'", line_no);
        if (!raw.sections[section].emplace(key, Entry{value, line_no}).second)
            throw config_error("duplicate key '" + key + "'", line_no);
    }
    return raw;
}

class SectionReader {
  public:
    SectionReader(const RawConfig& raw, const std::string& name) : name_(name) {
        auto it = raw.sections.find(name);
        if (it != raw.sections.end()) {
            present_ = true;
            entries_ = it->second;
        }
    }

    bool present() const { return present_; }

    std::optional<std::string> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        taken_.insert(key);
        last_line_ = it->second.line;
        return it->second.value;
    }

    int last_line() const { return last_line_; }

    std::string require(const std::string& key) {
        auto v = take(key);
        if (!v)
            throw config_error("missing required key '" + key + "' in [" + name_ + "]");
        return *v;
    }

    double require_double(const std::string& key) {
        const std::string v = require(key);
        return parse_double(v, last_line_);
    }

    std::uint64_t require_u64(const std::string& key) {
        const std::string v = require(key);
        return parse_u64(v, last_line_);
    }

    std::vector<double> require_list(const std::string& key) {
        const std::string v = require(key);
        return parse_list(v, last_line_);
    }

    bool take_double_into(const std::string& key, double& out) {
        auto v = take(key);
        if (!v) return false;
        out = parse_double(*v, last_line_);
        return true;
    }

    bool take_double_into(const std::string& key, std::optional<double>& out) {
        auto v = take(key);
        if (!v) return false;
        out = parse_double(*v, last_line_);
        return true;
    }

    void finish() const {
        for (const auto& [key, entry] : entries_)
            if (!taken_.count(key))
                throw config_error("unknown key '" + key + "' in [" + name_ + "]", entry.line);
    }

  private:
    std::string name_;
    bool present_ = false;
    Section entries_;
    std::set<std::string> taken_;
    int last_line_ = 0;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

geometry::CCRLayout LayoutConfig::build() const {
    switch (kind) {
    case LayoutKind::linear:
        return geometry::layout_linear(m, spacing, min_spacing);
    case LayoutKind::circular:
        return geometry::layout_circular(m, radius, min_spacing);
    case LayoutKind::explicit_coords:
        return geometry::CCRLayout(coords, min_spacing);
    }
    throw config_error("invalid layout kind");
}

void ScenarioConfig::validate() const {
    geometry.validate();
    try {
        turbulence.validate();
    } catch (const domain_error& ex) {
        throw config_error(ex.what());
    }
    layout.build(); // spacing constraints
    if (sweep.values.empty())
        throw config_error("sweep value list must not be empty");
    for (double v : sweep.values) {
        if (sweep.variable == SweepVariable::sigma_s) {
            if (v < 0.0) throw config_error("sigma_s sweep values must be >= 0");
        } else if (!(v > 0.0)) {
            throw config_error("power sweep values must be > 0");
        }
    }
    if (run.samples < 1)
        throw config_error("run.samples must be >= 1");
    if (run.workers < 0)
        throw config_error("run.workers must be >= 0");
    if (baseline) {
        if (baseline->p_t_fractions.empty())
            throw config_error("baseline.p_t_fractions must not be empty");
        for (double f : baseline->p_t_fractions)
            if (!(f > 0.0))
                throw config_error("baseline.p_t_fractions must be > 0");
        if (baseline->w && !(*baseline->w > 0.0))
            throw config_error("baseline.w must be > 0");
        if (baseline->a0 && !(*baseline->a0 > 0.0))
            throw config_error("baseline.a0 must be > 0");
        if (!(baseline->g_rx > 0.0))
            throw config_error("baseline.g_rx must be > 0");
    }
    for (double r : moment_grid)
        if (r < 0.0)
            throw config_error("moment grid ratios must be >= 0");
}

ScenarioConfig parse_config(std::istream& in) {
    const RawConfig raw = read_raw(in);
    static const std::set<std::string> known = {"geometry", "layout",  "turbulence",
                                                "sweep",    "run",     "baseline",
                                                "moments",  "provenance"};
    for (const auto& [name, line] : raw.section_lines)
        if (!known.count(name))
            throw config_error("unknown section [" + name + "]", line);

    ScenarioConfig cfg;

    {
        SectionReader s(raw, "geometry");
        if (!s.present()) throw config_error("missing [geometry] section");
        cfg.geometry.z = s.require_double("z");
        cfg.geometry.lambda = s.require_double("lambda");
        cfg.geometry.a_gs = s.require_double("a_gs");
        cfg.geometry.a_re = s.require_double("a_re");
        s.take_double_into("visibility", cfg.geometry.visibility);
        s.take_double_into("sigma_atm", cfg.geometry.sigma_atm);
        s.take_double_into("theta_gs", cfg.geometry.theta_gs);
        s.take_double_into("w", cfg.geometry.w);
        cfg.geometry.sigma_s = s.require_double("sigma_s");
        cfg.geometry.rho_refl = s.require_double("rho_refl");
        cfg.geometry.p_gs = s.require_double("p_gs");
        cfg.geometry.p_th = s.require_double("p_th");
        s.finish();
    }

    {
        SectionReader s(raw, "layout");
        if (!s.present()) throw config_error("missing [layout] section");
        const std::string kind = s.require("kind");
        if (kind == "linear")
            cfg.layout.kind = LayoutKind::linear;
        else if (kind == "circular")
            cfg.layout.kind = LayoutKind::circular;
        else if (kind == "explicit")
            cfg.layout.kind = LayoutKind::explicit_coords;
        else
            throw config_error("layout.kind must be linear, circular or explicit",
                               s.last_line());
        s.take_double_into("min_spacing", cfg.layout.min_spacing);
        if (cfg.layout.kind == LayoutKind::explicit_coords) {
            const std::string pos = s.require("positions");
            const int line = s.last_line();
            std::istringstream in_pos(pos);
            std::string pair;
            while (std::getline(in_pos, pair, ';')) {
                std::istringstream pp(pair);
                double x, y;
                if (!(pp >> x >> y))
                    throw config_error("positions must be 'x y; x y; ...'", line);
                std::string rest;
                if (pp >> rest)
                    throw config_error("positions must be 'x y; x y; ...'", line);
                cfg.layout.coords.push_back({x, y});
            }
            cfg.layout.m = static_cast<int>(cfg.layout.coords.size());
        } else {
            cfg.layout.m = static_cast<int>(s.require_u64("m"));
            if (cfg.layout.kind == LayoutKind::linear)
                cfg.layout.spacing = s.require_double("spacing");
            else
                cfg.layout.radius = s.require_double("radius");
        }
        s.finish();
    }

    {
        SectionReader s(raw, "turbulence");
        if (!s.present()) throw config_error("missing [turbulence] section");
        if (auto preset = s.take("preset")) {
            if (*preset == "weak") {
                cfg.turbulence = {17.1, 16.0, 0.7, 0.7};
            } else if (*preset == "strong") {
                cfg.turbulence = {4.0, 1.9, 0.7, 0.7};
            } else {
                throw config_error("unknown turbulence preset '" + *preset + "'",
                                   s.last_line());
            }
        }
        s.take_double_into("alpha", cfg.turbulence.alpha1);
        s.take_double_into("beta", cfg.turbulence.beta1);
        s.take_double_into("rho_alpha", cfg.turbulence.rho_alpha);
        s.take_double_into("rho_beta", cfg.turbulence.rho_beta);
        s.finish();
    }

    {
        SectionReader s(raw, "sweep");
        if (!s.present()) throw config_error("missing [sweep] section");
        const std::string var = s.require("variable");
        if (var == "p_gs")
            cfg.sweep.variable = SweepVariable::p_gs;
        else if (var == "sigma_s")
            cfg.sweep.variable = SweepVariable::sigma_s;
        else if (var == "p_th")
            cfg.sweep.variable = SweepVariable::p_th;
        else
            throw config_error("sweep.variable must be p_gs, sigma_s or p_th", s.last_line());
        cfg.sweep.values = s.require_list("values");
        s.finish();
    }

    {
        SectionReader s(raw, "run");
        if (s.present()) {
            if (auto v = s.take("mode")) {
                if (*v == "analytic-exact")
                    cfg.run.mode = RunMode::analytic_exact;
                else if (*v == "analytic-approx")
                    cfg.run.mode = RunMode::analytic_approx;
                else if (*v == "montecarlo")
                    cfg.run.mode = RunMode::montecarlo;
                else if (*v == "all")
                    cfg.run.mode = RunMode::all;
                else
                    throw config_error("run.mode must be analytic-exact, analytic-approx, "
                                       "montecarlo or all",
                                       s.last_line());
            }
            if (auto v = s.take("samples")) cfg.run.samples = parse_u64(*v, s.last_line());
            if (auto v = s.take("seed")) cfg.run.seed = parse_u64(*v, s.last_line());
            if (auto v = s.take("workers")) {
                const int line = s.last_line();
                cfg.run.workers = static_cast<int>(parse_u64(*v, line));
            }
            s.finish();
        }
    }

    {
        SectionReader s(raw, "baseline");
        if (s.present()) {
            BaselineConfig bl;
            bl.p_t_fractions = s.require_list("p_t_fractions");
            s.take_double_into("w", bl.w);
            s.take_double_into("a0", bl.a0);
            s.take_double_into("g_rx", bl.g_rx);
            s.finish();
            cfg.baseline = std::move(bl);
        }
    }

    {
        SectionReader s(raw, "moments");
        if (s.present()) {
            cfg.moment_grid = s.require_list("sigma_over_w");
            s.finish();
        }
    }

    cfg.validate();
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file '" + path + "'");
    return parse_config(in);
}

void write_resolved_config(std::ostream& out, const ScenarioConfig& cfg) {
    out << "[geometry]\n";
    out << "z = " << fmt(cfg.geometry.z) << "\n";
    out << "lambda = " << fmt(cfg.geometry.lambda) << "\n";
    out << "a_gs = " << fmt(cfg.geometry.a_gs) << "\n";
    out << "a_re = " << fmt(cfg.geometry.a_re) << "\n";
    if (cfg.geometry.visibility)
        out << "visibility = " << fmt(*cfg.geometry.visibility) << "\n";
    if (cfg.geometry.sigma_atm)
        out << "sigma_atm = " << fmt(*cfg.geometry.sigma_atm) << "\n";
    if (cfg.geometry.theta_gs)
        out << "theta_gs = " << fmt(*cfg.geometry.theta_gs) << "\n";
    if (cfg.geometry.w)
        out << "w = " << fmt(*cfg.geometry.w) << "\n";
    out << "sigma_s = " << fmt(cfg.geometry.sigma_s) << "\n";
    out << "rho_refl = " << fmt(cfg.geometry.rho_refl) << "\n";
    out << "p_gs = " << fmt(cfg.geometry.p_gs) << "\n";
    out << "p_th = " << fmt(cfg.geometry.p_th) << "\n";

    out << "\n[layout]\n";
    switch (cfg.layout.kind) {
    case LayoutKind::linear:
        out << "kind = linear\n";
        out << "m = " << cfg.layout.m << "\n";
        out << "spacing = " << fmt(cfg.layout.spacing) << "\n";
        break;
    case LayoutKind::circular:
        out << "kind = circular\n";
        out << "m = " << cfg.layout.m << "\n";
        out << "radius = " << fmt(cfg.layout.radius) << "\n";
        break;
    case LayoutKind::explicit_coords: {
        out << "kind = explicit\n";
        out << "positions = ";
        for (std::size_t i = 0; i < cfg.layout.coords.size(); ++i) {
            if (i) out << "; ";
            out << fmt(cfg.layout.coords[i].x) << " " << fmt(cfg.layout.coords[i].y);
        }
        out << "\n";
        break;
    }
    }
    out << "min_spacing = " << fmt(cfg.layout.min_spacing) << "\n";

    out << "\n[turbulence]\n";
    out << "alpha = " << fmt(cfg.turbulence.alpha1) << "\n";
    out << "beta = " << fmt(cfg.turbulence.beta1) << "\n";
    out << "rho_alpha = " << fmt(cfg.turbulence.rho_alpha) << "\n";
    out << "rho_beta = " << fmt(cfg.turbulence.rho_beta) << "\n";

    out << "\n[sweep]\n";
    out << "variable = " << to_string(cfg.sweep.variable) << "\n";
    out << "values = ";
    for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
        if (i) out << ", ";
        out << fmt(cfg.sweep.values[i]);
    }
    out << "\n";

    out << "\n[run]\n";
    out << "mode = " << to_string(cfg.run.mode) << "\n";
    out << "samples = " << cfg.run.samples << "\n";
    out << "seed = " << cfg.run.seed << "\n";
    out << "workers = " << cfg.run.workers << "\n";

    if (cfg.baseline) {
        out << "\n[baseline]\n";
        out << "p_t_fractions = ";
        for (std::size_t i = 0; i < cfg.baseline->p_t_fractions.size(); ++i) {
            if (i) out << ", ";
            out << fmt(cfg.baseline->p_t_fractions[i]);
        }
        out << "\n";
        if (cfg.baseline->w) out << "w = " << fmt(*cfg.baseline->w) << "\n";
        if (cfg.baseline->a0) out << "a0 = " << fmt(*cfg.baseline->a0) << "\n";
        out << "g_rx = " << fmt(cfg.baseline->g_rx) << "\n";
    }

    if (!cfg.moment_grid.empty()) {
        out << "\n[moments]\n";
        out << "sigma_over_w = ";
        for (std::size_t i = 0; i < cfg.moment_grid.size(); ++i) {
            if (i) out << ", ";
            out << fmt(cfg.moment_grid[i]);
        }
        out << "\n";
    }
}

std::string to_string(RunMode mode) {
    switch (mode) {
    case RunMode::analytic_exact: return "analytic-exact";
    case RunMode::analytic_approx: return "analytic-approx";
    case RunMode::montecarlo: return "montecarlo";
    case RunMode::all: return "all";
    }
    return "all";
}

std::string to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::p_gs: return "p_gs";
    case SweepVariable::sigma_s: return "sigma_s";
    case SweepVariable::p_th: return "p_th";
    }
    return "p_gs";
}

} // namespace ccrlink::cli
