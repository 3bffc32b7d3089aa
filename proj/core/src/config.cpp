#include "lenodal/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lenodal {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// strips a trailing comment, respecting double-quoted strings
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool parse_number(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

ConfigValue parse_scalar(const std::string& raw, int line) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
        return raw.substr(1, raw.size() - 2);
    if (raw == "true") return true;
    if (raw == "false") return false;
    double num;
    if (parse_number(raw, num)) return num;
    throw ConfigError("unquoted value '" + raw + "' is not a number or boolean", line);
}

ConfigValue parse_value(const std::string& raw, int line) {
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') throw ConfigError("unterminated array", line);
        std::vector<double> nums;
        std::vector<std::string> strs;
        std::string inner = raw.substr(1, raw.size() - 2);
        std::string item;
        bool quoted = false;
        auto flush = [&]() {
            const std::string v = trim(item);
            item.clear();
            if (v.empty()) return;
            ConfigValue cv = parse_scalar(v, line);
            if (std::holds_alternative<double>(cv))
                nums.push_back(std::get<double>(cv));
            else if (std::holds_alternative<std::string>(cv))
                strs.push_back(std::get<std::string>(cv));
            else
                throw ConfigError("array elements must be numbers or strings", line);
        };
        for (char c : inner) {
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) {
                flush();
                continue;
            }
            item.push_back(c);
        }
        flush();
        if (!nums.empty() && !strs.empty())
            throw ConfigError("mixed array element types", line);
        if (!strs.empty()) return strs;
        return nums;
    }
    return parse_scalar(raw, line);
}

} // namespace

ConfigTable ConfigTable::parse_string(const std::string& text) {
    ConfigTable t;
    t.source_ = text;
    std::istringstream is(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("unterminated section header", line);
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) throw ConfigError("empty section name", line);
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", line);
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw ConfigError("empty key", line);
        const std::string full = section.empty() ? key : section + "." + key;
        if (t.values_.count(full)) throw ConfigError("duplicate key '" + full + "'", line);
        t.values_[full] = parse_value(trim(s.substr(eq + 1)), line);
    }
    return t;
}

ConfigTable ConfigTable::parse_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open " + path.string(), 0);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_string(ss.str());
}

bool ConfigTable::has(const std::string& key) const { return values_.count(key) > 0; }

const ConfigValue& ConfigTable::at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing key '" + key + "'", 0);
    return it->second;
}

std::string ConfigTable::get_string(const std::string& key) const {
    const ConfigValue& v = at(key);
    if (!std::holds_alternative<std::string>(v))
        throw ConfigError("key '" + key + "' is not a string", 0);
    return std::get<std::string>(v);
}

std::string ConfigTable::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double ConfigTable::get_number(const std::string& key) const {
    const ConfigValue& v = at(key);
    if (!std::holds_alternative<double>(v))
        throw ConfigError("key '" + key + "' is not a number", 0);
    return std::get<double>(v);
}

double ConfigTable::get_number(const std::string& key, double fallback) const {
    return has(key) ? get_number(key) : fallback;
}

long long ConfigTable::get_integer(const std::string& key) const {
    const double d = get_number(key);
    const long long n = static_cast<long long>(d);
    if (static_cast<double>(n) != d)
        throw ConfigError("key '" + key + "' is not an integer", 0);
    return n;
}

long long ConfigTable::get_integer(const std::string& key, long long fallback) const {
    return has(key) ? get_integer(key) : fallback;
}

bool ConfigTable::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const ConfigValue& v = at(key);
    if (!std::holds_alternative<bool>(v))
        throw ConfigError("key '" + key + "' is not a boolean", 0);
    return std::get<bool>(v);
}

std::vector<std::string> ConfigTable::get_array(const std::string& key) const {
    const ConfigValue& v = at(key);
    if (std::holds_alternative<std::vector<std::string>>(v))
        return std::get<std::vector<std::string>>(v);
    if (std::holds_alternative<std::vector<double>>(v)) {
        std::vector<std::string> out;
        for (double d : std::get<std::vector<double>>(v)) {
            std::ostringstream ss;
            ss.precision(17);
            ss << d;
            out.push_back(ss.str());
        }
        return out;
    }
    throw ConfigError("key '" + key + "' is not an array", 0);
}

std::vector<std::string> ConfigTable::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) out.push_back(k);
    return out;
}

Rational parse_rational(const std::string& text) {
    const std::size_t slash = text.find('/');
    auto parse_ll = [&](const std::string& s) {
        long long v = 0;
        const std::string tr = trim(s);
        auto [p, ec] = std::from_chars(tr.data(), tr.data() + tr.size(), v);
        if (ec != std::errc() || p != tr.data() + tr.size())
            throw std::invalid_argument("bad rational literal '" + text + "'");
        return v;
    };
    if (slash != std::string::npos)
        return Rational(parse_ll(text.substr(0, slash)), parse_ll(text.substr(slash + 1)));
    // decimal literal: keep it exact when short enough
    const std::size_t dot = text.find('.');
    if (dot == std::string::npos) return Rational(parse_ll(text));
    const std::string frac = trim(text.substr(dot + 1));
    if (frac.size() > 9) throw std::invalid_argument("decimal too long for exact rational: " + text);
    long long den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const long long whole = parse_ll(text.substr(0, dot));
    const long long part = frac.empty() ? 0 : parse_ll(frac);
    const bool neg = !text.empty() && text[0] == '-';
    return Rational(whole * den + (neg ? -part : part), den);
}

Exponents exponents_from(const ConfigTable& t, const std::string& section) {
    const int N = static_cast<int>(t.get_integer(section + ".N"));
    const bool has_p = t.has(section + ".p");
    const bool has_q = t.has(section + ".q");
    if (has_p == has_q)
        throw ConfigError("[" + section + "] needs exactly one of p or q", 0);
    const std::string key = section + (has_p ? ".p" : ".q");
    const ConfigValue& v = t.at(key);
    if (std::holds_alternative<std::string>(v)) {
        const Rational r = parse_rational(std::get<std::string>(v));
        return has_p ? hyperbola_from_p(N, r) : hyperbola_from_q(N, r);
    }
    const double d = t.get_number(key);
    // integer-valued numbers stay exact so downstream zero tests are not
    // polluted by rounding
    if (d == std::floor(d) && std::abs(d) < 1e15) {
        const Rational r(static_cast<long long>(d));
        return has_p ? hyperbola_from_p(N, r) : hyperbola_from_q(N, r);
    }
    return has_p ? hyperbola_from_p(N, d) : hyperbola_from_q(N, d);
}

SolveConfig solve_config_from(const ConfigTable& t) {
    SolveConfig cfg;
    cfg.exponents = exponents_from(t);
    const int j = static_cast<int>(t.get_integer("problem.symmetry_blocks", 1));
    if (j > 0) cfg.symmetry = make_spec(cfg.exponents.N, j);

    const std::string kind = t.get_string(
        "grid.kind", j > 0 ? to_string(reduced_grid_kind(cfg.exponents.N)) : "radial_1d");
    if (kind == "radial_1d")
        cfg.grid_kind = GridKind::radial_1d;
    else if (kind == "biradial_2d")
        cfg.grid_kind = GridKind::biradial_2d;
    else if (kind == "biradial_radial_3d")
        cfg.grid_kind = GridKind::biradial_radial_3d;
    else if (kind == "cartesian")
        cfg.grid_kind = GridKind::cartesian;
    else
        throw ConfigError("unknown grid.kind '" + kind + "'", 0);

    cfg.extent = t.get_number("grid.extent", cfg.extent);
    cfg.resolution = static_cast<int>(t.get_integer("grid.resolution", cfg.resolution));

    const std::string seed = t.get_string("seed.kind", "biradial");
    if (seed == "biradial")
        cfg.seed = SeedKind::biradial;
    else if (seed == "radial")
        cfg.seed = SeedKind::radial;
    else if (seed == "file")
        cfg.seed = SeedKind::file;
    else
        throw ConfigError("unknown seed.kind '" + seed + "'", 0);
    if (cfg.seed == SeedKind::file) cfg.seed_file = t.get_string("seed.file");

    cfg.initial_step = t.get_number("descent.initial_step", cfg.initial_step);
    cfg.backtrack = t.get_number("descent.backtrack", cfg.backtrack);
    cfg.max_iterations = static_cast<int>(t.get_integer("descent.max_iterations", cfg.max_iterations));
    cfg.energy_rel_tol = t.get_number("descent.energy_rel_tol", cfg.energy_rel_tol);
    cfg.energy_window = static_cast<int>(t.get_integer("descent.energy_window", cfg.energy_window));
    cfg.residual_tol = t.get_number("descent.residual_tol", cfg.residual_tol);
    cfg.eps_reg_start = t.get_number("descent.eps_reg_start", cfg.eps_reg_start);
    cfg.eps_reg_decay = t.get_number("descent.eps_reg_decay", cfg.eps_reg_decay);
    cfg.eps_reg_floor = t.get_number("descent.eps_reg_floor", cfg.eps_reg_floor);
    cfg.precondition = t.get_bool("descent.precondition", cfg.precondition);
    cfg.pin_scale = t.get_bool("descent.pin_scale", cfg.pin_scale);
    cfg.scale_gauge = t.get_number("descent.scale_gauge", cfg.scale_gauge);

    validate(cfg);
    return cfg;
}

std::vector<Exponents> sweep_exponents_from(const ConfigTable& t) {
    const int N = static_cast<int>(t.get_integer("problem.N"));
    std::vector<Exponents> out;
    for (const std::string& item : t.get_array("sweep.q_values")) {
        Exponents e;
        try {
            e = hyperbola_from_q(N, parse_rational(item));
        } catch (const std::invalid_argument&) {
            e = hyperbola_from_q(N, std::stod(item));
        }
        bool dup = false;
        for (const Exponents& prev : out)
            if (std::abs(prev.q - e.q) < 1e-14) dup = true;
        if (!dup) out.push_back(e);
    }
    return out;
}

} // namespace lenodal
