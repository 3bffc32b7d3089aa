#ifndef LENODAL_CONFIG_HPP
#define LENODAL_CONFIG_HPP

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lenodal/solver.hpp"

namespace lenodal {

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(const std::string& what, int line_) : std::runtime_error(what), line(line_) {}
};

using ConfigValue =
    std::variant<bool, double, std::string, std::vector<double>, std::vector<std::string>>;

/// Flat view of a TOML-style file: sections of key = value lines, with
/// strings, numbers, booleans and single-line arrays.  Keys are stored as
/// "section.key".
class ConfigTable {
public:
    static ConfigTable parse_file(const std::filesystem::path& path);
    static ConfigTable parse_string(const std::string& text);

    bool has(const std::string& key) const;
    const ConfigValue& at(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_number(const std::string& key) const;
    double get_number(const std::string& key, double fallback) const;
    long long get_integer(const std::string& key) const;
    long long get_integer(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Array entries; scalar strings of the form "a/b" are also accepted
    /// where a rational is wanted.
    std::vector<std::string> get_array(const std::string& key) const;

    std::vector<std::string> keys() const;
    const std::string& source_text() const { return source_; }

private:
    std::map<std::string, ConfigValue> values_;
    std::string source_;
};

/// "a/b" or a decimal literal.
Rational parse_rational(const std::string& text);

/// Builds the exponent record for one [problem] table: needs N and exactly
/// one of p or q (number or "a/b" string).
Exponents exponents_from(const ConfigTable& t, const std::string& section = "problem");

SolveConfig solve_config_from(const ConfigTable& t);

/// [sweep] q_values list turned into hyperbola records for the problem's N.
std::vector<Exponents> sweep_exponents_from(const ConfigTable& t);

} // namespace lenodal

#endif
