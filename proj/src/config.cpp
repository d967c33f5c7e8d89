#include "cmclab/config.hpp"

#include <cstdlib>
#include <fstream>

#include "cmclab/errors.hpp"

namespace cmclab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

bool Config::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get_str(const std::string& section,
                            const std::string& key) const {
    const auto s = sections_.find(section);
    if (s != sections_.end()) {
        const auto k = s->second.find(key);
        if (k != s->second.end()) return k->second;
    }
    throw ConfigError("config: missing key '" + key + "' in section [" +
                      section + "]");
}

std::string Config::get_str(const std::string& section,
                            const std::string& key,
                            const std::string& fallback) const {
    return has(section, key) ? get_str(section, key) : fallback;
}

double Config::get_num(const std::string& section,
                       const std::string& key) const {
    const std::string v = get_str(section, key);
    const char* s = v.c_str();
    char* end = nullptr;
    const double x = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw ConfigError("config: key '" + key + "' in section [" + section +
                          "] is not a number: '" + v + "'");
    return x;
}

double Config::get_num(const std::string& section, const std::string& key,
                       double fallback) const {
    return has(section, key) ? get_num(section, key) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key) const {
    const std::string v = get_str(section, key);
    const char* s = v.c_str();
    char* end = nullptr;
    const long x = std::strtol(s, &end, 10);
    if (end == s || *end != '\0')
        throw ConfigError("config: key '" + key + "' in section [" + section +
                          "] is not an integer: '" + v + "'");
    return int(x);
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
    sections_[section][key] = value;
}

Config parse_config(std::istream& in) {
    Config cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t[0] == '[') {
            if (t.back() != ']' || t.size() < 3)
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(lineno));
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("config: empty section name at line " +
                                  std::to_string(lineno));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected 'key = value' at line " +
                              std::to_string(lineno));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: empty key at line " +
                              std::to_string(lineno));
        cfg.set(section, key, value);
    }
    return cfg;
}

Config parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path.string() + "'");
    return parse_config(in);
}

}  // namespace cmclab
