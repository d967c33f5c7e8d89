#pragma once

// INI-style run configuration: "[section]" headers group "key = value"
// lines.  Lines whose first non-blank character is '#' are comments.  Keys
// seen before any section header land in the unnamed section "".  A malformed
// line raises ConfigError naming the line number; duplicate keys keep the
// last value.

#include <filesystem>
#include <istream>
#include <map>
#include <string>

namespace cmclab {

class Config {
  public:
    using Section = std::map<std::string, std::string>;

    bool has(const std::string& section, const std::string& key) const;

    // Accessors without fallback throw ConfigError when the key is missing
    // (or, for the numeric ones, unparsable).
    std::string get_str(const std::string& section,
                        const std::string& key) const;
    std::string get_str(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
    double get_num(const std::string& section, const std::string& key) const;
    double get_num(const std::string& section, const std::string& key,
                   double fallback) const;
    int get_int(const std::string& section, const std::string& key) const;
    int get_int(const std::string& section, const std::string& key,
                int fallback) const;

    void set(const std::string& section, const std::string& key,
             const std::string& value);

    const std::map<std::string, Section>& sections() const {
        return sections_;
    }

  private:
    std::map<std::string, Section> sections_;
};

Config parse_config(std::istream& in);
Config parse_config_file(const std::filesystem::path& path);

}  // namespace cmclab
