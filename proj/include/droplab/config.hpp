#pragma once
#include <map>
#include <string>
#include <vector>

#include "droplab/interaction.hpp"
#include "droplab/sweep.hpp"

namespace droplab {

// Flat sectioned key-value configuration:
//
//   # comment
//   [section]
//   key = value tokens
//
// Values are whitespace-separated tokens.  Duplicate keys within a section
// are rejected; errors carry the offending line number.
class ConfigFile {
public:
    static ConfigFile parse_string(const std::string& text);
    static ConfigFile parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    const std::vector<std::string>& tokens(const std::string& section,
                                           const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    int get_int(const std::string& section, const std::string& key) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;

    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    int get_int_or(const std::string& section, const std::string& key, int fallback) const;

    // Deterministic re-serialization: sections and keys sorted, numbers as
    // given (tokens are preserved verbatim).
    std::string canonical() const;

private:
    // section -> key -> (tokens, line)
    struct Entry {
        std::vector<std::string> toks;
        int line = 0;
    };
    std::map<std::string, std::map<std::string, Entry>> data_;
};

// Builders from config sections.
ConfinementProfile profile_from_config(const ConfigFile& cfg);
SweepPlan sweep_plan_from_config(const ConfigFile& cfg);
AnsatzSpec ansatz_spec_from_config(const ConfigFile& cfg);

struct MinimizeRequest {
    std::vector<double> masses;
    ConfinementProfile profile;
    int restarts = 32;
    std::uint64_t seed = 0;
};
MinimizeRequest minimize_request_from_config(const ConfigFile& cfg);

}  // namespace droplab
