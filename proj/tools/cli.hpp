#pragma once

#include "l1tucker/harness/classify.hpp"
#include "l1tucker/harness/digits.hpp"
#include "l1tucker/harness/recon.hpp"

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace l1tucker::cli {

/// One row of the defaults table echoed into every output CSV.
struct DefaultEntry {
    std::string name;
    std::string value;
    std::string meaning;
};

/// All numeric defaults, read from default-constructed spec types.
[[nodiscard]] const std::vector<DefaultEntry>& defaults_table();

/// Defaults table plus the effective invocation, as CSV comment bodies.
[[nodiscard]] std::vector<std::string> provenance_comments(const std::string& command, const nlohmann::json& effective);

struct ReconConfig {
    harness::ReconExperimentSpec spec;
    harness::SweepGrid grid;
};

struct ClassifyConfig {
    harness::ClassifyExperimentSpec spec;
    harness::ClassSweep sweep;
    harness::SyntheticDigitsConfig synthetic;
};

/// JSON config parsing. Malformed JSON, wrong field types and unknown keys
/// raise FormatError; out-of-range values raise ArgumentError.
[[nodiscard]] ReconConfig parse_recon_config(const nlohmann::json& j);
[[nodiscard]] ClassifyConfig parse_classify_config(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const ReconConfig& c);
[[nodiscard]] nlohmann::json to_json(const ClassifyConfig& c);
[[nodiscard]] nlohmann::json load_json(const std::string& path);

/// Parses "4,4,3" into ranks.
[[nodiscard]] Ranks parse_ranks(const std::string& text);

/// Entry point. Returns the process exit code: 0 success, 2 argument error,
/// 3 format or I/O error, 4 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace l1tucker::cli
