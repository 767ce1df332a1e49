#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace l1tucker::harness {

/// One aggregated cell: a solver at one value of the swept parameter.
struct ResultRow {
    std::string solver;
    std::string param_name;
    double param_value = 0.0;
    /// MNSE for reconstruction sweeps, mean accuracy for classification.
    double metric = 0.0;
    double std_error = 0.0;
    /// Trials that produced a value.
    std::size_t trials = 0;
    /// Trials whose solver call threw; not part of the CSV columns.
    std::size_t failures = 0;

    bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
    std::vector<ResultRow> rows;

    /// Solver name, then parameter value ascending.
    void sort();
    bool operator==(const ResultTable&) const = default;
};

struct Summary {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

/// Mean and standard error (sample standard deviation / sqrt(n)). Values are
/// sorted before summation so the result is independent of trial order.
[[nodiscard]] Summary summarize(std::vector<double> values);

inline constexpr const char* kResultsHeader = "solver,param_name,param_value,metric,stderr,trials";

/// CSV with `kResultsHeader`, rows in sorted order. Each comment line is
/// written first, prefixed with "# ". Numbers use the shortest round-trip
/// decimal form.
void write_results(std::ostream& out, ResultTable table, const std::vector<std::string>& comments = {});
void emit_results(const ResultTable& table, const std::filesystem::path& path,
                  const std::vector<std::string>& comments = {});

/// Parses a results CSV, skipping '#' comment lines.
[[nodiscard]] ResultTable read_results(std::istream& in);
[[nodiscard]] ResultTable load_results(const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `v`.
[[nodiscard]] std::string format_number(double v);

}  // namespace l1tucker::harness
