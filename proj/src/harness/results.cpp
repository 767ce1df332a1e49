#include "l1tucker/harness/results.hpp"

#include "l1tucker/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace l1tucker::harness {

void ResultTable::sort() {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.solver, a.param_value) < std::tie(b.solver, b.param_value);
    });
}

Summary summarize(std::vector<double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        const double var = ss / static_cast<double>(values.size() - 1);
        s.std_error = std::sqrt(var / static_cast<double>(values.size()));
    }
    return s;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_results(std::ostream& out, ResultTable table, const std::vector<std::string>& comments) {
    table.sort();
    for (const auto& c : comments) out << "# " << c << '\n';
    out << kResultsHeader << '\n';
    for (const auto& r : table.rows) {
        out << r.solver << ',' << r.param_name << ',' << format_number(r.param_value) << ','
            << format_number(r.metric) << ',' << format_number(r.std_error) << ',' << r.trials << '\n';
    }
}

void emit_results(const ResultTable& table, const std::filesystem::path& path, const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_results(out, table, comments);
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

namespace {

double parse_double(const std::string& field, std::size_t line) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
        throw FormatError("results CSV line " + std::to_string(line) + ": bad number '" + field + "'");
    }
    return v;
}

}  // namespace

ResultTable read_results(std::istream& in) {
    ResultTable table;
    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        if (!seen_header) {
            if (line != kResultsHeader) throw FormatError("results CSV: unexpected header '" + line + "'");
            seen_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != 6) throw FormatError("results CSV line " + std::to_string(line_no) + ": expected 6 fields");
        ResultRow r;
        r.solver = fields[0];
        r.param_name = fields[1];
        r.param_value = parse_double(fields[2], line_no);
        r.metric = parse_double(fields[3], line_no);
        r.std_error = parse_double(fields[4], line_no);
        r.trials = static_cast<std::size_t>(parse_double(fields[5], line_no));
        table.rows.push_back(std::move(r));
    }
    if (!seen_header) throw FormatError("results CSV: missing header");
    return table;
}

ResultTable load_results(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_results(in);
}

}  // namespace l1tucker::harness
