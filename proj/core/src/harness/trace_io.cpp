#include "mies/harness/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mies::harness {

namespace {

constexpr char kHeader[] = "t,success,z_changed_any,log10_norm_m,log_sigma,sigma_d_min,f_elite";
constexpr double kLn10 = 2.302585092994045684;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error("trace " + path.string() + ": " + what);
}

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

double parse_double_field(const std::string& token, const std::filesystem::path& path,
                          std::size_t line_no) {
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || token.empty()) {
        fail(path, "line " + std::to_string(line_no) + ": bad number '" + token + "'");
    }
    return value;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream stream(line);
    while (std::getline(stream, token, sep)) out.push_back(token);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

} // namespace

std::uint64_t write_trace_csv(const std::filesystem::path& path, const TraceMeta& meta,
                              const std::vector<IterationRecord>& records,
                              std::uint64_t stride) {
    if (stride < 1) throw std::invalid_argument("trace stride must be >= 1");
    if (records.empty()) throw std::invalid_argument("trace has no records");
    std::ofstream out(path);
    if (!out) fail(path, "cannot open for writing");
    out << "# mies-trace seed=" << meta.seed << " variant=" << meta.variant
        << " problem=" << meta.problem << " dco=" << meta.dco << " din=" << meta.din
        << " sigma_lb=" << format_double(meta.sigma_lb) << "\n";
    out << kHeader << "\n";
    std::uint64_t rows = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        const bool last = i + 1 == records.size();
        if (rec.t % stride != 0 && !last) continue;
        out << rec.t << ',' << (rec.success ? 1 : 0) << ','
            << (rec.z_changed_any ? 1 : 0) << ',' << format_double(rec.log_norm_m / kLn10)
            << ',' << format_double(rec.log_sigma) << ','
            << format_double(rec.sigma_d_min) << ',' << format_double(rec.f_elite)
            << '\n';
        ++rows;
    }
    out.flush();
    if (!out) fail(path, "write failed");
    return rows;
}

TraceFile read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    TraceFile trace;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    bool meta_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream stream(line.substr(1));
            std::string token;
            while (stream >> token) {
                const auto eq = token.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = token.substr(0, eq);
                const std::string value = token.substr(eq + 1);
                try {
                    if (key == "seed") trace.meta.seed = std::stoull(value);
                    if (key == "dco") trace.meta.dco = std::stoi(value);
                    if (key == "din") trace.meta.din = std::stoi(value);
                } catch (const std::exception&) {
                    fail(path, "line " + std::to_string(line_no) + ": bad metadata " +
                                   key + "='" + value + "'");
                }
                if (key == "variant") trace.meta.variant = value;
                if (key == "problem") trace.meta.problem = value;
                if (key == "sigma_lb") {
                    trace.meta.sigma_lb = parse_double_field(value, path, line_no);
                }
                meta_seen = true;
            }
            continue;
        }
        if (!header_seen) {
            if (line != kHeader) {
                fail(path, "line " + std::to_string(line_no) + ": bad header '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 7) {
            fail(path, "line " + std::to_string(line_no) + ": expected 7 fields, got " +
                           std::to_string(fields.size()));
        }
        TraceRow row;
        try {
            row.t = std::stoull(fields[0]);
        } catch (const std::exception&) {
            fail(path, "line " + std::to_string(line_no) + ": bad t '" + fields[0] + "'");
        }
        for (int flag_col : {1, 2}) {
            if (fields[flag_col] != "0" && fields[flag_col] != "1") {
                fail(path, "line " + std::to_string(line_no) + ": flag column " +
                               std::to_string(flag_col) + " must be 0 or 1");
            }
        }
        row.success = fields[1] == "1";
        row.z_changed_any = fields[2] == "1";
        row.log10_norm_m = parse_double_field(fields[3], path, line_no);
        row.log_sigma = parse_double_field(fields[4], path, line_no);
        row.sigma_d_min = parse_double_field(fields[5], path, line_no);
        row.f_elite = parse_double_field(fields[6], path, line_no);
        if (std::isnan(row.log10_norm_m) || std::isnan(row.log_sigma) ||
            std::isnan(row.sigma_d_min) || std::isnan(row.f_elite)) {
            fail(path, "line " + std::to_string(line_no) + ": NaN value");
        }
        if (!trace.rows.empty() && row.t <= trace.rows.back().t) {
            fail(path, "line " + std::to_string(line_no) + ": t not increasing");
        }
        trace.rows.push_back(row);
    }
    if (!meta_seen) fail(path, "missing metadata comment");
    if (!header_seen) fail(path, "missing header");
    if (trace.rows.empty()) fail(path, "no data rows");
    return trace;
}

TraceVerification verify_trace(const std::filesystem::path& path) {
    const TraceFile trace = read_trace_csv(path);
    TraceVerification result;
    result.n_rows = trace.rows.size();
    const double floor = trace.meta.sigma_lb * (1.0 - 1e-12);
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        const auto& row = trace.rows[i];
        if (!(row.sigma_d_min >= floor)) {
            result.ok = false;
            result.detail = "row t=" + std::to_string(row.t) + ": sigma_d_min " +
                            format_double(row.sigma_d_min) + " below floor " +
                            format_double(trace.meta.sigma_lb);
            return result;
        }
    }
    result.ok = true;
    result.detail = "floor held on " + std::to_string(result.n_rows) + " rows";
    return result;
}

} // namespace mies::harness
