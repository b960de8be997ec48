#include "cir/results.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "cir/errors.hpp"

namespace cir {

namespace {

std::string format_double(double v, const char* where) {
    if (!std::isfinite(v)) {
        std::string msg = "non-finite value in result ";
        throw IoFailure(msg + where);
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Labels are plain identifiers by construction; reject anything that would
// need CSV quoting rather than start escaping.
const std::string& checked_label(const std::string& s, const char* where) {
    if (s.empty()) {
        std::string msg = "empty label in result ";
        throw IoFailure(msg + where);
    }
    for (unsigned char c : s) {
        if (c == ',' || c == '"' || c == '\\' || std::iscntrl(c)) {
            std::string msg = "label needs quoting, refusing to write: ";
            throw IoFailure(msg + s);
        }
    }
    return s;
}

}  // namespace

std::string to_csv(std::span<const ResultRow> rows) {
    if (rows.empty()) throw IoFailure("no rows to write");
    std::string out = "experiment,n,C,t,metric,value,bound,decision\n";
    for (const ResultRow& r : rows) {
        out += checked_label(r.experiment, "experiment");
        out += ',';
        if (r.n) out += std::to_string(*r.n);
        out += ',';
        if (r.C) out += format_double(*r.C, "C");
        out += ',';
        if (r.t) out += format_double(*r.t, "t");
        out += ',';
        out += checked_label(r.metric, "metric");
        out += ',';
        out += format_double(r.value, "value");
        out += ',';
        if (r.bound) out += format_double(*r.bound, "bound");
        out += ',';
        out += decision_name(r.decision);
        out += '\n';
    }
    return out;
}

std::string to_json(std::span<const ResultRow> rows) {
    if (rows.empty()) throw IoFailure("no rows to write");
    std::string out = "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ResultRow& r = rows[i];
        out += "  {\"experiment\": \"";
        out += checked_label(r.experiment, "experiment");
        out += "\", \"n\": ";
        out += r.n ? std::to_string(*r.n) : "null";
        out += ", \"C\": ";
        out += r.C ? format_double(*r.C, "C") : "null";
        out += ", \"t\": ";
        out += r.t ? format_double(*r.t, "t") : "null";
        out += ", \"metric\": \"";
        out += checked_label(r.metric, "metric");
        out += "\", \"value\": ";
        out += format_double(r.value, "value");
        out += ", \"bound\": ";
        out += r.bound ? format_double(*r.bound, "bound") : "null";
        out += ", \"decision\": \"";
        out += decision_name(r.decision);
        out += "\"}";
        out += (i + 1 < rows.size()) ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

void write_results(std::span<const ResultRow> rows, const std::string& path,
                   OutputFormat format) {
    const std::string body = format == OutputFormat::csv ? to_csv(rows) : to_json(rows);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoFailure("cannot open for writing: " + path);
    file.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!file) throw IoFailure("write failed: " + path);
}

}  // namespace cir
