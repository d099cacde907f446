#include "savi/io/report.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

#include "savi/errors.hpp"

namespace savi::io {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string json_number(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "\"Infinity\"" : "\"-Infinity\"";
  return format_number(x);
}

std::string render(const Cell& c, Format f) {
  return std::visit(
      [f](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>)
          return f == Format::csv ? format_number(v) : json_number(v);
        else if constexpr (std::is_same_v<T, long long>)
          return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>)
          return v ? "true" : "false";
        else
          return f == Format::csv ? csv_field(v) : nlohmann::json(v).dump();
      },
      c);
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ReportWriter::ReportWriter(std::ostream& out, Format format, std::vector<std::string> columns, ReportMeta meta)
    : out_(out), format_(format), columns_(std::move(columns)) {
  if (format_ == Format::csv) {
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << csv_field(columns_[i]);
    out_ << '\n';
  } else {
    nlohmann::json m;
    m["version"] = kVersion;
    m["config"] = std::move(meta.config);
    m["seed"] = meta.seed ? nlohmann::json(*meta.seed) : nlohmann::json(nullptr);
    out_ << "{\"meta\":" << m.dump() << ",\"rows\":[";
  }
  check();
}

void ReportWriter::row(const std::vector<Cell>& cells) {
  if (finished_) throw InvariantViolation("report row written after finish");
  if (cells.size() != columns_.size()) throw InvariantViolation("report row width differs from its header");
  if (format_ == Format::csv) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << render(cells[i], format_);
    out_ << '\n';
  } else {
    out_ << (rows_ ? ",\n" : "\n") << '{';
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << nlohmann::json(columns_[i]).dump() << ':' << render(cells[i], format_);
    out_ << '}';
  }
  ++rows_;
  check();
}

void ReportWriter::finish() {
  if (finished_) return;
  finished_ = true;
  if (format_ == Format::json) out_ << (rows_ ? "\n]}\n" : "]}\n");
  out_.flush();
  check();
}

void ReportWriter::check() {
  if (!out_) throw IoError("failed to write report");
}

OutputSink::OutputSink(const std::string& path) : out_(&std::cout) {
  if (path.empty() || path == "-") return;
  file_ = std::make_unique<std::ofstream>(path);
  if (!*file_) throw IoError("cannot open output '" + path + "' for writing");
  out_ = file_.get();
}

void OutputSink::close() {
  out_->flush();
  if (!*out_) throw IoError("failed to write output");
  if (file_) {
    file_->close();
    if (!*file_) throw IoError("failed to close output");
  }
}

InputSource::InputSource(const std::string& path) : in_(&std::cin) {
  if (path.empty() || path == "-") return;
  file_ = std::make_unique<std::ifstream>(path);
  if (!*file_) throw IoError("cannot open input '" + path + "'");
  in_ = file_.get();
}

}  // namespace savi::io
