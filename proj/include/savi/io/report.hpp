#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace savi::io {

inline constexpr const char* kVersion = "0.1.0";

enum class Format { csv, json };

Format parse_format(const std::string& name);  // ConfigError

/// %.17g; infinities as "inf" / "-inf", NaN as "nan".
std::string format_number(double x);

using Cell = std::variant<double, long long, bool, std::string>;

struct ReportMeta {
  nlohmann::json config = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
};

/// Streams rows as they are produced. CSV gets a header line first; JSON is
/// {"meta": {...}, "rows": [...]} with each row an object keyed by column.
/// finish() must be called once to close the JSON document.
class ReportWriter {
 public:
  ReportWriter(std::ostream& out, Format format, std::vector<std::string> columns, ReportMeta meta = {});
  ReportWriter(const ReportWriter&) = delete;
  ReportWriter& operator=(const ReportWriter&) = delete;

  void row(const std::vector<Cell>& cells);
  void finish();
  std::size_t rows() const noexcept { return rows_; }

 private:
  void check();

  std::ostream& out_;
  Format format_;
  std::vector<std::string> columns_;
  std::size_t rows_ = 0;
  bool finished_ = false;
};

/// Output sink: stdout when path is empty or "-", else a file. Throws IoError
/// when the file cannot be opened.
class OutputSink {
 public:
  explicit OutputSink(const std::string& path);
  std::ostream& stream() noexcept { return *out_; }
  /// Flushes; IoError if anything failed to write.
  void close();

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

/// Input source: stdin when path is empty or "-"; IoError if unreadable.
class InputSource {
 public:
  explicit InputSource(const std::string& path);
  std::istream& stream() noexcept { return *in_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* in_;
};

}  // namespace savi::io
