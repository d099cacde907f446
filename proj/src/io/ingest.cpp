#include "savi/io/ingest.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "savi/errors.hpp"

namespace savi::io {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double json_number(const json& v, const char* key, std::size_t line) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>(), line);
  throw DataError(std::string("field '") + key + "' is not numeric", line);
}

void require_keys(const json& obj, std::initializer_list<const char*> allowed, std::size_t line) {
  for (const auto& [k, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw DataError("unexpected field '" + k + "'", line);
  }
}

}  // namespace

Schema parse_schema(const std::string& name) {
  if (name == "scalar") return Schema::scalar;
  if (name == "bit") return Schema::bit;
  if (name == "block") return Schema::block;
  if (name == "event") return Schema::event;
  throw ConfigError("unknown input schema '" + name + "'");
}

double parse_number(std::string_view field, std::size_t line) {
  std::string_view s = trim(field);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) throw DataError("empty numeric field", line);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("cannot parse '" + std::string(trim(field)) + "' as a number", line);
  if (std::isnan(v)) throw DataError("NaN is not a valid value", line);
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

RecordReader::RecordReader(std::istream& in, Schema schema, int n_a, int n_b, bool header)
    : in_(in), schema_(schema), n_a_(n_a), n_b_(n_b), skip_header_(header) {
  if (schema == Schema::block && (n_a < 1 || n_b < 1))
    throw ConfigError("block schema needs positive group sizes (n_a, n_b)");
}

double RecordReader::check_value(double v) const {
  switch (schema_) {
    case Schema::scalar:
      if (!std::isfinite(v)) throw DataError("observation is not finite", line_no_);
      break;
    case Schema::bit:
    case Schema::event:
      if (v != 0.0 && v != 1.0) throw DataError("expected 0 or 1", line_no_);
      break;
    case Schema::block: break;
  }
  return v;
}

StreamRecord RecordReader::parse_csv(std::string_view line) const {
  StreamRecord r;
  r.line = line_no_;
  const auto fields = split_fields(line);
  if (schema_ == Schema::block) {
    const auto want = static_cast<std::size_t>(n_a_ + n_b_);
    if (fields.size() != want)
      throw DataError("expected " + std::to_string(want) + " fields, found " + std::to_string(fields.size()),
                      line_no_);
    r.block.n_a = n_a_;
    r.block.n_b = n_b_;
    for (auto f : fields) {
      const double v = parse_number(f, line_no_);
      if (v != 0.0 && v != 1.0) throw DataError("block outcomes must be 0 or 1", line_no_);
      r.block.outcomes.push_back(static_cast<int>(v));
    }
    return r;
  }
  if (fields.size() != 1) throw DataError("expected 1 field, found " + std::to_string(fields.size()), line_no_);
  r.value = check_value(parse_number(fields[0], line_no_));
  return r;
}

StreamRecord RecordReader::parse_json(std::string_view line) const {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what(), line_no_);
  }
  if (!obj.is_object()) throw DataError("JSON record must be an object", line_no_);
  StreamRecord r;
  r.line = line_no_;
  if (schema_ == Schema::block) {
    require_keys(obj, {"a", "b"}, line_no_);
    if (!obj.contains("a") || !obj.contains("b") || !obj["a"].is_array() || !obj["b"].is_array())
      throw DataError("block record needs arrays 'a' and 'b'", line_no_);
    r.block.n_a = static_cast<int>(obj["a"].size());
    r.block.n_b = static_cast<int>(obj["b"].size());
    if (r.block.n_a != n_a_ || r.block.n_b != n_b_)
      throw DataError("block sizes differ from the declared design", line_no_);
    for (const char* g : {"a", "b"})
      for (const auto& v : obj[g]) {
        const double d = json_number(v, g, line_no_);
        if (d != 0.0 && d != 1.0) throw DataError("block outcomes must be 0 or 1", line_no_);
        r.block.outcomes.push_back(static_cast<int>(d));
      }
    return r;
  }
  require_keys(obj, {"x"}, line_no_);
  if (!obj.contains("x")) throw DataError("record needs field 'x'", line_no_);
  r.value = check_value(json_number(obj["x"], "x", line_no_));
  return r;
}

std::optional<StreamRecord> RecordReader::next() {
  while (std::getline(in_, buf_)) {
    ++line_no_;
    const std::string_view line = trim(buf_);
    if (line.empty()) continue;
    if (skip_header_) {
      skip_header_ = false;
      continue;
    }
    StreamRecord r = line.front() == '{' ? parse_json(line) : parse_csv(line);
    ++records_;
    return r;
  }
  if (in_.bad()) throw DataError("read error", line_no_);
  if (records_ == 0) throw DataError("empty input");
  return std::nullopt;
}

std::vector<LabelledRow> read_labelled_rows(std::istream& in, std::size_t width, bool header) {
  std::vector<LabelledRow> rows;
  std::string buf;
  std::size_t line_no = 0;
  bool skip = header;
  while (std::getline(in, buf)) {
    ++line_no;
    const std::string_view line = trim(buf);
    if (line.empty()) continue;
    if (skip) {
      skip = false;
      continue;
    }
    LabelledRow row;
    row.line = line_no;
    if (line.front() == '{') {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw DataError(std::string("malformed JSON: ") + e.what(), line_no);
      }
      if (!obj.is_object()) throw DataError("JSON record must be an object", line_no);
      if (width == 1) {
        require_keys(obj, {"label", "value"}, line_no);
        if (!obj.contains("value")) throw DataError("record needs field 'value'", line_no);
        row.values.push_back(json_number(obj["value"], "value", line_no));
      } else {
        require_keys(obj, {"label", "p", "e"}, line_no);
        if (!obj.contains("p") || !obj.contains("e")) throw DataError("record needs fields 'p' and 'e'", line_no);
        row.values.push_back(json_number(obj["p"], "p", line_no));
        row.values.push_back(json_number(obj["e"], "e", line_no));
      }
      row.label = obj.contains("label") ? (obj["label"].is_string() ? obj["label"].get<std::string>()
                                                                     : obj["label"].dump())
                                        : std::to_string(rows.size() + 1);
    } else {
      const auto fields = split_fields(line);
      if (fields.size() != width + 1)
        throw DataError("expected " + std::to_string(width + 1) + " fields, found " + std::to_string(fields.size()),
                        line_no);
      row.label = std::string(fields[0]);
      for (std::size_t i = 1; i < fields.size(); ++i) row.values.push_back(parse_number(fields[i], line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("empty input");
  return rows;
}

CsvTable read_csv_table(std::istream& in) {
  CsvTable t;
  std::string buf;
  bool first = true;
  while (std::getline(in, buf)) {
    if (trim(buf).empty()) continue;
    std::vector<std::string> fields;
    for (auto f : split_fields(buf)) fields.emplace_back(f);
    if (first) {
      t.header = std::move(fields);
      first = false;
    } else {
      t.rows.push_back(std::move(fields));
    }
  }
  return t;
}

}  // namespace savi::io
