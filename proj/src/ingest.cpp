#include "clinpred/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "clinpred/errors.hpp"
#include "profiles.hpp"

namespace clinpred {

std::string_view to_string(DiseaseId id) noexcept {
  switch (id) {
    case DiseaseId::heart:
      return "heart";
    case DiseaseId::thyroid:
      return "thyroid";
    case DiseaseId::diabetes:
      return "diabetes";
    case DiseaseId::ckd:
      return "ckd";
  }
  return "heart";
}

DiseaseId parse_disease(std::string_view text) {
  for (const auto id : kAllDiseases) {
    if (to_string(id) == text) return id;
  }
  throw ValidationError("unknown disease '" + std::string(text) +
                        "'; valid ids: heart, thyroid, diabetes, ckd");
}

Schema builtin_schema(DiseaseId id) {
  Schema schema;
  for (const auto& p : detail::disease_profile(id)) schema.push_back(p.spec);
  return schema;
}

std::string format_schema(const Schema& schema) {
  std::string out;
  for (const auto& col : schema) {
    out += col.name;
    out += '\t';
    out += to_string(col.kind);
    out += '\t';
    out += to_string(col.role);
    out += '\t';
    out += col.description;
    out += '\n';
  }
  return out;
}

Schema parse_schema(std::string_view text) {
  Schema schema;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      const auto tab = line.find('\t', start);
      fields.emplace_back(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start));
      if (tab == std::string_view::npos) {
        start = line.size();
        break;
      }
      start = tab + 1;
    }
    if (fields.size() < 3) {
      throw ParseError(line_no, "schema line needs name, kind and role separated by tabs");
    }
    ColumnSpec col;
    col.name = fields[0];
    col.kind = parse_column_kind(fields[1]);
    col.role = parse_column_role(fields[2]);
    if (start < line.size()) col.description = std::string(line.substr(start));
    schema.push_back(std::move(col));
  }
  validate_schema(schema);
  return schema;
}

bool is_missing_token(std::string_view token) noexcept {
  auto iequals = [](std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
             return std::tolower(static_cast<unsigned char>(x)) ==
                    std::tolower(static_cast<unsigned char>(y));
           });
  };
  return token.empty() || token == "?" || iequals(token, "NA") || iequals(token, "null");
}

namespace {

struct Field {
  std::string text;
  bool quoted = false;
};

struct Record {
  std::vector<Field> fields;
  std::size_t line = 0;  // physical line where the record starts
};

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits RFC-4180 records. Quoted fields may span lines; "" escapes a quote.
class CsvReader {
 public:
  CsvReader(std::istream& in, char delim) : in_(in), delim_(delim) {}

  bool next(Record& rec) {
    rec.fields.clear();
    int ch = in_.get();
    if (ch == EOF) return false;
    rec.line = line_ + 1;
    Field field;
    bool in_quotes = false;
    bool after_quote = false;
    for (;; ch = in_.get()) {
      if (in_quotes) {
        if (ch == EOF) throw ParseError(rec.line, "unterminated quoted field");
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.text += '"';
          } else {
            in_quotes = false;
            after_quote = true;
          }
        } else {
          if (ch == '\n') ++line_;
          field.text += static_cast<char>(ch);
        }
        continue;
      }
      if (ch == EOF || ch == '\n') {
        if (ch == '\n') ++line_;
        if (!field.text.empty() && field.text.back() == '\r' && !after_quote) field.text.pop_back();
        rec.fields.push_back(std::move(field));
        return true;
      }
      if (ch == '\r' && (in_.peek() == '\n' || in_.peek() == EOF)) continue;
      if (ch == delim_) {
        rec.fields.push_back(std::move(field));
        field = Field{};
        after_quote = false;
        continue;
      }
      if (ch == '"' && field.text.empty() && !field.quoted) {
        field.quoted = true;
        in_quotes = true;
        continue;
      }
      if (after_quote) {
        if (std::isspace(ch)) continue;
        throw ParseError(rec.line, "unexpected character after closing quote");
      }
      field.text += static_cast<char>(ch);
    }
  }

 private:
  std::istream& in_;
  char delim_;
  std::size_t line_ = 0;
};

bool parse_number(std::string_view s, double& out) noexcept {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return false;
  out = v;
  return true;
}

Cell to_cell(const Field& f, ColumnKind kind, bool& unparseable) {
  unparseable = false;
  if (f.quoted) {
    if (f.text.empty()) return Missing{};
    if (kind == ColumnKind::categorical) return f.text;
    double v = 0.0;
    if (parse_number(trim(f.text), v)) return v;
    unparseable = true;
    return Missing{};
  }
  const auto t = trim(f.text);
  if (is_missing_token(t)) return Missing{};
  if (kind == ColumnKind::categorical) return std::string(t);
  double v = 0.0;
  if (parse_number(t, v)) return v;
  unparseable = true;
  return Missing{};
}

void warn(const CsvOptions& options, std::string message) {
  if (options.warnings != nullptr) options.warnings->push_back(std::move(message));
}

}  // namespace

Table parse_csv(std::istream& in, const Schema& schema, const CsvOptions& options) {
  validate_schema(schema);
  CsvReader reader(in, options.delimiter);
  Record rec;

  // source[c] = field index feeding schema column c, or npos when absent.
  constexpr auto npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> source(schema.size(), npos);
  std::size_t arity = schema.size();

  if (options.header) {
    if (!reader.next(rec)) throw SchemaError("CSV input is empty; expected a header row");
    std::map<std::string, std::size_t, std::less<>> header;
    for (std::size_t i = 0; i < rec.fields.size(); ++i) {
      std::string name(trim(rec.fields[i].text));
      if (!header.emplace(name, i).second) warn(options, "duplicate header column '" + name + "' ignored");
    }
    for (std::size_t c = 0; c < schema.size(); ++c) {
      const auto it = header.find(schema[c].name);
      if (it != header.end()) {
        source[c] = it->second;
        header.erase(it);
        continue;
      }
      const bool optional = std::find(options.optional_columns.begin(), options.optional_columns.end(),
                                      schema[c].name) != options.optional_columns.end();
      if (!optional) throw SchemaError("CSV header is missing column '" + schema[c].name + "'");
    }
    for (const auto& [name, idx] : header) {
      (void)idx;
      warn(options, "ignoring column '" + name + "' not in schema");
    }
    arity = rec.fields.size();
  } else {
    for (std::size_t c = 0; c < schema.size(); ++c) source[c] = c;
  }

  std::vector<std::size_t> unparsed(schema.size(), 0);
  std::vector<Row> rows;
  while (reader.next(rec)) {
    if (rec.fields.size() == 1 && rec.fields[0].text.empty() && !rec.fields[0].quoted && arity > 1) {
      continue;  // blank line
    }
    if (rec.fields.size() != arity) {
      throw ParseError(rec.line, "expected " + std::to_string(arity) + " fields, found " +
                                     std::to_string(rec.fields.size()));
    }
    Row row;
    row.reserve(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (source[c] == npos) {
        row.emplace_back(Missing{});
        continue;
      }
      bool bad = false;
      row.push_back(to_cell(rec.fields[source[c]], schema[c].kind, bad));
      if (bad) ++unparsed[c];
    }
    rows.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (unparsed[c] > 0) {
      warn(options, "column '" + schema[c].name + "': " + std::to_string(unparsed[c]) +
                        " unparseable numeric value(s) treated as missing");
    }
  }
  return Table(schema, std::move(rows));
}

Table parse_csv(std::string_view text, const Schema& schema, const CsvOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_csv(in, schema, options);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

std::string quote_if_needed(std::string_view field, char delim, bool force) {
  bool needs = force;
  for (const char ch : field) {
    if (ch == delim || ch == '"' || ch == '\n' || ch == '\r') needs = true;
  }
  if (!field.empty() && (std::isspace(static_cast<unsigned char>(field.front())) ||
                         std::isspace(static_cast<unsigned char>(field.back())))) {
    needs = true;
  }
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (const char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_csv(const Table& table, char delimiter) {
  std::string out;
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    if (c > 0) out += delimiter;
    out += quote_if_needed(table.schema()[c].name, delimiter, false);
  }
  out += '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += delimiter;
      const Cell& cell = row[c];
      if (const auto* v = std::get_if<double>(&cell)) {
        out += format_double(*v);
      } else if (const auto* s = std::get_if<std::string>(&cell)) {
        out += quote_if_needed(*s, delimiter, is_missing_token(*s));
      }
    }
    out += '\n';
  }
  return out;
}

Table load_disease(DiseaseId id, const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_csv(in, builtin_schema(id), options);
}

}  // namespace clinpred
