#include "clinpred/artifact.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "clinpred/errors.hpp"
#include "clinpred/ingest.hpp"
#include "clinpred/rng.hpp"

namespace clinpred {
namespace {

bool is_safe(unsigned char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-' || c == '.' || c == '+' || c == ':' || c == '/' || c == '?' || c == '(' || c == ')';
}

int hex_value(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string encode_token(std::string_view text) {
  if (text.empty()) return "%";
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_safe(c)) {
      out += ch;
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string decode_token(std::string_view token) {
  if (token == "%") return {};
  std::string out;
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (token[i] != '%') {
      out += token[i];
      continue;
    }
    if (i + 2 >= token.size()) {
      throw ArtifactFormatError("bad escape in token '" + std::string(token) + "'");
    }
    const int hi = hex_value(token[i + 1]);
    const int lo = hex_value(token[i + 2]);
    if (hi < 0 || lo < 0) throw ArtifactFormatError("bad escape in token '" + std::string(token) + "'");
    out += static_cast<char>(hi * 16 + lo);
    i += 2;
  }
  return out;
}

ArtifactWriter::Line& ArtifactWriter::Line::operator<<(double v) { return raw(format_double(v)); }
ArtifactWriter::Line& ArtifactWriter::Line::operator<<(std::int64_t v) { return raw(std::to_string(v)); }
ArtifactWriter::Line& ArtifactWriter::Line::operator<<(std::uint64_t v) { return raw(std::to_string(v)); }

ArtifactWriter::ArtifactWriter(std::string_view type) {
  buf_ += kArtifactTag;
  buf_ += ' ';
  buf_ += std::to_string(kArtifactVersion);
  buf_ += '\n';
  put("type") << type;
}

std::string ArtifactWriter::finish() && {
  const std::uint64_t sum = fnv1a64(buf_);
  buf_ += "checksum ";
  buf_ += hex16(sum);
  buf_ += '\n';
  return std::move(buf_);
}

ArtifactReader::ArtifactReader(std::string_view bytes) : storage_(bytes) {
  std::string_view all(storage_);
  constexpr std::string_view kTrailer = "checksum ";
  std::size_t trailer = std::string_view::npos;
  if (all.starts_with(kTrailer)) trailer = 0;
  const auto found = all.rfind(std::string("\n") + std::string(kTrailer));
  if (found != std::string_view::npos) trailer = found + 1;
  if (trailer == std::string_view::npos || !all.ends_with('\n')) {
    throw TruncatedArtifactError("artifact is truncated: checksum trailer not found");
  }

  std::string_view digits = all.substr(trailer + kTrailer.size());
  digits.remove_suffix(1);
  std::uint64_t stored = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), stored, 16);
  if (digits.size() != 16 || ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw ChecksumError("artifact checksum trailer is malformed");
  }
  const std::string_view body = all.substr(0, trailer);
  if (fnv1a64(body) != stored) throw ChecksumError("artifact checksum mismatch: content is corrupt");

  std::size_t pos = 0;
  while (pos < body.size()) {
    auto end = body.find('\n', pos);
    if (end == std::string_view::npos) end = body.size();
    lines_.push_back(body.substr(pos, end - pos));
    pos = end + 1;
  }
  if (lines_.empty()) throw ArtifactFormatError("artifact has no header");
  const std::string_view header = lines_.front();
  if (!header.starts_with(kArtifactTag) || header.size() <= kArtifactTag.size() ||
      header[kArtifactTag.size()] != ' ') {
    throw ArtifactFormatError("not a clinpred artifact");
  }
  const std::string_view version = header.substr(kArtifactTag.size() + 1);
  if (version != std::to_string(kArtifactVersion)) {
    throw VersionError("unsupported artifact version '" + std::string(version) + "' (this build reads " +
                       std::to_string(kArtifactVersion) + ")");
  }
  pos_ = 1;
  type_ = text("type");
}

std::string_view ArtifactReader::peek_key() const {
  if (done()) return {};
  const auto line = lines_[pos_];
  return line.substr(0, line.find(' '));
}

void ArtifactReader::fail(const std::string& what) const {
  throw ArtifactFormatError("artifact line " + std::to_string(pos_ + 1) + ": " + what);
}

std::vector<std::string_view> ArtifactReader::next(std::string_view key) {
  if (done()) fail("unexpected end of artifact, expected '" + std::string(key) + "'");
  const std::string_view line = lines_[pos_];
  if (peek_key() != key) fail("expected '" + std::string(key) + "', found '" + std::string(peek_key()) + "'");
  ++pos_;
  std::vector<std::string_view> tokens;
  std::size_t start = key.size();
  while (start < line.size()) {
    if (line[start] != ' ') fail("malformed token separator");
    ++start;
    auto end = line.find(' ', start);
    if (end == std::string_view::npos) end = line.size();
    tokens.push_back(line.substr(start, end - start));
    start = end;
  }
  return tokens;
}

std::vector<std::string_view> ArtifactReader::next(std::string_view key, std::size_t tokens) {
  auto out = next(key);
  if (out.size() != tokens) {
    --pos_;
    fail("'" + std::string(key) + "' expects " + std::to_string(tokens) + " value(s), found " +
         std::to_string(out.size()));
  }
  return out;
}

double ArtifactReader::to_number(std::string_view token) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ArtifactFormatError("'" + std::string(token) + "' is not a finite number");
  }
  return v;
}

std::int64_t ArtifactReader::to_integer(std::string_view token) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ArtifactFormatError("'" + std::string(token) + "' is not an integer");
  }
  return v;
}

std::uint64_t ArtifactReader::to_unsigned(std::string_view token) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ArtifactFormatError("'" + std::string(token) + "' is not an unsigned integer");
  }
  return v;
}

double ArtifactReader::number(std::string_view key) { return to_number(next(key, 1)[0]); }
std::int64_t ArtifactReader::integer(std::string_view key) { return to_integer(next(key, 1)[0]); }
std::uint64_t ArtifactReader::unsigned_integer(std::string_view key) { return to_unsigned(next(key, 1)[0]); }

bool ArtifactReader::boolean(std::string_view key) {
  const auto t = next(key, 1)[0];
  if (t == "1") return true;
  if (t == "0") return false;
  fail("'" + std::string(key) + "' must be 0 or 1");
}

std::string ArtifactReader::text(std::string_view key) { return decode_token(next(key, 1)[0]); }

std::vector<double> ArtifactReader::numbers(std::string_view key) {
  const auto tokens = next(key);
  if (tokens.empty()) fail("'" + std::string(key) + "' needs a count");
  const auto count = to_unsigned(tokens[0]);
  if (count != tokens.size() - 1) fail("'" + std::string(key) + "' count does not match its values");
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 1; i < tokens.size(); ++i) out.push_back(to_number(tokens[i]));
  return out;
}

}  // namespace clinpred
