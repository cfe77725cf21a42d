#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace clinpred {

/// Text container shared by model and pipeline artifacts:
///
///   clinpred-artifact <version>
///   type <type>
///   <key> <token> <token> ...
///   ...
///   checksum <16 hex digits of FNV-1a 64 over every preceding byte>
///
/// Tokens are space separated; strings are percent-encoded so they never
/// contain spaces or newlines.
inline constexpr std::string_view kArtifactTag = "clinpred-artifact";
inline constexpr int kArtifactVersion = 1;

std::string encode_token(std::string_view text);
std::string decode_token(std::string_view token);

class ArtifactWriter {
 public:
  class Line {
   public:
    Line(std::string& buf, std::string_view key) : buf_(buf) { buf_ += key; }
    Line(const Line&) = delete;
    Line& operator=(const Line&) = delete;
    ~Line() { buf_ += '\n'; }

    Line& operator<<(double v);
    Line& operator<<(std::int64_t v);
    Line& operator<<(std::uint64_t v);
    Line& operator<<(int v) { return *this << static_cast<std::int64_t>(v); }
    Line& operator<<(bool v) { return raw(v ? "1" : "0"); }
    Line& operator<<(std::string_view text) { return raw(encode_token(text)); }
    Line& operator<<(const std::string& text) { return *this << std::string_view(text); }
    Line& operator<<(const char* text) { return *this << std::string_view(text); }

   private:
    Line& raw(std::string_view token) {
      buf_ += ' ';
      buf_ += token;
      return *this;
    }
    std::string& buf_;
  };

  explicit ArtifactWriter(std::string_view type);

  Line put(std::string_view key) { return Line(buf_, key); }
  /// Appends the checksum trailer and returns the artifact bytes.
  std::string finish() &&;

 private:
  std::string buf_;
};

class ArtifactReader {
 public:
  /// Verifies trailer, checksum and version, in that order.
  explicit ArtifactReader(std::string_view bytes);

  const std::string& type() const noexcept { return type_; }
  bool done() const noexcept { return pos_ >= lines_.size(); }
  std::string_view peek_key() const;

  /// Tokens of the next line, which must carry `key`.
  std::vector<std::string_view> next(std::string_view key);
  /// Like next() but also checks the token count.
  std::vector<std::string_view> next(std::string_view key, std::size_t tokens);

  double number(std::string_view key);
  std::int64_t integer(std::string_view key);
  std::uint64_t unsigned_integer(std::string_view key);
  bool boolean(std::string_view key);
  std::string text(std::string_view key);
  std::vector<double> numbers(std::string_view key);

  static double to_number(std::string_view token);
  static std::int64_t to_integer(std::string_view token);
  static std::uint64_t to_unsigned(std::string_view token);

  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::string storage_;
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
  std::string type_;
};

}  // namespace clinpred
