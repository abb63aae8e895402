#ifndef ODG_COMMON_HPP
#define ODG_COMMON_HPP

#include <compare>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace odg {

/// Calendar date without time zone. Month and day default to 1 when a source
/// only gives a year.
struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  /// Accepts YYYY/MM/DD, YYYY-MM-DD, YYYY/MM, YYYY-MM and YYYY.
  static std::optional<Date> parse(std::string_view text);
  static Date today_utc();

  std::string iso() const;     // YYYY-MM-DD
  std::string entrez() const;  // YYYY/MM/DD
  bool valid() const;

  auto operator<=>(const Date&) const = default;
};

// Identifier shape checks.
bool is_cui(std::string_view s);          // C followed by 7 digits
bool is_mesh_ui(std::string_view s);      // D\d+ or C\d+
bool is_drugbank_id(std::string_view s);  // DB followed by 5 digits
bool is_pmid(std::string_view s);         // nonempty, all digits

std::string to_lower_ascii(std::string_view s);
std::string to_upper_ascii(std::string_view s);
std::string_view trim(std::string_view s);
/// Collapses whitespace runs to one space and trims both ends.
std::string collapse_whitespace(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char delimiter);
bool is_word_byte(unsigned char c);

std::string sha256_hex(std::string_view data);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file and renames, so readers never observe a
/// partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace odg

#endif
