#ifndef ODG_TEST_SUPPORT_HPP
#define ODG_TEST_SUPPORT_HPP

#include <filesystem>
#include <string>
#include <string_view>

namespace odg::test {

/// Root of tests/fixtures in the source tree.
std::filesystem::path fixture_dir();
std::filesystem::path fixture(std::string_view relative);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag = "odg");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace odg::test

#endif
