#include "support.hpp"

#include <atomic>
#include <random>

#include <unistd.h>

namespace odg::test {

std::filesystem::path fixture_dir() { return ODG_FIXTURE_DIR; }

std::filesystem::path fixture(std::string_view relative) { return fixture_dir() / relative; }

TempDir::TempDir(std::string_view tag) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  const auto name = std::string(tag) + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
                    std::to_string(rd());
  path_ = std::filesystem::temp_directory_path() / name;
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace odg::test
