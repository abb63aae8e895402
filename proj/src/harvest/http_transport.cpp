#include <httplib.h>

#include "odg/error.hpp"
#include "odg/harvest/entrez.hpp"

namespace odg::harvest {

namespace {

class HttpTransport final : public Transport {
public:
  HttpTransport(const std::string& base_url, std::chrono::seconds timeout) : timeout_(timeout) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) throw ValidationError("base URL needs a scheme: " + base_url);
    const auto path_start = base_url.find('/', scheme_end + 3);
    origin_ = base_url.substr(0, path_start);
    if (path_start != std::string::npos) prefix_ = base_url.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }

  HttpResponse get(std::string_view endpoint, const QueryParams& params) override {
    // A client per call: requests may come from several fetch workers at once.
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_follow_location(true);
    httplib::Params query;
    for (const auto& [k, v] : params) query.emplace(k, v);
    const std::string path = prefix_ + "/" + std::string(endpoint);
    auto result = client.Get(path, query, httplib::Headers{});
    if (!result) throw TransportError(path + ": " + httplib::to_string(result.error()));
    return HttpResponse{result->status, std::move(result->body)};
  }

private:
  std::string origin_;
  std::string prefix_;
  std::chrono::seconds timeout_;
};

}  // namespace

std::unique_ptr<Transport> make_http_transport(const std::string& base_url, std::chrono::seconds timeout) {
  return std::make_unique<HttpTransport>(base_url, timeout);
}

}  // namespace odg::harvest
