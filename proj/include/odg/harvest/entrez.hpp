#ifndef ODG_HARVEST_ENTREZ_HPP
#define ODG_HARVEST_ENTREZ_HPP

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "odg/common.hpp"
#include "odg/harvest/medline.hpp"
#include "odg/records.hpp"

namespace odg::harvest {

inline constexpr std::string_view kDefaultEntrezBaseUrl = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils";

struct ApiCredentials {
  std::string api_key;
  std::string email;
};

/// What to harvest and how politely.
struct HarvestConfig {
  std::string disease_mesh_descriptor;
  std::string disease_mesh_ui;
  /// Entry-date floor for incremental harvests (inclusive).
  std::optional<Date> date_floor;
  std::size_t fulltext_cap = 10000;
  /// Requests per second.
  double rate_limit = 3.0;
  std::optional<ApiCredentials> api_credentials;
  std::string base_url = std::string(kDefaultEntrezBaseUrl);

  std::size_t search_page_size = 10000;
  /// Ids per efetch / elink request; never more than kMaxFetchBatch.
  std::size_t fetch_batch_size = 200;
  std::size_t fetch_workers = 1;
  /// Ask elink for PMC ids that the citation itself does not list.
  bool lookup_missing_pmcids = true;

  static constexpr std::size_t kMaxFetchBatch = 200;

  /// Throws ValidationError.
  void validate() const;
};

using QueryParams = std::vector<std::pair<std::string, std::string>>;

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// GET against an E-utilities style service. `endpoint` is the script name,
/// e.g. "esearch.fcgi". Throws TransportError when no response arrives.
class Transport {
public:
  virtual ~Transport() = default;
  virtual HttpResponse get(std::string_view endpoint, const QueryParams& params) = 0;
};

/// Transport over HTTP(S) rooted at `base_url`.
std::unique_ptr<Transport> make_http_transport(const std::string& base_url,
                                               std::chrono::seconds timeout = std::chrono::seconds(60));

using SleepFn = std::function<void(std::chrono::steady_clock::duration)>;
using NowFn = std::function<std::chrono::steady_clock::time_point()>;

/// Spaces request starts at least 1/rate apart. Shared by all fetch workers;
/// the reservation happens under a lock and the wait outside it.
class RateLimiter {
public:
  explicit RateLimiter(double per_second, NowFn now = {}, SleepFn sleep = {});

  /// Blocks until the caller may issue its request. Returns the granted slot.
  std::chrono::steady_clock::time_point acquire();

  std::chrono::steady_clock::duration interval() const { return interval_; }

private:
  std::chrono::steady_clock::duration interval_;
  NowFn now_;
  SleepFn sleep_;
  std::mutex mutex_;
  std::optional<std::chrono::steady_clock::time_point> next_slot_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{16000};
};

/// Documents that were requested but not delivered, with the reason.
/// Append-only and safe to share between fetch workers.
class SkipReport {
public:
  struct Entry {
    std::string pmid;
    std::string reason;
    bool operator==(const Entry&) const = default;
  };

  void add(std::string pmid, std::string reason);
  /// Entries sorted by pmid then reason.
  std::vector<Entry> entries() const;
  std::size_t size() const;
  std::size_t failed_batches() const { return failed_batches_; }
  void note_failed_batch() { ++failed_batches_; }

private:
  mutable std::mutex mutex_;
  std::vector<Entry> entries_;
  std::atomic<std::size_t> failed_batches_{0};
};

/// Entrez E-utilities client: esearch, efetch (pubmed, pmc) and elink.
class EntrezClient {
public:
  EntrezClient(HarvestConfig config, Transport& transport, RetryPolicy retry = {}, SleepFn sleep = {},
               NowFn now = {});

  /// All PMIDs indexed with the configured MeSH descriptor, restricted to entry
  /// dates on or after the date floor when one is set. Duplicate-free, in
  /// service order; pages are fetched until the reported count is reached.
  std::vector<std::string> search_disease_pmids();

  /// Raw MEDLINE documents for `pmids` (which must be duplicate-free), in
  /// request order. Ids the service does not return are added to `skips`, as
  /// are all ids of a batch whose request keeps failing.
  std::vector<RawDocument> fetch_medline_records(std::span<const std::string> pmids, SkipReport& skips);

  /// PMID -> PMCID for the ids that have a PMC record.
  std::map<std::string, std::string> lookup_pmcids(std::span<const std::string> pmids);

  /// Raw PMC XML for one article ("PMC123" or "123").
  std::string fetch_pmc(std::string_view pmcid);

  const HarvestConfig& config() const { return config_; }
  std::size_t requests_made() const { return requests_.load(); }

private:
  HttpResponse request(std::string_view endpoint, QueryParams params);

  HarvestConfig config_;
  Transport& transport_;
  RetryPolicy retry_;
  SleepFn sleep_;
  RateLimiter limiter_;
  std::atomic<std::size_t> requests_{0};
};

struct FullTextStats {
  std::size_t fetched = 0;
  std::size_t skipped_due_to_cap = 0;
  std::size_t without_pmcid = 0;
  std::size_t unavailable = 0;
  std::vector<std::string> warnings;
};

/// Attaches PMC full text to article records until the cap is reached.
class FullTextHarvester {
public:
  FullTextHarvester(EntrezClient& client, std::size_t cap) : client_(client), cap_(cap) {}

  /// Returns the record with fulltext_body filled in when PMC has a body for
  /// it. Records without a pmcid, beyond the cap, or whose PMC document has
  /// no body come back unchanged (the latter with a warning).
  ArticleRecord fetch_and_parse_pmc(ArticleRecord record);

  const FullTextStats& stats() const { return stats_; }

private:
  EntrezClient& client_;
  std::size_t cap_;
  FullTextStats stats_;
};

struct LiteratureHarvest {
  std::vector<std::string> searched_pmids;
  std::vector<ArticleRecord> articles;
  std::vector<SkipReport::Entry> skipped;
  std::size_t failed_batches = 0;
  FullTextStats fulltext;
};

/// search -> fetch -> parse -> PMC id lookup -> full text, in that order.
LiteratureHarvest harvest_literature(EntrezClient& client);

}  // namespace odg::harvest

#endif
