#include "odg/harvest/entrez.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "odg/error.hpp"

namespace odg::harvest {

using Clock = std::chrono::steady_clock;

void HarvestConfig::validate() const {
  if (trim(disease_mesh_descriptor).empty()) throw ValidationError("disease MeSH descriptor name is empty");
  if (!disease_mesh_ui.empty() && !is_mesh_ui(disease_mesh_ui))
    throw ValidationError("disease MeSH UI '" + disease_mesh_ui + "' is not a descriptor UI");
  if (!(rate_limit > 0)) throw ValidationError("rate_limit must be positive");
  if (base_url.empty()) throw ValidationError("Entrez base URL is empty");
  if (search_page_size == 0) throw ValidationError("search page size must be positive");
  if (fetch_batch_size == 0) throw ValidationError("fetch batch size must be positive");
  if (date_floor && !date_floor->valid()) throw ValidationError("date floor is not a valid date");
}

RateLimiter::RateLimiter(double per_second, NowFn now, SleepFn sleep)
    : interval_(std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / per_second))),
      now_(now ? std::move(now) : NowFn([] { return Clock::now(); })),
      sleep_(sleep ? std::move(sleep) : SleepFn([](Clock::duration d) { std::this_thread::sleep_for(d); })) {
  if (!(per_second > 0)) throw ContractViolation("rate limit must be positive");
}

Clock::time_point RateLimiter::acquire() {
  Clock::time_point slot;
  Clock::time_point now;
  {
    std::lock_guard lock(mutex_);
    now = now_();
    slot = next_slot_ ? std::max(now, *next_slot_) : now;
    next_slot_ = slot + interval_;
  }
  if (slot > now) sleep_(slot - now);
  return slot;
}

void SkipReport::add(std::string pmid, std::string reason) {
  std::lock_guard lock(mutex_);
  entries_.push_back(Entry{std::move(pmid), std::move(reason)});
}

std::vector<SkipReport::Entry> SkipReport::entries() const {
  std::vector<Entry> out;
  {
    std::lock_guard lock(mutex_);
    out = entries_;
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.pmid, a.reason) < std::tie(b.pmid, b.reason);
  });
  return out;
}

std::size_t SkipReport::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

namespace {

std::string join_ids(std::span<const std::string> ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ',';
    out += id;
  }
  return out;
}

json parse_json_body(const std::string& body, std::string_view what) {
  try {
    return json::parse(body);
  } catch (const json::parse_error&) {
    throw ParseError("malformed " + std::string(what) + " response: body is not JSON");
  }
}

std::size_t parse_count(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (is_pmid(s)) return std::stoull(s);
  }
  throw ParseError("malformed esearch response: field 'esearchresult.count' is not a count");
}

}  // namespace

EntrezClient::EntrezClient(HarvestConfig config, Transport& transport, RetryPolicy retry, SleepFn sleep, NowFn now)
    : config_(std::move(config)),
      transport_(transport),
      retry_(retry),
      sleep_(sleep ? std::move(sleep) : SleepFn([](Clock::duration d) { std::this_thread::sleep_for(d); })),
      limiter_(config_.rate_limit, std::move(now), sleep_) {
  config_.validate();
  config_.fetch_batch_size = std::min(config_.fetch_batch_size, HarvestConfig::kMaxFetchBatch);
  config_.fetch_workers = std::max<std::size_t>(config_.fetch_workers, 1);
}

HttpResponse EntrezClient::request(std::string_view endpoint, QueryParams params) {
  params.emplace_back("tool", "odg");
  if (config_.api_credentials) {
    if (!config_.api_credentials->api_key.empty()) params.emplace_back("api_key", config_.api_credentials->api_key);
    if (!config_.api_credentials->email.empty()) params.emplace_back("email", config_.api_credentials->email);
  }
  auto backoff = std::chrono::duration_cast<Clock::duration>(retry_.initial_backoff);
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    limiter_.acquire();
    ++requests_;
    std::optional<HttpResponse> response;
    try {
      response = transport_.get(endpoint, params);
    } catch (const TransportError& e) {
      last_error = e.what();
    }
    if (response) {
      if (response->status == 200) return std::move(*response);
      last_error = "HTTP " + std::to_string(response->status);
      // Only throttling and server-side errors are worth another attempt.
      if (response->status != 429 && response->status < 500)
        throw TransportError(std::string(endpoint) + ": " + last_error);
    }
    if (attempt < retry_.max_attempts) {
      sleep_(backoff);
      backoff = std::min(std::chrono::duration_cast<Clock::duration>(backoff * retry_.multiplier),
                         std::chrono::duration_cast<Clock::duration>(retry_.max_backoff));
    }
  }
  throw TransportError(std::string(endpoint) + ": giving up after " + std::to_string(retry_.max_attempts) +
                       " attempts: " + last_error);
}

std::vector<std::string> EntrezClient::search_disease_pmids() {
  std::vector<std::string> pmids;
  std::unordered_set<std::string> seen;
  const std::string term = "\"" + config_.disease_mesh_descriptor + "\"[MeSH Terms]";
  std::size_t retstart = 0;
  // TODO: esearch cannot page past 10,000 hits; split larger result sets into entry-date windows.
  while (true) {
    QueryParams params{{"db", "pubmed"},
                       {"term", term},
                       {"retmode", "json"},
                       {"usehistory", "y"},
                       {"retstart", std::to_string(retstart)},
                       {"retmax", std::to_string(config_.search_page_size)}};
    if (config_.date_floor) {
      params.emplace_back("datetype", "edat");
      params.emplace_back("mindate", config_.date_floor->entrez());
      params.emplace_back("maxdate", "3000/12/31");
    }
    const auto body = parse_json_body(request("esearch.fcgi", std::move(params)).body, "esearch");
    if (!body.is_object() || !body.contains("esearchresult"))
      throw ParseError("malformed esearch response: missing field 'esearchresult'");
    const auto& result = body.at("esearchresult");
    if (result.contains("ERROR"))
      throw ParseError("esearch reported an error: " + result.at("ERROR").dump());
    if (!result.contains("count")) throw ParseError("malformed esearch response: missing field 'esearchresult.count'");
    const std::size_t total = parse_count(result.at("count"));
    if (total == 0) break;
    if (!result.contains("idlist") || !result.at("idlist").is_array())
      throw ParseError("malformed esearch response: field 'esearchresult.idlist' is missing or not an array");
    const auto& ids = result.at("idlist");
    for (const auto& id : ids) {
      if (!id.is_string() || !is_pmid(id.get<std::string>()))
        throw ParseError("malformed esearch response: field 'esearchresult.idlist' holds a non-PMID entry " +
                         id.dump());
      auto pmid = id.get<std::string>();
      if (seen.insert(pmid).second) pmids.push_back(std::move(pmid));
    }
    if (ids.empty()) break;
    retstart += ids.size();
    if (retstart >= total) break;
  }
  return pmids;
}

std::vector<RawDocument> EntrezClient::fetch_medline_records(std::span<const std::string> pmids, SkipReport& skips) {
  const std::size_t batch = config_.fetch_batch_size;
  const std::size_t batches = (pmids.size() + batch - 1) / batch;
  std::vector<std::vector<RawDocument>> results(batches);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t b = next++; b < batches; b = next++) {
      const auto ids = pmids.subspan(b * batch, std::min(batch, pmids.size() - b * batch));
      std::vector<RawDocument> docs;
      try {
        const auto response =
            request("efetch.fcgi", {{"db", "pubmed"}, {"retmode", "xml"}, {"id", join_ids(ids)}});
        docs = split_pubmed_article_set(response.body);
      } catch (const std::runtime_error& e) {
        skips.note_failed_batch();
        for (const auto& id : ids) skips.add(id, std::string("batch failed: ") + e.what());
        continue;
      }
      std::unordered_map<std::string, RawDocument*> by_pmid;
      for (auto& d : docs) by_pmid.emplace(d.pmid, &d);
      auto& out = results[b];
      for (const auto& id : ids) {
        auto it = by_pmid.find(id);
        if (it == by_pmid.end()) {
          skips.add(id, "not returned by efetch");
          continue;
        }
        out.push_back(std::move(*it->second));
        by_pmid.erase(it);
      }
    }
  };

  const std::size_t workers = std::min(config_.fetch_workers, std::max<std::size_t>(batches, 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  std::vector<RawDocument> docs;
  for (auto& r : results)
    for (auto& d : r) docs.push_back(std::move(d));
  return docs;
}

std::map<std::string, std::string> EntrezClient::lookup_pmcids(std::span<const std::string> pmids) {
  std::map<std::string, std::string> out;
  const std::size_t batch = config_.fetch_batch_size;
  for (std::size_t start = 0; start < pmids.size(); start += batch) {
    const auto ids = pmids.subspan(start, std::min(batch, pmids.size() - start));
    QueryParams params{{"dbfrom", "pubmed"}, {"db", "pmc"}, {"linkname", "pubmed_pmc"}, {"retmode", "json"}};
    // One id parameter per PMID keeps the link sets one-to-one with the input.
    for (const auto& id : ids) params.emplace_back("id", id);
    const auto body = parse_json_body(request("elink.fcgi", std::move(params)).body, "elink");
    if (!body.is_object() || !body.contains("linksets") || !body.at("linksets").is_array())
      throw ParseError("malformed elink response: missing field 'linksets'");
    for (const auto& set : body.at("linksets")) {
      if (!set.contains("ids") || !set.at("ids").is_array() || set.at("ids").empty())
        throw ParseError("malformed elink response: field 'linksets.ids' is missing");
      const auto pmid = set.at("ids").at(0).is_string() ? set.at("ids").at(0).get<std::string>()
                                                        : set.at("ids").at(0).dump();
      if (!set.contains("linksetdbs")) continue;
      for (const auto& db : set.at("linksetdbs")) {
        if (db.value("linkname", "") != "pubmed_pmc" || !db.contains("links") || db.at("links").empty()) continue;
        const auto& link = db.at("links").at(0);
        out[pmid] = "PMC" + (link.is_string() ? link.get<std::string>() : link.dump());
      }
    }
  }
  return out;
}

std::string EntrezClient::fetch_pmc(std::string_view pmcid) {
  if (pmcid.starts_with("PMC")) pmcid.remove_prefix(3);
  return request("efetch.fcgi", {{"db", "pmc"}, {"retmode", "xml"}, {"id", std::string(pmcid)}}).body;
}

ArticleRecord FullTextHarvester::fetch_and_parse_pmc(ArticleRecord record) {
  if (!record.pmcid) {
    ++stats_.without_pmcid;
    return record;
  }
  if (stats_.fetched >= cap_) {
    ++stats_.skipped_due_to_cap;
    return record;
  }
  std::optional<std::string> body;
  try {
    body = parse_pmc_body(client_.fetch_pmc(*record.pmcid));
  } catch (const std::runtime_error& e) {
    ++stats_.unavailable;
    stats_.warnings.push_back(*record.pmcid + ": " + e.what());
    return record;
  }
  if (!body) {
    ++stats_.unavailable;
    stats_.warnings.push_back(*record.pmcid + ": PMC document has no body text");
    return record;
  }
  record.fulltext_body = std::move(body);
  ++stats_.fetched;
  return record;
}

LiteratureHarvest harvest_literature(EntrezClient& client) {
  LiteratureHarvest h;
  h.searched_pmids = client.search_disease_pmids();

  SkipReport skips;
  const auto docs = client.fetch_medline_records(h.searched_pmids, skips);
  for (const auto& doc : docs) {
    try {
      auto rec = parse_medline_xml(doc.xml);
      if (rec.pmid != doc.pmid) {
        skips.add(doc.pmid, "document carries PMID " + rec.pmid);
        continue;
      }
      h.articles.push_back(std::move(rec));
    } catch (const ParseError& e) {
      skips.add(doc.pmid, std::string("parse error: ") + e.what());
    }
  }

  if (client.config().lookup_missing_pmcids) {
    std::vector<std::string> missing;
    for (const auto& a : h.articles)
      if (!a.pmcid) missing.push_back(a.pmid);
    if (!missing.empty()) {
      try {
        const auto found = client.lookup_pmcids(missing);
        for (auto& a : h.articles) {
          if (auto it = found.find(a.pmid); !a.pmcid && it != found.end()) a.pmcid = it->second;
        }
      } catch (const std::runtime_error& e) {
        h.fulltext.warnings.push_back(std::string("PMC id lookup failed: ") + e.what());
      }
    }
  }

  FullTextHarvester fulltext(client, client.config().fulltext_cap);
  for (auto& a : h.articles) a = fulltext.fetch_and_parse_pmc(std::move(a));
  auto warnings = std::move(h.fulltext.warnings);
  h.fulltext = fulltext.stats();
  h.fulltext.warnings.insert(h.fulltext.warnings.begin(), warnings.begin(), warnings.end());

  h.skipped = skips.entries();
  h.failed_batches = skips.failed_batches();
  return h;
}

}  // namespace odg::harvest
