#include "report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <memory>
#include <ostream>
#include <stdexcept>

#include <openssl/evp.h>

#ifndef EXTMORPH_VERSION
#define EXTMORPH_VERSION "0.0.0"
#endif

namespace extmorph::cli {

using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
    throw std::runtime_error("sha256 failed");
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    std::array<char, 3> b{};
    std::snprintf(b.data(), b.size(), "%02x", md[i]);
    hex += b.data();
  }
  return hex;
}

Report::Report(std::string command, json options, std::string input_digest)
    : command_(std::move(command)), options_(std::move(options)), input_digest_(std::move(input_digest)) {}

void Report::add(std::vector<ReportEntry> es) {
  for (auto& e : es) entries_.push_back(std::move(e));
}

Summary Report::summary() const {
  Summary s;
  for (const auto& e : entries_) switch (e.status.status) {
      case Status::pass: ++s.pass; break;
      case Status::fail: ++s.fail; break;
      case Status::inapplicable: ++s.inapplicable; break;
    }
  return s;
}

json Report::to_json(bool with_timings) const {
  std::vector<const ReportEntry*> sorted;
  for (const auto& e : entries_) sorted.push_back(&e);
  std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
  json entries = json::array();
  double total = 0;
  for (const ReportEntry* e : sorted) {
    json j{{"id", e->id}, {"status", to_string(e->status.status)}};
    if (!e->status.witness.is_null()) j["witness"] = e->status.witness;
    if (!e->status.stats.empty()) j["stats"] = e->status.stats;
    if (with_timings) j["timing_ms"] = e->timing_ms;
    total += e->timing_ms;
    entries.push_back(std::move(j));
  }
  const Summary s = summary();
  json doc{{"tool", "extmorph"},
           {"version", EXTMORPH_VERSION},
           {"command", command_},
           {"options", options_},
           {"input_digest", input_digest_},
           {"entries", std::move(entries)},
           {"summary", {{"total", entries_.size()}, {"pass", s.pass}, {"fail", s.fail}, {"inapplicable", s.inapplicable}}}};
  if (with_timings) {
    doc["report_digest"] = sha256_hex(digest_relevant(doc).dump());
    doc["timing_ms"] = total;
  }
  return doc;
}

std::string Report::digest() const { return sha256_hex(to_json(false).dump()); }

int Report::exit_code(bool strict) const {
  const Summary s = summary();
  if (s.fail > 0) return 1;
  if (strict && s.inapplicable > 0) return 1;
  return 0;
}

void Report::print(std::ostream& out) const {
  std::vector<const ReportEntry*> sorted;
  for (const auto& e : entries_) sorted.push_back(&e);
  std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (const ReportEntry* e : sorted) {
    const char* tag = e->status.status == Status::pass ? "PASS" : e->status.failed() ? "FAIL" : "N/A ";
    out << tag << "  " << e->id;
    if (!e->status.passed()) {
      std::string w = e->status.witness.dump();
      if (w.size() > 160) w = w.substr(0, 157) + "...";
      out << "  " << w;
    }
    out << '\n';
  }
  const Summary s = summary();
  out << entries_.size() << " checks: " << s.pass << " pass, " << s.fail << " fail, " << s.inapplicable
      << " inapplicable\n";
}

json digest_relevant(json report) {
  report.erase("timing_ms");
  report.erase("report_digest");
  if (report.contains("entries"))
    for (auto& e : report["entries"]) e.erase("timing_ms");
  return report;
}

}  // namespace extmorph::cli
