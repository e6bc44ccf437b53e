#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "extmorph/extensivity.hpp"

namespace extmorph::cli {

std::string sha256_hex(std::string_view bytes);

struct ReportEntry {
  std::string id;
  CheckStatus status;
  double timing_ms = 0.0;
};

struct Summary {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t inapplicable = 0;
};

class Report {
 public:
  Report(std::string command, nlohmann::json options, std::string input_digest);

  void add(ReportEntry e) { entries_.push_back(std::move(e)); }
  void add(std::vector<ReportEntry> es);

  [[nodiscard]] Summary summary() const;
  [[nodiscard]] const std::vector<ReportEntry>& entries() const { return entries_; }

  // Entries sorted by id. Without timings the document is a pure function of
  // the inputs; `digest` hashes exactly that form.
  [[nodiscard]] nlohmann::json to_json(bool with_timings = true) const;
  [[nodiscard]] std::string digest() const;

  // 0 when nothing failed; 1 on a fail, or on an inapplicable entry under strict.
  [[nodiscard]] int exit_code(bool strict) const;

  void print(std::ostream& out) const;

 private:
  std::string command_;
  nlohmann::json options_;
  std::string input_digest_;
  std::vector<ReportEntry> entries_;
};

// The report document with every timing field removed.
nlohmann::json digest_relevant(nlohmann::json report);

}  // namespace extmorph::cli
