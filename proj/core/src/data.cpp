// Copyright 2026 The svme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svme/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "svme/metrics.hpp"
#include "svme/random.hpp"

namespace svme {
namespace {

// Zipf sampler over [0, d): coordinate r is drawn with probability
// proportional to (r + 1)^(-s).  Sampling without replacement is done by
// rejection against an epoch-stamped "used" table, which is O(1) to reset
// between clients.
class ZipfSampler {
 public:
  ZipfSampler(std::uint64_t d, double s) : cdf_(d), used_(d, 0), epoch_(0) {
    double acc = 0.0;
    for (std::uint64_t r = 0; r < d; ++r) {
      acc += std::pow(static_cast<double>(r + 1), -s);
      cdf_[r] = acc;
    }
    total_ = acc;
  }

  // Draws `count` distinct coordinates into `out` (sorted not required).
  void sample_distinct(std::uint64_t count, Rng& rng,
                       std::vector<std::uint32_t>& out) {
    ++epoch_;
    out.clear();
    const std::uint64_t d = cdf_.size();
    if (count == d) {  // degenerate case: every coordinate is selected
      for (std::uint64_t r = 0; r < d; ++r) {
        out.push_back(static_cast<std::uint32_t>(r));
      }
      return;
    }
    while (out.size() < count) {
      const double u = rng.next_unit() * total_;
      const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
      auto r = static_cast<std::uint64_t>(
          std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                   static_cast<std::ptrdiff_t>(d) - 1));
      if (used_[r] == epoch_) continue;  // rejection: already picked
      used_[r] = epoch_;
      out.push_back(static_cast<std::uint32_t>(r));
    }
  }

 private:
  std::vector<double> cdf_;
  std::vector<std::uint64_t> used_;
  std::uint64_t epoch_;
  double total_ = 0.0;
};

double parse_strict_double(const std::string& s, std::uint64_t line,
                           const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "line " << line << ": bad " << what << " '" << s << "'";
    throw std::runtime_error(msg.str());
  }
  return v;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) {
    --e;
  }
  return s.substr(b, e - b);
}

}  // namespace

Dataset gen_synthetic(std::uint64_t n, std::uint64_t d, std::uint64_t k,
                      double zipf_s, double mu, double sigma,
                      std::uint64_t master_seed) {
  if (n == 0 || d == 0 || k == 0 || k > d) {
    throw std::invalid_argument("gen_synthetic: need n > 0 and 0 < k <= d");
  }
  if (d > 0xffffffffULL) {
    throw std::invalid_argument("gen_synthetic: d exceeds 32 bits");
  }
  if (!(zipf_s >= 0.0) || !(sigma >= 0.0)) {
    throw std::invalid_argument(
        "gen_synthetic: zipf_s and sigma must be non-negative");
  }

  ZipfSampler sampler(d, zipf_s);
  Dataset data;
  data.n = n;
  data.d = d;
  data.k = k;
  {
    std::ostringstream detail;
    detail << "zipf_s=" << format_double(zipf_s) << " mu=" << format_double(mu)
           << " sigma=" << format_double(sigma) << " seed=" << master_seed;
    data.provenance = {Provenance::Kind::kSynthetic, detail.str()};
  }
  data.vectors.reserve(n);

  std::vector<std::uint32_t> coords;
  for (std::uint64_t i = 0; i < n; ++i) {
    // Disjoint streams: coordinates and values never share draws, so a
    // value-model change cannot disturb which coordinates are held.
    Rng coord_rng(derive_client_seed(master_seed, i, SeedPurpose::kBinHash));
    Rng value_rng(derive_client_seed(master_seed, i, SeedPurpose::kNoise));
    sampler.sample_distinct(k, coord_rng, coords);
    std::vector<Entry> entries;
    entries.reserve(k);
    for (std::uint32_t c : coords) {
      const double raw = gaussian_sample(mu, sigma, value_rng);
      const double v = std::clamp(raw, -1.0, 1.0);
      if (v == 0.0) continue;  // zero means absent; drop the entry
      entries.push_back({c, v});
    }
    data.vectors.emplace_back(static_cast<std::uint32_t>(d),
                              static_cast<std::uint32_t>(k),
                              std::move(entries));
  }
  return data;
}

double normalize_rating(double v, double lo, double hi) {
  if (!(lo < hi)) {
    throw std::invalid_argument("normalize_rating: need lo < hi");
  }
  if (!(v >= lo && v <= hi)) {
    throw std::invalid_argument("normalize_rating: value outside [lo, hi]");
  }
  return 2.0 * (v - lo) / (hi - lo) - 1.0;
}

Dataset ingest_csv(const std::string& path, std::uint64_t k, double lo,
                   double hi, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("ingest_csv: k must be positive");
  if (!(lo < hi)) throw std::invalid_argument("ingest_csv: need lo < hi");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ingest_csv: cannot open " + path);

  std::unordered_map<std::string, std::uint32_t> user_ids;
  std::unordered_map<std::string, std::uint32_t> item_ids;
  // Per user: (item, normalized value), in file order.
  std::vector<std::vector<Entry>> records;

  std::string line;
  std::uint64_t lineno = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;

    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (t.back() == ',') fields.push_back("");
    if (fields.size() != 3) {
      std::ostringstream msg;
      msg << "ingest_csv: line " << lineno << ": expected 3 fields, got "
          << fields.size();
      throw std::runtime_error(msg.str());
    }
    if (first_data_line && fields[0] == "user_id" && fields[1] == "item_id" &&
        fields[2] == "value") {
      first_data_line = false;  // optional header row
      continue;
    }
    first_data_line = false;
    if (fields[0].empty() || fields[1].empty()) {
      std::ostringstream msg;
      msg << "ingest_csv: line " << lineno << ": empty user or item id";
      throw std::runtime_error(msg.str());
    }

    const double raw = parse_strict_double(fields[2], lineno, "value");
    if (!(raw >= lo && raw <= hi)) {
      std::ostringstream msg;
      msg << "ingest_csv: line " << lineno << ": value " << fields[2]
          << " outside [" << lo << ", " << hi << "]";
      throw std::runtime_error(msg.str());
    }

    auto [uit, _u] = user_ids.try_emplace(
        fields[0], static_cast<std::uint32_t>(user_ids.size()));
    auto [iit, _i] = item_ids.try_emplace(
        fields[1], static_cast<std::uint32_t>(item_ids.size()));
    const std::uint32_t user = uit->second;
    const std::uint32_t item = iit->second;
    if (user >= records.size()) records.resize(user + 1);
    for (const Entry& e : records[user]) {
      if (e.index == item) {
        std::ostringstream msg;
        msg << "ingest_csv: line " << lineno << ": duplicate (user, item) pair";
        throw std::runtime_error(msg.str());
      }
    }
    records[user].push_back({item, normalize_rating(raw, lo, hi)});
  }
  if (records.empty() || item_ids.empty()) {
    throw std::runtime_error("ingest_csv: no data rows in " + path);
  }

  const auto d = static_cast<std::uint64_t>(item_ids.size());
  const std::uint64_t k_eff = std::min<std::uint64_t>(k, d);
  Dataset data;
  data.n = records.size();
  data.d = d;
  data.k = k_eff;
  {
    std::ostringstream detail;
    detail << "path=" << path << " k=" << k_eff << " range=["
           << format_double(lo) << "," << format_double(hi)
           << "] seed=" << seed;
    data.provenance = {Provenance::Kind::kCsv, detail.str()};
  }
  data.vectors.reserve(records.size());
  for (std::uint32_t user = 0; user < records.size(); ++user) {
    std::vector<Entry>& recs = records[user];
    if (recs.size() > k_eff) {
      // Over-full user: keep a seeded uniform sample of k records
      // (partial Fisher-Yates on the record list).
      Rng rng(seed_chain(mix64(seed), user));
      for (std::uint64_t i = 0; i < k_eff; ++i) {
        const std::uint64_t j = i + rng.next_below(recs.size() - i);
        std::swap(recs[i], recs[j]);
      }
      recs.resize(k_eff);
    }
    std::vector<Entry> entries;
    entries.reserve(recs.size());
    for (const Entry& e : recs) {
      if (e.value == 0.0) continue;  // midpoint rating normalizes to zero
      entries.push_back(e);
    }
    data.vectors.emplace_back(static_cast<std::uint32_t>(d),
                              static_cast<std::uint32_t>(k_eff),
                              std::move(entries));
  }
  return data;
}

void save_dataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dataset: cannot open " + path);
  out << "svme-dataset 1\n";
  out << "n " << data.n << "\n";
  out << "d " << data.d << "\n";
  out << "k " << data.k << "\n";
  out << "provenance "
      << (data.provenance.kind == Provenance::Kind::kSynthetic ? "synthetic"
                                                               : "csv")
      << " " << data.provenance.detail << "\n";
  for (const SparseVector& v : data.vectors) {
    out << "v";
    for (const Entry& e : v.entries()) {
      out << ' ' << e.index << ':' << format_double(e.value);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_dataset: write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dataset: cannot open " + path);
  std::string line;
  std::uint64_t lineno = 0;
  auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line)) {
      throw std::runtime_error("load_dataset: unexpected end of file");
    }
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };

  if (next_line() != "svme-dataset 1") {
    throw std::runtime_error("load_dataset: not a svme-dataset v1 file");
  }
  auto parse_header_u64 = [&](const char* key) {
    next_line();
    std::istringstream ss(line);
    std::string word;
    std::uint64_t value = 0;
    if (!(ss >> word >> value) || word != key) {
      std::ostringstream msg;
      msg << "load_dataset: line " << lineno << ": expected '" << key
          << " <count>'";
      throw std::runtime_error(msg.str());
    }
    return value;
  };
  Dataset data;
  data.n = parse_header_u64("n");
  data.d = parse_header_u64("d");
  data.k = parse_header_u64("k");

  next_line();
  {
    std::istringstream ss(line);
    std::string word, kind;
    if (!(ss >> word >> kind) || word != "provenance" ||
        (kind != "synthetic" && kind != "csv")) {
      throw std::runtime_error("load_dataset: bad provenance line");
    }
    std::string detail;
    std::getline(ss, detail);
    data.provenance.kind = (kind == "synthetic")
                               ? Provenance::Kind::kSynthetic
                               : Provenance::Kind::kCsv;
    data.provenance.detail = trim(detail);
  }

  data.vectors.reserve(data.n);
  for (std::uint64_t i = 0; i < data.n; ++i) {
    next_line();
    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word) || word != "v") {
      std::ostringstream msg;
      msg << "load_dataset: line " << lineno << ": expected a 'v' record";
      throw std::runtime_error(msg.str());
    }
    std::vector<Entry> entries;
    std::string tok;
    while (ss >> tok) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string::npos) {
        std::ostringstream msg;
        msg << "load_dataset: line " << lineno << ": bad entry '" << tok
            << "'";
        throw std::runtime_error(msg.str());
      }
      char* end = nullptr;
      const std::string idx_s = tok.substr(0, colon);
      const unsigned long long idx = std::strtoull(idx_s.c_str(), &end, 10);
      if (end == idx_s.c_str() || *end != '\0') {
        std::ostringstream msg;
        msg << "load_dataset: line " << lineno << ": bad index '" << idx_s
            << "'";
        throw std::runtime_error(msg.str());
      }
      entries.push_back({static_cast<std::uint32_t>(idx),
                         parse_strict_double(tok.substr(colon + 1), lineno,
                                             "value")});
    }
    data.vectors.emplace_back(static_cast<std::uint32_t>(data.d),
                              static_cast<std::uint32_t>(data.k),
                              std::move(entries));
  }
  return data;
}

std::vector<double> true_mean(const Dataset& data) {
  if (data.vectors.empty()) {
    throw std::invalid_argument("true_mean: empty dataset");
  }
  std::vector<double> mean(data.d, 0.0);
  for (const SparseVector& v : data.vectors) {
    for (const Entry& e : v.entries()) mean[e.index] += e.value;
  }
  const double n = static_cast<double>(data.vectors.size());
  for (double& m : mean) m /= n;
  return mean;
}

std::vector<std::uint32_t> support_items(const SparseVector& v) {
  std::vector<std::uint32_t> items;
  items.reserve(v.entries().size());
  for (const Entry& e : v.entries()) items.push_back(e.index);
  return items;
}

bool is_binary(const Dataset& data) {
  for (const SparseVector& v : data.vectors) {
    for (const Entry& e : v.entries()) {
      if (e.value != 1.0) return false;
    }
  }
  return true;
}

}  // namespace svme
