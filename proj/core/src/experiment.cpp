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

#include "svme/experiment.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "svme/baselines.hpp"
#include "svme/data.hpp"
#include "svme/mechanism.hpp"
#include "svme/parallel.hpp"
#include "svme/warmup.hpp"

namespace svme {
namespace {

// ---------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_double_value(const std::string& key, const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw std::invalid_argument("config: bad numeric value for '" + key +
                                "': " + s);
  }
  return v;
}

std::uint64_t parse_u64_value(const std::string& key, const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("config: bad integer value for '" + key +
                                "': " + s);
  }
  return static_cast<std::uint64_t>(v);
}

bool parse_bool_value(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("config: bad boolean value for '" + key +
                              "': " + s);
}

// ---------------------------------------------------------------------
// Seed tree
// ---------------------------------------------------------------------

// Tags separating the top-level seed streams.
constexpr std::uint64_t kSeedTagDataset = 0xda7a;
constexpr std::uint64_t kSeedTagMechanism = 0x3u;

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t acc = 0x5141u;
  for (char c : s) acc = seed_chain(acc, static_cast<unsigned char>(c));
  return acc;
}

std::uint64_t dataset_seed(std::uint64_t master, std::uint64_t n,
                           std::uint64_t d, std::uint64_t k,
                           std::uint64_t rep) {
  std::uint64_t s = seed_chain(master, kSeedTagDataset);
  s = seed_chain(s, n);
  s = seed_chain(s, d);
  s = seed_chain(s, k);
  return seed_chain(s, rep);
}

std::uint64_t mechanism_seed(std::uint64_t master, const std::string& mech,
                             const std::string& regime_token, double epsilon,
                             std::uint64_t n, std::uint64_t d,
                             std::uint64_t k, std::uint64_t rep) {
  std::uint64_t s = seed_chain(master, kSeedTagMechanism);
  s = seed_chain(s, hash_string(mech));
  s = seed_chain(s, hash_string(regime_token));
  s = seed_chain(s, std::bit_cast<std::uint64_t>(epsilon));
  s = seed_chain(s, n);
  s = seed_chain(s, d);
  s = seed_chain(s, k);
  return seed_chain(s, rep);
}

// ---------------------------------------------------------------------
// Regimes and mechanism pipelines
// ---------------------------------------------------------------------

struct RegimeSpec {
  enum class Kind { kEvent, kUser, kLValue } kind = Kind::kEvent;
  double l_value = 0.0;  // for kLValue
  std::string token;     // as written in the config / reported in rows
};

RegimeSpec parse_regime_token(const std::string& token) {
  RegimeSpec spec;
  spec.token = token;
  if (token == "event") {
    spec.kind = RegimeSpec::Kind::kEvent;
  } else if (token == "user") {
    spec.kind = RegimeSpec::Kind::kUser;
  } else if (token.rfind("L=", 0) == 0) {
    spec.kind = RegimeSpec::Kind::kLValue;
    spec.l_value = parse_double_value("regimes", token.substr(2));
    if (!(spec.l_value > 0.0)) {
      throw std::invalid_argument("config: regime L value must be positive");
    }
  } else {
    throw std::invalid_argument(
        "config: unknown regime '" + token +
        "' (expected event, user, or L=<value>)");
  }
  return spec;
}

double regime_l1(const RegimeSpec& regime, std::uint64_t k) {
  switch (regime.kind) {
    case RegimeSpec::Kind::kEvent: return 2.0;
    case RegimeSpec::Kind::kUser: return 2.0 * static_cast<double>(k);
    case RegimeSpec::Kind::kLValue: return regime.l_value;
  }
  return 2.0;
}

// Which regimes a mechanism participates in.  The discrete mechanisms
// protect single-item changes, so they only line up with "event"; the
// sampling baseline spends its whole budget on one report, making it a
// user-level mechanism.
bool mechanism_supports(const std::string& mech, const RegimeSpec& regime) {
  if (mech == "main" || mech == "naive" || mech == "harmony" ||
      mech == "pckv") {
    return true;
  }
  if (mech == "kfold" || mech == "bucketed" || mech == "blh") {
    return regime.kind == RegimeSpec::Kind::kEvent;
  }
  if (mech == "sampling") return regime.kind == RegimeSpec::Kind::kUser;
  throw std::invalid_argument("config: unknown mechanism '" + mech + "'");
}

std::vector<std::vector<std::uint32_t>> collect_supports(const Dataset& data) {
  std::vector<std::vector<std::uint32_t>> supports;
  supports.reserve(data.vectors.size());
  for (const SparseVector& v : data.vectors) {
    supports.push_back(support_items(v));
  }
  return supports;
}

void require_binary(const Dataset& data, const char* mech) {
  if (!is_binary(data)) {
    throw std::invalid_argument(std::string(mech) +
                                " requires a binary dataset (all stored "
                                "values 1)");
  }
}

// Runs one replicate of one mechanism and returns the estimates at the
// probe coordinates.  bytes_out receives the per-client report size.
std::vector<double> run_mechanism_once(
    const std::string& mech, const RegimeSpec& regime, double epsilon,
    const Dataset& data,
    const std::vector<std::vector<std::uint32_t>>& supports,
    std::span<const std::uint32_t> probes, const ExperimentConfig& cfg,
    std::uint64_t mech_seed, double* bytes_out) {
  const std::uint64_t n = data.vectors.size();
  const auto d32 = static_cast<std::uint32_t>(data.d);
  const std::uint64_t k = data.k;
  std::vector<double> estimates(probes.size(), 0.0);

  if (mech == "main") {
    PrivacyBudget budget{epsilon, cfg.delta, regime_l1(regime, k)};
    const MechanismParams params =
        select_params(k, data.d, n, budget, cfg.beta);
    std::vector<ClientReport> reports(n);
    parallel_for(n, cfg.threads, [&](std::uint64_t i) {
      const std::uint64_t sh =
          derive_client_seed(mech_seed, i, SeedPurpose::kBinHash) & kSeedMask;
      const std::uint64_t ss =
          derive_client_seed(mech_seed, i, SeedPurpose::kSignHash) & kSeedMask;
      Rng rng(derive_client_seed(mech_seed, i, SeedPurpose::kNoise));
      reports[i] = client_encode(data.vectors[i], params, sh, ss, rng);
      if (cfg.discretize) {
        reports[i] = discretize_report(reports[i], params, rng);
      }
    });
    *bytes_out =
        static_cast<double>(comm_cost(reports.front(), cfg.accounting));
    parallel_for(probes.size(), cfg.threads, [&](std::uint64_t p) {
      estimates[p] = server_estimate(reports, probes[p], params);
    });
    return estimates;
  }

  if (mech == "bucketed") {
    require_binary(data, "bucketed");
    std::vector<BucketedReport> reports(n);
    parallel_for(n, cfg.threads, [&](std::uint64_t i) {
      const std::uint64_t bucket_seed =
          derive_client_seed(mech_seed, i, SeedPurpose::kBinHash) & kSeedMask;
      Rng rng(derive_client_seed(mech_seed, i, SeedPurpose::kNoise));
      reports[i] =
          bucketed_encode(supports[i], d32, k, epsilon, bucket_seed, rng);
    });
    // bucket-hash seed plus k one-item reports (seed + bit each)
    *bytes_out = 5.0 + 6.0 * static_cast<double>(k);
    parallel_for(probes.size(), cfg.threads, [&](std::uint64_t p) {
      estimates[p] = bucketed_aggregate(reports, probes[p], d32, k, epsilon);
    });
    return estimates;
  }

  if (mech == "blh") {
    require_binary(data, "blh");
    if (k != 1) {
      throw std::invalid_argument("blh requires a 1-sparse dataset (k = 1)");
    }
    std::vector<BlhReport> reports(n);
    parallel_for(n, cfg.threads, [&](std::uint64_t i) {
      Rng rng(derive_client_seed(mech_seed, i, SeedPurpose::kNoise));
      const std::uint32_t item =
          supports[i].empty() ? d32 : supports[i].front();
      reports[i] = blh_encode(item, d32, epsilon, rng.next_seed40(), rng);
    });
    *bytes_out = 6.0;  // seed + bit
    parallel_for(probes.size(), cfg.threads, [&](std::uint64_t p) {
      estimates[p] = blh_aggregate(reports, probes[p], d32, epsilon);
    });
    return estimates;
  }

  if (mech == "kfold") {
    require_binary(data, "kfold");
    std::vector<BlhReport> reports(n * k);
    parallel_for(n, cfg.threads, [&](std::uint64_t i) {
      Rng rng(derive_client_seed(mech_seed, i, SeedPurpose::kNoise));
      const std::vector<BlhReport> mine =
          kfold_encode(data.vectors[i], epsilon, rng);
      std::copy(mine.begin(), mine.end(), reports.begin() + i * k);
    });
    *bytes_out = 6.0 * static_cast<double>(k);
    parallel_for(probes.size(), cfg.threads, [&](std::uint64_t p) {
      estimates[p] = kfold_aggregate(reports, probes[p], d32, k, epsilon);
    });
    return estimates;
  }

  if (mech == "sampling") {
    std::vector<SamplingReport> reports(n);
    parallel_for(n, cfg.threads, [&](std::uint64_t i) {
      Rng rng(derive_client_seed(mech_seed, i, SeedPurpose::kNoise));
      reports[i] = sampling_encode(data.vectors[i], epsilon, rng);
    });
    *bytes_out = 10.0;  // seed + bit + float32 value
    parallel_for(probes.size(), cfg.threads, [&](std::uint64_t p) {
      estimates[p] = sampling_aggregate(reports, probes[p], d32, k, epsilon);
    });
    return estimates;
  }

  if (mech == "naive") {
    PrivacyBudget budget{epsilon, 0.0, regime_l1(regime, k)};
    budget.validate();
    if (budget.neighbor_l1 > 2.0 * static_cast<double>(k)) {
      throw std::invalid_argument("naive: neighbor_l1 exceeds 2k");
    }
    // Dense reports are O(d) each, so they are folded into fixed-size
    // chunk accumulators instead of being materialized; the chunk
    // combine order is fixed, keeping sums thread-count independent.
    constexpr std::uint64_t kChunk = 1024;
    const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> partial(chunks);
    parallel_for(chunks, cfg.threads, [&](std::uint64_t c) {
      std::vector<double> acc(data.d, 0.0);
      const std::uint64_t lo = c * kChunk;
      const std::uint64_t hi = std::min(n, lo + kChunk);
      for (std::uint64_t i = lo; i < hi; ++i) {
        Rng rng(derive_client_seed(mech_seed, i, SeedPurpose::kNoise));
        const std::vector<double> report =
            naive_encode(data.vectors[i], budget, rng);
        for (std::uint64_t x = 0; x < data.d; ++x) acc[x] += report[x];
      }
      partial[c] = std::move(acc);
    });
    std::vector<double> mean(data.d, 0.0);
    for (const std::vector<double>& acc : partial) {
      for (std::uint64_t x = 0; x < data.d; ++x) mean[x] += acc[x];
    }
    for (double& m : mean) m /= static_cast<double>(n);
    *bytes_out = 4.0 * static_cast<double>(data.d);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      estimates[p] = mean[probes[p]];
    }
    return estimates;
  }

  throw std::invalid_argument("config: unknown mechanism '" + mech + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    // trim
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config: line " << lineno << ": expected 'key = value'";
      throw std::invalid_argument(msg.str());
    }
    auto strip = [](std::string s) {
      const std::size_t sb = s.find_first_not_of(" \t");
      if (sb == std::string::npos) return std::string();
      const std::size_t se = s.find_last_not_of(" \t");
      return s.substr(sb, se - sb + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      std::ostringstream msg;
      msg << "config: line " << lineno << ": empty key or value";
      throw std::invalid_argument(msg.str());
    }
    if (!seen.insert(key).second) {
      throw std::invalid_argument("config: duplicate key '" + key + "'");
    }

    if (key == "master_seed") {
      cfg.master_seed = parse_u64_value(key, value);
    } else if (key == "mechanisms") {
      cfg.mechanisms = split_list(value);
    } else if (key == "regimes") {
      cfg.regimes = split_list(value);
    } else if (key == "k") {
      cfg.k_values.clear();
      for (const std::string& s : split_list(value)) {
        cfg.k_values.push_back(parse_u64_value(key, s));
      }
    } else if (key == "n") {
      cfg.n_values.clear();
      for (const std::string& s : split_list(value)) {
        cfg.n_values.push_back(parse_u64_value(key, s));
      }
    } else if (key == "d") {
      cfg.d_values.clear();
      for (const std::string& s : split_list(value)) {
        cfg.d_values.push_back(parse_u64_value(key, s));
      }
    } else if (key == "epsilon") {
      cfg.epsilon_values.clear();
      for (const std::string& s : split_list(value)) {
        cfg.epsilon_values.push_back(parse_double_value(key, s));
      }
    } else if (key == "delta") {
      cfg.delta = parse_double_value(key, value);
    } else if (key == "beta") {
      cfg.beta = parse_double_value(key, value);
    } else if (key == "reps") {
      cfg.reps = parse_u64_value(key, value);
    } else if (key == "probe") {
      if (value == "all") {
        cfg.probe = {ProbeKind::kAll, 0};
      } else if (value.rfind("top:", 0) == 0) {
        cfg.probe = {ProbeKind::kTop, parse_u64_value(key, value.substr(4))};
        if (cfg.probe.top_m == 0) {
          throw std::invalid_argument("config: probe top count must be > 0");
        }
      } else {
        throw std::invalid_argument(
            "config: probe must be 'all' or 'top:<m>'");
      }
    } else if (key == "discretize") {
      cfg.discretize = parse_bool_value(key, value);
    } else if (key == "accounting") {
      if (value == "paper") {
        cfg.accounting = Accounting::kPaperConvention;
      } else if (value == "wire") {
        cfg.accounting = Accounting::kWire;
      } else {
        throw std::invalid_argument(
            "config: accounting must be 'paper' or 'wire'");
      }
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(parse_u64_value(key, value));
      if (cfg.threads == 0) {
        throw std::invalid_argument("config: threads must be >= 1");
      }
    } else if (key == "record_timing") {
      cfg.record_timing = parse_bool_value(key, value);
    } else if (key == "zipf_s") {
      cfg.zipf_s = parse_double_value(key, value);
    } else if (key == "mu") {
      cfg.mu = parse_double_value(key, value);
    } else if (key == "sigma") {
      cfg.sigma = parse_double_value(key, value);
    } else if (key == "dataset") {
      cfg.dataset_path = value;
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }

  if (!cfg.dataset_path.empty() &&
      (seen.count("n") || seen.count("d") || seen.count("k"))) {
    throw std::invalid_argument(
        "config: a dataset file fixes n, d, and k; remove those keys");
  }
  if (cfg.mechanisms.empty() || cfg.regimes.empty() || cfg.reps == 0 ||
      cfg.k_values.empty() || cfg.n_values.empty() || cfg.d_values.empty() ||
      cfg.epsilon_values.empty()) {
    throw std::invalid_argument("config: empty sweep or reps = 0");
  }
  for (const std::string& r : cfg.regimes) parse_regime_token(r);
  for (const std::string& m : cfg.mechanisms) {
    mechanism_supports(m, RegimeSpec{});  // validates the name
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("parse_config_file: cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg) {
  std::vector<RegimeSpec> regimes;
  regimes.reserve(cfg.regimes.size());
  for (const std::string& token : cfg.regimes) {
    regimes.push_back(parse_regime_token(token));
  }

  Dataset fixed;
  const bool use_fixed = !cfg.dataset_path.empty();
  if (use_fixed) fixed = load_dataset(cfg.dataset_path);

  const std::vector<std::uint64_t> n_values =
      use_fixed ? std::vector<std::uint64_t>{fixed.n} : cfg.n_values;
  const std::vector<std::uint64_t> d_values =
      use_fixed ? std::vector<std::uint64_t>{fixed.d} : cfg.d_values;
  const std::vector<std::uint64_t> k_values =
      use_fixed ? std::vector<std::uint64_t>{fixed.k} : cfg.k_values;

  const bool need_supports = [&] {
    for (const std::string& m : cfg.mechanisms) {
      if (m == "bucketed" || m == "blh" || m == "kfold") return true;
    }
    return false;
  }();

  std::vector<MetricsRow> rows;
  for (std::uint64_t n : n_values) {
    for (std::uint64_t d : d_values) {
      for (std::uint64_t k : k_values) {
        // One accumulator per (epsilon, mechanism, regime) cell.
        struct Cell {
          double epsilon;
          std::size_t mech;
          std::size_t regime;
          double linf_sum = 0.0;
          double mse_sum = 0.0;
          double wall_sum = 0.0;
          double bytes = 0.0;
          std::uint64_t completed = 0;
          std::string status = "ok";
        };
        std::vector<Cell> cells;
        for (double eps : cfg.epsilon_values) {
          for (std::size_t m = 0; m < cfg.mechanisms.size(); ++m) {
            for (std::size_t r = 0; r < regimes.size(); ++r) {
              if (!mechanism_supports(cfg.mechanisms[m], regimes[r])) {
                continue;  // e.g. kfold outside the event regime
              }
              cells.push_back(Cell{eps, m, r});
            }
          }
        }

        for (std::uint64_t rep = 0; rep < cfg.reps; ++rep) {
          Dataset generated;
          const Dataset& data =
              use_fixed ? fixed
                        : (generated = gen_synthetic(
                               n, d, k, cfg.zipf_s, cfg.mu, cfg.sigma,
                               dataset_seed(cfg.master_seed, n, d, k, rep)),
                           generated);
          const std::vector<double> truth = true_mean(data);
          const std::vector<std::uint32_t> probes =
              (cfg.probe.kind == ProbeKind::kAll)
                  ? select_probes_all(data.d)
                  : select_probes_top(truth, cfg.probe.top_m);
          std::vector<double> probe_truth(probes.size());
          for (std::size_t p = 0; p < probes.size(); ++p) {
            probe_truth[p] = truth[probes[p]];
          }
          const std::vector<std::vector<std::uint32_t>> supports =
              need_supports ? collect_supports(data)
                            : std::vector<std::vector<std::uint32_t>>{};

          for (Cell& cell : cells) {
            if (cell.status != "ok") continue;
            const std::string& mech = cfg.mechanisms[cell.mech];
            if (mech == "harmony" || mech == "pckv") {
              cell.status = "n/a: external algorithm, not reimplemented";
              continue;
            }
            const RegimeSpec& regime = regimes[cell.regime];
            const std::uint64_t mseed = mechanism_seed(
                cfg.master_seed, mech, regime.token, cell.epsilon, n, d, k,
                rep);
            try {
              const auto start = std::chrono::steady_clock::now();
              double bytes = 0.0;
              const std::vector<double> estimates = run_mechanism_once(
                  mech, regime, cell.epsilon, data, supports, probes, cfg,
                  mseed, &bytes);
              const auto stop = std::chrono::steady_clock::now();
              cell.linf_sum += linf_error(probe_truth, estimates);
              cell.mse_sum += mse(probe_truth, estimates);
              if (cfg.record_timing) {
                cell.wall_sum +=
                    std::chrono::duration<double, std::milli>(stop - start)
                        .count();
              }
              cell.bytes = bytes;
              ++cell.completed;
            } catch (const std::exception& ex) {
              cell.status = std::string("failed: ") + ex.what();
            }
          }
        }

        for (const Cell& cell : cells) {
          MetricsRow row;
          row.mechanism = cfg.mechanisms[cell.mech];
          row.regime = regimes[cell.regime].token;
          row.k = k;
          row.d = d;
          row.n = n;
          row.epsilon = cell.epsilon;
          row.delta = cfg.delta;
          row.beta = cfg.beta;
          row.runs = cell.completed;
          row.master_seed = cfg.master_seed;
          row.status = cell.status;
          if (cell.completed > 0 && cell.status == "ok") {
            const double r = static_cast<double>(cell.completed);
            row.linf = cell.linf_sum / r;
            row.mse = cell.mse_sum / r;
            row.wall_ms = cell.wall_sum / r;
            row.bytes_per_client = cell.bytes;
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

}  // namespace svme
