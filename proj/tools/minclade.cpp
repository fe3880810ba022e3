// minclade: exact laws, simulation and statistical verification for the
// minimal clade size of the Bolthausen-Sznitman coalescent.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or size-cap error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "minclade/coalescent_sim.hpp"
#include "minclade/crp_sim.hpp"
#include "minclade/errors.hpp"
#include "minclade/exact_dist.hpp"
#include "minclade/replicates.hpp"
#include "minclade/stat_harness.hpp"
#include "minclade/verify_suite.hpp"

namespace {

using namespace minclade;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  int n = 0;
  int k = 1;
  int replicates = 100000;
  std::uint64_t seed = 0;
  std::string formula = "recursion";
  std::string mode;  // empty: exact for n <= threshold, float above
  std::string format = "csv";
  std::string output;
  std::string engine = "cut";
  std::string only;
  int threads = 0;
  bool timing = false;
  bool no_ks = false;
  std::vector<int> n_values{100, 1000, 10000};
  std::vector<int> ks_n_values{1000, 10000, 100000};
  std::vector<int> fraction_n_values;
  std::vector<double> x_grid{0.25, 0.5, 0.75, 1.0};
  int samples = 10000;
};

// Writes to --output when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
    }
  }
  auto stream() -> std::ostream& { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

auto fmt_double(double v) -> std::string {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

auto effective_seed(std::uint64_t seed) -> std::uint64_t {
  const auto s = seed == 0 ? entropy_seed() : seed;
  std::cerr << "seed: " << s << '\n';
  return s;
}

auto use_exact(const RunConfig& cfg) -> bool {
  if (cfg.mode.empty()) return cfg.n <= default_limits().exact_threshold;
  return cfg.mode == "exact";
}

auto cmd_pmf(const RunConfig& cfg) -> int {
  const bool exact = use_exact(cfg) || cfg.formula != "recursion";
  const bool all = cfg.formula == "all";
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> values;  // per column, per support value

  auto add_exact = [&](const std::string& name, const ExactPmf& pmf) {
    columns.push_back(name);
    auto& col = values.emplace_back();
    for (const auto& p : pmf.probs) col.push_back(p.to_string());
  };

  auto run_formula = [&](const std::string& formula) {
    try {
      if (formula == "recursion") {
        if (exact) {
          add_exact(formula, mincl_pmf_recursion<ExactRational>(cfg.n));
        } else {
          columns.push_back(formula);
          auto& col = values.emplace_back();
          for (double p : mincl_pmf_recursion<double>(cfg.n).probs) col.push_back(fmt_double(p));
        }
      } else if (formula == "partitions") {
        add_exact(formula, mincl_pmf_partitions(cfg.n));
      } else {
        add_exact(formula, mincl_pmf_compositions(cfg.n));
      }
    } catch (const SizeError& e) {
      throw SizeError(e.cap_name() + "' for formula '" + formula, e.cap_value(),
                      cfg.n);  // message names both the cap and the formula
    }
  };

  if (all) {
    for (const char* f : {"recursion", "partitions", "compositions"}) run_formula(f);
  } else {
    run_formula(cfg.formula);
  }

  Sink sink(cfg.output);
  auto& os = sink.stream();
  const std::size_t rows = values.front().size();
  if (cfg.format == "json") {
    json out;
    out["n"] = cfg.n;
    out["formula"] = cfg.formula;
    out["mode"] = exact ? "exact" : "float";
    out["rows"] = json::array();
    for (std::size_t r = 0; r < rows; ++r) {
      json row;
      row["value"] = static_cast<int>(r) + 2;
      row["probability"] = values[0][r];
      if (all) {
        for (std::size_t c = 0; c < columns.size(); ++c) row[columns[c]] = values[c][r];
        row["agreement"] = values[0][r] == values[1][r] && values[0][r] == values[2][r];
      }
      out["rows"].push_back(row);
    }
    os << out.dump(2) << '\n';
  } else {
    os << "value,probability";
    if (all) {
      for (const auto& c : columns) os << ',' << c;
      os << ",agreement";
    }
    os << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
      os << r + 2 << ',' << values[0][r];
      if (all) {
        for (const auto& col : values) os << ',' << col[r];
        os << ',' << (values[0][r] == values[1][r] && values[0][r] == values[2][r] ? "true" : "false");
      }
      os << '\n';
    }
  }
  return kExitOk;
}

auto cmd_moments(const RunConfig& cfg) -> int {
  const bool exact = use_exact(cfg);
  std::vector<std::string> moments;
  std::vector<double> scaled;
  if (exact) {
    const auto pmf = mincl_pmf_recursion<ExactRational>(cfg.n);
    const auto fpmf = to_float(pmf);
    for (int j = 1; j <= cfg.k; ++j) {
      moments.push_back(moment_of(pmf, j).to_string());
      scaled.push_back(scaled_moment_of(fpmf, j));
    }
  } else {
    const auto pmf = mincl_pmf_recursion<double>(cfg.n);
    for (int j = 1; j <= cfg.k; ++j) {
      moments.push_back(fmt_double(moment_of(pmf, j)));
      scaled.push_back(scaled_moment_of(pmf, j));
    }
  }
  Sink sink(cfg.output);
  auto& os = sink.stream();
  if (cfg.format == "json") {
    json out;
    out["n"] = cfg.n;
    out["mode"] = exact ? "exact" : "float";
    out["rows"] = json::array();
    for (int j = 1; j <= cfg.k; ++j) {
      out["rows"].push_back({{"order", j}, {"moment", moments[j - 1]}, {"scaled", scaled[j - 1]}});
    }
    os << out.dump(2) << '\n';
  } else {
    os << "order,moment,scaled\n";
    for (int j = 1; j <= cfg.k; ++j) os << j << ',' << moments[j - 1] << ',' << fmt_double(scaled[j - 1]) << '\n';
  }
  return kExitOk;
}

struct SimRow {
  int x_n = 0;
  int m_n = 0;
  int kappa_n = 0;
};

auto cmd_simulate(const RunConfig& cfg) -> int {
  if (cfg.engine == "direct" && cfg.n > default_limits().direct) {
    throw SizeError("direct' for engine 'direct", default_limits().direct, cfg.n);
  }
  const auto seed = effective_seed(cfg.seed);
  const int n = cfg.n;
  const auto count = static_cast<std::size_t>(cfg.replicates);
  std::vector<SimRow> rows;
  if (cfg.engine == "cut") {
    rows = run_replicates(count, seed, [n](RngStream& rng) {
      const auto rec = sample_clade_record_cut(n, rng);
      return SimRow{rec.x_n, rec.m_n, rec.kappa_n};
    });
  } else if (cfg.engine == "direct") {
    rows = run_replicates(count, seed, [n](RngStream& rng) {
      const auto rec = extract_s_process(simulate_bs_direct(n, rng));
      return SimRow{rec.x_n, rec.m_n, rec.kappa_n};
    });
  } else {
    rows = run_replicates(count, seed, [n](RngStream& rng) { return SimRow{sample_minimal_clade_fast(n, rng), 0, 0}; });
  }
  const bool x_only = cfg.engine == "crp";

  Sink sink(cfg.output);
  auto& os = sink.stream();
  if (cfg.format == "json") {
    std::map<int, std::int64_t> hx;
    std::map<int, std::int64_t> hm;
    std::map<int, std::int64_t> hk;
    for (const auto& r : rows) {
      ++hx[r.x_n];
      if (!x_only) {
        ++hm[r.m_n];
        ++hk[r.kappa_n];
      }
    }
    auto to_obj = [](const std::map<int, std::int64_t>& h) {
      json o = json::object();
      for (const auto& [v, c] : h) o[std::to_string(v)] = c;
      return o;
    };
    json out;
    out["n"] = n;
    out["engine"] = cfg.engine;
    out["replicates"] = cfg.replicates;
    out["seed"] = seed;
    out["histograms"]["x_n"] = to_obj(hx);
    if (!x_only) {
      out["histograms"]["m_n"] = to_obj(hm);
      out["histograms"]["kappa_n"] = to_obj(hk);
    }
    os << out.dump(2) << '\n';
  } else {
    os << (x_only ? "replicate,x_n\n" : "replicate,x_n,m_n,kappa_n\n");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      os << r << ',' << rows[r].x_n;
      if (!x_only) os << ',' << rows[r].m_n << ',' << rows[r].kappa_n;
      os << '\n';
    }
  }
  return kExitOk;
}

auto split_sections(const std::string& only) -> std::set<std::string> {
  std::set<std::string> out;
  std::stringstream ss(only);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

auto cmd_verify(const RunConfig& cfg) -> int {
  VerifyOptions options;
  options.seed = effective_seed(cfg.seed);
  options.replicates = cfg.replicates;
  options.ks_samples = cfg.samples;
  if (!cfg.only.empty()) options.sections = split_sections(cfg.only);
  const auto bundle = run_verify_suite(options);
  Sink sink(cfg.output);
  sink.stream() << to_json(bundle, cfg.timing).dump(2) << '\n';
  std::cerr << "passed " << bundle.passed() << "/" << bundle.reports.size() << " (" << bundle.wall_time_ms << " ms)\n";
  if (bundle.all_passed()) return kExitOk;
  for (const auto& r : bundle.reports) {
    if (!r.pass) std::cerr << "FAILED: " << r.test_name << '\n';
  }
  return kExitVerifyFailed;
}

auto cmd_convergence(const RunConfig& cfg) -> int {
  const auto seed = effective_seed(cfg.seed);
  std::vector<int> ks;
  for (int j = 1; j <= cfg.k; ++j) ks.push_back(j);
  ConvergenceTable table = moment_trend(ks, cfg.n_values);
  if (!cfg.no_ks) {
    const auto ks_table = ks_trend(cfg.ks_n_values, cfg.samples, seed);
    table.rows.insert(table.rows.end(), ks_table.rows.begin(), ks_table.rows.end());
    table.pass = table.pass && ks_table.pass;
  }
  if (!cfg.fraction_n_values.empty()) {
    const auto frac = table_fraction_trend(cfg.fraction_n_values, cfg.x_grid, cfg.replicates, seed);
    table.rows.insert(table.rows.end(), frac.rows.begin(), frac.rows.end());
    table.pass = table.pass && frac.pass;
  }
  Sink sink(cfg.output);
  if (cfg.format == "json") {
    auto j = to_json(table);
    j["seed"] = seed;
    sink.stream() << j.dump(2) << '\n';
  } else {
    write_csv(sink.stream(), table);
  }
  std::cerr << "trend " << (table.pass ? "holds" : "violated") << '\n';
  return table.pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal clade size in the Bolthausen-Sznitman coalescent"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--threads", cfg.threads, "OpenMP worker count (0: runtime default)")->check(CLI::NonNegativeNumber);

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", cfg.output, "Output file (default: stdout)");
  };
  auto add_n = [&](CLI::App* sub, int min_n) {
    sub->add_option("--n", cfg.n, "Sample size")->required()->check(CLI::Range(min_n, 1 << 30));
  };
  auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", cfg.mode, "Arithmetic (default: exact up to the exact threshold)")
        ->check(CLI::IsMember({"exact", "float"}));
  };

  auto* pmf = app.add_subcommand("pmf", "Law of X_n");
  add_n(pmf, 2);
  pmf->add_option("--formula", cfg.formula, "Formula")->check(CLI::IsMember({"recursion", "partitions", "compositions", "all"}));
  add_mode(pmf);
  add_output(pmf);

  auto* moments = app.add_subcommand("moments", "Moments E(X_n^j), j = 1..k");
  add_n(moments, 2);
  moments->add_option("--k", cfg.k, "Highest moment order")->check(CLI::Range(1, 1000));
  add_mode(moments);
  add_output(moments);

  auto* simulate = app.add_subcommand("simulate", "Simulate X_n (and M_n, kappa_n)");
  add_n(simulate, 2);
  simulate->add_option("--engine", cfg.engine, "cut | direct | crp")->check(CLI::IsMember({"cut", "direct", "crp"}));
  simulate->add_option("--replicates", cfg.replicates, "Replicates")->check(CLI::Range(1, 1 << 30));
  simulate->add_option("--seed", cfg.seed, "Master seed (0: draw from entropy)");
  add_output(simulate);

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--seed", cfg.seed, "Master seed (0: draw from entropy)");
  verify->add_option("--replicates", cfg.replicates, "Replicates per stochastic check")->check(CLI::Range(1000, 1 << 30));
  verify->add_option("--samples", cfg.samples, "Samples per n for the KS trend")->check(CLI::Range(100, 1 << 30));
  verify->add_option("--only", cfg.only, "Comma-separated sections: formulas,simulation,identities,reversal,equivalence,moments,ks");
  verify->add_flag("--timing", cfg.timing, "Include wall_time_ms in the summary");
  verify->add_option("--output,-o", cfg.output, "Output file (default: stdout)");

  auto* convergence = app.add_subcommand("convergence", "Moment, KS and table-fraction trends");
  auto* conv_k = convergence->add_option("--k", cfg.k, "Moment orders 1..k (default 3)")->check(CLI::Range(1, 50));
  convergence->add_option("--n-values", cfg.n_values, "n values for the moment trend")->delimiter(',');
  convergence->add_option("--ks-n-values", cfg.ks_n_values, "n values for the KS trend")->delimiter(',');
  convergence->add_flag("--no-ks", cfg.no_ks, "Skip the KS trend");
  convergence->add_option("--fraction-n-values", cfg.fraction_n_values, "n values for the table-fraction trend")->delimiter(',');
  convergence->add_option("--x-grid", cfg.x_grid, "Grid in (0, 1] for the table fraction")->delimiter(',');
  convergence->add_option("--samples", cfg.samples, "KS samples per n")->check(CLI::Range(100, 1 << 30));
  convergence->add_option("--replicates", cfg.replicates, "Table-fraction replicates per n");
  convergence->add_option("--seed", cfg.seed, "Master seed (0: draw from entropy)");
  add_output(convergence);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    set_worker_count(cfg.threads);
    if (*pmf) return cmd_pmf(cfg);
    if (*moments) return cmd_moments(cfg);
    if (*simulate) return cmd_simulate(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*convergence) {
      if (conv_k->count() == 0) cfg.k = 3;
      return cmd_convergence(cfg);
    }
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
