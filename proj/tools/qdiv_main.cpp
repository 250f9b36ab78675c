// qdiv: command-line front end for the divergence laboratory. Parses JSON
// states/measures, dispatches the computations and emits plot-ready CSV or
// JSON rows. Exit codes: 0 success, 2 validation failure, 3 numerical failure.

#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <thread>
#include <vector>

#include "qdiv/hypothesis.hpp"
#include "qdiv/io.hpp"
#include "qdiv/measured.hpp"
#include "qdiv/variational.hpp"

namespace {

using namespace qdiv;

// --config file.json supplies long-experiment options as a flat JSON object,
// e.g. {"alpha": "0.5,2", "rho": "rho.json", "classical": true}. Keys that are
// also given explicitly on the command line are dropped from the expansion, so
// explicit flags override the file.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config") continue;
    if (i + 1 >= args.size()) throw ParseError("--config needs a file argument");
    const nlohmann::json j =
        nlohmann::json::parse(read_text_file(args[i + 1]), nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError("--config: expected a JSON object of option values");
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
               args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    std::vector<std::string> expanded;
    for (const auto& [key, value] : j.items()) {
      const std::string flag = "--" + key;
      if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
      if (value.is_boolean()) {
        if (value.get<bool>()) expanded.push_back(flag);
        continue;
      }
      expanded.push_back(flag);
      expanded.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    args.insert(args.begin() + 1, expanded.begin(), expanded.end());
    break;
  }
  return args;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void emit(const Table& table, const std::string& out_path, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    os << "{\"columns\":[";
    for (size_t i = 0; i < table.columns.size(); ++i)
      os << (i ? "," : "") << '"' << table.columns[i] << '"';
    os << "],\"rows\":[";
    for (size_t r = 0; r < table.rows.size(); ++r) {
      os << (r ? "," : "") << '[';
      for (size_t c = 0; c < table.rows[r].size(); ++c)
        os << (c ? "," : "") << '"' << table.rows[r][c] << '"';
      os << ']';
    }
    os << "]}\n";
  } else {
    for (size_t i = 0; i < table.columns.size(); ++i)
      os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
      for (size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
      os << '\n';
    }
  }
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw ValidationError("cannot open output file: " + out_path);
    f << os.str();
  }
}

int env_threads() {
  const char* v = std::getenv("QDIV_THREADS");
  if (!v) return 1;
  const int n = std::atoi(v);
  return n > 0 ? n : 1;
}

// Grid evaluation with a deterministic slot per index; QDIV_THREADS caps the
// worker count, and row order never depends on scheduling.
template <typename F>
void for_grid(size_t count, F&& f) {
  const int threads = std::min<int>(env_threads(), static_cast<int>(count));
  if (threads <= 1) {
    for (size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          f(i);
        } catch (...) {
          std::scoped_lock lk(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<int> doubling_list(int nmax) {
  std::vector<int> out;
  int n = std::max(1, nmax / 8);
  while (n < nmax) {
    out.push_back(n);
    n *= 2;
  }
  out.push_back(nmax);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum Renyi divergence laboratory"};
  app.require_subcommand(1);

  std::string rho_path, sigma_path, chain_path, mu1_path, mu2_path;
  std::string out_path, format = "csv";
  std::vector<double> alphas, rs, kappas;
  std::vector<int> n_list;
  int nmax = 0;
  std::uint64_t seed = 0;
  bool force_classical = false;
  int max_iters = 4000;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  const auto add_pair = [&](CLI::App* cmd) {
    cmd->add_option("--rho", rho_path, "rho state JSON")->required();
    cmd->add_option("--sigma", sigma_path, "sigma state JSON")->required();
  };

  auto* div_cmd = app.add_subcommand("div", "divergences on an alpha grid");
  add_pair(div_cmd);
  div_cmd->add_option("--alpha", alphas, "alpha grid")->required()->delimiter(',');
  add_common(div_cmd);

  auto* var_cmd = app.add_subcommand("variational", "variational formula cross-check");
  add_pair(var_cmd);
  var_cmd->add_option("--alpha", alphas, "alpha grid")->required()->delimiter(',');
  var_cmd->add_option("--max-iters", max_iters, "iteration budget");
  var_cmd->add_option("--seed", seed, "solver seed");
  add_common(var_cmd);

  auto* mart_cmd = app.add_subcommand("martingale", "divergences along a subalgebra chain");
  add_pair(mart_cmd);
  mart_cmd->add_option("--chain", chain_path, "chain JSON")->required();
  mart_cmd->add_option("--alpha", alphas, "alpha values")->required()->delimiter(',');
  add_common(mart_cmd);

  auto* sce_cmd = app.add_subcommand("sce", "strong converse exponent sequence");
  add_pair(sce_cmd);
  sce_cmd->add_option("--r", rs, "type II rates")->required()->delimiter(',');
  auto* nlist_opt = sce_cmd->add_option("--nlist", n_list, "explicit n grid")->delimiter(',');
  sce_cmd->add_option("--nmax", nmax, "doubling n grid up to nmax")->excludes(nlist_opt);
  sce_cmd->add_flag("--classical", force_classical, "force the type-class path");
  add_common(sce_cmd);

  auto* hoef_cmd = app.add_subcommand("hoeffding", "Hoeffding anti-divergence on an r grid");
  add_pair(hoef_cmd);
  hoef_cmd->add_option("--r", rs, "r grid")->required()->delimiter(',');
  add_common(hoef_cmd);

  auto* cut_cmd = app.add_subcommand("cutoff", "generalized cutoff rates");
  add_pair(cut_cmd);
  cut_cmd->add_option("--kappa", kappas, "kappa grid in (0,1)")->required()->delimiter(',');
  add_common(cut_cmd);

  auto* meas_cmd = app.add_subcommand("measured", "measured and test-measured divergences");
  add_pair(meas_cmd);
  meas_cmd->add_option("--alpha", alphas, "alpha grid")->required()->delimiter(',');
  meas_cmd->add_option("--seed", seed, "optimizer seed");
  meas_cmd->add_option("--nmax", nmax, "emit regularized estimates for n = 1..nmax");
  add_common(meas_cmd);

  auto* gicar_cmd = app.add_subcommand("gicar", "GICAR binomial-mixture convergence");
  gicar_cmd->add_option("--mu1", mu1_path, "measure JSON")->required();
  gicar_cmd->add_option("--mu2", mu2_path, "measure JSON")->required();
  gicar_cmd->add_option("--alpha", alphas, "alpha values")->required()->delimiter(',');
  gicar_cmd->add_option("--nlist", n_list, "level grid")->required()->delimiter(',');
  add_common(gicar_cmd);

  for (auto* cmd : {div_cmd, var_cmd, mart_cmd, sce_cmd, hoef_cmd, cut_cmd, meas_cmd,
                    gicar_cmd})
    cmd->allow_extras(false);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 wants a reversed vector
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  }

  try {
    Table table;
    std::sort(alphas.begin(), alphas.end());
    std::sort(rs.begin(), rs.end());
    std::sort(kappas.begin(), kappas.end());
    std::sort(n_list.begin(), n_list.end());

    if (div_cmd->parsed()) {
      const FdState rho = load_state(rho_path);
      const FdState sigma = load_state(sigma_path);
      table.columns = {"alpha", "sandwiched_q", "sandwiched_d", "standard_d",
                       "relative_entropy", "dmax", "fidelity"};
      table.rows.resize(alphas.size());
      for_grid(alphas.size(), [&](size_t i) {
        const double a = alphas[i];
        table.rows[i] = {csv_number(a),
                         csv_number(sandwiched_q(rho, sigma, a)),
                         csv_number(sandwiched_d(rho, sigma, a)),
                         csv_number(standard_d(rho, sigma, a)),
                         csv_number(relative_entropy(rho, sigma)),
                         csv_number(dmax(rho, sigma)),
                         csv_number(fidelity(rho, sigma))};
      });
    } else if (var_cmd->parsed()) {
      const FdState rho = load_state(rho_path);
      const FdState sigma = load_state(sigma_path);
      table.columns = {"alpha", "sandwiched_q", "closed_form_value", "iterative_value",
                       "iterations", "converged"};
      table.rows.resize(alphas.size());
      for_grid(alphas.size(), [&](size_t i) {
        const double a = alphas[i];
        const auto closed = closed_form_optimizer(rho, sigma, a);
        const auto iter = iterative_solve(rho, sigma, a, max_iters, seed);
        table.rows[i] = {csv_number(a),
                         csv_number(sandwiched_q(rho, sigma, a)),
                         csv_number(closed.value),
                         csv_number(iter.value),
                         std::to_string(iter.iterations),
                         iter.converged ? "true" : "false"};
      });
    } else if (mart_cmd->parsed()) {
      const FdState rho = load_state(rho_path);
      const FdState sigma = load_state(sigma_path);
      const SubalgebraChain chain = load_chain(chain_path);
      table.columns = {"alpha", "link", "sandwiched_d"};
      for (double a : alphas) {
        const auto seq = martingale_sequence(rho, sigma, chain, a);
        for (size_t k = 0; k < seq.size(); ++k)
          table.rows.push_back({csv_number(a), std::to_string(k), csv_number(seq[k])});
      }
    } else if (sce_cmd->parsed()) {
      const FdState rho = load_state(rho_path);
      const FdState sigma = load_state(sigma_path);
      if (nmax > 0) n_list = doubling_list(nmax);
      if (n_list.empty()) throw ValidationError("sce: provide --nlist or --nmax");
      const TestingPath path = force_classical ? TestingPath::Classical : TestingPath::Auto;
      table.columns = {"n", "r", "alpha_star", "sce_value", "hoeffding_value"};
      struct Key {
        int n;
        double r;
      };
      std::vector<Key> keys;
      for (int n : n_list)
        for (double r : rs) keys.push_back({n, r});
      table.rows.resize(keys.size());
      for_grid(keys.size(), [&](size_t i) {
        const auto [n, r] = keys[i];
        const auto res = min_type1(rho, sigma, n, r, path);
        const double sce = -res.log_success / n;
        table.rows[i] = {std::to_string(n), csv_number(r), csv_number(res.alpha_star),
                         csv_number(sce),
                         csv_number(hoeffding_anti_divergence(rho, sigma, r))};
      });
    } else if (hoef_cmd->parsed()) {
      const FdState rho = load_state(rho_path);
      const FdState sigma = load_state(sigma_path);
      table.columns = {"r", "hoeffding_value"};
      table.rows.resize(rs.size());
      for_grid(rs.size(), [&](size_t i) {
        table.rows[i] = {csv_number(rs[i]),
                         csv_number(hoeffding_anti_divergence(rho, sigma, rs[i]))};
      });
    } else if (cut_cmd->parsed()) {
      const FdState rho = load_state(rho_path);
      const FdState sigma = load_state(sigma_path);
      table.columns = {"kappa", "cutoff_rate"};
      table.rows.resize(kappas.size());
      for_grid(kappas.size(), [&](size_t i) {
        table.rows[i] = {csv_number(kappas[i]),
                         csv_number(cutoff_rate(rho, sigma, kappas[i]))};
      });
    } else if (meas_cmd->parsed()) {
      const FdState rho = load_state(rho_path);
      const FdState sigma = load_state(sigma_path);
      if (nmax > 0) {
        table.columns = {"alpha", "n", "regularized_d", "sandwiched_d"};
        for (double a : alphas) {
          const auto est = regularized_estimate(rho, sigma, a, nmax);
          const ExtReal dstar = sandwiched_d(rho, sigma, a);
          for (size_t k = 0; k < est.size(); ++k)
            table.rows.push_back({csv_number(a), std::to_string(k + 1), csv_number(est[k]),
                                  csv_number(dstar)});
        }
      } else {
        table.columns = {"alpha", "test_measured_d", "measured_d", "sandwiched_d"};
        table.rows.resize(alphas.size());
        for_grid(alphas.size(), [&](size_t i) {
          const double a = alphas[i];
          const auto [tval, test] = test_measured_opt(rho, sigma, a, seed);
          const auto [mval, povm] = measured_opt(rho, sigma, a, seed);
          table.rows[i] = {csv_number(a), csv_number(tval), csv_number(mval),
                           csv_number(sandwiched_d(rho, sigma, a))};
        });
      }
    } else if (gicar_cmd->parsed()) {
      const UnitIntervalMeasure mu1 = load_measure(mu1_path);
      const UnitIntervalMeasure mu2 = load_measure(mu2_path);
      table.columns = {"alpha", "n", "gicar_q", "classical_q", "gap"};
      for (double a : alphas) {
        const ExtReal target = classical_renyi_q(mu1, mu2, a);
        const auto rows = gicar_convergence(mu1, mu2, a, n_list);
        for (const auto& row : rows)
          table.rows.push_back({csv_number(a), std::to_string(row.n), csv_number(row.q),
                                csv_number(target), csv_number(row.gap)});
      }
    }
    emit(table, out_path, format);
    return 0;
  } catch (const NotConvergedError& e) {
    std::cerr << "numerical failure: " << e.what() << " (best value " << e.best_value
              << ")\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const BadAlphaError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const BadUError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const BadKappaError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const BadIndexError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const DimMismatchError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const TooLargeError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}
