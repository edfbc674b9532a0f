#include "circlekit/cli/run.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "circlekit/euler_maclaurin.hpp"
#include "circlekit/parallel.hpp"

namespace circlekit {

namespace fs = std::filesystem;

namespace {

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      out += '"';
      for (char ch : c) {
        if (ch == '"') out += '"';
        out += ch;
      }
      out += '"';
    } else {
      out += c;
    }
  }
  out += '\n';
  return out;
}

std::string fd(double x) { return format_double(x); }

ExpansionOptions expansion_options(const RunConfig& cfg) {
  ExpansionOptions o;
  o.K = cfg.K;
  o.Q_series = cfg.Q_series;
  o.Q_integral = cfg.Q_integral;
  o.quad = cfg.quad;
  o.meta = cfg.meta;
  o.skip_on_failure = cfg.skip_on_failure;
  o.attach_exact = cfg.attach_exact;
  o.series = cfg.series;
  o.integral = cfg.integral;
  o.count = cfg.count;
  return o;
}

Json header(const RunConfig& cfg) {
  Json j;
  j["task"] = cfg.task;
  j["config"] = cfg.canonical;
  return j;
}

std::string expansion_csv(const ExpansionResult& r) {
  std::string csv = csv_row({"tuple", "series_re", "series_im", "integral_re", "integral_im", "exponent", "term_value"});
  for (const auto& t : r.terms) {
    if (t.failed) {
      csv += csv_row({to_string(t.tuple), "nan", "nan", "nan", "nan", std::to_string(t.exponent), "nan"});
      continue;
    }
    csv += csv_row({to_string(t.tuple), fd(t.series.value.real()), fd(t.series.value.imag()),
                    fd(t.integral.value.real()), fd(t.integral.value.imag()), std::to_string(t.exponent),
                    fd(t.term_value)});
  }
  csv += csv_row({"total", "", "", "", "", "", fd(r.total)});
  if (r.exact_count) csv += csv_row({"exact", "", "", "", "", "", to_string(*r.exact_count)});
  if (r.residual) csv += csv_row({"residual", "", "", "", "", "", fd(*r.residual)});
  return csv;
}

TaskOutput task_count(const RunConfig& cfg) {
  const Integer n = resolve_n(cfg, cfg.P);
  const Integer c = brute_force_count(*cfg.form, *cfg.box, cfg.P, n, cfg.count);
  TaskOutput out{header(cfg), ""};
  out.json["result"] = {{"P", to_string(cfg.P)}, {"n", to_string(n)}, {"count", to_string(c)}};
  out.csv = csv_row({"count"}) + csv_row({to_string(c)});
  return out;
}

TaskOutput task_series(const RunConfig& cfg) {
  const Integer n = resolve_n(cfg, cfg.P);
  const SeriesValue v = truncated_singular_series(*cfg.form, *cfg.tuple, *cfg.box, cfg.P, n, cfg.Q_series, cfg.series);
  TaskOutput out{header(cfg), ""};
  out.json["result"] = {{"tuple", to_json(*cfg.tuple)}, {"P", to_string(cfg.P)}, {"n", to_string(n)}, {"series", to_json(v)}};
  out.csv = csv_row({"tuple", "Q", "series_re", "series_im", "imag_residual", "term_tail_estimate", "converged"});
  out.csv += csv_row({to_string(*cfg.tuple), std::to_string(v.Q), fd(v.value.real()), fd(v.value.imag()),
                      fd(v.imag_residual), fd(v.term_tail_estimate), v.converged ? "true" : "false"});
  return out;
}

TaskOutput task_integral(const RunConfig& cfg) {
  const Integer n = resolve_n(cfg, cfg.P);
  Rational arg = Rational(n) / rational_pow(cfg.P, static_cast<unsigned>(cfg.form->d()));
  arg.canonicalize();
  const IntegralValue v =
      truncated_singular_integral(*cfg.form, *cfg.tuple, *cfg.box, arg.get_d(), cfg.Q_integral, cfg.quad, cfg.integral);
  TaskOutput out{header(cfg), ""};
  out.json["result"] = {{"tuple", to_json(*cfg.tuple)}, {"argument", to_string(arg)}, {"integral", to_json(v)}};
  out.csv = csv_row({"tuple", "Q", "integral_re", "integral_im", "imag_residual", "tail_estimate", "error_estimate"});
  out.csv += csv_row({to_string(*cfg.tuple), fd(v.Q), fd(v.value.real()), fd(v.value.imag()), fd(v.imag_residual),
                      fd(v.tail_estimate), fd(v.error_estimate)});
  return out;
}

TaskOutput task_expand(const RunConfig& cfg) {
  const Integer n = resolve_n(cfg, cfg.P);
  const ExpansionResult r = assemble_expansion(*cfg.form, *cfg.box, cfg.P, n, expansion_options(cfg));
  TaskOutput out{header(cfg), expansion_csv(r)};
  out.json["result"] = to_json(r);
  return out;
}

TaskOutput task_compare(const RunConfig& cfg) {
  auto n_of_P = [&cfg](const Rational& P) { return resolve_n(cfg, P); };
  const auto rows = comparison_report(*cfg.form, *cfg.box, n_of_P, cfg.P_grid, cfg.K_list, expansion_options(cfg));
  TaskOutput out{header(cfg), ""};
  out.json["result"] = Json::array();
  out.csv = csv_row({"P", "K", "n", "exact", "total", "residual", "normalized_residual"});
  for (const auto& row : rows) {
    out.json["result"].push_back(to_json(row));
    out.csv += csv_row({to_string(row.P), std::to_string(row.K), to_string(row.n), to_string(row.exact),
                        fd(row.total), fd(row.residual), fd(row.normalized_residual)});
  }
  return out;
}

TaskOutput task_waring(const RunConfig& cfg) {
  const WaringParams& w = cfg.waring;
  TaskOutput out{header(cfg), csv_row({"quantity", "value_re", "value_im"})};
  Json res;
  if (gcd64(w.a, w.q) == 1) {
    const auto S = waring_S(w.q, w.a, w.d);
    const auto T = waring_T(w.q, w.a, w.d);
    res["S"] = to_json(S);
    res["T"] = to_json(T);
    out.csv += csv_row({"S", fd(S.real()), fd(S.imag())});
    out.csv += csv_row({"T", fd(T.real()), fd(T.imag())});
  } else {
    res["warnings"] = Json::array({"gcd(a, q) != 1: S and T not evaluated"});
  }
  const SeriesValue sigma = waring_sigma_series(w.s, w.j, w.n, w.d, w.Q, cfg.series.tolerance);
  res["sigma"] = to_json(sigma);
  out.csv += csv_row({"sigma", fd(sigma.value.real()), fd(sigma.value.imag())});
  if (w.j < w.s) {
    const double gamma = waring_gamma_closed_form(w.d, w.s - w.j);
    const double C = waring_C(w.s, w.j, w.n, w.d, w.Q);
    res["gamma_closed_form"] = gamma;
    res["C"] = C;
    out.csv += csv_row({"gamma_closed_form", fd(gamma), "0"});
    out.csv += csv_row({"C", fd(C), "0"});
  }
  out.json["result"] = res;
  return out;
}

TaskOutput task_mobius(const RunConfig& cfg) {
  const RationalPointCount counts = rational_point_count_exact(*cfg.form, cfg.P, cfg.count);
  ExpansionOptions o = expansion_options(cfg);
  o.attach_exact = false;
  ExpansionResult r = rational_point_expansion(*cfg.form, cfg.P, o);
  r.exact_count = counts.direct;
  r.residual = counts.direct.get_d() - r.total;
  TaskOutput out{header(cfg), expansion_csv(r)};
  out.json["result"] = {{"direct", to_string(counts.direct)},
                        {"mobius", to_string(counts.mobius)},
                        {"identity_holds", counts.direct == counts.mobius},
                        {"expansion", to_json(r)}};
  out.csv += csv_row({"mobius", "", "", "", "", "", to_string(counts.mobius)});
  return out;
}

TaskOutput task_em_check(const RunConfig& cfg) {
  const HomogeneousForm& F = *cfg.form;
  const int s = F.s();
  const double gamma = cfg.gamma;
  const double two_pi = 2.0 * 3.14159265358979323846;
  Box scaled;
  for (int i = 0; i < s; ++i) {
    scaled.a.push_back(cfg.P * cfg.box->a[static_cast<std::size_t>(i)]);
    scaled.b.push_back(cfg.P * cfg.box->b[static_cast<std::size_t>(i)]);
  }
  std::map<Exponents, std::vector<Polynomial>> decomposition;
  const int K = cfg.K;
  Exponents kappa(static_cast<std::size_t>(s), 0);
  while (true) {
    int order = 0;
    for (int e : kappa) order += e;
    if (order > 0) decomposition.emplace(kappa, derivative_decomposition(F, kappa).g);
    int i = 0;
    while (i < s && ++kappa[static_cast<std::size_t>(i)] > K) kappa[static_cast<std::size_t>(i++)] = 0;
    if (i == s) break;
  }
  auto g = [&](std::span<const double> x, std::span<const int> k) -> std::complex<double> {
    const double phase = gamma * F.polynomial().evaluate(x);
    const std::complex<double> base = std::polar(1.0, two_pi * phase);
    const Exponents key(k.begin(), k.end());
    bool zero = true;
    for (int e : key) zero = zero && e == 0;
    if (zero) return base;
    const auto& terms = decomposition.at(key);
    std::complex<double> acc = 0.0;
    std::complex<double> factor = 1.0;
    for (const auto& ga : terms) {
      factor *= std::complex<double>(0.0, two_pi * gamma);
      acc += factor * ga.evaluate(x);
    }
    return acc * base;
  };
  const EMResult em = em_sum_multi(g, scaled, K, cfg.quad);
  const std::complex<double> direct = lattice_exponential_sum(F, *cfg.box, cfg.P, 0, 0, 1, gamma, cfg.count.budget);
  TaskOutput out{header(cfg), csv_row({"quantity", "value_re", "value_im"})};
  out.json["result"] = {{"direct", to_json(direct)},
                        {"euler_maclaurin", to_json(em.value)},
                        {"difference", std::abs(direct - em.value)},
                        {"error_estimate", em.error_estimate}};
  out.csv += csv_row({"direct", fd(direct.real()), fd(direct.imag())});
  out.csv += csv_row({"euler_maclaurin", fd(em.value.real()), fd(em.value.imag())});
  out.csv += csv_row({"difference", fd(std::abs(direct - em.value)), "0"});
  out.csv += csv_row({"error_estimate", fd(em.error_estimate), "0"});
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TaskOutput execute_task(const RunConfig& cfg) {
  if (cfg.task == "count") return task_count(cfg);
  if (cfg.task == "series") return task_series(cfg);
  if (cfg.task == "integral") return task_integral(cfg);
  if (cfg.task == "expand") return task_expand(cfg);
  if (cfg.task == "compare") return task_compare(cfg);
  if (cfg.task == "waring") return task_waring(cfg);
  if (cfg.task == "mobius") return task_mobius(cfg);
  if (cfg.task == "em-check") return task_em_check(cfg);
  throw ConfigError("unknown task '" + cfg.task + "'");
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"circlekit: multi-term circle-method expansions of lattice-point counts"};
  std::string task, config_path, out_dir = ".";
  int threads = 0;
  app.add_option("task", task, "one of count, series, integral, expand, compare, waring, mobius, em-check")->required();
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out-dir", out_dir, "directory for <task>.json and <task>.csv");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const RunConfig cfg = parse_config(read_file(config_path), task);
    int workers = threads;
    if (workers <= 0 && std::getenv("CIRCLEKIT_THREADS") == nullptr && cfg.threads > 0) workers = cfg.threads;
    if (workers > 0) set_default_threads(workers);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const std::string hash = config_hash(cfg);
    const fs::path cache_file = dir / ".cache" / (hash + ".json");
    std::string json_text, csv_text;
    bool hit = false;
    if (cfg.use_cache && fs::exists(cache_file)) {
      try {
        const Json cached = Json::parse(read_file(cache_file));
        json_text = cached.at("json").get<std::string>();
        csv_text = cached.at("csv").get<std::string>();
        hit = true;
      } catch (const std::exception&) {
        err << "warning: ignoring unreadable cache entry " << cache_file.string() << '\n';
      }
    }
    if (hit) {
      err << "cache hit: " << hash << " (" << cache_file.string() << ")\n";
    } else {
      const TaskOutput result = execute_task(cfg);
      json_text = result.json.dump(2) + "\n";
      csv_text = result.csv;
      if (cfg.use_cache) {
        fs::create_directories(cache_file.parent_path());
        write_file(cache_file, Json{{"json", json_text}, {"csv", csv_text}}.dump() + "\n");
        err << "cache miss: " << hash << " (stored)\n";
      }
    }
    write_file(dir / (task + ".json"), json_text);
    write_file(dir / (task + ".csv"), csv_text);
    out << (dir / (task + ".csv")).string() << '\n';
    return kExitOk;
  } catch (const ConvergenceError& e) {
    err << "non-convergence: " << e.what() << " (best estimate " << format_double(e.best_estimate())
        << ", achieved error " << format_double(e.achieved_error()) << ")\n";
    return kExitConvergence;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace circlekit
