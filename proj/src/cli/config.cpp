#include "circlekit/cli/config.hpp"

#include <algorithm>
#include <cstdio>

#include "circlekit/errors.hpp"

namespace circlekit {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const Json* child(const Json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string join(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

long long get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

double get_number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

Rational get_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  if (!j.is_string()) fail(path, "expected a rational as a quoted \"p/q\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

Integer get_integer(const Json& j, const std::string& path) {
  const Rational x = get_rational(j, path);
  if (x.get_den() != 1) fail(path, "expected an integer");
  return x.get_num();
}

std::vector<int> get_int_list(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(static_cast<int>(get_int(j[i], join(path, i))));
  return out;
}

HomogeneousForm parse_form(const Json& j, const std::string& path, RunConfig& cfg) {
  if (j.is_object()) {
    const Json* diag = child(j, "diagonal");
    if (!diag) fail(path, "expected a monomial list or {\"diagonal\": {\"d\":..., \"s\":...}}");
    const std::string dp = join(path, "diagonal");
    const Json* d = child(*diag, "d");
    const Json* s = child(*diag, "s");
    if (!d || !s) fail(dp, "diagonal shortcut needs both d and s");
    const long long dv = get_int(*d, join(dp, "d"));
    const long long sv = get_int(*s, join(dp, "s"));
    if (dv < 1) fail(join(dp, "d"), "degree must be positive");
    if (sv < 1) fail(join(dp, "s"), "number of variables must be positive");
    auto [F, meta] = diagonal_form(static_cast<int>(dv), static_cast<int>(sv));
    cfg.meta = meta;
    return F;
  }
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty monomial list");
  std::vector<FormMonomial> monos;
  std::size_t s = 0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string mp = join(path, i);
    const Json& m = j[i];
    if (!m.is_object()) fail(mp, "expected {\"exponents\": [...], \"coefficient\": ...}");
    const Json* e = child(m, "exponents");
    const Json* c = child(m, "coefficient");
    if (!e) fail(mp, "missing exponents");
    if (!c) fail(mp, "missing coefficient");
    FormMonomial mono;
    for (int x : get_int_list(*e, join(mp, "exponents"))) {
      if (x < 0) fail(join(mp, "exponents"), "exponents must be non-negative");
      mono.exponents.push_back(x);
    }
    if (i == 0) s = mono.exponents.size();
    if (mono.exponents.size() != s) fail(join(mp, "exponents"), "all monomials need the same number of variables");
    mono.coefficient = get_integer(*c, join(mp, "coefficient"));
    monos.push_back(std::move(mono));
  }
  try {
    return HomogeneousForm::from_monomials(static_cast<int>(s), monos);
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

Box parse_box(const Json& j, const std::string& path, int s) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "unit") return unit_box(s);
    if (name == "symmetric") return symmetric_box(s);
    fail(path, "expected \"unit\", \"symmetric\" or {\"a\": [...], \"b\": [...]}");
  }
  if (!j.is_object()) fail(path, "expected {\"a\": [...], \"b\": [...]}");
  Box box;
  for (const char* side : {"a", "b"}) {
    const Json* v = child(j, side);
    const std::string sp = join(path, side);
    if (!v) fail(sp, "missing");
    if (!v->is_array()) fail(sp, "expected an array of rationals");
    if (static_cast<int>(v->size()) != s) fail(sp, "expected " + std::to_string(s) + " entries");
    auto& dst = side[0] == 'a' ? box.a : box.b;
    for (std::size_t i = 0; i < v->size(); ++i) dst.push_back(get_rational((*v)[i], join(sp, i)));
  }
  for (std::size_t i = 0; i < box.a.size(); ++i) {
    if (!(box.a[i] < box.b[i])) fail(join(join(path, "a"), i), "a[i] must be smaller than b[i]");
  }
  try {
    validate(box);
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  return box;
}

IndexTuple parse_tuple(const Json& j, const std::string& path, int s) {
  if (!j.is_object()) fail(path, "expected {\"I1\": [...], \"I2\": [...], \"tau\": [...]}");
  std::vector<int> I1, I2, tau;
  if (const Json* v = child(j, "I1")) I1 = get_int_list(*v, join(path, "I1"));
  if (const Json* v = child(j, "I2")) I2 = get_int_list(*v, join(path, "I2"));
  if (const Json* v = child(j, "tau")) tau = get_int_list(*v, join(path, "tau"));
  for (auto* list : {&I1, &I2}) {
    for (int& i : *list) {
      if (i < 1 || i > s) fail(path, "indices are 1-based and must lie in 1.." + std::to_string(s));
      --i;
    }
    std::sort(list->begin(), list->end());
  }
  try {
    return make_tuple(s, I1, I2, tau);
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

void parse_quadrature(const Json& j, const std::string& path, QuadratureSpec& q) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string kp = join(path, it.key());
    if (it.key() == "base_order") q.base_order = static_cast<int>(get_int(*it, kp));
    else if (it.key() == "panels_per_unit_frequency") q.panels_per_unit_frequency = get_number(*it, kp);
    else if (it.key() == "gamma_panels") q.gamma_panels = static_cast<int>(get_int(*it, kp));
    else if (it.key() == "abs_tol") q.abs_tol = get_number(*it, kp);
    else if (it.key() == "rel_tol") q.rel_tol = get_number(*it, kp);
    else if (it.key() == "max_refinements") q.max_refinements = static_cast<int>(get_int(*it, kp));
    else fail(kp, "unknown quadrature key");
  }
  try {
    validate(q);
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

void parse_budgets(const Json& j, const std::string& path, RunConfig& cfg) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string kp = join(path, it.key());
    const double v = get_number(*it, kp);
    if (!(v > 0)) fail(kp, "budget must be positive");
    if (it.key() == "series") cfg.series.budget = v;
    else if (it.key() == "count") cfg.count.budget = v;
    else if (it.key() == "integral_nodes") cfg.integral.node_budget = v;
    else fail(kp, "unknown budget (series, count, integral_nodes)");
  }
}

void parse_waring(const Json& j, const std::string& path, WaringParams& w) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string kp = join(path, it.key());
    if (it.key() == "q") w.q = get_int(*it, kp);
    else if (it.key() == "a") w.a = get_int(*it, kp);
    else if (it.key() == "d") w.d = static_cast<int>(get_int(*it, kp));
    else if (it.key() == "s") w.s = static_cast<int>(get_int(*it, kp));
    else if (it.key() == "j") w.j = static_cast<int>(get_int(*it, kp));
    else if (it.key() == "n") w.n = get_integer(*it, kp);
    else if (it.key() == "Q") w.Q = static_cast<int>(get_int(*it, kp));
    else fail(kp, "unknown waring key");
  }
  if (w.q < 1) fail(join(path, "q"), "q must be positive");
  if (w.d < 2) fail(join(path, "d"), "d must be at least 2");
  if (w.s < 1) fail(join(path, "s"), "s must be positive");
  if (w.j < 0 || w.j > w.s) fail(join(path, "j"), "j must lie in 0..s");
  if (w.Q < 1) fail(join(path, "Q"), "Q must be positive");
}

bool needs_form(const std::string& task) { return task != "waring"; }

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& task) {
  RunConfig cfg;
  if (std::find(known_tasks().begin(), known_tasks().end(), task) == known_tasks().end()) {
    throw ConfigError("unknown task '" + task + "'");
  }
  cfg.task = task;
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  if (!root.is_object()) fail("", "top level must be an object");

  static const std::vector<std::string> keys{
      "task",   "form",     "box",       "sigma",      "P",        "P_grid",     "n",
      "n_scale", "K",       "K_list",    "Q_series",   "Q_integral", "tuple",
      "gamma",    "waring",    "quadrature", "budgets",  "threads",    "skip_on_failure",
      "attach_exact", "cache", "conjugate_symmetry", "early_rejection", "tolerance"};
  for (auto it = root.begin(); it != root.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) fail("/" + it.key(), "unknown key");
  }

  if (const Json* t = child(root, "task")) {
    if (!t->is_string() || t->get<std::string>() != task) fail("/task", "does not match the requested task '" + task + "'");
  }
  if (const Json* f = child(root, "form")) {
    cfg.form = parse_form(*f, "/form", cfg);
  } else if (needs_form(task)) {
    fail("/form", "missing");
  }
  const int s = cfg.form ? cfg.form->s() : 0;
  if (const Json* v = child(root, "sigma")) {
    const long long sigma = get_int(*v, "/sigma");
    if (sigma < -1 || (cfg.form && sigma >= s)) fail("/sigma", "must lie in 0..s-1 (or -1 for unknown)");
    cfg.meta.singular_locus_dim = static_cast<int>(sigma);
  }
  if (const Json* v = child(root, "box")) {
    if (!cfg.form) fail("/box", "a box needs a form");
    cfg.box = parse_box(*v, "/box", s);
  } else if (cfg.form) {
    cfg.box = unit_box(s);
  }
  if (const Json* v = child(root, "P")) {
    cfg.P = get_rational(*v, "/P");
    if (!(cfg.P > 0)) fail("/P", "P must be positive");
  }
  if (const Json* v = child(root, "P_grid")) {
    if (!v->is_array() || v->empty()) fail("/P_grid", "expected a non-empty array of rationals");
    for (std::size_t i = 0; i < v->size(); ++i) {
      cfg.P_grid.push_back(get_rational((*v)[i], join("/P_grid", i)));
      if (!(cfg.P_grid.back() > 0)) fail(join("/P_grid", i), "P must be positive");
    }
  }
  if (const Json* v = child(root, "n")) cfg.n = get_integer(*v, "/n");
  if (const Json* v = child(root, "n_scale")) cfg.n_scale = get_rational(*v, "/n_scale");
  if (const Json* v = child(root, "K")) {
    cfg.K = static_cast<int>(get_int(*v, "/K"));
    if (cfg.K < 1) fail("/K", "K must be at least 1");
  }
  if (const Json* v = child(root, "K_list")) {
    cfg.K_list = get_int_list(*v, "/K_list");
    for (std::size_t i = 0; i < cfg.K_list.size(); ++i) {
      if (cfg.K_list[i] < 1) fail(join("/K_list", i), "K must be at least 1");
    }
  }
  if (const Json* v = child(root, "Q_series")) {
    cfg.Q_series = static_cast<int>(get_int(*v, "/Q_series"));
    if (cfg.Q_series < 1) fail("/Q_series", "must be positive");
  }
  if (const Json* v = child(root, "Q_integral")) {
    cfg.Q_integral = get_number(*v, "/Q_integral");
    if (!(cfg.Q_integral > 0)) fail("/Q_integral", "must be positive");
  }
  if (const Json* v = child(root, "tuple")) {
    if (!cfg.form) fail("/tuple", "a tuple needs a form");
    cfg.tuple = parse_tuple(*v, "/tuple", s);
  }
  if (const Json* v = child(root, "gamma")) cfg.gamma = get_number(*v, "/gamma");
  if (const Json* v = child(root, "waring")) parse_waring(*v, "/waring", cfg.waring);
  if (const Json* v = child(root, "quadrature")) parse_quadrature(*v, "/quadrature", cfg.quad);
  if (const Json* v = child(root, "budgets")) parse_budgets(*v, "/budgets", cfg);
  if (const Json* v = child(root, "tolerance")) {
    cfg.series.tolerance = get_number(*v, "/tolerance");
    if (!(cfg.series.tolerance > 0)) fail("/tolerance", "must be positive");
  }
  if (const Json* v = child(root, "threads")) {
    cfg.threads = static_cast<int>(get_int(*v, "/threads"));
    if (cfg.threads < 1) fail("/threads", "must be at least 1");
  }
  if (const Json* v = child(root, "skip_on_failure")) cfg.skip_on_failure = get_bool(*v, "/skip_on_failure");
  if (const Json* v = child(root, "attach_exact")) cfg.attach_exact = get_bool(*v, "/attach_exact");
  if (const Json* v = child(root, "cache")) cfg.use_cache = get_bool(*v, "/cache");
  if (const Json* v = child(root, "conjugate_symmetry")) cfg.integral.use_conjugate_symmetry = get_bool(*v, "/conjugate_symmetry");
  if (const Json* v = child(root, "early_rejection")) cfg.count.early_rejection = get_bool(*v, "/early_rejection");

  if (task == "compare" && cfg.P_grid.empty()) fail("/P_grid", "task compare needs P_grid");
  if (task == "compare" && cfg.K_list.empty()) cfg.K_list = {cfg.K};
  if ((task == "series" || task == "integral" || task == "em-check") && !cfg.tuple) {
    cfg.tuple = make_tuple(s, {}, {});
  }
  if (task == "em-check" && s > 3) fail("/form", "em-check supports at most 3 variables");
  if (cfg.n_scale && cfg.form) {
    for (const auto& P : cfg.P_grid.empty() ? std::vector<Rational>{cfg.P} : cfg.P_grid) {
      Rational v = *cfg.n_scale * rational_pow(P, static_cast<unsigned>(cfg.form->d()));
      v.canonicalize();
      if (v.get_den() != 1) fail("/n_scale", "n_scale * P^d must be an integer for P = " + to_string(P));
    }
  }

  cfg.canonical = root;
  cfg.canonical.erase("threads");
  cfg.canonical["task"] = task;
  return cfg;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = cfg.canonical.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Integer resolve_n(const RunConfig& cfg, const Rational& P) {
  if (!cfg.n_scale) return cfg.n;
  Rational v = *cfg.n_scale * rational_pow(P, static_cast<unsigned>(cfg.form->d()));
  v.canonicalize();
  return v.get_num();
}

}  // namespace circlekit
